#include "life/fragments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace life {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

}  // namespace

std::vector<std::pair<std::size_t, double>> HashedLinearClassifier::features(
    const std::string& text) const {
    std::vector<std::string> toks = tokenize_words(text);
    for (auto& t : toks) t = lower(t);
    const std::size_t buckets = std::size_t{1} << bucket_bits_;
    std::unordered_map<std::size_t, double> counts;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        counts[fnv1a(toks[i]) & (buckets - 1)] += 1.0;
        if (i + 1 < toks.size())
            counts[fnv1a(toks[i] + " " + toks[i + 1]) & (buckets - 1)] += 1.0;
    }
    // Raw counts, deliberately unnormalized: the margin is then additive over
    // sentences, so masking one sentence shifts the prediction by exactly that
    // sentence's own contribution (no length-renormalization crosstalk).
    std::vector<std::pair<std::size_t, double>> feats(counts.begin(), counts.end());
    std::sort(feats.begin(), feats.end());
    return feats;
}

HashedLinearClassifier HashedLinearClassifier::fit(const std::vector<NewsArticle>& train,
                                                   const AnchorFitConfig& cfg) {
    bool has_real = false, has_fake = false;
    for (const auto& a : train) (a.label == Label::Fake ? has_fake : has_real) = true;
    if (!has_real || !has_fake)
        throw std::runtime_error("anchor training set must contain both labels");

    HashedLinearClassifier clf;
    clf.bucket_bits_ = cfg.bucket_bits;
    clf.seed_ = cfg.seed;
    clf.weights_.assign((std::size_t{1} << cfg.bucket_bits) + 1, 0.0);

    std::vector<const NewsArticle*> order;
    for (const auto& a : train) order.push_back(&a);
    std::sort(order.begin(), order.end(),
              [](const NewsArticle* a, const NewsArticle* b) { return a->id < b->id; });

    std::vector<std::vector<std::pair<std::size_t, double>>> feats;
    std::vector<double> labels;
    feats.reserve(order.size());
    for (const auto* a : order) {
        feats.push_back(clf.features(a->title + "\n\n" + a->text));
        labels.push_back(a->label == Label::Fake ? 1.0 : 0.0);
    }

    const std::size_t bias = clf.weights_.size() - 1;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double lr = cfg.lr / (1.0 + 0.1 * static_cast<double>(epoch));
        for (std::size_t n = 0; n < feats.size(); ++n) {
            double z = clf.weights_[bias];
            for (const auto& [idx, v] : feats[n]) z += clf.weights_[idx] * v;
            double err = sigmoid(z) - labels[n];
            for (const auto& [idx, v] : feats[n])
                clf.weights_[idx] -= lr * (err * v + cfg.l2 * clf.weights_[idx]);
            clf.weights_[bias] -= lr * err;
        }
    }
    return clf;
}

std::string HashedLinearClassifier::descriptor() const {
    return "hashed-linear/bits=" + std::to_string(bucket_bits_) +
           "/seed=" + std::to_string(seed_);
}

double HashedLinearClassifier::predict_fake_prob(const std::string& text) const {
    if (weights_.empty()) throw std::runtime_error("classifier is not fitted");
    double z = weights_.back();
    for (const auto& [idx, v] : features(text)) z += weights_[idx] * v;
    return sigmoid(z);
}

MaskedScores masked_scores(const AnchorClassifier& clf, const NewsArticle& article,
                           const std::vector<SentenceSpan>& spans) {
    if (spans.empty()) throw std::runtime_error("article has no sentences");
    MaskedScores out;
    out.anchor = clf.predict_fake_prob(article.title + "\n\n" + article.text);
    out.masked.reserve(spans.size());
    for (std::size_t i = 0; i < spans.size(); ++i) {
        MaskedVariant v = mask_sentence(article.text, spans, i);
        out.masked.push_back(clf.predict_fake_prob(article.title + "\n\n" + v.text));
    }
    return out;
}

FragmentSelection select_topk(const std::string& article_id, double anchor,
                              const std::vector<double>& masked, int k,
                              DeltaMode mode) {
    if (k < 1) throw std::runtime_error("k must be >= 1");
    const std::size_t n = masked.size();
    std::vector<double> delta(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d = anchor - masked[i];
        delta[i] = mode == DeltaMode::Abs ? std::fabs(d) : d;
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (delta[a] != delta[b]) return delta[a] > delta[b];
        return a < b;
    });
    std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(k), n);
    idx.resize(keep);
    std::sort(idx.begin(), idx.end());

    FragmentSelection sel;
    sel.article_id = article_id;
    sel.k = k;
    sel.anchor_prob = anchor;
    for (std::size_t i : idx) sel.selected.emplace_back(i, delta[i]);
    return sel;
}

}  // namespace life
