#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "life/corpus.hpp"
#include "life/textproc.hpp"

namespace life {

class AnchorClassifier {
public:
    virtual ~AnchorClassifier() = default;
    virtual std::string descriptor() const = 0;
    // Probability that `text` is fake, in [0,1]. Deterministic.
    virtual double predict_fake_prob(const std::string& text) const = 0;
};

struct AnchorFitConfig {
    std::size_t bucket_bits = 18;  // 2^18 hashed feature buckets
    double lr = 0.02;
    std::size_t epochs = 30;
    double l2 = 1e-6;
    uint64_t seed = 0;
};

// Logistic regression over hashed unigram + bigram counts of lowercased
// word tokens. Deterministic SGD in sorted-id order.
class HashedLinearClassifier : public AnchorClassifier {
public:
    static HashedLinearClassifier fit(const std::vector<NewsArticle>& train,
                                      const AnchorFitConfig& cfg = {});

    std::string descriptor() const override;
    double predict_fake_prob(const std::string& text) const override;

    const std::vector<double>& weights() const { return weights_; }

private:
    HashedLinearClassifier() = default;
    std::size_t bucket_bits_ = 18;
    std::vector<double> weights_;  // 2^bucket_bits + 1 (bias last)
    uint64_t seed_ = 0;

    std::vector<std::pair<std::size_t, double>> features(const std::string& text) const;
};

struct HttpClassifierConfig {
    std::string endpoint;
    int timeout_seconds = 30;
    int retries = 2;
};

// Remote anchor speaking POST /v1/classify {"text"} -> {"prob_fake"}.
class HttpClassifier : public AnchorClassifier {
public:
    explicit HttpClassifier(HttpClassifierConfig cfg);
    std::string descriptor() const override { return "http:" + cfg_.endpoint; }
    double predict_fake_prob(const std::string& text) const override;

private:
    HttpClassifierConfig cfg_;
};

struct MaskedScores {
    double anchor = 0.0;
    std::vector<double> masked;  // one per sentence
};

// n+1 classifier calls: the article once, each single-sentence mask once.
MaskedScores masked_scores(const AnchorClassifier& clf, const NewsArticle& article,
                           const std::vector<SentenceSpan>& spans);

enum class DeltaMode { Abs, Signed };

struct FragmentSelection {
    std::string article_id;
    int k = 0;
    // (sentence index, selection delta), ordered by document position.
    std::vector<std::pair<std::size_t, double>> selected;
    double anchor_prob = 0.0;
};

// Ranks sentences by anchor-vs-masked delta (absolute by default), ties by
// lower index, keeps min(k, n), and re-orders the winners by position.
FragmentSelection select_topk(const std::string& article_id, double anchor,
                              const std::vector<double>& masked, int k,
                              DeltaMode mode = DeltaMode::Abs);

}  // namespace life
