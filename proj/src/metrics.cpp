#include "life/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "life/textproc.hpp"

namespace life {

EvalReport compute_metrics(const std::vector<int>& preds,
                           const std::vector<int>& labels) {
    if (preds.size() != labels.size() || preds.empty())
        throw std::runtime_error("preds/labels must be equal-length and non-empty");
    EvalReport r;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] == 1 && labels[i] == 1) r.tp++;
        else if (preds[i] == 1 && labels[i] == 0) r.fp++;
        else if (preds[i] == 0 && labels[i] == 1) r.fn++;
        else r.tn++;
    }
    double total = static_cast<double>(preds.size());
    r.accuracy = static_cast<double>(r.tp + r.tn) / total;
    r.precision = r.tp + r.fp > 0
                      ? static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp)
                      : 0.0;
    r.recall = r.tp + r.fn > 0
                   ? static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn)
                   : 0.0;
    r.f1 = r.precision + r.recall > 0.0
               ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
    return r;
}

std::string variant_name(AblationVariant v) {
    switch (v) {
        case AblationVariant::Full: return "Full";
        case AblationVariant::NoMP: return "NoMP";
        case AblationVariant::NoKF: return "NoKF";
        case AblationVariant::NoCNN: return "NoCNN";
        case AblationVariant::NoTRM: return "NoTRM";
    }
    return "?";
}

AblationVariant variant_from_name(const std::string& name) {
    if (name == "Full" || name == "full") return AblationVariant::Full;
    if (name == "NoMP" || name == "nomp") return AblationVariant::NoMP;
    if (name == "NoKF" || name == "nokf") return AblationVariant::NoKF;
    if (name == "NoCNN" || name == "nocnn") return AblationVariant::NoCNN;
    if (name == "NoTRM" || name == "notrm") return AblationVariant::NoTRM;
    throw std::runtime_error("unknown ablation variant: " + name);
}

const std::vector<std::string>& stopword_list() {
    static const std::vector<std::string> words = {
        "a", "about", "above", "after", "again", "against", "all", "am", "an",
        "and", "any", "are", "aren't", "as", "at", "be", "because", "been",
        "before", "being", "below", "between", "both", "but", "by", "can",
        "can't", "cannot", "could", "couldn't", "did", "didn't", "do", "does",
        "doesn't", "doing", "don't", "down", "during", "each", "few", "for",
        "from", "further", "had", "hadn't", "has", "hasn't", "have", "haven't",
        "having", "he", "he'd", "he'll", "he's", "her", "here", "here's",
        "hers", "herself", "him", "himself", "his", "how", "how's", "i", "i'd",
        "i'll", "i'm", "i've", "if", "in", "into", "is", "isn't", "it", "it's",
        "its", "itself", "let's", "me", "more", "most", "mustn't", "my",
        "myself", "no", "nor", "not", "of", "off", "on", "once", "only", "or",
        "other", "ought", "our", "ours", "ourselves", "out", "over", "own",
        "same", "shan't", "she", "she'd", "she'll", "she's", "should",
        "shouldn't", "so", "some", "such", "than", "that", "that's", "the",
        "their", "theirs", "them", "themselves", "then", "there", "there's",
        "these", "they", "they'd", "they'll", "they're", "they've", "this",
        "those", "through", "to", "too", "under", "until", "up", "very", "was",
        "wasn't", "we", "we'd", "we'll", "we're", "we've", "were", "weren't",
        "what", "what's", "when", "when's", "where", "where's", "which",
        "while", "who", "who's", "whom", "why", "why's", "with", "won't",
        "would", "wouldn't", "you", "you'd", "you'll", "you're", "you've",
        "your", "yours", "yourself", "yourselves",
    };
    return words;
}

WordFrequencyResult word_frequency(const std::vector<FragmentSelection>& selections,
                                   const std::vector<NewsArticle>& articles,
                                   const std::vector<std::string>& stopwords,
                                   std::size_t top_n) {
    if (selections.empty()) throw std::runtime_error("no fragment selections");
    std::unordered_map<std::string, const NewsArticle*> by_id;
    for (const auto& a : articles) by_id[a.id] = &a;
    std::unordered_set<std::string> stop(stopwords.begin(), stopwords.end());

    std::map<std::string, std::size_t> counts_real, counts_fake;
    for (const auto& sel : selections) {
        auto it = by_id.find(sel.article_id);
        if (it == by_id.end())
            throw std::runtime_error("selection references unknown article " +
                                     sel.article_id);
        const NewsArticle& a = *it->second;
        auto spans = split_sentences(a.text);
        auto& counts = a.label == Label::Fake ? counts_fake : counts_real;
        for (const auto& [idx, delta] : sel.selected) {
            if (idx >= spans.size()) continue;
            for (const auto& w : spans[idx].words) {
                bool alpha = std::any_of(w.begin(), w.end(), [](unsigned char c) {
                    return std::isalnum(c) != 0;
                });
                if (!alpha) continue;  // punctuation token
                std::string lw = w;
                std::transform(lw.begin(), lw.end(), lw.begin(),
                               [](unsigned char c) { return std::tolower(c); });
                if (stop.count(lw)) continue;
                counts[lw] += 1;
            }
        }
    }

    auto rank = [top_n](const std::map<std::string, std::size_t>& counts) {
        std::vector<WordCount> out;
        for (const auto& [w, c] : counts) out.push_back({w, c});
        std::sort(out.begin(), out.end(), [](const WordCount& a, const WordCount& b) {
            if (a.count != b.count) return a.count > b.count;
            return a.word < b.word;
        });
        if (top_n > 0 && out.size() > top_n) out.resize(top_n);
        return out;
    };
    return WordFrequencyResult{rank(counts_real), rank(counts_fake)};
}

}  // namespace life
