#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "life/corpus.hpp"
#include "life/fragments.hpp"

namespace life {

struct EvalReport {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    // bookkeeping
    std::string prompt;
    int k = 0;
    std::string variant;
    uint64_t seed = 0;
    std::string config_fingerprint;
};

// Binary metrics with fake (1) as the positive class. Undefined precision,
// recall, or f1 reports as 0.
EvalReport compute_metrics(const std::vector<int>& preds,
                           const std::vector<int>& labels);

enum class AblationVariant { Full, NoMP, NoKF, NoCNN, NoTRM };

std::string variant_name(AblationVariant v);
AblationVariant variant_from_name(const std::string& name);

// Fixed English stopword list used by the word-frequency analysis.
const std::vector<std::string>& stopword_list();

struct WordCount {
    std::string word;
    std::size_t count = 0;
};

// Counts lowercased non-stopword, non-punctuation words inside the selected
// sentences, per label; ranked by count descending with alphabetical
// tie-break. `top_n` = 0 keeps everything.
struct WordFrequencyResult {
    std::vector<WordCount> real;
    std::vector<WordCount> fake;
};
WordFrequencyResult word_frequency(const std::vector<FragmentSelection>& selections,
                                   const std::vector<NewsArticle>& articles,
                                   const std::vector<std::string>& stopwords,
                                   std::size_t top_n = 100);

}  // namespace life
