#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "life/scorer.hpp"

namespace life {

struct ArticleScore {
    std::string article_id;
    double mean_neg_log_prob = 0.0;  // nats
    std::size_t word_count = 0;
    PromptId prompt_id = PromptId::Neutral;
    std::string backend_id;
};

// Mean of -log p over all words of all given sequences (word-weighted, so
// sentence grouping does not matter). Throws if there are no words.
ArticleScore mean_neg_log_prob(const std::string& article_id,
                               const std::vector<WordProbSeq>& seqs);

struct PairDifference {
    std::string real_id;
    std::string fake_id;
    double d = 0.0;  // real score - fake score
};

// Throws if the two scores were produced under different prompts/backends.
PairDifference pair_difference(const ArticleScore& real_score,
                               const ArticleScore& fake_score);

enum class WilcoxonMethod { Exact, NormalApprox };

struct WilcoxonReport {
    std::size_t n_effective = 0;  // zeros dropped
    double statistic = 0.0;       // W = sum of positive-signed ranks
    double p_value = 1.0;         // two-sided
    WilcoxonMethod method = WilcoxonMethod::Exact;
};

// Classic signed-rank test: zeros dropped, average ranks on ties, exact p by
// full sign enumeration when n_effective <= exact_threshold, otherwise normal
// approximation with continuity and tie-variance corrections.
WilcoxonReport wilcoxon_signed_rank(const std::vector<double>& differences,
                                    std::size_t exact_threshold = 20);

struct SignificanceSummary {
    std::size_t significant = 0;
    std::size_t insignificant = 0;
    double ratio = 0.0;  // significant / total
};

SignificanceSummary significance_ratio(const std::vector<double>& p_values,
                                       double alpha = 0.05);
// Table-style variant from raw counts.
SignificanceSummary significance_ratio(std::size_t significant, std::size_t total);

struct HistogramRow {
    double bin_lo = 0.0;
    double bin_hi = 0.0;
    std::size_t count_real = 0;
    std::size_t count_fake = 0;
};

struct BoxplotSummary {
    std::string label;
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
    double whisker_lo = 0.0, whisker_hi = 0.0;  // 1.5 IQR fences clipped to data
    std::size_t outlier_count = 0;
};

// Type-7 (linear interpolation) quantile of sorted data.
double quantile_type7(const std::vector<double>& sorted_values, double q);

BoxplotSummary boxplot_summary(const std::string& label, std::vector<double> values);

// Shared bin edges over both label classes. Throws on bins < 1 or an empty
// label class.
std::vector<HistogramRow> histogram_rows(const std::vector<double>& real_scores,
                                         const std::vector<double>& fake_scores,
                                         std::size_t bins);

}  // namespace life
