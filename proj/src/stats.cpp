#include "life/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace life {

ArticleScore mean_neg_log_prob(const std::string& article_id,
                               const std::vector<WordProbSeq>& seqs) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& seq : seqs) {
        for (const auto& w : seq.words) {
            sum += -w.logprob;
            ++n;
        }
    }
    if (n == 0) throw std::runtime_error("no words to score for article " + article_id);
    ArticleScore s;
    s.article_id = article_id;
    s.mean_neg_log_prob = sum / static_cast<double>(n);
    s.word_count = n;
    if (!seqs.empty()) {
        s.prompt_id = seqs.front().prompt_id;
        s.backend_id = seqs.front().backend_id;
    }
    return s;
}

PairDifference pair_difference(const ArticleScore& real_score,
                               const ArticleScore& fake_score) {
    if (real_score.prompt_id != fake_score.prompt_id ||
        real_score.backend_id != fake_score.backend_id)
        throw std::runtime_error("pair scores come from different prompts/backends: " +
                                 real_score.article_id + " vs " + fake_score.article_id);
    return PairDifference{real_score.article_id, fake_score.article_id,
                          real_score.mean_neg_log_prob - fake_score.mean_neg_log_prob};
}

namespace {

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

WilcoxonReport wilcoxon_signed_rank(const std::vector<double>& differences,
                                    std::size_t exact_threshold) {
    std::vector<double> d;
    for (double x : differences)
        if (x != 0.0) d.push_back(x);
    if (d.empty()) throw std::runtime_error("all differences are zero");

    const std::size_t n = d.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::fabs(d[a]) < std::fabs(d[b]);
    });

    // Average ranks are multiples of 1/2; carry 2*rank as integers so the
    // exact enumeration is free of floating-point summation order effects.
    std::vector<long long> rank2(n, 0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && std::fabs(d[order[j]]) == std::fabs(d[order[i]])) ++j;
        long long avg2 = static_cast<long long>(i + 1 + j);  // 2 * (i+1 + j) / 2
        for (std::size_t k = i; k < j; ++k) rank2[order[k]] = avg2;
        i = j;
    }

    long long w2 = 0, total2 = 0;
    for (std::size_t k = 0; k < n; ++k) {
        total2 += rank2[k];
        if (d[k] > 0.0) w2 += rank2[k];
    }

    WilcoxonReport rep;
    rep.n_effective = n;
    rep.statistic = static_cast<double>(w2) / 2.0;

    if (n <= exact_threshold && n < 63) {
        rep.method = WilcoxonMethod::Exact;
        // Two-sided p: fraction of sign assignments at least as far from the
        // null mean as the observed statistic.
        const long long mu4 = total2;  // 4 * mean = 2 * total(rank2) / ... (2W vs total2)
        const long long obs_dev = std::llabs(2 * w2 - mu4);
        const uint64_t assignments = uint64_t{1} << n;
        uint64_t count = 0;
        for (uint64_t s = 0; s < assignments; ++s) {
            long long w = 0;
            uint64_t bits = s;
            while (bits) {
                int b = __builtin_ctzll(bits);
                w += rank2[b];
                bits &= bits - 1;
            }
            if (std::llabs(2 * w - mu4) >= obs_dev) ++count;
        }
        rep.p_value = static_cast<double>(count) / static_cast<double>(assignments);
    } else {
        rep.method = WilcoxonMethod::NormalApprox;
        double nn = static_cast<double>(n);
        double mu = nn * (nn + 1.0) / 4.0;
        double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
        // Tie correction: subtract sum(t^3 - t)/48 over tie groups of |d|.
        std::map<double, std::size_t> groups;
        for (std::size_t k = 0; k < n; ++k) groups[std::fabs(d[k])] += 1;
        for (const auto& [v, t] : groups) {
            double tt = static_cast<double>(t);
            var -= (tt * tt * tt - tt) / 48.0;
        }
        double w = rep.statistic;
        double z = (std::fabs(w - mu) - 0.5) / std::sqrt(var);
        if (z < 0.0) z = 0.0;
        rep.p_value = std::min(1.0, 2.0 * normal_sf(z));
    }
    return rep;
}

SignificanceSummary significance_ratio(const std::vector<double>& p_values,
                                       double alpha) {
    if (p_values.empty()) throw std::runtime_error("no p-values to summarize");
    SignificanceSummary s;
    for (double p : p_values) (p < alpha ? s.significant : s.insignificant) += 1;
    s.ratio = static_cast<double>(s.significant) / static_cast<double>(p_values.size());
    return s;
}

SignificanceSummary significance_ratio(std::size_t significant, std::size_t total) {
    if (total == 0) throw std::runtime_error("empty total");
    if (significant > total) throw std::runtime_error("significant > total");
    SignificanceSummary s;
    s.significant = significant;
    s.insignificant = total - significant;
    s.ratio = static_cast<double>(significant) / static_cast<double>(total);
    return s;
}

double quantile_type7(const std::vector<double>& sorted_values, double q) {
    if (sorted_values.empty()) throw std::runtime_error("quantile of empty data");
    if (q <= 0.0) return sorted_values.front();
    if (q >= 1.0) return sorted_values.back();
    double h = (static_cast<double>(sorted_values.size()) - 1.0) * q;
    std::size_t lo = static_cast<std::size_t>(std::floor(h));
    std::size_t hi = std::min(lo + 1, sorted_values.size() - 1);
    double frac = h - static_cast<double>(lo);
    return sorted_values[lo] + frac * (sorted_values[hi] - sorted_values[lo]);
}

BoxplotSummary boxplot_summary(const std::string& label, std::vector<double> values) {
    if (values.empty()) throw std::runtime_error("empty label class: " + label);
    std::sort(values.begin(), values.end());
    BoxplotSummary b;
    b.label = label;
    b.min = values.front();
    b.max = values.back();
    b.q1 = quantile_type7(values, 0.25);
    b.median = quantile_type7(values, 0.5);
    b.q3 = quantile_type7(values, 0.75);
    double iqr = b.q3 - b.q1;
    double fence_lo = b.q1 - 1.5 * iqr;
    double fence_hi = b.q3 + 1.5 * iqr;
    b.whisker_lo = b.max;
    b.whisker_hi = b.min;
    for (double v : values) {
        if (v >= fence_lo && v < b.whisker_lo) b.whisker_lo = v;
        if (v <= fence_hi && v > b.whisker_hi) b.whisker_hi = v;
        if (v < fence_lo || v > fence_hi) b.outlier_count += 1;
    }
    return b;
}

std::vector<HistogramRow> histogram_rows(const std::vector<double>& real_scores,
                                         const std::vector<double>& fake_scores,
                                         std::size_t bins) {
    if (bins < 1) throw std::runtime_error("bins must be >= 1");
    if (real_scores.empty()) throw std::runtime_error("empty label class: real");
    if (fake_scores.empty()) throw std::runtime_error("empty label class: fake");
    double lo = real_scores.front(), hi = real_scores.front();
    for (const auto* v : {&real_scores, &fake_scores})
        for (double x : *v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    if (hi == lo) hi = lo + 1.0;  // degenerate: put all mass in one bin
    double width = (hi - lo) / static_cast<double>(bins);

    std::vector<HistogramRow> rows(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        rows[b].bin_lo = lo + width * static_cast<double>(b);
        rows[b].bin_hi = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
    }
    auto place = [&](double x) {
        std::size_t b = static_cast<std::size_t>((x - lo) / width);
        return std::min(b, bins - 1);
    };
    for (double x : real_scores) rows[place(x)].count_real += 1;
    for (double x : fake_scores) rows[place(x)].count_fake += 1;
    return rows;
}

}  // namespace life
