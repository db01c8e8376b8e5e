// End-to-end acceptance checks. Each numbered check prints exactly one
// PASS/FAIL line; the process exits nonzero if any check fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "life/config.hpp"
#include "life/corpus.hpp"
#include "life/metrics.hpp"
#include "life/model.hpp"
#include "life/pipeline.hpp"
#include "life/stats.hpp"
#include "life/synth.hpp"

using namespace life;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %d. %s: %s\n", ok ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Independent Wilcoxon oracle: double-precision average ranks, exhaustive
// sign enumeration, two-sided tail count.
double oracle_exact_p(const std::vector<double>& diffs) {
    std::vector<double> abs;
    for (double d : diffs)
        if (d != 0.0) abs.push_back(std::fabs(d));
    const std::size_t n = abs.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return abs[a] < abs[b]; });
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && abs[order[j + 1]] == abs[order[i]]) ++j;
        double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }
    double total = 0.0;
    for (double r : rank) total += r;
    double w_obs = 0.0;
    std::size_t idx = 0;
    for (double d : diffs) {
        if (d == 0.0) continue;
        if (d > 0.0) w_obs += rank[idx];
        ++idx;
    }
    double dev_obs = std::fabs(w_obs - total / 2.0);
    std::size_t tail = 0;
    const std::size_t combos = std::size_t{1} << n;
    for (std::size_t mask = 0; mask < combos; ++mask) {
        double w = 0.0;
        for (std::size_t b = 0; b < n; ++b)
            if (mask & (std::size_t{1} << b)) w += rank[b];
        if (std::fabs(w - total / 2.0) >= dev_obs - 1e-12) ++tail;
    }
    return static_cast<double>(tail) / static_cast<double>(combos);
}

void check_wilcoxon_exactness() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<int> size_dist(1, 12);
    std::uniform_int_distribution<int> value_dist(-5, 5);
    int mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        int n = size_dist(rng);
        std::vector<double> diffs(n);
        bool any = false;
        for (auto& d : diffs) {
            d = static_cast<double>(value_dist(rng));
            any |= d != 0.0;
        }
        if (!any) diffs[0] = 1.0;
        if (wilcoxon_signed_rank(diffs).p_value != oracle_exact_p(diffs)) ++mismatches;
    }

    double worst_gap = 0.0;
    std::normal_distribution<double> noise(0.25, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> diffs(20);
        for (auto& d : diffs) d = noise(rng);
        double exact = wilcoxon_signed_rank(diffs, 20).p_value;
        double approx = wilcoxon_signed_rank(diffs, 5).p_value;
        worst_gap = std::max(worst_gap, std::fabs(exact - approx));
    }
    double secs = seconds_since(t0);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "%d/1000 exact mismatches, n=20 approx gap %.4f, %.1fs",
                  mismatches, worst_gap, secs);
    report(1, "Wilcoxon exactness", mismatches == 0 && worst_gap < 0.02 && secs < 60.0,
           detail);
}

void check_significance_ratios() {
    auto a = significance_ratio(2253, 4084);
    auto b = significance_ratio(1668, 3750);
    double pa = std::round(a.ratio * 10000.0) / 100.0;
    double pb = std::round(b.ratio * 10000.0) / 100.0;
    char detail[96];
    std::snprintf(detail, sizeof(detail), "2253/4084 -> %.2f%%, 1668/3750 -> %.2f%%",
                  pa, pb);
    report(2, "significance ratio arithmetic", pa == 55.17 && pb == 44.48, detail);
}

void check_gradients() {
    auto t0 = Clock::now();
    double worst = 0.0;
    for (auto [conv, attn] :
         {std::pair{ConvStage::Conv, AttnStage::Transformer},
          std::pair{ConvStage::Identity, AttnStage::Transformer},
          std::pair{ConvStage::Conv, AttnStage::Identity}}) {
        ModelConfig mc;
        mc.seq_len = 32;
        mc.conv_channels = 8;
        mc.kernel = 5;
        mc.dim = 16;
        mc.heads = 2;
        mc.ff = 32;
        mc.blocks = 1;
        mc.conv = conv;
        mc.attn = attn;
        mc.zero_head = false;
        for (uint64_t seed = 0; seed < 10; ++seed) {
            SeqModel m(mc, seed + 1);
            std::mt19937_64 rng(seed * 1337 + 7);
            std::uniform_real_distribution<double> val(0.0, 12.0);
            FingerprintFeature f;
            f.article_id = "g";
            f.values.assign(mc.seq_len, 0.0);
            f.mask.assign(mc.seq_len, 0);
            std::size_t valid = 1 + rng() % mc.seq_len;
            for (std::size_t i = 0; i < valid; ++i) {
                f.values[i] = val(rng);
                f.mask[i] = 1;
            }
            worst = std::max(worst, m.grad_check(f, static_cast<int>(seed % 2)));
        }
    }
    double secs = seconds_since(t0);
    char detail[96];
    std::snprintf(detail, sizeof(detail),
                  "max relative error %.2e over 10 seeds x 3 architectures, %.1fs",
                  worst, secs);
    report(3, "gradient correctness", worst < 1e-4 && secs < 120.0, detail);
}

PipelineConfig acceptance_config(const fs::path& dir) {
    PipelineConfig cfg;
    cfg.dataset_path = (dir / "corpus.jsonl").string();
    cfg.split_ratio = 0.8;
    cfg.seed = 42;
    cfg.ngram_order = 1;
    cfg.ngram_alpha = 0.1;
    cfg.k = 10;
    cfg.prompt_id = PromptId::T2;
    cfg.model.seq_len = 128;
    cfg.model.conv_channels = 8;
    cfg.model.kernel = 5;
    cfg.model.dim = 16;
    cfg.model.heads = 2;
    cfg.model.ff = 32;
    cfg.model.blocks = 1;
    cfg.train.lr = 3e-3;
    cfg.train.weight_decay = 0.01;
    cfg.train.warmup_ratio = 0.1;
    cfg.train.batch_size = 16;
    cfg.train.epochs = 20;
    cfg.out_dir = (dir / "out").string();
    cfg.jobs = std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
    return cfg;
}

bool tree_bytes_equal(const fs::path& a, const fs::path& b, std::string& mismatch) {
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::vector<fs::path> rels;
    for (const auto& entry : fs::recursive_directory_iterator(a))
        if (entry.is_regular_file() && entry.path().filename() != "run_meta.json")
            rels.push_back(fs::relative(entry.path(), a));
    std::sort(rels.begin(), rels.end());
    if (rels.empty()) {
        mismatch = "no files produced";
        return false;
    }
    for (const auto& rel : rels) {
        if (!fs::exists(b / rel)) {
            mismatch = "missing " + rel.string();
            return false;
        }
        if (slurp(a / rel) != slurp(b / rel)) {
            mismatch = rel.string();
            return false;
        }
    }
    return true;
}

void check_select_topk_properties() {
    std::mt19937_64 rng(90210);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        int n = 1 + static_cast<int>(rng() % 40);
        double anchor = unit(rng);
        std::vector<double> masked(n);
        for (auto& m : masked) m = unit(rng);
        int k = 1 + static_cast<int>(rng() % 50);
        auto sel = select_topk("x", anchor, masked, k);

        bool ok = sel.selected.size() ==
                  std::min<std::size_t>(static_cast<std::size_t>(k), masked.size());
        for (std::size_t i = 1; ok && i < sel.selected.size(); ++i)
            ok = sel.selected[i - 1].first < sel.selected[i].first;

        double scale = 0.25 + unit(rng);  // uniform positive rescale of |delta|
        std::vector<double> squeezed(masked.size());
        for (std::size_t i = 0; i < masked.size(); ++i)
            squeezed[i] = anchor - scale * (anchor - masked[i]);
        auto sel2 = select_topk("x", anchor, squeezed, k);
        ok = ok && sel2.selected.size() == sel.selected.size();
        for (std::size_t i = 0; ok && i < sel.selected.size(); ++i)
            ok = sel.selected[i].first == sel2.selected[i].first;
        if (!ok) ++violations;
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "%d/1000 property violations", violations);
    report(9, "fragment selection invariants", violations == 0, detail);
}

}  // namespace

int main() {
    check_wilcoxon_exactness();
    check_significance_ratios();
    check_gradients();

    // Shared synthetic-corpus pipeline for the end-to-end checks.
    fs::path dir = fs::temp_directory_path() / "life_acceptance";
    fs::create_directories(dir);
    SynthConfig sc;  // 500 pairs of 200-400 word articles
    save_dataset((dir / "corpus.jsonl").string(), generate_corpus(sc));
    PipelineConfig cfg = acceptance_config(dir);

    auto t0 = Clock::now();
    EvalReport full = cmd_train(cfg);
    DivergenceSummary div = cmd_divergence(cfg);
    double e2e_secs = seconds_since(t0);
    {
        char detail[160];
        std::snprintf(detail, sizeof(detail),
                      "1000 articles: accuracy %.3f, F1 %.3f, %.1f%% of %zu pairs "
                      "significant, %.1fs",
                      full.accuracy, full.f1, 100.0 * div.ratio, div.pairs, e2e_secs);
        report(4, "synthetic end-to-end",
               full.accuracy >= 0.90 && full.f1 >= 0.90 && div.ratio >= 0.90 &&
                   e2e_secs < 600.0,
               detail);
    }

    {
        auto reports = cmd_ablate(cfg, {AblationVariant::NoMP, AblationVariant::NoKF});
        const EvalReport& nomp = reports[0];
        const EvalReport& nokf = reports[1];
        char detail[160];
        std::snprintf(detail, sizeof(detail),
                      "Full %.3f > NoMP %.3f and Full %.3f >= NoKF %.3f "
                      "(NoKF >= NoMP soft expectation: %s)",
                      full.accuracy, nomp.accuracy, full.accuracy, nokf.accuracy,
                      nokf.accuracy >= nomp.accuracy ? "holds" : "does not hold");
        report(5, "ablation ordering",
               full.accuracy > nomp.accuracy && full.accuracy >= nokf.accuracy, detail);
    }

    {
        CaseStudyResult cs = cmd_case(cfg);
        char detail[128];
        std::snprintf(detail, sizeof(detail),
                      "pair %s/%s: fragment gap %.3f vs full-text gap %.3f",
                      cs.real_id.c_str(), cs.fake_id.c_str(), cs.fragment_gap,
                      cs.full_gap);
        report(6, "fragment amplification", cs.fragment_gap >= cs.full_gap, detail);
    }

    {
        PromptComparison cmp =
            cmd_prompts(cfg, {PromptId::T1, PromptId::T2, PromptId::T3});
        char detail[96];
        std::snprintf(detail, sizeof(detail), "max accuracy gap %.4f across T1/T2/T3",
                      cmp.max_accuracy_gap);
        report(7, "prompt robustness", cmp.max_accuracy_gap <= 0.05, detail);
    }

    {
        PipelineConfig c1 = cfg;
        c1.out_dir = (dir / "det1").string();
        PipelineConfig c2 = cfg;
        c2.out_dir = (dir / "det2").string();
        fs::remove_all(c1.out_dir);
        fs::remove_all(c2.out_dir);
        cmd_train(c1);
        cmd_divergence(c1);
        cmd_train(c2);
        cmd_divergence(c2);
        std::string mismatch;
        bool ok = tree_bytes_equal(c1.out_dir, c2.out_dir, mismatch);
        report(8, "deterministic outputs", ok,
               ok ? "all JSON/CSV outputs byte-identical across reruns"
                  : "first differing file: " + mismatch);
    }

    check_select_topk_properties();

    if (g_failures == 0)
        std::printf("all acceptance checks passed\n");
    else
        std::printf("%d acceptance check(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
