#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "life/config.hpp"
#include "life/metrics.hpp"
#include "life/pipeline.hpp"

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    int jobs = 0;
};

life::PipelineConfig resolve_config(const GlobalOpts& g) {
    life::PipelineConfig cfg = life::load_config(g.config_path);
    if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
    if (g.seed >= 0) cfg.seed = static_cast<uint64_t>(g.seed);
    if (g.jobs > 0) cfg.jobs = g.jobs;
    return cfg;
}

void print_report(const life::EvalReport& r) {
    std::printf("variant=%s prompt=%s k=%d acc=%.4f prec=%.4f rec=%.4f f1=%.4f\n",
                r.variant.c_str(), r.prompt.c_str(), r.k, r.accuracy, r.precision,
                r.recall, r.f1);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linguistic-fingerprint fake news detection pipeline"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "Path to the INI config file")
        ->required();
    app.add_option("--out", g.out_dir, "Output directory (overrides config)");
    app.add_option("--seed", g.seed, "Root random seed (overrides config)");
    app.add_option("--jobs", g.jobs, "Worker threads for scoring (overrides config)");

    auto* validate = app.add_subcommand("validate", "Check config and data invariants");
    bool probe = false;
    validate->add_flag("--probe", probe, "Also ping configured HTTP endpoints");

    auto* divergence =
        app.add_subcommand("divergence", "Paired reconstruction-divergence analysis");
    app.add_subcommand("train", "Train and evaluate the sequence classifier");

    auto* ablate = app.add_subcommand("ablate", "Run ablation variants");
    std::vector<std::string> variant_names = {"Full", "NoMP", "NoKF", "NoCNN", "NoTRM"};
    ablate->add_option("--variants", variant_names, "Variants to run");

    auto* sweep = app.add_subcommand("sweep-k", "Sweep the fragment count k");
    std::vector<int> k_values = {0, 5, 10, 20};
    sweep->add_option("--values", k_values, "k values to sweep");

    auto* prompts = app.add_subcommand("prompts", "Compare prompt templates");
    std::vector<std::string> prompt_names = {"T1", "T2", "T3"};
    prompts->add_option("--templates", prompt_names, "Templates to compare");

    app.add_subcommand("wordfreq", "Word frequencies inside selected fragments");

    auto* case_cmd = app.add_subcommand("case", "Single-pair case study curves");
    std::string pair_id;
    case_cmd->add_option("--pair", pair_id, "pair_id to study (default: first pair)");

    CLI11_PARSE(app, argc, argv);

    try {
        life::PipelineConfig cfg = resolve_config(g);
        if (validate->parsed()) {
            int rc = life::cmd_validate(cfg, probe);
            std::printf("%s\n", rc == 0 ? "config ok" : "config invalid");
            return rc;
        }
        if (divergence->parsed()) {
            auto s = life::cmd_divergence(cfg);
            std::printf("pairs=%zu significant=%zu ratio=%.4f (alpha=%.2f)\n", s.pairs,
                        s.significant, s.ratio, s.alpha);
            return 0;
        }
        if (app.get_subcommand("train")->parsed()) {
            print_report(life::cmd_train(cfg));
            return 0;
        }
        if (ablate->parsed()) {
            std::vector<life::AblationVariant> variants;
            for (const auto& n : variant_names)
                variants.push_back(life::variant_from_name(n));
            for (const auto& r : life::cmd_ablate(cfg, variants)) print_report(r);
            return 0;
        }
        if (sweep->parsed()) {
            for (const auto& [k, r] : life::cmd_sweep_k(cfg, k_values)) print_report(r);
            return 0;
        }
        if (prompts->parsed()) {
            std::vector<life::PromptId> ids;
            for (const auto& n : prompt_names)
                ids.push_back(life::prompt_id_from_name(n));
            auto cmp = life::cmd_prompts(cfg, ids);
            for (const auto& r : cmp.reports) print_report(r);
            std::printf("max accuracy gap=%.4f\n", cmp.max_accuracy_gap);
            return 0;
        }
        if (app.get_subcommand("wordfreq")->parsed()) {
            auto wf = life::cmd_wordfreq(cfg);
            std::printf("real words=%zu fake words=%zu\n", wf.real.size(),
                        wf.fake.size());
            return 0;
        }
        if (case_cmd->parsed()) {
            auto c = life::cmd_case(cfg, pair_id);
            std::printf("pair %s/%s full_gap=%.4f fragment_gap=%.4f\n",
                        c.real_id.c_str(), c.fake_id.c_str(), c.full_gap,
                        c.fragment_gap);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
