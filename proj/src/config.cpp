#include "life/config.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace life {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);

    PipelineConfig cfg;
    std::string section, line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        std::string full = section + "." + key;

        try {
            if (full == "dataset.path") cfg.dataset_path = value;
            else if (full == "split.ratio") cfg.split_ratio = std::stod(value);
            else if (full == "split.seed" || full == "seed.root") cfg.seed = std::stoull(value);
            else if (full == "scorer.backend")
                cfg.scorer_backend = value == "http" ? BackendKind::Http : BackendKind::Builtin;
            else if (full == "scorer.order") cfg.ngram_order = std::stoul(value);
            else if (full == "scorer.alpha") cfg.ngram_alpha = std::stod(value);
            else if (full == "scorer.endpoint") cfg.scorer_http.endpoint = value;
            else if (full == "scorer.timeout") cfg.scorer_http.timeout_seconds = std::stoi(value);
            else if (full == "scorer.retries") cfg.scorer_http.retries = std::stoi(value);
            else if (full == "scorer.inflight") cfg.scorer_http.inflight_limit = std::stoi(value);
            else if (full == "anchor.backend")
                cfg.anchor_backend = value == "http" ? BackendKind::Http : BackendKind::Builtin;
            else if (full == "anchor.endpoint") cfg.anchor_http.endpoint = value;
            else if (full == "anchor.timeout") cfg.anchor_http.timeout_seconds = std::stoi(value);
            else if (full == "anchor.retries") cfg.anchor_http.retries = std::stoi(value);
            else if (full == "anchor.epochs") cfg.anchor_fit.epochs = std::stoul(value);
            else if (full == "anchor.lr") cfg.anchor_fit.lr = std::stod(value);
            else if (full == "anchor.bucket_bits") cfg.anchor_fit.bucket_bits = std::stoul(value);
            else if (full == "fragments.k") cfg.k = std::stoi(value);
            else if (full == "fragments.delta_mode")
                cfg.delta_mode = value == "signed" ? DeltaMode::Signed : DeltaMode::Abs;
            else if (full == "prompt.id") cfg.prompt_id = prompt_id_from_name(value);
            else if (full == "feature.length") cfg.model.seq_len = std::stoul(value);
            else if (full == "model.conv_channels") cfg.model.conv_channels = std::stoul(value);
            else if (full == "model.kernel") cfg.model.kernel = std::stoul(value);
            else if (full == "model.dim") cfg.model.dim = std::stoul(value);
            else if (full == "model.heads") cfg.model.heads = std::stoul(value);
            else if (full == "model.ff") cfg.model.ff = std::stoul(value);
            else if (full == "model.blocks") cfg.model.blocks = std::stoul(value);
            else if (full == "train.lr") cfg.train.lr = std::stod(value);
            else if (full == "train.weight_decay") cfg.train.weight_decay = std::stod(value);
            else if (full == "train.warmup_ratio") cfg.train.warmup_ratio = std::stod(value);
            else if (full == "train.batch_size") cfg.train.batch_size = std::stoul(value);
            else if (full == "train.epochs") cfg.train.epochs = std::stoul(value);
            else if (full == "output.dir") cfg.out_dir = value;
            else if (full == "output.histogram_bins") cfg.histogram_bins = std::stoul(value);
            else if (full == "output.wordfreq_top_n") cfg.wordfreq_top_n = std::stoul(value);
            else if (full == "run.jobs") cfg.jobs = std::stoi(value);
            else
                throw std::runtime_error("unknown config key \"" + full + "\"");
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": bad value for " + full + ": " + value);
        }
    }
    // Env overrides.
    if (const char* ep = std::getenv("LIFE_HTTP_ENDPOINT")) {
        cfg.scorer_http.endpoint = ep;
        cfg.anchor_http.endpoint = ep;
    }
    if (const char* jobs = std::getenv("LIFE_JOBS")) cfg.jobs = std::atoi(jobs);
    cfg.train.seed = stage_seed(cfg, "train");
    cfg.anchor_fit.seed = stage_seed(cfg, "anchor");
    return cfg;
}

std::vector<std::string> validate_config(const PipelineConfig& cfg, bool probe) {
    std::vector<std::string> diags;
    if (cfg.dataset_path.empty())
        diags.push_back("dataset.path: not set");
    else if (!std::filesystem::exists(cfg.dataset_path))
        diags.push_back("dataset.path: file does not exist: " + cfg.dataset_path);
    if (!(cfg.split_ratio > 0.0 && cfg.split_ratio < 1.0))
        diags.push_back("split.ratio: must be in (0,1)");
    if (cfg.ngram_order < 1) diags.push_back("scorer.order: must be >= 1");
    if (!(cfg.ngram_alpha > 0.0)) diags.push_back("scorer.alpha: must be > 0");
    if (cfg.k < 0) diags.push_back("fragments.k: must be >= 0");
    if (cfg.model.seq_len < 1) diags.push_back("feature.length: must be >= 1");
    if (cfg.model.dim % cfg.model.heads != 0)
        diags.push_back("model.dim: must be divisible by model.heads");
    if (cfg.model.kernel % 2 == 0) diags.push_back("model.kernel: must be odd");
    if (!(cfg.train.lr > 0.0)) diags.push_back("train.lr: must be > 0");
    if (!(cfg.train.warmup_ratio >= 0.0 && cfg.train.warmup_ratio < 1.0))
        diags.push_back("train.warmup_ratio: must be in [0,1)");
    if (cfg.scorer_backend == BackendKind::Http && cfg.scorer_http.endpoint.empty())
        diags.push_back("scorer.endpoint: required for http backend");
    if (cfg.anchor_backend == BackendKind::Http && cfg.anchor_http.endpoint.empty())
        diags.push_back("anchor.endpoint: required for http backend");
    if (cfg.jobs < 1) diags.push_back("run.jobs: must be >= 1");

    if (probe && cfg.scorer_backend == BackendKind::Http &&
        !cfg.scorer_http.endpoint.empty()) {
        try {
            HttpScorer scorer(cfg.scorer_http);
            SentenceSpan probe_span;
            probe_span.text = "probe";
            probe_span.words = {"probe"};
            RenderedPrompt p{cfg.prompt_id, "probe"};
            scorer.score_sentence(p, "", probe_span);
        } catch (const std::exception& e) {
            diags.push_back(std::string("scorer.endpoint: probe failed: ") + e.what());
        }
    }
    return diags;
}

std::string config_fingerprint(const PipelineConfig& cfg, const std::string& variant) {
    std::ostringstream s;
    s << cfg.dataset_path << '|' << cfg.split_ratio << '|' << cfg.seed << '|'
      << static_cast<int>(cfg.scorer_backend) << '|' << cfg.ngram_order << '|'
      << cfg.ngram_alpha << '|' << cfg.scorer_http.endpoint << '|'
      << static_cast<int>(cfg.anchor_backend) << '|' << cfg.k << '|'
      << static_cast<int>(cfg.delta_mode) << '|' << prompt_id_name(cfg.prompt_id) << '|'
      << cfg.model.seq_len << '|' << cfg.model.conv_channels << '|' << cfg.model.kernel
      << '|' << cfg.model.dim << '|' << cfg.model.heads << '|' << cfg.model.ff << '|'
      << cfg.model.blocks << '|' << cfg.train.lr << '|' << cfg.train.weight_decay << '|'
      << cfg.train.warmup_ratio << '|' << cfg.train.batch_size << '|'
      << cfg.train.epochs << '|' << variant;
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(s.str())));
    return buf;
}

uint64_t stage_seed(const PipelineConfig& cfg, const std::string& stage) {
    return cfg.seed ^ fnv1a(stage);
}

}  // namespace life
