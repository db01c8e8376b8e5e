#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "life/fragments.hpp"
#include "life/model.hpp"
#include "life/scorer.hpp"

namespace life {

enum class BackendKind { Builtin, Http };

struct PipelineConfig {
    // [dataset]
    std::string dataset_path;
    // [split]
    double split_ratio = 0.8;
    uint64_t seed = 42;  // root seed, expanded per stage
    // [scorer]
    BackendKind scorer_backend = BackendKind::Builtin;
    std::size_t ngram_order = 3;
    double ngram_alpha = 0.1;
    HttpScorerConfig scorer_http;
    // [anchor]
    BackendKind anchor_backend = BackendKind::Builtin;
    HttpClassifierConfig anchor_http;
    AnchorFitConfig anchor_fit;
    // [fragments]
    int k = 10;
    DeltaMode delta_mode = DeltaMode::Abs;
    // [prompt]
    PromptId prompt_id = PromptId::T2;
    // [feature] + [model]
    ModelConfig model;
    // [train]
    TrainConfig train;
    // [output]
    std::string out_dir = "out";
    // misc
    int jobs = 1;
    std::size_t histogram_bins = 30;
    std::size_t wordfreq_top_n = 100;
};

// Minimal INI-style config: [section] headers, key = value lines, '#'
// comments. Unknown sections/keys are diagnostics, not silent.
PipelineConfig load_config(const std::string& path);

// Invariant checks; returns human-readable diagnostics, empty = valid.
// `probe` additionally pings configured HTTP endpoints.
std::vector<std::string> validate_config(const PipelineConfig& cfg, bool probe = false);

// Stable content hash over everything that affects results.
std::string config_fingerprint(const PipelineConfig& cfg, const std::string& variant);

// Per-stage seed expansion from the root seed.
uint64_t stage_seed(const PipelineConfig& cfg, const std::string& stage);

}  // namespace life
