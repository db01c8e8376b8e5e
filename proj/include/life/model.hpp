#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "life/scorer.hpp"

namespace life {

struct FingerprintFeature {
    std::vector<double> values;    // neg-log probabilities, clipped to [0,30]
    std::vector<uint8_t> mask;     // 1 = real word, 0 = padding
    std::string article_id;
    PromptId prompt_id = PromptId::Neutral;
    int k = 0;
};

// Concatenates per-word -log p across fragment sequences in document order,
// clips to [0,30], truncates or zero-pads to length L. Throws on empty input.
FingerprintFeature assemble_feature(const std::string& article_id,
                                    const std::vector<WordProbSeq>& seqs,
                                    std::size_t L);

enum class ConvStage { Conv, Identity };
enum class AttnStage { Transformer, Identity };

struct ModelConfig {
    std::size_t seq_len = 512;
    std::size_t conv_channels = 32;
    std::size_t kernel = 5;
    std::size_t dim = 32;
    std::size_t heads = 4;
    std::size_t ff = 64;
    std::size_t blocks = 1;
    ConvStage conv = ConvStage::Conv;         // Identity = "w/o CNN" variant
    AttnStage attn = AttnStage::Transformer;  // Identity = "w/o TRM" variant
    bool zero_head = true;  // zero-initialized head outputs exactly 0.5
};

struct TrainConfig {
    double lr = 5e-5;
    double weight_decay = 0.1;
    double warmup_ratio = 0.1;
    std::size_t batch_size = 32;
    std::size_t epochs = 10;
    uint64_t seed = 0;
};

struct ParamGroup {
    std::string name;
    std::size_t offset = 0;
    std::size_t size = 0;
};

// Sum over samples of -[y log p + (1-y) log(1-p)], preds clamped to
// [1e-7, 1-1e-7]. Throws on length mismatch.
double bce_loss(const std::vector<double>& preds, const std::vector<int>& labels);

// 1-D conv -> transformer encoder -> mask-aware mean pool -> sigmoid head,
// trained with AdamW and linear warmup. All math in doubles, single thread.
class SeqModel {
public:
    SeqModel(const ModelConfig& cfg, uint64_t seed);

    const ModelConfig& config() const { return cfg_; }
    std::size_t param_count() const { return params_.size(); }
    const std::vector<ParamGroup>& param_groups() const { return groups_; }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    double forward(const FingerprintFeature& f) const;

    // Accumulates dLoss/dParams for one sample into `grad`; returns the
    // sample's BCE loss.
    double forward_backward(const FingerprintFeature& f, int label,
                            std::vector<double>& grad) const;

    // Per-epoch mean training loss. Throws on non-finite loss or a
    // single-class label set.
    std::vector<double> train(const std::vector<FingerprintFeature>& features,
                              const std::vector<int>& labels, const TrainConfig& tc);

    std::vector<int> predict(const std::vector<FingerprintFeature>& features,
                             std::vector<double>* probs_out = nullptr) const;

    // Max per-group relative L2 error between analytic and central
    // finite-difference gradients.
    double grad_check(const FingerprintFeature& f, int label,
                      double epsilon = 1e-5) const;

    void save(const std::string& path) const;
    static SeqModel load(const std::string& path);

private:
    ModelConfig cfg_;
    uint64_t seed_ = 0;
    std::vector<double> params_;
    std::vector<ParamGroup> groups_;

    // offsets into params_, resolved once from cfg_
    struct Layout;
    std::size_t group_offset(const std::string& name) const;
    void build_layout();
    void init_params();

    struct Cache;
    double run(const FingerprintFeature& f, Cache* cache) const;
    void backward(const FingerprintFeature& f, const Cache& cache, double dloss_du,
                  std::vector<double>& grad) const;
};

}  // namespace life
