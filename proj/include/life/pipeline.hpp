#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "life/config.hpp"
#include "life/corpus.hpp"
#include "life/fragments.hpp"
#include "life/metrics.hpp"
#include "life/model.hpp"
#include "life/scorer.hpp"
#include "life/stats.hpp"

namespace life {

// Builds the configured scorer. The builtin backend fits its fake-text and
// all-text n-gram models on the training split of `articles`.
std::unique_ptr<ScorerBackend> make_scorer(const PipelineConfig& cfg,
                                           const std::vector<NewsArticle>& articles,
                                           const std::vector<std::string>& train_ids);

std::unique_ptr<AnchorClassifier> make_anchor(const PipelineConfig& cfg,
                                              const std::vector<NewsArticle>& articles,
                                              const std::vector<std::string>& train_ids);

// Scores the given sentence indices of an article under a prompt template,
// conditioning each sentence on the title plus all preceding article text.
std::vector<WordProbSeq> score_article_sentences(
    const ScorerBackend& scorer, PromptId prompt_id, const NewsArticle& article,
    const std::vector<SentenceSpan>& spans, const std::vector<std::size_t>& indices);

struct PipelineOutcome {
    EvalReport report;
    std::vector<double> loss_curve;
    std::optional<SeqModel> model;
    // per test article: id, label, predicted label, probability
    std::vector<std::string> test_ids;
    std::vector<int> test_labels;
    std::vector<int> test_preds;
    std::vector<double> test_probs;
};

// Full train/evaluate pipeline for one ablation variant.
PipelineOutcome run_pipeline(const PipelineConfig& cfg, AblationVariant variant);

struct DivergenceSummary {
    std::size_t pairs = 0;
    std::size_t significant = 0;
    double ratio = 0.0;
    double alpha = 0.05;
};

// Command implementations; each persists its artifacts under cfg.out_dir and
// returns the headline result. The CLI wraps these 1:1.
int cmd_validate(const PipelineConfig& cfg, bool probe,
                 std::vector<std::string>* diags_out = nullptr);
DivergenceSummary cmd_divergence(const PipelineConfig& cfg);
EvalReport cmd_train(const PipelineConfig& cfg);
std::vector<EvalReport> cmd_ablate(const PipelineConfig& cfg,
                                   const std::vector<AblationVariant>& variants);
std::vector<std::pair<int, EvalReport>> cmd_sweep_k(const PipelineConfig& cfg,
                                                    const std::vector<int>& k_values);
struct PromptComparison {
    std::vector<EvalReport> reports;
    double max_accuracy_gap = 0.0;
};
PromptComparison cmd_prompts(const PipelineConfig& cfg,
                             const std::vector<PromptId>& prompts);
WordFrequencyResult cmd_wordfreq(const PipelineConfig& cfg);
struct CaseStudyResult {
    std::string real_id;
    std::string fake_id;
    double full_gap = 0.0;      // mean real -log p minus mean fake -log p
    double fragment_gap = 0.0;  // same, restricted to selected fragments
};
CaseStudyResult cmd_case(const PipelineConfig& cfg,
                         const std::string& pair_id = "");

}  // namespace life
