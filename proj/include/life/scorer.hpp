#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "life/corpus.hpp"
#include "life/textproc.hpp"

namespace life {

enum class PromptId { T1, T2, T3, Neutral };

std::string prompt_id_name(PromptId id);
PromptId prompt_id_from_name(const std::string& name);

struct PromptTemplate {
    PromptId id;
    std::string text;  // may contain {title} and {preceding} slots
};

// The three malicious templates plus the neutral ablation control.
const PromptTemplate& prompt_template(PromptId id);

struct RenderedPrompt {
    PromptId id = PromptId::Neutral;
    std::string text;
};

// Slot substitution only. Throws on an unresolved slot name.
RenderedPrompt render_prompt(const PromptTemplate& tmpl, const NewsArticle& article,
                             const std::string& preceding);

struct ScoredWord {
    std::string word;
    double logprob;  // natural log, clamped to [-30, 0]
};

struct WordProbSeq {
    int sentence_index = 0;
    std::vector<ScoredWord> words;
    PromptId prompt_id = PromptId::Neutral;
    std::string backend_id;

    double prob(std::size_t i) const;
};

struct BackendCaps {
    std::size_t max_context_words = 0;  // 0 = unbounded
    bool reports_pieces = false;
};

class ScorerBackend {
public:
    virtual ~ScorerBackend() = default;
    virtual std::string id() const = 0;
    virtual BackendCaps caps() const = 0;
    // One probability per word of `sentence`, each conditioned on the prompt,
    // the preceding article text, and the earlier words of the sentence.
    virtual WordProbSeq score_sentence(const RenderedPrompt& prompt,
                                       const std::string& preceding,
                                       const SentenceSpan& sentence) const = 0;
};

// Add-alpha smoothed n-gram over a word corpus plus an UNK token.
class NgramModel {
public:
    NgramModel() = default;

    // `sentences` are tokenized word lists; tokens are lowercased internally.
    static NgramModel fit(const std::vector<std::vector<std::string>>& sentences,
                          std::size_t order, double alpha);

    // log p(word | last order-1 context words), add-alpha smoothed.
    double word_logprob(const std::vector<std::string>& context,
                        const std::string& word) const;

    std::size_t vocab_size() const { return vocab_size_; }
    const std::vector<std::string>& vocab_words() const { return vocab_; }
    std::size_t order() const { return order_; }
    bool empty() const { return order_ == 0; }

    // Samples `n_words` from the fitted distribution (used by the synthetic
    // corpus generator).
    std::vector<std::string> sample(std::size_t n_words, uint64_t seed) const;

private:
    std::size_t order_ = 0;
    double alpha_ = 1.0;
    std::size_t vocab_size_ = 0;
    std::vector<std::string> vocab_;  // sorted, without UNK
    std::map<std::vector<std::string>, std::map<std::string, std::size_t>> counts_;
    std::map<std::vector<std::string>, std::size_t> context_totals_;

    std::string canon(const std::string& word) const;
};

// Built-in deterministic scorer. Prompt conditioning selects the fitted
// model: malicious templates score with the fake-text model, the neutral
// template with the all-text model. This emulates the malicious-prompt
// effect for testing; it is not a faithful LLM stand-in.
class NgramScorer : public ScorerBackend {
public:
    NgramScorer(NgramModel fake_fit, NgramModel all_fit);

    std::string id() const override { return "ngram"; }
    BackendCaps caps() const override { return {0, false}; }
    WordProbSeq score_sentence(const RenderedPrompt& prompt, const std::string& preceding,
                               const SentenceSpan& sentence) const override;

    const NgramModel& fake_model() const { return fake_; }
    const NgramModel& all_model() const { return all_; }

private:
    NgramModel fake_;
    NgramModel all_;
};

struct HttpScorerConfig {
    std::string endpoint;  // e.g. "http://127.0.0.1:8080"
    int timeout_seconds = 30;
    int retries = 2;
    int inflight_limit = 4;
};

// Remote backend speaking POST /v1/logprobs {"prompt","text"} ->
// {"pieces":[{"text","logprob"}]}. Piece logprobs are merged into word
// logprobs by summation (product of probabilities).
class HttpScorer : public ScorerBackend {
public:
    explicit HttpScorer(HttpScorerConfig cfg);

    std::string id() const override { return "http:" + cfg_.endpoint; }
    BackendCaps caps() const override { return {0, true}; }
    WordProbSeq score_sentence(const RenderedPrompt& prompt, const std::string& preceding,
                               const SentenceSpan& sentence) const override;

private:
    HttpScorerConfig cfg_;
};

// Assigns each response piece to the word whose span contains the piece's
// first in-word character; concatenated pieces must reproduce `text` exactly.
// Exposed for direct testing.
std::vector<ScoredWord> merge_pieces_into_words(
    const std::string& text, const std::vector<std::string>& words,
    const std::vector<std::pair<std::string, double>>& pieces);

constexpr double kMinLogProb = -30.0;

}  // namespace life
