#pragma once

#include <cstdint>
#include <vector>

#include "life/corpus.hpp"

namespace life {

// Synthetic corpus with a built-in real/fake separation: fake articles are
// sampled from a trigram source over one topic vocabulary, real articles
// from a disjoint-topic source, and both mix in shared stopword filler
// sentences that carry no class signal.
struct SynthConfig {
    std::size_t pairs = 500;
    std::size_t min_words = 200;
    std::size_t max_words = 400;
    double filler_rate = 0.25;
    uint64_t seed = 42;
};

const std::vector<std::string>& synth_fake_vocab();
const std::vector<std::string>& synth_real_vocab();
const std::vector<std::string>& synth_filler_vocab();

// 2*cfg.pairs articles, pair-linked via pair_id, lengths matched per pair.
std::vector<NewsArticle> generate_corpus(const SynthConfig& cfg);

}  // namespace life
