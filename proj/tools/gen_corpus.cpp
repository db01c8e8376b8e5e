#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "life/corpus.hpp"
#include "life/synth.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generate a synthetic paired news corpus (JSONL)"};

    life::SynthConfig cfg;
    std::string out_path = "corpus.jsonl";
    app.add_option("--out", out_path, "Output JSONL path");
    app.add_option("--pairs", cfg.pairs, "Number of real/fake pairs");
    app.add_option("--min-words", cfg.min_words, "Minimum article word count");
    app.add_option("--max-words", cfg.max_words, "Maximum article word count");
    app.add_option("--filler-rate", cfg.filler_rate,
                   "Fraction of sentences drawn from the shared filler pool");
    app.add_option("--seed", cfg.seed, "Random seed");

    CLI11_PARSE(app, argc, argv);

    try {
        auto articles = life::generate_corpus(cfg);
        life::save_dataset(out_path, articles);
        std::printf("wrote %zu articles (%zu pairs) to %s\n", articles.size(),
                    cfg.pairs, out_path.c_str());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
