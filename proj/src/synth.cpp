#include "life/synth.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "life/scorer.hpp"

namespace life {

const std::vector<std::string>& synth_fake_vocab() {
    static const std::vector<std::string> v = {
        "couple",    "fan",        "relationship", "sources",  "rumor",
        "insider",   "scandal",    "affair",       "split",    "dating",
        "spotted",   "claims",     "secret",       "shocking", "exclusive",
        "reveals",   "breakup",    "wedding",      "divorce",  "alleged",
        "mystery",   "denies",     "sparks",       "fuels",    "speculation",
        "hollywood", "celebrity",  "singer",       "actor",    "stunned",
        "confession", "leaked",    "drama",        "feud",     "reunion",
        "engaged",   "surprise",   "backlash",     "outrage",  "insiders",
        "whirlwind", "tabloid",    "paparazzi",    "cozy",     "flame",
        "heartbreak", "betrayal",  "hints",        "teases",   "cryptic",
        "storm",     "buzz",       "frenzy",       "viral",    "sensation",
        "gossip",    "romance",    "flirting",     "jealousy", "meltdown",
    };
    return v;
}

const std::vector<std::string>& synth_real_vocab() {
    static const std::vector<std::string> v = {
        "episode",       "character",   "interview",  "role",       "season",
        "series",        "director",    "producer",   "script",     "premiere",
        "network",       "audience",    "ratings",    "broadcast",  "studio",
        "production",    "casting",     "filming",    "schedule",   "renewal",
        "finale",        "pilot",       "screenplay", "documentary", "festival",
        "award",         "nomination",  "critics",    "review",     "performance",
        "ensemble",      "adaptation",  "narrative",  "storyline",  "dialogue",
        "cinematography", "soundtrack", "rehearsal",  "writers",    "showrunner",
        "premise",       "plot",        "scene",      "costume",    "location",
        "crew",          "editing",     "release",    "trailer",    "screening",
        "anthology",     "franchise",   "reboot",     "spinoff",    "miniseries",
        "installment",   "chapter",     "arc",        "portrayal",  "monologue",
    };
    return v;
}

const std::vector<std::string>& synth_filler_vocab() {
    static const std::vector<std::string> v = {
        "the", "of",   "and",  "to",   "in",   "that", "it",  "was", "for",
        "on",  "with", "as",   "at",   "by",   "this", "from", "they", "we",
        "been", "has",
    };
    return v;
}

namespace {

// Seed corpus for the topic source models: Zipf-weighted draws so the fitted
// trigram has uneven, learnable statistics.
std::vector<std::vector<std::string>> seed_sentences(
    const std::vector<std::string>& vocab, std::mt19937_64& rng,
    std::size_t n_sentences) {
    std::vector<double> weights(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i)
        weights[i] = 1.0 / static_cast<double>(i + 3);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    std::uniform_int_distribution<std::size_t> len(8, 14);
    std::vector<std::vector<std::string>> out;
    for (std::size_t s = 0; s < n_sentences; ++s) {
        std::vector<std::string> sent;
        std::size_t n = len(rng);
        for (std::size_t i = 0; i < n; ++i) sent.push_back(vocab[pick(rng)]);
        out.push_back(std::move(sent));
    }
    return out;
}

std::string capitalize(std::string w) {
    if (!w.empty()) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    return w;
}

std::string make_sentence(const std::vector<std::string>& words) {
    std::string s = capitalize(words.front());
    for (std::size_t i = 1; i < words.size(); ++i) s += " " + words[i];
    s += ".";
    return s;
}

struct ArticleBuilder {
    const NgramModel* topic_model;
    const std::vector<std::string>* fillers;
    double filler_rate;

    NewsArticle build(const std::string& id, Label label, std::size_t target_words,
                      std::mt19937_64& rng) const {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::uniform_int_distribution<std::size_t> topic_len(9, 14);
        std::uniform_int_distribution<std::size_t> filler_len(6, 9);
        std::uniform_int_distribution<std::size_t> filler_pick(0, fillers->size() - 1);

        NewsArticle a;
        a.id = id;
        a.label = label;
        a.title = make_sentence(topic_model->sample(5, rng()));
        a.title.pop_back();  // titles carry no terminator

        std::size_t words = 0;
        std::string text;
        while (words < target_words) {
            std::vector<std::string> sent;
            if (unif(rng) < filler_rate) {
                std::size_t n = filler_len(rng);
                for (std::size_t i = 0; i < n; ++i)
                    sent.push_back((*fillers)[filler_pick(rng)]);
            } else {
                sent = topic_model->sample(topic_len(rng), rng());
            }
            if (!text.empty()) text += " ";
            text += make_sentence(sent);
            words += sent.size();
        }
        a.text = std::move(text);
        return a;
    }
};

}  // namespace

std::vector<NewsArticle> generate_corpus(const SynthConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    NgramModel fake_source = NgramModel::fit(seed_sentences(synth_fake_vocab(), rng, 400), 3, 0.1);
    NgramModel real_source = NgramModel::fit(seed_sentences(synth_real_vocab(), rng, 400), 3, 0.1);

    ArticleBuilder fake_builder{&fake_source, &synth_filler_vocab(), cfg.filler_rate};
    ArticleBuilder real_builder{&real_source, &synth_filler_vocab(), cfg.filler_rate};

    std::uniform_int_distribution<std::size_t> length(cfg.min_words, cfg.max_words);
    std::vector<NewsArticle> corpus;
    corpus.reserve(cfg.pairs * 2);
    for (std::size_t i = 0; i < cfg.pairs; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04zu", i);
        std::string num(buf);
        std::size_t target = length(rng);
        NewsArticle fake = fake_builder.build("fake" + num, Label::Fake, target, rng);
        NewsArticle real = real_builder.build("real" + num, Label::Real, target, rng);
        fake.pair_id = "p" + num;
        real.pair_id = "p" + num;
        fake.source = "synthetic";
        real.source = "synthetic";
        corpus.push_back(std::move(real));
        corpus.push_back(std::move(fake));
    }
    return corpus;
}

}  // namespace life
