#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "life/fragments.hpp"
#include "life/synth.hpp"
#include "life/textproc.hpp"

using namespace life;

namespace {

NewsArticle make(const std::string& id, Label label, const std::string& text) {
    NewsArticle a;
    a.id = id;
    a.title = "title";
    a.text = text;
    a.label = label;
    return a;
}

std::vector<NewsArticle> toy_separable(int per_class) {
    std::vector<NewsArticle> arts;
    for (int i = 0; i < per_class; ++i) {
        arts.push_back(make("f" + std::to_string(i), Label::Fake,
                            "Aaa aaa aaa aaa. Aaa aaa aaa."));
        arts.push_back(make("r" + std::to_string(i), Label::Real,
                            "Bbb bbb bbb bbb. Bbb bbb bbb."));
    }
    return arts;
}

}  // namespace

TEST_CASE("fit_anchor separates a trivially separable corpus") {
    auto arts = toy_separable(8);
    auto clf = HashedLinearClassifier::fit(arts);
    for (const auto& a : arts) {
        double p = clf.predict_fake_prob(a.title + "\n\n" + a.text);
        if (a.label == Label::Fake)
            CHECK(p > 0.5);
        else
            CHECK(p < 0.5);
    }
}

TEST_CASE("fit_anchor is deterministic") {
    auto arts = toy_separable(4);
    auto a = HashedLinearClassifier::fit(arts);
    auto b = HashedLinearClassifier::fit(arts);
    CHECK(a.weights() == b.weights());
}

TEST_CASE("fit_anchor rejects single-class training sets") {
    std::vector<NewsArticle> arts = {make("a", Label::Real, "x y z.")};
    CHECK_THROWS_AS(HashedLinearClassifier::fit(arts), std::runtime_error);
}

TEST_CASE("fit_anchor generalizes on the synthetic corpus") {
    SynthConfig cfg;
    cfg.pairs = 250;
    cfg.seed = 11;
    auto arts = generate_corpus(cfg);
    std::vector<NewsArticle> train(arts.begin(), arts.begin() + 400);
    auto clf = HashedLinearClassifier::fit(train);
    int correct = 0, total = 0;
    for (std::size_t i = 400; i < arts.size(); ++i) {
        double p = clf.predict_fake_prob(arts[i].title + "\n\n" + arts[i].text);
        bool pred_fake = p >= 0.5;
        correct += pred_fake == (arts[i].label == Label::Fake);
        ++total;
    }
    CHECK(static_cast<double>(correct) / total >= 0.95);
}

TEST_CASE("masked_scores: one call per sentence plus the anchor") {
    auto arts = toy_separable(4);
    auto clf = HashedLinearClassifier::fit(arts);
    auto spans = split_sentences(arts[0].text);
    REQUIRE(spans.size() == 2);
    auto ms = masked_scores(clf, arts[0], spans);
    CHECK(ms.masked.size() == 2);
    CHECK(ms.anchor >= 0.0);
    CHECK(ms.anchor <= 1.0);
    for (double m : ms.masked) {
        CHECK(m >= 0.0);
        CHECK(m <= 1.0);
    }
}

TEST_CASE("masked_scores on a one-sentence article probes the pure mask") {
    auto arts = toy_separable(4);
    auto clf = HashedLinearClassifier::fit(arts);
    NewsArticle single = make("s", Label::Fake, "Aaa aaa aaa.");
    auto spans = split_sentences(single.text);
    REQUIRE(spans.size() == 1);
    auto ms = masked_scores(clf, single, spans);
    REQUIRE(ms.masked.size() == 1);
    // The masked variant text is exactly "[MASK]", carrying no class signal.
    CHECK(ms.masked[0] != ms.anchor);
}

TEST_CASE("masking the planted discriminative sentence gives the largest delta") {
    // Train on fake texts marked by 'zebra'; fillers are shared stopwords.
    std::vector<NewsArticle> train;
    for (int i = 0; i < 10; ++i) {
        train.push_back(make("f" + std::to_string(i), Label::Fake,
                             "The of and to in. Zebra zebra zebra zebra. A an is was."));
        train.push_back(make("r" + std::to_string(i), Label::Real,
                             "The of and to in. Quiet quiet quiet quiet. A an is was."));
    }
    auto clf = HashedLinearClassifier::fit(train);
    NewsArticle probe = make("p", Label::Fake,
                             "The of and to in. Zebra zebra zebra zebra. A an is was.");
    auto spans = split_sentences(probe.text);
    REQUIRE(spans.size() == 3);
    auto ms = masked_scores(clf, probe, spans);
    double d0 = std::fabs(ms.anchor - ms.masked[0]);
    double d1 = std::fabs(ms.anchor - ms.masked[1]);
    double d2 = std::fabs(ms.anchor - ms.masked[2]);
    CHECK(d1 > d0);
    CHECK(d1 > d2);
    // Pure-stopword sentences barely move the prediction.
    CHECK(d0 < 0.05);
    CHECK(d2 < 0.05);
}

TEST_CASE("select_topk saturates at the sentence count") {
    auto sel = select_topk("a", 0.9, {0.1, 0.2, 0.3}, 10);
    REQUIRE(sel.selected.size() == 3);
    CHECK(sel.selected[0].first == 0);
    CHECK(sel.selected[2].first == 2);
}

TEST_CASE("select_topk breaks delta ties by lower index") {
    auto sel = select_topk("a", 0.5, {0.2, 0.2, 0.4}, 1);  // deltas .3 .3 .1
    REQUIRE(sel.selected.size() == 1);
    CHECK(sel.selected[0].first == 0);
}

TEST_CASE("select_topk picks the two largest absolute deltas") {
    auto sel = select_topk("a", 0.9, {0.2, 0.85, 0.5}, 2);  // |.7| |.05| |.4|
    REQUIRE(sel.selected.size() == 2);
    CHECK(sel.selected[0].first == 0);
    CHECK(sel.selected[1].first == 2);
}

TEST_CASE("select_topk signed mode prefers positive deltas") {
    auto sel = select_topk("a", 0.5, {0.9, 0.1}, 1, DeltaMode::Signed);
    // signed deltas: -0.4 and +0.4 -> index 1 wins.
    REQUIRE(sel.selected.size() == 1);
    CHECK(sel.selected[0].first == 1);
}

TEST_CASE("select_topk rejects k below 1") {
    CHECK_THROWS_AS(select_topk("a", 0.5, {0.1}, 0), std::runtime_error);
    CHECK_THROWS_AS(select_topk("a", 0.5, {0.1}, -3), std::runtime_error);
}

TEST_CASE("select_topk properties over randomized trials") {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> size_dist(1, 40);
    for (int trial = 0; trial < 1000; ++trial) {
        CAPTURE(trial);
        int n = size_dist(rng);
        double anchor = unit(rng);
        std::vector<double> masked(n);
        for (auto& m : masked) m = unit(rng);
        int k = 1 + static_cast<int>(rng() % 50);
        auto sel = select_topk("a", anchor, masked, k);

        // k saturation and unique sorted indices.
        REQUIRE(sel.selected.size() ==
                std::min<std::size_t>(static_cast<std::size_t>(k), masked.size()));
        for (std::size_t i = 1; i < sel.selected.size(); ++i)
            REQUIRE(sel.selected[i - 1].first < sel.selected[i].first);

        // Monotone-transform invariance: scale all probs toward the anchor by
        // a positive factor, which scales every |delta| uniformly.
        double scale = 0.25 + unit(rng);
        std::vector<double> squeezed(masked.size());
        for (std::size_t i = 0; i < masked.size(); ++i)
            squeezed[i] = anchor - scale * (anchor - masked[i]);
        auto sel2 = select_topk("a", anchor, squeezed, k);
        REQUIRE(sel2.selected.size() == sel.selected.size());
        for (std::size_t i = 0; i < sel.selected.size(); ++i)
            REQUIRE(sel.selected[i].first == sel2.selected[i].first);
    }
}

TEST_CASE("select_topk is deterministic") {
    std::vector<double> masked{0.3, 0.8, 0.1, 0.55};
    auto a = select_topk("x", 0.6, masked, 2);
    auto b = select_topk("x", 0.6, masked, 2);
    REQUIRE(a.selected.size() == b.selected.size());
    for (std::size_t i = 0; i < a.selected.size(); ++i) {
        CHECK(a.selected[i].first == b.selected[i].first);
        CHECK(a.selected[i].second == b.selected[i].second);
    }
}
