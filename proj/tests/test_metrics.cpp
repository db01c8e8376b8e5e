#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "life/metrics.hpp"
#include "life/textproc.hpp"

using namespace life;

namespace {

NewsArticle make(const std::string& id, Label label, const std::string& text) {
    NewsArticle a;
    a.id = id;
    a.title = "t";
    a.text = text;
    a.label = label;
    return a;
}

FragmentSelection select_all(const NewsArticle& a) {
    FragmentSelection sel;
    sel.article_id = a.id;
    auto spans = split_sentences(a.text);
    sel.k = static_cast<int>(spans.size());
    for (std::size_t i = 0; i < spans.size(); ++i) sel.selected.emplace_back(i, 0.0);
    return sel;
}

}  // namespace

TEST_CASE("compute_metrics: perfect predictions") {
    auto r = compute_metrics({1, 0, 1, 0}, {1, 0, 1, 0});
    CHECK(r.accuracy == doctest::Approx(1.0));
    CHECK(r.precision == doctest::Approx(1.0));
    CHECK(r.recall == doctest::Approx(1.0));
    CHECK(r.f1 == doctest::Approx(1.0));
    CHECK(r.tp == 2);
    CHECK(r.tn == 2);
}

TEST_CASE("compute_metrics: all-real predictions on a balanced set") {
    auto r = compute_metrics({0, 0, 0, 0}, {1, 0, 1, 0});
    CHECK(r.accuracy == doctest::Approx(0.5));
    CHECK(r.recall == doctest::Approx(0.0));
    CHECK(r.precision == doctest::Approx(0.0));  // undefined -> 0
    CHECK(r.f1 == doctest::Approx(0.0));
}

TEST_CASE("compute_metrics: confusion-matrix arithmetic") {
    std::vector<int> preds, labels;
    auto add = [&](int p, int l, int n) {
        for (int i = 0; i < n; ++i) {
            preds.push_back(p);
            labels.push_back(l);
        }
    };
    add(1, 1, 91);  // TP
    add(1, 0, 9);   // FP
    add(0, 1, 7);   // FN
    add(0, 0, 93);  // TN
    auto r = compute_metrics(preds, labels);
    CHECK(r.precision == doctest::Approx(0.91).epsilon(1e-12));
    CHECK(r.recall == doctest::Approx(91.0 / 98.0).epsilon(1e-12));
    CHECK(r.f1 == doctest::Approx(2.0 * 0.91 * (91.0 / 98.0) /
                                  (0.91 + 91.0 / 98.0))
                      .epsilon(1e-12));
}

TEST_CASE("compute_metrics agrees with a brute-force recount on random vectors") {
    std::mt19937_64 rng(55);
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = 1 + rng() % 50;
        std::vector<int> preds(n), labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            preds[i] = coin(rng);
            labels[i] = coin(rng);
        }
        auto r = compute_metrics(preds, labels);

        std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (preds[i] == 1 && labels[i] == 1) ++tp;
            if (preds[i] == 1 && labels[i] == 0) ++fp;
            if (preds[i] == 0 && labels[i] == 1) ++fn;
            if (preds[i] == 0 && labels[i] == 0) ++tn;
        }
        CAPTURE(trial);
        REQUIRE(r.tp == tp);
        REQUIRE(r.fp == fp);
        REQUIRE(r.fn == fn);
        REQUIRE(r.tn == tn);
        double acc = static_cast<double>(tp + tn) / n;
        double prec = tp + fp ? static_cast<double>(tp) / (tp + fp) : 0.0;
        double rec = tp + fn ? static_cast<double>(tp) / (tp + fn) : 0.0;
        double f1 = prec + rec > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
        REQUIRE(r.accuracy == acc);
        REQUIRE(r.precision == prec);
        REQUIRE(r.recall == rec);
        REQUIRE(r.f1 == f1);
    }
}

TEST_CASE("compute_metrics rejects mismatched or empty input") {
    CHECK_THROWS_AS(compute_metrics({1}, {1, 0}), std::runtime_error);
    CHECK_THROWS_AS(compute_metrics({}, {}), std::runtime_error);
}

TEST_CASE("variant names round-trip and unknown names are rejected") {
    for (auto v : {AblationVariant::Full, AblationVariant::NoMP, AblationVariant::NoKF,
                   AblationVariant::NoCNN, AblationVariant::NoTRM})
        CHECK(variant_from_name(variant_name(v)) == v);
    CHECK_THROWS_AS(variant_from_name("NoXYZ"), std::runtime_error);
}

TEST_CASE("stopword list is non-trivial and lowercase") {
    const auto& sw = stopword_list();
    CHECK(sw.size() >= 100);
    CHECK(std::find(sw.begin(), sw.end(), "the") != sw.end());
    CHECK(std::find(sw.begin(), sw.end(), "and") != sw.end());
    for (const auto& w : sw)
        for (char c : w) CHECK(!std::isupper(static_cast<unsigned char>(c)));
}

TEST_CASE("word_frequency: stopwords and punctuation are dropped, counts lowercased") {
    auto fake = make("f", Label::Fake, "The cat cat, the CAT!");
    auto freq = word_frequency({select_all(fake)}, {fake}, {"the"}, 0);
    REQUIRE(freq.fake.size() == 1);
    CHECK(freq.fake[0].word == "cat");
    CHECK(freq.fake[0].count == 3);
    CHECK(freq.real.empty());
}

TEST_CASE("word_frequency: empty stopword list keeps raw counts") {
    auto real = make("r", Label::Real, "The the apple.");
    auto freq = word_frequency({select_all(real)}, {real}, {}, 0);
    REQUIRE(freq.real.size() == 2);
    CHECK(freq.real[0].word == "the");
    CHECK(freq.real[0].count == 2);
    CHECK(freq.real[1].word == "apple");
}

TEST_CASE("word_frequency ranks by count then alphabetically") {
    auto fake = make("f", Label::Fake, "Beta alpha beta alpha zeta.");
    auto freq = word_frequency({select_all(fake)}, {fake}, {}, 0);
    REQUIRE(freq.fake.size() == 3);
    CHECK(freq.fake[0].word == "alpha");  // count 2, alphabetical before beta
    CHECK(freq.fake[1].word == "beta");
    CHECK(freq.fake[2].word == "zeta");
}

TEST_CASE("word_frequency counts only the selected sentences") {
    auto fake = make("f", Label::Fake, "Apple apple. Banana banana.");
    FragmentSelection sel;
    sel.article_id = "f";
    sel.k = 1;
    sel.selected.emplace_back(0, 0.5);  // only the first sentence
    auto freq = word_frequency({sel}, {fake}, {}, 0);
    REQUIRE(freq.fake.size() == 1);
    CHECK(freq.fake[0].word == "apple");
    CHECK(freq.fake[0].count == 2);
}

TEST_CASE("word_frequency top_n truncates and totals match fragment word counts") {
    auto fake = make("f", Label::Fake, "One two three four five six seven.");
    auto freq = word_frequency({select_all(fake)}, {fake}, {}, 3);
    CHECK(freq.fake.size() == 3);

    auto full = word_frequency({select_all(fake)}, {fake}, {}, 0);
    std::size_t total = 0;
    for (const auto& wc : full.fake) total += wc.count;
    CHECK(total == 7);  // 7 words, punctuation excluded
}
