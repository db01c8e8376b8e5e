#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "life/corpus.hpp"

using namespace life;
namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

std::string write_temp(const std::string& name, const std::string& content) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p);
    out << content;
    return p.string();
}

NewsArticle make(const std::string& id, Label label, std::size_t words) {
    NewsArticle a;
    a.id = id;
    a.title = "t";
    a.label = label;
    std::string text;
    for (std::size_t i = 0; i + 1 < words; ++i) text += "w ";
    text += "w.";
    a.text = text;
    return a;
}

}  // namespace

TEST_CASE("load_dataset reads the committed fixture") {
    auto articles = load_dataset(fixture("tiny.jsonl"));
    REQUIRE(articles.size() == 10);
    CHECK(articles[0].id == "real00");
    CHECK(articles[0].label == Label::Real);
    CHECK(articles[1].id == "fake00");
    CHECK(articles[1].label == Label::Fake);
    CHECK(articles[0].pair_id.has_value());
    CHECK(*articles[0].pair_id == *articles[1].pair_id);
    CHECK(articles[0].source == "fixture");
}

TEST_CASE("load_dataset: empty file gives empty list") {
    auto path = write_temp("empty.jsonl", "");
    CHECK(load_dataset(path).empty());
}

TEST_CASE("load_dataset: missing label is an error naming the line") {
    auto path = write_temp("nolabel.jsonl",
                           R"({"id":"a","title":"t","text":"x."})"
                           "\n");
    CHECK_THROWS_WITH_AS(load_dataset(path), doctest::Contains("line 1"),
                         std::runtime_error);
}

TEST_CASE("load_dataset: malformed JSON reports the line number") {
    auto path = write_temp("badjson.jsonl",
                           R"({"id":"a","title":"t","text":"x.","label":0})"
                           "\nnot json\n");
    CHECK_THROWS_WITH_AS(load_dataset(path), doctest::Contains("line 2"),
                         std::runtime_error);
}

TEST_CASE("load_dataset: duplicate id is an error") {
    auto path = write_temp("dup.jsonl",
                           R"({"id":"a","title":"t","text":"x.","label":0})"
                           "\n"
                           R"({"id":"a","title":"t","text":"y.","label":1})"
                           "\n");
    CHECK_THROWS_WITH_AS(load_dataset(path), doctest::Contains("a"),
                         std::runtime_error);
}

TEST_CASE("load_dataset: dangling pair link is an error naming the id") {
    auto path = write_temp("dangle.jsonl",
                           R"({"id":"a","title":"t","text":"x.","label":0,"pair_id":"p"})"
                           "\n");
    CHECK_THROWS_WITH_AS(load_dataset(path), doctest::Contains("p"),
                         std::runtime_error);
}

TEST_CASE("load_dataset: pair with equal labels is an error") {
    auto path = write_temp("samelabel.jsonl",
                           R"({"id":"a","title":"t","text":"x.","label":0,"pair_id":"p"})"
                           "\n"
                           R"({"id":"b","title":"t","text":"y.","label":0,"pair_id":"p"})"
                           "\n");
    CHECK_THROWS_AS(load_dataset(path), std::runtime_error);
}

TEST_CASE("load -> save -> load round-trips") {
    auto articles = load_dataset(fixture("tiny.jsonl"));
    fs::path p = fs::temp_directory_path() / "roundtrip.jsonl";
    save_dataset(p.string(), articles);
    auto again = load_dataset(p.string());
    REQUIRE(again.size() == articles.size());
    for (std::size_t i = 0; i < articles.size(); ++i) {
        CHECK(again[i].id == articles[i].id);
        CHECK(again[i].title == articles[i].title);
        CHECK(again[i].text == articles[i].text);
        CHECK(again[i].label == articles[i].label);
        CHECK(again[i].source == articles[i].source);
        CHECK(again[i].pair_id == articles[i].pair_id);
    }
}

TEST_CASE("article_word_count counts whitespace words of title plus text") {
    NewsArticle a;
    a.title = "Two words";
    a.text = "three  more words.";
    CHECK(article_word_count(a) == 5);
}

TEST_CASE("split_dataset: 10 balanced articles at 0.8 give 8/2, label-balanced") {
    std::vector<NewsArticle> arts;
    for (int i = 0; i < 5; ++i) {
        arts.push_back(make("r" + std::to_string(i), Label::Real, 10));
        arts.push_back(make("f" + std::to_string(i), Label::Fake, 10));
    }
    auto split = split_dataset(arts, 0.8, 7);
    CHECK(split.train.size() == 8);
    CHECK(split.test.size() == 2);
    auto count_label = [&](const std::vector<std::string>& ids, char prefix) {
        return std::count_if(ids.begin(), ids.end(),
                             [&](const std::string& id) { return id[0] == prefix; });
    };
    CHECK(count_label(split.train, 'r') == 4);
    CHECK(count_label(split.train, 'f') == 4);
    CHECK(count_label(split.test, 'r') == 1);
    CHECK(count_label(split.test, 'f') == 1);
}

TEST_CASE("split_dataset is a deterministic partition") {
    std::vector<NewsArticle> arts;
    for (int i = 0; i < 13; ++i)
        arts.push_back(make("a" + std::to_string(i),
                            i % 3 == 0 ? Label::Fake : Label::Real, 10));
    auto s1 = split_dataset(arts, 0.8, 123);
    auto s2 = split_dataset(arts, 0.8, 123);
    CHECK(s1.train == s2.train);
    CHECK(s1.test == s2.test);

    std::set<std::string> all(s1.train.begin(), s1.train.end());
    all.insert(s1.test.begin(), s1.test.end());
    CHECK(all.size() == arts.size());
    CHECK(s1.train.size() + s1.test.size() == arts.size());

    auto s3 = split_dataset(arts, 0.8, 124);
    CHECK((s3.train != s1.train || s3.test != s1.test));
}

TEST_CASE("split_dataset: train size is floor(ratio * class size) per class") {
    // 8,253 articles split 80:20 -> 6,602 train.
    std::vector<NewsArticle> arts;
    for (int i = 0; i < 4084; ++i)
        arts.push_back(make("f" + std::to_string(i), Label::Fake, 3));
    for (int i = 0; i < 4169; ++i)
        arts.push_back(make("r" + std::to_string(i), Label::Real, 3));
    auto split = split_dataset(arts, 0.8, 1);
    // floor(0.8*4084) + floor(0.8*4169) = 3267 + 3335 = 6602
    CHECK(split.train.size() == 6602);
    CHECK(split.test.size() == 8253 - 6602);
}

TEST_CASE("split_dataset rejects bad ratios and tiny datasets") {
    std::vector<NewsArticle> arts = {make("a", Label::Real, 3), make("b", Label::Fake, 3)};
    CHECK_THROWS_AS(split_dataset(arts, 0.0, 1), std::runtime_error);
    CHECK_THROWS_AS(split_dataset(arts, 1.0, 1), std::runtime_error);
    CHECK_THROWS_AS(split_dataset({arts[0]}, 0.8, 1), std::runtime_error);
}

TEST_CASE("pair_by_length: single option pairs up") {
    std::vector<NewsArticle> arts = {make("r", Label::Real, 100),
                                     make("f", Label::Fake, 90)};
    auto pairs = pair_by_length(arts);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].first == "r");
    CHECK(pairs[0].second == "f");
}

TEST_CASE("pair_by_length: fake pairs with nearest-length real") {
    std::vector<NewsArticle> arts = {make("r50", Label::Real, 50),
                                     make("r500", Label::Real, 500),
                                     make("f60", Label::Fake, 60)};
    auto pairs = pair_by_length(arts);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].first == "r50");
    CHECK(pairs[0].second == "f60");
}

TEST_CASE("pair_by_length: 4084 fakes and 4169 reals give 4084 pairs") {
    std::vector<NewsArticle> arts;
    for (int i = 0; i < 4084; ++i)
        arts.push_back(make("f" + std::to_string(i), Label::Fake, 50 + i % 200));
    for (int i = 0; i < 4169; ++i)
        arts.push_back(make("r" + std::to_string(i), Label::Real, 60 + i % 180));
    auto pairs = pair_by_length(arts);
    CHECK(pairs.size() == 4084);

    std::set<std::string> seen;
    for (const auto& [r, f] : pairs) {
        CHECK(seen.insert(r).second);
        CHECK(seen.insert(f).second);
    }
}

TEST_CASE("pair_by_length: empty class yields no pairs") {
    std::vector<NewsArticle> arts = {make("r", Label::Real, 10)};
    CHECK(pair_by_length(arts).empty());
}
