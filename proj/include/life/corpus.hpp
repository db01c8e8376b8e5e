#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace life {

enum class Label : int { Real = 0, Fake = 1 };

struct NewsArticle {
    std::string id;
    std::string title;
    std::string text;
    Label label = Label::Real;
    std::optional<std::string> source;
    std::optional<std::string> pair_id;
};

struct DatasetSplit {
    std::vector<std::string> train;
    std::vector<std::string> test;
    uint64_t seed = 0;
};

// JSONL, one object per line: {"id","title","text","label",("source"),("pair_id")}.
// Throws std::runtime_error naming the offending line / id on malformed input,
// duplicate ids, or dangling/duplicated pair links.
std::vector<NewsArticle> load_dataset(const std::string& path);

void save_dataset(const std::string& path, const std::vector<NewsArticle>& articles);

// Whitespace word count of title + text; the length used for pairing.
std::size_t article_word_count(const NewsArticle& a);

// Deterministic stratified split: per label class, floor(ratio * class_size)
// articles go to train. Throws on ratio outside (0,1) or fewer than 2 articles.
DatasetSplit split_dataset(const std::vector<NewsArticle>& articles, double ratio,
                           uint64_t seed);

// Greedy nearest-length matching of each fake article to an unmatched real
// article; ties broken by lexicographic id. Returns (real_id, fake_id) pairs,
// |pairs| = min(#real, #fake). Leftovers are simply not paired.
std::vector<std::pair<std::string, std::string>> pair_by_length(
    const std::vector<NewsArticle>& articles);

}  // namespace life
