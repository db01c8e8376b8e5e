#include "life/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace life {

using nlohmann::json;

namespace {

bool is_blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

NewsArticle parse_record(const json& j, std::size_t line_no) {
    auto fail = [line_no](const std::string& what) -> std::runtime_error {
        return std::runtime_error("line " + std::to_string(line_no) + ": " + what);
    };
    if (!j.is_object()) throw fail("record is not a JSON object");
    for (const char* field : {"id", "title", "text", "label"}) {
        if (!j.contains(field)) throw fail(std::string("missing field \"") + field + "\"");
    }
    NewsArticle a;
    if (!j["id"].is_string()) throw fail("\"id\" must be a string");
    a.id = j["id"].get<std::string>();
    if (!j["title"].is_string()) throw fail("\"title\" must be a string");
    a.title = j["title"].get<std::string>();
    if (!j["text"].is_string()) throw fail("\"text\" must be a string");
    a.text = j["text"].get<std::string>();
    if (is_blank(a.text)) throw fail("\"text\" is empty after trimming");
    if (!j["label"].is_number_integer()) throw fail("\"label\" must be 0 or 1");
    int label = j["label"].get<int>();
    if (label != 0 && label != 1) throw fail("\"label\" must be 0 or 1");
    a.label = static_cast<Label>(label);
    if (j.contains("source")) {
        if (!j["source"].is_string()) throw fail("\"source\" must be a string");
        a.source = j["source"].get<std::string>();
    }
    if (j.contains("pair_id")) {
        if (!j["pair_id"].is_string()) throw fail("\"pair_id\" must be a string");
        a.pair_id = j["pair_id"].get<std::string>();
    }
    return a;
}

void check_pair_links(const std::vector<NewsArticle>& articles) {
    std::unordered_map<std::string, std::vector<const NewsArticle*>> by_pair;
    for (const auto& a : articles) {
        if (a.pair_id) by_pair[*a.pair_id].push_back(&a);
    }
    for (const auto& [pid, members] : by_pair) {
        if (members.size() != 2)
            throw std::runtime_error("pair_id \"" + pid + "\" links " +
                                     std::to_string(members.size()) + " articles, expected 2");
        if (members[0]->label == members[1]->label)
            throw std::runtime_error("pair_id \"" + pid + "\" links two articles with the same label");
    }
}

}  // namespace

std::vector<NewsArticle> load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);

    std::vector<NewsArticle> articles;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw std::runtime_error("line " + std::to_string(line_no) + ": malformed JSON");
        NewsArticle a = parse_record(j, line_no);
        if (!seen_ids.insert(a.id).second)
            throw std::runtime_error("line " + std::to_string(line_no) + ": duplicate id \"" +
                                     a.id + "\"");
        articles.push_back(std::move(a));
    }
    check_pair_links(articles);
    return articles;
}

void save_dataset(const std::string& path, const std::vector<NewsArticle>& articles) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& a : articles) {
        json j;
        j["id"] = a.id;
        j["title"] = a.title;
        j["text"] = a.text;
        j["label"] = static_cast<int>(a.label);
        if (a.source) j["source"] = *a.source;
        if (a.pair_id) j["pair_id"] = *a.pair_id;
        out << j.dump() << "\n";
    }
}

std::size_t article_word_count(const NewsArticle& a) {
    std::istringstream ss(a.title + " " + a.text);
    std::string w;
    std::size_t n = 0;
    while (ss >> w) ++n;
    return n;
}

DatasetSplit split_dataset(const std::vector<NewsArticle>& articles, double ratio,
                           uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::runtime_error("split ratio must be in (0,1)");
    if (articles.size() < 2) throw std::runtime_error("need at least 2 articles to split");

    DatasetSplit split;
    split.seed = seed;
    for (int label : {0, 1}) {
        std::vector<std::string> ids;
        for (const auto& a : articles)
            if (static_cast<int>(a.label) == label) ids.push_back(a.id);
        // Deterministic regardless of input order.
        std::sort(ids.begin(), ids.end());
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (label + 1)));
        std::shuffle(ids.begin(), ids.end(), rng);
        std::size_t n_train = static_cast<std::size_t>(std::floor(ratio * ids.size()));
        for (std::size_t i = 0; i < ids.size(); ++i)
            (i < n_train ? split.train : split.test).push_back(ids[i]);
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

std::vector<std::pair<std::string, std::string>> pair_by_length(
    const std::vector<NewsArticle>& articles) {
    struct Entry {
        std::string id;
        long long len;
    };
    std::vector<Entry> reals, fakes;
    for (const auto& a : articles) {
        Entry e{a.id, static_cast<long long>(article_word_count(a))};
        (a.label == Label::Real ? reals : fakes).push_back(e);
    }
    auto by_id = [](const Entry& x, const Entry& y) { return x.id < y.id; };
    std::sort(fakes.begin(), fakes.end(), by_id);
    // Reals sorted by (length, id) so the nearest unmatched real is a scan.
    std::sort(reals.begin(), reals.end(), [](const Entry& x, const Entry& y) {
        return x.len != y.len ? x.len < y.len : x.id < y.id;
    });
    std::vector<bool> used(reals.size(), false);

    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& f : fakes) {
        long long best_dist = -1;
        std::size_t best = reals.size();
        for (std::size_t i = 0; i < reals.size(); ++i) {
            if (used[i]) continue;
            long long dist = std::llabs(reals[i].len - f.len);
            if (best == reals.size() || dist < best_dist ||
                (dist == best_dist && reals[i].id < reals[best].id)) {
                best = i;
                best_dist = dist;
            }
        }
        if (best == reals.size()) break;  // reals exhausted
        used[best] = true;
        pairs.emplace_back(reals[best].id, f.id);
    }
    return pairs;
}

}  // namespace life
