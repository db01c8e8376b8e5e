#include "life/textproc.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <unordered_set>

namespace life {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return u < 128 && std::ispunct(u) != 0;
}
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }
bool is_opener(char c) { return c == '"' || c == '\'' || c == '(' || c == '['; }

const std::unordered_set<std::string>& abbreviations() {
    static const std::unordered_set<std::string> abbr = {
        "mr",   "mrs",  "ms",   "dr",   "prof", "st",  "jr",  "sr",  "rev",
        "gen",  "sen",  "rep",  "gov",  "capt", "col", "lt",  "sgt", "ft",
        "mt",   "etc",  "vs",   "inc",  "ltd",  "co",  "corp", "no", "vol",
        "fig",  "approx", "dept", "est", "jan",  "feb", "mar", "apr", "jun",
        "jul",  "aug",  "sep",  "sept", "oct",  "nov", "dec", "e.g", "i.e",
        "u.s",  "u.k",  "a.m",  "p.m",
    };
    return abbr;
}

// Token (letters and interior dots) ending at the '.' at position pos.
std::string token_before_dot(const std::string& text, std::size_t pos) {
    std::size_t end = pos;  // exclusive
    std::size_t begin = end;
    while (begin > 0) {
        char c = text[begin - 1];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '.')
            --begin;
        else
            break;
    }
    std::string tok = text.substr(begin, end - begin);
    std::transform(tok.begin(), tok.end(), tok.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return tok;
}

bool abbreviation_guard(const std::string& text, std::size_t dot_pos) {
    std::string tok = token_before_dot(text, dot_pos);
    return !tok.empty() && abbreviations().count(tok) > 0;
}

// True when the terminator run ending at `end` (exclusive) closes a sentence.
bool closes_sentence(const std::string& text, std::size_t end) {
    std::size_t i = end;
    if (i >= text.size()) return true;
    if (!is_space(text[i])) return false;
    while (i < text.size() && is_space(text[i])) ++i;
    if (i >= text.size()) return true;
    char next = text[i];
    return is_upper(next) || is_digit(next) || is_opener(next);
}

}  // namespace

std::vector<std::string> tokenize_words(const std::string& text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        if (i >= text.size()) break;
        std::size_t j = i;
        while (j < text.size() && !is_space(text[j])) ++j;
        std::size_t a = i, b = j;
        while (a < b && is_punct(text[a])) {
            tokens.push_back(std::string(1, text[a]));
            ++a;
        }
        std::size_t core_end = b;
        while (core_end > a && is_punct(text[core_end - 1])) --core_end;
        if (core_end > a) tokens.push_back(text.substr(a, core_end - a));
        for (std::size_t p = core_end; p < b; ++p) tokens.push_back(std::string(1, text[p]));
        i = j;
    }
    return tokens;
}

std::vector<SentenceSpan> split_sentences(const std::string& text) {
    std::vector<SentenceSpan> spans;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && is_space(text[i])) ++i;
        if (i >= n) break;
        std::size_t start = i;
        std::size_t end = n;
        for (std::size_t j = i; j < n; ++j) {
            char c = text[j];
            if (c != '.' && c != '!' && c != '?') continue;
            std::size_t term_end = j + 1;
            while (term_end < n &&
                   (is_closer(text[term_end]) || text[term_end] == '.' ||
                    text[term_end] == '!' || text[term_end] == '?'))
                ++term_end;
            if (c == '.' && term_end == j + 1 && abbreviation_guard(text, j)) continue;
            if (closes_sentence(text, term_end)) {
                end = term_end;
                break;
            }
        }
        if (end == n) {
            // trailing whitespace stays outside the span
            while (end > start && is_space(text[end - 1])) --end;
        }
        SentenceSpan span;
        span.index = spans.size();
        span.char_start = start;
        span.char_end = end;
        span.text = text.substr(start, end - start);
        span.words = tokenize_words(span.text);
        spans.push_back(std::move(span));
        i = end;
    }
    return spans;
}

MaskedVariant mask_sentence(const std::string& text,
                            const std::vector<SentenceSpan>& spans, std::size_t index) {
    if (index >= spans.size())
        throw std::out_of_range("sentence index " + std::to_string(index) +
                                " out of range (have " + std::to_string(spans.size()) + ")");
    const auto& s = spans[index];
    MaskedVariant v;
    v.masked_index = index;
    v.text = text.substr(0, s.char_start) + "[MASK]" + text.substr(s.char_end);
    return v;
}

}  // namespace life
