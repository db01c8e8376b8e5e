#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace life {

struct SentenceSpan {
    std::size_t index = 0;
    std::size_t char_start = 0;
    std::size_t char_end = 0;  // exclusive
    std::string text;          // the span's characters
    std::vector<std::string> words;
};

struct MaskedVariant {
    std::size_t masked_index = 0;
    std::string text;
};

// Rule-based segmentation: a sentence ends at . ! ? (plus trailing closing
// quotes/brackets) followed by whitespace and a capital letter, digit, or
// opening quote. An abbreviation guard list suppresses splits after e.g.
// "Dr." or "Mrs.". Text with no terminator is one sentence.
std::vector<SentenceSpan> split_sentences(const std::string& text);

// Whitespace split, then leading/trailing ASCII punctuation peeled off into
// separate single-char tokens. Interior punctuation (hyphens, apostrophes)
// stays attached.
std::vector<std::string> tokenize_words(const std::string& text);

// Replaces spans[index] with the literal "[MASK]". Throws on bad index.
MaskedVariant mask_sentence(const std::string& text,
                            const std::vector<SentenceSpan>& spans, std::size_t index);

}  // namespace life
