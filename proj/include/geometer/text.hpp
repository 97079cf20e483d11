#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Byte-level text primitives shared by the transcript parser and the content
// detectors. The rules are deliberately ASCII-anchored so that every count is
// reproducible: a token is a word when it contains at least one ASCII
// alphanumeric byte, and case folding touches ASCII letters only.
namespace geometer::text {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline bool is_alnum(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline char fold_char(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

// Whitespace-delimited chunks, in order. Views into the input.
std::vector<std::string_view> tokens(std::string_view s);

// True when the token contains at least one ASCII alphanumeric.
bool is_word(std::string_view token);

// Number of word tokens in s.
std::size_t word_count(std::string_view s);

// ASCII-lowercased copy.
std::string fold(std::string_view s);

// Token with leading/trailing non-alphanumerics stripped, then folded.
// Detector matching happens on normalized tokens; storage keeps raw case.
std::string normalize_token(std::string_view token);

std::string_view trim(std::string_view s);

// Whitespace runs collapsed to single spaces, ends trimmed.
std::string collapse_whitespace(std::string_view s);

// collapse_whitespace plus removal of the spaces that marker deletion leaves
// in front of closing punctuation ("casino ." -> "casino.").
std::string tidy_sentence(std::string_view s);

// Strips common Markdown markup so a .md document can be measured as prose:
// heading/list/blockquote prefixes, emphasis and code fences are dropped,
// [text](url) becomes "text (url)" so linked references stay countable.
std::string strip_markdown(std::string_view s);

}  // namespace geometer::text
