#include "geometer/sentences.hpp"

#include <algorithm>

#include "geometer/text.hpp"

namespace geometer::text {

namespace {

constexpr std::string_view kCurlyOpen = "\xe2\x80\x9c";    // U+201C
constexpr std::string_view kCurlyClose = "\xe2\x80\x9d";   // U+201D
constexpr std::string_view kSingleOpen = "\xe2\x80\x98";   // U+2018
constexpr std::string_view kSingleClose = "\xe2\x80\x99";  // U+2019
constexpr std::string_view kGuillemetClose = "\xc2\xbb";   // U+00BB

bool starts_with_at(std::string_view s, std::size_t i, std::string_view pat) {
  return s.compare(i, pat.size(), pat) == 0;
}

// Length of a closing-quote/bracket sequence at i, 0 if none.
std::size_t closer_len(std::string_view s, std::size_t i) {
  if (i >= s.size()) return 0;
  char c = s[i];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  if (starts_with_at(s, i, kCurlyClose) || starts_with_at(s, i, kSingleClose))
    return 3;
  if (starts_with_at(s, i, kGuillemetClose)) return 2;
  return 0;
}

// True when position i can open the next sentence: ASCII uppercase, digit,
// or an opening quote.
bool opens_sentence(std::string_view s, std::size_t i) {
  if (i >= s.size()) return false;
  char c = s[i];
  if ((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) return true;
  if (c == '"' || c == '\'') return true;
  return starts_with_at(s, i, kCurlyOpen) || starts_with_at(s, i, kSingleOpen);
}

// The non-whitespace chunk ending at punctuation position i (inclusive),
// with leading punctuation stripped, folded.
std::string chunk_ending_at(std::string_view s, std::size_t i) {
  std::size_t start = i;
  while (start > 0 && !is_space(s[start - 1])) --start;
  std::string_view chunk = s.substr(start, i - start + 1);
  std::size_t b = 0;
  while (b < chunk.size() && !is_alnum(chunk[b])) ++b;
  return fold(chunk.substr(b));
}

}  // namespace

SegmentationOptions SegmentationOptions::defaults() {
  return SegmentationOptions{{"e.g.", "i.e.", "ltd.", "no.", "vs."}};
}

SegmentationOptions SegmentationOptions::with_extra(
    const std::vector<std::string>& extra) {
  SegmentationOptions opts = defaults();
  for (const std::string& entry : extra) {
    std::string folded = fold(entry);
    if (folded.empty()) continue;
    if (folded.back() != '.') folded.push_back('.');
    if (std::find(opts.abbreviations.begin(), opts.abbreviations.end(),
                  folded) == opts.abbreviations.end()) {
      opts.abbreviations.push_back(std::move(folded));
    }
  }
  return opts;
}

std::vector<std::pair<std::size_t, std::size_t>> sentence_ranges(
    std::string_view s, const SegmentationOptions& options) {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  const std::size_t n = s.size();
  std::size_t sentence_start = 0;
  std::size_t i = 0;
  while (i < n) {
    char c = s[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    while (std::size_t len = closer_len(s, end)) end += len;
    std::size_t next = end;
    while (next < n && is_space(s[next])) ++next;
    bool boundary = next > end && opens_sentence(s, next);
    if (boundary && c == '.') {
      const std::string chunk = chunk_ending_at(s, i);
      boundary = std::find(options.abbreviations.begin(),
                           options.abbreviations.end(),
                           chunk) == options.abbreviations.end();
    }
    if (boundary) {
      ranges.emplace_back(sentence_start, end);
      sentence_start = next;
    }
    i = end;
  }
  // trailing material, if any
  std::string_view tail = s.substr(sentence_start);
  if (!trim(tail).empty()) {
    ranges.emplace_back(sentence_start, n);
  }
  // shrink each range to its trimmed extent
  for (auto& [begin, end] : ranges) {
    while (begin < end && is_space(s[begin])) ++begin;
    while (end > begin && is_space(s[end - 1])) --end;
  }
  return ranges;
}

std::vector<std::string_view> split_sentences(
    std::string_view s, const SegmentationOptions& options) {
  std::vector<std::string_view> out;
  for (auto [begin, end] : sentence_ranges(s, options)) {
    out.push_back(s.substr(begin, end - begin));
  }
  return out;
}

}  // namespace geometer::text
