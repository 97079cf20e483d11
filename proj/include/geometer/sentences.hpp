#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace geometer::text {

// Controls boundary detection. Abbreviation entries are stored folded and
// include the trailing dot ("e.g.", "ltd."); a candidate split is suppressed
// when the chunk ending at the punctuation mark matches one of them.
struct SegmentationOptions {
  std::vector<std::string> abbreviations;

  static SegmentationOptions defaults();

  // defaults() plus caller-supplied entries.
  static SegmentationOptions with_extra(
      const std::vector<std::string>& extra);
};

// Byte ranges [begin, end) of the sentences of s, in order. A sentence ends
// after '.', '!' or '?' (plus any closing quotes/brackets) when followed by
// whitespace and an ASCII uppercase letter, a digit or an opening quote.
// Trailing material without a terminator forms the final sentence. The gaps
// between ranges are whitespace only.
std::vector<std::pair<std::size_t, std::size_t>> sentence_ranges(
    std::string_view s, const SegmentationOptions& options);

// Convenience wrapper returning trimmed views of the ranges.
std::vector<std::string_view> split_sentences(
    std::string_view s, const SegmentationOptions& options);

}  // namespace geometer::text
