#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "geometer/sentences.hpp"

namespace geometer {

// One cited source of a generative-engine answer.
struct SourceRecord {
  int marker_id = 0;       // unique within a transcript, >= 1
  std::string url;
  std::string domain;      // registrable domain of url, lowercased
  std::string title;       // empty == absent

  friend bool operator==(const SourceRecord&, const SourceRecord&) = default;
};

// One sentence with its citation attributions. `text` has the inline [n]
// markers removed; `word_count` is the number of whitespace-delimited tokens
// of `text` containing at least one ASCII alphanumeric.
struct SentenceSpan {
  std::size_t index = 0;
  std::string text;
  std::size_t word_count = 0;
  std::vector<int> cited_source_ids;  // sorted, duplicates collapsed

  friend bool operator==(const SentenceSpan&, const SentenceSpan&) = default;
};

// A normalized generative-engine answer: ordered sentences plus the source
// list their citation markers refer to.
struct ResponseTranscript {
  std::string query;
  std::string engine_id;
  std::string captured_at;  // ISO-8601 UTC
  std::vector<SentenceSpan> sentences;
  std::vector<SourceRecord> sources;

  std::size_t total_word_count() const;
  const SourceRecord* find_source(int marker_id) const;

  friend bool operator==(const ResponseTranscript&,
                         const ResponseTranscript&) = default;
};

// Number of word tokens under the transcript token rule. Expects citation
// markers to be gone already.
std::size_t word_count(std::string_view span_text);

// Splits annotated answer text into sentences, removing the [n] citation
// markers and attributing each one to a sentence. A marker sitting between
// a sentence terminator and the next sentence's first token binds backward
// to the sentence it follows.
std::vector<SentenceSpan> segment_sentences(
    std::string_view annotated_text,
    const text::SegmentationOptions& options =
        text::SegmentationOptions::defaults());

// Assembles and validates a transcript from its raw pieces. Throws
// duplication_error for reused marker ids and referential_error for markers
// citing unknown sources. Source domains are derived from their URLs.
ResponseTranscript make_transcript(
    std::string query, std::string engine_id, std::string captured_at,
    std::string_view annotated_text, std::vector<SourceRecord> sources,
    const text::SegmentationOptions& options =
        text::SegmentationOptions::defaults());

// Parses the JSON transcript file format:
//   {"query": str, "engine": str, "captured_at": str, "text": str,
//    "sources": [{"id": int, "url": str, "title": str?}]}
// Throws parse_error (with byte offset) on bad syntax, validation_error on
// missing/ill-typed fields, and the make_transcript errors.
ResponseTranscript parse_transcript_file(
    std::string_view bytes, const text::SegmentationOptions& options =
                                text::SegmentationOptions::defaults());

// Re-serializes a transcript to the file format. Citation markers are
// emitted after each sentence; parsing the output again yields an identical
// transcript.
std::string serialize_transcript_file(const ResponseTranscript& transcript);

// Normalized JSON form with explicit sentences, used by the run store.
nlohmann::json transcript_to_json(const ResponseTranscript& transcript);
ResponseTranscript transcript_from_json(const nlohmann::json& j);

// Sidecar source list: one "id<TAB>url[<TAB>title]" line per source.
std::vector<SourceRecord> parse_sources_tsv(std::string_view bytes);

}  // namespace geometer
