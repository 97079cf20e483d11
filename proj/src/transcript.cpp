#include "geometer/transcript.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "geometer/domains.hpp"
#include "geometer/errors.hpp"
#include "geometer/text.hpp"

namespace geometer {

namespace {

struct MarkerSite {
  int id = 0;
  std::size_t clean_pos = 0;  // offset into the marker-free text
};

// Splits annotated text into the marker-free string plus the marker ids with
// their positions in it. "[123]" is a marker; anything else (including
// over-long digit runs) stays literal text.
std::pair<std::string, std::vector<MarkerSite>> lex_markers(
    std::string_view annotated) {
  std::string clean;
  clean.reserve(annotated.size());
  std::vector<MarkerSite> markers;
  std::size_t i = 0;
  const std::size_t n = annotated.size();
  while (i < n) {
    if (annotated[i] == '[') {
      std::size_t j = i + 1;
      while (j < n && text::is_digit(annotated[j])) ++j;
      if (j > i + 1 && j < n && annotated[j] == ']' && j - i - 1 <= 9) {
        int id = 0;
        for (std::size_t k = i + 1; k < j; ++k) {
          id = id * 10 + (annotated[k] - '0');
        }
        markers.push_back({id, clean.size()});
        i = j + 1;
        continue;
      }
    }
    clean.push_back(annotated[i]);
    ++i;
  }
  return {std::move(clean), std::move(markers)};
}

}  // namespace

std::size_t word_count(std::string_view span_text) {
  return text::word_count(span_text);
}

std::size_t ResponseTranscript::total_word_count() const {
  std::size_t total = 0;
  for (const SentenceSpan& s : sentences) total += s.word_count;
  return total;
}

const SourceRecord* ResponseTranscript::find_source(int marker_id) const {
  for (const SourceRecord& s : sources) {
    if (s.marker_id == marker_id) return &s;
  }
  return nullptr;
}

std::vector<SentenceSpan> segment_sentences(
    std::string_view annotated_text, const text::SegmentationOptions& options) {
  auto [clean, markers] = lex_markers(annotated_text);
  const auto ranges = text::sentence_ranges(clean, options);

  std::vector<SentenceSpan> spans;
  spans.reserve(ranges.size());
  std::vector<std::set<int>> cited(ranges.size());
  for (std::size_t k = 0; k < ranges.size(); ++k) {
    SentenceSpan span;
    span.index = k;
    span.text = text::tidy_sentence(
        std::string_view(clean).substr(ranges[k].first,
                                       ranges[k].second - ranges[k].first));
    span.word_count = text::word_count(span.text);
    spans.push_back(std::move(span));
  }

  // Attribution: a marker inside a sentence belongs to it; a marker in the
  // gap after a sentence binds backward; one before the first sentence binds
  // forward to it.
  for (const MarkerSite& m : markers) {
    if (spans.empty()) {
      // markers with no prose at all: keep binding total via an empty span
      spans.push_back(SentenceSpan{0, "", 0, {}});
      cited.emplace_back();
    }
    std::size_t target = 0;
    for (std::size_t k = 1; k < ranges.size(); ++k) {
      if (ranges[k].first < m.clean_pos) {
        target = k;
      } else {
        break;
      }
    }
    cited[target].insert(m.id);
  }
  for (std::size_t k = 0; k < spans.size(); ++k) {
    spans[k].cited_source_ids.assign(cited[k].begin(), cited[k].end());
  }
  return spans;
}

ResponseTranscript make_transcript(std::string query, std::string engine_id,
                                   std::string captured_at,
                                   std::string_view annotated_text,
                                   std::vector<SourceRecord> sources,
                                   const text::SegmentationOptions& options) {
  ResponseTranscript t;
  t.query = std::move(query);
  t.engine_id = std::move(engine_id);
  t.captured_at = std::move(captured_at);
  t.sources = std::move(sources);

  std::set<int> ids;
  for (SourceRecord& source : t.sources) {
    if (source.marker_id < 1) {
      throw validation_error("source marker id must be a positive integer, got " +
                             std::to_string(source.marker_id));
    }
    if (!ids.insert(source.marker_id).second) {
      throw duplication_error(
          "duplicate source marker id " + std::to_string(source.marker_id),
          source.marker_id);
    }
    if (source.domain.empty()) {
      source.domain = net::registrable_domain(source.url);
    }
  }

  t.sentences = segment_sentences(annotated_text, options);
  for (const SentenceSpan& span : t.sentences) {
    for (int id : span.cited_source_ids) {
      if (!ids.count(id)) {
        throw referential_error("citation [" + std::to_string(id) +
                                    "] has no matching source",
                                id);
      }
    }
  }
  return t;
}

namespace {

std::string require_string(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw validation_error(std::string("transcript field '") + key +
                           "' missing or not a string");
  }
  return j[key].get<std::string>();
}

std::vector<SourceRecord> sources_from_json(const nlohmann::json& arr) {
  if (!arr.is_array()) {
    throw validation_error("transcript field 'sources' must be an array");
  }
  std::vector<SourceRecord> sources;
  sources.reserve(arr.size());
  for (const auto& item : arr) {
    if (!item.is_object() || !item.contains("id") ||
        !item["id"].is_number_integer()) {
      throw validation_error("source entry must be an object with integer 'id'");
    }
    SourceRecord s;
    s.marker_id = item["id"].get<int>();
    if (item.contains("url")) {
      if (!item["url"].is_string()) {
        throw validation_error("source 'url' must be a string");
      }
      s.url = item["url"].get<std::string>();
    }
    if (item.contains("title") && item["title"].is_string()) {
      s.title = item["title"].get<std::string>();
    }
    if (item.contains("domain") && item["domain"].is_string()) {
      s.domain = item["domain"].get<std::string>();
    }
    sources.push_back(std::move(s));
  }
  return sources;
}

}  // namespace

ResponseTranscript parse_transcript_file(
    std::string_view bytes, const text::SegmentationOptions& options) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("malformed transcript file: ") + e.what(),
                      e.byte);
  }
  if (!j.is_object()) {
    throw validation_error("transcript file must be a JSON object");
  }
  std::string query = require_string(j, "query");
  std::string engine = require_string(j, "engine");
  std::string captured = require_string(j, "captured_at");
  std::string body = require_string(j, "text");
  if (!j.contains("sources")) {
    throw validation_error("transcript field 'sources' missing");
  }
  return make_transcript(std::move(query), std::move(engine),
                         std::move(captured), body,
                         sources_from_json(j["sources"]), options);
}

std::string serialize_transcript_file(const ResponseTranscript& transcript) {
  std::string body;
  for (const SentenceSpan& span : transcript.sentences) {
    if (!body.empty() && !span.text.empty()) body.push_back(' ');
    body += span.text;
    if (!span.cited_source_ids.empty()) {
      body.push_back(' ');
      for (int id : span.cited_source_ids) {
        body += "[" + std::to_string(id) + "]";
      }
    }
  }
  nlohmann::json j;
  j["query"] = transcript.query;
  j["engine"] = transcript.engine_id;
  j["captured_at"] = transcript.captured_at;
  j["text"] = body;
  nlohmann::json sources = nlohmann::json::array();
  for (const SourceRecord& s : transcript.sources) {
    nlohmann::json item;
    item["id"] = s.marker_id;
    item["url"] = s.url;
    if (!s.title.empty()) item["title"] = s.title;
    sources.push_back(std::move(item));
  }
  j["sources"] = std::move(sources);
  return j.dump(2) + "\n";
}

nlohmann::json transcript_to_json(const ResponseTranscript& transcript) {
  nlohmann::json j;
  j["query"] = transcript.query;
  j["engine"] = transcript.engine_id;
  j["captured_at"] = transcript.captured_at;
  nlohmann::json sentences = nlohmann::json::array();
  for (const SentenceSpan& span : transcript.sentences) {
    sentences.push_back({{"index", span.index},
                         {"text", span.text},
                         {"word_count", span.word_count},
                         {"cites", span.cited_source_ids}});
  }
  j["sentences"] = std::move(sentences);
  nlohmann::json sources = nlohmann::json::array();
  for (const SourceRecord& s : transcript.sources) {
    nlohmann::json item;
    item["id"] = s.marker_id;
    item["url"] = s.url;
    item["domain"] = s.domain;
    if (!s.title.empty()) item["title"] = s.title;
    sources.push_back(std::move(item));
  }
  j["sources"] = std::move(sources);
  return j;
}

ResponseTranscript transcript_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw validation_error("transcript JSON must be an object");
  }
  ResponseTranscript t;
  t.query = require_string(j, "query");
  t.engine_id = require_string(j, "engine");
  t.captured_at = require_string(j, "captured_at");
  if (!j.contains("sources")) {
    throw validation_error("transcript field 'sources' missing");
  }
  t.sources = sources_from_json(j["sources"]);
  std::set<int> ids;
  for (SourceRecord& s : t.sources) {
    if (!ids.insert(s.marker_id).second) {
      throw duplication_error(
          "duplicate source marker id " + std::to_string(s.marker_id),
          s.marker_id);
    }
    if (s.domain.empty()) s.domain = net::registrable_domain(s.url);
  }
  if (!j.contains("sentences") || !j["sentences"].is_array()) {
    throw validation_error("transcript field 'sentences' missing");
  }
  std::size_t expected_index = 0;
  for (const auto& item : j["sentences"]) {
    SentenceSpan span;
    span.index = item.at("index").get<std::size_t>();
    if (span.index != expected_index++) {
      throw validation_error("sentence indices must be contiguous from 0");
    }
    span.text = item.at("text").get<std::string>();
    span.word_count = item.at("word_count").get<std::size_t>();
    if (item.contains("cites")) {
      span.cited_source_ids = item["cites"].get<std::vector<int>>();
      std::sort(span.cited_source_ids.begin(), span.cited_source_ids.end());
      span.cited_source_ids.erase(std::unique(span.cited_source_ids.begin(),
                                              span.cited_source_ids.end()),
                                  span.cited_source_ids.end());
      for (int id : span.cited_source_ids) {
        if (!ids.count(id)) {
          throw referential_error("citation [" + std::to_string(id) +
                                      "] has no matching source",
                                  id);
        }
      }
    }
    t.sentences.push_back(std::move(span));
  }
  return t;
}

std::vector<SourceRecord> parse_sources_tsv(std::string_view bytes) {
  std::vector<SourceRecord> sources;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= bytes.size()) {
    std::size_t nl = bytes.find('\n', start);
    std::string_view line = bytes.substr(
        start, nl == std::string_view::npos ? bytes.size() - start
                                            : nl - start);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!text::trim(line).empty()) {
      std::size_t tab = line.find('\t');
      if (tab == std::string_view::npos) {
        throw validation_error("sources line " + std::to_string(line_no) +
                               ": expected id<TAB>url");
      }
      std::string_view id_part = text::trim(line.substr(0, tab));
      SourceRecord s;
      s.marker_id = 0;
      for (char c : id_part) {
        if (!text::is_digit(c)) {
          throw validation_error("sources line " + std::to_string(line_no) +
                                 ": id is not a positive integer");
        }
        s.marker_id = s.marker_id * 10 + (c - '0');
      }
      if (id_part.empty() || s.marker_id < 1) {
        throw validation_error("sources line " + std::to_string(line_no) +
                               ": id is not a positive integer");
      }
      std::string_view rest = line.substr(tab + 1);
      if (std::size_t tab2 = rest.find('\t'); tab2 != std::string_view::npos) {
        s.url = std::string(text::trim(rest.substr(0, tab2)));
        s.title = std::string(text::trim(rest.substr(tab2 + 1)));
      } else {
        s.url = std::string(text::trim(rest));
      }
      sources.push_back(std::move(s));
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return sources;
}

}  // namespace geometer
