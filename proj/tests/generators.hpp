#pragma once

// Deterministic random-input builders shared by the property tests and the
// acceptance suite.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "geometer/domains.hpp"
#include "geometer/transcript.hpp"

namespace gen {

inline const std::vector<std::string>& word_pool() {
  static const std::vector<std::string> pool = {
      "licensed", "operator", "casino", "payout",   "regulator", "register",
      "market",   "brand",    "review", "players",  "terms",     "limits",
      "active",   "audit",    "rates",  "published"};
  return pool;
}

inline const std::vector<std::string>& url_pool() {
  static const std::vector<std::string> pool = {
      "https://brand.com/a",
      "https://promo.brand.com/b",
      "https://news.co.uk/c",
      "https://www.gamblingcommission.gov.uk/d",
      "https://review.example.org/e",
  };
  return pool;
}

// A transcript assembled directly from parts: up to max_sentences sentences
// of 1..9 words, up to max_sources sources, random citation sets. Every
// sentence text is real prose so independent recounts agree.
inline geometer::ResponseTranscript random_transcript(std::mt19937& rng,
                                                      int max_sentences = 8,
                                                      int max_sources = 5) {
  std::uniform_int_distribution<int> sentence_count_dist(1, max_sentences);
  std::uniform_int_distribution<int> source_count_dist(1, max_sources);
  std::uniform_int_distribution<int> word_count_dist(1, 9);
  std::uniform_int_distribution<std::size_t> word_dist(0,
                                                       word_pool().size() - 1);

  geometer::ResponseTranscript t;
  t.query = "generated";
  t.engine_id = "generator";
  t.captured_at = "2026-01-01T00:00:00Z";

  const int n_sources = source_count_dist(rng);
  for (int i = 1; i <= n_sources; ++i) {
    geometer::SourceRecord s;
    s.marker_id = i;
    s.url = url_pool()[static_cast<std::size_t>(i - 1) % url_pool().size()];
    s.domain = geometer::net::registrable_domain(s.url);
    t.sources.push_back(s);
  }

  const int n_sentences = sentence_count_dist(rng);
  std::uniform_int_distribution<int> cite_dist(0, n_sources);
  for (int i = 0; i < n_sentences; ++i) {
    geometer::SentenceSpan span;
    span.index = static_cast<std::size_t>(i);
    const int n_words = word_count_dist(rng);
    std::string body;
    for (int w = 0; w < n_words; ++w) {
      if (!body.empty()) body.push_back(' ');
      body += word_pool()[word_dist(rng)];
    }
    body[0] = static_cast<char>(body[0] - 'a' + 'A');
    body.push_back('.');
    span.text = body;
    span.word_count = static_cast<std::size_t>(n_words);
    std::set<int> cited;
    const int n_cites = cite_dist(rng);
    std::uniform_int_distribution<int> which(1, n_sources);
    for (int c = 0; c < n_cites; ++c) cited.insert(which(rng));
    span.cited_source_ids.assign(cited.begin(), cited.end());
    t.sentences.push_back(std::move(span));
  }
  return t;
}

// Annotated transcript-file bytes whose text embeds markers mid-sentence and
// after terminators, for parser round-trip checks.
inline std::string random_transcript_file(std::mt19937& rng) {
  std::uniform_int_distribution<int> sentence_count_dist(0, 6);
  std::uniform_int_distribution<int> source_count_dist(1, 5);
  std::uniform_int_distribution<int> word_count_dist(1, 7);
  std::uniform_int_distribution<std::size_t> word_dist(0,
                                                       word_pool().size() - 1);
  std::uniform_int_distribution<int> style_dist(0, 2);

  const int n_sources = source_count_dist(rng);
  const int n_sentences = sentence_count_dist(rng);
  std::uniform_int_distribution<int> cite_dist(0, 2);
  std::uniform_int_distribution<int> which(1, n_sources);

  std::string body;
  for (int i = 0; i < n_sentences; ++i) {
    std::string sentence;
    const int n_words = word_count_dist(rng);
    for (int w = 0; w < n_words; ++w) {
      if (!sentence.empty()) sentence.push_back(' ');
      sentence += word_pool()[word_dist(rng)];
    }
    sentence[0] = static_cast<char>(sentence[0] - 'a' + 'A');

    std::set<int> cited;
    const int n_cites = cite_dist(rng);
    for (int c = 0; c < n_cites; ++c) cited.insert(which(rng));
    std::string markers;
    for (int id : cited) markers += "[" + std::to_string(id) + "]";

    const int style = style_dist(rng);
    if (!markers.empty() && style == 0) {
      sentence += " " + markers + ".";  // inline before the period
    } else if (!markers.empty() && style == 1) {
      sentence += ". " + markers;  // trailing, after the period
    } else if (!markers.empty()) {
      sentence += markers + ".";  // glued to the last word
    } else {
      sentence += ".";
    }
    if (!body.empty()) body.push_back(' ');
    body += sentence;
  }

  nlohmann::json j;
  j["query"] = "generated";
  j["engine"] = "generator";
  j["captured_at"] = "2026-01-01T00:00:00Z";
  j["text"] = body;
  nlohmann::json sources = nlohmann::json::array();
  for (int i = 1; i <= n_sources; ++i) {
    sources.push_back({{"id", i},
                       {"url", url_pool()[static_cast<std::size_t>(i - 1) %
                                          url_pool().size()]}});
  }
  j["sources"] = std::move(sources);
  return j.dump();
}

}  // namespace gen
