#include "geometer/content.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "geometer/errors.hpp"
#include "geometer/text.hpp"

namespace geometer::content {

namespace {

constexpr std::array<const char*, 9> kStrategyNames = {
    "keyword_stuffing",     "cite_sources",        "statistics_addition",
    "quotation_addition",   "easy_to_understand",  "fluency_optimization",
    "unique_words",         "technical_terms",     "authoritative_tone",
};

constexpr std::array<const char*, 4> kTierNames = {
    "p<0.01", "p<0.05", "p<0.10", "not_significant"};

const std::vector<std::string>& default_technical_terms() {
  static const std::vector<std::string> terms = {
      "licence",    "licensing",  "compliance", "regulator", "regulatory",
      "aml",        "kyc",        "rtp",        "wagering",  "odds",
      "jurisdiction", "schema",   "taxonomy",   "audit",     "certification",
      "licensee",   "safeguarding"};
  return terms;
}

const std::vector<std::string>& default_hedge_words() {
  static const std::vector<std::string> words = {
      "may",      "might",    "could",   "possibly", "perhaps", "arguably",
      "likely",   "somewhat", "probably", "seemingly", "appears", "suggests",
      "roughly",  "maybe"};
  return words;
}

const std::vector<std::string>& default_declarative_markers() {
  static const std::vector<std::string> markers = {
      "must",      "will",      "is",        "are",       "requires",
      "ensures",   "guarantees", "demonstrates", "confirms", "establishes",
      "always",    "never",     "shall",     "mandates"};
  return markers;
}

std::vector<std::string> folded_unique(std::vector<std::string> entries) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (std::string& e : entries) {
    std::string folded = text::fold(text::trim(e));
    if (!folded.empty() && seen.insert(folded).second) {
      out.push_back(std::move(folded));
    }
  }
  return out;
}

std::unordered_set<std::string> as_set(const std::vector<std::string>& v) {
  return {v.begin(), v.end()};
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

std::string to_string(Strategy s) {
  return kStrategyNames[static_cast<std::size_t>(s)];
}

std::optional<Strategy> strategy_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kStrategyNames.size(); ++i) {
    if (name == kStrategyNames[i]) return static_cast<Strategy>(i);
  }
  return std::nullopt;
}

std::string to_string(SignificanceTier tier) {
  return kTierNames[static_cast<std::size_t>(tier)];
}

std::optional<SignificanceTier> tier_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kTierNames.size(); ++i) {
    if (name == kTierNames[i]) return static_cast<SignificanceTier>(i);
  }
  return std::nullopt;
}

std::array<StrategyPrior, 9> default_priors() {
  using S = Strategy;
  using T = SignificanceTier;
  return {{
      {S::cite_sources, 40.0, T::p_lt_01},
      {S::statistics_addition, 37.0, T::p_lt_01},
      {S::quotation_addition, 22.0, T::p_lt_05},
      {S::authoritative_tone, 15.0, T::p_lt_05},
      {S::technical_terms, 12.0, T::p_lt_10},
      {S::fluency_optimization, 10.0, T::p_lt_10},
      {S::unique_words, 8.0, T::not_significant},
      {S::easy_to_understand, 5.0, T::not_significant},
      {S::keyword_stuffing, 3.0, T::not_significant},
  }};
}

nlohmann::json priors_to_json(std::span<const StrategyPrior> priors) {
  nlohmann::json arr = nlohmann::json::array();
  for (const StrategyPrior& p : priors) {
    arr.push_back({{"strategy", to_string(p.strategy)},
                   {"relative_improvement_percent",
                    p.relative_improvement_percent},
                   {"significance", to_string(p.tier)}});
  }
  return arr;
}

std::vector<StrategyPrior> priors_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw config_error("priors table must be a JSON array");
  std::vector<StrategyPrior> out;
  for (const auto& item : j) {
    auto strategy = strategy_from_string(item.at("strategy").get<std::string>());
    auto tier = tier_from_string(item.at("significance").get<std::string>());
    if (!strategy || !tier) {
      throw config_error("priors table entry with unknown strategy or tier");
    }
    out.push_back({*strategy,
                   item.at("relative_improvement_percent").get<double>(),
                   *tier});
  }
  return out;
}

text::SegmentationOptions AnalyzerConfig::segmentation() const {
  return text::SegmentationOptions::with_extra(extra_abbreviations);
}

AnalyzerConfig AnalyzerConfig::defaults() {
  AnalyzerConfig c;
  c.technical_terms = default_technical_terms();
  c.hedge_words = default_hedge_words();
  c.declarative_markers = default_declarative_markers();
  return c;
}

AnalyzerConfig AnalyzerConfig::from_json(const nlohmann::json& j,
                                         const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw config_error("analyzer config must be an object");
  AnalyzerConfig c = defaults();
  auto read_list = [&](const char* key, const char* file_key,
                       std::vector<std::string>& target) {
    std::vector<std::string> entries;
    if (j.contains(key)) {
      if (!j[key].is_array()) {
        throw config_error(std::string("analyzer config key '") + key +
                           "' must be an array");
      }
      for (const auto& e : j[key]) entries.push_back(e.get<std::string>());
    }
    if (j.contains(file_key)) {
      std::filesystem::path p = j[file_key].get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      std::ifstream in(p);
      if (!in) {
        throw config_error("cannot read lexicon file " + p.string());
      }
      std::string line;
      while (std::getline(in, line)) {
        if (!std::string(text::trim(line)).empty()) entries.push_back(line);
      }
    }
    if (!entries.empty()) target = std::move(entries);
  };
  read_list("keywords", "keyword_file", c.keywords);
  read_list("technical_terms", "technical_terms_file", c.technical_terms);
  read_list("hedge_words", "hedge_file", c.hedge_words);
  read_list("declarative_markers", "declarative_file", c.declarative_markers);
  read_list("abbreviations", "abbreviations_file", c.extra_abbreviations);
  c.keywords = folded_unique(std::move(c.keywords));
  c.technical_terms = folded_unique(std::move(c.technical_terms));
  c.hedge_words = folded_unique(std::move(c.hedge_words));
  c.declarative_markers = folded_unique(std::move(c.declarative_markers));
  return c;
}

AnalyzerConfig AnalyzerConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw io_error("cannot read analyzer config " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error("analyzer config " + file.string() + ": " + e.what());
  }
  return from_json(j, file.parent_path());
}

double keyword_density(std::span<const std::string_view> tokens,
                       const std::vector<std::string>& keywords) {
  if (tokens.empty() || keywords.empty()) return 0.0;
  const auto wanted = as_set(folded_unique(keywords));
  std::size_t hits = 0;
  for (std::string_view tok : tokens) {
    if (wanted.count(text::normalize_token(tok))) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(tokens.size());
}

double keyword_density(std::string_view body,
                       const std::vector<std::string>& keywords) {
  const auto toks = text::tokens(body);
  return keyword_density(std::span<const std::string_view>(toks), keywords);
}

namespace {

// Finds inline references: [n] markers, http(s)/www URLs, and parenthetical
// author-year citations like "(Smith et al., 2023)".
struct RefSpan {
  std::size_t begin;
  std::size_t end;
};

bool is_marker_at(std::string_view s, std::size_t i, std::size_t& end) {
  if (s[i] != '[') return false;
  std::size_t j = i + 1;
  while (j < s.size() && text::is_digit(s[j])) ++j;
  if (j == i + 1 || j >= s.size() || s[j] != ']') return false;
  end = j + 1;
  return true;
}

bool is_url_at(std::string_view s, std::size_t i, std::size_t& end) {
  static constexpr std::string_view kHttp = "http://";
  static constexpr std::string_view kHttps = "https://";
  static constexpr std::string_view kWww = "www.";
  std::size_t skip = 0;
  if (s.compare(i, kHttps.size(), kHttps) == 0) skip = kHttps.size();
  else if (s.compare(i, kHttp.size(), kHttp) == 0) skip = kHttp.size();
  else if (s.compare(i, kWww.size(), kWww) == 0 &&
           (i == 0 || !text::is_alnum(s[i - 1]))) {
    skip = kWww.size();
  }
  if (skip == 0) return false;
  std::size_t j = i + skip;
  if (j >= s.size() || text::is_space(s[j])) return false;
  while (j < s.size() && !text::is_space(s[j])) ++j;
  end = j;
  return true;
}

bool is_author_year_at(std::string_view s, std::size_t i, std::size_t& end) {
  if (s[i] != '(') return false;
  std::size_t close = s.find(')', i + 1);
  if (close == std::string_view::npos) return false;
  std::string_view inner = s.substr(i + 1, close - i - 1);
  if (inner.empty() || inner[0] < 'A' || inner[0] > 'Z') return false;
  if (inner.find('(') != std::string_view::npos) return false;
  // needs a four-digit year
  for (std::size_t k = 0; k + 3 < inner.size(); ++k) {
    if (text::is_digit(inner[k]) && text::is_digit(inner[k + 1]) &&
        text::is_digit(inner[k + 2]) && text::is_digit(inner[k + 3])) {
      end = close + 1;
      return true;
    }
  }
  return false;
}

std::vector<RefSpan> reference_spans(std::string_view s) {
  std::vector<RefSpan> spans;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t end = 0;
    if (is_marker_at(s, i, end) || is_url_at(s, i, end) ||
        is_author_year_at(s, i, end)) {
      spans.push_back({i, end});
      i = end;
    } else {
      ++i;
    }
  }
  return spans;
}

}  // namespace

ReferenceCount count_references(std::string_view body) {
  const auto spans = reference_spans(body);
  std::string stripped;
  stripped.reserve(body.size());
  std::size_t cursor = 0;
  for (const RefSpan& span : spans) {
    stripped.append(body.substr(cursor, span.begin - cursor));
    stripped.push_back(' ');
    cursor = span.end;
  }
  stripped.append(body.substr(cursor));
  return {spans.size(), text::tokens(stripped).size()};
}

double citation_density(std::string_view body) {
  const ReferenceCount c = count_references(body);
  if (c.tokens == 0) return 0.0;
  return 100.0 * static_cast<double>(c.references) /
         static_cast<double>(c.tokens);
}

std::size_t count_statistic_tokens(std::string_view body) {
  std::size_t count = 0;
  for (std::string_view tok : text::tokens(body)) {
    const std::string norm = text::normalize_token(tok);
    if (std::any_of(norm.begin(), norm.end(),
                    [](char c) { return text::is_digit(c); })) {
      ++count;
    }
  }
  return count;
}

double statistics_density(std::string_view body) {
  const std::size_t words = text::word_count(body);
  if (words == 0) return 0.0;
  return 100.0 * static_cast<double>(count_statistic_tokens(body)) /
         static_cast<double>(words);
}

QuoteCount count_quoted_words(std::string_view body) {
  constexpr std::string_view kCurlyOpen = "\xe2\x80\x9c";
  constexpr std::string_view kCurlyClose = "\xe2\x80\x9d";
  QuoteCount count;
  count.total_words = text::word_count(body);
  std::size_t i = 0;
  int open_kind = 0;  // 0 none, 1 straight, 2 curly
  std::size_t span_start = 0;
  while (i < body.size()) {
    if (open_kind == 0) {
      if (body[i] == '"') {
        open_kind = 1;
        span_start = ++i;
        continue;
      }
      if (body.compare(i, kCurlyOpen.size(), kCurlyOpen) == 0) {
        open_kind = 2;
        i += kCurlyOpen.size();
        span_start = i;
        continue;
      }
    } else if (open_kind == 1 && body[i] == '"') {
      count.quoted_words += text::word_count(body.substr(span_start, i - span_start));
      open_kind = 0;
      ++i;
      continue;
    } else if (open_kind == 2 &&
               body.compare(i, kCurlyClose.size(), kCurlyClose) == 0) {
      count.quoted_words += text::word_count(body.substr(span_start, i - span_start));
      open_kind = 0;
      i += kCurlyClose.size();
      continue;
    }
    ++i;
  }
  // an unmatched opener contributes nothing
  return count;
}

double quotation_share(std::string_view body) {
  const QuoteCount c = count_quoted_words(body);
  if (c.total_words == 0) return 0.0;
  return static_cast<double>(c.quoted_words) /
         static_cast<double>(c.total_words);
}

std::size_t syllable_count(std::string_view word) {
  std::string letters;
  letters.reserve(word.size());
  for (char c : word) {
    char f = text::fold_char(c);
    if (f >= 'a' && f <= 'z') letters.push_back(f);
  }
  if (letters.empty()) return 1;
  auto is_vowel = [](char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' ||
           c == 'y';
  };
  std::size_t groups = 0;
  bool in_group = false;
  for (char c : letters) {
    if (is_vowel(c)) {
      if (!in_group) ++groups;
      in_group = true;
    } else {
      in_group = false;
    }
  }
  // silent final e ("made"), except a consonant-le ending ("little")
  if (groups > 1 && letters.back() == 'e') {
    const std::size_t n = letters.size();
    const bool consonant_le =
        n >= 3 && letters[n - 2] == 'l' && !is_vowel(letters[n - 3]);
    if (!consonant_le) --groups;
  }
  return std::max<std::size_t>(1, groups);
}

FleschComponents flesch_components(std::string_view body,
                                   const text::SegmentationOptions& options) {
  FleschComponents c;
  for (std::string_view tok : text::tokens(body)) {
    if (text::is_word(tok)) {
      ++c.words;
      c.syllables += syllable_count(tok);
    }
  }
  c.sentences = text::sentence_ranges(body, options).size();
  return c;
}

double readability_score(std::string_view body,
                         const text::SegmentationOptions& options) {
  const FleschComponents c = flesch_components(body, options);
  if (c.words == 0 || c.sentences == 0) {
    throw undefined_metric_error("readability undefined without words");
  }
  const double wps = static_cast<double>(c.words) /
                     static_cast<double>(c.sentences);
  const double spw = static_cast<double>(c.syllables) /
                     static_cast<double>(c.words);
  const double score = 206.835 - 1.015 * wps - 84.6 * spw;
  return std::clamp(score, kFleschFloor, kFleschCeiling);
}

FluencyStats fluency_proxy(std::span<const std::size_t> sentence_word_counts) {
  if (sentence_word_counts.empty()) {
    throw undefined_metric_error("fluency undefined without sentences");
  }
  const double n = static_cast<double>(sentence_word_counts.size());
  double sum = 0.0;
  for (std::size_t count : sentence_word_counts) {
    sum += static_cast<double>(count);
  }
  const double mean = sum / n;
  double variance = 0.0;
  for (std::size_t count : sentence_word_counts) {
    const double d = static_cast<double>(count) - mean;
    variance += d * d;
  }
  variance /= n;
  FluencyStats stats;
  stats.mean_sentence_length = mean;
  stats.coefficient_of_variation = mean > 0.0 ? std::sqrt(variance) / mean : 0.0;
  return stats;
}

double lexical_diversity(std::span<const std::string_view> tokens) {
  if (tokens.empty()) return 0.0;
  std::set<std::string> distinct;
  for (std::string_view tok : tokens) {
    std::string norm = text::normalize_token(tok);
    if (!norm.empty()) distinct.insert(std::move(norm));
  }
  return static_cast<double>(distinct.size()) /
         static_cast<double>(tokens.size());
}

double lexical_diversity(std::string_view body) {
  const auto toks = text::tokens(body);
  return lexical_diversity(std::span<const std::string_view>(toks));
}

std::size_t count_lexicon_hits(std::span<const std::string_view> tokens,
                               const std::vector<std::string>& lexicon) {
  if (lexicon.empty()) return 0;
  const auto wanted = as_set(folded_unique(lexicon));
  std::size_t hits = 0;
  for (std::string_view tok : tokens) {
    if (wanted.count(text::normalize_token(tok))) ++hits;
  }
  return hits;
}

double lexicon_density(std::span<const std::string_view> tokens,
                       const std::vector<std::string>& lexicon) {
  if (tokens.empty()) return 0.0;
  return 100.0 * static_cast<double>(count_lexicon_hits(tokens, lexicon)) /
         static_cast<double>(tokens.size());
}

double lexicon_density(std::string_view body,
                       const std::vector<std::string>& lexicon) {
  const auto toks = text::tokens(body);
  return lexicon_density(std::span<const std::string_view>(toks), lexicon);
}

const StrategyScore& StrategyProfile::score(Strategy s) const {
  return scores[static_cast<std::size_t>(s)];
}

StrategyProfile strategy_profile(std::string_view body,
                                 const AnalyzerConfig& config) {
  const auto toks = text::tokens(body);
  const std::span<const std::string_view> tokens_span(toks);
  if (text::word_count(body) == 0) {
    throw undefined_metric_error("strategy profile undefined without words");
  }
  const auto seg = config.segmentation();
  const auto ranges = text::sentence_ranges(body, seg);
  std::vector<std::size_t> sentence_words;
  sentence_words.reserve(ranges.size());
  for (auto [begin, end] : ranges) {
    sentence_words.push_back(text::word_count(body.substr(begin, end - begin)));
  }

  StrategyProfile profile;
  profile.token_count = toks.size();
  profile.sentence_count = ranges.size();

  auto set = [&profile](Strategy s, double raw, double normalized) {
    profile.scores[static_cast<std::size_t>(s)] =
        StrategyScore{s, raw, clamp01(normalized)};
  };

  const double kw = keyword_density(tokens_span, config.keywords);
  set(Strategy::keyword_stuffing, kw, kw);

  const double cite = citation_density(body);
  set(Strategy::cite_sources, cite, cite / kCitationDensityCap);

  const double stats = statistics_density(body);
  set(Strategy::statistics_addition, stats, stats / kStatisticsDensityCap);

  const double quote = quotation_share(body);
  set(Strategy::quotation_addition, quote, quote);

  const double flesch = readability_score(body, seg);
  set(Strategy::easy_to_understand, flesch,
      std::clamp(flesch, 0.0, 100.0) / 100.0);

  const FluencyStats fluency = fluency_proxy(sentence_words);
  set(Strategy::fluency_optimization, fluency.coefficient_of_variation,
      1.0 / (1.0 + fluency.coefficient_of_variation));

  const double ttr = lexical_diversity(tokens_span);
  set(Strategy::unique_words, ttr, ttr);

  const double technical = lexicon_density(tokens_span, config.technical_terms);
  set(Strategy::technical_terms, technical, technical / kTechnicalDensityCap);

  const double declarative =
      lexicon_density(tokens_span, config.declarative_markers);
  const double hedge = lexicon_density(tokens_span, config.hedge_words);
  const double tone = std::max(0.0, declarative - hedge);
  set(Strategy::authoritative_tone, tone, tone / kToneDensityCap);

  return profile;
}

nlohmann::json profile_to_json(const StrategyProfile& profile) {
  nlohmann::json j;
  j["token_count"] = profile.token_count;
  j["sentence_count"] = profile.sentence_count;
  nlohmann::json scores = nlohmann::json::object();
  for (const StrategyScore& s : profile.scores) {
    scores[to_string(s.strategy)] = {{"raw", s.raw_value},
                                     {"normalized", s.normalized}};
  }
  j["scores"] = std::move(scores);
  return j;
}

std::vector<Recommendation> recommend_strategies(
    const StrategyProfile& profile, std::span<const StrategyPrior> priors) {
  if (priors.size() != kAllStrategies.size()) {
    throw config_error("priors table must contain all nine strategies");
  }
  std::set<Strategy> seen;
  for (const StrategyPrior& p : priors) {
    if (!seen.insert(p.strategy).second) {
      throw config_error("priors table repeats strategy " +
                         to_string(p.strategy));
    }
  }

  std::vector<Recommendation> recs;
  recs.reserve(priors.size());
  for (std::size_t rank = 0; rank < priors.size(); ++rank) {
    const StrategyPrior& p = priors[rank];
    Recommendation r;
    r.strategy = p.strategy;
    r.prior_percent = p.relative_improvement_percent;
    r.tier = p.tier;
    r.headroom = 1.0 - profile.score(p.strategy).normalized;
    r.priority = p.relative_improvement_percent * r.headroom;
    r.deprioritized = p.tier == SignificanceTier::not_significant;
    recs.push_back(r);
  }
  // significant strategies first, then by priority; ties keep table order
  std::stable_sort(recs.begin(), recs.end(),
                   [](const Recommendation& a, const Recommendation& b) {
                     if (a.deprioritized != b.deprioritized) {
                       return !a.deprioritized;
                     }
                     return a.priority > b.priority;
                   });
  return recs;
}

nlohmann::json recommendations_to_json(std::span<const Recommendation> recs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Recommendation& r : recs) {
    arr.push_back({{"strategy", to_string(r.strategy)},
                   {"priority", r.priority},
                   {"prior_percent", r.prior_percent},
                   {"significance", to_string(r.tier)},
                   {"headroom", r.headroom},
                   {"deprioritized", r.deprioritized}});
  }
  return arr;
}

std::string recommendations_to_markdown(std::span<const Recommendation> recs) {
  std::ostringstream out;
  out << "| # | strategy | prior | significance | headroom | priority | note |\n";
  out << "|---|----------|-------|--------------|----------|----------|------|\n";
  std::size_t rank = 1;
  for (const Recommendation& r : recs) {
    out << "| " << rank++ << " | " << to_string(r.strategy) << " | +"
        << r.prior_percent << "% | " << to_string(r.tier) << " | ";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", r.headroom);
    out << buf << " | ";
    std::snprintf(buf, sizeof(buf), "%.3f", r.priority);
    out << buf << " | " << (r.deprioritized ? "deprioritized" : "") << " |\n";
  }
  return out.str();
}

}  // namespace geometer::content
