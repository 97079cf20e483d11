#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "geometer/sentences.hpp"

namespace geometer::content {

// The nine content-optimization strategies, in catalogue order.
enum class Strategy {
  keyword_stuffing,
  cite_sources,
  statistics_addition,
  quotation_addition,
  easy_to_understand,
  fluency_optimization,
  unique_words,
  technical_terms,
  authoritative_tone,
};

inline constexpr std::array<Strategy, 9> kAllStrategies = {
    Strategy::keyword_stuffing,     Strategy::cite_sources,
    Strategy::statistics_addition,  Strategy::quotation_addition,
    Strategy::easy_to_understand,   Strategy::fluency_optimization,
    Strategy::unique_words,         Strategy::technical_terms,
    Strategy::authoritative_tone,
};

std::string to_string(Strategy s);
std::optional<Strategy> strategy_from_string(std::string_view name);

enum class SignificanceTier { p_lt_01, p_lt_05, p_lt_10, not_significant };

std::string to_string(SignificanceTier tier);
std::optional<SignificanceTier> tier_from_string(std::string_view name);

// Measured relative visibility improvement prior for one strategy.
struct StrategyPrior {
  Strategy strategy;
  double relative_improvement_percent;
  SignificanceTier tier;

  friend bool operator==(const StrategyPrior&, const StrategyPrior&) = default;
};

// The bundled prior table, strongest first:
//   cite_sources        +40.0  p<0.01
//   statistics_addition +37.0  p<0.01
//   quotation_addition  +22.0  p<0.05
//   authoritative_tone  +15.0  p<0.05
//   technical_terms     +12.0  p<0.10
//   fluency_optimization+10.0  p<0.10
//   unique_words         +8.0  not significant
//   easy_to_understand   +5.0  not significant
//   keyword_stuffing     +3.0  not significant
std::array<StrategyPrior, 9> default_priors();

nlohmann::json priors_to_json(std::span<const StrategyPrior> priors);
std::vector<StrategyPrior> priors_from_json(const nlohmann::json& j);

// Lexicons and keyword list driving the detectors. Lists are folded and
// deduplicated on load; empty lists fall back to the built-in defaults for
// the three lexicons (keywords default to none).
struct AnalyzerConfig {
  std::vector<std::string> keywords;
  std::vector<std::string> technical_terms;
  std::vector<std::string> hedge_words;
  std::vector<std::string> declarative_markers;
  std::vector<std::string> extra_abbreviations;

  text::SegmentationOptions segmentation() const;

  static AnalyzerConfig defaults();
  static AnalyzerConfig from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = {});
  static AnalyzerConfig load(const std::filesystem::path& file);
};

// --- detectors -------------------------------------------------------------
// Each detector exposes its raw counts so expected values can be pinned as
// integers in test corpora.

// Share of tokens exactly matching a keyword after normalization.
double keyword_density(std::span<const std::string_view> tokens,
                       const std::vector<std::string>& keywords);
double keyword_density(std::string_view body,
                       const std::vector<std::string>& keywords);

struct ReferenceCount {
  std::size_t references = 0;  // [n] markers, URLs, (Name ... 2023) patterns
  std::size_t tokens = 0;      // plain token count after removing them
};
ReferenceCount count_references(std::string_view body);
// references per 100 tokens of the de-referenced text
double citation_density(std::string_view body);

std::size_t count_statistic_tokens(std::string_view body);
// digit-bearing tokens per 100 words
double statistics_density(std::string_view body);

struct QuoteCount {
  std::size_t quoted_words = 0;  // words inside matched double-quote pairs
  std::size_t total_words = 0;
};
QuoteCount count_quoted_words(std::string_view body);
double quotation_share(std::string_view body);

// Heuristic syllable estimate: vowel-group count with a silent-e adjustment,
// never less than one. Letter-free tokens count one syllable.
std::size_t syllable_count(std::string_view word);

struct FleschComponents {
  std::size_t words = 0;
  std::size_t sentences = 0;
  std::size_t syllables = 0;
};
FleschComponents flesch_components(
    std::string_view body, const text::SegmentationOptions& options =
                               text::SegmentationOptions::defaults());

inline constexpr double kFleschFloor = -100.0;
inline constexpr double kFleschCeiling = 121.22;

// Flesch Reading Ease, clamped to [kFleschFloor, kFleschCeiling]. Throws
// undefined_metric_error when the text has no words.
double readability_score(std::string_view body,
                         const text::SegmentationOptions& options =
                             text::SegmentationOptions::defaults());

struct FluencyStats {
  double mean_sentence_length = 0.0;
  double coefficient_of_variation = 0.0;  // population stdev / mean
};
// Throws undefined_metric_error for an empty list.
FluencyStats fluency_proxy(std::span<const std::size_t> sentence_word_counts);

// Distinct normalized tokens over total tokens; 0 for empty input.
double lexical_diversity(std::span<const std::string_view> tokens);
double lexical_diversity(std::string_view body);

std::size_t count_lexicon_hits(std::span<const std::string_view> tokens,
                               const std::vector<std::string>& lexicon);
// normalized-token matches per 100 tokens
double lexicon_density(std::span<const std::string_view> tokens,
                       const std::vector<std::string>& lexicon);
double lexicon_density(std::string_view body,
                       const std::vector<std::string>& lexicon);

// --- profile ---------------------------------------------------------------

// Saturation caps mapping per-100-word densities onto [0, 1].
inline constexpr double kCitationDensityCap = 5.0;
inline constexpr double kStatisticsDensityCap = 8.0;
inline constexpr double kTechnicalDensityCap = 10.0;
inline constexpr double kToneDensityCap = 5.0;

struct StrategyScore {
  Strategy strategy;
  double raw_value = 0.0;   // the metric in its natural unit
  double normalized = 0.0;  // mapped to [0, 1]
};

struct StrategyProfile {
  std::array<StrategyScore, 9> scores;  // kAllStrategies order
  std::size_t token_count = 0;
  std::size_t sentence_count = 0;

  const StrategyScore& score(Strategy s) const;
};

// Scores all nine strategies. Throws undefined_metric_error when the text
// has no words.
StrategyProfile strategy_profile(std::string_view body,
                                 const AnalyzerConfig& config);

nlohmann::json profile_to_json(const StrategyProfile& profile);

struct Recommendation {
  Strategy strategy;
  double priority = 0.0;      // prior percent x remaining headroom
  double prior_percent = 0.0;
  SignificanceTier tier = SignificanceTier::not_significant;
  double headroom = 0.0;
  bool deprioritized = false;  // statistically insignificant prior
};

// Ranks strategies by prior x (1 - normalized score). Significant strategies
// come first; insignificant ones are listed but flagged deprioritized. Ties
// keep the prior table's order. Throws config_error for incomplete priors.
std::vector<Recommendation> recommend_strategies(
    const StrategyProfile& profile, std::span<const StrategyPrior> priors);

nlohmann::json recommendations_to_json(std::span<const Recommendation> recs);
std::string recommendations_to_markdown(std::span<const Recommendation> recs);

}  // namespace geometer::content
