#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "geometer/transcript.hpp"

namespace geometer {

// The brand (or competitor) whose footprint is being measured.
struct BrandRegistry {
  std::string name;
  std::vector<std::string> owned_domains;  // registrable domains, lowercased
  bool competitor = false;
};

BrandRegistry registry_from_json(const nlohmann::json& j);

// Accepts a single registry object or {"registries": [...]} / a top-level
// array of them.
std::vector<BrandRegistry> registries_from_json(const nlohmann::json& j);

enum class Ownership { owned, earned, unknown };

std::string to_string(Ownership o);

// owned when the domain equals an owned domain or is a subdomain of one;
// earned for any other non-empty domain; unknown for empty (no URL).
Ownership classify_ownership(const std::string& domain,
                             const BrandRegistry& registry);

// Sentence-position weighting for the position-adjusted impression.
// `normalized_index` scales the sentence index by the sentence count so the
// decay profile is comparable across answers of different lengths;
// `raw_index` applies exp(-index) directly.
enum class PositionWeighting { normalized_index, raw_index };

// Share of the response's words appearing in sentences that cite the source.
// Throws lookup_error for unknown ids and undefined_metric_error when the
// transcript has no words.
double impression_word_count(const ResponseTranscript& transcript,
                             int source_id);

// Same share with each citing sentence's words weighted by exponential decay
// of its position, so early citations count for more.
double impression_position_adjusted(
    const ResponseTranscript& transcript, int source_id,
    PositionWeighting weighting = PositionWeighting::normalized_index);

// Reference band for the owned-citation share: in commercial answers,
// brand-owned sources typically account for 15-20% of citations.
inline constexpr double kOwnedShareBandLow = 0.15;
inline constexpr double kOwnedShareBandHigh = 0.20;

enum class BandFlag { no_citations, below_band, within_band, above_band };

std::string to_string(BandFlag flag);

struct OwnershipShares {
  double owned = 0.0;
  double earned = 0.0;
  double unknown = 0.0;
  std::size_t cited_sources = 0;
  BandFlag band_flag = BandFlag::no_citations;
};

// Classifies every source cited at least once and returns the class shares.
OwnershipShares ownership_breakdown(const ResponseTranscript& transcript,
                                    const BrandRegistry& registry);

struct SourceVisibility {
  int marker_id = 0;
  std::string domain;
  Ownership ownership = Ownership::unknown;
  std::size_t citing_sentences = 0;
  double impression_wc = 0.0;
  double impression_pos = 0.0;
};

struct VisibilityReport {
  std::string registry_name;
  std::vector<SourceVisibility> entries;  // marker-id order, every source
  OwnershipShares shares;
};

// Full per-source report. Requires total_word_count > 0.
VisibilityReport visibility_report(
    const ResponseTranscript& transcript, const BrandRegistry& registry,
    PositionWeighting weighting = PositionWeighting::normalized_index);

// True when the transcript cites (>= 1 sentence) a source owned by the
// registry's brand.
bool cites_brand(const ResponseTranscript& transcript,
                 const BrandRegistry& registry);

// Share of transcripts citing the brand. Throws undefined_metric_error when
// the list is empty.
double citation_frequency(const std::vector<const ResponseTranscript*>& runs,
                          const BrandRegistry& registry);

// Serialization: fractions carry 6 decimal places in both formats.
nlohmann::json report_to_json(const VisibilityReport& report);
VisibilityReport report_from_json(const nlohmann::json& j);
std::string report_to_csv(const VisibilityReport& report);

// Rounds to 6 decimal places (the serialized precision of every fraction).
double round6(double value);

}  // namespace geometer
