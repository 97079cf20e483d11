#include "geometer/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "geometer/errors.hpp"
#include "geometer/text.hpp"

namespace geometer {

BrandRegistry registry_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("name") || !j.contains("domains")) {
    throw validation_error("registry must carry 'name' and 'domains'");
  }
  BrandRegistry r;
  r.name = j["name"].get<std::string>();
  for (const auto& d : j["domains"]) {
    std::string folded = text::fold(d.get<std::string>());
    if (!folded.empty()) r.owned_domains.push_back(std::move(folded));
  }
  if (r.owned_domains.empty()) {
    throw validation_error("registry '" + r.name + "' has no owned domains");
  }
  r.competitor = j.value("competitor", false);
  return r;
}

std::vector<BrandRegistry> registries_from_json(const nlohmann::json& j) {
  std::vector<BrandRegistry> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(registry_from_json(item));
  } else if (j.is_object() && j.contains("registries")) {
    for (const auto& item : j["registries"]) {
      out.push_back(registry_from_json(item));
    }
  } else {
    out.push_back(registry_from_json(j));
  }
  if (out.empty()) throw validation_error("no registries defined");
  return out;
}

std::string to_string(Ownership o) {
  switch (o) {
    case Ownership::owned: return "owned";
    case Ownership::earned: return "earned";
    case Ownership::unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(BandFlag flag) {
  switch (flag) {
    case BandFlag::no_citations: return "no_citations";
    case BandFlag::below_band: return "below_band";
    case BandFlag::within_band: return "within_band";
    case BandFlag::above_band: return "above_band";
  }
  return "no_citations";
}

Ownership classify_ownership(const std::string& domain,
                             const BrandRegistry& registry) {
  if (domain.empty()) return Ownership::unknown;
  for (const std::string& owned : registry.owned_domains) {
    if (domain == owned) return Ownership::owned;
    if (domain.size() > owned.size() &&
        domain.compare(domain.size() - owned.size(), owned.size(), owned) == 0 &&
        domain[domain.size() - owned.size() - 1] == '.') {
      return Ownership::owned;
    }
  }
  return Ownership::earned;
}

namespace {

std::size_t citing_sentence_count(const ResponseTranscript& t, int source_id) {
  std::size_t count = 0;
  for (const SentenceSpan& s : t.sentences) {
    if (std::binary_search(s.cited_source_ids.begin(),
                           s.cited_source_ids.end(), source_id)) {
      ++count;
    }
  }
  return count;
}

double position_weight(std::size_t index, std::size_t sentence_count,
                       PositionWeighting weighting) {
  if (weighting == PositionWeighting::raw_index) {
    return std::exp(-static_cast<double>(index));
  }
  const double denom = static_cast<double>(std::max<std::size_t>(1, sentence_count));
  return std::exp(-static_cast<double>(index) / denom);
}

void require_known_source(const ResponseTranscript& t, int source_id) {
  if (t.find_source(source_id) == nullptr) {
    throw lookup_error("unknown source id " + std::to_string(source_id));
  }
}

double require_total_words(const ResponseTranscript& t) {
  const std::size_t total = t.total_word_count();
  if (total == 0) {
    throw undefined_metric_error(
        "impression undefined for a zero-word transcript");
  }
  return static_cast<double>(total);
}

}  // namespace

double impression_word_count(const ResponseTranscript& transcript,
                             int source_id) {
  require_known_source(transcript, source_id);
  const double total = require_total_words(transcript);
  double cited_words = 0.0;
  for (const SentenceSpan& s : transcript.sentences) {
    if (std::binary_search(s.cited_source_ids.begin(),
                           s.cited_source_ids.end(), source_id)) {
      cited_words += static_cast<double>(s.word_count);
    }
  }
  return cited_words / total;
}

double impression_position_adjusted(const ResponseTranscript& transcript,
                                    int source_id,
                                    PositionWeighting weighting) {
  require_known_source(transcript, source_id);
  const double total = require_total_words(transcript);
  const std::size_t n = transcript.sentences.size();
  double weighted = 0.0;
  for (const SentenceSpan& s : transcript.sentences) {
    if (std::binary_search(s.cited_source_ids.begin(),
                           s.cited_source_ids.end(), source_id)) {
      weighted += static_cast<double>(s.word_count) *
                  position_weight(s.index, n, weighting);
    }
  }
  return weighted / total;
}

OwnershipShares ownership_breakdown(const ResponseTranscript& transcript,
                                    const BrandRegistry& registry) {
  OwnershipShares shares;
  std::size_t owned = 0;
  std::size_t earned = 0;
  std::size_t unknown = 0;
  for (const SourceRecord& source : transcript.sources) {
    if (citing_sentence_count(transcript, source.marker_id) == 0) continue;
    switch (classify_ownership(source.domain, registry)) {
      case Ownership::owned: ++owned; break;
      case Ownership::earned: ++earned; break;
      case Ownership::unknown: ++unknown; break;
    }
  }
  shares.cited_sources = owned + earned + unknown;
  if (shares.cited_sources == 0) {
    shares.band_flag = BandFlag::no_citations;
    return shares;
  }
  const double total = static_cast<double>(shares.cited_sources);
  shares.owned = owned / total;
  shares.earned = earned / total;
  shares.unknown = unknown / total;
  if (shares.owned < kOwnedShareBandLow) {
    shares.band_flag = BandFlag::below_band;
  } else if (shares.owned <= kOwnedShareBandHigh) {
    shares.band_flag = BandFlag::within_band;
  } else {
    shares.band_flag = BandFlag::above_band;
  }
  return shares;
}

VisibilityReport visibility_report(const ResponseTranscript& transcript,
                                   const BrandRegistry& registry,
                                   PositionWeighting weighting) {
  require_total_words(transcript);
  VisibilityReport report;
  report.registry_name = registry.name;
  report.entries.reserve(transcript.sources.size());
  for (const SourceRecord& source : transcript.sources) {
    SourceVisibility entry;
    entry.marker_id = source.marker_id;
    entry.domain = source.domain;
    entry.ownership = classify_ownership(source.domain, registry);
    entry.citing_sentences = citing_sentence_count(transcript, source.marker_id);
    entry.impression_wc = impression_word_count(transcript, source.marker_id);
    entry.impression_pos =
        impression_position_adjusted(transcript, source.marker_id, weighting);
    report.entries.push_back(std::move(entry));
  }
  std::sort(report.entries.begin(), report.entries.end(),
            [](const SourceVisibility& a, const SourceVisibility& b) {
              return a.marker_id < b.marker_id;
            });
  report.shares = ownership_breakdown(transcript, registry);
  return report;
}

bool cites_brand(const ResponseTranscript& transcript,
                 const BrandRegistry& registry) {
  for (const SourceRecord& source : transcript.sources) {
    if (classify_ownership(source.domain, registry) == Ownership::owned &&
        citing_sentence_count(transcript, source.marker_id) > 0) {
      return true;
    }
  }
  return false;
}

double citation_frequency(const std::vector<const ResponseTranscript*>& runs,
                          const BrandRegistry& registry) {
  if (runs.empty()) {
    throw undefined_metric_error("citation frequency undefined over zero runs");
  }
  std::size_t citing = 0;
  for (const ResponseTranscript* t : runs) {
    if (t != nullptr && cites_brand(*t, registry)) ++citing;
  }
  return static_cast<double>(citing) / static_cast<double>(runs.size());
}

double round6(double value) {
  return std::round(value * 1e6) / 1e6;
}

namespace {

std::string format6(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

}  // namespace

nlohmann::json report_to_json(const VisibilityReport& report) {
  nlohmann::json j;
  j["registry"] = report.registry_name;
  j["cited_sources"] = report.shares.cited_sources;
  j["owned_share"] = round6(report.shares.owned);
  j["earned_share"] = round6(report.shares.earned);
  j["unknown_share"] = round6(report.shares.unknown);
  j["owned_share_band"] = to_string(report.shares.band_flag);
  j["band"] = {{"low", kOwnedShareBandLow}, {"high", kOwnedShareBandHigh}};
  nlohmann::json entries = nlohmann::json::array();
  for (const SourceVisibility& e : report.entries) {
    entries.push_back({{"marker_id", e.marker_id},
                       {"domain", e.domain},
                       {"class", to_string(e.ownership)},
                       {"citing_sentences", e.citing_sentences},
                       {"imp_wc", round6(e.impression_wc)},
                       {"imp_pos_adj", round6(e.impression_pos)}});
  }
  j["sources"] = std::move(entries);
  return j;
}

VisibilityReport report_from_json(const nlohmann::json& j) {
  VisibilityReport report;
  report.registry_name = j.value("registry", "");
  report.shares.cited_sources = j.value("cited_sources", std::size_t{0});
  report.shares.owned = j.value("owned_share", 0.0);
  report.shares.earned = j.value("earned_share", 0.0);
  report.shares.unknown = j.value("unknown_share", 0.0);
  const std::string band = j.value("owned_share_band", "no_citations");
  if (band == "below_band") report.shares.band_flag = BandFlag::below_band;
  else if (band == "within_band") report.shares.band_flag = BandFlag::within_band;
  else if (band == "above_band") report.shares.band_flag = BandFlag::above_band;
  else report.shares.band_flag = BandFlag::no_citations;
  for (const auto& item : j.value("sources", nlohmann::json::array())) {
    SourceVisibility e;
    e.marker_id = item.value("marker_id", 0);
    e.domain = item.value("domain", "");
    const std::string cls = item.value("class", "unknown");
    e.ownership = cls == "owned" ? Ownership::owned
                  : cls == "earned" ? Ownership::earned
                                    : Ownership::unknown;
    e.citing_sentences = item.value("citing_sentences", std::size_t{0});
    e.impression_wc = item.value("imp_wc", 0.0);
    e.impression_pos = item.value("imp_pos_adj", 0.0);
    report.entries.push_back(std::move(e));
  }
  return report;
}

std::string report_to_csv(const VisibilityReport& report) {
  std::string out = "marker_id,domain,class,imp_wc,imp_pos_adj\n";
  for (const SourceVisibility& e : report.entries) {
    out += std::to_string(e.marker_id) + "," + e.domain + "," +
           to_string(e.ownership) + "," + format6(e.impression_wc) + "," +
           format6(e.impression_pos) + "\n";
  }
  return out;
}

}  // namespace geometer
