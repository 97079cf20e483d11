#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "geometer/transcript.hpp"
#include "geometer/visibility.hpp"

namespace geometer::bench {

// Injectable time source returning ISO-8601 UTC ("2026-01-01T00:00:00Z").
using Clock = std::function<std::string()>;

std::string now_utc_iso();
Clock system_clock();
Clock frozen_clock(std::string iso_timestamp);

struct Query {
  std::string id;
  std::string text;
  std::string tag;  // "branded" or "category"
};

struct QueryLibrary {
  std::string version;
  std::vector<Query> queries;
};

// Loads and validates the query library file:
//   {"version": str, "queries": [{"id", "text", "tag"}]}
// Duplicate ids and unknown tags raise validation_error with a line number.
QueryLibrary load_query_library(const std::filesystem::path& file);

// One engine the harness can query. execute() must be safe to call from
// several threads at once.
class EngineClient {
 public:
  virtual ~EngineClient() = default;
  virtual const std::string& engine_id() const = 0;
  virtual ResponseTranscript execute(const Query& query) = 0;
};

// Replays canned transcripts from a directory of <query_id>.json files.
// The returned transcript carries this client's engine id and a timestamp
// from the injected clock.
class FixtureClient final : public EngineClient {
 public:
  FixtureClient(std::string engine_id, std::filesystem::path directory,
                Clock clock);

  const std::string& engine_id() const override { return engine_id_; }
  ResponseTranscript execute(const Query& query) override;

 private:
  std::string engine_id_;
  std::filesystem::path directory_;
  Clock clock_;
};

// Builds a client from a config URI. The only bundled scheme is
// "fixtures:<directory>"; anything else raises config_error.
std::unique_ptr<EngineClient> make_client(const std::string& engine_id,
                                          const std::string& uri, Clock clock);

// FNV-1a 64-bit content hash over (engine id, query id, timestamp).
std::string run_id_hash(const std::string& engine_id,
                        const std::string& query_id,
                        const std::string& timestamp);

struct RunRecord {
  std::string run_id;
  std::string timestamp;
  std::string engine_id;
  std::string query_id;
  std::string tag;
  ResponseTranscript transcript;
  std::map<std::string, VisibilityReport> reports;  // keyed by registry name
};

nlohmann::json run_record_to_json(const RunRecord& record);
RunRecord run_record_from_json(const nlohmann::json& j);

struct RunError {
  std::string timestamp;
  std::string engine_id;
  std::string query_id;
  std::string message;
};

struct RunSummary {
  std::size_t executed = 0;
  std::size_t succeeded = 0;
  std::size_t failed = 0;
  std::vector<RunError> errors;
};

// Executes every (client, query) pair in (engine id, query id) order and
// appends one line-delimited JSON record per success to the store. Client
// failures become error entries in the store and the summary; they never
// abort the batch. Store-open failure is fatal (io_error). Clients run
// concurrently up to `parallelism`; appends stay single-writer and ordered.
RunSummary run_benchmark(const QueryLibrary& library,
                         const std::vector<std::unique_ptr<EngineClient>>& clients,
                         const std::vector<BrandRegistry>& registries,
                         const std::filesystem::path& store_path, Clock clock,
                         std::size_t parallelism = 1);

// Half-open [start, end) window over normalized ISO-8601 UTC timestamps.
struct TimeWindow {
  std::string start;
  std::string end;

  bool contains(const std::string& timestamp) const {
    return timestamp >= start && timestamp < end;
  }
};

struct RunFilter {
  std::optional<std::string> engine_id;
  std::optional<std::string> query_id;
  std::optional<std::string> tag;
  std::optional<TimeWindow> window;
};

struct ReadResult {
  std::vector<RunRecord> records;     // timestamp order
  std::vector<std::string> diagnostics;  // skipped lines, one message each
};

// Streams the store back. Corrupt or truncated lines are skipped with a
// diagnostic; a missing store raises not_found_error.
ReadResult read_runs(const std::filesystem::path& store_path,
                     const RunFilter& filter = {});

// Share of runs whose transcript cites the brand at least once. Throws
// undefined_metric_error for an empty list.
double citation_frequency(const std::vector<RunRecord>& runs,
                          const BrandRegistry& registry);

struct WindowStats {
  std::size_t runs = 0;
  std::size_t citing_runs = 0;
  std::optional<double> citation_frequency;       // citing / runs
  std::optional<double> mean_position_impression; // over citing runs only
  std::optional<double> owned_share;              // pooled over cited sources
  std::optional<double> earned_share;
  std::optional<double> unknown_share;
};

struct RegistryEngineStats {
  std::string registry;
  std::string engine;
  WindowStats window_a;
  WindowStats window_b;
  std::optional<double> frequency_delta;   // b - a where both defined
  std::optional<double> impression_delta;
};

struct BenchmarkReport {
  TimeWindow window_a;
  TimeWindow window_b;
  std::vector<RegistryEngineStats> entries;  // registry-major, engine-minor
};

// Pure function of the record list: per (registry, engine) metrics for both
// windows plus deltas. Throws undefined_metric_error when `runs` is empty.
BenchmarkReport benchmark_report(const std::vector<RunRecord>& runs,
                                 const std::vector<BrandRegistry>& registries,
                                 const TimeWindow& window_a,
                                 const TimeWindow& window_b);

nlohmann::json benchmark_report_to_json(const BenchmarkReport& report);
std::string benchmark_report_to_markdown(const BenchmarkReport& report);
std::string benchmark_report_to_csv(const BenchmarkReport& report);

}  // namespace geometer::bench
