#include "geometer/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "geometer/errors.hpp"
#include "geometer/text.hpp"

namespace geometer::bench {

std::string now_utc_iso() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm utc{};
  gmtime_r(&t, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", &utc);
  return buf;
}

Clock system_clock() {
  return [] { return now_utc_iso(); };
}

Clock frozen_clock(std::string iso_timestamp) {
  return [ts = std::move(iso_timestamp)] { return ts; };
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw not_found_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t line_of_offset(std::string_view bytes, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < bytes.size(); ++i) {
    if (bytes[i] == '\n') ++line;
  }
  return line;
}

// Line number of the n-th occurrence of a JSON-encoded string value, for
// pointing validation errors at the offending library entry.
std::size_t line_of_value(std::string_view bytes, const std::string& value,
                          std::size_t occurrence) {
  const std::string needle = "\"" + value + "\"";
  std::size_t pos = 0;
  for (std::size_t n = 0; n <= occurrence; ++n) {
    pos = bytes.find(needle, pos);
    if (pos == std::string_view::npos) return 0;
    if (n < occurrence) pos += needle.size();
  }
  return line_of_offset(bytes, pos);
}

}  // namespace

QueryLibrary load_query_library(const std::filesystem::path& file) {
  const std::string bytes = read_file(file);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error("query library " + file.string() + ": " + e.what(),
                      e.byte);
  }
  if (!j.is_object() || !j.contains("queries") || !j["queries"].is_array()) {
    throw validation_error("query library must carry a 'queries' array");
  }
  QueryLibrary library;
  library.version = j.value("version", "");
  std::set<std::string> seen;
  std::map<std::string, std::size_t> id_occurrences;
  for (const auto& item : j["queries"]) {
    Query q;
    q.id = item.value("id", "");
    q.text = item.value("text", "");
    q.tag = item.value("tag", "");
    const std::size_t occurrence = id_occurrences[q.id]++;
    if (q.id.empty()) {
      throw validation_error("query library entry without an id");
    }
    if (!seen.insert(q.id).second) {
      throw validation_error(
          "duplicate query id '" + q.id + "' (line " +
          std::to_string(line_of_value(bytes, q.id, occurrence)) + ")");
    }
    if (q.tag != "branded" && q.tag != "category") {
      throw validation_error(
          "query '" + q.id + "': unknown tag '" + q.tag + "' (line " +
          std::to_string(line_of_value(bytes, q.tag.empty() ? q.id : q.tag,
                                       0)) +
          "), expected branded|category");
    }
    library.queries.push_back(std::move(q));
  }
  return library;
}

FixtureClient::FixtureClient(std::string engine_id,
                             std::filesystem::path directory, Clock clock)
    : engine_id_(std::move(engine_id)),
      directory_(std::move(directory)),
      clock_(std::move(clock)) {}

ResponseTranscript FixtureClient::execute(const Query& query) {
  const std::filesystem::path path = directory_ / (query.id + ".json");
  ResponseTranscript t = parse_transcript_file(read_file(path));
  t.engine_id = engine_id_;
  t.captured_at = clock_();
  if (t.query.empty()) t.query = query.text;
  return t;
}

std::unique_ptr<EngineClient> make_client(const std::string& engine_id,
                                          const std::string& uri,
                                          Clock clock) {
  constexpr std::string_view kFixturesScheme = "fixtures:";
  if (uri.rfind(kFixturesScheme, 0) == 0) {
    return std::make_unique<FixtureClient>(
        engine_id, uri.substr(kFixturesScheme.size()), std::move(clock));
  }
  throw config_error("unknown engine client uri '" + uri +
                     "' (supported: fixtures:<directory>)");
}

std::string run_id_hash(const std::string& engine_id,
                        const std::string& query_id,
                        const std::string& timestamp) {
  const std::string content = engine_id + "\x1f" + query_id + "\x1f" + timestamp;
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : content) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

nlohmann::json run_record_to_json(const RunRecord& record) {
  nlohmann::json j;
  j["kind"] = "run";
  j["run_id"] = record.run_id;
  j["timestamp"] = record.timestamp;
  j["engine"] = record.engine_id;
  j["query_id"] = record.query_id;
  j["tag"] = record.tag;
  j["transcript"] = transcript_to_json(record.transcript);
  nlohmann::json reports = nlohmann::json::object();
  for (const auto& [name, report] : record.reports) {
    reports[name] = report_to_json(report);
  }
  j["reports"] = std::move(reports);
  return j;
}

RunRecord run_record_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("kind", "") != "run") {
    throw validation_error("not a run record");
  }
  RunRecord record;
  record.run_id = j.at("run_id").get<std::string>();
  record.timestamp = j.at("timestamp").get<std::string>();
  record.engine_id = j.at("engine").get<std::string>();
  record.query_id = j.at("query_id").get<std::string>();
  record.tag = j.value("tag", "");
  record.transcript = transcript_from_json(j.at("transcript"));
  if (j.contains("reports")) {
    for (const auto& [name, value] : j["reports"].items()) {
      record.reports[name] = report_from_json(value);
    }
  }
  return record;
}

namespace {

struct PairResult {
  bool ok = false;
  RunRecord record;
  RunError error;
};

PairResult execute_pair(EngineClient& client, const Query& query,
                        const std::vector<BrandRegistry>& registries,
                        const Clock& clock) {
  PairResult result;
  const std::string timestamp = clock();
  try {
    ResponseTranscript transcript = client.execute(query);
    if (transcript.captured_at.empty()) transcript.captured_at = timestamp;
    RunRecord record;
    record.timestamp = transcript.captured_at;
    record.engine_id = client.engine_id();
    record.query_id = query.id;
    record.tag = query.tag;
    record.run_id =
        run_id_hash(record.engine_id, record.query_id, record.timestamp);
    for (const BrandRegistry& registry : registries) {
      record.reports[registry.name] = visibility_report(transcript, registry);
    }
    record.transcript = std::move(transcript);
    result.record = std::move(record);
    result.ok = true;
  } catch (const std::exception& e) {
    result.error = {timestamp, client.engine_id(), query.id, e.what()};
  }
  return result;
}

}  // namespace

RunSummary run_benchmark(const QueryLibrary& library,
                         const std::vector<std::unique_ptr<EngineClient>>& clients,
                         const std::vector<BrandRegistry>& registries,
                         const std::filesystem::path& store_path, Clock clock,
                         std::size_t parallelism) {
  struct Pair {
    EngineClient* client;
    const Query* query;
  };
  std::vector<Pair> pairs;
  for (const auto& client : clients) {
    for (const Query& query : library.queries) {
      pairs.push_back({client.get(), &query});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.client->engine_id() != b.client->engine_id()) {
      return a.client->engine_id() < b.client->engine_id();
    }
    return a.query->id < b.query->id;
  });

  // open before any work so an unwritable store fails fast
  std::ofstream store(store_path, std::ios::app | std::ios::binary);
  if (!store) {
    throw io_error("cannot open run store " + store_path.string());
  }

  std::vector<PairResult> results(pairs.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min(parallelism, pairs.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      results[i] =
          execute_pair(*pairs[i].client, *pairs[i].query, registries, clock);
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= pairs.size()) break;
        results[i] =
            execute_pair(*pairs[i].client, *pairs[i].query, registries, clock);
      }
    };
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  // single writer, deterministic order, one line per record
  RunSummary summary;
  summary.executed = pairs.size();
  for (const PairResult& result : results) {
    if (result.ok) {
      ++summary.succeeded;
      store << run_record_to_json(result.record).dump() << '\n';
    } else {
      ++summary.failed;
      summary.errors.push_back(result.error);
      nlohmann::json entry;
      entry["kind"] = "error";
      entry["timestamp"] = result.error.timestamp;
      entry["engine"] = result.error.engine_id;
      entry["query_id"] = result.error.query_id;
      entry["message"] = result.error.message;
      store << entry.dump() << '\n';
    }
    store.flush();
    if (!store) {
      throw io_error("write to run store " + store_path.string() + " failed");
    }
  }
  return summary;
}

ReadResult read_runs(const std::filesystem::path& store_path,
                     const RunFilter& filter) {
  if (!std::filesystem::exists(store_path)) {
    throw not_found_error("run store " + store_path.string() + " not found");
  }
  std::ifstream in(store_path, std::ios::binary);
  if (!in) throw io_error("cannot read run store " + store_path.string());

  ReadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::string(text::trim(line)).empty()) continue;
    nlohmann::json j =
        nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
      result.diagnostics.push_back("line " + std::to_string(line_no) +
                                   ": skipped (not valid JSON)");
      continue;
    }
    const std::string kind = j.value("kind", "");
    if (kind == "error") continue;  // error entries are not runs
    if (kind != "run") {
      result.diagnostics.push_back("line " + std::to_string(line_no) +
                                   ": skipped (unknown record kind)");
      continue;
    }
    try {
      RunRecord record = run_record_from_json(j);
      if (filter.engine_id && record.engine_id != *filter.engine_id) continue;
      if (filter.query_id && record.query_id != *filter.query_id) continue;
      if (filter.tag && record.tag != *filter.tag) continue;
      if (filter.window && !filter.window->contains(record.timestamp)) continue;
      result.records.push_back(std::move(record));
    } catch (const std::exception& e) {
      result.diagnostics.push_back("line " + std::to_string(line_no) +
                                   ": skipped (" + e.what() + ")");
    }
  }
  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const RunRecord& a, const RunRecord& b) {
                     if (a.timestamp != b.timestamp) {
                       return a.timestamp < b.timestamp;
                     }
                     if (a.engine_id != b.engine_id) {
                       return a.engine_id < b.engine_id;
                     }
                     return a.query_id < b.query_id;
                   });
  return result;
}

double citation_frequency(const std::vector<RunRecord>& runs,
                          const BrandRegistry& registry) {
  std::vector<const ResponseTranscript*> transcripts;
  transcripts.reserve(runs.size());
  for (const RunRecord& run : runs) transcripts.push_back(&run.transcript);
  return geometer::citation_frequency(transcripts, registry);
}

namespace {

WindowStats window_stats(const std::vector<const RunRecord*>& runs,
                         const BrandRegistry& registry) {
  WindowStats stats;
  stats.runs = runs.size();
  if (runs.empty()) return stats;

  double impression_sum = 0.0;
  std::size_t cited_total = 0;
  std::size_t owned_total = 0;
  std::size_t earned_total = 0;
  std::size_t unknown_total = 0;
  for (const RunRecord* run : runs) {
    const ResponseTranscript& t = run->transcript;
    if (cites_brand(t, registry)) {
      ++stats.citing_runs;
      double brand_impression = 0.0;
      for (const SourceRecord& source : t.sources) {
        if (classify_ownership(source.domain, registry) == Ownership::owned) {
          brand_impression +=
              impression_position_adjusted(t, source.marker_id);
        }
      }
      impression_sum += brand_impression;
    }
    for (const SourceRecord& source : t.sources) {
      bool cited = false;
      for (const SentenceSpan& s : t.sentences) {
        if (std::binary_search(s.cited_source_ids.begin(),
                               s.cited_source_ids.end(), source.marker_id)) {
          cited = true;
          break;
        }
      }
      if (!cited) continue;
      ++cited_total;
      switch (classify_ownership(source.domain, registry)) {
        case Ownership::owned: ++owned_total; break;
        case Ownership::earned: ++earned_total; break;
        case Ownership::unknown: ++unknown_total; break;
      }
    }
  }
  stats.citation_frequency = static_cast<double>(stats.citing_runs) /
                             static_cast<double>(stats.runs);
  if (stats.citing_runs > 0) {
    stats.mean_position_impression =
        impression_sum / static_cast<double>(stats.citing_runs);
  }
  if (cited_total > 0) {
    stats.owned_share = static_cast<double>(owned_total) / cited_total;
    stats.earned_share = static_cast<double>(earned_total) / cited_total;
    stats.unknown_share = static_cast<double>(unknown_total) / cited_total;
  }
  return stats;
}

std::optional<double> delta(const std::optional<double>& a,
                            const std::optional<double>& b) {
  if (!a || !b) return std::nullopt;
  return *b - *a;
}

}  // namespace

BenchmarkReport benchmark_report(const std::vector<RunRecord>& runs,
                                 const std::vector<BrandRegistry>& registries,
                                 const TimeWindow& window_a,
                                 const TimeWindow& window_b) {
  if (runs.empty()) {
    throw undefined_metric_error("benchmark report undefined over zero runs");
  }
  std::vector<std::string> engines;
  for (const RunRecord& run : runs) {
    if (std::find(engines.begin(), engines.end(), run.engine_id) ==
        engines.end()) {
      engines.push_back(run.engine_id);
    }
  }
  std::sort(engines.begin(), engines.end());

  BenchmarkReport report;
  report.window_a = window_a;
  report.window_b = window_b;
  for (const BrandRegistry& registry : registries) {
    for (const std::string& engine : engines) {
      std::vector<const RunRecord*> in_a;
      std::vector<const RunRecord*> in_b;
      for (const RunRecord& run : runs) {
        if (run.engine_id != engine) continue;
        if (window_a.contains(run.timestamp)) in_a.push_back(&run);
        if (window_b.contains(run.timestamp)) in_b.push_back(&run);
      }
      RegistryEngineStats entry;
      entry.registry = registry.name;
      entry.engine = engine;
      entry.window_a = window_stats(in_a, registry);
      entry.window_b = window_stats(in_b, registry);
      entry.frequency_delta = delta(entry.window_a.citation_frequency,
                                    entry.window_b.citation_frequency);
      entry.impression_delta = delta(entry.window_a.mean_position_impression,
                                     entry.window_b.mean_position_impression);
      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

namespace {

nlohmann::json optional_to_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return round6(*v);
}

std::string optional_to_text(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", *v);
  return buf;
}

nlohmann::json window_to_json(const WindowStats& w) {
  return {{"runs", w.runs},
          {"citing_runs", w.citing_runs},
          {"citation_frequency", optional_to_json(w.citation_frequency)},
          {"mean_position_impression",
           optional_to_json(w.mean_position_impression)},
          {"owned_share", optional_to_json(w.owned_share)},
          {"earned_share", optional_to_json(w.earned_share)},
          {"unknown_share", optional_to_json(w.unknown_share)}};
}

}  // namespace

nlohmann::json benchmark_report_to_json(const BenchmarkReport& report) {
  nlohmann::json j;
  j["window_a"] = {{"start", report.window_a.start},
                   {"end", report.window_a.end}};
  j["window_b"] = {{"start", report.window_b.start},
                   {"end", report.window_b.end}};
  nlohmann::json entries = nlohmann::json::array();
  for (const RegistryEngineStats& e : report.entries) {
    entries.push_back({{"registry", e.registry},
                       {"engine", e.engine},
                       {"window_a", window_to_json(e.window_a)},
                       {"window_b", window_to_json(e.window_b)},
                       {"frequency_delta", optional_to_json(e.frequency_delta)},
                       {"impression_delta",
                        optional_to_json(e.impression_delta)}});
  }
  j["entries"] = std::move(entries);
  return j;
}

std::string benchmark_report_to_markdown(const BenchmarkReport& report) {
  std::ostringstream out;
  out << "| registry | engine | freq A | freq B | freq delta | imp A | imp B "
         "| imp delta | owned B |\n";
  out << "|----------|--------|--------|--------|------------|-------|-------"
         "|-----------|---------|\n";
  for (const RegistryEngineStats& e : report.entries) {
    out << "| " << e.registry << " | " << e.engine << " | "
        << optional_to_text(e.window_a.citation_frequency) << " | "
        << optional_to_text(e.window_b.citation_frequency) << " | "
        << optional_to_text(e.frequency_delta) << " | "
        << optional_to_text(e.window_a.mean_position_impression) << " | "
        << optional_to_text(e.window_b.mean_position_impression) << " | "
        << optional_to_text(e.impression_delta) << " | "
        << optional_to_text(e.window_b.owned_share) << " |\n";
  }
  return out.str();
}

std::string benchmark_report_to_csv(const BenchmarkReport& report) {
  std::string out =
      "registry,engine,runs_a,citing_a,freq_a,imp_a,runs_b,citing_b,freq_b,"
      "imp_b,freq_delta,imp_delta\n";
  for (const RegistryEngineStats& e : report.entries) {
    out += e.registry + "," + e.engine + "," +
           std::to_string(e.window_a.runs) + "," +
           std::to_string(e.window_a.citing_runs) + "," +
           optional_to_text(e.window_a.citation_frequency) + "," +
           optional_to_text(e.window_a.mean_position_impression) + "," +
           std::to_string(e.window_b.runs) + "," +
           std::to_string(e.window_b.citing_runs) + "," +
           optional_to_text(e.window_b.citation_frequency) + "," +
           optional_to_text(e.window_b.mean_position_impression) + "," +
           optional_to_text(e.frequency_delta) + "," +
           optional_to_text(e.impression_delta) + "\n";
  }
  return out;
}

}  // namespace geometer::bench
