// geometer: measure brand visibility inside generative-engine answers.
//
// Subcommands: score, analyze, entity, bench run, bench report.
// Exit codes: 0 success, 1 validation/usage error, 2 runtime error,
// 3 success with warnings (degraded bench runs, skipped store lines,
// malformed structured-data blocks).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "geometer/bench.hpp"
#include "geometer/clarity.hpp"
#include "geometer/content.hpp"
#include "geometer/errors.hpp"
#include "geometer/jsonld.hpp"
#include "geometer/text.hpp"
#include "geometer/transcript.hpp"
#include "geometer/visibility.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitWarnings = 3;

std::string read_file_or_throw(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw geometer::io_error("cannot read " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string read_stdin() {
  std::ostringstream buf;
  buf << std::cin.rdbuf();
  return buf.str();
}

// Paths and defaults merged as: built-in defaults < config file < flags.
struct CliConfig {
  std::string brands_path;
  std::string analyzer_config_path;
  std::string clarity_config_path;
  std::string format = "json";
  int verbosity = 0;
};

CliConfig load_cli_config(const std::string& config_flag) {
  CliConfig cfg;
  std::string path = config_flag;
  if (path.empty()) {
    if (const char* env = std::getenv("GEOMETER_CONFIG")) path = env;
  }
  if (path.empty()) return cfg;
  json j;
  try {
    j = json::parse(read_file_or_throw(path));
  } catch (const json::parse_error& e) {
    throw geometer::config_error("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) {
    throw geometer::config_error("config file " + path +
                                 ": expected a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "brands") cfg.brands_path = value.get<std::string>();
    else if (key == "analyzer_config") cfg.analyzer_config_path = value.get<std::string>();
    else if (key == "clarity_config") cfg.clarity_config_path = value.get<std::string>();
    else if (key == "format") cfg.format = value.get<std::string>();
    else {
      throw geometer::config_error("config file " + path +
                                   ": unknown key '" + key + "'");
    }
  }
  if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "md") {
    throw geometer::config_error("config file " + path +
                                 ": format must be json|csv|md");
  }
  return cfg;
}

std::vector<geometer::BrandRegistry> load_registries(const std::string& path) {
  if (path.empty()) {
    throw geometer::validation_error(
        "no brand registry given (use --brands or a config file)");
  }
  json j;
  try {
    j = json::parse(read_file_or_throw(path));
  } catch (const json::parse_error& e) {
    throw geometer::validation_error("brands file " + path + ": " + e.what());
  }
  return geometer::registries_from_json(j);
}

struct ScoreArgs {
  std::string transcript_path;
  bool from_stdin = false;
  std::string sources_path;
  std::string query;
  std::string engine = "stdin";
  bool raw_position = false;
};

int cmd_score(const ScoreArgs& args, const CliConfig& cfg) {
  geometer::ResponseTranscript transcript;
  if (args.from_stdin) {
    if (args.sources_path.empty()) {
      throw geometer::validation_error("--stdin needs --sources <tsv file>");
    }
    transcript = geometer::make_transcript(
        args.query, args.engine, geometer::bench::now_utc_iso(), read_stdin(),
        geometer::parse_sources_tsv(read_file_or_throw(args.sources_path)));
  } else if (!args.transcript_path.empty()) {
    transcript = geometer::parse_transcript_file(
        read_file_or_throw(args.transcript_path));
  } else {
    throw geometer::validation_error("score needs --transcript or --stdin");
  }

  const auto weighting = args.raw_position
                             ? geometer::PositionWeighting::raw_index
                             : geometer::PositionWeighting::normalized_index;
  std::vector<geometer::VisibilityReport> reports;
  for (const auto& registry : load_registries(cfg.brands_path)) {
    reports.push_back(
        geometer::visibility_report(transcript, registry, weighting));
  }

  if (cfg.format == "csv") {
    if (reports.size() != 1) {
      throw geometer::validation_error(
          "csv output supports exactly one registry; use --format json");
    }
    std::cout << geometer::report_to_csv(reports.front());
  } else if (cfg.format == "md") {
    for (const auto& report : reports) {
      std::cout << "## " << report.registry_name << "\n\n"
                << "| marker | domain | class | imp_wc | imp_pos_adj |\n"
                << "|--------|--------|-------|--------|-------------|\n";
      for (const auto& e : report.entries) {
        char wc[32];
        char pos[32];
        std::snprintf(wc, sizeof(wc), "%.6f", e.impression_wc);
        std::snprintf(pos, sizeof(pos), "%.6f", e.impression_pos);
        std::cout << "| " << e.marker_id << " | " << e.domain << " | "
                  << geometer::to_string(e.ownership) << " | " << wc << " | "
                  << pos << " |\n";
      }
      std::cout << "\nowned share flag: "
                << geometer::to_string(report.shares.band_flag) << "\n\n";
    }
  } else {
    if (reports.size() == 1) {
      std::cout << geometer::report_to_json(reports.front()).dump(2) << "\n";
    } else {
      json arr = json::array();
      for (const auto& report : reports) {
        arr.push_back(geometer::report_to_json(report));
      }
      std::cout << arr.dump(2) << "\n";
    }
  }
  return kExitOk;
}

struct AnalyzeArgs {
  std::string input_path;
  std::string keywords_csv;
  bool force_markdown = false;
  bool force_plain = false;
};

int cmd_analyze(const AnalyzeArgs& args, const CliConfig& cfg) {
  if (args.input_path.empty()) {
    throw geometer::validation_error("analyze needs --input <file>");
  }
  std::string body = args.input_path == "-"
                         ? read_stdin()
                         : read_file_or_throw(args.input_path);
  const std::string ext = fs::path(args.input_path).extension().string();
  const bool markdown =
      args.force_markdown ||
      (!args.force_plain && (ext == ".md" || ext == ".markdown"));
  if (markdown) body = geometer::text::strip_markdown(body);

  geometer::content::AnalyzerConfig config =
      cfg.analyzer_config_path.empty()
          ? geometer::content::AnalyzerConfig::defaults()
          : geometer::content::AnalyzerConfig::load(cfg.analyzer_config_path);
  if (!args.keywords_csv.empty()) {
    config.keywords.clear();
    std::stringstream ss(args.keywords_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!std::string(geometer::text::trim(item)).empty()) {
        config.keywords.push_back(item);
      }
    }
  }

  const auto profile = geometer::content::strategy_profile(body, config);
  const auto priors = geometer::content::default_priors();
  const auto recs = geometer::content::recommend_strategies(profile, priors);

  if (cfg.format == "md") {
    std::cout << geometer::content::recommendations_to_markdown(recs);
  } else {
    json out;
    out["profile"] = geometer::content::profile_to_json(profile);
    out["recommendations"] = geometer::content::recommendations_to_json(recs);
    std::cout << out.dump(2) << "\n";
  }
  return kExitOk;
}

struct EntityArgs {
  std::vector<std::string> inputs;
};

int cmd_entity(const EntityArgs& args, const CliConfig& cfg) {
  if (args.inputs.empty()) {
    throw geometer::validation_error("entity needs --input <file> (repeatable)");
  }
  std::vector<json> documents;
  std::size_t warnings = 0;
  for (const std::string& input : args.inputs) {
    const std::string bytes = read_file_or_throw(input);
    const std::string ext =
        geometer::text::fold(fs::path(input).extension().string());
    geometer::entity::ExtractedDocuments extracted =
        (ext == ".html" || ext == ".htm")
            ? geometer::entity::extract_jsonld(bytes)
            : geometer::entity::extract_raw_jsonld(bytes);
    for (const auto& diag : extracted.diagnostics) {
      std::cerr << "warning: " << input << ": block " << diag.block_index
                << ": " << diag.message << "\n";
      ++warnings;
    }
    for (auto& doc : extracted.documents) {
      documents.push_back(std::move(doc));
    }
  }

  const geometer::entity::ClarityConfig config =
      cfg.clarity_config_path.empty()
          ? geometer::entity::ClarityConfig::defaults()
          : geometer::entity::ClarityConfig::load(cfg.clarity_config_path);
  const auto graph = geometer::entity::build_entity_graph(documents);
  const auto report = geometer::entity::clarity_report(graph, config);

  if (cfg.format == "md") {
    std::cout << geometer::entity::clarity_report_to_markdown(report);
  } else {
    std::cout << geometer::entity::clarity_report_to_json(report).dump(2)
              << "\n";
  }
  return warnings > 0 ? kExitWarnings : kExitOk;
}

struct BenchRunArgs {
  std::string library_path;
  std::vector<std::string> engine_specs;  // name=fixtures:<dir>
  std::string store_path;
  std::string frozen_clock;
  std::size_t parallelism = 1;
};

int cmd_bench_run(const BenchRunArgs& args, const CliConfig& cfg) {
  if (args.library_path.empty() || args.store_path.empty() ||
      args.engine_specs.empty()) {
    throw geometer::validation_error(
        "bench run needs --library, --store and at least one --engine");
  }
  const auto library = geometer::bench::load_query_library(args.library_path);
  const auto registries = load_registries(cfg.brands_path);
  geometer::bench::Clock clock =
      args.frozen_clock.empty()
          ? geometer::bench::system_clock()
          : geometer::bench::frozen_clock(args.frozen_clock);

  std::vector<std::unique_ptr<geometer::bench::EngineClient>> clients;
  for (const std::string& spec : args.engine_specs) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw geometer::validation_error("bad --engine spec '" + spec +
                                       "', expected name=fixtures:<dir>");
    }
    clients.push_back(geometer::bench::make_client(
        spec.substr(0, eq), spec.substr(eq + 1), clock));
  }

  if (cfg.verbosity > 0) {
    std::cerr << "library " << args.library_path << ": "
              << library.queries.size() << " queries x " << clients.size()
              << " engines, " << registries.size() << " registries\n";
  }
  const auto summary = geometer::bench::run_benchmark(
      library, clients, registries, args.store_path, clock, args.parallelism);
  if (cfg.verbosity > 0) {
    std::cerr << "appended " << summary.succeeded << " records to "
              << args.store_path << "\n";
  }

  json out;
  out["executed"] = summary.executed;
  out["succeeded"] = summary.succeeded;
  out["failed"] = summary.failed;
  json errors = json::array();
  for (const auto& e : summary.errors) {
    errors.push_back({{"engine", e.engine_id},
                      {"query_id", e.query_id},
                      {"timestamp", e.timestamp},
                      {"message", e.message}});
  }
  out["errors"] = std::move(errors);
  std::cout << out.dump(2) << "\n";
  for (const auto& e : summary.errors) {
    std::cerr << "warning: " << e.engine_id << "/" << e.query_id << ": "
              << e.message << "\n";
  }
  return summary.failed > 0 ? kExitWarnings : kExitOk;
}

struct BenchReportArgs {
  std::string store_path;
  std::string window_a;
  std::string window_b;
  std::string engine;
  std::string tag;
};

geometer::bench::TimeWindow parse_window(const std::string& value,
                                         const char* flag) {
  const std::size_t comma = value.find(',');
  if (comma == std::string::npos) {
    throw geometer::validation_error(std::string(flag) +
                                     " expects '<start>,<end>' (ISO-8601)");
  }
  geometer::bench::TimeWindow w{value.substr(0, comma),
                                value.substr(comma + 1)};
  if (w.start.empty() || w.end.empty() || w.end < w.start) {
    throw geometer::validation_error(std::string(flag) +
                                     ": empty or inverted window");
  }
  return w;
}

int cmd_bench_report(const BenchReportArgs& args, const CliConfig& cfg) {
  if (args.store_path.empty() || args.window_a.empty() ||
      args.window_b.empty()) {
    throw geometer::validation_error(
        "bench report needs --store, --window-a and --window-b");
  }
  const auto window_a = parse_window(args.window_a, "--window-a");
  const auto window_b = parse_window(args.window_b, "--window-b");

  geometer::bench::RunFilter filter;
  if (!args.engine.empty()) filter.engine_id = args.engine;
  if (!args.tag.empty()) filter.tag = args.tag;
  const auto read = geometer::bench::read_runs(args.store_path, filter);
  for (const std::string& diag : read.diagnostics) {
    std::cerr << "warning: " << args.store_path << ": " << diag << "\n";
  }

  const auto registries = load_registries(cfg.brands_path);
  const auto report = geometer::bench::benchmark_report(read.records,
                                                        registries, window_a,
                                                        window_b);
  if (cfg.format == "md") {
    std::cout << geometer::bench::benchmark_report_to_markdown(report);
  } else if (cfg.format == "csv") {
    std::cout << geometer::bench::benchmark_report_to_csv(report);
  } else {
    std::cout << geometer::bench::benchmark_report_to_json(report).dump(2)
              << "\n";
  }
  return read.diagnostics.empty() ? kExitOk : kExitWarnings;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"brand visibility metrics for generative-engine answers"};
  app.require_subcommand(1);

  std::string config_flag;
  std::string format_flag;
  std::string brands_flag;
  std::string analyzer_flag;
  std::string clarity_flag;
  app.add_option("--config", config_flag,
                 "config file (default: $GEOMETER_CONFIG)");
  app.add_option("--format", format_flag, "output format")
      ->check(CLI::IsMember({"json", "csv", "md"}));
  app.add_option("--brands", brands_flag, "brand registry file");
  app.add_option("--analyzer-config", analyzer_flag, "analyzer config file");
  app.add_option("--clarity-config", clarity_flag, "clarity config file");
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "more diagnostics on stderr");

  ScoreArgs score_args;
  auto* score = app.add_subcommand(
      "score", "visibility report for one answer transcript");
  score->fallthrough();
  score->add_option("--transcript", score_args.transcript_path,
                    "transcript JSON file");
  score->add_flag("--stdin", score_args.from_stdin,
                  "read annotated answer text from stdin");
  score->add_option("--sources", score_args.sources_path,
                    "id<TAB>url sidecar for --stdin");
  score->add_option("--query", score_args.query, "query text for --stdin");
  score->add_option("--engine", score_args.engine, "engine id for --stdin");
  score->add_flag("--raw-position", score_args.raw_position,
                  "use exp(-index) position weights instead of "
                  "length-normalized ones");

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand(
      "analyze", "strategy profile and recommendations for a document");
  analyze->fallthrough();
  analyze->add_option("--input", analyze_args.input_path,
                      "text or markdown file ('-' for stdin)");
  analyze->add_option("--keywords", analyze_args.keywords_csv,
                      "comma-separated keyword list");
  analyze->add_flag("--markdown", analyze_args.force_markdown,
                    "treat input as markdown");
  analyze->add_flag("--plain", analyze_args.force_plain,
                    "treat input as plain text");

  EntityArgs entity_args;
  auto* entity = app.add_subcommand(
      "entity", "entity-clarity audit over structured data");
  entity->fallthrough();
  entity->add_option("--input", entity_args.inputs,
                     "HTML or raw JSON-LD file (repeatable)");

  auto* bench = app.add_subcommand("bench", "query-library benchmarking");
  bench->fallthrough();
  bench->require_subcommand(1);

  BenchRunArgs run_args;
  auto* bench_run = bench->add_subcommand("run", "execute the query library");
  bench_run->fallthrough();
  bench_run->add_option("--library", run_args.library_path,
                        "query library JSON file");
  bench_run->add_option("--engine", run_args.engine_specs,
                        "engine client as name=fixtures:<dir> (repeatable)");
  bench_run->add_option("--store", run_args.store_path,
                        "append-only run store (JSON lines)");
  bench_run->add_option("--frozen-clock", run_args.frozen_clock,
                        "fixed ISO-8601 timestamp for deterministic runs");
  bench_run->add_option("--parallel", run_args.parallelism,
                        "max concurrent client calls");

  BenchReportArgs report_args;
  auto* bench_report =
      bench->add_subcommand("report", "windowed benchmark report");
  bench_report->fallthrough();
  bench_report->add_option("--store", report_args.store_path, "run store");
  bench_report->add_option("--window-a", report_args.window_a,
                           "first window as '<start>,<end>'");
  bench_report->add_option("--window-b", report_args.window_b,
                           "second window as '<start>,<end>'");
  bench_report->add_option("--engine", report_args.engine,
                           "only this engine id");
  bench_report->add_option("--tag", report_args.tag,
                           "only queries with this tag");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help / --version
    }
    std::cerr << e.what() << "\n";
    std::cerr << "run with --help for usage\n";
    return kExitValidation;
  }

  CliConfig cfg = load_cli_config(config_flag);
  if (!format_flag.empty()) cfg.format = format_flag;
  if (!brands_flag.empty()) cfg.brands_path = brands_flag;
  if (!analyzer_flag.empty()) cfg.analyzer_config_path = analyzer_flag;
  if (!clarity_flag.empty()) cfg.clarity_config_path = clarity_flag;
  cfg.verbosity = verbosity;

  if (score->parsed()) return cmd_score(score_args, cfg);
  if (analyze->parsed()) return cmd_analyze(analyze_args, cfg);
  if (entity->parsed()) return cmd_entity(entity_args, cfg);
  if (bench->parsed()) {
    if (bench_run->parsed()) return cmd_bench_run(run_args, cfg);
    if (bench_report->parsed()) return cmd_bench_report(report_args, cfg);
  }
  std::cerr << "no subcommand selected\n";
  return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const geometer::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const geometer::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const geometer::referential_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const geometer::duplication_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const geometer::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const geometer::not_found_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
