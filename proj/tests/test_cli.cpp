// Drives the installed binary end to end through a shell, checking exit
// codes, stream separation and machine-readable output.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBin = GEOMETER_BIN;
const std::string kFixtures = FIXTURES_DIR;

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path temp_dir() {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() /
                 ("geometer_cli_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::string& args) {
  const fs::path dir = temp_dir();
  const fs::path out_path = dir / "out.txt";
  const fs::path err_path = dir / "err.txt";
  const std::string command = kBin + " " + args + " >" + out_path.string() +
                              " 2>" + err_path.string();
  const int status = std::system(command.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

}  // namespace

TEST_CASE("score: json report on stdout, exit 0") {
  const auto r = run_cli("score --transcript " + kFixtures +
                         "/transcripts/worked_example.json --brands " +
                         kFixtures + "/brands/bet365.json");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);  // exactly one JSON document
  CHECK(j["registry"] == "bet365");
  CHECK(j["sources"].size() == 3);
  CHECK(j["sources"][0]["class"] == "owned");
  CHECK(j["sources"][0]["imp_pos_adj"].get<double>() ==
        doctest::Approx(0.715102));
}

TEST_CASE("score: csv format") {
  const auto r = run_cli("score --format csv --transcript " + kFixtures +
                         "/transcripts/worked_example.json --brands " +
                         kFixtures + "/brands/bet365.json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("marker_id,domain,class,imp_wc,imp_pos_adj", 0) == 0);
  CHECK(r.out.find("0.818182") != std::string::npos);
}

TEST_CASE("unknown flag: usage on stderr, empty stdout, exit 1") {
  const auto r = run_cli("score --no-such-flag");
  CHECK(r.exit_code == 1);
  CHECK(r.out.empty());
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("missing input: validation error, exit 1") {
  const auto r = run_cli("score --brands " + kFixtures + "/brands/bet365.json");
  CHECK(r.exit_code == 1);
  CHECK(r.out.empty());
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("analyze: markdown article") {
  const auto r = run_cli("analyze --input " + kFixtures +
                         "/configs/sample_article.md --keywords casino,payout");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["profile"]["scores"].size() == 9);
  CHECK(j["recommendations"].size() == 9);
  // markdown table variant
  const auto md = run_cli("analyze --format md --input " + kFixtures +
                          "/configs/sample_article.md");
  CHECK(md.exit_code == 0);
  CHECK(md.out.find("| strategy |") != std::string::npos);
}

TEST_CASE("entity: full fixture scores a perfect composite") {
  const auto r = run_cli("entity --input " + kFixtures +
                         "/entity/operator_full.html");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["composite"] == 100.0);
}

TEST_CASE("entity: malformed block warns and exits 3") {
  const auto r = run_cli("entity --input " + kFixtures +
                         "/entity/mixed_blocks.html");
  CHECK(r.exit_code == 3);
  CHECK_FALSE(r.err.empty());
  CHECK(json::parse(r.out).contains("composite"));
}

TEST_CASE("bench run: complete fixtures exit 0, degraded run exits 3") {
  const fs::path store = temp_dir() / "runs.jsonl";
  const std::string base =
      "bench run --library " + kFixtures + "/bench/library.json --brands " +
      kFixtures + "/brands/aurora_and_rival.json --frozen-clock "
      "2026-01-01T00:00:00Z --store " + store.string();
  const auto ok = run_cli(base + " --engine alpha=fixtures:" + kFixtures +
                          "/bench/engines/alpha --engine beta=fixtures:" +
                          kFixtures + "/bench/engines/beta");
  CHECK(ok.exit_code == 0);
  const json summary = json::parse(ok.out);
  CHECK(summary["executed"] == 6);
  CHECK(summary["failed"] == 0);

  const fs::path store2 = temp_dir() / "runs.jsonl";
  const std::string degraded_cmd =
      "bench run --library " + kFixtures + "/bench/library.json --brands " +
      kFixtures + "/brands/aurora_and_rival.json --frozen-clock "
      "2026-01-01T00:00:00Z --store " + store2.string() +
      " --engine gamma=fixtures:" + kFixtures + "/bench/engines/gamma";
  const auto degraded = run_cli(degraded_cmd);
  CHECK(degraded.exit_code == 3);
  const json dsummary = json::parse(degraded.out);
  CHECK(dsummary["failed"] == 1);
  CHECK_FALSE(degraded.err.empty());
}

TEST_CASE("bench report: windowed deltas from a store") {
  const fs::path dir = temp_dir();
  const fs::path store = dir / "runs.jsonl";
  const std::string run_cmd =
      "bench run --library " + kFixtures + "/bench/library.json --brands " +
      kFixtures + "/brands/aurora_and_rival.json --store " + store.string() +
      " --frozen-clock 2026-01-01T12:00:00Z --engine alpha=fixtures:" +
      kFixtures + "/bench/engines/alpha";
  REQUIRE(run_cli(run_cmd).exit_code == 0);
  const auto r = run_cli(
      "bench report --store " + store.string() + " --brands " + kFixtures +
      "/brands/aurora_and_rival.json --window-a "
      "2026-01-01T00:00:00Z,2026-01-02T00:00:00Z --window-b "
      "2026-01-01T00:00:00Z,2026-01-02T00:00:00Z");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["entries"].size() == 2);
  // alpha cites aurora in q1 and q2 of its three fixtures
  CHECK(j["entries"][0]["registry"] == "aurora");
  // serialized fractions carry six decimals
  CHECK(j["entries"][0]["window_a"]["citation_frequency"].get<double>() ==
        doctest::Approx(0.666667).epsilon(1e-9));
  CHECK(j["entries"][0]["frequency_delta"].get<double>() == 0.0);
}

TEST_CASE("unwritable store is a runtime error, exit 2") {
  const auto r = run_cli(
      "bench run --library " + kFixtures + "/bench/library.json --brands " +
      kFixtures + "/brands/aurora_and_rival.json --engine alpha=fixtures:" +
      kFixtures + "/bench/engines/alpha --store /no/such/dir/runs.jsonl");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("run store") != std::string::npos);
}

TEST_CASE("config file supplies defaults, flags win") {
  const fs::path dir = temp_dir();
  const fs::path cfg = dir / "geometer.json";
  {
    std::ofstream out(cfg);
    out << R"({"brands": ")" << kFixtures << R"(/brands/bet365.json", "format": "csv"})";
  }
  // config format csv applies
  const auto csv = run_cli("--config " + cfg.string() +
                           " score --transcript " + kFixtures +
                           "/transcripts/worked_example.json");
  CHECK(csv.exit_code == 0);
  CHECK(csv.out.rfind("marker_id,", 0) == 0);
  // the flag overrides the config file
  const auto js = run_cli("--config " + cfg.string() + " --format json " +
                          "score --transcript " + kFixtures +
                          "/transcripts/worked_example.json");
  CHECK(js.exit_code == 0);
  CHECK(json::parse(js.out)["registry"] == "bet365");
  // malformed config names the problem and exits 1
  const fs::path bad = dir / "bad.json";
  {
    std::ofstream out(bad);
    out << R"({"formats": "json"})";
  }
  const auto err = run_cli("--config " + bad.string() + " score --transcript " +
                           kFixtures + "/transcripts/worked_example.json");
  CHECK(err.exit_code == 1);
  CHECK(err.err.find("formats") != std::string::npos);
}

TEST_CASE("GEOMETER_CONFIG supplies the default config path") {
  const fs::path dir = temp_dir();
  const fs::path cfg = dir / "env.json";
  {
    std::ofstream out(cfg);
    out << R"({"brands": ")" << kFixtures << R"(/brands/bet365.json"})";
  }
  // run_cli goes through the shell, so an env prefix works
  const auto r = run_cli("score --transcript " + kFixtures +
                         "/transcripts/worked_example.json");
  CHECK(r.exit_code == 1);  // without the env var there is no registry
  const fs::path out_path = dir / "out.txt";
  const std::string command = "GEOMETER_CONFIG=" + cfg.string() + " " + kBin +
                              " score --transcript " + kFixtures +
                              "/transcripts/worked_example.json > " +
                              out_path.string() + " 2>/dev/null";
  REQUIRE(std::system(command.c_str()) == 0);
  CHECK(json::parse(slurp(out_path))["registry"] == "bet365");
}

TEST_CASE("stdin scoring with a sources sidecar") {
  const fs::path dir = temp_dir();
  const fs::path sources = dir / "sources.tsv";
  const fs::path answer = dir / "answer.txt";
  {
    std::ofstream out(sources);
    out << "1\thttps://brand.com/about\n2\thttps://news.co.uk/story\n";
  }
  {
    std::ofstream out(answer);
    out << "Brand.com is licensed [1]. Coverage agrees [2].";
  }
  const auto r = run_cli("score --stdin --sources " + sources.string() +
                         " --query check --engine manual --brands " +
                         kFixtures + "/brands/brand.json < " + answer.string());
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["sources"].size() == 2);
  CHECK(j["sources"][0]["class"] == "owned");
}
