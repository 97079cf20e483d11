#include <doctest.h>

#include <fstream>
#include <sstream>

#include "geometer/clarity.hpp"
#include "geometer/jsonld.hpp"

using namespace geometer::entity;
using nlohmann::json;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(FIXTURES_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Programmatic full-profile documents mirroring the HTML fixture, split so
// each checklist item has independent evidence.
std::vector<json> full_profile_docs() {
  json org = json::parse(R"({
    "@context": "https://schema.org",
    "@type": "Organization",
    "@id": "https://aurorabet.example/#org",
    "name": "Aurora Interactive",
    "identifier": {"@type": "PropertyValue", "propertyID": "UKGC", "value": "39011"},
    "sameAs": [
      "https://www.gamblingcommission.gov.uk/public-register/business/detail/39011",
      "https://www.companieshouse.gov.uk/company/09876543",
      "https://www.trustpilot.com/review/aurorabet.example"
    ],
    "parentOrganization": {"@type": "Organization", "name": "Aurora Group Holdings"},
    "employee": {"@type": "Person", "name": "Dana Whitfield", "jobTitle": "Head of Compliance"},
    "makesOffer": {"@type": "Offer", "category": "live casino"},
    "aggregateRating": {"@type": "AggregateRating", "ratingValue": "4.3"},
    "review": {"@type": "Review", "reviewBody": "Fast withdrawals."},
    "award": "Operator of the Year 2025"
  })");
  json service = json::parse(R"({
    "@type": "Service", "name": "Aurora Sportsbook", "category": "sports betting"
  })");
  json product = json::parse(R"({
    "@type": "Product", "name": "Aurora Slots Collection", "category": "slots"
  })");
  return {org, service, product};
}

}  // namespace

TEST_CASE("extraction: full fixture page yields three flattened documents") {
  const auto extracted = extract_jsonld(read_fixture("entity/operator_full.html"));
  CHECK(extracted.diagnostics.empty());
  REQUIRE(extracted.documents.size() == 3);  // Organization + @graph pair
  CHECK(extracted.documents[0]["@type"] == "Organization");
  CHECK(extracted.documents[1]["@type"] == "Product");
  CHECK(extracted.documents[2]["@type"] == "WebSite");
}

TEST_CASE("extraction: malformed block becomes a diagnostic, not an error") {
  const auto extracted = extract_jsonld(read_fixture("entity/mixed_blocks.html"));
  CHECK(extracted.documents.size() == 2);
  REQUIRE(extracted.diagnostics.size() == 1);
  CHECK(extracted.diagnostics[0].block_index == 1);
}

TEST_CASE("extraction: page without structured data") {
  const auto extracted = extract_jsonld(read_fixture("entity/none.html"));
  CHECK(extracted.documents.empty());
  CHECK(extracted.diagnostics.empty());
}

TEST_CASE("extraction: unquoted type attributes and charset parameters") {
  const std::string page =
      "<script type=application/ld+json>{\"@type\":\"Organization\"}</script>"
      "<SCRIPT TYPE='application/ld+json; charset=utf-8'>{\"@type\":\"Person\"}"
      "</SCRIPT><script>var x = 1;</script>";
  const auto extracted = extract_jsonld(page);
  REQUIRE(extracted.documents.size() == 2);
  CHECK(extracted.documents[0]["@type"] == "Organization");
  CHECK(extracted.documents[1]["@type"] == "Person");
}

TEST_CASE("extraction: top-level arrays flatten") {
  const auto extracted = extract_raw_jsonld(
      R"([{"@type":"Organization","name":"A"},{"@type":"Person","name":"B"}])");
  REQUIRE(extracted.documents.size() == 2);
  CHECK(extracted.documents[1]["name"] == "B");
}

TEST_CASE("graph building: nodes, edges, provenance") {
  const auto graph = build_entity_graph(full_profile_docs());
  const Node* org = graph.find("https://aurorabet.example/#org");
  REQUIRE(org != nullptr);
  CHECK(org->has_type("Organization"));
  CHECK(org->provenance == std::vector<std::size_t>{0});

  // nested person became a node reachable through an employee edge
  bool employee_edge = false;
  for (const Edge& e : graph.edges) {
    if (e.relation == "employee" && e.from == org->id && e.internal) {
      employee_edge = true;
      const Node* person = graph.find(e.to);
      REQUIRE(person != nullptr);
      CHECK(person->has_type("Person"));
      CHECK(person->properties["jobTitle"] == "Head of Compliance");
    }
  }
  CHECK(employee_edge);

  // external sameAs edges stay external
  std::size_t external_sameas = 0;
  for (const Edge& e : graph.edges) {
    if (e.relation == "sameAs" && !e.internal) ++external_sameas;
  }
  CHECK(external_sameas == 3);
}

TEST_CASE("graph building: duplicate ids merge with property union") {
  std::vector<json> docs = {
      json::parse(R"({"@id":"x","@type":"Organization","name":"Aurora Interactive","url":"https://a.example"})"),
      json::parse(R"({"@id":"x","@type":"Organization","name":"Aurora Interactive","award":"Best 2025"})"),
  };
  const auto graph = build_entity_graph(docs);
  REQUIRE(graph.nodes.size() == 1);
  CHECK(graph.nodes[0].properties.contains("url"));
  CHECK(graph.nodes[0].properties.contains("award"));
  CHECK(graph.findings.empty());
  CHECK(graph.nodes[0].provenance == (std::vector<std::size_t>{0, 1}));
}

TEST_CASE("graph building: conflicting names are findings") {
  std::vector<json> docs = {
      json::parse(R"({"@id":"x","@type":"Organization","name":"Aurora Interactive"})"),
      json::parse(R"({"@id":"x","@type":"Organization","name":"Aurora Gaming"})"),
  };
  const auto graph = build_entity_graph(docs);
  REQUIRE(graph.findings.size() == 1);
  CHECK(graph.findings[0].cls == FindingClass::name_mismatch);
  // last writer wins
  CHECK(graph.nodes[0].properties["name"] == "Aurora Gaming");
}

TEST_CASE("graph building: licence conflicts are findings") {
  std::vector<json> docs = {
      json::parse(R"({"@id":"x","@type":"Organization","name":"Aurora",
        "identifier":{"@type":"PropertyValue","propertyID":"UKGC","value":"39011"}})"),
      json::parse(R"({"@id":"x","@type":"Organization","name":"Aurora",
        "identifier":{"@type":"PropertyValue","propertyID":"UKGC","value":"40000"}})"),
  };
  const auto graph = build_entity_graph(docs);
  bool licence_finding = false;
  for (const auto& f : graph.findings) {
    if (f.cls == FindingClass::licence_mismatch) licence_finding = true;
  }
  CHECK(licence_finding);
}

TEST_CASE("empty document list yields an empty graph") {
  const auto graph = build_entity_graph({});
  CHECK(graph.nodes.empty());
  CHECK(graph.edges.empty());
}

TEST_CASE("layers: full fixture scores 100 everywhere") {
  const auto graph = build_entity_graph(full_profile_docs());
  const auto config = ClarityConfig::defaults();
  for (Layer layer : kAllLayers) {
    const auto score = score_layer(graph, layer, config);
    INFO("layer " << to_string(layer));
    CHECK(score.points == 100.0);
    CHECK(score.missing.empty());
  }
  const auto report = clarity_report(graph, config);
  CHECK(report.composite == 100.0);
  CHECK(report.checklist_version == std::string(kChecklistVersion));
}

TEST_CASE("layers: empty graph scores zero everywhere") {
  const auto graph = build_entity_graph({});
  const auto config = ClarityConfig::defaults();
  for (Layer layer : kAllLayers) {
    const auto score = score_layer(graph, layer, config);
    CHECK(score.points == 0.0);
    CHECK(score.satisfied.empty());
    CHECK(score.missing.size() == 3);
  }
  CHECK(clarity_report(graph, config).composite == 0.0);
}

TEST_CASE("layers: implausible licence format keeps two thirds of the points") {
  std::vector<json> docs = {json::parse(R"({
    "@type": "Organization",
    "name": "Aurora Interactive",
    "identifier": {"@type": "PropertyValue", "propertyID": "UKGC", "value": "AB-39011/X"},
    "sameAs": "https://www.gamblingcommission.gov.uk/public-register/detail"
  })")};
  const auto graph = build_entity_graph(docs);
  const auto score =
      score_layer(graph, Layer::regulatory_identity, ClarityConfig::defaults());
  CHECK(score.points == 100.0 * 2.0 / 3.0);
  REQUIRE(score.missing.size() == 1);
  CHECK(score.missing[0] == "licence_format");
}

TEST_CASE("composite is the layer mean minus finding penalties") {
  // full profile plus a second document disagreeing on the licence number
  auto docs = full_profile_docs();
  docs.push_back(json::parse(R"({
    "@id": "https://aurorabet.example/#org",
    "@type": "Organization",
    "name": "Aurora Interactive",
    "identifier": {"@type": "PropertyValue", "propertyID": "UKGC", "value": "40000"}
  })"));
  const auto config = ClarityConfig::defaults();
  const auto report = clarity_report(build_entity_graph(docs), config);
  // layers remain fully satisfied; one finding class costs five points
  CHECK(report.composite == 95.0);
  REQUIRE_FALSE(report.findings.empty());
  CHECK(report.findings[0].cls == FindingClass::licence_mismatch);
}

TEST_CASE("monotonicity: adding a satisfied item never lowers a score") {
  // build up the profile document piece by piece
  std::vector<json> base = {json::parse(R"({"@type":"Organization","name":"A"})")};
  const auto config = ClarityConfig::defaults();
  double last = clarity_report(build_entity_graph(base), config).composite;
  auto docs = full_profile_docs();
  for (std::size_t i = 0; i < docs.size(); ++i) {
    std::vector<json> subset(docs.begin(), docs.begin() + i + 1);
    const double composite =
        clarity_report(build_entity_graph(subset), config).composite;
    CHECK(composite >= last - 1e-12);
    last = composite;
  }
}

TEST_CASE("merging idempotence: doubled documents score identically") {
  const auto docs = full_profile_docs();
  auto doubled = docs;
  for (const auto& d : docs) doubled.push_back(d);
  const auto config = ClarityConfig::defaults();
  const auto once = clarity_report(build_entity_graph(docs), config);
  const auto twice = clarity_report(build_entity_graph(doubled), config);
  CHECK(once.composite == twice.composite);
  for (std::size_t i = 0; i < once.layers.size(); ++i) {
    CHECK(once.layers[i].points == twice.layers[i].points);
  }
}

TEST_CASE("clarity config defaults and overrides") {
  const auto def = ClarityConfig::defaults();
  CHECK(def.service_taxonomy ==
        std::vector<std::string>{"sports betting", "live casino", "slots",
                                 "poker"});
  CHECK(def.regulator_domains ==
        std::vector<std::string>{"gamblingcommission.gov.uk"});
  const auto custom = ClarityConfig::from_json(
      json::parse(R"({"service_taxonomy":["bingo","esports"]})"));
  CHECK(custom.service_taxonomy ==
        std::vector<std::string>{"bingo", "esports"});
  CHECK(custom.regulator_domains == def.regulator_domains);
}

TEST_CASE("report serialization") {
  const auto graph = build_entity_graph(full_profile_docs());
  const auto report = clarity_report(graph, ClarityConfig::defaults());
  const auto j = clarity_report_to_json(report);
  CHECK(j["composite"] == 100.0);
  CHECK(j["checklist_version"] == "1");
  CHECK(j["layers"].size() == 4);
  const std::string md = clarity_report_to_markdown(report);
  CHECK(md.find("100.0 / 100") != std::string::npos);
}
