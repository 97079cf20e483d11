#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace geometer::entity {

// Checklist revision embedded in every report so scores stay comparable.
inline constexpr const char* kChecklistVersion = "1";
inline constexpr double kFindingPenalty = 5.0;  // composite points per class

struct Node {
  std::string id;                    // @id or synthetic "_:n<k>"
  bool synthetic_id = false;
  std::vector<std::string> types;    // @type values
  nlohmann::json properties;         // non-relational keys
  std::vector<std::size_t> provenance;  // source document indices

  bool has_type(std::string_view type) const;
};

struct Edge {
  std::string from;      // node id
  std::string to;        // node id or external URL
  std::string relation;  // sameAs, parentOrganization, ...
  bool internal = false; // true when `to` resolves to a node
};

enum class FindingClass { name_mismatch, licence_mismatch, value_conflict };

std::string to_string(FindingClass cls);

struct ConsistencyFinding {
  FindingClass cls;
  std::string node_id;
  std::string property;
  std::string detail;
};

struct EntityGraph {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<ConsistencyFinding> findings;

  const Node* find(std::string_view id) const;
};

// Builds the graph from flattened JSON-LD entities. Nodes are keyed by @id
// (synthetic ids otherwise); duplicate @ids merge with property union, and
// conflicting scalar values become consistency findings (last writer wins).
// Nested objects under relational properties become nodes plus typed edges;
// string values become external references.
EntityGraph build_entity_graph(const std::vector<nlohmann::json>& documents);

struct ClarityConfig {
  std::vector<std::string> regulator_domains;        // licence register hosts
  std::vector<std::string> regulator_keys;           // identifier propertyIDs
  std::vector<std::string> service_taxonomy;         // allowed categories
  std::vector<std::string> third_party_domains;      // review/profile hosts
  std::vector<std::string> company_register_domains; // company registry hosts

  static ClarityConfig defaults();
  static ClarityConfig from_json(const nlohmann::json& j);
  static ClarityConfig load(const std::filesystem::path& file);
};

enum class Layer {
  regulatory_identity,
  corporate_graph,
  service_taxonomy,
  reputation_signals,
};

inline constexpr std::array<Layer, 4> kAllLayers = {
    Layer::regulatory_identity, Layer::corporate_graph,
    Layer::service_taxonomy, Layer::reputation_signals};

std::string to_string(Layer layer);

struct LayerScore {
  Layer layer = Layer::regulatory_identity;
  double points = 0.0;  // 100 * satisfied / total
  std::vector<std::string> satisfied;
  std::vector<std::string> missing;
};

// Evaluates one layer's fixed three-item checklist against the graph.
LayerScore score_layer(const EntityGraph& graph, Layer layer,
                       const ClarityConfig& config);

struct EntityClarityReport {
  std::array<LayerScore, 4> layers;
  double composite = 0.0;  // mean layer points minus finding penalties
  std::vector<ConsistencyFinding> findings;
  std::string checklist_version = kChecklistVersion;
};

EntityClarityReport clarity_report(const EntityGraph& graph,
                                   const ClarityConfig& config);

nlohmann::json clarity_report_to_json(const EntityClarityReport& report);
std::string clarity_report_to_markdown(const EntityClarityReport& report);

}  // namespace geometer::entity
