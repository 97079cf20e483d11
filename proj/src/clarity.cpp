#include "geometer/clarity.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "geometer/domains.hpp"
#include "geometer/errors.hpp"
#include "geometer/text.hpp"

namespace geometer::entity {

namespace {

// Properties treated as graph relations; everything else stays a property.
const std::set<std::string>& relation_keys() {
  static const std::set<std::string> keys = {
      "sameAs",        "parentOrganization", "subOrganization",
      "memberOf",      "employee",           "employees",
      "founder",       "worksFor",           "affiliation",
      "brand",         "offers",             "makesOffer",
      "itemOffered",   "hasOfferCatalog",    "itemListElement",
      "review",        "reviews",            "aggregateRating",
      "hasCredential", "publisher",          "owns"};
  return keys;
}

std::string scalar_to_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

bool Node::has_type(std::string_view type) const {
  return std::any_of(types.begin(), types.end(),
                     [type](const std::string& t) { return t == type; });
}

std::string to_string(FindingClass cls) {
  switch (cls) {
    case FindingClass::name_mismatch: return "name_mismatch";
    case FindingClass::licence_mismatch: return "licence_mismatch";
    case FindingClass::value_conflict: return "value_conflict";
  }
  return "value_conflict";
}

const Node* EntityGraph::find(std::string_view id) const {
  for (const Node& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

namespace {

class GraphBuilder {
 public:
  EntityGraph build(const std::vector<nlohmann::json>& documents) {
    for (std::size_t di = 0; di < documents.size(); ++di) {
      if (documents[di].is_object()) add_entity(documents[di], di);
    }
    resolve_edges();
    cross_check_licences();
    return std::move(graph_);
  }

 private:
  std::string add_entity(const nlohmann::json& doc, std::size_t doc_index) {
    std::string id;
    if (doc.contains("@id") && doc["@id"].is_string()) {
      id = doc["@id"].get<std::string>();
    } else {
      id = "_:n" + std::to_string(synthetic_counter_++);
    }
    Node* node = find_mutable(id);
    if (node == nullptr) {
      graph_.nodes.push_back(Node{id, id.rfind("_:", 0) == 0, {},
                                  nlohmann::json::object(), {}});
      node = &graph_.nodes.back();
      index_[id] = graph_.nodes.size() - 1;
    }
    node->provenance.push_back(doc_index);

    if (doc.contains("@type")) {
      const auto& t = doc["@type"];
      auto add_type = [node](const std::string& name) {
        if (!node->has_type(name)) node->types.push_back(name);
      };
      if (t.is_string()) add_type(t.get<std::string>());
      if (t.is_array()) {
        for (const auto& item : t) {
          if (item.is_string()) add_type(item.get<std::string>());
        }
      }
    }

    for (const auto& [key, value] : doc.items()) {
      if (!key.empty() && key.front() == '@') continue;
      if (relation_keys().count(key)) {
        add_relation(id, key, value, doc_index);
      } else {
        set_property(*find_mutable(id), key, value);
      }
    }
    return id;
  }

  void add_relation(const std::string& from, const std::string& relation,
                    const nlohmann::json& value, std::size_t doc_index) {
    if (value.is_array()) {
      for (const auto& item : value) {
        add_relation(from, relation, item, doc_index);
      }
      return;
    }
    if (value.is_string()) {
      graph_.edges.push_back({from, value.get<std::string>(), relation, false});
      return;
    }
    if (value.is_object()) {
      // {"@id": "..."} references an entity without restating it
      if (value.size() == 1 && value.contains("@id") &&
          value["@id"].is_string()) {
        graph_.edges.push_back(
            {from, value["@id"].get<std::string>(), relation, false});
        return;
      }
      std::string child = add_entity(value, doc_index);
      graph_.edges.push_back({from, child, relation, true});
    }
  }

  void set_property(Node& node, const std::string& key,
                    const nlohmann::json& value) {
    if (!node.properties.contains(key)) {
      node.properties[key] = value;
      return;
    }
    const nlohmann::json& previous = node.properties[key];
    if (previous == value) return;
    if (previous.is_primitive() && value.is_primitive()) {
      record_conflict(node, key, previous, value);
    } else if (key == "identifier") {
      check_identifier_conflict(node, previous, value);
    }
    node.properties[key] = value;  // last writer wins, flagged above
  }

  void record_conflict(const Node& node, const std::string& key,
                       const nlohmann::json& previous,
                       const nlohmann::json& next) {
    FindingClass cls = FindingClass::value_conflict;
    if (key == "name") cls = FindingClass::name_mismatch;
    graph_.findings.push_back(
        {cls, node.id, key,
         scalar_to_string(previous) + " vs " + scalar_to_string(next)});
  }

  // Conflicting identifier values for the same propertyID on one node.
  void check_identifier_conflict(const Node& node,
                                 const nlohmann::json& previous,
                                 const nlohmann::json& next) {
    auto values = [](const nlohmann::json& v) {
      std::map<std::string, std::string> out;
      auto add_one = [&out](const nlohmann::json& item) {
        if (item.is_object() && item.contains("value")) {
          out[item.value("propertyID", "")] =
              scalar_to_string(item["value"]);
        }
      };
      if (v.is_object()) add_one(v);
      if (v.is_array()) {
        for (const auto& item : v) add_one(item);
      }
      return out;
    };
    const auto before = values(previous);
    const auto after = values(next);
    for (const auto& [pid, val] : after) {
      auto it = before.find(pid);
      if (it != before.end() && it->second != val) {
        graph_.findings.push_back({FindingClass::licence_mismatch, node.id,
                                   "identifier",
                                   it->second + " vs " + val + " (" + pid + ")"});
      }
    }
  }

  void resolve_edges() {
    for (Edge& e : graph_.edges) {
      e.internal = index_.count(e.to) > 0;
    }
  }

  // Same-named organizations advertising different values for one
  // identifier propertyID are a licence inconsistency.
  void cross_check_licences() {
    std::map<std::string, std::map<std::string, std::set<std::string>>> by_name;
    for (const Node& node : graph_.nodes) {
      if (!node.has_type("Organization")) continue;
      if (!node.properties.contains("name")) continue;
      const std::string name =
          text::fold(scalar_to_string(node.properties["name"]));
      if (!node.properties.contains("identifier")) continue;
      const nlohmann::json& ident = node.properties["identifier"];
      auto add_one = [&](const nlohmann::json& item) {
        if (item.is_object() && item.contains("value")) {
          by_name[name][item.value("propertyID", "")].insert(
              scalar_to_string(item["value"]));
        }
      };
      if (ident.is_object()) add_one(ident);
      if (ident.is_array()) {
        for (const auto& item : ident) add_one(item);
      }
    }
    for (const auto& [name, by_pid] : by_name) {
      for (const auto& [pid, values] : by_pid) {
        if (values.size() > 1) {
          std::string detail;
          for (const std::string& v : values) {
            if (!detail.empty()) detail += " vs ";
            detail += v;
          }
          graph_.findings.push_back({FindingClass::licence_mismatch, name,
                                     "identifier", detail + " (" + pid + ")"});
        }
      }
    }
  }

  Node* find_mutable(const std::string& id) {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &graph_.nodes[it->second];
  }

  EntityGraph graph_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t synthetic_counter_ = 0;
};

}  // namespace

EntityGraph build_entity_graph(const std::vector<nlohmann::json>& documents) {
  return GraphBuilder().build(documents);
}

ClarityConfig ClarityConfig::defaults() {
  ClarityConfig c;
  c.regulator_domains = {"gamblingcommission.gov.uk"};
  c.regulator_keys = {"ukgc"};
  c.service_taxonomy = {"sports betting", "live casino", "slots", "poker"};
  c.third_party_domains = {"trustpilot.com", "wikipedia.org", "linkedin.com",
                           "crunchbase.com"};
  c.company_register_domains = {"companieshouse.gov.uk"};
  return c;
}

ClarityConfig ClarityConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw config_error("clarity config must be an object");
  ClarityConfig c = defaults();
  auto read = [&j](const char* key, std::vector<std::string>& target) {
    if (!j.contains(key)) return;
    std::vector<std::string> entries;
    for (const auto& e : j[key]) {
      std::string folded = text::fold(text::trim(e.get<std::string>()));
      if (!folded.empty()) entries.push_back(std::move(folded));
    }
    if (!entries.empty()) target = std::move(entries);
  };
  read("regulator_domains", c.regulator_domains);
  read("regulator_keys", c.regulator_keys);
  read("service_taxonomy", c.service_taxonomy);
  read("third_party_domains", c.third_party_domains);
  read("company_register_domains", c.company_register_domains);
  return c;
}

ClarityConfig ClarityConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw io_error("cannot read clarity config " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error("clarity config " + file.string() + ": " + e.what());
  }
  return from_json(j);
}

std::string to_string(Layer layer) {
  switch (layer) {
    case Layer::regulatory_identity: return "regulatory_identity";
    case Layer::corporate_graph: return "corporate_graph";
    case Layer::service_taxonomy: return "service_taxonomy";
    case Layer::reputation_signals: return "reputation_signals";
  }
  return "regulatory_identity";
}

namespace {

bool domain_listed(const std::string& url,
                   const std::vector<std::string>& domains) {
  const std::string domain = net::registrable_domain(url);
  return std::find(domains.begin(), domains.end(), domain) != domains.end();
}

bool sameas_to(const EntityGraph& graph,
               const std::vector<std::string>& domains) {
  return std::any_of(graph.edges.begin(), graph.edges.end(),
                     [&](const Edge& e) {
                       return e.relation == "sameAs" && !e.internal &&
                              domain_listed(e.to, domains);
                     });
}

// identifier entries of a node as (propertyID, value) pairs
std::vector<std::pair<std::string, std::string>> identifier_entries(
    const Node& node) {
  std::vector<std::pair<std::string, std::string>> out;
  if (!node.properties.contains("identifier")) return out;
  const nlohmann::json& ident = node.properties["identifier"];
  auto add_one = [&out](const nlohmann::json& item) {
    if (item.is_object() && item.contains("value")) {
      out.emplace_back(item.value("propertyID", ""),
                       scalar_to_string(item["value"]));
    } else if (item.is_string()) {
      out.emplace_back("", item.get<std::string>());
    }
  };
  if (ident.is_array()) {
    for (const auto& item : ident) add_one(item);
  } else {
    add_one(ident);
  }
  return out;
}

// numeric account-number shape: 3 to 10 digits
bool plausible_licence_value(const std::string& value) {
  const std::string_view v = text::trim(value);
  if (v.size() < 3 || v.size() > 10) return false;
  return std::all_of(v.begin(), v.end(),
                     [](char c) { return text::is_digit(c); });
}

std::vector<std::string> string_values(const nlohmann::json& v) {
  std::vector<std::string> out;
  if (v.is_string()) out.push_back(v.get<std::string>());
  if (v.is_array()) {
    for (const auto& item : v) {
      if (item.is_string()) out.push_back(item.get<std::string>());
    }
  }
  return out;
}

std::vector<std::string> category_values(const Node& node) {
  std::vector<std::string> out;
  for (const char* key : {"category", "serviceType"}) {
    if (node.properties.contains(key)) {
      for (std::string& v : string_values(node.properties[key])) {
        out.push_back(text::fold(text::trim(v)));
      }
    }
  }
  return out;
}

bool is_service_like(const Node& node) {
  return node.has_type("Service") || node.has_type("Offer") ||
         node.has_type("Product");
}

struct ChecklistEval {
  std::string id;
  bool satisfied;
};

std::vector<ChecklistEval> evaluate_layer(const EntityGraph& graph,
                                          Layer layer,
                                          const ClarityConfig& config) {
  switch (layer) {
    case Layer::regulatory_identity: {
      bool keyed = false;
      bool plausible = false;
      for (const Node& node : graph.nodes) {
        if (!node.has_type("Organization")) continue;
        for (const auto& [pid, value] : identifier_entries(node)) {
          const std::string folded_pid = text::fold(pid);
          if (std::find(config.regulator_keys.begin(),
                        config.regulator_keys.end(),
                        folded_pid) != config.regulator_keys.end()) {
            keyed = true;
          }
          if (plausible_licence_value(value)) plausible = true;
        }
      }
      return {{"licence_identifier", keyed},
              {"regulator_sameas", sameas_to(graph, config.regulator_domains)},
              {"licence_format", plausible}};
    }
    case Layer::corporate_graph: {
      bool person = false;
      for (const Node& node : graph.nodes) {
        if (!node.has_type("Person")) continue;
        if (!node.properties.contains("jobTitle")) continue;
        const bool linked = std::any_of(
            graph.edges.begin(), graph.edges.end(),
            [&node](const Edge& e) { return e.internal && e.to == node.id; });
        if (linked) {
          person = true;
          break;
        }
      }
      const bool hierarchy = std::any_of(
          graph.edges.begin(), graph.edges.end(), [](const Edge& e) {
            return e.relation == "parentOrganization" ||
                   e.relation == "subOrganization";
          });
      return {{"person_with_jobtitle", person},
              {"org_hierarchy_link", hierarchy},
              {"company_register_sameas",
               sameas_to(graph, config.company_register_domains)}};
    }
    case Layer::service_taxonomy: {
      const bool service_node = std::any_of(
          graph.nodes.begin(), graph.nodes.end(),
          [](const Node& n) { return n.has_type("Service"); });
      static const std::set<std::string> offer_relations = {
          "offers", "makesOffer", "hasOfferCatalog", "itemOffered",
          "itemListElement"};
      const bool offer_structure = std::any_of(
          graph.edges.begin(), graph.edges.end(), [](const Edge& e) {
            return offer_relations.count(e.relation) > 0;
          });
      bool any_service_like = false;
      bool all_categorized = true;
      bool all_in_taxonomy = true;
      for (const Node& node : graph.nodes) {
        if (!is_service_like(node)) continue;
        any_service_like = true;
        const auto categories = category_values(node);
        if (categories.empty()) {
          all_categorized = false;
          continue;
        }
        for (const std::string& category : categories) {
          if (std::find(config.service_taxonomy.begin(),
                        config.service_taxonomy.end(),
                        category) == config.service_taxonomy.end()) {
            all_in_taxonomy = false;
          }
        }
      }
      const bool coverage =
          any_service_like && all_categorized && all_in_taxonomy;
      return {{"service_node", service_node},
              {"offer_structure", offer_structure},
              {"taxonomy_coverage", coverage}};
    }
    case Layer::reputation_signals: {
      const bool rating = std::any_of(
          graph.nodes.begin(), graph.nodes.end(), [](const Node& n) {
            return n.has_type("AggregateRating") &&
                   n.properties.contains("ratingValue");
          });
      bool review_or_award = std::any_of(
          graph.nodes.begin(), graph.nodes.end(),
          [](const Node& n) { return n.has_type("Review"); });
      if (!review_or_award) {
        review_or_award = std::any_of(
            graph.nodes.begin(), graph.nodes.end(), [](const Node& n) {
              return (n.properties.contains("award") &&
                      !n.properties["award"].empty()) ||
                     (n.properties.contains("awards") &&
                      !n.properties["awards"].empty());
            });
      }
      return {{"aggregate_rating", rating},
              {"review_or_award", review_or_award},
              {"third_party_profile_sameas",
               sameas_to(graph, config.third_party_domains)}};
    }
  }
  throw validation_error("unknown entity-clarity layer");
}

}  // namespace

LayerScore score_layer(const EntityGraph& graph, Layer layer,
                       const ClarityConfig& config) {
  const auto items = evaluate_layer(graph, layer, config);
  LayerScore score;
  score.layer = layer;
  std::size_t satisfied = 0;
  for (const ChecklistEval& item : items) {
    if (item.satisfied) {
      ++satisfied;
      score.satisfied.push_back(item.id);
    } else {
      score.missing.push_back(item.id);
    }
  }
  score.points = 100.0 * static_cast<double>(satisfied) /
                 static_cast<double>(items.size());
  return score;
}

EntityClarityReport clarity_report(const EntityGraph& graph,
                                   const ClarityConfig& config) {
  EntityClarityReport report;
  double sum = 0.0;
  for (std::size_t i = 0; i < kAllLayers.size(); ++i) {
    report.layers[i] = score_layer(graph, kAllLayers[i], config);
    sum += report.layers[i].points;
  }
  report.findings = graph.findings;
  std::set<FindingClass> classes;
  for (const ConsistencyFinding& f : graph.findings) classes.insert(f.cls);
  report.composite =
      std::max(0.0, sum / static_cast<double>(kAllLayers.size()) -
                        kFindingPenalty * static_cast<double>(classes.size()));
  return report;
}

nlohmann::json clarity_report_to_json(const EntityClarityReport& report) {
  nlohmann::json j;
  j["checklist_version"] = report.checklist_version;
  j["composite"] = report.composite;
  nlohmann::json layers = nlohmann::json::object();
  for (const LayerScore& layer : report.layers) {
    layers[to_string(layer.layer)] = {{"points", layer.points},
                                      {"satisfied", layer.satisfied},
                                      {"missing", layer.missing}};
  }
  j["layers"] = std::move(layers);
  nlohmann::json findings = nlohmann::json::array();
  for (const ConsistencyFinding& f : report.findings) {
    findings.push_back({{"class", to_string(f.cls)},
                        {"node", f.node_id},
                        {"property", f.property},
                        {"detail", f.detail}});
  }
  j["findings"] = std::move(findings);
  return j;
}

std::string clarity_report_to_markdown(const EntityClarityReport& report) {
  std::ostringstream out;
  out << "# Entity clarity report (checklist v" << report.checklist_version
      << ")\n\n";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", report.composite);
  out << "Composite score: **" << buf << " / 100**\n\n";
  out << "| layer | points | missing items |\n";
  out << "|-------|--------|---------------|\n";
  for (const LayerScore& layer : report.layers) {
    std::snprintf(buf, sizeof(buf), "%.1f", layer.points);
    out << "| " << to_string(layer.layer) << " | " << buf << " | ";
    for (std::size_t i = 0; i < layer.missing.size(); ++i) {
      if (i > 0) out << ", ";
      out << layer.missing[i];
    }
    out << " |\n";
  }
  if (!report.findings.empty()) {
    out << "\n## Consistency findings\n\n";
    for (const ConsistencyFinding& f : report.findings) {
      out << "- **" << to_string(f.cls) << "** on `" << f.node_id << "."
          << f.property << "`: " << f.detail << "\n";
    }
  }
  return out.str();
}

}  // namespace geometer::entity
