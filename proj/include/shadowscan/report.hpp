#ifndef SHADOWSCAN_REPORT_HPP
#define SHADOWSCAN_REPORT_HPP

#include <string>

#include "json.hpp"
#include "shadowscan/core_model.hpp"
#include "shadowscan/mitigation.hpp"
#include "shadowscan/ordering.hpp"
#include "shadowscan/resolver.hpp"
#include "shadowscan/shadow_analysis.hpp"

// JSON views of the analysis results. nlohmann::json objects keep keys
// sorted, which is what makes reports byte-stable.
namespace shadowscan::report {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct Report {
  int schema_version = kSchemaVersion;
  std::string command;
  json inputs = json::object();
  json payload = json::object();

  json to_json() const {
    return json{{"schema_version", schema_version}, {"command", command}, {"inputs", inputs}, {"payload", payload}};
  }
};

inline json path_json(const TreePath& p) { return json(p.indices); }

inline json placed(const Coordinate& c, const TreePath& p) {
  return json{{"coordinate", c.str()}, {"path", path_json(p)}};
}

inline json node_json(const ResolvedNode& n) {
  json j{{"coordinate", n.coordinate.str()},
         {"path", path_json(n.path)},
         {"depth", n.depth},
         {"bfs_index", n.bfs_index},
         {"status", std::string(status_name(n.status))}};
  if (const auto* c = std::get_if<OmittedConflict>(&n.status)) j["winner"] = c->winner.str();
  if (const auto* d = std::get_if<OmittedDuplicate>(&n.status))
    j["first_occurrence_path"] = path_json(d->first_occurrence_path);
  json kids = json::array();
  for (const auto& c : n.children) kids.push_back(node_json(c));
  j["children"] = std::move(kids);
  return j;
}

inline json conflicts_json(const std::vector<Conflict>& conflicts) {
  json out = json::array();
  for (const auto& c : conflicts) {
    json losers = json::array();
    for (const auto& l : c.losers) losers.push_back(placed(l.coordinate, l.path));
    out.push_back(json{{"group_artifact", c.ga.str()},
                       {"winner", placed(c.winner.coordinate, c.winner.path)},
                       {"losers", std::move(losers)}});
  }
  return out;
}

inline json coordinates_json(const std::vector<Coordinate>& cs) {
  json out = json::array();
  for (const auto& c : cs) out.push_back(c.str());
  return out;
}

inline json classpath_json(const Classpath& cp) {
  return json{{"ecosystem", std::string(to_string(cp.ecosystem))},
              {"root_first", cp.root_first},
              {"entries", coordinates_json(cp.entries)}};
}

inline json finding_json(const ShadowFinding& f) {
  json shadowed = json::array();
  for (std::size_t i = 0; i < f.shadowed_victims.size(); ++i)
    shadowed.push_back(placed(f.shadowed_victims[i], f.victim_paths[i]));
  return json{{"class", f.class_name.str()},
              {"winner", placed(f.winner, f.winner_path)},
              {"winner_depth", f.winner_depth},
              {"shadowed", std::move(shadowed)}};
}

inline json verdict_json(const MitigationVerdict& v) {
  json viols = json::array();
  for (const auto& x : v.violations)
    viols.push_back(json{{"subject", x.subject}, {"artifacts", coordinates_json(x.artifacts)}, {"detail", x.detail}});
  return json{{"rule", std::string(to_string(v.rule))},
              {"passed", v.passed},
              {"violations", std::move(viols)},
              {"diagnostics", v.diagnostics}};
}

inline json diff_json(const EcosystemDiff& d) {
  return json{{"class", d.class_name.str()},
              {"maven_winner", d.maven_winner.str()},
              {"gradle_winner", d.gradle_winner.str()},
              {"providers", coordinates_json(d.providers)},
              {"differs", d.differs}};
}

}  // namespace shadowscan::report

#endif
