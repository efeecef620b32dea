#ifndef SHADOWSCAN_CLI_HPP
#define SHADOWSCAN_CLI_HPP

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "shadowscan/artifact_inspect.hpp"
#include "shadowscan/mitigation.hpp"
#include "shadowscan/ordering.hpp"
#include "shadowscan/pom_io.hpp"
#include "shadowscan/report.hpp"
#include "shadowscan/resolver.hpp"
#include "shadowscan/shadow_analysis.hpp"

namespace shadowscan::cli {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kResolutionError = 2;
inline constexpr int kShadowFound = 3;
inline constexpr int kMitigationFailed = 4;
}  // namespace exit_code

enum class Format { Text, Json };

struct Options {
  std::string repo;
  std::string root;
  Format format = Format::Text;
  std::size_t depth_limit = 64;
  Ecosystem ecosystem = Ecosystem::Maven;
  std::optional<LayoutMode> layout;
  bool fail_on_shadow = false;
  std::optional<std::string> attacker;
  std::optional<std::string> target;
  std::vector<MitigationRule> rules{MitigationRule::BanDuplicateClasses, MitigationRule::SealedJar,
                                    MitigationRule::JavaModules};
  std::optional<std::string> allowlist;
  bool root_module = false;
};

inline std::optional<MitigationRule> parse_rule(std::string_view s) {
  if (s == "dup") return MitigationRule::BanDuplicateClasses;
  if (s == "sealed") return MitigationRule::SealedJar;
  if (s == "modules") return MitigationRule::JavaModules;
  return std::nullopt;
}

namespace detail {

using report::json;

struct Session {
  Repository repo;
  PomDocument root_pom;
  ResolutionReport resolution;
};

inline Session open_session(const Options& o, std::ostream& err) {
  auto root = Coordinate::parse(o.root);
  auto repo = load_repository(o.repo);
  for (const auto& w : repo.warnings()) err << "warning: " << w << "\n";
  auto pom = fetch_pom(repo, root);
  auto res = resolve(repo, pom, ResolveOptions{o.depth_limit});
  return Session{std::move(repo), std::move(pom), std::move(res)};
}

/// Dependency inventories in classpath order, preceded by the project's own
/// classes when the root artifact has content.
inline std::vector<ClassInventory> classpath_inventories(const Session& s, const Classpath& cp) {
  std::vector<ClassInventory> out;
  if (const auto* e = s.repo.find(s.root_pom.coordinate); cp.root_first && e && e->content_path())
    out.push_back(inspect_entry(*e));
  auto deps = inventory_all(s.repo, cp);
  out.insert(out.end(), std::make_move_iterator(deps.begin()), std::make_move_iterator(deps.end()));
  return out;
}

inline json base_inputs(const Options& o) {
  return json{{"repo", o.repo}, {"root", o.root}, {"depth_limit", o.depth_limit}};
}

inline std::string label(const ResolvedNode& n) {
  std::string s = n.coordinate.str();
  if (const auto* c = std::get_if<OmittedConflict>(&n.status)) s += " (omitted for conflict with " + c->winner.version() + ")";
  if (std::holds_alternative<OmittedDuplicate>(n.status)) s += " (omitted for duplicate)";
  return s;
}

inline void render_tree(const ResolvedNode& n, const std::string& prefix, std::ostream& out) {
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    const bool last = i + 1 == n.children.size();
    out << prefix << "+-" << label(n.children[i]) << "\n";
    render_tree(n.children[i], prefix + (last ? "   " : "|  "), out);
  }
}

inline std::string where(const ResolvedTree& tree, const Coordinate& c) {
  if (c == tree.root().coordinate) return "project";
  const auto* n = tree.find_included(c);
  return n ? "depth " + std::to_string(n->depth) + " at " + n->path.str() : "?";
}

inline void emit(const report::Report& r, std::ostream& out) { out << r.to_json().dump(2) << "\n"; }

inline int cmd_resolve(const Options& o, std::ostream& out, std::ostream& err) {
  auto s = open_session(o, err);
  const auto& tree = s.resolution.tree;
  std::size_t included = 0;
  for (const auto* n : bfs_order(tree)) included += n->included();

  if (o.format == Format::Json) {
    report::Report r{report::kSchemaVersion, "resolve", base_inputs(o), {}};
    r.payload = json{{"tree", report::node_json(tree.root())},
                     {"conflicts", report::conflicts_json(s.resolution.conflicts)},
                     {"node_count", tree.size()},
                     {"included_count", included}};
    emit(r, out);
    return exit_code::kOk;
  }
  out << label(tree.root()) << "\n";
  render_tree(tree.root(), "", out);
  out << "\n" << tree.size() << " nodes, " << included << " included\n";
  if (!s.resolution.conflicts.empty()) {
    out << "conflicts:\n";
    for (const auto& c : s.resolution.conflicts) {
      out << "  " << c.ga.str() << ": kept " << c.winner.coordinate.version() << " at " << c.winner.path.str();
      for (const auto& l : c.losers) out << "; dropped " << l.coordinate.version() << " at " << l.path.str();
      out << "\n";
    }
  }
  return exit_code::kOk;
}

inline int cmd_classpath(const Options& o, std::ostream& out, std::ostream& err) {
  auto s = open_session(o, err);
  auto cp = build_classpath(s.resolution.tree, o.ecosystem);
  std::optional<PackagingLayout> layout;
  if (o.layout) layout = emit_layout(s.resolution.tree, *o.layout);

  if (o.format == Format::Json) {
    auto inputs = base_inputs(o);
    inputs["ecosystem"] = std::string(to_string(o.ecosystem));
    inputs["layout"] = o.layout ? std::string(to_string(*o.layout)) : "none";
    report::Report r{report::kSchemaVersion, "classpath", std::move(inputs), {}};
    r.payload = json{{"classpath", report::classpath_json(cp)}};
    if (layout) r.payload["layout"] = layout->lines;
    emit(r, out);
    return exit_code::kOk;
  }
  out << "classpath (" << to_string(o.ecosystem) << ", " << cp.entries.size() << " entries):\n";
  for (std::size_t i = 0; i < cp.entries.size(); ++i) out << "  " << i << " " << cp.entries[i].str() << "\n";
  if (layout) out << "\n" << layout->text();
  return exit_code::kOk;
}

inline int cmd_scan(const Options& o, std::ostream& out, std::ostream& err) {
  auto s = open_session(o, err);
  const auto& tree = s.resolution.tree;
  auto cp = build_classpath(tree, o.ecosystem);
  auto findings = detect_shadowing(effective_classes(classpath_inventories(s, cp)), tree);
  const int rc = o.fail_on_shadow && !findings.empty() ? exit_code::kShadowFound : exit_code::kOk;

  if (o.format == Format::Json) {
    auto inputs = base_inputs(o);
    inputs["ecosystem"] = std::string(to_string(o.ecosystem));
    inputs["fail_on_shadow"] = o.fail_on_shadow;
    report::Report r{report::kSchemaVersion, "scan", std::move(inputs), {}};
    json fs = json::array();
    for (const auto& f : findings) fs.push_back(report::finding_json(f));
    r.payload = json{{"classpath", report::classpath_json(cp)}, {"findings", std::move(fs)}};
    emit(r, out);
    return rc;
  }
  out << "classpath (" << to_string(o.ecosystem) << "): " << cp.entries.size() << " artifacts\n";
  out << "findings: " << findings.size() << "\n";
  for (const auto& f : findings) {
    out << f.class_name.str() << "\n";
    out << "  loaded from " << f.winner.str() << " (depth " << f.winner_depth << " at " << f.winner_path.str()
        << ")\n";
    for (std::size_t i = 0; i < f.shadowed_victims.size(); ++i)
      out << "  shadows     " << f.shadowed_victims[i].str() << " (" << f.victim_paths[i].str() << ")\n";
  }
  return rc;
}

inline int cmd_hijack(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.attacker.has_value() == o.target.has_value()) {
    err << "error: exactly one of --attacker or --target is required\n";
    return exit_code::kInputError;
  }
  const auto subject = Coordinate::parse(o.attacker ? *o.attacker : *o.target);
  auto s = open_session(o, err);
  const auto& tree = s.resolution.tree;
  const bool reach = o.attacker.has_value();
  auto artifacts = reach ? hijack_reach(tree, o.ecosystem, subject).reachable_victims
                         : hijack_surface(tree, o.ecosystem, subject);

  if (o.format == Format::Json) {
    auto inputs = base_inputs(o);
    inputs["ecosystem"] = std::string(to_string(o.ecosystem));
    inputs[reach ? "attacker" : "target"] = subject.str();
    report::Report r{report::kSchemaVersion, "hijack", std::move(inputs), {}};
    json list = json::array();
    for (const auto& c : artifacts) {
      const auto* n = tree.find_included(c);
      list.push_back(json{{"coordinate", c.str()}, {"path", report::path_json(n->path)}, {"depth", n->depth}});
    }
    const auto* sn = tree.find_included(subject);
    r.payload = json{{"mode", reach ? "reach" : "surface"},
                     {"subject", report::placed(subject, sn->path)},
                     {"artifacts", std::move(list)}};
    emit(r, out);
    return exit_code::kOk;
  }
  out << (reach ? "classes hijackable from " : "positions able to hijack ") << subject.str() << " ("
      << where(tree, subject) << ", " << to_string(o.ecosystem) << "): " << artifacts.size() << "\n";
  for (const auto& c : artifacts) out << "  " << c.str() << " (" << where(tree, c) << ")\n";
  return exit_code::kOk;
}

inline int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<ClassPattern> allow;
  if (o.allowlist) allow = parse_allowlist(shadowscan::detail::read_file(*o.allowlist));
  auto s = open_session(o, err);
  auto cp = build_classpath(s.resolution.tree, o.ecosystem);
  auto inventories = classpath_inventories(s, cp);
  auto map = effective_classes(inventories);

  std::vector<MitigationVerdict> verdicts;
  for (auto rule : o.rules) {
    switch (rule) {
      case MitigationRule::BanDuplicateClasses: verdicts.push_back(check_ban_duplicate_classes(map, allow)); break;
      case MitigationRule::SealedJar: verdicts.push_back(check_sealed(inventories, map)); break;
      case MitigationRule::JavaModules: verdicts.push_back(check_modules(inventories, o.root_module)); break;
    }
  }
  bool all = true;
  for (const auto& v : verdicts) all = all && v.passed;
  const int rc = all ? exit_code::kOk : exit_code::kMitigationFailed;

  if (o.format == Format::Json) {
    auto inputs = base_inputs(o);
    inputs["ecosystem"] = std::string(to_string(o.ecosystem));
    json rules = json::array();
    for (auto r : o.rules) rules.push_back(std::string(to_string(r)));
    inputs["rules"] = std::move(rules);
    inputs["allowlist"] = o.allowlist ? json(*o.allowlist) : json(nullptr);
    inputs["root_module"] = o.root_module;
    report::Report r{report::kSchemaVersion, "check", std::move(inputs), {}};
    json vs = json::array();
    for (const auto& v : verdicts) vs.push_back(report::verdict_json(v));
    r.payload = json{{"passed", all}, {"verdicts", std::move(vs)}};
    emit(r, out);
    return rc;
  }
  for (const auto& v : verdicts) {
    out << to_string(v.rule) << ": " << (v.passed ? "PASS" : "FAIL") << "\n";
    for (const auto& x : v.violations) {
      out << "  " << x.subject << ": " << x.detail << "\n";
      for (const auto& a : x.artifacts) out << "    " << a.str() << "\n";
    }
    for (const auto& d : v.diagnostics) out << "  note: " << d << "\n";
  }
  return rc;
}

inline int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
  auto s = open_session(o, err);
  const auto& tree = s.resolution.tree;
  std::map<Coordinate, ClassInventory> by_coord;
  if (const auto* e = s.repo.find(s.root_pom.coordinate); e && e->content_path())
    by_coord.emplace(e->pom.coordinate, inspect_entry(*e));
  for (const auto& inv : inventory_all(s.repo, build_classpath(tree, Ecosystem::Maven)))
    by_coord.emplace(inv.coordinate, inv);
  auto diffs = compare_ecosystems(tree, by_coord);
  std::size_t differing = 0;
  for (const auto& d : diffs) differing += d.differs;

  if (o.format == Format::Json) {
    report::Report r{report::kSchemaVersion, "compare", base_inputs(o), {}};
    json ds = json::array();
    for (const auto& d : diffs) ds.push_back(report::diff_json(d));
    r.payload = json{{"classes", std::move(ds)}, {"differing", differing}};
    emit(r, out);
    return exit_code::kOk;
  }
  out << "duplicated classes: " << diffs.size() << ", winner differs: " << differing << "\n";
  for (const auto& d : diffs) {
    out << (d.differs ? "* " : "  ") << d.class_name.str() << "\n";
    out << "    maven:  " << d.maven_winner.str() << "\n";
    out << "    gradle: " << d.gradle_winner.str() << "\n";
  }
  return exit_code::kOk;
}

inline int error_exit(const Error& e) {
  switch (e.code()) {
    case Errc::UnresolvableDependency:
    case Errc::DepthLimitExceeded:
    case Errc::UnknownArtifact:
      return exit_code::kResolutionError;
    default:
      return exit_code::kInputError;
  }
}

}  // namespace detail

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"resolve", "classpath", "scan", "hijack", "check", "compare"};
  return names;
}

/// Runs one subcommand and returns its process exit code. Library errors are
/// reported on `err` and mapped to exit codes 1 (input) or 2 (resolution).
inline int run(std::string_view command, const Options& o, std::ostream& out, std::ostream& err) {
  try {
    if (command == "resolve") return detail::cmd_resolve(o, out, err);
    if (command == "classpath") return detail::cmd_classpath(o, out, err);
    if (command == "scan") return detail::cmd_scan(o, out, err);
    if (command == "hijack") return detail::cmd_hijack(o, out, err);
    if (command == "check") return detail::cmd_check(o, out, err);
    if (command == "compare") return detail::cmd_compare(o, out, err);
    err << "error: unknown command '" << command << "'\n";
    return exit_code::kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return detail::error_exit(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kInputError;
  }
}

}  // namespace shadowscan::cli

#endif
