#ifndef SHADOWSCAN_SHADOW_ANALYSIS_HPP
#define SHADOWSCAN_SHADOW_ANALYSIS_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "shadowscan/artifact_inspect.hpp"
#include "shadowscan/core_model.hpp"
#include "shadowscan/error.hpp"
#include "shadowscan/ordering.hpp"

namespace shadowscan {

struct ClassBinding {
  Coordinate winner;
  std::vector<Coordinate> shadowed;  // classpath order, winner excluded

  friend bool operator==(const ClassBinding&, const ClassBinding&) = default;
};

/// Class name -> the artifact a first-match classpath lookup loads it from.
struct EffectiveClassMap {
  std::map<ClassName, ClassBinding> bindings;

  const ClassBinding* find(const ClassName& c) const {
    auto it = bindings.find(c);
    return it == bindings.end() ? nullptr : &it->second;
  }
};

inline EffectiveClassMap effective_classes(const std::vector<ClassInventory>& inventories) {
  EffectiveClassMap map;
  for (const auto& inv : inventories) {
    for (const auto& cls : inv.classes) {
      auto [it, fresh] = map.bindings.try_emplace(cls, ClassBinding{inv.coordinate, {}});
      if (!fresh) it->second.shadowed.push_back(inv.coordinate);
    }
  }
  return map;
}

struct ShadowFinding {
  ClassName class_name;
  Coordinate winner;
  std::vector<Coordinate> shadowed_victims;
  std::size_t winner_depth = 0;
  TreePath winner_path;
  std::vector<TreePath> victim_paths;  // parallel to shadowed_victims
};

namespace detail {

inline const ResolvedNode& included_node(const ResolvedTree& tree, const Coordinate& c) {
  if (c == tree.root().coordinate) return tree.root();
  const auto* n = tree.find_included(c);
  if (!n) throw Error(Errc::UnknownArtifact, c.str() + " is not an included node of the tree");
  return *n;
}

}  // namespace detail

/// One finding per shadowed class, deepest winners first, then by name.
inline std::vector<ShadowFinding> detect_shadowing(const EffectiveClassMap& map, const ResolvedTree& tree) {
  std::vector<ShadowFinding> out;
  for (const auto& [cls, b] : map.bindings) {
    if (b.shadowed.empty()) continue;
    const auto& w = detail::included_node(tree, b.winner);
    ShadowFinding f{cls, b.winner, b.shadowed, w.depth, w.path, {}};
    for (const auto& v : b.shadowed) f.victim_paths.push_back(detail::included_node(tree, v).path);
    out.push_back(std::move(f));
  }
  std::stable_sort(out.begin(), out.end(), [](const ShadowFinding& a, const ShadowFinding& b) {
    if (a.winner_depth != b.winner_depth) return a.winner_depth > b.winner_depth;
    return a.class_name < b.class_name;
  });
  return out;
}

struct HijackReach {
  Coordinate attacker;
  std::vector<Coordinate> reachable_victims;  // classpath order
};

namespace detail {

inline std::size_t require_ordinal(const Classpath& cp, const Coordinate& c) {
  auto pos = cp.ordinal(c);
  if (!pos) throw Error(Errc::UnknownArtifact, c.str() + " is not on the " + std::string(to_string(cp.ecosystem)) +
                                                   " classpath");
  return *pos;
}

}  // namespace detail

/// Artifacts placed after `attacker` on the classpath: any of their classes
/// can be shadowed by a same-named class in `attacker`.
inline HijackReach hijack_reach(const ResolvedTree& tree, Ecosystem ecosystem, const Coordinate& attacker) {
  auto cp = build_classpath(tree, ecosystem);
  auto pos = detail::require_ordinal(cp, attacker);
  return HijackReach{attacker, {cp.entries.begin() + static_cast<std::ptrdiff_t>(pos) + 1, cp.entries.end()}};
}

/// Artifacts placed before `target`: the positions from which the target's
/// classes can be hijacked.
inline std::vector<Coordinate> hijack_surface(const ResolvedTree& tree, Ecosystem ecosystem, const Coordinate& target) {
  auto cp = build_classpath(tree, ecosystem);
  auto pos = detail::require_ordinal(cp, target);
  return {cp.entries.begin(), cp.entries.begin() + static_cast<std::ptrdiff_t>(pos)};
}

struct EcosystemDiff {
  ClassName class_name;
  Coordinate maven_winner;
  Coordinate gradle_winner;
  std::vector<Coordinate> providers;  // Maven classpath order
  bool differs = false;
};

namespace detail {

inline std::vector<ClassInventory> inventories_for(const Classpath& cp, const ResolvedTree& tree,
                                                   const std::map<Coordinate, ClassInventory>& by_coord) {
  std::vector<ClassInventory> out;
  if (auto it = by_coord.find(tree.root().coordinate); cp.root_first && it != by_coord.end())
    out.push_back(it->second);
  for (const auto& c : cp.entries) {
    auto it = by_coord.find(c);
    if (it == by_coord.end()) throw Error(Errc::MissingContent, "no class inventory for " + c.str());
    out.push_back(it->second);
  }
  return out;
}

}  // namespace detail

/// Every class provided more than once, with its winner under each
/// ecosystem's ordering.
inline std::vector<EcosystemDiff> compare_ecosystems(const ResolvedTree& tree,
                                                     const std::map<Coordinate, ClassInventory>& inventories_by_coord) {
  auto maven = effective_classes(
      detail::inventories_for(build_classpath(tree, Ecosystem::Maven), tree, inventories_by_coord));
  auto gradle = effective_classes(
      detail::inventories_for(build_classpath(tree, Ecosystem::Gradle), tree, inventories_by_coord));

  std::vector<EcosystemDiff> out;
  for (const auto& [cls, mb] : maven.bindings) {
    if (mb.shadowed.empty()) continue;
    const auto& gb = gradle.bindings.at(cls);
    EcosystemDiff d{cls, mb.winner, gb.winner, {mb.winner}, mb.winner != gb.winner};
    d.providers.insert(d.providers.end(), mb.shadowed.begin(), mb.shadowed.end());
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace shadowscan

#endif
