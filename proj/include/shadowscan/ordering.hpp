#ifndef SHADOWSCAN_ORDERING_HPP
#define SHADOWSCAN_ORDERING_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shadowscan/core_model.hpp"

namespace shadowscan {

enum class Ecosystem { Maven, Gradle };

constexpr std::string_view to_string(Ecosystem e) noexcept { return e == Ecosystem::Maven ? "maven" : "gradle"; }

inline std::optional<Ecosystem> parse_ecosystem(std::string_view s) noexcept {
  if (s == "maven") return Ecosystem::Maven;
  if (s == "gradle") return Ecosystem::Gradle;
  return std::nullopt;
}

/// Dependency artifacts in lookup order. The project's own classes sit in
/// front of entry 0 when `root_first` is set (always, for built classpaths).
struct Classpath {
  Ecosystem ecosystem = Ecosystem::Maven;
  std::vector<Coordinate> entries;
  bool root_first = true;

  /// Position of `c` in entries, or nullopt.
  std::optional<std::size_t> ordinal(const Coordinate& c) const {
    for (std::size_t i = 0; i < entries.size(); ++i)
      if (entries[i] == c) return i;
    return std::nullopt;
  }
};

/// Maven packs dependencies in depth-first pre-order; Gradle puts them
/// breadth-first, so every direct dependency precedes every transitive one.
inline Classpath build_classpath(const ResolvedTree& tree, Ecosystem ecosystem) {
  Classpath cp{ecosystem, {}, true};
  const auto order = ecosystem == Ecosystem::Maven ? dfs_order(tree, false) : bfs_order(tree);
  for (const auto* n : order)
    if (n->included() && n != &tree.root()) cp.entries.push_back(n->coordinate);
  return cp;
}

enum class LayoutMode { Flat, Nested };

constexpr std::string_view to_string(LayoutMode m) noexcept { return m == LayoutMode::Flat ? "flat" : "nested"; }

/// Display listing of a packaged artifact: Flat mimics a shaded uber jar
/// (one class placeholder per dependency), Nested a Spring Boot jar with
/// each dependency under BOOT-INF/lib.
struct PackagingLayout {
  LayoutMode mode = LayoutMode::Flat;
  std::vector<std::string> lines;

  std::string text() const {
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
  }
};

inline PackagingLayout emit_layout(const ResolvedTree& tree, LayoutMode mode) {
  PackagingLayout layout{mode, {}};
  auto& lines = layout.lines;
  lines.push_back("// " + tree.root().coordinate.artifact_id() + ".jar");

  std::vector<std::string> deps;
  for (const auto& c : build_classpath(tree, Ecosystem::Maven).entries) deps.push_back(c.artifact_id());

  if (mode == LayoutMode::Flat) {
    lines.push_back("+-META-INF");
    lines.push_back("|  +-MANIFEST.MF");
    lines.push_back("+-Main.class");
    for (const auto& d : deps) lines.push_back("+-" + d + ".class");
  } else {
    lines.push_back("+-BOOT-INF");
    lines.push_back("  +-classes");
    lines.push_back("  |  +-Main.class");
    if (!deps.empty()) {
      lines.push_back("+-BOOT-INF");
      lines.push_back("  +-lib");
      for (const auto& d : deps) lines.push_back("  |  +-" + d + ".jar");
    }
  }
  return layout;
}

}  // namespace shadowscan

#endif
