#ifndef SHADOWSCAN_RESOLVER_HPP
#define SHADOWSCAN_RESOLVER_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shadowscan/core_model.hpp"
#include "shadowscan/error.hpp"
#include "shadowscan/pom_io.hpp"

namespace shadowscan {

/// Raised when a dependency's POM is absent from the repository.
class UnresolvableDependency : public Error {
public:
  UnresolvableDependency(Coordinate missing, TreePath requester)
      : Error(Errc::UnresolvableDependency,
              missing.str() + " (requested by node at " + requester.str() + ") is not in the repository"),
        missing_(std::move(missing)),
        requester_(std::move(requester)) {}

  const Coordinate& missing() const noexcept { return missing_; }
  const TreePath& requester() const noexcept { return requester_; }

private:
  Coordinate missing_;
  TreePath requester_;
};

struct PlacedCoordinate {
  Coordinate coordinate;
  TreePath path;

  friend bool operator==(const PlacedCoordinate&, const PlacedCoordinate&) = default;
};

struct Conflict {
  GroupArtifact ga;
  PlacedCoordinate winner;
  std::vector<PlacedCoordinate> losers;  // in bfs order
};

struct ResolutionReport {
  ResolvedTree tree;
  std::vector<Conflict> conflicts;  // ordered by the winner's bfs_index
};

struct ResolveOptions {
  std::size_t depth_limit = 64;
};

/// Expands the dependency tree level by level, keeping for each
/// GroupArtifact only the occurrence met first in breadth-first order.
/// Omitted occurrences are never fetched or expanded.
inline ResolutionReport resolve(const Repository& repo, const PomDocument& root, const ResolveOptions& opts = {}) {
  struct Flat {
    Coordinate coordinate;
    TreePath path;
    NodeStatus status;
    std::vector<std::size_t> children;
  };

  // Nodes are appended in level order, so a node's position is its bfs_index.
  std::vector<Flat> flat;
  std::map<GroupArtifact, std::size_t> first_seen;
  flat.push_back(Flat{root.coordinate, {}, Included{}, {}});
  first_seen.emplace(root.coordinate.ga(), 0);

  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (!std::holds_alternative<Included>(flat[i].status)) continue;

    const PomDocument* pom = &root;
    if (i != 0) {
      const auto* entry = repo.find(flat[i].coordinate);
      if (!entry) {
        auto requester = flat[i].path;
        requester.indices.pop_back();
        throw UnresolvableDependency(flat[i].coordinate, std::move(requester));
      }
      pom = &entry->pom;
    }
    if (!pom->dependencies.empty() && flat[i].path.depth() + 1 > opts.depth_limit)
      throw Error(Errc::DepthLimitExceeded, "dependencies of " + flat[i].coordinate.str() + " at " +
                                                flat[i].path.str() + " exceed depth limit " +
                                                std::to_string(opts.depth_limit));

    for (const auto& decl : pom->dependencies) {
      const std::size_t child = flat.size();
      NodeStatus status = Included{};
      if (auto it = first_seen.find(decl.coordinate.ga()); it != first_seen.end()) {
        const auto& winner = flat[it->second];
        if (winner.coordinate == decl.coordinate)
          status = OmittedDuplicate{winner.path};
        else
          status = OmittedConflict{winner.coordinate};
      } else {
        first_seen.emplace(decl.coordinate.ga(), child);
      }
      flat.push_back(Flat{decl.coordinate, flat[i].path.child(flat[i].children.size()), std::move(status), {}});
      flat[i].children.push_back(child);
    }
  }

  auto build = [&flat](auto& self, std::size_t i) -> ResolvedNode {
    auto& f = flat[i];
    ResolvedNode n{f.coordinate, f.path, f.path.depth(), i, f.status, {}};
    n.children.reserve(f.children.size());
    for (auto c : f.children) n.children.push_back(self(self, c));
    return n;
  };

  std::vector<Conflict> conflicts;
  std::map<GroupArtifact, std::size_t> conflict_slot;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (!std::holds_alternative<OmittedConflict>(flat[i].status)) continue;
    const auto& ga = flat[i].coordinate.ga();
    auto [it, fresh] = conflict_slot.emplace(ga, conflicts.size());
    if (fresh) {
      const auto& w = flat[first_seen.at(ga)];
      conflicts.push_back(Conflict{ga, PlacedCoordinate{w.coordinate, w.path}, {}});
    }
    conflicts[it->second].losers.push_back(PlacedCoordinate{flat[i].coordinate, flat[i].path});
  }
  std::sort(conflicts.begin(), conflicts.end(), [&first_seen](const Conflict& a, const Conflict& b) {
    return first_seen.at(a.ga) < first_seen.at(b.ga);
  });

  return ResolutionReport{ResolvedTree(build(build, 0)), std::move(conflicts)};
}

}  // namespace shadowscan

#endif
