#ifndef SHADOWSCAN_CORE_MODEL_HPP
#define SHADOWSCAN_CORE_MODEL_HPP

#include <algorithm>
#include <cassert>
#include <compare>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "shadowscan/error.hpp"

namespace shadowscan {

namespace detail {

inline bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool is_coordinate_token(std::string_view s) noexcept {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](char c) {
    return is_space(c) || c == ':' || static_cast<unsigned char>(c) < 0x20;
  });
}

inline std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace detail

/// The (groupId, artifactId) pair. Two versions of the same GroupArtifact
/// conflict; only one of them survives resolution.
class GroupArtifact {
public:
  GroupArtifact(std::string group_id, std::string artifact_id)
      : group_id_(std::move(group_id)), artifact_id_(std::move(artifact_id)) {
    if (!detail::is_coordinate_token(group_id_) || !detail::is_coordinate_token(artifact_id_))
      throw Error(Errc::InvalidCoordinate, "bad group/artifact '" + group_id_ + ":" + artifact_id_ + "'");
  }

  const std::string& group_id() const noexcept { return group_id_; }
  const std::string& artifact_id() const noexcept { return artifact_id_; }

  std::string str() const { return group_id_ + ":" + artifact_id_; }

  friend bool operator==(const GroupArtifact&, const GroupArtifact&) = default;
  friend auto operator<=>(const GroupArtifact&, const GroupArtifact&) = default;

private:
  std::string group_id_;
  std::string artifact_id_;
};

/// group:artifact:version. The version is an opaque token; it is never
/// compared by magnitude.
class Coordinate {
public:
  Coordinate(GroupArtifact ga, std::string version) : ga_(std::move(ga)), version_(std::move(version)) {
    if (!detail::is_coordinate_token(version_))
      throw Error(Errc::InvalidCoordinate, "bad version '" + version_ + "' for " + ga_.str());
  }
  Coordinate(std::string group_id, std::string artifact_id, std::string version)
      : Coordinate(GroupArtifact(std::move(group_id), std::move(artifact_id)), std::move(version)) {}

  /// Parses "group:artifact:version".
  static Coordinate parse(std::string_view text) {
    auto parts = detail::split(text, ':');
    if (parts.size() != 3)
      throw Error(Errc::InvalidCoordinate, "expected group:artifact:version, got '" + std::string(text) + "'");
    return Coordinate(std::string(parts[0]), std::string(parts[1]), std::string(parts[2]));
  }

  const GroupArtifact& ga() const noexcept { return ga_; }
  const std::string& group_id() const noexcept { return ga_.group_id(); }
  const std::string& artifact_id() const noexcept { return ga_.artifact_id(); }
  const std::string& version() const noexcept { return version_; }

  std::string str() const { return ga_.str() + ":" + version_; }

  friend bool operator==(const Coordinate&, const Coordinate&) = default;
  friend auto operator<=>(const Coordinate&, const Coordinate&) = default;

private:
  GroupArtifact ga_;
  std::string version_;
};

/// Fully qualified Java class name, e.g. "org.test.NiceClass". Inner
/// classes keep their '$' verbatim.
class ClassName {
public:
  explicit ClassName(std::string name) : name_(std::move(name)) {
    if (!valid(name_)) throw Error(Errc::InvalidClassName, "'" + name_ + "'");
  }

  static bool valid(std::string_view name) noexcept {
    if (name.empty()) return false;
    for (auto seg : detail::split(name, '.')) {
      if (seg.empty()) return false;
      for (char c : seg)
        if (c == '/' || detail::is_space(c) || static_cast<unsigned char>(c) < 0x20) return false;
    }
    return true;
  }

  const std::string& str() const noexcept { return name_; }

  /// All segments but the last; empty for classes in the unnamed package.
  std::string package() const {
    auto pos = name_.rfind('.');
    return pos == std::string::npos ? std::string() : name_.substr(0, pos);
  }

  std::string simple_name() const {
    auto pos = name_.rfind('.');
    return pos == std::string::npos ? name_ : name_.substr(pos + 1);
  }

  friend bool operator==(const ClassName&, const ClassName&) = default;
  friend auto operator<=>(const ClassName&, const ClassName&) = default;

private:
  std::string name_;
};

struct DependencyDeclaration {
  Coordinate coordinate;
  std::size_t declaration_index = 0;

  friend bool operator==(const DependencyDeclaration&, const DependencyDeclaration&) = default;
};

/// A parsed POM: the project coordinate and its dependencies in source order.
struct PomDocument {
  Coordinate coordinate;
  std::vector<DependencyDeclaration> dependencies;

  friend bool operator==(const PomDocument&, const PomDocument&) = default;
};

/// Child indices from the root; the empty path is the root itself.
struct TreePath {
  std::vector<std::size_t> indices;

  std::size_t depth() const noexcept { return indices.size(); }
  bool is_root() const noexcept { return indices.empty(); }

  TreePath child(std::size_t index) const {
    TreePath p{indices};
    p.indices.push_back(index);
    return p;
  }

  /// True when this path is a strict prefix of `other`.
  bool is_ancestor_of(const TreePath& other) const noexcept {
    return indices.size() < other.indices.size() &&
           std::equal(indices.begin(), indices.end(), other.indices.begin());
  }

  std::string str() const {
    if (indices.empty()) return "/";
    std::string out;
    for (auto i : indices) out += "/" + std::to_string(i);
    return out;
  }

  friend bool operator==(const TreePath&, const TreePath&) = default;
  friend auto operator<=>(const TreePath&, const TreePath&) = default;
};

struct Included {
  friend bool operator==(const Included&, const Included&) = default;
};

/// Same GroupArtifact, different version, already chosen elsewhere.
struct OmittedConflict {
  Coordinate winner;
  friend bool operator==(const OmittedConflict&, const OmittedConflict&) = default;
};

/// Identical coordinate seen earlier (includes cycle back-edges).
struct OmittedDuplicate {
  TreePath first_occurrence_path;
  friend bool operator==(const OmittedDuplicate&, const OmittedDuplicate&) = default;
};

using NodeStatus = std::variant<Included, OmittedConflict, OmittedDuplicate>;

inline std::string_view status_name(const NodeStatus& s) noexcept {
  switch (s.index()) {
    case 0: return "included";
    case 1: return "omitted-conflict";
    default: return "omitted-duplicate";
  }
}

struct ResolvedNode {
  Coordinate coordinate;
  TreePath path;
  std::size_t depth = 0;
  std::size_t bfs_index = 0;
  NodeStatus status = Included{};
  std::vector<ResolvedNode> children;

  bool included() const noexcept { return std::holds_alternative<Included>(status); }
};

/// Immutable resolved dependency tree. Copies share storage, so node
/// pointers handed out by the tree stay valid for the tree's lifetime.
class ResolvedTree {
public:
  explicit ResolvedTree(ResolvedNode root) : data_(std::make_shared<Data>(std::move(root))) {}

  const ResolvedNode& root() const noexcept { return data_->root; }

  /// Number of nodes, including omitted ones.
  std::size_t size() const noexcept { return data_->by_bfs.size(); }

  const ResolvedNode& at_bfs(std::size_t bfs_index) const { return *data_->by_bfs.at(bfs_index); }

  /// The Included node carrying `coord`, or nullptr.
  const ResolvedNode* find_included(const Coordinate& coord) const {
    auto it = data_->included.find(coord);
    return it == data_->included.end() ? nullptr : it->second;
  }

  const ResolvedNode* find(const TreePath& path) const {
    const ResolvedNode* n = &data_->root;
    for (auto i : path.indices) {
      if (i >= n->children.size()) return nullptr;
      n = &n->children[i];
    }
    return n;
  }

private:
  struct Data {
    explicit Data(ResolvedNode r) : root(std::move(r)) {
      std::deque<const ResolvedNode*> queue{&root};
      while (!queue.empty()) {
        auto* n = queue.front();
        queue.pop_front();
        assert(n->depth == n->path.depth());
        assert(n->included() || n->children.empty());
        by_bfs.push_back(n);
        if (n->included()) included.emplace(n->coordinate, n);
        for (const auto& c : n->children) queue.push_back(&c);
      }
    }
    ResolvedNode root;
    std::vector<const ResolvedNode*> by_bfs;
    std::map<Coordinate, const ResolvedNode*> included;
  };

  std::shared_ptr<const Data> data_;
};

/// Level-order traversal including omitted nodes; out[i]->bfs_index == i
/// for trees produced by the resolver.
inline std::vector<const ResolvedNode*> bfs_order(const ResolvedTree& tree) {
  std::vector<const ResolvedNode*> out;
  out.reserve(tree.size());
  out.push_back(&tree.root());
  for (std::size_t head = 0; head < out.size(); ++head)
    for (const auto& c : out[head]->children) out.push_back(&c);
  return out;
}

/// Pre-order traversal, children in declaration order. Omitted nodes are
/// leaves, so skipping them drops nothing else.
inline std::vector<const ResolvedNode*> dfs_order(const ResolvedTree& tree, bool include_omitted) {
  std::vector<const ResolvedNode*> out;
  out.reserve(tree.size());
  std::vector<const ResolvedNode*> stack{&tree.root()};
  while (!stack.empty()) {
    auto* n = stack.back();
    stack.pop_back();
    if (!include_omitted && !n->included()) continue;
    out.push_back(n);
    for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) stack.push_back(&*it);
  }
  return out;
}

}  // namespace shadowscan

template <>
struct std::hash<shadowscan::Coordinate> {
  std::size_t operator()(const shadowscan::Coordinate& c) const noexcept {
    return std::hash<std::string>{}(c.str());
  }
};

template <>
struct std::hash<shadowscan::ClassName> {
  std::size_t operator()(const shadowscan::ClassName& c) const noexcept {
    return std::hash<std::string>{}(c.str());
  }
};

#endif
