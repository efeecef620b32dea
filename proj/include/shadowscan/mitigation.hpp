#ifndef SHADOWSCAN_MITIGATION_HPP
#define SHADOWSCAN_MITIGATION_HPP

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "shadowscan/artifact_inspect.hpp"
#include "shadowscan/core_model.hpp"
#include "shadowscan/error.hpp"
#include "shadowscan/shadow_analysis.hpp"

namespace shadowscan {

enum class MitigationRule { BanDuplicateClasses, SealedJar, JavaModules };

constexpr std::string_view to_string(MitigationRule r) noexcept {
  switch (r) {
    case MitigationRule::BanDuplicateClasses: return "dup";
    case MitigationRule::SealedJar: return "sealed";
    case MitigationRule::JavaModules: return "modules";
  }
  return "";
}

struct Violation {
  std::string subject;               // class or package name
  std::vector<Coordinate> artifacts;  // providers involved, classpath order
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct MitigationVerdict {
  MitigationRule rule;
  bool passed = true;
  std::vector<Violation> violations;
  std::vector<std::string> diagnostics;
};

/// Allowlist entry: an exact class name, or a prefix ending in '*'
/// ("org.test.*", "org.test.Nice*").
class ClassPattern {
public:
  static ClassPattern parse(std::string_view text) {
    auto t = detail::trim(text);
    auto bad = [&] { return Error(Errc::InvalidPattern, "'" + std::string(text) + "'"); };
    if (t.empty()) throw bad();
    const auto star = t.find('*');
    if (star != std::string_view::npos && star != t.size() - 1) throw bad();

    ClassPattern p;
    p.wildcard_ = star != std::string_view::npos;
    p.text_ = std::string(p.wildcard_ ? t.substr(0, t.size() - 1) : t);
    if (p.wildcard_ && p.text_.empty()) return p;

    std::string_view body = p.text_;
    if (p.wildcard_ && body.back() == '.') body.remove_suffix(1);
    if (!ClassName::valid(body)) throw bad();
    return p;
  }

  bool matches(const ClassName& c) const {
    return wildcard_ ? c.str().starts_with(text_) : c.str() == text_;
  }

  std::string str() const { return wildcard_ ? text_ + "*" : text_; }

private:
  std::string text_;
  bool wildcard_ = false;
};

/// One pattern per line; blank lines and '#' comments are skipped.
inline std::vector<ClassPattern> parse_allowlist(std::string_view text) {
  std::vector<ClassPattern> out;
  for (auto line : detail::split(text, '\n')) {
    auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.push_back(ClassPattern::parse(t));
  }
  return out;
}

/// Build-time duplicate class ban: every class found in two or more
/// artifacts fails the build unless allowlisted.
inline MitigationVerdict check_ban_duplicate_classes(const EffectiveClassMap& map,
                                                     const std::vector<ClassPattern>& allowlist) {
  MitigationVerdict v{MitigationRule::BanDuplicateClasses, true, {}, {}};
  for (const auto& [cls, b] : map.bindings) {
    if (b.shadowed.empty()) continue;
    bool allowed = false;
    for (const auto& p : allowlist)
      if (p.matches(cls)) allowed = true;
    if (allowed) {
      v.diagnostics.push_back("allowlisted duplicate " + cls.str());
      continue;
    }
    Violation viol{cls.str(), {b.winner}, "class provided by " + std::to_string(b.shadowed.size() + 1) + " artifacts"};
    viol.artifacts.insert(viol.artifacts.end(), b.shadowed.begin(), b.shadowed.end());
    v.violations.push_back(std::move(viol));
  }
  v.passed = v.violations.empty();
  return v;
}

/// Models sealing: a package sealed in artifact S breaks at run time when
/// some of its classes load from S and others from a different artifact.
/// Replacing the whole package leaves no split and goes unnoticed.
inline MitigationVerdict check_sealed(const std::vector<ClassInventory>& inventories, const EffectiveClassMap& map) {
  MitigationVerdict v{MitigationRule::SealedJar, true, {}, {}};

  std::map<Coordinate, std::size_t> ordinal;
  for (std::size_t i = 0; i < inventories.size(); ++i) ordinal.try_emplace(inventories[i].coordinate, i);

  std::map<std::string, std::set<Coordinate>> winners_by_package;
  for (const auto& [cls, b] : map.bindings) winners_by_package[cls.package()].insert(b.winner);

  bool any_sealed = false;
  for (const auto& inv : inventories) {
    for (const auto& pkg : inv.sealed_packages) {
      any_sealed = true;
      auto it = winners_by_package.find(pkg);
      if (it == winners_by_package.end()) continue;
      const auto& winners = it->second;
      if (winners.size() < 2 || !winners.contains(inv.coordinate)) continue;

      std::vector<Coordinate> ordered(winners.begin(), winners.end());
      std::sort(ordered.begin(), ordered.end(), [&](const Coordinate& a, const Coordinate& b) {
        auto oa = ordinal.find(a), ob = ordinal.find(b);
        auto ia = oa == ordinal.end() ? inventories.size() : oa->second;
        auto ib = ob == ordinal.end() ? inventories.size() : ob->second;
        return ia != ib ? ia < ib : a < b;
      });
      v.violations.push_back(Violation{pkg, std::move(ordered), "package sealed by " + inv.coordinate.str() +
                                                                     " loads classes from several artifacts"});
    }
  }
  if (!any_sealed) v.diagnostics.push_back("no sealed packages on the classpath");
  v.passed = v.violations.empty();
  return v;
}

/// Split-package check as performed when compiling a modular application.
/// Non-module inventories count as automatic modules.
inline MitigationVerdict check_modules(const std::vector<ClassInventory>& inventories, bool root_is_module) {
  MitigationVerdict v{MitigationRule::JavaModules, true, {}, {}};
  if (!root_is_module) {
    v.diagnostics.push_back("project is not a module; split-package protection is inactive");
    return v;
  }
  std::map<std::string, std::vector<Coordinate>> providers;
  for (const auto& inv : inventories)
    for (const auto& pkg : inv.packages()) {
      auto& list = providers[pkg];
      if (std::find(list.begin(), list.end(), inv.coordinate) == list.end()) list.push_back(inv.coordinate);
    }
  for (auto& [pkg, list] : providers)
    if (list.size() >= 2)
      v.violations.push_back(Violation{pkg, list, "package split across " + std::to_string(list.size()) + " modules"});
  v.passed = v.violations.empty();
  return v;
}

}  // namespace shadowscan

#endif
