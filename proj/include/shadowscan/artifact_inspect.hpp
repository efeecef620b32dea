#ifndef SHADOWSCAN_ARTIFACT_INSPECT_HPP
#define SHADOWSCAN_ARTIFACT_INSPECT_HPP

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "shadowscan/core_model.hpp"
#include "shadowscan/error.hpp"
#include "shadowscan/ordering.hpp"
#include "shadowscan/pom_io.hpp"
#include "shadowscan/zip_reader.hpp"

namespace shadowscan {

/// Classes an artifact provides, plus the metadata the mitigation checks
/// need. A module name is only known for class-list sources; jars report
/// is_module without one.
struct ClassInventory {
  Coordinate coordinate;
  std::set<ClassName> classes;
  std::set<std::string> sealed_packages;
  bool is_module = false;
  std::optional<std::string> module_name;

  std::set<std::string> packages() const {
    std::set<std::string> out;
    for (const auto& c : classes) out.insert(c.package());
    return out;
  }

  friend bool operator==(const ClassInventory&, const ClassInventory&) = default;
};

/// Main attributes and per-entry sections of a MANIFEST.MF. Attribute
/// names are lower-cased.
struct Manifest {
  using Attributes = std::map<std::string, std::string>;
  Attributes main;
  std::vector<Attributes> sections;
};

inline Manifest parse_manifest(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::size_t i = 0;
    while (i < text.size()) {
      auto end = text.find_first_of("\r\n", i);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(i, end - i);
      if (!line.empty() && line.front() == ' ' && !lines.empty() && !lines.back().empty())
        lines.back() += line.substr(1);
      else
        lines.emplace_back(line);
      i = end;
      if (i < text.size() && text[i] == '\r') ++i;
      if (i < text.size() && text[i] == '\n') ++i;
    }
  }

  Manifest m;
  Manifest::Attributes* current = &m.main;
  bool in_gap = false;
  for (const auto& line : lines) {
    if (line.empty()) {
      in_gap = true;
      continue;
    }
    if (in_gap) {
      m.sections.emplace_back();
      current = &m.sections.back();
      in_gap = false;
    }
    auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string key = line.substr(0, colon);
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    current->insert_or_assign(std::move(key), std::string(detail::trim(std::string_view(line).substr(colon + 1))));
  }
  return m;
}

namespace detail {

inline bool equals_ignore_case(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

inline std::set<std::string> sealed_from_manifest(const Manifest& m, const std::set<std::string>& packages) {
  std::map<std::string, bool> per_package;
  for (const auto& sec : m.sections) {
    auto name = sec.find("name"), sealed = sec.find("sealed");
    if (name == sec.end() || sealed == sec.end()) continue;
    std::string_view n = name->second;
    if (n.empty() || n.back() != '/') continue;
    n.remove_suffix(1);
    std::string pkg(n);
    std::replace(pkg.begin(), pkg.end(), '/', '.');
    per_package[pkg] = equals_ignore_case(sealed->second, "true");
  }
  const auto main_it = m.main.find("sealed");
  const bool main_sealed = main_it != m.main.end() && equals_ignore_case(main_it->second, "true");

  std::set<std::string> out;
  if (main_sealed)
    for (const auto& p : packages)
      if (!per_package.contains(p)) out.insert(p);
  for (const auto& [p, sealed] : per_package)
    if (sealed) out.insert(p);
  return out;
}

}  // namespace detail

/// Lists class entries from the jar's central directory. META-INF (and with
/// it multi-release versions/) and module-info.class are not classes.
inline ClassInventory inspect_jar(const std::filesystem::path& file, const Coordinate& coord) {
  zip::Archive archive(file);
  ClassInventory inv{coord, {}, {}, false, std::nullopt};
  constexpr std::string_view suffix = ".class";

  for (const auto& e : archive.entries()) {
    std::string_view name = e.name;
    if (name == "module-info.class") {
      inv.is_module = true;
      continue;
    }
    if (name.starts_with("META-INF/") || !name.ends_with(suffix)) continue;
    if (name == "module-info.class" || name.ends_with("/module-info.class")) continue;

    std::string_view stem = name.substr(0, name.size() - suffix.size());
    bool ok = !stem.empty();
    for (auto seg : detail::split(stem, '/'))
      if (seg.empty() || seg.find('.') != std::string_view::npos) ok = false;
    std::string dotted(stem);
    std::replace(dotted.begin(), dotted.end(), '/', '.');
    if (!ok || !ClassName::valid(dotted))
      throw Error(Errc::InvalidEntryName, file.string() + ": '" + e.name + "' is not a class name");
    inv.classes.insert(ClassName(std::move(dotted)));
  }

  if (const auto* mf = archive.find("META-INF/MANIFEST.MF"))
    inv.sealed_packages = detail::sealed_from_manifest(parse_manifest(archive.read(*mf)), inv.packages());
  return inv;
}

/// Parses class-list text: one class per line, '#' comments, and the
/// directives "@sealed <package>" and "@module [name]".
inline ClassInventory parse_classlist(std::string_view text, const Coordinate& coord) {
  ClassInventory inv{coord, {}, {}, false, std::nullopt};
  std::size_t lineno = 0;
  for (auto raw : detail::split(text, '\n')) {
    ++lineno;
    auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto where = [&] { return coord.str() + " line " + std::to_string(lineno); };

    if (line.front() == '@') {
      auto sp = line.find_first_of(" \t");
      auto directive = line.substr(0, sp);
      auto arg = sp == std::string_view::npos ? std::string_view{} : detail::trim(line.substr(sp));
      if (directive == "@sealed") {
        if (!ClassName::valid(arg))
          throw Error(Errc::InvalidClassName, where() + ": bad package '" + std::string(arg) + "'");
        inv.sealed_packages.emplace(arg);
      } else if (directive == "@module") {
        inv.is_module = true;
        if (!arg.empty()) inv.module_name = std::string(arg);
      } else {
        throw Error(Errc::InvalidClassName, where() + ": unknown directive '" + std::string(directive) + "'");
      }
      continue;
    }

    if (!ClassName::valid(line)) throw Error(Errc::InvalidClassName, where() + ": '" + std::string(line) + "'");
    if (!inv.classes.emplace(std::string(line)).second)
      throw Error(Errc::DuplicateClassName, where() + ": '" + std::string(line) + "' listed twice");
  }
  return inv;
}

inline ClassInventory inspect_classlist(const std::filesystem::path& file, const Coordinate& coord) {
  return parse_classlist(detail::read_file(file), coord);
}

inline std::string write_classlist(const ClassInventory& inv) {
  std::string out = "# " + inv.coordinate.str() + "\n";
  if (inv.is_module) out += inv.module_name ? "@module " + *inv.module_name + "\n" : "@module\n";
  for (const auto& p : inv.sealed_packages) out += "@sealed " + p + "\n";
  for (const auto& c : inv.classes) out += c.str() + "\n";
  return out;
}

inline ClassInventory inspect_entry(const RepositoryEntry& entry) {
  if (entry.jar_path) return inspect_jar(*entry.jar_path, entry.pom.coordinate);
  if (entry.classlist_path) return inspect_classlist(*entry.classlist_path, entry.pom.coordinate);
  throw Error(Errc::MissingContent, entry.pom.coordinate.str() + " has neither artifact.jar nor classes.txt");
}

/// Inventories of every classpath entry, in classpath order.
inline std::vector<ClassInventory> inventory_all(const Repository& repo, const Classpath& classpath) {
  std::vector<ClassInventory> out;
  out.reserve(classpath.entries.size());
  for (const auto& c : classpath.entries) {
    const auto* entry = repo.find(c);
    if (!entry) throw Error(Errc::MissingContent, c.str() + " is not in the repository");
    out.push_back(inspect_entry(*entry));
  }
  return out;
}

}  // namespace shadowscan

#endif
