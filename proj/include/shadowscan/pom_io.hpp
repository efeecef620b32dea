#ifndef SHADOWSCAN_POM_IO_HPP
#define SHADOWSCAN_POM_IO_HPP

#include <expat.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "shadowscan/core_model.hpp"
#include "shadowscan/error.hpp"

namespace shadowscan {

namespace detail {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(Errc::IoFailure, "cannot read " + p.string());
  return ss.str();
}

// Collects the restricted POM subset while expat checks well-formedness.
// Callbacks never throw; the first problem is recorded and parsing stops.
class PomCollector {
public:
  struct Fields {
    std::string group_id, artifact_id, version;
  };

  explicit PomCollector(XML_Parser parser, std::vector<std::string>* warnings)
      : parser_(parser), warnings_(warnings) {}

  Fields project;
  std::vector<Fields> dependencies;
  std::optional<Error> failure;
  bool saw_root = false;

  static void XMLCALL on_start(void* self, const XML_Char* name, const XML_Char**) {
    static_cast<PomCollector*>(self)->start(local_name(name));
  }
  static void XMLCALL on_end(void* self, const XML_Char*) { static_cast<PomCollector*>(self)->end(); }
  static void XMLCALL on_text(void* self, const XML_Char* s, int len) {
    auto* c = static_cast<PomCollector*>(self);
    if (c->target_) c->target_->append(s, static_cast<std::size_t>(len));
  }

private:
  static std::string local_name(std::string_view qname) {
    auto pos = qname.rfind(':');
    return std::string(pos == std::string_view::npos ? qname : qname.substr(pos + 1));
  }

  void fail(Errc code, std::string what) {
    if (!failure) failure.emplace(code, what);
    XML_StopParser(parser_, XML_FALSE);
  }

  void warn(std::string msg) {
    if (warnings_) warnings_->push_back(std::move(msg));
  }

  static std::string* field_of(Fields& f, std::string_view name) {
    if (name == "groupId") return &f.group_id;
    if (name == "artifactId") return &f.artifact_id;
    if (name == "version") return &f.version;
    return nullptr;
  }

  void start(std::string name) {
    stack_.push_back(std::move(name));
    target_ = nullptr;
    const auto depth = stack_.size();
    const auto& top = stack_.back();
    if (depth == 1) {
      if (top != "project") fail(Errc::MalformedXml, "root element is <" + top + ">, expected <project>");
      saw_root = true;
      return;
    }
    if (depth == 2) {
      if (top == "parent" || top == "properties" || top == "dependencyManagement" || top == "profiles")
        warn("ignoring unsupported <" + top + "> section");
      target_ = field_of(project, top);
      return;
    }
    if (depth == 3 && stack_[1] == "dependencies" && top == "dependency") {
      dependencies.emplace_back();
      return;
    }
    if (depth == 4 && stack_[1] == "dependencies" && stack_[2] == "dependency") {
      if (top == "exclusions") warn("ignoring <exclusions> of dependency #" + std::to_string(dependencies.size() - 1));
      target_ = field_of(dependencies.back(), top);
    }
  }

  void end() {
    stack_.pop_back();
    target_ = nullptr;
  }

  XML_Parser parser_;
  std::vector<std::string>* warnings_;
  std::vector<std::string> stack_;
  std::string* target_ = nullptr;
};

inline Coordinate make_coordinate(const PomCollector::Fields& f, std::string_view where,
                                  std::vector<std::string>* warnings) {
  auto g = trim(f.group_id), a = trim(f.artifact_id), v = trim(f.version);
  if (g.empty() || a.empty() || v.empty())
    throw Error(Errc::MissingCoordinate, std::string(where) + " lacks groupId, artifactId or version");
  if (warnings) {
    for (auto s : {g, a, v})
      if (s.find("${") != std::string_view::npos)
        warnings->push_back("property reference '" + std::string(s) + "' in " + std::string(where) +
                            " is kept verbatim");
  }
  return Coordinate(std::string(g), std::string(a), std::string(v));
}

}  // namespace detail

/// Parses the POM subset: project G/A/V plus project/dependencies/dependency
/// G/A/V, in textual order. Other elements are skipped; parent, properties,
/// dependencyManagement, profiles and exclusions produce a warning.
inline PomDocument parse_pom(std::string_view xml_text, std::vector<std::string>* warnings = nullptr) {
  XML_Parser parser = XML_ParserCreate(nullptr);
  if (!parser) throw std::bad_alloc();
  struct Guard {
    XML_Parser p;
    ~Guard() { XML_ParserFree(p); }
  } guard{parser};

  detail::PomCollector collector(parser, warnings);
  XML_SetUserData(parser, &collector);
  XML_SetElementHandler(parser, &detail::PomCollector::on_start, &detail::PomCollector::on_end);
  XML_SetCharacterDataHandler(parser, &detail::PomCollector::on_text);

  const auto status = XML_Parse(parser, xml_text.data(), static_cast<int>(xml_text.size()), XML_TRUE);
  if (collector.failure) throw *collector.failure;
  if (status != XML_STATUS_OK) {
    throw Error(Errc::MalformedXml, std::string(XML_ErrorString(XML_GetErrorCode(parser))) + " at line " +
                                        std::to_string(XML_GetCurrentLineNumber(parser)));
  }
  if (!collector.saw_root) throw Error(Errc::MalformedXml, "no root element");

  PomDocument doc{detail::make_coordinate(collector.project, "project", warnings), {}};
  std::set<GroupArtifact> seen;
  for (std::size_t i = 0; i < collector.dependencies.size(); ++i) {
    auto coord = detail::make_coordinate(collector.dependencies[i], "dependency #" + std::to_string(i), warnings);
    if (!seen.insert(coord.ga()).second)
      throw Error(Errc::DuplicateDeclaration, coord.ga().str() + " declared twice in " + doc.coordinate.str());
    doc.dependencies.push_back(DependencyDeclaration{std::move(coord), i});
  }
  return doc;
}

struct RepositoryEntry {
  PomDocument pom;
  std::filesystem::path pom_path;
  std::optional<std::filesystem::path> jar_path;
  std::optional<std::filesystem::path> classlist_path;

  /// The preferred content source: the jar if present, else the class list.
  std::optional<std::filesystem::path> content_path() const { return jar_path ? jar_path : classlist_path; }
};

/// Local artifact store laid out as <root>/<group>/<artifact>/<version>/pom.xml
/// with an optional sibling artifact.jar or classes.txt.
class Repository {
public:
  Repository() = default;
  explicit Repository(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root_directory() const noexcept { return root_; }
  const std::map<Coordinate, RepositoryEntry>& index() const noexcept { return index_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  std::size_t size() const noexcept { return index_.size(); }

  const RepositoryEntry* find(const Coordinate& c) const {
    auto it = index_.find(c);
    return it == index_.end() ? nullptr : &it->second;
  }

  /// Adds or replaces an entry. Used by the loader and by in-memory fixtures.
  void add(RepositoryEntry entry) {
    auto key = entry.pom.coordinate;
    index_.insert_or_assign(std::move(key), std::move(entry));
  }

  void add(PomDocument pom) { add(RepositoryEntry{std::move(pom), {}, {}, {}}); }

  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

private:
  std::filesystem::path root_;
  std::map<Coordinate, RepositoryEntry> index_;
  std::vector<std::string> warnings_;
};

inline Repository load_repository(const std::filesystem::path& root_directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root_directory, ec))
    throw Error(Errc::IoFailure, root_directory.string() + " is not a readable directory");

  auto subdirs = [](const fs::path& dir) {
    std::vector<fs::path> out;
    std::error_code ec;
    fs::directory_iterator it(dir, ec), end;
    if (ec) throw Error(Errc::IoFailure, "cannot list " + dir.string() + ": " + ec.message());
    for (; it != end; it.increment(ec)) {
      if (ec) throw Error(Errc::IoFailure, "cannot list " + dir.string() + ": " + ec.message());
      std::error_code sec;
      if (it->is_directory(sec)) out.push_back(it->path());
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  Repository repo(root_directory);
  for (const auto& gdir : subdirs(root_directory)) {
    for (const auto& adir : subdirs(gdir)) {
      for (const auto& vdir : subdirs(adir)) {
        auto pom_path = vdir / "pom.xml";
        std::error_code fec;
        if (!fs::is_regular_file(pom_path, fec)) continue;

        std::vector<std::string> warnings;
        auto pom = parse_pom(detail::read_file(pom_path), &warnings);
        for (auto& w : warnings) repo.add_warning(pom_path.string() + ": " + w);

        Coordinate expected(gdir.filename().string(), adir.filename().string(), vdir.filename().string());
        if (pom.coordinate != expected)
          throw Error(Errc::CoordinateMismatch,
                      pom_path.string() + " declares " + pom.coordinate.str() + " but lives at " + expected.str());

        RepositoryEntry entry{std::move(pom), pom_path, {}, {}};
        if (fs::is_regular_file(vdir / "artifact.jar", fec)) entry.jar_path = vdir / "artifact.jar";
        if (fs::is_regular_file(vdir / "classes.txt", fec)) entry.classlist_path = vdir / "classes.txt";
        repo.add(std::move(entry));
      }
    }
  }
  return repo;
}

inline const PomDocument& fetch_pom(const Repository& repo, const Coordinate& coord) {
  const auto* e = repo.find(coord);
  if (!e) throw Error(Errc::NotFound, coord.str() + " is not in the repository");
  return e->pom;
}

/// Renders a document back into the accepted subset.
inline std::string write_pom(const PomDocument& doc) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<project>\n";
  auto esc = [](std::string_view s) {
    std::string r;
    for (char c : s) {
      switch (c) {
        case '&': r += "&amp;"; break;
        case '<': r += "&lt;"; break;
        case '>': r += "&gt;"; break;
        default: r += c;
      }
    }
    return r;
  };
  auto gav = [&](const Coordinate& c, std::string_view indent) {
    out += std::string(indent) + "<groupId>" + esc(c.group_id()) + "</groupId>\n";
    out += std::string(indent) + "<artifactId>" + esc(c.artifact_id()) + "</artifactId>\n";
    out += std::string(indent) + "<version>" + esc(c.version()) + "</version>\n";
  };
  gav(doc.coordinate, "  ");
  if (!doc.dependencies.empty()) {
    out += "  <dependencies>\n";
    for (const auto& d : doc.dependencies) {
      out += "    <dependency>\n";
      gav(d.coordinate, "      ");
      out += "    </dependency>\n";
    }
    out += "  </dependencies>\n";
  }
  out += "</project>\n";
  return out;
}

}  // namespace shadowscan

#endif
