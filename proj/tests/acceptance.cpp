// Scenario and property checks, one PASS/FAIL line per criterion.
// Usage: shadowscan_acceptance <path-to-shadowscan-binary>

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "shadowscan/mitigation.hpp"
#include "support/resolver_oracle.hpp"
#include "support/scan_support.hpp"

using namespace shadowscan;
using namespace shadowscan::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Result {
  bool ok;
  std::string detail;
};

Coordinate C(const std::string& s) { return Coordinate::parse(s); }

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

Result ac1_dfs_order() {
  auto t0 = Clock::now();
  auto repo = load_repository(fixture("sample-tree"));
  auto tree = resolve(repo, fetch_pom(repo, C("com.example:project:1.0"))).tree;
  auto cp = build_classpath(tree, Ecosystem::Maven);
  std::vector<std::string> got{"Project"};
  for (const auto& c : cp.entries) got.push_back(c.artifact_id());
  const std::vector<std::string> want{"Project", "D1", "D11", "D111", "D112", "D2", "D21", "D211", "D22", "D221"};
  const double secs = seconds_since(t0);
  return {got == want && cp.root_first && secs < 1.0, join(got) + " in " + std::to_string(secs) + "s"};
}

Result ac2_layouts() {
  auto repo = load_repository(fixture("sample-tree"));
  auto tree = resolve(repo, fetch_pom(repo, C("com.example:project:1.0"))).tree;
  const std::vector<std::string> deps{"D1", "D11", "D111", "D112", "D2", "D21", "D211", "D22", "D221"};
  std::vector<std::string> flat{"// project.jar", "+-META-INF", "|  +-MANIFEST.MF", "+-Main.class"};
  std::vector<std::string> nested{"// project.jar", "+-BOOT-INF", "  +-classes", "  |  +-Main.class",
                                  "+-BOOT-INF",     "  +-lib"};
  for (const auto& d : deps) {
    flat.push_back("+-" + d + ".class");
    nested.push_back("  |  +-" + d + ".jar");
  }
  bool f = emit_layout(tree, LayoutMode::Flat).lines == flat;
  bool n = emit_layout(tree, LayoutMode::Nested).lines == nested;
  return {f && n, std::string("flat ") + (f ? "match" : "MISMATCH") + ", nested " + (n ? "match" : "MISMATCH")};
}

Result ac3_poc_order() {
  const ClassName nice("org.test.NiceClass");
  auto nice_first = scan_fixture("poc-nice-first", "org.victim:victim:1.0", Ecosystem::Maven);
  auto attacker_first = scan_fixture("poc-attacker-first", "org.victim:victim:1.0", Ecosystem::Maven);
  auto w_nice = nice_first.map.find(nice)->winner, w_attacker = attacker_first.map.find(nice)->winner;
  bool ok = w_nice == C("org.test:nicelibrary:1.2") && w_attacker == C("org.evil:fakelibrary:1.0");
  return {ok, "nice-first -> " + w_nice.str() + "; attacker-first -> " + w_attacker.str()};
}

Result ac4_cwa() {
  auto s = scan_fixture("cwa", "app.coronawarn:cwa-server:1.0.0", Ecosystem::Maven);
  auto findings = detect_shadowing(s.map, s.tree());
  for (const auto& f : findings) {
    if (f.class_name != ClassName("org.postgresql.Driver")) continue;
    const auto* via = s.tree().find(TreePath{{f.winner_path.indices.front()}});
    bool ok = via && via->coordinate == C("com.github.erosb:everit-json-schema:1.12.1") &&
              f.shadowed_victims == std::vector<Coordinate>{C("org.postgresql:postgresql:42.2.16")};
    return {ok, "Driver loaded from " + f.winner.str() + " at " + f.winner_path.str() + " via " +
                    (via ? via->coordinate.str() : "?") + ", shadowing " + f.shadowed_victims.front().str()};
  }
  return {false, "no finding for org.postgresql.Driver"};
}

Result ac5_gradle_shield() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(5);
  std::size_t counterexamples = 0, maven_deep_hijacks = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    auto tree = resolve_shape(random_shape(rng, 5, 4));
    for (const auto& direct : tree.root().children) {
      for (const auto& c : hijack_surface(tree, Ecosystem::Gradle, direct.coordinate))
        if (tree.find_included(c)->depth > 1) ++counterexamples;
      for (const auto& c : hijack_surface(tree, Ecosystem::Maven, direct.coordinate))
        if (tree.find_included(c)->depth == 3) {
          ++maven_deep_hijacks;
          break;
        }
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << trials << " trees, gradle counterexamples " << counterexamples << ", maven depth-3-over-depth-1 instances "
    << maven_deep_hijacks << ", " << secs << "s";
  return {counterexamples == 0 && maven_deep_hijacks > 0 && secs < 30.0, d.str()};
}

Result ac6_resolver_oracle() {
  std::mt19937_64 rng(6);
  std::size_t mismatches = 0, groups = 0, pruned_differs = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    auto rr = random_conflict_repo(rng, 9, 3, 3);
    auto oracle = nearest_wins_oracle(rr.graph, rr.root.coordinate, 64);
    if (oracle.truncated) {
      ++mismatches;
      continue;
    }
    auto tree = resolve(rr.repo, rr.root).tree;
    std::map<GroupArtifact, std::vector<const ResolvedNode*>> included;
    for (const auto* n : bfs_order(tree))
      if (n->included()) included[n->coordinate.ga()].push_back(n);
    if (included.size() != oracle.winner.size()) ++mismatches;
    for (const auto& [ga, idx] : oracle.winner) {
      ++groups;
      const auto& w = oracle.expansion[idx];
      auto it = included.find(ga);
      if (it == included.end() || it->second.size() != 1 || it->second[0]->coordinate != w.coordinate ||
          it->second[0]->path != w.path)
        ++mismatches;
      if (oracle.first_anywhere.at(ga) != idx) ++pruned_differs;
    }
  }
  std::ostringstream d;
  d << trials << " repos, " << groups << " artifacts checked, mismatches " << mismatches
    << " (candidates below omitted nodes excluded in " << pruned_differs << " cases)";
  return {mismatches == 0, d.str()};
}

Result ac7_effective_map() {
  std::mt19937_64 rng(7);
  std::size_t mismatches = 0, classes_checked = 0;
  const int trials = 300;
  for (int t = 0; t < trials; ++t) {
    std::uniform_int_distribution<std::size_t> n_art(0, 50), n_cls(0, 200);
    const auto artifacts = n_art(rng), pool = n_cls(rng) + 1;
    std::uniform_int_distribution<std::size_t> pick(0, pool - 1), per(0, std::min<std::size_t>(pool, 20));
    std::vector<ClassInventory> invs;
    for (std::size_t a = 0; a < artifacts; ++a) {
      ClassInventory inv{Coordinate("g", "a" + std::to_string(a), "1"), {}, {}, false, std::nullopt};
      for (auto k = per(rng); k > 0; --k) inv.classes.emplace("p.C" + std::to_string(pick(rng)));
      invs.push_back(std::move(inv));
    }
    auto map = effective_classes(invs);
    std::size_t distinct = 0;
    for (std::size_t c = 0; c < pool; ++c) {
      ClassName cls("p.C" + std::to_string(c));
      std::vector<Coordinate> providers;
      for (const auto& inv : invs)
        if (inv.classes.contains(cls)) providers.push_back(inv.coordinate);
      const auto* b = map.find(cls);
      ++classes_checked;
      if (providers.empty()) {
        if (b) ++mismatches;
        continue;
      }
      ++distinct;
      if (!b || b->winner != providers.front() ||
          b->shadowed != std::vector<Coordinate>(providers.begin() + 1, providers.end()))
        ++mismatches;
    }
    if (distinct != map.bindings.size()) ++mismatches;
  }
  std::ostringstream d;
  d << trials << " classpaths, " << classes_checked << " class lookups, mismatches " << mismatches;
  return {mismatches == 0, d.str()};
}

Result ac8_mitigations() {
  auto attacker_first = scan_fixture("poc-attacker-first", "org.victim:victim:1.0", Ecosystem::Maven);
  auto dup = check_ban_duplicate_classes(attacker_first.map, {});
  auto mods = check_modules(attacker_first.inventories, true);
  auto partial = scan_fixture("sealed", "org.victim:sealed-partial:1.0", Ecosystem::Maven);
  auto full = scan_fixture("sealed", "org.victim:sealed-full:1.0", Ecosystem::Maven);
  auto sp = check_sealed(partial.inventories, partial.map);
  auto sf = check_sealed(full.inventories, full.map);

  bool dup_ok = !dup.passed && dup.violations.size() == 1;
  bool mods_ok = !mods.passed && mods.violations.size() == 1 && mods.violations[0].subject == "org.test";
  bool sealed_ok = !sp.passed && sf.passed;
  std::ostringstream d;
  d << "dup " << (dup.passed ? "pass" : "fail") << " (" << dup.violations.size() << " violation), modules "
    << (mods.passed ? "pass" : "fail") << (mods.violations.empty() ? "" : " on " + mods.violations[0].subject)
    << ", sealed partial " << (sp.passed ? "pass" : "fail") << ", sealed full " << (sf.passed ? "pass" : "fail");
  return {dup_ok && mods_ok && sealed_ok, d.str()};
}

std::string capture(const std::string& cmd, int& status) {
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    status = -1;
    return {};
  }
  std::string out;
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  status = pclose(p);
  return out;
}

Result ac9_determinism(const std::string& binary) {
  const std::vector<std::pair<std::string, std::string>> fixtures{
      {"sample-tree", "com.example:project:1.0"},
      {"deep-shadow", "com.example:project:1.0"},
      {"poc-nice-first", "org.victim:victim:1.0"},
      {"poc-attacker-first", "org.victim:victim:1.0"},
      {"cwa", "app.coronawarn:cwa-server:1.0.0"},
  };
  const std::vector<std::string> commands{"resolve", "classpath --layout nested", "scan", "check", "compare"};
  std::size_t runs = 0, differing = 0, empty = 0;
  for (const auto& [name, root] : fixtures) {
    for (const auto& cmd : commands) {
      const std::string line = "'" + binary + "' " + cmd + " --repo '" + fixture(name).string() + "' --root " + root +
                               " --format json 2>/dev/null";
      std::string first;
      for (int i = 0; i < 5; ++i) {
        int status = 0;
        auto out = capture(line, status);
        ++runs;
        if (out.empty()) ++empty;
        if (i == 0)
          first = out;
        else if (out != first)
          ++differing;
      }
    }
  }
  std::ostringstream d;
  d << runs << " runs over " << fixtures.size() << " fixtures, differing outputs " << differing << ", empty " << empty;
  return {differing == 0 && empty == 0, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: " << argv[0] << " <shadowscan binary>\n";
    return 2;
  }
  const std::string binary = argv[1];
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"AC1 maven dfs order", ac1_dfs_order},
      {"AC2 packaging layouts", ac2_layouts},
      {"AC3 abstract poc order sensitivity", ac3_poc_order},
      {"AC4 cwa-server driver shadowing", ac4_cwa},
      {"AC5 gradle shield", ac5_gradle_shield},
      {"AC6 resolver oracle equivalence", ac6_resolver_oracle},
      {"AC7 effective map oracle equivalence", ac7_effective_map},
      {"AC8 mitigation verdicts", ac8_mitigations},
      {"AC9 cli json determinism", [&] { return ac9_determinism(binary); }},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Result r{false, ""};
    try {
      r = check();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (r.ok ? "[PASS] " : "[FAIL] ") << name << ": " << r.detail << "\n";
    failed += !r.ok;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
