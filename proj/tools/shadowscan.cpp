// shadowscan: dependency-order and class-shadowing analysis over a local
// Maven-layout repository.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shadowscan/cli.hpp"

namespace {

using shadowscan::cli::Format;
using shadowscan::cli::Options;

void add_common(CLI::App& sub, Options& o, std::string& format) {
  sub.add_option("--repo", o.repo, "Repository root directory")->envname("SHADOWSCAN_REPO")->required();
  sub.add_option("--root", o.root, "Project coordinate group:artifact:version")->required();
  sub.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}))->default_val("text");
  sub.add_option("--depth-limit", o.depth_limit, "Maximum dependency tree depth")->default_val(64);
}

void add_ecosystem(CLI::App& sub, std::string& ecosystem) {
  sub.add_option("--ecosystem", ecosystem, "Classpath ordering")
      ->check(CLI::IsMember({"maven", "gradle"}))
      ->default_val("maven");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detects classes shadowed through dependency ordering"};
  app.require_subcommand(1);

  Options o;
  std::string format = "text", ecosystem = "maven", layout = "none", rules = "dup,sealed,modules";
  std::string attacker, target, allowlist;

  auto* resolve = app.add_subcommand("resolve", "Print the resolved dependency tree");
  add_common(*resolve, o, format);

  auto* classpath = app.add_subcommand("classpath", "Print the classpath order");
  add_common(*classpath, o, format);
  add_ecosystem(*classpath, ecosystem);
  classpath->add_option("--layout", layout, "Also print the packaged layout")
      ->check(CLI::IsMember({"flat", "nested", "none"}))
      ->default_val("none");

  auto* scan = app.add_subcommand("scan", "Report classes shadowed on the classpath");
  add_common(*scan, o, format);
  add_ecosystem(*scan, ecosystem);
  scan->add_flag("--fail-on-shadow", o.fail_on_shadow, "Exit 3 when any class is shadowed");

  auto* hijack = app.add_subcommand("hijack", "Show hijack reach of an artifact or surface of a target");
  add_common(*hijack, o, format);
  add_ecosystem(*hijack, ecosystem);
  auto* att = hijack->add_option("--attacker", attacker, "Artifact whose reach to compute");
  auto* tgt = hijack->add_option("--target", target, "Artifact whose attack surface to compute");
  att->excludes(tgt);
  tgt->excludes(att);

  auto* check = app.add_subcommand("check", "Evaluate mitigations");
  add_common(*check, o, format);
  add_ecosystem(*check, ecosystem);
  check->add_option("--rules", rules, "Comma-separated subset of dup,sealed,modules")->default_val(rules);
  check->add_option("--allowlist", allowlist, "Allowlist file for the duplicate class ban");
  check->add_flag("--root-module", o.root_module, "Treat the project as a Java module");

  auto* compare = app.add_subcommand("compare", "Compare Maven and Gradle class winners");
  add_common(*compare, o, format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return shadowscan::cli::exit_code::kInputError;
  }

  o.format = format == "json" ? Format::Json : Format::Text;
  o.ecosystem = *shadowscan::parse_ecosystem(ecosystem);
  if (layout == "flat") o.layout = shadowscan::LayoutMode::Flat;
  if (layout == "nested") o.layout = shadowscan::LayoutMode::Nested;
  if (!attacker.empty()) o.attacker = attacker;
  if (!target.empty()) o.target = target;
  if (!allowlist.empty()) o.allowlist = allowlist;

  o.rules.clear();
  for (auto r : shadowscan::detail::split(rules, ',')) {
    auto rule = shadowscan::cli::parse_rule(shadowscan::detail::trim(r));
    if (!rule) {
      std::cerr << "error: unknown rule '" << r << "'\n";
      return shadowscan::cli::exit_code::kInputError;
    }
    o.rules.push_back(*rule);
  }

  const auto* sub = app.get_subcommands().front();
  return shadowscan::cli::run(sub->get_name(), o, std::cout, std::cerr);
}
