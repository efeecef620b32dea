#include <gtest/gtest.h>

#include <random>

#include "shadowscan/artifact_inspect.hpp"
#include "shadowscan/resolver.hpp"
#include "support/test_support.hpp"

using namespace shadowscan;
using namespace shadowscan::testing;

namespace {

const Coordinate kCoord = Coordinate::parse("org.test:lib:1.0");

std::set<ClassName> classes(std::initializer_list<const char*> names) {
  std::set<ClassName> out;
  for (auto n : names) out.emplace(n);
  return out;
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::IoFailure;
}

}  // namespace

TEST(InspectJar, MapsClassEntriesToNames) {
  TempDir dir;
  ZipWriter z;
  z.add("org/", "", false);
  z.add("org/test/", "", false);
  z.add("org/test/NiceClass.class", "\xca\xfe\xba\xbe");
  z.write(dir / "a.jar");
  auto inv = inspect_jar(dir / "a.jar", kCoord);
  EXPECT_EQ(inv.classes, classes({"org.test.NiceClass"}));
  EXPECT_FALSE(inv.is_module);
  EXPECT_TRUE(inv.sealed_packages.empty());
}

TEST(InspectJar, SealedMainAttributeSealsEveryPackage) {
  TempDir dir;
  ZipWriter z;
  z.add("META-INF/MANIFEST.MF", "Manifest-Version: 1.0\r\nSealed: true\r\n\r\n");
  z.add("org/nice/ClassA.class", "x");
  z.add("org/nice/ClassB.class", "y");
  z.write(dir / "a.jar");
  auto inv = inspect_jar(dir / "a.jar", kCoord);
  EXPECT_EQ(inv.sealed_packages, (std::set<std::string>{"org.nice"}));
  EXPECT_EQ(inv.classes, classes({"org.nice.ClassA", "org.nice.ClassB"}));
}

TEST(InspectJar, PerEntrySectionsOverrideMainSealing) {
  TempDir dir;
  ZipWriter z;
  z.add("META-INF/MANIFEST.MF",
        "Manifest-Version: 1.0\nSealed: true\n\nName: org/open/\nSealed: false\n\n"
        "Name: org/other/\nSealed: TRUE\n\n",
        false);
  z.add("org/nice/A.class", "");
  z.add("org/open/B.class", "");
  z.write(dir / "a.jar");
  auto inv = inspect_jar(dir / "a.jar", kCoord);
  EXPECT_EQ(inv.sealed_packages, (std::set<std::string>{"org.nice", "org.other"}));
}

TEST(InspectJar, ManifestContinuationLines) {
  const std::string pkg = "com/example/a/very/long/package/name/that/does/not/fit/on/one/line/";
  std::string folded = "Name: " + pkg.substr(0, 60) + "\r\n " + pkg.substr(60) + "\r\nSealed: true\r\n";
  auto m = parse_manifest("Manifest-Version: 1.0\r\n\r\n" + folded);
  ASSERT_EQ(m.sections.size(), 1u);
  EXPECT_EQ(m.sections[0].at("name"), pkg);
  EXPECT_EQ(m.sections[0].at("sealed"), "true");

  TempDir dir;
  ZipWriter z;
  z.add("META-INF/MANIFEST.MF", "Manifest-Version: 1.0\r\n\r\n" + folded + "\r\n");
  z.add(pkg + "X.class", "");
  z.write(dir / "a.jar");
  EXPECT_EQ(inspect_jar(dir / "a.jar", kCoord).sealed_packages,
            (std::set<std::string>{"com.example.a.very.long.package.name.that.does.not.fit.on.one.line"}));
}

TEST(InspectJar, ModuleInfoAndExcludedEntries) {
  TempDir dir;
  ZipWriter z;
  z.add("module-info.class", "m");
  z.add("META-INF/versions/11/org/x/Y.class", "");
  z.add("META-INF/versions/11/module-info.class", "");
  z.add("org/x/Outer$Inner.class", "");
  z.add("org/x/readme.txt", "");
  z.write(dir / "a.jar");
  auto inv = inspect_jar(dir / "a.jar", kCoord);
  EXPECT_TRUE(inv.is_module);
  EXPECT_FALSE(inv.module_name.has_value());
  EXPECT_EQ(inv.classes, classes({"org.x.Outer$Inner"}));
}

TEST(InspectJar, NestedModuleInfoDoesNotMakeAModule) {
  TempDir dir;
  ZipWriter z;
  z.add("org/x/module-info.class", "");
  z.write(dir / "a.jar");
  auto inv = inspect_jar(dir / "a.jar", kCoord);
  EXPECT_FALSE(inv.is_module);
  EXPECT_TRUE(inv.classes.empty());
}

TEST(InspectJar, ReadsZip64EndRecords) {
  TempDir dir;
  ZipWriter z;
  z.add("META-INF/MANIFEST.MF", "Sealed: true\n");
  z.add("a/B.class", "");
  z.use_zip64_end();
  z.write(dir / "a.jar");
  auto inv = inspect_jar(dir / "a.jar", kCoord);
  EXPECT_EQ(inv.classes, classes({"a.B"}));
  EXPECT_EQ(inv.sealed_packages, (std::set<std::string>{"a"}));
}

TEST(InspectJar, Errors) {
  TempDir dir;
  write_text(dir / "text.jar", "this is definitely not a zip archive at all");
  EXPECT_EQ(code_of([&] { inspect_jar(dir / "text.jar", kCoord); }), Errc::NotAZip);
  write_text(dir / "tiny.jar", "PK");
  EXPECT_EQ(code_of([&] { inspect_jar(dir / "tiny.jar", kCoord); }), Errc::NotAZip);
  EXPECT_EQ(code_of([&] { inspect_jar(dir / "absent.jar", kCoord); }), Errc::IoFailure);

  ZipWriter good;
  good.add("a/B.class", "");
  auto bytes = good.bytes();

  // Central directory offset pointing past the end of the file.
  auto bad_offset = bytes;
  bad_offset[bad_offset.size() - 6] = '\x7f';
  write_text(dir / "offset.jar", bad_offset);
  EXPECT_EQ(code_of([&] { inspect_jar(dir / "offset.jar", kCoord); }), Errc::CorruptArchive);

  // Central directory header signature damaged.
  auto bad_sig = bytes;
  bad_sig[bad_sig.find("PK\x01\x02") + 2] = 'X';
  write_text(dir / "sig.jar", bad_sig);
  EXPECT_EQ(code_of([&] { inspect_jar(dir / "sig.jar", kCoord); }), Errc::CorruptArchive);

  ZipWriter bad_name;
  bad_name.add("org/foo.bar/X.class", "");
  bad_name.write(dir / "name.jar");
  EXPECT_EQ(code_of([&] { inspect_jar(dir / "name.jar", kCoord); }), Errc::InvalidEntryName);

  ZipWriter empty_seg;
  empty_seg.add("org//X.class", "");
  empty_seg.write(dir / "seg.jar");
  EXPECT_EQ(code_of([&] { inspect_jar(dir / "seg.jar", kCoord); }), Errc::InvalidEntryName);
}

TEST(InspectJar, CorruptManifestData) {
  TempDir dir;
  ZipWriter z;
  z.add("META-INF/MANIFEST.MF", "Manifest-Version: 1.0\r\nSealed: true\r\n", false);
  z.add("a/B.class", "");
  auto bytes = z.bytes();
  bytes[bytes.find("Sealed")] = 's';  // payload no longer matches its crc
  write_text(dir / "crc.jar", bytes);
  EXPECT_EQ(code_of([&] { inspect_jar(dir / "crc.jar", kCoord); }), Errc::CorruptArchive);
}

TEST(InspectJar, FixtureJarWrittenByIndependentTool) {
  auto coord = Coordinate::parse("org.test:nicelibrary:1.2");
  auto inv = inspect_jar(fixture("poc-attacker-first") / "org.test/nicelibrary/1.2/artifact.jar", coord);
  EXPECT_EQ(inv.classes, classes({"org.test.NiceClass", "org.test.NiceHelper"}));
  EXPECT_TRUE(inv.sealed_packages.empty());
}

TEST(InspectClasslist, Basics) {
  auto inv = parse_classlist("org.test.NiceClass\n", kCoord);
  EXPECT_EQ(inv.classes, classes({"org.test.NiceClass"}));

  inv = parse_classlist("# header\n\n@sealed org.nice\norg.nice.ClassA\r\n  org.nice.ClassB  \n", kCoord);
  EXPECT_EQ(inv.sealed_packages, (std::set<std::string>{"org.nice"}));
  EXPECT_EQ(inv.classes.size(), 2u);

  inv = parse_classlist("@module nice.lib\na.B\n", kCoord);
  EXPECT_TRUE(inv.is_module);
  EXPECT_EQ(inv.module_name, "nice.lib");
}

TEST(InspectClasslist, Errors) {
  EXPECT_EQ(code_of([] { parse_classlist("a.B\na.B\n", kCoord); }), Errc::DuplicateClassName);
  EXPECT_EQ(code_of([] { parse_classlist("a..B\n", kCoord); }), Errc::InvalidClassName);
  EXPECT_EQ(code_of([] { parse_classlist("a/B\n", kCoord); }), Errc::InvalidClassName);
  EXPECT_EQ(code_of([] { parse_classlist("@sealed\n", kCoord); }), Errc::InvalidClassName);
  EXPECT_EQ(code_of([] { parse_classlist("@export a\n", kCoord); }), Errc::InvalidClassName);
}

TEST(InspectClasslist, JarAndClasslistPairAgree) {
  auto coord = Coordinate::parse("org.nice:nicelib:1.0");
  auto from_jar = inspect_jar(fixture("sealed") / "org.nice/nicelib/1.0/artifact.jar", coord);
  auto from_list = parse_classlist("@sealed org.nice\norg.nice.ClassA\norg.nice.ClassB\n", coord);
  EXPECT_EQ(from_jar, from_list);

  TempDir dir;
  ZipWriter z;
  z.add("module-info.class", "");
  z.add("p/q/R.class", "");
  z.add("p/S$1.class", "");
  z.write(dir / "m.jar");
  EXPECT_EQ(inspect_jar(dir / "m.jar", kCoord), parse_classlist("@module\np.q.R\np.S$1\n", kCoord));
}

TEST(InspectClasslist, WriteThenParseRoundTrips) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, 5);
  for (int trial = 0; trial < 200; ++trial) {
    ClassInventory inv{kCoord, {}, {}, pick(rng) < 2, std::nullopt};
    if (inv.is_module && pick(rng) < 3) inv.module_name = "mod" + std::to_string(trial);
    const int n = pick(rng) * 3;
    for (int i = 0; i < n; ++i) {
      std::string pkg = "p" + std::to_string(pick(rng)) + (pick(rng) < 2 ? ".sub" : "");
      inv.classes.emplace(pkg + ".C" + std::to_string(pick(rng)) + (pick(rng) == 0 ? "$Inner" : ""));
      if (pick(rng) == 0) inv.sealed_packages.insert(pkg);
    }
    ASSERT_EQ(parse_classlist(write_classlist(inv), kCoord), inv);
  }
}

TEST(InventoryAll, FollowsClasspathOrder) {
  auto repo = load_repository(fixture("poc-attacker-first"));
  auto tree = resolve(repo, fetch_pom(repo, Coordinate::parse("org.victim:victim:1.0"))).tree;
  auto inv = inventory_all(repo, build_classpath(tree, Ecosystem::Maven));
  ASSERT_EQ(inv.size(), 3u);
  EXPECT_EQ(inv[0].coordinate.artifact_id(), "attackerlibrary");
  EXPECT_EQ(inv[1].coordinate.artifact_id(), "fakelibrary");
  EXPECT_EQ(inv[2].coordinate.artifact_id(), "nicelibrary");
  EXPECT_EQ(inv[2].classes, classes({"org.test.NiceClass", "org.test.NiceHelper"}));
}

TEST(InventoryAll, EmptyAndMissingContent) {
  Repository repo;
  EXPECT_TRUE(inventory_all(repo, Classpath{}).empty());

  repo.add(PomDocument{kCoord, {}});
  Classpath cp{Ecosystem::Maven, {kCoord}, true};
  EXPECT_EQ(code_of([&] { inventory_all(repo, cp); }), Errc::MissingContent);
  cp.entries = {Coordinate::parse("x:y:1")};
  EXPECT_EQ(code_of([&] { inventory_all(repo, cp); }), Errc::MissingContent);
}

TEST(InventoryAll, JarPreferredOverClasslist) {
  TempDir dir;
  auto base = dir / "org.test/lib/1.0";
  write_text(base / "pom.xml", write_pom(PomDocument{kCoord, {}}));
  write_text(base / "classes.txt", "from.list.A\n");
  ZipWriter z;
  z.add("from/jar/A.class", "");
  z.write(base / "artifact.jar");
  auto repo = load_repository(dir.path());
  auto inv = inventory_all(repo, Classpath{Ecosystem::Maven, {kCoord}, true});
  ASSERT_EQ(inv.size(), 1u);
  EXPECT_EQ(inv[0].classes, classes({"from.jar.A"}));
}
