#!/usr/bin/env python3
"""Regenerates the fixture repositories under fixtures/.

Each repository uses the <group>/<artifact>/<version>/pom.xml layout with an
optional artifact.jar or classes.txt next to the POM.
"""

import pathlib
import shutil
import sys
import zipfile

ROOT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

# Fixed timestamp so regenerated jars are byte-identical.
ZIP_DATE = (2020, 1, 1, 0, 0, 0)


def pom(coord, deps):
    g, a, v = coord.split(":")
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           '<project xmlns="http://maven.apache.org/POM/4.0.0">',
           "  <modelVersion>4.0.0</modelVersion>",
           f"  <groupId>{g}</groupId>",
           f"  <artifactId>{a}</artifactId>",
           f"  <version>{v}</version>"]
    if deps:
        out.append("  <dependencies>")
        for d in deps:
            dg, da, dv = d.split(":")
            out += ["    <dependency>",
                    f"      <groupId>{dg}</groupId>",
                    f"      <artifactId>{da}</artifactId>",
                    f"      <version>{dv}</version>",
                    "    </dependency>"]
        out.append("  </dependencies>")
    out.append("</project>")
    return "\n".join(out) + "\n"


def artifact_dir(repo, coord):
    g, a, v = coord.split(":")
    d = repo / g / a / v
    d.mkdir(parents=True, exist_ok=True)
    return d


def add(repo, coord, deps=(), classes=None, jar=None, sealed=False, extra_lines=()):
    d = artifact_dir(repo, coord)
    (d / "pom.xml").write_text(pom(coord, list(deps)))
    if classes is not None:
        lines = [f"# {coord}", *extra_lines, *classes]
        (d / "classes.txt").write_text("\n".join(lines) + "\n")
    if jar is not None:
        write_jar(d / "artifact.jar", jar, sealed)


def write_jar(path, classes, sealed):
    manifest = "Manifest-Version: 1.0\r\nCreated-By: make_fixtures\r\n"
    if sealed:
        manifest += "Sealed: true\r\n"
    manifest += "\r\n"
    with zipfile.ZipFile(path, "w", compression=zipfile.ZIP_DEFLATED) as z:
        def put(name, data):
            info = zipfile.ZipInfo(name, ZIP_DATE)
            info.compress_type = zipfile.ZIP_DEFLATED
            z.writestr(info, data)
        put("META-INF/MANIFEST.MF", manifest)
        for c in classes:
            # Placeholder bytes; only entry names matter to the scanner.
            put(c.replace(".", "/") + ".class", b"\xca\xfe\xba\xbe" + c.encode())


def sample_tree(repo, d111_extra=(), d2_extra=()):
    g = "com.example"
    tree = {
        "project": ["D1", "D2"],
        "D1": ["D11"],
        "D11": ["D111", "D112"],
        "D111": [], "D112": [],
        "D2": ["D21", "D22"],
        "D21": ["D211"], "D22": ["D221"],
        "D211": [], "D221": [],
    }
    for name, kids in tree.items():
        own = [f"{g}.{name.lower()}.Main" if name == "project" else f"{g}.{name.lower()}.{name}Class"]
        if name == "D111":
            own += list(d111_extra)
        if name == "D2":
            own += list(d2_extra)
        add(repo, f"{g}:{name}:1.0", [f"{g}:{k}:1.0" for k in kids], classes=own)


def poc(repo, nice_first):
    nice = "org.test:nicelibrary:1.2"
    attacker = "org.evil:attackerlibrary:1.0"
    deps = [nice, attacker] if nice_first else [attacker, nice]
    add(repo, "org.victim:victim:1.0", deps, classes=["org.victim.Main"])
    add(repo, nice, jar=["org.test.NiceClass", "org.test.NiceHelper"])
    add(repo, attacker, ["org.evil:fakelibrary:1.0"], classes=["org.evil.AttackerLibrary"])
    add(repo, "org.evil:fakelibrary:1.0", classes=["org.test.NiceClass"])


def cwa(repo):
    # Flattened parent POM: the parent's dependency list becomes the root's.
    root = "app.coronawarn:cwa-server:1.0.0"
    boot = "org.springframework.boot:spring-boot-starter-web:2.3.4.RELEASE"
    bc = "org.bouncycastle:bcpkix-jdk15on:1.66"
    everit = "com.github.erosb:everit-json-schema:1.12.1"
    yaml = "org.yaml:snakeyaml:1.26"
    pg = "org.postgresql:postgresql:42.2.16"
    add(repo, root, [boot, bc, everit, yaml, pg], classes=["app.coronawarn.server.ServerApplication"])

    add(repo, boot, ["org.springframework.boot:spring-boot:2.3.4.RELEASE",
                     "org.springframework:spring-webmvc:5.2.9.RELEASE"],
        classes=["org.springframework.boot.autoconfigure.web.servlet.WebMvcAutoConfiguration"])
    add(repo, "org.springframework.boot:spring-boot:2.3.4.RELEASE",
        ["org.springframework:spring-core:5.2.9.RELEASE"],
        classes=["org.springframework.boot.SpringApplication"])
    add(repo, "org.springframework:spring-webmvc:5.2.9.RELEASE",
        ["org.springframework:spring-core:5.2.9.RELEASE"],
        classes=["org.springframework.web.servlet.DispatcherServlet"])
    add(repo, "org.springframework:spring-core:5.2.9.RELEASE",
        classes=["org.springframework.core.SpringVersion"])
    add(repo, bc, ["org.bouncycastle:bcprov-jdk15on:1.66"],
        classes=["org.bouncycastle.cert.X509CertificateHolder"])
    add(repo, "org.bouncycastle:bcprov-jdk15on:1.66",
        classes=["org.bouncycastle.jce.provider.BouncyCastleProvider"])

    # Compromised release: one extra dependency carrying org.postgresql.Driver.
    add(repo, everit, ["org.json:json:20190722",
                       "com.damnhandy:handy-uri-templates:2.1.8",
                       "com.google.re2j:re2j:1.3",
                       "com.github.erosb:json-schema-extras:1.0"],
        classes=["org.everit.json.schema.Schema", "org.everit.json.schema.loader.SchemaLoader"])
    add(repo, "org.json:json:20190722", classes=["org.json.JSONObject"])
    add(repo, "com.damnhandy:handy-uri-templates:2.1.8", classes=["com.damnhandy.uri.template.UriTemplate"])
    add(repo, "com.google.re2j:re2j:1.3", classes=["com.google.re2j.Pattern"])
    add(repo, "com.github.erosb:json-schema-extras:1.0",
        classes=["com.github.erosb.extras.Formats", "org.postgresql.Driver"])

    add(repo, yaml, classes=["org.yaml.snakeyaml.Yaml"])
    add(repo, pg, jar=["org.postgresql.Driver", "org.postgresql.PGConnection",
                       "org.postgresql.ds.PGSimpleDataSource"])


def sealed(repo):
    nice = "org.nice:nicelib:1.0"
    add(repo, nice, jar=["org.nice.ClassA", "org.nice.ClassB"], sealed=True)
    add(repo, "org.evil:partial-attacker:1.0", classes=["org.nice.ClassA"])
    add(repo, "org.evil:full-attacker:1.0", classes=["org.nice.ClassA", "org.nice.ClassB"])
    add(repo, "org.victim:sealed-partial:1.0", ["org.evil:partial-attacker:1.0", nice],
        classes=["org.victim.PartialMain"])
    add(repo, "org.victim:sealed-full:1.0", ["org.evil:full-attacker:1.0", nice],
        classes=["org.victim.FullMain"])


def broken(repo):
    add(repo, "org.victim:broken:1.0", ["org.test:present:1.0", "org.test:absent:1.0"])
    add(repo, "org.test:present:1.0", classes=["org.test.Present"])


def main():
    if ROOT.exists():
        shutil.rmtree(ROOT)
    builders = {
        "sample-tree": sample_tree,
        "deep-shadow": lambda r: sample_tree(r, d111_extra=["com.example.d2.GenuineClass"],
                                   d2_extra=["com.example.d2.GenuineClass"]),
        "poc-nice-first": lambda r: poc(r, nice_first=True),
        "poc-attacker-first": lambda r: poc(r, nice_first=False),
        "cwa": cwa,
        "sealed": sealed,
        "broken": broken,
    }
    for name, build in builders.items():
        repo = ROOT / name
        repo.mkdir(parents=True)
        build(repo)
    print(f"wrote {len(builders)} repositories under {ROOT}", file=sys.stderr)


if __name__ == "__main__":
    main()
