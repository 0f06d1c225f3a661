#!/usr/bin/env python3
# Copyright 2026 The pickforge Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the repository fixtures under tests/fixtures/.

platform/     four toolchains (8.12-8.15), 50 packages that join over time
platform-rc/  the same ecosystem while 8.15 was still a release candidate
smoke/        eight packages with trivial shell commands and one broken build
unsat/        two packages that need different versions of a third

expected.json records what each fixture was built to exhibit.

Usage: make_fixtures.py [OUT_DIR]   (default: tests/fixtures next to this repo)
"""

import json
import shutil
import sys
from pathlib import Path

TOOLCHAINS = ["8.12", "8.13", "8.14", "8.15"]
MAINTAINERS = ["ada", "brook", "chen", "dana", "emre", "fatou"]

BUILD = 'mkdir -p "pkgs/$PKG_NAME" && echo "$PKG_VERSION" > "pkgs/$PKG_NAME/VERSION"'
SMOKE = 'test -f "pkgs/$PKG_NAME/VERSION"'

# Present from 8.12 with a bridge version for every consecutive pair.
CORE = [
    "arith", "bignums", "containers", "elpi", "equations", "extlib", "flocq", "gappa-lib",
    "hierarchy", "interval", "iris-base", "ltac2-ext", "mathcomp-algebra", "mathcomp-ssreflect",
    "paramcoq", "quickchick", "relation-algebra", "simple-io", "stdpp", "unicoq",
]
# Every version targets exactly one toolchain, so no version bridges a pair.
SINGLE_TARGET = ["aac-tactics", "coqhammer", "menhirlib"]
# alt-mono and alt-poly cannot coexist.
EXCLUSIVE = ["alt-mono", "alt-poly"]
JOIN_813 = ["autosubst", "category", "compcert-lib", "corn", "deriving",
            "dpdgraph", "fcsl-pcm", "fourcolor", "gaia", "graph-theory"]
JOIN_814 = ["hott-lib", "itauto", "jasmin-lib", "libhyps", "metacoq-lite",
            "mtac2", "odd-order", "reglang", "serapi-lib", "smtcoq"]
JOIN_815 = ["tlc", "trakt", "vst-lite", "waterproof", "zorns-lemma"]

# Dependencies between core packages: (package, dependency); windows line up
# so each version of the dependent asks for the dependency version of the
# same window or newer.
CORE_DEPS = [
    ("mathcomp-algebra", "mathcomp-ssreflect"),
    ("hierarchy", "elpi"),
    ("interval", "flocq"),
    ("interval", "bignums"),
    ("gappa-lib", "flocq"),
    ("iris-base", "stdpp"),
    ("equations", "extlib"),
    ("quickchick", "simple-io"),
    ("quickchick", "extlib"),
    ("relation-algebra", "mathcomp-ssreflect"),
]

DEPRECATED = "paramcoq"
WITH_DEV_SNAPSHOT = "stdpp"          # released and dev versions both admit 8.15
RC_DEV_COMPATIBLE = ["elpi", "flocq", "unicoq"]
RC_NONE_KNOWN = ["bignums", "simple-io"]


def manifest(name, version, toolchain, *, depends=(), conflicts=(), dev=False, source_ref=None,
             deprecated=False, maintainer="", build=BUILD, smoke=SMOKE):
    return {
        "name": name,
        "version": version,
        "toolchain": toolchain,
        "depends": [{"name": n, "constraint": c} for n, c in depends],
        "conflicts": [{"name": n, "constraint": c} for n, c in conflicts],
        "dev": dev,
        "source_ref": source_ref,
        "deprecated": deprecated,
        "maintainer": maintainer,
        "build_cmd": build,
        "smoke_cmd": smoke,
    }


def maintainer_of(name):
    return MAINTAINERS[sum(map(ord, name)) % len(MAINTAINERS)]


def platform(rc_snapshot):
    """Returns {name: [manifest, ...]}."""
    pkgs = {}
    deps_of = {}
    for pkg, dep in CORE_DEPS:
        deps_of.setdefault(pkg, []).append(dep)

    windows = [("1.0", ">=8.12, <8.14"), ("1.1", ">=8.13, <8.15"), ("1.2", ">=8.14")]
    for name in CORE:
        versions = []
        for version, window in windows:
            if version == "1.2" and rc_snapshot and name in RC_DEV_COMPATIBLE + RC_NONE_KNOWN:
                continue
            depends = [(d, ">=" + version) for d in deps_of.get(name, [])]
            versions.append(manifest(name, version, window, depends=depends,
                                     deprecated=(name == DEPRECATED), maintainer=maintainer_of(name)))
        if rc_snapshot and name in RC_DEV_COMPATIBLE:
            versions.append(manifest(name, "1.2", ">=8.14", dev=True,
                                     source_ref=f"{name}-8.15-compat",
                                     maintainer=maintainer_of(name)))
        pkgs[name] = versions
    pkgs[WITH_DEV_SNAPSHOT].append(
        manifest(WITH_DEV_SNAPSHOT, "1.3", "*", dev=True, source_ref="8f3c2a1",
                 maintainer=maintainer_of(WITH_DEV_SNAPSHOT)))

    for name in SINGLE_TARGET:
        pkgs[name] = [manifest(name, f"{i + 1}.0", "=" + t, maintainer=maintainer_of(name))
                      for i, t in enumerate(TOOLCHAINS)]

    pkgs["alt-mono"] = [manifest("alt-mono", v, w, conflicts=[("alt-poly", "*")],
                                 maintainer=maintainer_of("alt-mono")) for v, w in windows]
    pkgs["alt-poly"] = [manifest("alt-poly", v, w, maintainer=maintainer_of("alt-poly"))
                        for v, w in windows]

    # quickchick 2.0 is newer but clashes with the older extlib releases, so
    # the pick has to fall back to quickchick 1.x before 8.14.
    pkgs["quickchick"].append(
        manifest("quickchick", "2.0", ">=8.12", depends=[("simple-io", ">=1.0")],
                 conflicts=[("extlib", "<1.2")], maintainer=maintainer_of("quickchick")))

    for name in JOIN_813:
        pkgs[name] = [
            manifest(name, "1.0", ">=8.13, <8.15", depends=[("mathcomp-ssreflect", ">=1.1")],
                     maintainer=maintainer_of(name)),
            manifest(name, "1.1", ">=8.14", depends=[("mathcomp-ssreflect", ">=1.2")],
                     maintainer=maintainer_of(name)),
        ]
    for i, name in enumerate(JOIN_814):
        dep = JOIN_813[i]
        pkgs[name] = [manifest(name, "1.0", ">=8.14", depends=[(dep, ">=1.1")], maintainer=maintainer_of(name))]
    if not rc_snapshot:
        for i, name in enumerate(JOIN_815):
            dep = JOIN_814[i]
            pkgs[name] = [manifest(name, "1.0", ">=8.15", depends=[(dep, ">=1.0")], maintainer=maintainer_of(name))]
    return pkgs


def smoke_fixture():
    ok = 'sleep 0.05; mkdir -p "pkgs/$PKG_NAME"'
    layout = {
        "base": ([], ok),
        "util": (["base"], ok),
        "broken": (["base"], "exit 3"),
        "app": (["broken"], ok),
        "tool": (["app"], ok),
        "suite": (["tool", "util"], ok),
        "plugin": (["util"], ok),
        "docs": ([], ok),
    }
    return {name: [manifest(name, "1.0", "*", depends=[(d, "*") for d in deps], build=build,
                            smoke='test -d "pkgs/$PKG_NAME"', maintainer="ada")]
            for name, (deps, build) in layout.items()}


def unsat_fixture():
    return {
        "a": [manifest("a", "1.0", "*", depends=[("c", "=1.0")], maintainer="ada")],
        "b": [manifest("b", "1.0", "*", depends=[("c", "=2.0")], maintainer="brook")],
        "c": [manifest("c", "1.0", "*", maintainer="chen"), manifest("c", "2.0", "*", maintainer="chen")],
    }


def write_repo(root, toolchains, pkgs):
    if root.exists():
        shutil.rmtree(root)
    names = sorted(pkgs)
    index = {
        "toolchains": toolchains,
        "packages": names,
        "versions": {n: [m["version"] for m in pkgs[n]] for n in names},
    }
    dump(root / "index.json", index)
    for name in names:
        for m in pkgs[name]:
            dump(root / "packages" / name / f"{m['version']}.json", m)


def dump(path, obj):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[2] / "tests" / "fixtures"
    final = platform(rc_snapshot=False)
    assert len(final) == 50, len(final)
    write_repo(out / "platform", TOOLCHAINS, final)
    rc = platform(rc_snapshot=True)
    write_repo(out / "platform-rc", TOOLCHAINS[:3], rc)
    write_repo(out / "smoke", ["8.15"], smoke_fixture())
    write_repo(out / "unsat", ["8.15"], unsat_fixture())

    coordination = {}
    for name in sorted(rc):
        if name in JOIN_815 or name == "alt-poly":
            continue  # not part of the 8.14 pick
        if name in RC_DEV_COMPATIBLE:
            coordination[name] = "DevCompatible"
        elif name in RC_NONE_KNOWN:
            coordination[name] = "NoneKnown"
        else:
            coordination[name] = "AlreadyCompatible"
    dump(out / "expected.json", {
        "platform": {
            "toolchains": TOOLCHAINS,
            "package_count": len(final),
            "succession_violations": sorted(SINGLE_TARGET),
            "always_excluded": ["alt-poly"],
            "pick_sizes": {"8.12": 24, "8.13": 34, "8.14": 44, "8.15": 49},
        },
        "platform-rc": {
            "rc": "8.15",
            "reference_toolchain": "8.14",
            "coordination": coordination,
            "dev_source_refs": {n: f"{n}-8.15-compat" for n in RC_DEV_COMPATIBLE},
        },
        "smoke": {
            "toolchain": "8.15",
            "build_failed": ["broken"],
            "skipped": ["app", "suite", "tool"],
            "passed": ["base", "docs", "plugin", "util"],
        },
        "unsat": {"toolchain": "8.15", "mandatory": ["a", "b"], "culprits": ["a", "b"]},
    })


if __name__ == "__main__":
    main()
