// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "builders.hpp"
#include "random_release.hpp"

#include <pickforge/release.hpp>

#include <doctest.h>

using namespace pickforge;
using namespace pickforge::testing;

namespace {

using Selected = std::map<std::string, Version>;

Pick pick(const std::string& toolchain, Selected selected) { return Pick{V(toolchain), std::move(selected), {}}; }

Repository small_repo() {
    return RepoBuilder({"8.14", "8.15"})
        .add("p", "1.0").add("q", "1.0").add("r", "1.0").add("r", "1.1").add("s", "1.0")
        .add("old", "1.0").deprecated()
        .build();
}

}  // namespace

TEST_SUITE("release") {

TEST_CASE("assemble_release") {
    auto repo = small_repo();
    auto first = assemble_release(parse_calendar_version("2022.01.0"),
                                  {pick("8.15", {{"p", V("1.0")}, {"s", V("1.0")}, {"old", V("1.0")}}),
                                   pick("8.14", {{"p", V("1.0")}})},
                                  std::nullopt, repo);
    CHECK(first.warnings.empty());
    REQUIRE(first.release.picks.size() == 2);
    CHECK(first.release.picks[0].toolchain == V("8.14"));
    CHECK_FALSE(first.release.predecessor.has_value());

    SUBCASE("dropping a package warns unless it was deprecated") {
        auto next = assemble_release(parse_calendar_version("2022.06.0"), {pick("8.15", {{"p", V("1.0")}})},
                                     first.release, repo);
        REQUIRE(next.warnings.size() == 1);
        CHECK(next.warnings[0].kind == WarningKind::Monotonicity);
        CHECK(next.warnings[0].subject == "s");
        CHECK(next.release.predecessor == parse_calendar_version("2022.01.0"));
        CHECK(dropped_without_deprecation(first.release, next.release, repo) == std::vector<std::string>{"s"});
    }
    SUBCASE("missing prior picks only warn when asked") {
        auto picks = {pick("8.15", {{"p", V("1.0")}, {"s", V("1.0")}})};
        CHECK(assemble_release(parse_calendar_version("2022.06.0"), picks, first.release, repo).warnings.empty());
        AssembleOptions opts;
        opts.require_prior_picks = true;
        auto w = assemble_release(parse_calendar_version("2022.06.0"), picks, first.release, repo, opts).warnings;
        REQUIRE(w.size() == 1);
        CHECK(w[0].kind == WarningKind::MissingPriorPick);
        CHECK(w[0].subject == "8.14");
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(assemble_release(parse_calendar_version("2022.06.0"),
                                         {pick("8.15", {}), pick("8.15", {{"p", V("1.0")}})}, std::nullopt, repo),
                        ReleaseError);
        CHECK_THROWS_AS(assemble_release(parse_calendar_version("2022.01.0"), {pick("8.15", {})}, first.release, repo),
                        ReleaseError);
        CHECK_THROWS_AS(assemble_release(parse_calendar_version("2022.06.0"), {}, std::nullopt, repo), ReleaseError);
        CHECK_THROWS_AS(assemble_release(parse_calendar_version("2022.06.0"), {pick("8.15", {{"p", V("9.0")}})},
                                         std::nullopt, repo),
                        ReleaseError);
    }
}

TEST_CASE("diff_picks") {
    auto a = pick("8.14", {{"p", V("1.0")}, {"r", V("1.0")}, {"s", V("1.0")}});
    auto b = pick("8.15", {{"p", V("1.0")}, {"q", V("1.0")}, {"r", V("1.1")}});

    auto same = diff_picks(a, a);
    CHECK(same.unchanged == std::set<std::string>{"p", "r", "s"});
    CHECK(same.added.empty());
    CHECK(same.removed.empty());

    auto d = diff_picks(a, b);
    CHECK(d.added == std::set<std::string>{"q"});
    CHECK(d.removed == std::set<std::string>{"s"});
    CHECK(d.upgraded == std::map<std::string, VersionChange>{{"r", {V("1.0"), V("1.1")}}});
    CHECK(d.downgraded.empty());
    CHECK(d.unchanged == std::set<std::string>{"p"});

    auto back = diff_picks(b, a);
    CHECK(back.added == d.removed);
    CHECK(back.removed == d.added);
    CHECK(back.downgraded == std::map<std::string, VersionChange>{{"r", {V("1.1"), V("1.0")}}});
}

TEST_CASE("diff partition and anti-symmetry on random picks") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 300; ++i) {
        auto r1 = random_release(rng), r2 = random_release(rng);
        const Pick &a = r1.picks[0], &b = r2.picks[0];
        auto d = diff_picks(a, b), e = diff_picks(b, a);
        CHECK(d.added == e.removed);
        CHECK(d.removed == e.added);
        CHECK(d.unchanged == e.unchanged);
        CHECK(d.upgraded.size() == e.downgraded.size());
        for (const auto& [n, c] : d.upgraded) {
            CHECK(c.from < c.to);
            CHECK(e.downgraded.at(n) == VersionChange{c.to, c.from});
        }
        std::multiset<std::string> names(d.added.begin(), d.added.end());
        names.insert(d.removed.begin(), d.removed.end());
        names.insert(d.unchanged.begin(), d.unchanged.end());
        for (const auto& [n, _] : d.upgraded) names.insert(n);
        for (const auto& [n, _] : d.downgraded) names.insert(n);
        std::multiset<std::string> universe;
        for (const auto& [n, _] : a.selected) universe.insert(n);
        for (const auto& [n, _] : b.selected)
            if (!a.selected.count(n)) universe.insert(n);
        CHECK(names == universe);
    }
}

TEST_CASE("upgrade_path") {
    Release rel{parse_calendar_version("2022.01.0"),
                {pick("8.13", {{"p", V("1.0")}}), pick("8.14", {{"p", V("1.0")}, {"q", V("1.0")}}),
                 pick("8.15", {{"p", V("1.1")}, {"q", V("1.0")}})},
                std::nullopt};
    auto up = upgrade_path(rel, V("8.13"), V("8.15"));
    REQUIRE(up.steps.size() == 2);
    CHECK(up.steps[0].from == V("8.13"));
    CHECK(up.steps[0].to == V("8.14"));
    CHECK(up.steps[1].to == V("8.15"));
    CHECK(up.monotone);

    // Steps compose to the end-to-end change.
    auto selected = rel.picks[0].selected;
    for (const auto& s : up.steps) {
        for (const auto& n : s.diff.removed) selected.erase(n);
        for (const auto& [n, c] : s.diff.upgraded) selected[n] = c.to;
        for (const auto& [n, c] : s.diff.downgraded) selected[n] = c.to;
        for (const auto& n : s.diff.added) selected[n] = rel.pick_for(s.to)->selected.at(n);
    }
    CHECK(selected == rel.picks[2].selected);

    rel.picks[2].selected.erase("q");
    CHECK_FALSE(upgrade_path(rel, V("8.13"), V("8.15")).monotone);
    CHECK(upgrade_path(rel, V("8.13"), V("8.14")).monotone);

    CHECK_THROWS_AS(upgrade_path(rel, V("8.14"), V("8.14")), ReleaseError);
    CHECK_THROWS_AS(upgrade_path(rel, V("8.15"), V("8.13")), ReleaseError);
    CHECK_THROWS_AS(upgrade_path(rel, V("8.12"), V("8.15")), ReleaseError);
}

TEST_CASE("lockfile format") {
    Release rel{parse_calendar_version("2022.06.1"),
                {Pick{V("8.15"), {{"p", V("1.0")}}, {{"q", "conflict with p"}}}},
                parse_calendar_version("2022.01.0")};
    const std::string text = write_lockfile(rel);
    CHECK(text == R"({
  "picks": [
    {
      "excluded": {
        "q": "conflict with p"
      },
      "selected": {
        "p": "1.0"
      },
      "toolchain": "8.15"
    }
  ],
  "predecessor": "2022.01.0",
  "version": "2022.06.1"
}
)");
    CHECK(read_lockfile(text) == rel);
}

TEST_CASE("lockfile schema errors name the field") {
    auto base = nlohmann::json::parse(
        R"({"version": "2022.01.0", "predecessor": null,
            "picks": [{"toolchain": "8.15", "selected": {"p": "1.0"}, "excluded": {}}]})");
    CHECK_NOTHROW(read_lockfile(base.dump()));

    auto expect = [](nlohmann::json j, const std::string& field) {
        CHECK_THROWS_WITH_AS(read_lockfile(j.dump()), doctest::Contains(field.c_str()), ReleaseError);
    };
    auto j = base;
    j["signature"] = "x";
    expect(j, "'signature'");
    j = base;
    j["picks"][0]["notes"] = "x";
    expect(j, "picks[0].notes");
    j = base;
    j["picks"][0]["selected"]["p"] = "1..0";
    expect(j, "picks[0].selected.p");
    j = base;
    j["version"] = "2022.13.0";
    expect(j, "'version'");
    j = base;
    j.erase("predecessor");
    expect(j, "'predecessor'");
    j = base;
    j["predecessor"] = "2023.01.0";
    expect(j, "'predecessor'");
    j = base;
    j["picks"].push_back(j["picks"][0]);
    expect(j, "picks[1].toolchain");
    j = base;
    j["picks"] = nlohmann::json::array();
    expect(j, "'picks'");
    CHECK_THROWS_AS(read_lockfile("not json"), ReleaseError);
}

TEST_CASE("lockfile round-trip and byte idempotence") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 600; ++i) {
        auto rel = random_release(rng);
        const std::string once = write_lockfile(rel);
        CHECK(write_lockfile(rel) == once);
        auto back = read_lockfile(once);
        CHECK(back == rel);
        CHECK(write_lockfile(back) == once);
    }
}

}  // TEST_SUITE
