// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "builders.hpp"
#include "random_repo.hpp"

#include <pickforge/policy.hpp>

#include <doctest.h>

using namespace pickforge;
using namespace pickforge::testing;

namespace {

std::vector<std::optional<Version>> witnesses(const SuccessionReport& r) {
    std::vector<std::optional<Version>> out;
    for (const auto& p : r.pairs) out.push_back(p.witness);
    return out;
}

}  // namespace

TEST_SUITE("policy") {

TEST_CASE("check_succession") {
    auto repo = RepoBuilder({"8.12", "8.13", "8.14", "8.15"})
                    .add("window", "1.0", ">=8.13, <8.16")
                    .add("single", "1.0", "=8.12").add("single", "2.0", "=8.13")
                    .add("single", "3.0", "=8.14").add("single", "4.0", "=8.15")
                    .add("any", "1.0").add("any", "2.0")
                    .add("devonly", "1.0", "=8.12").add("devonly", "2.0").dev("abc")
                    .build();

    auto w = check_succession(repo, "window");
    REQUIRE(w.pairs.size() == 3);
    CHECK(witnesses(w) == std::vector<std::optional<Version>>{std::nullopt, V("1.0"), V("1.0")});
    CHECK(w.pairs[0].older == V("8.12"));
    CHECK(w.pairs[0].newer == V("8.13"));
    CHECK(w.ok());  // absent from 8.12 entirely, so nothing to bridge

    auto s = check_succession(repo, "single");
    CHECK(witnesses(s) == std::vector<std::optional<Version>>(3, std::nullopt));
    CHECK_FALSE(s.ok());
    CHECK(std::all_of(s.pairs.begin(), s.pairs.end(), [](const SuccessionPair& p) { return p.violated(); }));

    auto a = check_succession(repo, "any");
    CHECK(witnesses(a) == std::vector<std::optional<Version>>(3, V("2.0")));
    CHECK(a.ok());

    // Dev snapshots never count as witnesses.
    auto d = check_succession(repo, "devonly");
    CHECK(witnesses(d) == std::vector<std::optional<Version>>(3, std::nullopt));

    CHECK_THROWS_AS(check_succession(repo, "nope"), UnknownPackageError);
}

TEST_CASE("check_succession equals the brute-force scan") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 200; ++i) {
        auto inst = random_instance(rng);
        const auto& tcs = inst.repo.toolchains;
        for (const auto& [name, versions] : inst.repo.packages) {
            auto report = check_succession(inst.repo, name);
            REQUIRE(report.pairs.size() == tcs.size() - 1);
            for (std::size_t k = 0; k + 1 < tcs.size(); ++k) {
                std::optional<Version> want;
                for (const auto& [v, m] : versions) {
                    if (!m.dev && satisfies(tcs[k], m.toolchain) && satisfies(tcs[k + 1], m.toolchain)) want = v;
                }
                CHECK(report.pairs[k].witness == want);
            }
        }
    }
}

TEST_CASE("coordinate") {
    auto repo = RepoBuilder({"8.14", "8.15"})
                    .add("ready", "1.0", "<8.15").maintainer("ann").add("ready", "2.0", ">=8.13")
                    .add("dev", "1.0", "<8.15").maintainer("bo")
                    .add("dev", "1.1").dev("abc123").maintainer("bo")
                    .add("dev", "1.2").dev("aaa").maintainer("bo")
                    .add("stuck", "1.0", "<8.15").maintainer("ann")
                    .add("both", "1.0").add("both", "2.0").dev("zzz").maintainer("cy")
                    .add("unpicked", "1.0", "<8.15")
                    .build();
    Pick reference{V("8.14"),
                   {{"ready", V("1.0")}, {"dev", V("1.0")}, {"stuck", V("1.0")}, {"both", V("1.0")}},
                   {}};
    auto report = coordinate(repo, V("8.15"), reference);
    CHECK(report.rc == V("8.15"));
    CHECK(report.reference_toolchain == V("8.14"));
    REQUIRE(report.entries.size() == 4);

    CHECK(report.entries.at("ready").status == CompatStatus{AlreadyCompatible{V("2.0")}});
    CHECK(report.entries.at("ready").action == "no action needed");
    CHECK(report.entries.at("ready").maintainer == "ann");
    CHECK(report.entries.at("dev").status == CompatStatus{DevCompatible{"aaa", V("1.2")}});
    CHECK(report.entries.at("dev").action == "please cut a release from aaa");
    CHECK(report.entries.at("stuck").status == CompatStatus{NoneKnown{}});
    CHECK(report.entries.at("stuck").action == "please provide a compatible version");
    CHECK(report.entries.at("both").status == CompatStatus{AlreadyCompatible{V("1.0")}});
    CHECK(report.entries.count("unpicked") == 0);

    const std::string md = render_markdown(report);
    CHECK(md == render_markdown(coordinate(repo, V("8.15"), reference)));
    CHECK(md.find("## ann") < md.find("## bo"));
    CHECK(md.find("| stuck | NoneKnown | no known compatible version | please provide a compatible version |") !=
          std::string::npos);
    auto j = to_json(report);
    CHECK(j["entries"]["dev"]["source_ref"] == "aaa");
    CHECK(j["entries"]["ready"]["version"] == "2.0");

    CHECK_THROWS_AS(coordinate(repo, V("8.14"), reference), std::invalid_argument);
}

TEST_CASE("dev snapshot with a universal toolchain") {
    auto repo = RepoBuilder({"8.14", "8.15"}).add("p", "1.0", "=8.14").add("p", "1.1").dev("abc123").build();
    auto report = coordinate(repo, V("8.15"), Pick{V("8.14"), {{"p", V("1.0")}}, {}});
    CHECK(std::get<DevCompatible>(report.entries.at("p").status).source_ref == "abc123");
}

TEST_CASE("check_removals") {
    auto repo = RepoBuilder().add("keep", "1.0").add("gone", "1.0").add("retired", "1.0").deprecated().build();
    Release previous{parse_calendar_version("2022.01.0"),
                     {Pick{V("8.15"), {{"keep", V("1.0")}, {"gone", V("1.0")}, {"retired", V("1.0")}}, {}}},
                     std::nullopt};
    Release same = previous;
    same.version = parse_calendar_version("2022.06.0");
    same.predecessor = previous.version;
    CHECK(check_removals(previous, same, repo).empty());

    Release dropped = same;
    dropped.picks[0].selected.erase("retired");
    CHECK(check_removals(previous, dropped, repo).empty());

    dropped.picks[0].selected.erase("gone");
    auto v = check_removals(previous, dropped, repo);
    REQUIRE(v.size() == 1);
    CHECK(v[0].package == "gone");

    Release orphan = same;
    orphan.predecessor.reset();
    CHECK_THROWS_AS(check_removals(previous, orphan, repo), std::invalid_argument);
}

}  // TEST_SUITE
