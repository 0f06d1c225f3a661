// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include "random_release.hpp"
#include "random_repo.hpp"
#include "random_text.hpp"
#include "temp_dir.hpp"

#include <pickforge/buildrun.hpp>
#include <pickforge/index.hpp>
#include <pickforge/policy.hpp>
#include <pickforge/release.hpp>
#include <pickforge/solver.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace pickforge;
using namespace pickforge::testing;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kFixtures = PICKFORGE_FIXTURES;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why) {
        if (!ok && pass) {
            pass = false;
            detail = why;
        }
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_seconds(double s) {
    std::ostringstream o;
    o.precision(3);
    o << std::fixed << s << "s";
    return o.str();
}

json expected() {
    std::ifstream in(kFixtures + "/expected.json");
    return json::parse(in);
}

Pick full_pick(const Repository& repo, const Version& toolchain) {
    SelectionRequest req;
    req.toolchain = toolchain;
    for (const auto& [name, _] : repo.packages) req.optional.insert(name);
    auto res = resolve_pick(repo, req);
    if (!std::holds_alternative<Pick>(res)) throw std::runtime_error("fixture pick is unsat at " + toolchain.str());
    return std::get<Pick>(res);
}

// Shared by criteria 1 and 2.
struct Corpus {
    static constexpr int kSize = 1200;
    std::vector<RandomInstance> instances;
    std::vector<Resolution> solved;
    double solve_seconds = 0;
    double oracle_seconds = 0;
    int mismatches = 0;
    int first_mismatch = -1;
};

Corpus run_corpus() {
    Corpus c;
    std::mt19937_64 rng(0x5eed'2022'0100ULL);
    for (int i = 0; i < Corpus::kSize; ++i) c.instances.push_back(random_instance(rng));
    for (std::size_t i = 0; i < c.instances.size(); ++i) {
        const auto& inst = c.instances[i];
        auto t0 = Clock::now();
        auto got = resolve_pick(inst.repo, inst.request);
        c.solve_seconds += seconds_since(t0);
        t0 = Clock::now();
        auto want = enumerate_best(inst.repo, inst.request);
        c.oracle_seconds += seconds_since(t0);
        if (!(got == want)) {
            ++c.mismatches;
            if (c.first_mismatch < 0) c.first_mismatch = static_cast<int>(i);
        }
        c.solved.push_back(std::move(got));
    }
    return c;
}

Outcome criterion1(const Corpus& c) {
    Outcome o;
    const double total = c.solve_seconds + c.oracle_seconds;
    o.require(c.mismatches == 0, std::to_string(c.mismatches) + " mismatches, first at instance " +
                                     std::to_string(c.first_mismatch));
    o.require(total < 60.0, "took " + fmt_seconds(total));
    if (o.pass) {
        o.detail = std::to_string(c.instances.size()) + " instances equal, solver " + fmt_seconds(c.solve_seconds) +
                   " + oracle " + fmt_seconds(c.oracle_seconds);
    }
    return o;
}

Outcome criterion2(const Corpus& c) {
    Outcome o;
    int picks = 0, unsat = 0, removals = 0;
    for (std::size_t i = 0; i < c.instances.size(); ++i) {
        const auto& inst = c.instances[i];
        if (const auto* p = std::get_if<Pick>(&c.solved[i])) {
            ++picks;
            o.require(verify_pick(inst.repo, *p).empty(), "instance " + std::to_string(i) + ": pick fails verify_pick");
            continue;
        }
        ++unsat;
        const auto& report = std::get<UnsatReport>(c.solved[i]);
        o.require(!report.culprits.empty(), "instance " + std::to_string(i) + ": empty culprit set");
        // The culprits alone are unsatisfiable, and dropping any one of them is
        // not. Overrides stay in force: they pin versions even for packages
        // that are only pulled in as dependencies.
        auto only = [&](const std::vector<std::string>& names) {
            SelectionRequest req = inst.request;
            req.mandatory = {names.begin(), names.end()};
            req.optional.clear();
            for (const auto& [n, _] : req.overrides)
                if (!req.mandatory.count(n)) req.optional.insert(n);
            return std::holds_alternative<Pick>(enumerate_best(inst.repo, req));
        };
        o.require(!only(report.culprits), "instance " + std::to_string(i) + ": culprit set is satisfiable");
        for (std::size_t k = 0; k < report.culprits.size(); ++k) {
            auto rest = report.culprits;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
            ++removals;
            o.require(only(rest), "instance " + std::to_string(i) + ": culprit set not minimal without " +
                                      report.culprits[k]);
        }
    }
    o.require(unsat > 0, "corpus has no unsat instances");
    if (o.pass) {
        o.detail = std::to_string(picks) + " picks verified, " + std::to_string(unsat) + " culprit sets minimal (" +
                   std::to_string(removals) + " removal checks)";
    }
    return o;
}

Outcome criterion3(Release& release_out) {
    Outcome o;
    auto t0 = Clock::now();
    const Repository repo = load_repository(kFixtures + "/platform");
    std::vector<Pick> picks;
    for (const auto& tc : repo.toolchains) picks.push_back(full_pick(repo, tc));
    const double solve = seconds_since(t0);

    const auto version = parse_calendar_version("2022.01.0");
    const auto first = assemble_release(version, picks, std::nullopt, repo);
    const auto second = assemble_release(version, picks, std::nullopt, repo);
    const std::string a = write_lockfile(first.release);
    const std::string b = write_lockfile(second.release);

    const json exp = expected()["platform"];
    o.require(repo.toolchains.size() == 4, "fixture has " + std::to_string(repo.toolchains.size()) + " toolchains");
    o.require(repo.packages.size() == 50, "fixture has " + std::to_string(repo.packages.size()) + " packages");
    o.require(first.release.picks.size() == 4, "release has " + std::to_string(first.release.picks.size()) + " picks");
    o.require(first.warnings.empty(), "unexpected warnings");
    for (const auto& p : first.release.picks) {
        const auto want = exp["pick_sizes"][p.toolchain.str()].get<std::size_t>();
        o.require(p.selected.size() == want, "pick " + p.toolchain.str() + " has " +
                                                 std::to_string(p.selected.size()) + " packages, expected " +
                                                 std::to_string(want));
    }
    o.require(solve < 5.0, "picks took " + fmt_seconds(solve));
    o.require(a == b, "lockfile bytes differ between runs");
    o.require(read_lockfile(a) == first.release, "lockfile does not read back");
    if (o.pass) {
        o.detail = "4 toolchains, 50 packages, picks of 24/34/44/49 in " + fmt_seconds(solve) +
                   "; lockfile 2022.01.0 byte-identical (" + std::to_string(a.size()) + " bytes)";
    }
    release_out = first.release;
    return o;
}

Outcome criterion4(const Release& release) {
    Outcome o;
    const auto report = upgrade_path(release, Version::parse("8.13"), Version::parse("8.15"));
    o.require(report.steps.size() == 2, std::to_string(report.steps.size()) + " steps");
    o.require(report.monotone, "not monotone");
    std::string counts;
    for (const auto& s : report.steps) {
        o.require(s.diff.removed.empty(), "step " + s.from.str() + "->" + s.to.str() + " removes packages");
        const auto before = release.pick_for(s.from)->selected.size();
        const auto after = release.pick_for(s.to)->selected.size();
        o.require(before <= after, "package count drops at " + s.to.str());
        counts += (counts.empty() ? std::to_string(before) : "") + " -> " + std::to_string(after);
    }
    if (report.steps.size() == 2) {
        o.require(report.steps[0].from.str() == "8.13" && report.steps[0].to.str() == "8.14" &&
                      report.steps[1].to.str() == "8.15",
                  "steps are not 8.13->8.14->8.15");
    }
    if (o.pass) o.detail = "8.13 -> 8.14 -> 8.15, monotone, package counts " + counts;
    return o;
}

Outcome criterion5() {
    Outcome o;
    const Repository repo = load_repository(kFixtures + "/platform");
    std::vector<std::string> flagged;
    for (const auto& [name, _] : repo.packages) {
        if (!check_succession(repo, name).ok()) flagged.push_back(name);
    }
    const auto want = expected()["platform"]["succession_violations"].get<std::vector<std::string>>();
    o.require(want.size() == 3, "expected.json lists " + std::to_string(want.size()) + " planted violations");
    std::string got;
    for (const auto& n : flagged) got += (got.empty() ? "" : ", ") + n;
    o.require(flagged == want, "flagged {" + got + "}");
    if (o.pass) o.detail = "flagged exactly {" + got + "} of " + std::to_string(repo.packages.size()) + " packages";
    return o;
}

Outcome criterion6() {
    Outcome o;
    const Repository repo = load_repository(kFixtures + "/platform-rc");
    const json exp = expected()["platform-rc"];
    const Version rc = Version::parse(exp["rc"].get<std::string>());
    const Pick reference = full_pick(repo, Version::parse(exp["reference_toolchain"].get<std::string>()));
    const auto report = coordinate(repo, rc, reference);

    std::map<std::string, std::string> got;
    std::map<std::string, int> tally;
    for (const auto& [name, entry] : report.entries) {
        got[name] = std::string(status_name(entry.status));
        ++tally[got[name]];
        if (const auto* dev = std::get_if<DevCompatible>(&entry.status)) {
            o.require(exp["dev_source_refs"].value(name, "") == dev->source_ref, name + ": source_ref " + dev->source_ref);
        }
    }
    const auto want = exp["coordination"].get<std::map<std::string, std::string>>();
    for (const auto& [name, status] : want) {
        auto it = got.find(name);
        o.require(it != got.end(), name + " missing from report");
        if (it != got.end()) o.require(it->second == status, name + " classified " + it->second + ", expected " + status);
    }
    o.require(got.size() == want.size(), "report has " + std::to_string(got.size()) + " entries, expected " +
                                             std::to_string(want.size()));
    o.require(report.entries.size() == reference.selected.size(), "report does not cover the reference pick");
    const std::string md = render_markdown(report);
    o.require(md == render_markdown(coordinate(repo, rc, reference)), "Markdown differs between runs");
    if (o.pass) {
        o.detail = std::to_string(got.size()) + " entries: " + std::to_string(tally["AlreadyCompatible"]) +
                   " AlreadyCompatible, " + std::to_string(tally["DevCompatible"]) + " DevCompatible, " +
                   std::to_string(tally["NoneKnown"]) + " NoneKnown; Markdown byte-identical";
    }
    return o;
}

Outcome criterion7() {
    Outcome o;
    const Repository repo = load_repository(kFixtures + "/smoke");
    const json exp = expected()["smoke"];
    const Pick pick = full_pick(repo, Version::parse(exp["toolchain"].get<std::string>()));
    const auto plan = install_plan(repo, pick);

    auto t0 = Clock::now();
    TempDir one("pickforge-smoke1"), four("pickforge-smoke4");
    const auto r1 = run_plan(plan, one.path(), 1);
    const auto r4 = run_plan(plan, four.path(), 4);
    const double elapsed = seconds_since(t0);

    auto names_with = [](const SmokeReport& r, StepStatus s) {
        std::vector<std::string> out;
        for (const auto& step : r.steps)
            if (step.status == s) out.push_back(step.name);
        std::sort(out.begin(), out.end());
        return out;
    };
    for (const auto* r : {&r1, &r4}) {
        const auto failed = names_with(*r, StepStatus::BuildFailed);
        o.require(failed.size() == 1, std::to_string(failed.size()) + " BuildFailed steps");
        o.require(failed == exp["build_failed"].get<std::vector<std::string>>(), "wrong BuildFailed step");
        o.require(names_with(*r, StepStatus::Skipped) == exp["skipped"].get<std::vector<std::string>>(),
                  "Skipped set differs from the failed step's transitive dependents");
        o.require(names_with(*r, StepStatus::Passed) == exp["passed"].get<std::vector<std::string>>(),
                  "Passed set differs");
        o.require(!r->passed(), "overall result is pass");
    }
    o.require(r1.steps == r4.steps, "reports differ between --jobs 1 and --jobs 4");
    o.require(elapsed < 10.0, "took " + fmt_seconds(elapsed));
    if (o.pass) {
        o.detail = "1 BuildFailed, " + std::to_string(names_with(r1, StepStatus::Skipped).size()) +
                   " Skipped, overall fail; jobs 1 and 4 identical; " + fmt_seconds(elapsed);
    }
    return o;
}

Outcome criterion8() {
    Outcome o;
    constexpr int kCases = 1000;
    std::mt19937_64 rng(0xacce97);
    int lock_ok = 0, idem_ok = 0, ver_ok = 0, con_ok = 0, cal_ok = 0;
    for (int i = 0; i < kCases; ++i) {
        const Release rel = random_release(rng);
        const std::string bytes = write_lockfile(rel);
        const Release back = read_lockfile(bytes);
        lock_ok += back == rel;
        idem_ok += write_lockfile(back) == bytes && write_lockfile(rel) == bytes;

        const auto v = random_version_text(rng);
        const Version pv = Version::parse(v.text);
        ver_ok += pv.str() == v.canonical && Version::parse(pv.str()) == pv && Version::parse(pv.str()).str() == pv.str();

        const auto c = random_constraint_text(rng);
        const Constraint pc = Constraint::parse(c.text);
        con_ok += pc.str() == c.canonical && Constraint::parse(pc.str()) == pc;

        const auto cal = random_calendar_text(rng);
        cal_ok += CalendarVersion::parse(cal.text).str() == cal.canonical;
    }
    auto check = [&](int n, const char* what) {
        o.require(n == kCases, std::string(what) + ": " + std::to_string(kCases - n) + " failures");
    };
    check(lock_ok, "lockfile read(write(r)) == r");
    check(idem_ok, "lockfile write byte idempotence");
    check(ver_ok, "version round-trip");
    check(con_ok, "constraint round-trip");
    check(cal_ok, "calendar version round-trip");
    if (o.pass) {
        o.detail = std::to_string(kCases) +
                   " cases each: lockfile identity, write idempotence, version, constraint and calendar round-trips";
    }
    return o;
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int n, const char* name, const auto& run) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  AC" << n << " " << name << ": " << o.detail << std::endl;
    };

    std::optional<Corpus> corpus;
    try {
        corpus = run_corpus();
    } catch (const std::exception& e) {
        std::cerr << "corpus generation failed: " << e.what() << "\n";
    }
    auto need_corpus = [&]() -> const Corpus& {
        if (!corpus) throw std::runtime_error("no corpus");
        return *corpus;
    };
    report(1, "solver-oracle equivalence", [&] { return criterion1(need_corpus()); });
    report(2, "soundness and culprit minimality", [&] { return criterion2(need_corpus()); });
    Release platform;
    report(3, "platform fixture picks and lockfile", [&] { return criterion3(platform); });
    report(4, "upgrade path 8.13 -> 8.15", [&] { return criterion4(platform); });
    report(5, "succession policy", [] { return criterion5(); });
    report(6, "coordination report at rc 8.15", [] { return criterion6(); });
    report(7, "smoke kit", [] { return criterion7(); });
    report(8, "round-trip and determinism", [] { return criterion8(); });
    std::cout << (failures ? "FAILED " : "ALL PASSED ") << 8 - failures << "/8" << std::endl;
    return failures;
}
