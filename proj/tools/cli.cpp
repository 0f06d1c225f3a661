// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <pickforge/buildrun.hpp>
#include <pickforge/calendar_version.hpp>
#include <pickforge/canonical_json.hpp>
#include <pickforge/index.hpp>
#include <pickforge/policy.hpp>
#include <pickforge/release.hpp>
#include <pickforge/solver.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

namespace pickforge::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string index;
    std::string format = "text";
    bool strict_removals = false;
    std::string cache_dir;

    bool json() const { return format == "json"; }
};

struct SelectionFlags {
    std::vector<std::string> mandatory;
    std::vector<std::string> optional;
    std::vector<std::string> overrides;
    bool include_dev = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--mandatory", mandatory, "Packages that must be selected")->delimiter(',');
        cmd->add_option("--optional", optional, "Packages to include when possible (default: all others)")
            ->delimiter(',');
        cmd->add_option("--override", overrides, "Force a version, as name=version")->delimiter(',');
        cmd->add_flag("--include-dev", include_dev, "Allow development snapshots");
    }
};

Version version_flag(const std::string& flag, const std::string& text) {
    try {
        return Version::parse(text);
    } catch (const ParseError& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

Repository load_index(const Globals& g) {
    if (g.index.empty()) throw UsageError("--index is required for this command");
    LoadOptions options;
    if (!g.cache_dir.empty()) options.cache_dir = g.cache_dir;
    return load_repository(g.index, options);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ReleaseError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Release load_lockfile(const std::string& path) {
    try {
        return read_lockfile(read_text(path));
    } catch (const ReleaseError& e) {
        throw ReleaseError(path + ": " + e.what());
    }
}

const Pick& pick_from(const Release& release, const Version& toolchain, const std::string& path) {
    const Pick* pick = release.pick_for(toolchain);
    if (!pick) throw ReleaseError(path + ": no pick for toolchain " + toolchain.str());
    return *pick;
}

SelectionRequest make_request(const Repository& repo, const SelectionFlags& flags, const Version& toolchain) {
    SelectionRequest req;
    req.toolchain = toolchain;
    req.include_dev = flags.include_dev;
    req.mandatory.insert(flags.mandatory.begin(), flags.mandatory.end());
    req.optional.insert(flags.optional.begin(), flags.optional.end());
    if (flags.mandatory.empty() && flags.optional.empty()) {
        for (const auto& [name, _] : repo.packages) req.optional.insert(name);
    }
    for (const auto& o : flags.overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--override expects name=version, got '" + o + "'");
        req.overrides[o.substr(0, eq)] = version_flag("--override", o.substr(eq + 1));
    }
    return req;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

json unsat_to_json(const UnsatReport& r) {
    return {{"unsat", true}, {"toolchain", r.toolchain.str()}, {"culprits", r.culprits}, {"narrative", r.narrative}};
}

void print_pick(std::ostream& out, const Pick& pick) {
    out << "pick for toolchain " << pick.toolchain.str() << "\n";
    out << "selected (" << pick.selected.size() << "):\n";
    for (const auto& [name, v] : pick.selected) out << "  " << name << " " << v.str() << "\n";
    if (!pick.excluded.empty()) {
        out << "excluded (" << pick.excluded.size() << "):\n";
        for (const auto& [name, reason] : pick.excluded) out << "  " << name << ": " << reason << "\n";
    }
}

void print_unsat(std::ostream& out, const UnsatReport& r) {
    out << "no pick at toolchain " << r.toolchain.str() << "\n";
    out << "culprits: " << join(r.culprits, ", ") << "\n";
    for (const auto& line : r.narrative) out << "  " << line << "\n";
}

void print_diff(std::ostream& out, const PickDiff& d, const std::string& indent = "") {
    for (const auto& n : d.added) out << indent << "+ " << n << "\n";
    for (const auto& n : d.removed) out << indent << "- " << n << "\n";
    for (const auto& [n, c] : d.upgraded) out << indent << "^ " << n << " " << c.from.str() << " -> " << c.to.str() << "\n";
    for (const auto& [n, c] : d.downgraded) out << indent << "v " << n << " " << c.from.str() << " -> " << c.to.str() << "\n";
    out << indent << "= " << d.unchanged.size() << " unchanged\n";
}

// ---- subcommands ----------------------------------------------------------

struct ResolveCmd {
    std::string toolchain;
    SelectionFlags selection;

    int run(const Globals& g, std::ostream& out) const {
        const Repository repo = load_index(g);
        const auto req = make_request(repo, selection, version_flag("--toolchain", toolchain));
        const auto result = resolve_pick(repo, req);
        if (const auto* pick = std::get_if<Pick>(&result)) {
            if (g.json()) out << canonical_dump(pick_to_json(*pick));
            else print_pick(out, *pick);
            return kOk;
        }
        const auto& unsat = std::get<UnsatReport>(result);
        if (g.json()) out << canonical_dump(unsat_to_json(unsat));
        else print_unsat(out, unsat);
        return kUnsat;
    }
};

struct ReleaseCmd {
    std::string version;
    std::vector<std::string> toolchains;
    SelectionFlags selection;
    std::string previous;
    std::string output;
    bool require_prior_picks = false;

    int run(const Globals& g, std::ostream& out, std::ostream& err) const {
        CalendarVersion cal;
        try {
            cal = CalendarVersion::parse(version);
        } catch (const ParseError& e) {
            throw UsageError(std::string("--version: ") + e.what());
        }
        const Repository repo = load_index(g);
        std::vector<Version> targets;
        for (const auto& t : toolchains) targets.push_back(version_flag("--toolchain", t));
        if (targets.empty()) targets = repo.toolchains;

        std::vector<Pick> picks;
        for (const auto& t : targets) {
            const auto result = resolve_pick(repo, make_request(repo, selection, t));
            if (const auto* unsat = std::get_if<UnsatReport>(&result)) {
                print_unsat(err, *unsat);
                return kUnsat;
            }
            picks.push_back(std::get<Pick>(result));
        }
        std::optional<Release> prev;
        if (!previous.empty()) prev = load_lockfile(previous);

        AssembleOptions options;
        options.require_prior_picks = require_prior_picks;
        const auto assembled = assemble_release(cal, std::move(picks), prev, repo, options);
        for (const auto& w : assembled.warnings) err << "warning: " << w.message << "\n";

        if (prev && g.strict_removals) {
            const auto violations = check_removals(*prev, assembled.release, repo);
            for (const auto& v : violations) err << "error: " << v.message << "\n";
            if (!violations.empty()) return kFailure;
        }
        const std::string bytes = write_lockfile(assembled.release);
        if (output.empty()) {
            out << bytes;
        } else {
            std::ofstream f(output, std::ios::binary | std::ios::trunc);
            f << bytes;
            if (!f) throw ReleaseError("cannot write " + output);
            err << "wrote " << output << " (" << assembled.release.picks.size() << " picks)\n";
        }
        return kOk;
    }
};

struct DiffCmd {
    std::string from_lock, to_lock, from_toolchain, to_toolchain;

    int run(const Globals& g, std::ostream& out) const {
        const Release a = load_lockfile(from_lock);
        const std::string to_path = to_lock.empty() ? from_lock : to_lock;
        const Release b = to_lock.empty() ? a : load_lockfile(to_lock);
        const auto diff = diff_picks(pick_from(a, version_flag("--from-toolchain", from_toolchain), from_lock),
                                     pick_from(b, version_flag("--to-toolchain", to_toolchain), to_path));
        if (g.json()) out << canonical_dump(diff_to_json(diff));
        else print_diff(out, diff);
        return kOk;
    }
};

struct UpgradeCmd {
    std::string lockfile, from, to;

    int run(const Globals& g, std::ostream& out) const {
        const Release rel = load_lockfile(lockfile);
        const auto report = upgrade_path(rel, version_flag("--from", from), version_flag("--to", to));
        if (g.json()) {
            out << canonical_dump(upgrade_to_json(report));
        } else {
            for (const auto& s : report.steps) {
                out << s.from.str() << " -> " << s.to.str() << "\n";
                print_diff(out, s.diff, "  ");
            }
            out << (report.monotone ? "monotone" : "NOT monotone: packages removed along the path") << "\n";
        }
        return g.strict_removals && !report.monotone ? kFailure : kOk;
    }
};

struct CoordinateCmd {
    std::string rc, reference, toolchain;

    int run(const Globals& g, std::ostream& out) const {
        const Version candidate = version_flag("--rc", rc);
        const Repository repo = load_index(g);
        const Release rel = load_lockfile(reference);
        const Pick* pick = nullptr;
        if (!toolchain.empty()) {
            pick = &pick_from(rel, version_flag("--toolchain", toolchain), reference);
        } else {
            for (const auto& p : rel.picks) {
                if (p.toolchain < candidate) pick = &p;
            }
            if (!pick) throw ReleaseError(reference + ": no pick below release candidate " + candidate.str());
        }
        const auto report = coordinate(repo, candidate, *pick);
        if (g.json()) out << canonical_dump(to_json(report));
        else out << render_markdown(report);
        return kOk;
    }
};

struct PolicyCmd {
    std::vector<std::string> packages;
    std::string previous, candidate;

    int run(const Globals& g, std::ostream& out, std::ostream& err) const {
        const Repository repo = load_index(g);
        std::vector<std::string> names = packages;
        if (names.empty()) {
            for (const auto& [name, _] : repo.packages) names.push_back(name);
        }
        bool failed = false;
        json succession = json::array();
        for (const auto& name : names) {
            const auto report = check_succession(repo, name);
            failed = failed || !report.ok();
            if (g.json()) {
                succession.push_back(to_json(report));
                continue;
            }
            out << (report.ok() ? "ok        " : "VIOLATION ") << name << "\n";
            for (const auto& p : report.pairs) {
                out << "  " << p.older.str() << " -> " << p.newer.str() << ": "
                    << (p.witness ? p.witness->str() : std::string(p.violated() ? "NONE" : "not present on both"))
                    << "\n";
            }
        }

        json removals = json::array();
        if (!previous.empty() || !candidate.empty()) {
            if (previous.empty() || candidate.empty()) throw UsageError("--previous and --candidate go together");
            const auto violations = check_removals(load_lockfile(previous), load_lockfile(candidate), repo);
            for (const auto& v : violations) {
                removals.push_back({{"package", v.package}, {"message", v.message}});
                if (!g.json()) (g.strict_removals ? out : err) << (g.strict_removals ? "VIOLATION " : "warning: ") << v.message << "\n";
            }
            failed = failed || (g.strict_removals && !violations.empty());
        }
        if (g.json()) out << canonical_dump({{"succession", succession}, {"removals", removals}, {"ok", !failed}});
        return failed ? kFailure : kOk;
    }
};

struct SmokeCmd {
    std::string lockfile, toolchain, sandbox;
    int jobs = 1;

    int run(const Globals& g, std::ostream& out) const {
        const Repository repo = load_index(g);
        const Release rel = load_lockfile(lockfile);
        const auto plan = install_plan(repo, pick_from(rel, version_flag("--toolchain", toolchain), lockfile));
        const auto report = run_plan(plan, sandbox, jobs);
        if (g.json()) out << canonical_dump(to_json(report));
        else out << render_text(report);
        return report.passed() ? kOk : kFailure;
    }
};

struct ScriptCmd {
    std::string lockfile, toolchain;

    int run(const Globals& g, std::ostream& out) const {
        const Repository repo = load_index(g);
        const Release rel = load_lockfile(lockfile);
        out << emit_install_script(install_plan(repo, pick_from(rel, version_flag("--toolchain", toolchain), lockfile)));
        return kOk;
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"pickforge: curate package picks, releases and smoke tests"};
    app.name("pickforge");
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--index", g.index, "Repository directory or http:// URL");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--strict-removals", g.strict_removals, "Treat removals without deprecation as errors");
    app.add_option("--cache-dir", g.cache_dir, "Cache for HTTP repositories (default: $PICKFORGE_CACHE)");

    ResolveCmd resolve;
    auto* c_resolve = app.add_subcommand("resolve", "Resolve one package pick");
    c_resolve->add_option("--toolchain", resolve.toolchain)->required();
    resolve.selection.attach(c_resolve);

    ReleaseCmd release;
    auto* c_release = app.add_subcommand("release", "Resolve a pick per toolchain and write a lockfile");
    c_release->add_option("--version", release.version, "Calendar version YYYY.MM.P")->required();
    c_release->add_option("--toolchain", release.toolchains, "Toolchains to pick (default: all)")->delimiter(',');
    release.selection.attach(c_release);
    c_release->add_option("--previous", release.previous, "Lockfile of the preceding release");
    c_release->add_option("--output", release.output, "Lockfile to write (default: stdout)");
    c_release->add_flag("--require-prior-picks", release.require_prior_picks,
                        "Warn when a toolchain of the previous release is dropped");

    DiffCmd diff;
    auto* c_diff = app.add_subcommand("diff", "Compare two picks");
    c_diff->add_option("--from-lock", diff.from_lock)->required();
    c_diff->add_option("--from-toolchain", diff.from_toolchain)->required();
    c_diff->add_option("--to-lock", diff.to_lock, "Defaults to --from-lock");
    c_diff->add_option("--to-toolchain", diff.to_toolchain)->required();

    UpgradeCmd upgrade;
    auto* c_upgrade = app.add_subcommand("upgrade", "Step through the picks between two toolchains");
    c_upgrade->add_option("--lockfile", upgrade.lockfile)->required();
    c_upgrade->add_option("--from", upgrade.from)->required();
    c_upgrade->add_option("--to", upgrade.to)->required();

    CoordinateCmd coord;
    auto* c_coord = app.add_subcommand("coordinate", "Report maintainer actions for a toolchain release candidate");
    c_coord->add_option("--rc", coord.rc)->required();
    c_coord->add_option("--reference", coord.reference, "Lockfile holding the reference pick")->required();
    c_coord->add_option("--toolchain", coord.toolchain, "Reference pick (default: newest below --rc)");

    PolicyCmd policy;
    auto* c_policy = app.add_subcommand("policy", "Check succession and removal rules");
    c_policy->add_option("--package", policy.packages, "Packages to check (default: all)")->delimiter(',');
    c_policy->add_option("--previous", policy.previous, "Previous release lockfile");
    c_policy->add_option("--candidate", policy.candidate, "Candidate release lockfile");

    SmokeCmd smoke;
    auto* c_smoke = app.add_subcommand("smoke", "Build and smoke-test a pick in a sandbox");
    c_smoke->add_option("--lockfile", smoke.lockfile)->required();
    c_smoke->add_option("--toolchain", smoke.toolchain)->required();
    c_smoke->add_option("--sandbox", smoke.sandbox, "Empty directory to build in")->required();
    c_smoke->add_option("--jobs", smoke.jobs, "Parallel steps")->check(CLI::PositiveNumber);

    ScriptCmd script;
    auto* c_script = app.add_subcommand("script", "Print a POSIX install script for a pick");
    c_script->add_option("--lockfile", script.lockfile)->required();
    c_script->add_option("--toolchain", script.toolchain)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (c_resolve->parsed()) return resolve.run(g, out);
        if (c_release->parsed()) return release.run(g, out, err);
        if (c_diff->parsed()) return diff.run(g, out);
        if (c_upgrade->parsed()) return upgrade.run(g, out);
        if (c_coord->parsed()) return coord.run(g, out);
        if (c_policy->parsed()) return policy.run(g, out, err);
        if (c_smoke->parsed()) return smoke.run(g, out);
        if (c_script->parsed()) return script.run(g, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kUsage;
    } catch (const std::exception& e) {
        // repository, lockfile, request, sandbox and plan errors
        err << "error: " << e.what() << "\n";
        return kIoError;
    }
    return kUsage;
}

}  // namespace pickforge::cli
