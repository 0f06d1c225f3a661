// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <pickforge/policy.hpp>

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pickforge {

using nlohmann::json;

bool SuccessionReport::ok() const {
    return std::none_of(pairs.begin(), pairs.end(), [](const SuccessionPair& p) { return p.violated(); });
}

SuccessionReport check_succession(const Repository& repo, const std::string& name) {
    auto it = repo.packages.find(name);
    if (it == repo.packages.end()) throw UnknownPackageError(name);
    SuccessionReport report{name, {}};
    for (std::size_t i = 1; i < repo.toolchains.size(); ++i) {
        SuccessionPair pair{repo.toolchains[i - 1], repo.toolchains[i], std::nullopt, false};
        bool older = false, newer = false;
        for (auto v = it->second.rbegin(); v != it->second.rend(); ++v) {
            const PackageManifest& m = v->second;
            if (m.dev) continue;
            const bool a = satisfies(pair.older, m.toolchain);
            const bool b = satisfies(pair.newer, m.toolchain);
            older = older || a;
            newer = newer || b;
            if (a && b && !pair.witness) pair.witness = m.version;
        }
        pair.present_on_both = older && newer;
        report.pairs.push_back(std::move(pair));
    }
    return report;
}

std::string_view status_name(const CompatStatus& status) noexcept {
    switch (status.index()) {
        case 0: return "AlreadyCompatible";
        case 1: return "DevCompatible";
        default: return "NoneKnown";
    }
}

CoordinationReport coordinate(const Repository& repo, const Version& rc, const Pick& reference) {
    if (rc == reference.toolchain) {
        throw std::invalid_argument("release candidate " + rc.str() + " is the reference pick's own toolchain");
    }
    CoordinationReport report{rc, reference.toolchain, {}};
    for (const auto& [name, version] : reference.selected) {
        CoordinationEntry entry{NoneKnown{}, "please provide a compatible version", ""};
        if (const auto* m = repo.find(name, version)) entry.maintainer = m->maintainer;

        const auto released = compatible_versions(repo, name, rc, false);
        if (!released.empty()) {
            entry.status = AlreadyCompatible{released.front()};
            entry.action = "no action needed";
        } else {
            const PackageManifest* best = nullptr;
            for (const auto& [v, m] : repo.packages.at(name)) {
                if (!m.dev || !m.source_ref || !satisfies(rc, m.toolchain)) continue;
                // newest version wins; equal versions fall back to the larger source_ref
                if (!best || best->version < m.version || (best->version == m.version && *best->source_ref < *m.source_ref)) {
                    best = &m;
                }
            }
            if (best) {
                entry.status = DevCompatible{*best->source_ref, best->version};
                entry.action = "please cut a release from " + *best->source_ref;
            }
        }
        report.entries.emplace(name, std::move(entry));
    }
    return report;
}

namespace {

std::string status_detail(const CompatStatus& status) {
    if (const auto* a = std::get_if<AlreadyCompatible>(&status)) return "version " + a->version.str();
    if (const auto* d = std::get_if<DevCompatible>(&status)) {
        return "development snapshot " + d->version.str() + " at " + d->source_ref;
    }
    return "no known compatible version";
}

}  // namespace

std::string render_markdown(const CoordinationReport& report) {
    std::map<std::string, std::vector<const std::string*>> by_maintainer;
    for (const auto& [name, entry] : report.entries) by_maintainer[entry.maintainer].push_back(&name);

    std::ostringstream out;
    out << "# Compatibility with toolchain " << report.rc.str() << "\n\n";
    out << "Reference pick: toolchain " << report.reference_toolchain.str() << ", " << report.entries.size()
        << " packages.\n";
    for (const auto& [maintainer, names] : by_maintainer) {
        out << "\n## " << (maintainer.empty() ? "(no maintainer)" : maintainer) << "\n\n";
        out << "| package | status | detail | action |\n";
        out << "|---|---|---|---|\n";
        for (const auto* name : names) {
            const auto& e = report.entries.at(*name);
            out << "| " << *name << " | " << status_name(e.status) << " | " << status_detail(e.status) << " | "
                << e.action << " |\n";
        }
    }
    return out.str();
}

json to_json(const CoordinationReport& report) {
    json entries = json::object();
    for (const auto& [name, e] : report.entries) {
        json item = {{"status", std::string(status_name(e.status))}, {"action", e.action}, {"maintainer", e.maintainer}};
        if (const auto* a = std::get_if<AlreadyCompatible>(&e.status)) item["version"] = a->version.str();
        if (const auto* d = std::get_if<DevCompatible>(&e.status)) {
            item["version"] = d->version.str();
            item["source_ref"] = d->source_ref;
        }
        entries[name] = std::move(item);
    }
    return {{"rc", report.rc.str()}, {"reference_toolchain", report.reference_toolchain.str()}, {"entries", entries}};
}

json to_json(const SuccessionReport& report) {
    json pairs = json::array();
    for (const auto& p : report.pairs) {
        pairs.push_back({{"older", p.older.str()},
                         {"newer", p.newer.str()},
                         {"witness", p.witness ? json(p.witness->str()) : json(nullptr)},
                         {"violated", p.violated()}});
    }
    return {{"package", report.package}, {"ok", report.ok()}, {"pairs", pairs}};
}

std::vector<RemovalViolation> check_removals(const Release& previous, const Release& candidate,
                                             const Repository& repo) {
    if (!candidate.predecessor || *candidate.predecessor != previous.version) {
        throw std::invalid_argument("release " + candidate.version.str() + " does not name " + previous.version.str() +
                                    " as its predecessor");
    }
    std::vector<RemovalViolation> out;
    for (const auto& name : dropped_without_deprecation(previous, candidate, repo)) {
        out.push_back({name, name + " removed in " + candidate.version.str() + " without deprecation in " +
                                 previous.version.str()});
    }
    return out;
}

}  // namespace pickforge
