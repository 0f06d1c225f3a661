// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <pickforge/solver.hpp>

#include <algorithm>

namespace pickforge {

namespace {

// Versions the request allows for `name`, newest first.
std::vector<const PackageManifest*> candidates(const Repository& repo, const SelectionRequest& req,
                                               const std::string& name) {
    std::vector<const PackageManifest*> out;
    if (auto pin = req.overrides.find(name); pin != req.overrides.end()) {
        if (const auto* m = repo.find(name, pin->second)) out.push_back(m);
        return out;
    }
    const auto& versions = repo.packages.at(name);
    for (auto it = versions.rbegin(); it != versions.rend(); ++it) {
        if ((req.include_dev || !it->second.dev) && satisfies(req.toolchain, it->second.toolchain)) {
            out.push_back(&it->second);
        }
    }
    return out;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

}  // namespace

SearchSpaceTooLarge::SearchSpaceTooLarge(std::uint64_t space, std::uint64_t limit)
    : SolveError("assignment space " + std::to_string(space) + " exceeds the enumeration limit " +
                 std::to_string(limit)),
      space_(space) {}

std::string_view to_string(ViolationKind kind) noexcept {
    switch (kind) {
        case ViolationKind::UnknownSelection: return "UnknownSelection";
        case ViolationKind::SelectedAndExcluded: return "SelectedAndExcluded";
        case ViolationKind::ToolchainViolation: return "ToolchainViolation";
        case ViolationKind::DependencyViolation: return "DependencyViolation";
        case ViolationKind::MutualExclusion: return "MutualExclusion";
    }
    return "?";
}

namespace selection {

void validate_request(const Repository& repo, const SelectionRequest& req) {
    for (const auto* group : {&req.mandatory, &req.optional}) {
        for (const auto& name : *group) {
            if (!repo.contains(name)) throw SolveError("unknown package '" + name + "'");
        }
    }
    for (const auto& name : req.mandatory) {
        if (req.optional.count(name)) throw SolveError("package '" + name + "' is both mandatory and optional");
    }
    for (const auto& [name, version] : req.overrides) {
        if (!repo.contains(name)) throw SolveError("override names unknown package '" + name + "'");
        if (!req.mandatory.count(name) && !req.optional.count(name)) {
            throw SolveError("override target '" + name + "' is neither mandatory nor optional");
        }
        const auto* m = repo.find(name, version);
        if (!m) throw SolveError("override " + name + "=" + version.str() + " names a version that does not exist");
        if (!satisfies(req.toolchain, m->toolchain)) {
            throw SolveError("override " + name + "=" + version.str() + " requires toolchain " + m->toolchain.str() +
                             ", not " + req.toolchain.str());
        }
    }
}

std::string exclusion_reason(const Repository& repo, const SelectionRequest& req,
                             const std::map<std::string, Version>& selected, const std::string& name) {
    const auto options = candidates(repo, req, name);
    if (options.empty()) return "no version compatible with toolchain " + req.toolchain.str();

    const PackageManifest& newest = *options.front();
    for (const auto& c : newest.conflicts) {
        auto it = selected.find(c.name);
        if (it != selected.end() && satisfies(it->second, c.constraint)) return "conflict with " + c.name;
    }
    for (const auto& [other, version] : selected) {
        const auto* m = repo.find(other, version);
        if (!m) continue;
        for (const auto& c : m->conflicts) {
            if (c.name == name && satisfies(newest.version, c.constraint)) return "conflict with " + other;
        }
    }
    for (const auto& d : newest.depends) {
        auto it = selected.find(d.name);
        if (it != selected.end()) {
            if (!satisfies(it->second, d.constraint)) {
                return "requires " + d.name + " " + d.constraint.str() + ", but " + d.name + " " +
                       it->second.str() + " is selected";
            }
            continue;
        }
        const auto dep_options = candidates(repo, req, d.name);
        const bool any = std::any_of(dep_options.begin(), dep_options.end(),
                                     [&](const PackageManifest* m) { return satisfies(m->version, d.constraint); });
        if (!any) return "requires " + d.name + " " + d.constraint.str() + ", which is unavailable";
    }
    return "cannot be added without displacing a preferred selection";
}

UnsatReport unsat_report(const Repository& repo, const SelectionRequest& req, std::vector<std::string> culprits) {
    std::sort(culprits.begin(), culprits.end());
    UnsatReport report;
    report.toolchain = req.toolchain;
    report.narrative.push_back("mandatory packages {" + join(culprits, ", ") +
                               "} cannot be selected together at toolchain " + req.toolchain.str());
    for (const auto& name : culprits) {
        const auto options = candidates(repo, req, name);
        if (options.empty()) {
            report.narrative.push_back(name + ": no version compatible with toolchain " + req.toolchain.str());
            continue;
        }
        for (const auto* m : options) {
            const std::string id = name + " " + m->version.str();
            if (m->depends.empty() && m->conflicts.empty()) {
                report.narrative.push_back(id + " has no requirements");
            }
            for (const auto& d : m->depends) report.narrative.push_back(id + " requires " + d.name + " " + d.constraint.str());
            for (const auto& c : m->conflicts) {
                report.narrative.push_back(id + " conflicts with " + c.name + " " + c.constraint.str());
            }
        }
    }
    report.culprits = std::move(culprits);
    return report;
}

}  // namespace selection

std::vector<PickViolation> verify_pick(const Repository& repo, const Pick& pick) {
    std::vector<PickViolation> out;
    for (const auto& [name, _] : pick.excluded) {
        if (pick.selected.count(name)) {
            out.push_back({ViolationKind::SelectedAndExcluded, name, "", "", name + " is both selected and excluded"});
        }
    }
    for (const auto& [name, version] : pick.selected) {
        const auto* m = repo.find(name, version);
        if (!m) {
            out.push_back({ViolationKind::UnknownSelection, name, "", "",
                           name + " " + version.str() + " is not in the repository"});
            continue;
        }
        if (!satisfies(pick.toolchain, m->toolchain)) {
            out.push_back({ViolationKind::ToolchainViolation, name, "", m->toolchain.str(),
                           name + " " + version.str() + " requires toolchain " + m->toolchain.str() + ", pick is for " +
                               pick.toolchain.str()});
        }
        for (const auto& d : m->depends) {
            auto it = pick.selected.find(d.name);
            if (it == pick.selected.end()) {
                out.push_back({ViolationKind::DependencyViolation, name, d.name, d.constraint.str(),
                               name + " " + version.str() + " requires " + d.name + " " + d.constraint.str() +
                                   ", which is not selected"});
            } else if (!satisfies(it->second, d.constraint)) {
                out.push_back({ViolationKind::DependencyViolation, name, d.name, d.constraint.str(),
                               name + " " + version.str() + " requires " + d.name + " " + d.constraint.str() +
                                   ", selected " + it->second.str()});
            }
        }
        for (const auto& c : m->conflicts) {
            auto it = pick.selected.find(c.name);
            if (it != pick.selected.end() && satisfies(it->second, c.constraint)) {
                out.push_back({ViolationKind::MutualExclusion, name, c.name, c.constraint.str(),
                               name + " " + version.str() + " conflicts with " + c.name + " " + it->second.str()});
            }
        }
    }
    return out;
}

}  // namespace pickforge
