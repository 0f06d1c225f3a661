// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <pickforge/release.hpp>

#include <pickforge/canonical_json.hpp>

#include <algorithm>

namespace pickforge {

using nlohmann::json;

namespace {

std::set<std::string> selected_names(const Release& release) {
    std::set<std::string> out;
    for (const auto& pick : release.picks) {
        for (const auto& [name, _] : pick.selected) out.insert(name);
    }
    return out;
}

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw ReleaseError("lockfile: field '" + path + "': " + what);
}

void only_fields(const json& j, const std::string& path, std::initializer_list<std::string_view> known) {
    for (const auto& [key, _] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            schema_error(path.empty() ? key : path + "." + key, "unknown field");
        }
    }
}

const json& member(const json& j, const std::string& path, const std::string& key) {
    if (!j.contains(key)) schema_error(path.empty() ? key : path + "." + key, "missing");
    return j[key];
}

template <typename T, typename Parse>
T parse_text(const json& j, const std::string& path, Parse parse) {
    if (!j.is_string()) schema_error(path, "expected a string");
    try {
        return parse(j.get_ref<const std::string&>());
    } catch (const ParseError& e) {
        schema_error(path, e.what());
    }
}

Version version_at(const json& j, const std::string& path) {
    return parse_text<Version>(j, path, [](const std::string& s) { return Version::parse(s); });
}

Pick pick_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) schema_error(path, "expected an object");
    only_fields(j, path, {"toolchain", "selected", "excluded"});
    Pick pick;
    pick.toolchain = version_at(member(j, path, "toolchain"), path + ".toolchain");
    const json& selected = member(j, path, "selected");
    if (!selected.is_object()) schema_error(path + ".selected", "expected an object");
    for (const auto& [name, v] : selected.items()) pick.selected.emplace(name, version_at(v, path + ".selected." + name));
    const json& excluded = member(j, path, "excluded");
    if (!excluded.is_object()) schema_error(path + ".excluded", "expected an object");
    for (const auto& [name, reason] : excluded.items()) {
        if (!reason.is_string()) schema_error(path + ".excluded." + name, "expected a string");
        pick.excluded.emplace(name, reason.get<std::string>());
    }
    return pick;
}

json change_map(const std::map<std::string, VersionChange>& changes) {
    json out = json::object();
    for (const auto& [name, c] : changes) out[name] = {{"from", c.from.str()}, {"to", c.to.str()}};
    return out;
}

}  // namespace

const Pick* Release::pick_for(const Version& toolchain) const {
    for (const auto& p : picks) {
        if (p.toolchain == toolchain) return &p;
    }
    return nullptr;
}

std::vector<std::string> dropped_without_deprecation(const Release& previous, const Release& candidate,
                                                     const Repository& repo) {
    const auto kept = selected_names(candidate);
    std::vector<std::string> out;
    for (const auto& name : selected_names(previous)) {
        if (kept.count(name)) continue;
        bool deprecated = false;
        for (const auto& pick : previous.picks) {
            auto it = pick.selected.find(name);
            if (it == pick.selected.end()) continue;
            const auto* m = repo.find(name, it->second);
            deprecated = deprecated || (m && m->deprecated);
        }
        if (!deprecated) out.push_back(name);
    }
    return out;
}

AssembledRelease assemble_release(const CalendarVersion& version, std::vector<Pick> picks,
                                  const std::optional<Release>& previous, const Repository& repo,
                                  const AssembleOptions& options) {
    if (picks.empty()) throw ReleaseError("release " + version.str() + " has no picks");
    std::stable_sort(picks.begin(), picks.end(), [](const Pick& a, const Pick& b) { return a.toolchain < b.toolchain; });
    for (std::size_t i = 1; i < picks.size(); ++i) {
        if (picks[i].toolchain == picks[i - 1].toolchain) {
            throw ReleaseError("release " + version.str() + " has two picks for toolchain " + picks[i].toolchain.str());
        }
    }
    for (const auto& pick : picks) {
        const auto violations = verify_pick(repo, pick);
        if (!violations.empty()) {
            throw ReleaseError("pick for toolchain " + pick.toolchain.str() + " is invalid: " + violations.front().detail);
        }
    }

    AssembledRelease out;
    out.release.version = version;
    out.release.picks = std::move(picks);
    if (!previous) return out;

    if (!(previous->version < version)) {
        throw ReleaseError("release " + version.str() + " does not follow its predecessor " + previous->version.str());
    }
    out.release.predecessor = previous->version;
    for (const auto& name : dropped_without_deprecation(*previous, out.release, repo)) {
        out.warnings.push_back({WarningKind::Monotonicity, name,
                                name + " was in release " + previous->version.str() + " but is not in " + version.str() +
                                    " and was never deprecated"});
    }
    if (options.require_prior_picks) {
        for (const auto& old : previous->picks) {
            if (!out.release.pick_for(old.toolchain)) {
                out.warnings.push_back({WarningKind::MissingPriorPick, old.toolchain.str(),
                                        "toolchain " + old.toolchain.str() + " was picked in " +
                                            previous->version.str() + " but has no pick in " + version.str()});
            }
        }
    }
    return out;
}

PickDiff diff_picks(const Pick& from, const Pick& to) {
    PickDiff diff;
    for (const auto& [name, old_version] : from.selected) {
        auto it = to.selected.find(name);
        if (it == to.selected.end()) {
            diff.removed.insert(name);
        } else if (old_version < it->second) {
            diff.upgraded.emplace(name, VersionChange{old_version, it->second});
        } else if (it->second < old_version) {
            diff.downgraded.emplace(name, VersionChange{old_version, it->second});
        } else {
            diff.unchanged.insert(name);
        }
    }
    for (const auto& [name, _] : to.selected) {
        if (!from.selected.count(name)) diff.added.insert(name);
    }
    return diff;
}

UpgradeReport upgrade_path(const Release& release, const Version& from, const Version& to) {
    auto position = [&](const Version& t) {
        for (std::size_t i = 0; i < release.picks.size(); ++i) {
            if (release.picks[i].toolchain == t) return i;
        }
        throw ReleaseError("release " + release.version.str() + " has no pick for toolchain " + t.str());
    };
    const std::size_t begin = position(from);
    const std::size_t end = position(to);
    if (!(from < to)) {
        throw ReleaseError("upgrade path needs from < to, got " + from.str() + " -> " + to.str());
    }
    UpgradeReport report;
    for (std::size_t i = begin; i < end; ++i) {
        const Pick& a = release.picks[i];
        const Pick& b = release.picks[i + 1];
        report.steps.push_back({a.toolchain, b.toolchain, diff_picks(a, b)});
        report.monotone = report.monotone && report.steps.back().diff.removed.empty();
    }
    return report;
}

json pick_to_json(const Pick& pick) {
    json j;
    j["toolchain"] = pick.toolchain.str();
    j["selected"] = json::object();
    for (const auto& [name, v] : pick.selected) j["selected"][name] = v.str();
    j["excluded"] = json::object();
    for (const auto& [name, reason] : pick.excluded) j["excluded"][name] = reason;
    return j;
}

json diff_to_json(const PickDiff& diff) {
    return {{"added", diff.added},
            {"removed", diff.removed},
            {"upgraded", change_map(diff.upgraded)},
            {"downgraded", change_map(diff.downgraded)},
            {"unchanged", diff.unchanged}};
}

json upgrade_to_json(const UpgradeReport& report) {
    json steps = json::array();
    for (const auto& s : report.steps) {
        steps.push_back({{"from", s.from.str()}, {"to", s.to.str()}, {"diff", diff_to_json(s.diff)}});
    }
    return {{"monotone", report.monotone}, {"steps", steps}};
}

std::string write_lockfile(const Release& release) {
    json j;
    j["version"] = release.version.str();
    j["predecessor"] = release.predecessor ? json(release.predecessor->str()) : json(nullptr);
    j["picks"] = json::array();
    for (const auto& pick : release.picks) j["picks"].push_back(pick_to_json(pick));
    return canonical_dump(j);
}

Release read_lockfile(std::string_view bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw ReleaseError(std::string("lockfile: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) schema_error("", "expected an object");
    only_fields(j, "", {"version", "predecessor", "picks"});

    Release release;
    release.version = parse_text<CalendarVersion>(member(j, "", "version"), "version",
                                                  [](const std::string& s) { return CalendarVersion::parse(s); });
    const json& pred = member(j, "", "predecessor");
    if (!pred.is_null()) {
        release.predecessor = parse_text<CalendarVersion>(pred, "predecessor",
                                                          [](const std::string& s) { return CalendarVersion::parse(s); });
        if (!(*release.predecessor < release.version)) schema_error("predecessor", "must precede version");
    }
    const json& picks = member(j, "", "picks");
    if (!picks.is_array() || picks.empty()) schema_error("picks", "expected a non-empty array");
    for (std::size_t i = 0; i < picks.size(); ++i) {
        const std::string path = "picks[" + std::to_string(i) + "]";
        release.picks.push_back(pick_from_json(picks[i], path));
        if (i > 0 && !(release.picks[i - 1].toolchain < release.picks[i].toolchain)) {
            schema_error(path + ".toolchain", "toolchains must be strictly ascending");
        }
    }
    return release;
}

}  // namespace pickforge
