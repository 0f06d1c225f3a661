// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <pickforge/calendar_version.hpp>
#include <pickforge/index.hpp>
#include <pickforge/solver.hpp>

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pickforge {

/// A calendar-versioned bundle of picks, one per toolchain, ascending.
struct Release {
    CalendarVersion version;
    std::vector<Pick> picks;
    std::optional<CalendarVersion> predecessor;

    const Pick* pick_for(const Version& toolchain) const;

    friend bool operator==(const Release&, const Release&) = default;
};

class ReleaseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class WarningKind { Monotonicity, MissingPriorPick };

struct ReleaseWarning {
    WarningKind kind;
    std::string subject;  // package name, or toolchain for MissingPriorPick
    std::string message;

    friend bool operator==(const ReleaseWarning&, const ReleaseWarning&) = default;
};

struct AssembleOptions {
    /// Warn when a toolchain picked in the previous release has no pick in the new one.
    bool require_prior_picks = false;
};

struct AssembledRelease {
    Release release;
    std::vector<ReleaseWarning> warnings;
};

/// Builds a release from `picks` (sorted by toolchain here). Deprecation
/// flags of the previous release's packages are read from `repo`. Throws
/// ReleaseError on duplicate toolchains, invalid picks, or a version that
/// does not advance past `previous`.
AssembledRelease assemble_release(const CalendarVersion& version, std::vector<Pick> picks,
                                  const std::optional<Release>& previous, const Repository& repo,
                                  const AssembleOptions& options = {});

/// Packages selected somewhere in `previous`, selected nowhere in
/// `candidate`, and not flagged deprecated in any manifest `previous` used.
std::vector<std::string> dropped_without_deprecation(const Release& previous, const Release& candidate,
                                                     const Repository& repo);

struct VersionChange {
    Version from;
    Version to;

    friend bool operator==(const VersionChange&, const VersionChange&) = default;
};

struct PickDiff {
    std::set<std::string> added;
    std::set<std::string> removed;
    std::map<std::string, VersionChange> upgraded;
    std::map<std::string, VersionChange> downgraded;
    std::set<std::string> unchanged;

    friend bool operator==(const PickDiff&, const PickDiff&) = default;
};

PickDiff diff_picks(const Pick& from, const Pick& to);

struct UpgradeStep {
    Version from;
    Version to;
    PickDiff diff;

    friend bool operator==(const UpgradeStep&, const UpgradeStep&) = default;
};

struct UpgradeReport {
    std::vector<UpgradeStep> steps;
    bool monotone = true;
};

/// One step per consecutive pair of the release's toolchains between `from`
/// and `to`. Throws ReleaseError if either endpoint has no pick or
/// `from` is not below `to`.
UpgradeReport upgrade_path(const Release& release, const Version& from, const Version& to);

/// Lockfile bytes: canonical JSON with sorted keys and a trailing newline.
std::string write_lockfile(const Release& release);

/// Throws ReleaseError naming the offending field path on schema violations.
Release read_lockfile(std::string_view bytes);

nlohmann::json pick_to_json(const Pick& pick);
nlohmann::json diff_to_json(const PickDiff& diff);
nlohmann::json upgrade_to_json(const UpgradeReport& report);

}  // namespace pickforge
