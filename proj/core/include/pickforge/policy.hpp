// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <pickforge/index.hpp>
#include <pickforge/release.hpp>
#include <pickforge/solver.hpp>

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pickforge {

struct SuccessionPair {
    Version older;
    Version newer;
    std::optional<Version> witness;  // newest released version admitting both
    bool present_on_both = false;    // some released version admits each side separately

    /// No bridge version although the package exists on both sides.
    bool violated() const { return !witness && present_on_both; }
};

struct SuccessionReport {
    std::string package;
    std::vector<SuccessionPair> pairs;  // one per consecutive toolchain pair

    bool ok() const;
};

/// Throws UnknownPackageError for a name the repository lacks.
SuccessionReport check_succession(const Repository& repo, const std::string& name);

struct AlreadyCompatible {
    Version version;
    friend bool operator==(const AlreadyCompatible&, const AlreadyCompatible&) = default;
};
struct DevCompatible {
    std::string source_ref;
    Version version;
    friend bool operator==(const DevCompatible&, const DevCompatible&) = default;
};
struct NoneKnown {
    friend bool operator==(const NoneKnown&, const NoneKnown&) = default;
};

using CompatStatus = std::variant<AlreadyCompatible, DevCompatible, NoneKnown>;

std::string_view status_name(const CompatStatus& status) noexcept;

struct CoordinationEntry {
    CompatStatus status;
    std::string action;
    std::string maintainer;

    friend bool operator==(const CoordinationEntry&, const CoordinationEntry&) = default;
};

struct CoordinationReport {
    Version rc;
    Version reference_toolchain;
    std::map<std::string, CoordinationEntry> entries;
};

/// Classifies every package selected in `reference` for the release
/// candidate toolchain `rc`. Throws std::invalid_argument when `rc` equals
/// the reference pick's toolchain.
CoordinationReport coordinate(const Repository& repo, const Version& rc, const Pick& reference);

std::string render_markdown(const CoordinationReport& report);
nlohmann::json to_json(const CoordinationReport& report);
nlohmann::json to_json(const SuccessionReport& report);

struct RemovalViolation {
    std::string package;
    std::string message;

    friend bool operator==(const RemovalViolation&, const RemovalViolation&) = default;
};

/// Packages `candidate` drops from `previous` without a prior deprecation.
/// Throws std::invalid_argument unless candidate.predecessor == previous.version.
std::vector<RemovalViolation> check_removals(const Release& previous, const Release& candidate,
                                             const Repository& repo);

}  // namespace pickforge
