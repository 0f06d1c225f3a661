// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <pickforge/index.hpp>
#include <pickforge/version.hpp>

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace pickforge {

struct SelectionRequest {
    Version toolchain;
    std::set<std::string> mandatory;
    std::set<std::string> optional;
    std::map<std::string, Version> overrides;
    bool include_dev = false;
};

/// One version per included package for a single toolchain, plus the
/// optional packages that could not be included and why.
struct Pick {
    Version toolchain;
    std::map<std::string, Version> selected;
    std::map<std::string, std::string> excluded;

    friend bool operator==(const Pick&, const Pick&) = default;
};

struct UnsatReport {
    Version toolchain;
    std::vector<std::string> culprits;  // sorted; removing any one makes the rest satisfiable
    std::vector<std::string> narrative;

    friend bool operator==(const UnsatReport&, const UnsatReport&) = default;
};

using Resolution = std::variant<Pick, UnsatReport>;

/// A request the solver refuses to start on (unknown names, an override
/// outside the request, an override that breaks its own toolchain bound).
class SolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SearchSpaceTooLarge : public SolveError {
public:
    SearchSpaceTooLarge(std::uint64_t space, std::uint64_t limit);

    std::uint64_t space() const noexcept { return space_; }

private:
    std::uint64_t space_;
};

/// Picks the optimum under this objective, in priority order:
///   1. every mandatory package is selected (otherwise an UnsatReport);
///   2. as many optional packages as possible;
///   3. among equal counts, inclusion of earlier names (by byte order) wins;
///   4. newest versions, compared over the requested packages in name order,
///      then over the pulled-in dependencies in name order (absent lowest).
/// Packages outside the request are selected only when a selected package
/// depends on them.
Resolution resolve_pick(const Repository& repo, const SelectionRequest& req);

/// Exhaustive reference for resolve_pick with the same objective. Refuses
/// with SearchSpaceTooLarge when the product of per-package choices
/// (versions plus "absent") exceeds `limit`.
Resolution enumerate_best(const Repository& repo, const SelectionRequest& req, std::uint64_t limit = 1'000'000);

enum class ViolationKind {
    UnknownSelection,
    SelectedAndExcluded,
    ToolchainViolation,
    DependencyViolation,
    MutualExclusion,
};

std::string_view to_string(ViolationKind kind) noexcept;

struct PickViolation {
    ViolationKind kind;
    std::string package;
    std::string other;       // the dependency or conflict target, if any
    std::string constraint;  // constraint text involved, if any
    std::string detail;

    friend bool operator==(const PickViolation&, const PickViolation&) = default;
};

/// Re-checks every Pick invariant against the repository without going
/// through the solver.
std::vector<PickViolation> verify_pick(const Repository& repo, const Pick& pick);

// Shared by resolve_pick and enumerate_best. Neither takes part in choosing
// the optimum.
namespace selection {

/// Throws SolveError when `req` is not a well-formed request for `repo`.
void validate_request(const Repository& repo, const SelectionRequest& req);

/// Text recorded in Pick::excluded for an optional package left out of
/// `selected`.
std::string exclusion_reason(const Repository& repo, const SelectionRequest& req,
                             const std::map<std::string, Version>& selected, const std::string& name);

UnsatReport unsat_report(const Repository& repo, const SelectionRequest& req, std::vector<std::string> culprits);

}  // namespace selection

}  // namespace pickforge
