// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <pickforge/index.hpp>
#include <pickforge/solver.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pickforge {

struct InstallStep {
    std::string name;
    Version version;
    std::string build_cmd;
    std::string smoke_cmd;
    std::vector<std::string> depends;  // selected packages this step waits for

    friend bool operator==(const InstallStep&, const InstallStep&) = default;
};

struct InstallPlan {
    Version toolchain;
    std::vector<InstallStep> steps;
    std::string plan_digest;

    friend bool operator==(const InstallPlan&, const InstallPlan&) = default;
};

class CycleError : public std::runtime_error {
public:
    explicit CycleError(std::vector<std::string> cycle);

    const std::vector<std::string>& cycle() const noexcept { return cycle_; }

private:
    std::vector<std::string> cycle_;
};

/// Dependencies first; among steps that are ready at the same time, name
/// order. Throws CycleError if the selected packages depend on each other
/// in a loop, std::invalid_argument if verify_pick rejects the pick.
InstallPlan install_plan(const Repository& repo, const Pick& pick);

/// The text plan_digest is computed over.
std::string canonical_plan_text(const InstallPlan& plan);

enum class StepStatus { Passed, BuildFailed, SmokeFailed, Skipped };

std::string_view to_string(StepStatus status) noexcept;

struct StepResult {
    std::string name;
    Version version;
    StepStatus status = StepStatus::Skipped;
    std::optional<int> build_exit;
    std::optional<int> smoke_exit;
    std::string log;  // relative to the sandbox

    friend bool operator==(const StepResult&, const StepResult&) = default;
};

struct SmokeReport {
    Version toolchain;
    std::vector<StepResult> steps;  // plan order

    bool passed() const;
};

class SandboxError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Runs each step's build_cmd and then smoke_cmd through /bin/sh inside
/// `sandbox` with PKG_NAME, PKG_VERSION and TOOLCHAIN exported. Up to
/// `max_parallel` steps run at once. A step is Skipped when a dependency
/// failed to build or was itself skipped; a failing smoke test does not
/// hold back dependents. Output goes to <sandbox>/logs/<name>-<version>.log.
SmokeReport run_plan(const InstallPlan& plan, const std::filesystem::path& sandbox, int max_parallel);

/// A POSIX sh script running the plan sequentially, stopping at the first failure.
std::string emit_install_script(const InstallPlan& plan);

nlohmann::json to_json(const InstallPlan& plan);
nlohmann::json to_json(const SmokeReport& report);
std::string render_text(const SmokeReport& report);

}  // namespace pickforge
