// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <pickforge/constraint.hpp>
#include <pickforge/version.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pickforge {

struct Requirement {
    std::string name;
    Constraint constraint;

    friend bool operator==(const Requirement&, const Requirement&) = default;
};

/// One published (or development) version of a package.
struct PackageManifest {
    std::string name;
    Version version;
    Constraint toolchain;
    std::vector<Requirement> depends;
    std::vector<Requirement> conflicts;
    bool dev = false;
    std::optional<std::string> source_ref;
    bool deprecated = false;
    std::string maintainer;
    std::string build_cmd;
    std::string smoke_cmd;

    friend bool operator==(const PackageManifest&, const PackageManifest&) = default;
};

struct Repository {
    std::vector<Version> toolchains;
    std::map<std::string, std::map<Version, PackageManifest>> packages;

    bool contains(std::string_view name) const { return packages.find(std::string(name)) != packages.end(); }
    const PackageManifest* find(std::string_view name, const Version& version) const;

    friend bool operator==(const Repository&, const Repository&) = default;
};

/// Failure to read or accept a repository: unreachable source, malformed
/// file, or a dependency on a package the index does not contain.
class RepositoryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownPackageError : public std::out_of_range {
public:
    explicit UnknownPackageError(std::string_view name)
        : std::out_of_range("unknown package '" + std::string(name) + "'"), name_(name) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

enum class IssueKind {
    UnorderedToolchains,
    InvalidName,
    KeyMismatch,
    SelfDependency,
    SelfConflict,
    DuplicateDependency,
    DuplicateConflict,
    DevWithoutSourceRef,
    DanglingReference,
};

std::string_view to_string(IssueKind kind) noexcept;

struct Issue {
    IssueKind kind;
    std::string package;  // empty for repository-wide issues
    std::string detail;

    friend bool operator==(const Issue&, const Issue&) = default;
};

/// Every invariant violation in `repo`; an empty result means valid.
std::vector<Issue> validate_repository(const Repository& repo);

/// Versions of `name` whose toolchain constraint admits `toolchain`,
/// newest first. Development snapshots are dropped unless `include_dev`.
/// Throws UnknownPackageError for a name the repository lacks.
std::vector<Version> compatible_versions(const Repository& repo, std::string_view name, const Version& toolchain,
                                         bool include_dev);

struct LoadOptions {
    /// Where HTTP sources are mirrored. Unset means default_cache_dir().
    std::optional<std::filesystem::path> cache_dir;
};

/// Result of a load with cache bookkeeping, mostly useful to tests and the CLI.
struct LoadResult {
    Repository repository;
    std::string index_digest;  // hex SHA-256 of index.json
    bool from_cache = false;
};

/// `source` is a local directory or an `http://host[:port][/base]` URL. The
/// layout is `index.json` plus `packages/<name>/<version>.json`.
LoadResult load_repository_ex(const std::string& source, const LoadOptions& options = {});

inline Repository load_repository(const std::string& source, const LoadOptions& options = {}) {
    return load_repository_ex(source, options).repository;
}

/// $PICKFORGE_CACHE, else $XDG_CACHE_HOME/pickforge, else ~/.cache/pickforge.
std::filesystem::path default_cache_dir();

/// Writes `repo` in the on-disk layout load_repository reads.
void save_repository(const Repository& repo, const std::filesystem::path& dir);

nlohmann::json manifest_to_json(const PackageManifest& m);

/// `where` prefixes error messages (usually the file path).
PackageManifest manifest_from_json(const nlohmann::json& j, const std::string& where);

}  // namespace pickforge
