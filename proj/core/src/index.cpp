// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <pickforge/index.hpp>

#include <pickforge/canonical_json.hpp>
#include <pickforge/digest.hpp>

#include <httplib.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

namespace pickforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool valid_name(std::string_view name) {
    return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    });
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RepositoryError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw RepositoryError("cannot write " + path.string());
}

json parse_json(std::string_view bytes, const std::string& where) {
    try {
        return json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw RepositoryError(where + ": invalid JSON: " + e.what());
    }
}

[[noreturn]] void field_error(const std::string& where, const std::string& field, const std::string& what) {
    throw RepositoryError(where + ": field '" + field + "': " + what);
}

const std::string& expect_string(const json& j, const std::string& where, const std::string& field) {
    if (!j.is_string()) field_error(where, field, "expected a string");
    return j.get_ref<const std::string&>();
}

Version version_field(const json& j, const std::string& where, const std::string& field) {
    try {
        return Version::parse(expect_string(j, where, field));
    } catch (const ParseError& e) {
        field_error(where, field, e.what());
    }
}

Constraint constraint_field(const json& j, const std::string& where, const std::string& field) {
    try {
        return Constraint::parse(expect_string(j, where, field));
    } catch (const ParseError& e) {
        field_error(where, field, e.what());
    }
}

std::vector<Requirement> requirements_field(const json& j, const std::string& where, const std::string& field) {
    if (!j.is_array()) field_error(where, field, "expected an array");
    std::vector<Requirement> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string item = field + "[" + std::to_string(i) + "]";
        const json& e = j[i];
        if (!e.is_object()) field_error(where, item, "expected an object");
        for (const auto& [key, _] : e.items()) {
            if (key != "name" && key != "constraint") field_error(where, item + "." + key, "unknown field");
        }
        if (!e.contains("name")) field_error(where, item + ".name", "missing");
        Requirement r{expect_string(e["name"], where, item + ".name"), Constraint::any()};
        if (e.contains("constraint")) r.constraint = constraint_field(e["constraint"], where, item + ".constraint");
        out.push_back(std::move(r));
    }
    return out;
}

json requirements_to_json(const std::vector<Requirement>& reqs) {
    json arr = json::array();
    for (const auto& r : reqs) arr.push_back({{"name", r.name}, {"constraint", r.constraint.str()}});
    return arr;
}

struct IndexFile {
    std::vector<Version> toolchains;
    std::vector<std::string> packages;
    std::optional<std::map<std::string, std::vector<std::string>>> versions;
};

IndexFile parse_index(std::string_view bytes, const std::string& where) {
    const json j = parse_json(bytes, where);
    if (!j.is_object()) throw RepositoryError(where + ": expected a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (key != "toolchains" && key != "packages" && key != "versions") field_error(where, key, "unknown field");
    }
    IndexFile out;
    if (!j.contains("toolchains") || !j["toolchains"].is_array()) field_error(where, "toolchains", "expected an array");
    for (std::size_t i = 0; i < j["toolchains"].size(); ++i) {
        out.toolchains.push_back(version_field(j["toolchains"][i], where, "toolchains[" + std::to_string(i) + "]"));
    }
    if (!j.contains("packages") || !j["packages"].is_array()) field_error(where, "packages", "expected an array");
    for (std::size_t i = 0; i < j["packages"].size(); ++i) {
        const auto& name = expect_string(j["packages"][i], where, "packages[" + std::to_string(i) + "]");
        if (!valid_name(name)) field_error(where, "packages[" + std::to_string(i) + "]", "invalid package name");
        out.packages.push_back(name);
    }
    if (j.contains("versions")) {
        const json& v = j["versions"];
        if (!v.is_object()) field_error(where, "versions", "expected an object");
        out.versions.emplace();
        for (const auto& [name, list] : v.items()) {
            if (!list.is_array()) field_error(where, "versions." + name, "expected an array");
            auto& dst = (*out.versions)[name];
            for (std::size_t i = 0; i < list.size(); ++i) {
                const std::string field = "versions." + name + "[" + std::to_string(i) + "]";
                dst.push_back(version_field(list[i], where, field).str());
            }
        }
    }
    return out;
}

std::vector<std::string> listed_versions(const IndexFile& index, const std::string& name, const fs::path& dir) {
    if (index.versions) {
        auto it = index.versions->find(name);
        return it == index.versions->end() ? std::vector<std::string>{} : it->second;
    }
    std::vector<std::string> out;
    const fs::path pkg_dir = dir / "packages" / name;
    if (!fs::is_directory(pkg_dir)) return out;
    for (const auto& entry : fs::directory_iterator(pkg_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path().stem().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

void reject_dangling(const Repository& repo) {
    for (const auto& issue : validate_repository(repo)) {
        if (issue.kind == IssueKind::DanglingReference) throw RepositoryError("validation error: " + issue.detail);
    }
}

Repository load_local(const fs::path& dir) {
    const fs::path index_path = dir / "index.json";
    if (!fs::is_regular_file(index_path)) throw RepositoryError("no index.json in " + dir.string());
    const IndexFile index = parse_index(read_file(index_path), index_path.string());

    Repository repo;
    repo.toolchains = index.toolchains;
    for (const auto& name : index.packages) {
        auto& versions = repo.packages[name];
        for (const auto& vtext : listed_versions(index, name, dir)) {
            const fs::path path = dir / "packages" / name / (vtext + ".json");
            const std::string where = path.string();
            Version key;
            try {
                key = Version::parse(vtext);
            } catch (const ParseError& e) {
                throw RepositoryError(where + ": file name is not a version: " + e.what());
            }
            PackageManifest m = manifest_from_json(parse_json(read_file(path), where), where);
            if (!versions.emplace(key, std::move(m)).second) {
                throw RepositoryError(where + ": duplicate version " + vtext + " of " + name);
            }
        }
    }
    reject_dangling(repo);
    return repo;
}

struct HttpSource {
    std::string origin;  // scheme://host[:port]
    std::string base;    // path prefix without trailing '/'
};

HttpSource parse_url(const std::string& url) {
    const std::string scheme = "http://";
    if (url.rfind(scheme, 0) != 0) throw RepositoryError("unsupported source URL '" + url + "'");
    const auto slash = url.find('/', scheme.size());
    HttpSource src;
    src.origin = url.substr(0, slash);
    src.base = slash == std::string::npos ? "" : url.substr(slash);
    while (!src.base.empty() && src.base.back() == '/') src.base.pop_back();
    if (src.origin.size() == scheme.size()) throw RepositoryError("missing host in '" + url + "'");
    return src;
}

std::string http_get(httplib::Client& client, const HttpSource& src, const std::string& rel) {
    const std::string path = src.base + "/" + rel;
    auto res = client.Get(path);
    if (!res) {
        throw RepositoryError("cannot reach " + src.origin + path + ": " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw RepositoryError("GET " + src.origin + path + " returned HTTP " + std::to_string(res->status));
    }
    return res->body;
}

LoadResult load_http(const std::string& url, const LoadOptions& options) {
    const HttpSource src = parse_url(url);
    httplib::Client client(src.origin);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);

    const std::string index_bytes = http_get(client, src, "index.json");
    LoadResult result;
    result.index_digest = sha256_hex(index_bytes);

    const fs::path cache_root = options.cache_dir.value_or(default_cache_dir());
    const fs::path mirror = cache_root / result.index_digest;
    if (fs::is_regular_file(mirror / ".complete")) {
        result.repository = load_local(mirror);
        result.from_cache = true;
        return result;
    }

    const IndexFile index = parse_index(index_bytes, url + "/index.json");
    if (!index.versions) {
        throw RepositoryError(url + "/index.json: HTTP sources need a 'versions' map (directories cannot be listed)");
    }
    const fs::path staging = cache_root / (result.index_digest + ".partial-" + std::to_string(::getpid()));
    fs::remove_all(staging);
    write_file(staging / "index.json", index_bytes);
    for (const auto& name : index.packages) {
        for (const auto& v : listed_versions(index, name, staging)) {
            const std::string rel = "packages/" + name + "/" + v + ".json";
            write_file(staging / rel, http_get(client, src, rel));
        }
    }
    write_file(staging / ".complete", "");
    std::error_code ec;
    fs::rename(staging, mirror, ec);
    if (ec) {
        // another process finished the same mirror first
        fs::remove_all(staging, ec);
    }
    result.repository = load_local(mirror);
    return result;
}

}  // namespace

std::string_view to_string(IssueKind kind) noexcept {
    switch (kind) {
        case IssueKind::UnorderedToolchains: return "UnorderedToolchains";
        case IssueKind::InvalidName: return "InvalidName";
        case IssueKind::KeyMismatch: return "KeyMismatch";
        case IssueKind::SelfDependency: return "SelfDependency";
        case IssueKind::SelfConflict: return "SelfConflict";
        case IssueKind::DuplicateDependency: return "DuplicateDependency";
        case IssueKind::DuplicateConflict: return "DuplicateConflict";
        case IssueKind::DevWithoutSourceRef: return "DevWithoutSourceRef";
        case IssueKind::DanglingReference: return "DanglingReference";
    }
    return "?";
}

const PackageManifest* Repository::find(std::string_view name, const Version& version) const {
    auto p = packages.find(std::string(name));
    if (p == packages.end()) return nullptr;
    auto v = p->second.find(version);
    return v == p->second.end() ? nullptr : &v->second;
}

std::vector<Issue> validate_repository(const Repository& repo) {
    std::vector<Issue> issues;
    for (std::size_t i = 1; i < repo.toolchains.size(); ++i) {
        if (!(repo.toolchains[i - 1] < repo.toolchains[i])) {
            issues.push_back({IssueKind::UnorderedToolchains, "",
                              "toolchain " + repo.toolchains[i].str() + " does not follow " +
                                  repo.toolchains[i - 1].str()});
            break;
        }
    }
    for (const auto& [name, versions] : repo.packages) {
        if (!valid_name(name)) issues.push_back({IssueKind::InvalidName, name, "invalid package name '" + name + "'"});
        for (const auto& [key, m] : versions) {
            const std::string id = name + " " + key.str();
            if (m.name != name || !(m.version == key) || m.version.str() != key.str()) {
                issues.push_back({IssueKind::KeyMismatch, name,
                                  id + " is stored under a key that does not match its manifest (" + m.name + " " +
                                      m.version.str() + ")"});
            }
            auto check_list = [&](const std::vector<Requirement>& reqs, IssueKind self_kind, IssueKind dup_kind,
                                  std::string_view verb) {
                std::set<std::string> seen;
                for (const auto& r : reqs) {
                    if (r.name == name) issues.push_back({self_kind, name, id + " " + std::string(verb) + " itself"});
                    if (!seen.insert(r.name).second) {
                        issues.push_back({dup_kind, name, id + " lists " + r.name + " more than once"});
                    }
                    if (!repo.contains(r.name)) {
                        issues.push_back({IssueKind::DanglingReference, name,
                                          id + " " + std::string(verb) + " missing package " + r.name});
                    }
                }
            };
            check_list(m.depends, IssueKind::SelfDependency, IssueKind::DuplicateDependency, "depends on");
            check_list(m.conflicts, IssueKind::SelfConflict, IssueKind::DuplicateConflict, "conflicts with");
            if (m.dev && !m.source_ref) {
                issues.push_back({IssueKind::DevWithoutSourceRef, name, id + " is a dev snapshot without source_ref"});
            }
        }
    }
    return issues;
}

std::vector<Version> compatible_versions(const Repository& repo, std::string_view name, const Version& toolchain,
                                         bool include_dev) {
    auto it = repo.packages.find(std::string(name));
    if (it == repo.packages.end()) throw UnknownPackageError(name);
    std::vector<Version> out;
    for (auto v = it->second.rbegin(); v != it->second.rend(); ++v) {
        if ((include_dev || !v->second.dev) && satisfies(toolchain, v->second.toolchain)) out.push_back(v->first);
    }
    return out;
}

fs::path default_cache_dir() {
    if (const char* env = std::getenv("PICKFORGE_CACHE"); env && *env) return env;
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "pickforge";
    if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "pickforge";
    return fs::temp_directory_path() / "pickforge-cache";
}

LoadResult load_repository_ex(const std::string& source, const LoadOptions& options) {
    if (source.rfind("http://", 0) == 0 || source.rfind("https://", 0) == 0) return load_http(source, options);
    if (!fs::is_directory(source)) throw RepositoryError("repository source '" + source + "' is not a directory");
    LoadResult result;
    result.index_digest = sha256_hex(read_file(fs::path(source) / "index.json"));
    result.repository = load_local(source);
    return result;
}

void save_repository(const Repository& repo, const fs::path& dir) {
    json index;
    index["toolchains"] = json::array();
    for (const auto& t : repo.toolchains) index["toolchains"].push_back(t.str());
    index["packages"] = json::array();
    index["versions"] = json::object();
    for (const auto& [name, versions] : repo.packages) {
        index["packages"].push_back(name);
        json list = json::array();
        for (const auto& [key, m] : versions) {
            list.push_back(key.str());
            write_file(dir / "packages" / name / (key.str() + ".json"), canonical_dump(manifest_to_json(m)));
        }
        index["versions"][name] = std::move(list);
    }
    write_file(dir / "index.json", canonical_dump(index));
}

json manifest_to_json(const PackageManifest& m) {
    json j;
    j["name"] = m.name;
    j["version"] = m.version.str();
    j["toolchain"] = m.toolchain.str();
    j["depends"] = requirements_to_json(m.depends);
    j["conflicts"] = requirements_to_json(m.conflicts);
    j["dev"] = m.dev;
    j["source_ref"] = m.source_ref ? json(*m.source_ref) : json(nullptr);
    j["deprecated"] = m.deprecated;
    j["maintainer"] = m.maintainer;
    j["build_cmd"] = m.build_cmd;
    j["smoke_cmd"] = m.smoke_cmd;
    return j;
}

PackageManifest manifest_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw RepositoryError(where + ": expected a JSON object");
    static const std::set<std::string> known = {"name",       "version",    "toolchain",  "depends",
                                                "conflicts",  "dev",        "source_ref", "deprecated",
                                                "maintainer", "build_cmd",  "smoke_cmd"};
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) field_error(where, key, "unknown field");
    }
    for (const char* required : {"name", "version", "toolchain"}) {
        if (!j.contains(required)) field_error(where, required, "missing");
    }
    PackageManifest m;
    m.name = expect_string(j["name"], where, "name");
    m.version = version_field(j["version"], where, "version");
    m.toolchain = constraint_field(j["toolchain"], where, "toolchain");
    if (j.contains("depends")) m.depends = requirements_field(j["depends"], where, "depends");
    if (j.contains("conflicts")) m.conflicts = requirements_field(j["conflicts"], where, "conflicts");
    auto boolean = [&](const char* field) {
        if (!j.contains(field)) return false;
        if (!j[field].is_boolean()) field_error(where, field, "expected a boolean");
        return j[field].get<bool>();
    };
    auto text = [&](const char* field) {
        return j.contains(field) ? expect_string(j[field], where, field) : std::string{};
    };
    m.dev = boolean("dev");
    m.deprecated = boolean("deprecated");
    if (j.contains("source_ref") && !j["source_ref"].is_null()) {
        m.source_ref = expect_string(j["source_ref"], where, "source_ref");
        if (m.source_ref->empty()) field_error(where, "source_ref", "must not be empty");
    }
    m.maintainer = text("maintainer");
    m.build_cmd = text("build_cmd");
    m.smoke_cmd = text("smoke_cmd");
    return m;
}

}  // namespace pickforge
