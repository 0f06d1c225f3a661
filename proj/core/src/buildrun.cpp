// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <pickforge/buildrun.hpp>

#include <pickforge/canonical_json.hpp>
#include <pickforge/digest.hpp>

#include <algorithm>
#include <condition_variable>
#include <cstring>
#include <fcntl.h>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <spawn.h>
#include <sstream>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>

extern char** environ;

namespace pickforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

// Walks remaining dependency edges from the smallest stuck package until a
// package repeats; returns that loop starting at its smallest member.
std::vector<std::string> find_cycle(const std::map<std::string, std::vector<std::string>>& deps,
                                    const std::set<std::string>& stuck) {
    std::vector<std::string> path;
    std::map<std::string, std::size_t> seen;
    std::string at = *stuck.begin();
    while (!seen.count(at)) {
        seen.emplace(at, path.size());
        path.push_back(at);
        std::string next;
        for (const auto& d : deps.at(at)) {
            if (stuck.count(d) && (next.empty() || d < next)) next = d;
        }
        at = next;
    }
    std::vector<std::string> cycle(path.begin() + static_cast<std::ptrdiff_t>(seen.at(at)), path.end());
    std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
    return cycle;
}

std::string shell_quote(std::string_view s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    out += "'";
    return out;
}

std::string log_name(const InstallStep& step) { return "logs/" + step.name + "-" + step.version.str() + ".log"; }

/// Runs `/bin/sh -c command` in `cwd`, appending output to `log`. Returns
/// the exit status, 128+signal for a signalled child, -1 if it never ran.
int run_shell(const std::string& command, const fs::path& cwd, const fs::path& log,
              const std::vector<std::string>& extra_env) {
    {
        std::ofstream banner(log, std::ios::app);
        banner << "$ " << command << "\n";
    }
    std::vector<std::string> env_storage;
    for (char** e = environ; *e; ++e) {
        const std::string entry = *e;
        const bool replaced = std::any_of(extra_env.begin(), extra_env.end(), [&](const std::string& x) {
            return entry.compare(0, x.find('=') + 1, x, 0, x.find('=') + 1) == 0;
        });
        if (!replaced) env_storage.push_back(entry);
    }
    env_storage.insert(env_storage.end(), extra_env.begin(), extra_env.end());
    std::vector<char*> envp;
    for (auto& s : env_storage) envp.push_back(s.data());
    envp.push_back(nullptr);

    std::string sh = "/bin/sh", dash_c = "-c", cmd = command;
    char* argv[] = {sh.data(), dash_c.data(), cmd.data(), nullptr};

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
    posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, log.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);
    posix_spawn_file_actions_addchdir_np(&actions, cwd.c_str());

    pid_t pid = 0;
    const int rc = posix_spawn(&pid, "/bin/sh", &actions, nullptr, argv, envp.data());
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) return -1;

    int status = 0;
    while (waitpid(pid, &status, 0) < 0) {
        if (errno != EINTR) return -1;
    }
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
    return -1;
}

StepResult execute(const InstallStep& step, const Version& toolchain, const fs::path& sandbox) {
    StepResult r{step.name, step.version, StepStatus::Passed, std::nullopt, std::nullopt, log_name(step)};
    const fs::path log = sandbox / r.log;
    const std::vector<std::string> env = {"PKG_NAME=" + step.name, "PKG_VERSION=" + step.version.str(),
                                          "TOOLCHAIN=" + toolchain.str()};
    r.build_exit = run_shell(step.build_cmd, sandbox, log, env);
    if (*r.build_exit != 0) {
        r.status = StepStatus::BuildFailed;
        return r;
    }
    r.smoke_exit = run_shell(step.smoke_cmd, sandbox, log, env);
    if (*r.smoke_exit != 0) r.status = StepStatus::SmokeFailed;
    return r;
}

void prepare_sandbox(const fs::path& sandbox) {
    std::error_code ec;
    if (fs::exists(sandbox, ec)) {
        if (!fs::is_directory(sandbox, ec)) throw SandboxError("sandbox " + sandbox.string() + " is not a directory");
        if (!fs::is_empty(sandbox, ec)) throw SandboxError("sandbox " + sandbox.string() + " is not empty");
    }
    fs::create_directories(sandbox / "logs", ec);
    if (ec || ::access((sandbox / "logs").c_str(), W_OK) != 0) {
        throw SandboxError("sandbox " + sandbox.string() + " is not writable" + (ec ? ": " + ec.message() : ""));
    }
}

}  // namespace

CycleError::CycleError(std::vector<std::string> cycle)
    : std::runtime_error("dependency cycle: " + join(cycle, " -> ")), cycle_(std::move(cycle)) {}

std::string_view to_string(StepStatus status) noexcept {
    switch (status) {
        case StepStatus::Passed: return "Passed";
        case StepStatus::BuildFailed: return "BuildFailed";
        case StepStatus::SmokeFailed: return "SmokeFailed";
        case StepStatus::Skipped: return "Skipped";
    }
    return "?";
}

InstallPlan install_plan(const Repository& repo, const Pick& pick) {
    if (const auto violations = verify_pick(repo, pick); !violations.empty()) {
        throw std::invalid_argument("cannot plan an invalid pick: " + violations.front().detail);
    }
    std::map<std::string, const PackageManifest*> manifests;
    std::map<std::string, std::vector<std::string>> deps;
    std::map<std::string, std::vector<std::string>> dependents;
    std::map<std::string, std::size_t> waiting;
    for (const auto& [name, version] : pick.selected) {
        const auto* m = repo.find(name, version);
        manifests[name] = m;
        auto& list = deps[name];
        for (const auto& d : m->depends) list.push_back(d.name);
        std::sort(list.begin(), list.end());
        waiting[name] = list.size();
        for (const auto& d : list) dependents[d].push_back(name);
    }

    InstallPlan plan;
    plan.toolchain = pick.toolchain;
    std::set<std::string> ready;
    for (const auto& [name, n] : waiting) {
        if (n == 0) ready.insert(name);
    }
    while (!ready.empty()) {
        const std::string name = *ready.begin();
        ready.erase(ready.begin());
        const auto* m = manifests.at(name);
        plan.steps.push_back({name, m->version, m->build_cmd, m->smoke_cmd, deps.at(name)});
        for (const auto& next : dependents[name]) {
            if (--waiting.at(next) == 0) ready.insert(next);
        }
    }
    if (plan.steps.size() != pick.selected.size()) {
        std::set<std::string> stuck;
        for (const auto& [name, n] : waiting) {
            if (n > 0) stuck.insert(name);
        }
        throw CycleError(find_cycle(deps, stuck));
    }
    plan.plan_digest = sha256_hex(canonical_plan_text(plan));
    return plan;
}

std::string canonical_plan_text(const InstallPlan& plan) {
    json steps = json::array();
    for (const auto& s : plan.steps) {
        steps.push_back({{"name", s.name},
                         {"version", s.version.str()},
                         {"build_cmd", s.build_cmd},
                         {"smoke_cmd", s.smoke_cmd},
                         {"depends", s.depends}});
    }
    return canonical_dump({{"toolchain", plan.toolchain.str()}, {"steps", steps}});
}

bool SmokeReport::passed() const {
    return std::all_of(steps.begin(), steps.end(), [](const StepResult& s) { return s.status == StepStatus::Passed; });
}

SmokeReport run_plan(const InstallPlan& plan, const fs::path& sandbox, int max_parallel) {
    if (max_parallel < 1) throw std::invalid_argument("max_parallel must be at least 1");
    prepare_sandbox(sandbox);

    const std::size_t n = plan.steps.size();
    std::map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < n; ++i) position.emplace(plan.steps[i].name, i);

    enum class State { Pending, Running, Done };
    std::vector<State> state(n, State::Pending);
    SmokeReport report;
    report.toolchain = plan.toolchain;
    for (const auto& step : plan.steps) {
        report.steps.push_back({step.name, step.version, StepStatus::Skipped, std::nullopt, std::nullopt, log_name(step)});
    }

    std::mutex mu;
    std::condition_variable cv;
    int running = 0;
    std::size_t done = 0;
    std::vector<std::thread> workers;

    std::unique_lock lock(mu);
    while (done < n) {
        bool progressed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (state[i] != State::Pending) continue;
            bool blocked = false, waiting = false;
            for (const auto& d : plan.steps[i].depends) {
                const auto it = position.find(d);
                if (it == position.end()) continue;
                const std::size_t j = it->second;
                if (state[j] != State::Done) {
                    waiting = true;
                } else if (report.steps[j].status == StepStatus::BuildFailed ||
                           report.steps[j].status == StepStatus::Skipped) {
                    blocked = true;
                }
            }
            if (blocked) {
                state[i] = State::Done;
                ++done;
                progressed = true;
                continue;
            }
            if (waiting || running >= max_parallel) continue;
            state[i] = State::Running;
            ++running;
            progressed = true;
            workers.emplace_back([&, i] {
                StepResult result = execute(plan.steps[i], plan.toolchain, sandbox);
                std::lock_guard guard(mu);
                report.steps[i] = std::move(result);
                state[i] = State::Done;
                --running;
                ++done;
                cv.notify_all();
            });
        }
        if (!progressed && running == 0 && done < n) {
            // only a plan whose steps wait on each other in a loop gets here
            lock.unlock();
            for (auto& w : workers) w.join();
            throw std::invalid_argument("install plan has steps that can never become ready");
        }
        if (!progressed && done < n) cv.wait(lock);
    }
    lock.unlock();
    for (auto& w : workers) w.join();
    return report;
}

std::string emit_install_script(const InstallPlan& plan) {
    std::ostringstream out;
    out << "#!/bin/sh\n";
    out << "# Generated by pickforge. Installs one package pick step by step.\n";
    out << "# toolchain: " << plan.toolchain.str() << "\n";
    out << "# plan digest: " << plan.plan_digest << "\n";
    out << "# steps: " << plan.steps.size() << "\n\n";
    const std::string toolchain = shell_quote(plan.toolchain.str());
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const auto& s = plan.steps[i];
        const std::string id = s.name + " " + s.version.str();
        const std::string env = "TOOLCHAIN=" + toolchain + " PKG_NAME=" + shell_quote(s.name) +
                                " PKG_VERSION=" + shell_quote(s.version.str());
        out << "echo " << shell_quote("==> [" + std::to_string(i + 1) + "/" + std::to_string(plan.steps.size()) + "] " + id)
            << "\n";
        out << env << " /bin/sh -c " << shell_quote(s.build_cmd) << " || { echo "
            << shell_quote("pickforge: build of " + id + " failed") << " >&2; exit 1; }\n";
        out << env << " /bin/sh -c " << shell_quote(s.smoke_cmd) << " || { echo "
            << shell_quote("pickforge: smoke test of " + id + " failed") << " >&2; exit 1; }\n\n";
    }
    out << "exit 0\n";
    return out.str();
}

json to_json(const InstallPlan& plan) {
    json j = json::parse(canonical_plan_text(plan));
    j["plan_digest"] = plan.plan_digest;
    return j;
}

json to_json(const SmokeReport& report) {
    json steps = json::array();
    for (const auto& s : report.steps) {
        steps.push_back({{"name", s.name},
                         {"version", s.version.str()},
                         {"status", std::string(to_string(s.status))},
                         {"build_exit", s.build_exit ? json(*s.build_exit) : json(nullptr)},
                         {"smoke_exit", s.smoke_exit ? json(*s.smoke_exit) : json(nullptr)},
                         {"log", s.log}});
    }
    return {{"toolchain", report.toolchain.str()}, {"passed", report.passed()}, {"steps", steps}};
}

std::string render_text(const SmokeReport& report) {
    std::ostringstream out;
    out << "smoke test, toolchain " << report.toolchain.str() << "\n";
    for (const auto& s : report.steps) {
        out << "  " << std::left << std::setw(12) << to_string(s.status) << s.name << " " << s.version.str();
        if (s.build_exit && *s.build_exit != 0) out << " (build exit " << *s.build_exit << ")";
        if (s.smoke_exit && *s.smoke_exit != 0) out << " (smoke exit " << *s.smoke_exit << ")";
        out << "\n";
    }
    out << (report.passed() ? "PASS" : "FAIL") << "\n";
    return out.str();
}

}  // namespace pickforge
