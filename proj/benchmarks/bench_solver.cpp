// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "random_repo.hpp"

#include <pickforge/solver.hpp>

#include <benchmark/benchmark.h>

using namespace pickforge;

namespace {

std::vector<testing::RandomInstance> corpus(std::size_t n) {
    std::mt19937_64 rng(42);
    std::vector<testing::RandomInstance> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(testing::random_instance(rng));
    return out;
}

SelectionRequest everything(const Repository& repo, const std::string& toolchain) {
    SelectionRequest req;
    req.toolchain = Version::parse(toolchain);
    for (const auto& [name, _] : repo.packages) req.optional.insert(name);
    return req;
}

void BM_ResolveRandom(benchmark::State& state) {
    const auto instances = corpus(256);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& inst = instances[i++ % instances.size()];
        benchmark::DoNotOptimize(resolve_pick(inst.repo, inst.request));
    }
}
BENCHMARK(BM_ResolveRandom);

void BM_EnumerateRandom(benchmark::State& state) {
    const auto instances = corpus(256);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& inst = instances[i++ % instances.size()];
        benchmark::DoNotOptimize(enumerate_best(inst.repo, inst.request));
    }
}
BENCHMARK(BM_EnumerateRandom);

void BM_ResolvePlatform(benchmark::State& state) {
    const Repository repo = load_repository(PICKFORGE_FIXTURES "/platform");
    const auto req = everything(repo, "8.15");
    for (auto _ : state) benchmark::DoNotOptimize(resolve_pick(repo, req));
}
BENCHMARK(BM_ResolvePlatform)->Unit(benchmark::kMillisecond);

// A chain of n packages, each with three versions, where only the oldest
// version of every link is mutually compatible.
void BM_ResolveChain(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Repository repo;
    repo.toolchains = {Version::parse("1")};
    for (int i = 0; i < n; ++i) {
        const std::string name = "p" + std::to_string(1000 + i);
        for (const char* v : {"1.0", "2.0", "3.0"}) {
            PackageManifest m;
            m.name = name;
            m.version = Version::parse(v);
            if (i + 1 < n) m.depends.push_back({"p" + std::to_string(1001 + i), Constraint::parse("=1.0")});
            if (i > 0 && std::string(v) != "1.0") m.conflicts.push_back({"p" + std::to_string(999 + i), Constraint::any()});
            repo.packages[name][m.version] = m;
        }
    }
    const auto req = everything(repo, "1");
    for (auto _ : state) benchmark::DoNotOptimize(resolve_pick(repo, req));
}
BENCHMARK(BM_ResolveChain)->RangeMultiplier(4)->Range(4, 256)->Unit(benchmark::kMicrosecond);

}  // namespace
