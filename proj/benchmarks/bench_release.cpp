// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "random_release.hpp"

#include <benchmark/benchmark.h>

using namespace pickforge;

namespace {

void BM_WriteLockfile(benchmark::State& state) {
    std::mt19937_64 rng(9);
    const Release rel = testing::random_release(rng);
    for (auto _ : state) benchmark::DoNotOptimize(write_lockfile(rel));
}
BENCHMARK(BM_WriteLockfile);

void BM_ReadLockfile(benchmark::State& state) {
    std::mt19937_64 rng(9);
    const std::string bytes = write_lockfile(testing::random_release(rng));
    for (auto _ : state) benchmark::DoNotOptimize(read_lockfile(bytes));
}
BENCHMARK(BM_ReadLockfile);

}  // namespace
