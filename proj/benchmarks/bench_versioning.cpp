// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "random_text.hpp"

#include <benchmark/benchmark.h>

using namespace pickforge;

namespace {

template <typename Gen>
std::vector<std::string> texts(Gen gen) {
    std::mt19937_64 rng(7);
    std::vector<std::string> out;
    for (int i = 0; i < 1024; ++i) out.push_back(gen(rng).text);
    return out;
}

void BM_ParseVersion(benchmark::State& state) {
    const auto input = texts(testing::random_version_text);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(Version::parse(input[i++ % input.size()]));
}
BENCHMARK(BM_ParseVersion);

void BM_ParseConstraint(benchmark::State& state) {
    const auto input = texts(testing::random_constraint_text);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(Constraint::parse(input[i++ % input.size()]));
}
BENCHMARK(BM_ParseConstraint);

void BM_Satisfies(benchmark::State& state) {
    const auto versions = texts(testing::random_version_text);
    const auto constraints = texts(testing::random_constraint_text);
    std::vector<Version> vs;
    std::vector<Constraint> cs;
    for (const auto& t : versions) vs.push_back(Version::parse(t));
    for (const auto& t : constraints) cs.push_back(Constraint::parse(t));
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(satisfies(vs[i % vs.size()], cs[(i * 7) % cs.size()]));
        ++i;
    }
}
BENCHMARK(BM_Satisfies);

}  // namespace
