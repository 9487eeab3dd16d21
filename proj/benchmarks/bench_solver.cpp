/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "skelfit/hierarchy.hpp"
#include "skelfit/joint_solver.hpp"
#include "skelfit/synth.hpp"

#include <benchmark/benchmark.h>

using namespace skelfit;

static void BM_SolveJoint(benchmark::State& state)
{
  SynthSpec spec = two_body_spec({0.05, -0.1, 0.02}, {0.0, 0.3, 0.0}, static_cast<std::size_t>(state.range(0)));
  spec.noise = {0.005, 0.01};
  const CaptureSession session = generate(spec).session;
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_joint(session, 1, 0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SolveJoint)->Arg(500)->Arg(5400)->Unit(benchmark::kMicrosecond);

static void BM_BuildFitMatrix(benchmark::State& state)
{
  SynthSpec spec = humanoid16_spec(static_cast<std::size_t>(state.range(0)));
  spec.noise = {0.002, 0.005};
  const CaptureSession session = generate(spec).session;
  const SweepOptions options{kDefaultRankTolerance, static_cast<std::size_t>(state.range(1)), false};
  for (auto _ : state)
    benchmark::DoNotOptimize(build_fit_matrix(session, options));
}
BENCHMARK(BM_BuildFitMatrix)->Args({500, 1})->Args({5400, 1})->Args({5400, 0})->Unit(benchmark::kMillisecond);
