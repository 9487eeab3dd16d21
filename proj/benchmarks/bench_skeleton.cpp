/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "skelfit/skeleton.hpp"
#include "skelfit/synth.hpp"

#include <benchmark/benchmark.h>

using namespace skelfit;

namespace
{

SynthResult humanoid(std::size_t frames)
{
  SynthSpec spec = humanoid16_spec(frames);
  spec.noise = {0.002, 0.005};
  return generate(spec);
}

} // namespace

static void BM_FitKnownHierarchy(benchmark::State& state)
{
  const SynthResult synth = humanoid(static_cast<std::size_t>(state.range(0)));
  const ParentMap topology = synth.truth.parent_map();
  for (auto _ : state)
    benchmark::DoNotOptimize(fit_skeleton(synth.session, topology));
}
BENCHMARK(BM_FitKnownHierarchy)->Arg(5400)->Unit(benchmark::kMillisecond);

static void BM_FitInferredHierarchy(benchmark::State& state)
{
  const SynthResult synth = humanoid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(fit_skeleton(synth.session, std::nullopt));
}
BENCHMARK(BM_FitInferredHierarchy)->Arg(5400)->Unit(benchmark::kMillisecond);

static void BM_Reconstruct(benchmark::State& state)
{
  const SynthResult synth = humanoid(static_cast<std::size_t>(state.range(0)));
  const SkeletonModel model = fit_skeleton(synth.session, synth.truth.parent_map()).model;
  for (auto _ : state)
    benchmark::DoNotOptimize(reconstruct(model, synth.session));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Reconstruct)->Arg(5400)->Unit(benchmark::kMillisecond);
