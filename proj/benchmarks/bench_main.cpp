// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <benchmark/benchmark.h>
#include "maxdd/backend.hpp"
#include "maxdd/scenario.hpp"

namespace
{

using namespace maxdd;

ScenarioConfig holes_beam(int length)
{
  ScenarioConfig c;
  c.h = 0.125;
  c.holes = true;
  c.bc = "mixed-lateral";
  c.length = length;
  return c;
}

void BM_Assembly(benchmark::State &state)
{
  const auto c = holes_beam(static_cast<int>(state.range(0)));
  const auto geom = c.geometry(2);
  for (auto _ : state)
  {
    auto mesh = build_beam_mesh(geom);
    const int nh = mesh.num_hexes();
    auto p = assemble_problem(std::move(mesh), BCSpec::mixed_lateral(),
                              CoefficientField::uniform(nh));
    benchmark::DoNotOptimize(p.system.nonZeros());
    state.counters["dofs"] = p.num_dofs();
  }
}
BENCHMARK(BM_Assembly)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_PreconditionerApply(benchmark::State &state)
{
  const auto method = static_cast<Method>(state.range(0));
  const auto s = build_setup(holes_beam(2), 4, 1e-3, 1.0, 1.0);
  const auto geneo = uses_geneo(method) ? solve_geneo(s.locals, 10.0) : std::vector<GenEOResult>{};
  const auto coarse = build_coarse_space(method, s, geneo);
  const SchwarzPreconditioner m(s.locals, coarse.empty() ? nullptr : &coarse,
                                s.problem.num_dofs());
  std::mt19937_64 rng(1);
  std::normal_distribution<double> dist;
  Vector r(s.problem.num_dofs()), z(s.problem.num_dofs());
  for (auto &v : r)
  {
    v = dist(rng);
  }
  for (auto _ : state)
  {
    m.apply(r, z);
    benchmark::DoNotOptimize(z.data());
  }
  state.SetLabel(std::string(method_name(method)));
}
BENCHMARK(BM_PreconditionerApply)
    ->Arg(static_cast<int>(Method::AS))
    ->Arg(static_cast<int>(Method::ASSNK))
    ->Arg(static_cast<int>(Method::ASSNKGenEO))
    ->Unit(benchmark::kMillisecond);

void BM_GenEOEigenproblem(benchmark::State &state)
{
  const auto s = build_setup(holes_beam(2), 4, 1e-3, 1.0, 1.0);
  const auto &local = s.locals[1];
  for (auto _ : state)
  {
    const auto res = geneo_gevp(local, 10.0);
    benchmark::DoNotOptimize(res.values.data());
  }
  state.counters["local_dofs"] = local.size();
}
BENCHMARK(BM_GenEOEigenproblem)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace

int main(int argc, char **argv)
{
  maxdd::ensure_dense_backend(argv);
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv))
  {
    return 1;
  }
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
