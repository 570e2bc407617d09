#include <gfb/correspondence.hpp>
#include <gfb/extended_moduli.hpp>
#include <gfb/gpb.hpp>
#include <gfb/grassmann.hpp>

#include <benchmark/benchmark.h>

namespace {

using namespace gfb;

void BM_MomentRight(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const Plane g = plane_from_graph(random_gaussian(n, n, rng));
  for (auto _ : state) benchmark::DoNotOptimize(moment_right(g));
}
BENCHMARK(BM_MomentRight)->Arg(2)->Arg(8)->Arg(32);

void BM_ComposePlanes(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  const Plane gp = plane_from_graph(random_gaussian(n, n, rng));
  const Plane gq = plane_from_graph(random_gaussian(n, n, rng));
  for (auto _ : state) benchmark::DoNotOptimize(compose_planes(gp, gq));
}
BENCHMARK(BM_ComposePlanes)->Arg(2)->Arg(8)->Arg(32);

void BM_PluckerCompose(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(3);
  const PluckerVector bp = plucker_of_rows(annihilator_rows(plane_from_graph(random_gaussian(n, n, rng))));
  const PluckerVector bq = plucker_of_rows(annihilator_rows(plane_from_graph(random_gaussian(n, n, rng))));
  for (auto _ : state) benchmark::DoNotOptimize(plucker_compose(bp, bq, n));
}
BENCHMARK(BM_PluckerCompose)->Arg(1)->Arg(2)->Arg(3);

void BM_NormalForm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(4);
  const RVector d = RVector::LinSpaced(n, 0.4, -0.4);
  const CMatrix delta = d.cast<cd>().asDiagonal();
  const RVector plus = (0.5 + d.array()).sqrt().matrix();
  const RVector minus = (0.5 - d.array()).sqrt().matrix();
  const CMatrix Q = haar_unitary(n, rng);
  const CMatrix ds = Q * plus.cast<cd>().asDiagonal();
  const CMatrix bs = Q * minus.cast<cd>().asDiagonal() * haar_unitary(n, rng);
  const Plane g = plane_from_annihilator(bs, ds);
  for (auto _ : state) benchmark::DoNotOptimize(normal_form(g, delta));
}
BENCHMARK(BM_NormalForm)->Arg(2)->Arg(4)->Arg(8);

void BM_SolveDelta1(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const RandomEM r = random_em_point(n, 1, 3, 5);
  for (auto _ : state) benchmark::DoNotOptimize(solve_delta1(r.point));
}
BENCHMARK(BM_SolveDelta1)->Arg(2)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
