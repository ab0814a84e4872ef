#include <benchmark/benchmark.h>

#include "slowline/band_structure.hpp"
#include "slowline/circuit.hpp"
#include "slowline/disorder.hpp"
#include "slowline/dynamics.hpp"
#include "slowline/state_space.hpp"
#include "slowline/taper.hpp"

using namespace slowline;

namespace {

constexpr double fF = 1e-15;

unit_cell cell() { return {353.2 * fF, 5.02 * fF, 3.099e-9}; }

array_spec device(int interior) {
  const unit_cell c = cell();
  array_spec s;
  s.interior = c;
  s.count = interior;
  s.boundary_in = {{273.0 * fF, 92.5 * fF, 7.8 * fF, c.l0}, {351.2 * fF, 7.8 * fF, c.cg, c.l0}};
  s.boundary_out = {{351.2 * fF, 7.8 * fF, c.cg, c.l0}, {273.0 * fF, 92.5 * fF, 7.8 * fF, c.l0}};
  return s;
}

circuit_emitter emitter(double w) {
  circuit_emitter e;
  e.c_sigma = 77.8 * fF;
  e.couplings = {{1, 0.16 * fF}, {3, 1.9 * fF}, {4, 0.25 * fF}};
  e.omega_ge = w;
  e.q_intrinsic = 9e4;
  return e;
}

void bm_cascade_abcd(benchmark::State& state) {
  const array_spec s = device(static_cast<int>(state.range(0)));
  const std::vector<double> grid = default_grid(s.interior, 2001);
  for (auto _ : state) benchmark::DoNotOptimize(cascade_abcd(s, grid));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.size()));
}
BENCHMARK(bm_cascade_abcd)->Arg(26)->Arg(48)->Arg(200);

void bm_dispersion(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dispersion(cell(), 2001));
}
BENCHMARK(bm_dispersion);

void bm_coupling_spectrum(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(coupling_spectrum_dft(cell(), 2001, 10));
}
BENCHMARK(bm_coupling_spectrum);

void bm_simulate_emission(benchmark::State& state) {
  const array_spec s = device(static_cast<int>(state.range(0)));
  protocol p;
  p.omega_interact = band_center(s.interior);
  p.t_max = 60e-9;
  p.dt_output = 0.1e-9;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_emission(s, emitter(p.omega_interact), p));
}
BENCHMARK(bm_simulate_emission)->Arg(48)->Arg(200)->Unit(benchmark::kMillisecond);

void bm_optimize_taper(benchmark::State& state) {
  taper_problem p;
  p.base = uniform_array({353.2 * fF, 5.05 * fF, 3.151e-9}, 26);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_taper(p));
}
BENCHMARK(bm_optimize_taper)->Unit(benchmark::kMillisecond);

void bm_extinction(benchmark::State& state) {
  extinction_problem p;
  p.spec = device(46);
  p.sigma_over_j = {0.05, 0.1};
  p.n_realizations = 50;
  p.seed = 1;
  p.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(extinction_curve(p));
}
BENCHMARK(bm_extinction)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
