#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slowline/circuit.hpp"
#include "slowline/dressed_states.hpp"
#include "slowline/state_space.hpp"

namespace slowline {

struct modulation {
  double omega_mod = 0.0;
  double epsilon = 0.0;
};

struct protocol {
  double omega_interact = 0.0;
  double t_max = 0.0;
  double dt_output = 0.0;
  double initial_excited_population = 1.0;
  std::optional<modulation> mod;
  // Linear ramp from omega_start to omega_interact over tune_time (0 means an instantaneous quench).
  double tune_time = 0.0;
  std::optional<double> omega_start;
  // Integrator step; zero picks 1/(50 omega_max) of the fastest mode.
  double max_step = 0.0;

  void validate() const;
  int samples() const;
};

struct dynamics_trace {
  std::vector<double> t;
  std::vector<double> p_e;
  std::string method;
  double error_estimate = 0.0;
  bool converged = true;
  std::map<std::string, std::string> metadata;
};

inline constexpr double thermal_population = 0.008;

// Emission of the circuit emitter into the array. The emitter local mode starts
// with one quantum of action; p_e is its action phi^2/(2Z) + Z q^2/2 relative to the
// start, with Z = sqrt(L_q (C^-1)_qq). Time-invariant protocols are propagated
// exactly through the eigenmodes; modulated or ramped ones use fixed-step RK4 in
// modal coordinates with a step-doubling error check.
dynamics_trace simulate_emission(const array_spec& spec, const circuit_emitter& emitter, const protocol& proto);

// Same as simulate_emission, but requires an open-mirror output termination.
dynamics_trace simulate_mirror(const array_spec& spec, const circuit_emitter& emitter, const protocol& proto);

// Requires proto.mod; thin wrapper that documents intent.
dynamics_trace simulate_modulated(const array_spec& spec, const circuit_emitter& emitter, const protocol& proto);

// Single-excitation Schroedinger evolution in the rotating-wave approximation of the
// same circuit. Inductor-free port nodes are folded into each neighbour as an
// effective shunt and conductance evaluated at the interaction frequency.
dynamics_trace simulate_single_excitation(const array_spec& spec, const circuit_emitter& emitter,
                                          const protocol& proto);

// Lossless evolution under the photon-hopping Hamiltonian of diagonalize_single_excitation.
dynamics_trace simulate_hamiltonian(const array_spec& spec, const emitter_params& emitter, double t_max,
                                    double dt_output, int m_dft = 0);

// Parallel sweep over interaction frequencies; results are in input order.
std::vector<dynamics_trace> simulate_sweep(const array_spec& spec, const circuit_emitter& emitter,
                                           const protocol& proto, const std::vector<double>& omegas, int threads);

double default_mirror_phase(double omega, double tau_d);

// Amplitude delay equation c' = -(G/2) c + (G/2) e^{i phase} c(t - tau) step(t - tau),
// solved by its exact series; p_e = |c|^2.
dynamics_trace ideal_mirror_oracle(double gamma_1d, double tau_d, double phase, double t_max, double dt_output);

struct bandedge_oracle_options {
  double k_max = 4.0;      // band truncation in units of 1/cell
  int cells = 1600;        // quantisation length; mode spacing 2 pi / cells
  bool check_convergence = true;
};

// Emitter coupled to a discretised quadratic band omega0 - J k^2, solved through
// the secular equation. Throws convergence_error if doubling the mode count moves
// the population by more than 1%.
dynamics_trace bandedge_oracle(double g_uc, double j, double omega0, double detuning, double t_max,
                               double dt_output, const bandedge_oracle_options& opt = {});

// First time p_e falls below p_e(0)/e, linearly interpolated; NaN if it never does.
double lifetime_1e(const dynamics_trace& trace);

// Decay rate from a least-squares fit of log p_e over [t_lo, t_hi].
double effective_rate(const dynamics_trace& trace, double t_lo, double t_hi);

// First time at or after t_min where |p_e - p_ref| exceeds threshold; NaN if none.
double deviation_onset(const dynamics_trace& trace, const dynamics_trace& reference, double threshold,
                       double t_min = 0.0);

// Start times of population revivals. The first is where the trace departs from the
// reference; each later one is the last local minimum before p_e climbs back above
// rise_fraction times the previous revival's peak.
std::vector<double> revival_onsets(const dynamics_trace& trace, const dynamics_trace& reference, double threshold,
                                   double rise_fraction, double t_min = 0.0);

// Round-trip delay between an emitter at 1-based cell q and the far end of the array:
// 2 (N - q + 1/2) cells at the interior Bloch group delay per cell at omega.
double round_trip_delay(const array_spec& spec, int emitter_cell, double omega);

}  // namespace slowline
