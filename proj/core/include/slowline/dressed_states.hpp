#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "slowline/circuit.hpp"

namespace slowline {

// Emitter in the photon-hopping picture: bare frequency, coupling g_uc to one cell
// (1-based index `cell`), extra couplings keyed by offset from that cell.
struct emitter_params {
  double omega_ge = 0.0;
  double g_uc = 0.0;
  std::map<int, double> extra_couplings;
  double q_intrinsic = infinite_q;
  int cell = 1;

  void validate() const;
};

enum class band_model { effective_mass, exact_band };
enum class band_edge { upper, lower };

struct dressed_options {
  band_model model = band_model::effective_mass;
  band_edge edge = band_edge::upper;
  // Band curvature used by the effective-mass model; zero selects omega0 cg/(2 c0)
  // at the upper edge and the exact curvature at the lower edge.
  double j = 0.0;
};

struct dressed_state_solution {
  double e_bound = 0.0;
  cplx e_radiative;
  double qubit_weight = 0.0;
  double localization_length = 0.0;  // cells
  double splitting = 0.0;            // |E_b - edge| + |E_r - edge|
  double edge = 0.0;
  double j = 0.0;
  bool radiative_converged = true;
};

double effective_curvature(const unit_cell& cell, const dressed_options& opt);

// Self-energy of the emitter. The first sheet uses the principal square root
// (effective mass) or the direct Brillouin-zone integral (exact band); the second
// sheet is its analytic continuation from the upper half plane through the passband.
cplx self_energy(cplx e, double g_uc, const unit_cell& cell, const dressed_options& opt, bool second_sheet = false);

// Derivative of the first-sheet self-energy for real e outside the passband.
double self_energy_derivative(double e, double g_uc, const unit_cell& cell, const dressed_options& opt);

dressed_state_solution solve_dressed_states(const emitter_params& emitter, const unit_cell& cell,
                                            const dressed_options& opt = {});

// Emitter weight of the upper-edge bound state in the effective-mass model.
double qubit_weight(double e, double omega_ge, double omega0);

// Exponentially localised photonic envelope on n_cells sites centred on the emitter,
// normalised so the squared amplitudes sum to 1 - qubit_weight.
std::vector<double> bound_profile(double e, const unit_cell& cell, int n_cells, double qubit_weight,
                                  const dressed_options& opt = {});

double localization_length(double e, const unit_cell& cell, const dressed_options& opt = {});

struct single_excitation_spectrum {
  Eigen::VectorXd energies;  // ascending
  Eigen::MatrixXd vectors;   // columns are eigenvectors; the last row is the emitter
  int bound_index = -1;      // eigenstate outside the band with the largest emitter weight
  double band_lo = 0.0;
  double band_hi = 0.0;

  double emitter_weight(int i) const;
};

// Hamiltonian on all cells of the array (long-range hopping from the interior cell's
// coupling spectrum) plus one emitter row; boundary cells and losses are ignored.
Eigen::MatrixXd single_excitation_hamiltonian(const array_spec& spec, const emitter_params& emitter, int m_dft = 0);

single_excitation_spectrum diagonalize_single_excitation(const array_spec& spec, const emitter_params& emitter,
                                                         int m_dft = 0);

// Splitting of the two eigenvalues of [[omega_ge, g], [g, omega_c]].
double jaynes_cummings_splitting(double detuning, double g);

}  // namespace slowline
