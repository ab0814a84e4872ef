#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slowline/circuit.hpp"

namespace slowline {

// Linearised emitter as it appears in the circuit: an LC node with capacitance
// c_sigma to ground and coupling capacitors to named cells (1-based). The
// inductance is chosen so that the local mode frequency sqrt((C^-1)_qq / L) equals omega_ge.
struct circuit_emitter {
  double c_sigma = 0.0;
  std::map<int, double> couplings;
  double omega_ge = 0.0;
  double q_intrinsic = infinite_q;
  // Remove each coupling capacitance from the shunt of the cell it touches, so the
  // cell keeps its bare frequency.
  bool compensate_loading = false;

  void validate() const;
};

// Nodal model C dv/dt = -Gamma phi - G v, dphi/dt = v. Node 0 is the input port,
// nodes 1..N the cells, then the emitter, then the output port (absent for an open mirror).
struct state_space_model {
  Eigen::MatrixXd capacitance;
  Eigen::MatrixXd inverse_inductance;
  Eigen::MatrixXd dissipation;
  double port_impedance = 50.0;
  int input_node = 0;
  int output_node = -1;
  int emitter_node = -1;
  std::vector<int> cell_nodes;
  std::vector<std::string> node_names;

  int nodes() const { return static_cast<int>(capacitance.rows()); }
  // Nodes carrying an inductor to ground, in increasing order.
  std::vector<int> inductive_nodes() const;
};

state_space_model assemble_state_space(const array_spec& spec,
                                       const std::optional<circuit_emitter>& emitter = std::nullopt);

// Emitter inductance giving local frequency omega for the assembled capacitance matrix.
double emitter_inverse_inductance(const state_space_model& m, double omega);

// Drop every resistive element, keeping capacitances and inductances.
state_space_model lossless(const state_space_model& m);

// First-order system x' = A x with x = [phi of inductive nodes; v of all nodes].
Eigen::MatrixXd state_matrix(const state_space_model& m);

// Largest local resonance sqrt((C^-1)_ii / L_i) over the inductive nodes.
double characteristic_frequency(const state_space_model& m);

// The same system in balanced units: x = [omega_s phi; v] and time measured in 1/omega_s.
Eigen::MatrixXd scaled_state_matrix(const state_space_model& m, double omega_s);

// Steady-state S21 for a harmonic drive from the input port (needs an output port).
cplx harmonic_s21(const state_space_model& m, double omega);

// Normal mode frequencies of the lossless network with the port nodes grounded, ascending.
std::vector<double> normal_mode_frequencies(const state_space_model& m);

std::vector<cplx> system_eigenvalues(const state_space_model& m);

}  // namespace slowline
