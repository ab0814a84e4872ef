#pragma once

#include <string>
#include <vector>

#include "slowline/circuit.hpp"

namespace slowline {

// Parameters that can be fitted on a symmetric array. Boundary parameters are
// applied to both ends:
//   port_coupling  capacitance between the port and the first cell
//   inner_coupling capacitance between the first and second boundary cells
//   cg             interior coupling (also the link from the last boundary cell inward)
//   edge_shunt     shunt capacitance of the first boundary cell
//   second_shunt   shunt capacitance of the second boundary cell
//   c0, l0         interior shunt capacitance and inductance (l0 is shared by all cells)
const std::vector<std::string>& fit_parameter_names();

double get_fit_parameter(const array_spec& spec, const std::string& name);
void set_fit_parameter(array_spec& spec, const std::string& name, double value);

struct fit_result {
  array_spec spec;
  double initial_residual_db = 0.0;  // rms dB misfit of the template
  double residual_db = 0.0;          // rms dB misfit of the returned spec
  int iterations = 0;
  bool converged = false;
};

// Least-squares fit of |S21| in dB on the measured grid, over the named parameters.
fit_result fit_to_spectrum(const two_port_response& measured, const array_spec& initial,
                           const std::vector<std::string>& free_params, int max_evaluations = 4000);

}  // namespace slowline
