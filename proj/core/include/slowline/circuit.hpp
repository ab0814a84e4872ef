#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <vector>

namespace slowline {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double infinite_q = std::numeric_limits<double>::infinity();

// One period of the array: a shunt LC resonator coupled to its neighbours by cg.
struct unit_cell {
  double c0 = 0.0;
  double cg = 0.0;
  double l0 = 0.0;
  double q_internal = infinite_q;

  double omega0() const;
  double ratio() const { return cg / c0; }
  void validate() const;
};

// A modified cell near a port. c_left faces the port, c_right faces the interior,
// for cells on either end of the array.
struct boundary_cell {
  double c_shunt = 0.0;
  double c_left = 0.0;
  double c_right = 0.0;
  double l0 = 0.0;

  double total_capacitance() const { return c_shunt + c_left + c_right; }
  void validate() const;
};

enum class termination { matched, open_mirror };

// Series capacitance replacing the link between 1-based cells `position` and `position + 1`.
struct bend_spec {
  int position = 0;
  double capacitance = 0.0;
};

struct array_spec {
  std::vector<boundary_cell> boundary_in;  // ordered from the input port inward
  unit_cell interior;
  int count = 1;
  std::vector<boundary_cell> boundary_out;  // ordered from the interior toward the output port
  double port_impedance = 50.0;
  termination termination_out = termination::matched;
  std::optional<bend_spec> bend;
  // Optional per-cell inductances (size total_cells()); used for disordered arrays.
  std::vector<double> inductance_override;

  int total_cells() const;
  void validate() const;
  bool cg_needed() const;
};

// Flat nodal description of an array: cell i (0-based) has a shunt capacitance,
// an inductance and a conductance; coupling[i] links cell i-1 and cell i, with
// coupling[0] to the input port and coupling[n] to the output port.
struct ladder {
  std::vector<double> shunt;
  std::vector<double> inductance;
  std::vector<double> q_internal;
  std::vector<double> coupling;
  double port_impedance = 50.0;
  termination termination_out = termination::matched;

  int size() const { return static_cast<int>(shunt.size()); }
  // Loss conductance sqrt(C/L)/Q of cell i, zero for infinite Q.
  double conductance(int i) const;
};

ladder to_ladder(const array_spec& spec);

// Uniform array of n cells with the port coupled through cg and no boundary cells.
array_spec uniform_array(const unit_cell& cell, int n, double port_impedance = 50.0);

struct abcd {
  cplx a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};

  abcd operator*(const abcd& rhs) const;
  cplx det() const { return a * d - b * c; }
};

abcd series_element(cplx z);
abcd shunt_element(cplx y);

struct two_port_response {
  std::vector<double> omega;
  std::vector<cplx> s21;
  std::vector<cplx> s11;
  std::vector<bool> ok;  // false where the conversion was singular
};

// Total ABCD matrix of the array between its two ports at one frequency.
abcd array_abcd(const ladder& net, double omega);

two_port_response cascade_abcd(const array_spec& spec, const std::vector<double>& omega);
two_port_response cascade_abcd(const ladder& net, const std::vector<double>& omega);

// Group delay -d(arg S21)/d(omega) from the unwrapped phase, by finite differences.
std::vector<double> group_delay(const two_port_response& r);

std::vector<double> linspace(double a, double b, int n);

// Default grid omega0 * [0.93, 1.02] with 2001 points.
std::vector<double> default_grid(const unit_cell& cell, int n = 2001);

// Bloch wave of the infinite array. A forward wave (carrying energy toward the
// output port) is multiplied by exp(-i k) per cell, so positive group delay dk/domega
// means Re k <= 0 in the passband; evanescent waves have Im k < 0.
struct bloch_point {
  cplx k;
  cplx z_bloch;
};

abcd cell_abcd(const unit_cell& cell, double omega);
std::vector<bloch_point> bloch_analysis(const unit_cell& cell, const std::vector<double>& omega);

}  // namespace slowline
