#pragma once

#include <vector>

#include "slowline/circuit.hpp"

namespace slowline {

inline constexpr double default_cell_pitch_m = 290e-6;

struct dispersion_curve {
  std::vector<double> k;  // per lattice constant, in (-pi, pi]
  std::vector<double> omega;
  double d = default_cell_pitch_m;
};

struct coupling_spectrum {
  std::vector<int> distance;
  std::vector<double> v;
};

struct tight_binding_params {
  double j_tb = 0.0;     // omega0 cg / (2 c0)
  double j_exact = 0.0;  // (omega0 / 2) cg / (c0 + cg)
  double omega_p_tb = 0.0;
  double omega_p_exact = 0.0;
};

struct delay_metrics {
  std::vector<double> omega;
  std::vector<double> delay_per_cell;  // s
  double mid_band_delay_per_cell = 0.0;
  double total_mid_band_delay = 0.0;
  double ratio_to_cpw = 0.0;  // omega0 / J_tb
};

double dispersion(const unit_cell& cell, double k);
dispersion_curve dispersion(const unit_cell& cell, int n_points, double d = default_cell_pitch_m);

// d omega / dk, negative for k > 0.
double group_velocity(const unit_cell& cell, double k);

// Inverse of the dispersion on the passband; returns |k| in [0, pi].
double wavenumber(const unit_cell& cell, double omega);

double upper_band_edge(const unit_cell& cell);
double lower_band_edge(const unit_cell& cell);
double band_center(const unit_cell& cell);
double bandwidth(const unit_cell& cell);

// Curvature of the band at its lower edge: omega ~ omega_lo + J_lo (k - pi)^2.
double lower_edge_curvature(const unit_cell& cell);

tight_binding_params tight_binding(const unit_cell& cell);

// V(n) = (1/M) sum_k omega_k exp(-i k n) over the M-point Brillouin zone.
coupling_spectrum coupling_spectrum_dft(const unit_cell& cell, int m_cells, int max_distance);

delay_metrics delay_metrics_for(const unit_cell& cell, int n_cells, int n_points = 201);

// Delay per unit chip area relative to a straight line of the same pitch.
double delay_per_area(const unit_cell& cell, double d = default_cell_pitch_m, double width = default_cell_pitch_m);

}  // namespace slowline
