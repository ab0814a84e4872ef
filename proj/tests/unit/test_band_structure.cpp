#include <gtest/gtest.h>

#include <cmath>

#include "devices.hpp"
#include "slowline/band_structure.hpp"

using namespace slowline;
using namespace slowline::testing;

namespace {

// Cell with a chosen ratio cg/c0 and bare frequency f0 (Hz).
unit_cell cell_with(double ratio, double f0) {
  const double c0 = 350.0 * fF;
  return {c0, ratio * c0, 1.0 / (c0 * std::pow(two_pi * f0, 2))};
}

}  // namespace

TEST(band_structure, zero_wavenumber_gives_bare_frequency) {
  const unit_cell c = qubit_cell();
  EXPECT_DOUBLE_EQ(dispersion(c, 0.0), c.omega0());
  EXPECT_DOUBLE_EQ(upper_band_edge(c), c.omega0());
}

TEST(band_structure, zone_boundary_example) {
  const unit_cell c = cell_with(1.0 / 70.0, 4.8e9);
  EXPECT_NEAR(dispersion(c, pi) / two_pi, 4.668e9, 0.5e6);
  EXPECT_NEAR(lower_band_edge(c), dispersion(c, pi), 1e-6);
}

TEST(band_structure, test_device_band_range) {
  const unit_cell c = test_cell();
  EXPECT_NEAR(lower_band_edge(c) / two_pi, 4.640e9, 2e6);
  EXPECT_NEAR(upper_band_edge(c) / two_pi, 4.771e9, 2e6);
}

TEST(band_structure, qubit_device_hopping) {
  const tight_binding_params tb = tight_binding(qubit_cell());
  EXPECT_NEAR(tb.j_exact / two_pi, 33.7e6, 0.1e6);
  EXPECT_NEAR(tb.j_exact / (two_pi * 33.5e6), 1.0, 0.01);
  EXPECT_DOUBLE_EQ(tb.omega_p_tb, qubit_cell().omega0() - 2.0 * tb.j_tb);
}

TEST(band_structure, hopping_conventions_differ_by_coupling_fraction) {
  for (double r : {1.0 / 70.0, 0.05, 0.3}) {
    const unit_cell c = cell_with(r, 5e9);
    const tight_binding_params tb = tight_binding(c);
    EXPECT_NEAR(std::abs(tb.j_tb - tb.j_exact) / tb.j_tb, c.cg / (c.c0 + c.cg), 1e-12);
    EXPECT_NEAR(std::abs(tb.j_tb - tb.j_exact) / tb.j_exact, c.ratio(), 1e-12);
  }
}

TEST(band_structure, decoupled_cells_have_no_band) {
  const unit_cell c = cell_with(1e-9, 5e9);
  const tight_binding_params tb = tight_binding(c);
  EXPECT_LT(tb.j_tb / c.omega0(), 1e-8);
  EXPECT_NEAR(tb.omega_p_exact / c.omega0(), 1.0, 1e-8);
  EXPECT_LT(bandwidth(c) / c.omega0(), 1e-8);
}

TEST(band_structure, bandwidth_formula) {
  const unit_cell c = qubit_cell();
  EXPECT_NEAR(bandwidth(c) / (c.omega0() * (1.0 - 1.0 / std::sqrt(1.0 + 4.0 * c.ratio()))), 1.0, 1e-12);
  EXPECT_NEAR(bandwidth(c) / (upper_band_edge(c) - lower_band_edge(c)), 1.0, 1e-12);
}

TEST(band_structure, coupling_spectrum_of_cosine_band) {
  // A weakly coupled cell is close to a cosine band: V(1) approaches J and V(n >= 2) is negligible.
  const unit_cell c = cell_with(1e-4, 5e9);
  const coupling_spectrum v = coupling_spectrum_dft(c, 2001, 4);
  const double j = tight_binding(c).j_tb;
  ASSERT_EQ(v.distance[1], 1);
  EXPECT_NEAR(std::abs(v.v[1]) / j, 1.0, 1e-3);
  for (int n = 2; n <= 4; ++n) EXPECT_LT(std::abs(v.v[n]) / j, 1e-3);
}

TEST(band_structure, nearest_neighbour_dominates) {
  const coupling_spectrum v = coupling_spectrum_dft(cell_with(0.1, 5e9), 2001, 3);
  EXPECT_LT(std::abs(v.v[2]), 0.2 * std::abs(v.v[1]));
  EXPECT_LT(std::abs(v.v[3]), std::abs(v.v[2]));
}

TEST(band_structure, coupling_spectrum_reconstructs_dispersion) {
  const unit_cell c = test_cell();
  const int m = 201;
  const coupling_spectrum v = coupling_spectrum_dft(c, m, (m - 1) / 2);
  for (int i = 0; i < m; i += 7) {
    const double k = two_pi * (i - (m - 1) / 2) / m;
    double w = v.v[0];
    for (std::size_t n = 1; n < v.distance.size(); ++n) w += 2.0 * v.v[n] * std::cos(k * v.distance[n]);
    EXPECT_NEAR(w / dispersion(c, k), 1.0, 1e-9);
  }
}

TEST(band_structure, group_velocity_vanishes_at_band_edges) {
  const unit_cell c = qubit_cell();
  const double mid = std::abs(group_velocity(c, pi / 2));
  EXPECT_LT(std::abs(group_velocity(c, 1e-4)), 1e-3 * mid);
  EXPECT_LT(std::abs(group_velocity(c, pi - 1e-4)), 1e-3 * mid);
  const double h = 1e-6;
  EXPECT_NEAR(group_velocity(c, 1.0), (dispersion(c, 1.0 + h) - dispersion(c, 1.0 - h)) / (2 * h), 1e-6 * mid);
}

TEST(band_structure, group_velocity_is_negative_for_positive_k) {
  const unit_cell c = qubit_cell();
  for (double k : linspace(0.05, pi - 0.05, 20)) EXPECT_LT(group_velocity(c, k), 0.0);
}

TEST(band_structure, wavenumber_inverts_dispersion) {
  const unit_cell c = qubit_cell();
  for (double k : linspace(0.01, pi - 0.01, 30)) EXPECT_NEAR(wavenumber(c, dispersion(c, k)), k, 1e-8);
}

TEST(band_structure, mid_band_delay_per_cell) {
  const delay_metrics d = delay_metrics_for(qubit_cell(), 26);
  EXPECT_NEAR(d.mid_band_delay_per_cell, 2.4e-9, 0.1e-9);
  EXPECT_NEAR(d.total_mid_band_delay, 26 * d.mid_band_delay_per_cell, 1e-15);
  EXPECT_NEAR(d.total_mid_band_delay, 55e-9, 0.15 * 55e-9);
  EXPECT_NEAR(d.ratio_to_cpw / (qubit_cell().omega0() / tight_binding(qubit_cell()).j_tb), 1.0, 0.05);
}

TEST(band_structure, strong_coupling_shrinks_delay_ratio) {
  const double strong = delay_metrics_for(cell_with(10.0, 5e9), 10).ratio_to_cpw;
  EXPECT_LT(strong, 3.0);
  EXPECT_LT(strong, 0.05 * delay_metrics_for(cell_with(0.01, 5e9), 10).ratio_to_cpw);
}

TEST(band_structure, lower_edge_curvature_matches_finite_difference) {
  const unit_cell c = qubit_cell();
  const double h = 1e-3;
  const double fd = (dispersion(c, pi - h) - lower_band_edge(c)) / (h * h);
  EXPECT_NEAR(lower_edge_curvature(c) / fd, 1.0, 1e-4);
}

TEST(band_structure, dispersion_curve_grid) {
  const dispersion_curve d = dispersion(qubit_cell(), 201);
  ASSERT_EQ(d.k.size(), 201u);
  EXPECT_GT(d.k.front(), -pi - 1e-12);
  EXPECT_NEAR(d.k.back(), pi, 1e-12);
  EXPECT_DOUBLE_EQ(d.d, default_cell_pitch_m);
}
