#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "devices.hpp"
#include "slowline/band_structure.hpp"
#include "slowline/error.hpp"

using namespace slowline;
using namespace slowline::testing;

TEST(circuit, single_cell_matches_textbook_two_port) {
  const unit_cell c = test_cell();
  const array_spec s = uniform_array(c, 1);
  const double z0 = 50.0;
  for (double w : linspace(0.95 * c.omega0(), 1.01 * c.omega0(), 7)) {
    const cplx zc = 1.0 / cplx(0.0, w * c.cg);
    const cplx y = cplx(0.0, w * c.c0) + 1.0 / cplx(0.0, w * c.l0);
    const cplx a = 1.0 + zc * y, b = 2.0 * zc + zc * zc * y, cc = y, d = 1.0 + zc * y;
    const cplx s21 = 2.0 / (a + b / z0 + cc * z0 + d);
    const two_port_response r = cascade_abcd(s, {w});
    EXPECT_NEAR(std::abs(r.s21[0] - s21), 0.0, 1e-12);
  }
}

TEST(circuit, reciprocity_holds_for_lossy_and_lossless_arrays) {
  array_spec lossy = test_device();
  lossy.interior.q_internal = 1e4;
  for (const array_spec& s : {test_device(), lossy}) {
    const ladder net = to_ladder(s);
    for (double w : default_grid(s.interior, 101)) {
      const abcd m = array_abcd(net, w);
      const double scale = std::max({1.0, std::abs(m.a * m.d), std::abs(m.b * m.c)});
      EXPECT_LT(std::abs(m.det() - 1.0) / scale, 1e-9);
    }
  }
}

TEST(circuit, lossless_array_conserves_energy) {
  const array_spec s = test_device();
  const two_port_response r = cascade_abcd(s, default_grid(s.interior));
  for (std::size_t i = 0; i < r.omega.size(); ++i) {
    ASSERT_TRUE(r.ok[i]);
    EXPECT_NEAR(std::norm(r.s21[i]) + std::norm(r.s11[i]), 1.0, 1e-8);
  }
}

TEST(circuit, lossy_array_is_passive) {
  array_spec s = test_device();
  s.interior.q_internal = 2e3;
  const two_port_response r = cascade_abcd(s, default_grid(s.interior, 401));
  for (std::size_t i = 0; i < r.omega.size(); ++i) EXPECT_LE(std::norm(r.s21[i]) + std::norm(r.s11[i]), 1.0 + 1e-12);
}

TEST(circuit, state_space_transmission_matches_cascade) {
  std::mt19937_64 rng(5);
  array_spec lossy = test_device();
  lossy.interior.q_internal = 5e4;
  for (const array_spec& s : {test_device(), lossy, uniform_array(test_cell(), 9)}) {
    const state_space_model m = assemble_state_space(s);
    std::uniform_real_distribution<double> u(0.96 * s.interior.omega0(), 1.01 * s.interior.omega0());
    for (int i = 0; i < 25; ++i) {
      const double w = u(rng);
      const cplx a = cascade_abcd(s, {w}).s21[0];
      const cplx b = harmonic_s21(m, w);
      EXPECT_NEAR(std::abs(b) / std::abs(a), 1.0, 1e-6);
    }
  }
}

TEST(circuit, fitted_test_device_delay) {
  const array_spec s = test_device();
  const double c = band_center(s.interior), b = bandwidth(s.interior);
  const std::vector<double> gd = group_delay(cascade_abcd(s, linspace(c - 0.01 * b, c + 0.01 * b, 21)));
  EXPECT_NEAR(gd[10], 55e-9, 0.1 * 55e-9);
}

TEST(circuit, bend_replaces_one_link) {
  array_spec s = uniform_array(test_cell(), 10);
  s.bend = bend_spec{4, 2.0 * fF};
  const ladder net = to_ladder(s);
  EXPECT_DOUBLE_EQ(net.coupling[4], 2.0 * fF);
  EXPECT_DOUBLE_EQ(net.coupling[3], test_cell().cg);
  EXPECT_DOUBLE_EQ(net.coupling[5], test_cell().cg);
}

TEST(circuit, validation_rejects_bad_specs) {
  array_spec s = uniform_array(test_cell(), 10);
  s.bend = bend_spec{10, 1.0 * fF};
  EXPECT_THROW(s.validate(), slowline::invalid_argument);
  array_spec t = test_device();
  t.boundary_in[1].c_left = 1.0 * fF;
  EXPECT_THROW(t.validate(), slowline::invalid_argument);
  array_spec u = uniform_array(test_cell(), 3);
  u.inductance_override = {1e-9};
  EXPECT_THROW(u.validate(), slowline::invalid_argument);
  unit_cell bad = test_cell();
  bad.c0 = -1.0;
  EXPECT_THROW(bad.validate(), slowline::invalid_argument);
}

TEST(circuit, bloch_wavenumber_at_band_edges) {
  unit_cell c{70.0 * fF, 1.0 * fF, 3e-9};
  const double w0 = c.omega0();
  const std::vector<bloch_point> top = bloch_analysis(c, {w0 * (1.0 - 1e-12)});
  EXPECT_NEAR(top[0].k.imag(), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(top[0].k), 0.0, 1e-4);
  const double lo = w0 / std::sqrt(1.0 + 4.0 / 70.0);
  const std::vector<bloch_point> bottom = bloch_analysis(c, {lo * (1.0 + 1e-12)});
  EXPECT_NEAR(std::abs(bottom[0].k.real()), pi, 1e-4);
}

TEST(circuit, bloch_wavenumber_inverts_dispersion) {
  const unit_cell c = test_cell();
  const std::vector<double> grid = linspace(lower_band_edge(c) * 1.0001, upper_band_edge(c) * 0.9999, 200);
  const std::vector<bloch_point> b = bloch_analysis(c, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_LE(b[i].k.real(), 0.0);
    EXPECT_NEAR(b[i].k.imag(), 0.0, 1e-9);
    EXPECT_NEAR(dispersion(c, std::abs(b[i].k.real())) / grid[i], 1.0, 1e-6);
    EXPECT_GE(b[i].z_bloch.real(), 0.0);
  }
}

TEST(circuit, bloch_wave_has_positive_group_delay) {
  const unit_cell c = test_cell();
  const double w = band_center(c), dw = 1e-6 * w;
  const std::vector<bloch_point> b = bloch_analysis(c, {w - dw, w + dw});
  const double delay = (b[1].k.real() - b[0].k.real()) / (2.0 * dw);
  EXPECT_GT(delay, 0.0);
  EXPECT_NEAR(delay, 1.0 / std::abs(group_velocity(c, wavenumber(c, w))), 1e-6 * delay);
}

TEST(circuit, evanescent_outside_band) {
  const unit_cell c = test_cell();
  const std::vector<bloch_point> b = bloch_analysis(c, {1.01 * c.omega0(), 0.97 * lower_band_edge(c)});
  EXPECT_LT(b[0].k.imag(), 0.0);
  EXPECT_LT(b[1].k.imag(), 0.0);
}

TEST(circuit, group_delay_of_linear_phase) {
  two_port_response r;
  const double tau = 3e-9;
  r.omega = linspace(1e10, 1.1e10, 50);
  for (double w : r.omega) {
    r.s21.push_back(std::exp(cplx(0.0, -w * tau)));
    r.s11.push_back(0.0);
    r.ok.push_back(true);
  }
  for (double g : group_delay(r)) EXPECT_NEAR(g, tau, 1e-15);
}
