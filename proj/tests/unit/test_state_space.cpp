#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "devices.hpp"
#include "slowline/band_structure.hpp"
#include "slowline/disorder.hpp"
#include "slowline/error.hpp"

using namespace slowline;
using namespace slowline::testing;

TEST(state_space, open_mirror_drops_one_dissipative_row) {
  array_spec s = test_device();
  const state_space_model matched = assemble_state_space(s);
  s.termination_out = termination::open_mirror;
  const state_space_model mirror = assemble_state_space(s);
  auto nonzero_rows = [](const Eigen::MatrixXd& g) {
    int n = 0;
    for (int i = 0; i < g.rows(); ++i) n += g.row(i).cwiseAbs().maxCoeff() > 0.0 ? 1 : 0;
    return n;
  };
  EXPECT_EQ(nonzero_rows(matched.dissipation) - nonzero_rows(mirror.dissipation), 1);
}

TEST(state_space, single_emitter_coupling_adds_one_off_diagonal_pair) {
  const array_spec s = test_device();
  circuit_emitter e;
  e.c_sigma = 77.8 * fF;
  e.couplings = {{3, 1.9 * fF}};
  e.omega_ge = s.interior.omega0();
  const state_space_model m = assemble_state_space(s, e);
  const int q = m.emitter_node;
  int pairs = 0;
  for (int i = 0; i < m.nodes(); ++i) {
    if (i != q && m.capacitance(q, i) != 0.0) {
      ++pairs;
      EXPECT_DOUBLE_EQ(m.capacitance(q, i), -1.9 * fF);
      EXPECT_EQ(i, m.cell_nodes[2]);
    }
  }
  EXPECT_EQ(pairs, 1);
}

TEST(state_space, emitter_coupling_outside_array_is_rejected) {
  circuit_emitter e = qubit_emitter(3e10);
  e.couplings = {{99, 1.0 * fF}};
  EXPECT_THROW(assemble_state_space(test_device(), e), slowline::invalid_argument);
}

TEST(state_space, eigenvalues_are_passive) {
  const array_spec s = qubit_device();
  const state_space_model m = assemble_state_space(s, qubit_emitter(band_center(s.interior)));
  for (const cplx& l : system_eigenvalues(m)) EXPECT_LE(l.real(), 1e-6 * std::abs(l));
}

TEST(state_space, lossless_network_without_ports_conserves_energy) {
  array_spec s = test_device();
  s.port_impedance = 1e30;
  circuit_emitter e = qubit_emitter(band_center(s.interior));
  e.q_intrinsic = infinite_q;
  const state_space_model m = assemble_state_space(s, e);
  for (const cplx& l : system_eigenvalues(m)) {
    if (std::abs(l) > 1e6) {
      EXPECT_LT(std::abs(l.real()) / std::abs(l), 1e-8);
    }
  }
}

TEST(state_space, normal_modes_match_transmission_peaks) {
  const array_spec s = test_device();
  const std::vector<double> modes = normal_mode_frequencies(lossless(assemble_state_space(s)));
  ASSERT_EQ(static_cast<int>(modes.size()), s.total_cells());
  const two_port_response r = cascade_abcd(s, linspace(band_center(s.interior) - 0.3 * bandwidth(s.interior),
                                                       band_center(s.interior) + 0.3 * bandwidth(s.interior), 20001));
  const std::vector<double> peaks = find_ripple_peaks(r, r.omega.front(), r.omega.back(), 1e-4);
  ASSERT_GE(peaks.size(), 3u);
  for (double p : peaks) {
    double best = 1.0;
    for (double w : modes) best = std::min(best, std::abs(w / p - 1.0));
    EXPECT_LT(best, 1e-3);
  }
}

TEST(state_space, uniform_chain_converges_to_dispersion) {
  const unit_cell c = test_cell();
  double previous = 1.0;
  for (int n : {5, 11, 21}) {
    const std::vector<double> modes = normal_mode_frequencies(lossless(assemble_state_space(uniform_array(c, n))));
    double worst = 0.0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(modes[i] / dispersion(c, pi * (n - i) / (n + 1.0)) - 1.0));
    EXPECT_LE(worst, previous + 1e-15);
    EXPECT_LT(worst, 1e-9);
    previous = worst;
  }
}

TEST(state_space, emitter_inductance_sets_local_frequency) {
  const array_spec s = test_device();
  const double w = 3.0e10;
  const state_space_model m = assemble_state_space(s, qubit_emitter(w));
  const Eigen::MatrixXd ci = m.capacitance.inverse();
  const int q = m.emitter_node;
  EXPECT_NEAR(std::sqrt(ci(q, q) * m.inverse_inductance(q, q)) / w, 1.0, 1e-12);
  EXPECT_NEAR(emitter_inverse_inductance(m, w) / m.inverse_inductance(q, q), 1.0, 1e-12);
}
