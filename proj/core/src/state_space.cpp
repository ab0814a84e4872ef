#include "slowline/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slowline/error.hpp"

namespace slowline {

void circuit_emitter::validate() const {
  if (!(std::isfinite(c_sigma) && c_sigma > 0.0)) throw invalid_argument("emitter: c_sigma must be positive");
  if (!(std::isfinite(omega_ge) && omega_ge > 0.0)) throw invalid_argument("emitter: omega_ge must be positive");
  if (!(q_intrinsic > 0.0)) throw invalid_argument("emitter: q_intrinsic must be positive");
  for (const auto& [cell, c] : couplings) {
    if (!(std::isfinite(c) && c >= 0.0)) {
      std::ostringstream os;
      os << "emitter: coupling to cell " << cell << " must be non-negative";
      throw invalid_argument(os.str());
    }
  }
}

std::vector<int> state_space_model::inductive_nodes() const {
  std::vector<int> out;
  for (int i = 0; i < nodes(); ++i) {
    if (inverse_inductance(i, i) > 0.0) out.push_back(i);
  }
  return out;
}

namespace {

void add_cap(Eigen::MatrixXd& c, int i, int j, double value) {
  c(i, i) += value;
  if (j >= 0) {
    c(j, j) += value;
    c(i, j) -= value;
    c(j, i) -= value;
  }
}

}  // namespace

state_space_model assemble_state_space(const array_spec& spec, const std::optional<circuit_emitter>& emitter) {
  const ladder net = to_ladder(spec);
  const int n = net.size();
  const bool mirror = spec.termination_out == termination::open_mirror;
  const bool has_emitter = emitter.has_value();
  if (has_emitter) emitter->validate();

  state_space_model m;
  m.port_impedance = net.port_impedance;
  const int total = n + 1 + (has_emitter ? 1 : 0) + (mirror ? 0 : 1);
  m.capacitance = Eigen::MatrixXd::Zero(total, total);
  m.inverse_inductance = Eigen::MatrixXd::Zero(total, total);
  m.dissipation = Eigen::MatrixXd::Zero(total, total);
  m.node_names.push_back("port_in");
  for (int i = 0; i < n; ++i) {
    m.cell_nodes.push_back(i + 1);
    m.node_names.push_back("cell_" + std::to_string(i + 1));
  }
  if (has_emitter) {
    m.emitter_node = n + 1;
    m.node_names.push_back("emitter");
  }
  if (!mirror) {
    m.output_node = total - 1;
    m.node_names.push_back("port_out");
  }

  m.dissipation(0, 0) = 1.0 / net.port_impedance;
  add_cap(m.capacitance, 0, 1, net.coupling[0]);
  for (int i = 0; i < n; ++i) {
    add_cap(m.capacitance, i + 1, -1, net.shunt[i]);
    m.inverse_inductance(i + 1, i + 1) = 1.0 / net.inductance[i];
    m.dissipation(i + 1, i + 1) = net.conductance(i);
    if (i + 1 < n) add_cap(m.capacitance, i + 1, i + 2, net.coupling[i + 1]);
  }
  if (!mirror) {
    add_cap(m.capacitance, m.output_node, n, net.coupling[n]);
    m.dissipation(m.output_node, m.output_node) = 1.0 / net.port_impedance;
  }

  if (has_emitter) {
    const int q = m.emitter_node;
    add_cap(m.capacitance, q, -1, emitter->c_sigma);
    for (const auto& [cell, c] : emitter->couplings) {
      if (cell < 1 || cell > n) {
        std::ostringstream os;
        os << "emitter coupling names cell " << cell << " but the array has " << n << " cells";
        throw invalid_argument(os.str());
      }
      if (c == 0.0) continue;
      add_cap(m.capacitance, q, cell, c);
      if (emitter->compensate_loading) m.capacitance(cell, cell) -= c;
    }
    m.inverse_inductance(q, q) = emitter_inverse_inductance(m, emitter->omega_ge);
    if (std::isfinite(emitter->q_intrinsic)) {
      m.dissipation(q, q) = std::sqrt(m.capacitance(q, q) * m.inverse_inductance(q, q)) / emitter->q_intrinsic;
    }
  }

  for (int i = 0; i < total; ++i) {
    if (!(m.capacitance(i, i) > 0.0)) throw invalid_argument("node " + m.node_names[i] + " is disconnected");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m.capacitance);
  if (llt.info() != Eigen::Success) throw invalid_argument("capacitance matrix is not positive definite");
  return m;
}

double emitter_inverse_inductance(const state_space_model& m, double omega) {
  if (m.emitter_node < 0) throw invalid_argument("model has no emitter");
  const Eigen::MatrixXd cinv = m.capacitance.inverse();
  const double cqq = cinv(m.emitter_node, m.emitter_node);
  return omega * omega / cqq;
}

state_space_model lossless(const state_space_model& m) {
  state_space_model out = m;
  out.dissipation.setZero();
  return out;
}

Eigen::MatrixXd state_matrix(const state_space_model& m) {
  const std::vector<int> ind = m.inductive_nodes();
  const int k = static_cast<int>(ind.size());
  const int n = m.nodes();
  const Eigen::MatrixXd cinv = m.capacitance.inverse();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k + n, k + n);
  for (int r = 0; r < k; ++r) a(r, k + ind[r]) = 1.0;
  for (int c = 0; c < k; ++c) {
    a.block(k, c, n, 1) = -(cinv * m.inverse_inductance.col(ind[c]));
  }
  a.block(k, k, n, n) = -cinv * m.dissipation;
  return a;
}

double characteristic_frequency(const state_space_model& m) {
  const Eigen::MatrixXd cinv = m.capacitance.inverse();
  double w = 0.0;
  for (int i : m.inductive_nodes()) w = std::max(w, std::sqrt(cinv(i, i) * m.inverse_inductance(i, i)));
  if (!(w > 0.0)) throw invalid_argument("characteristic_frequency: network has no inductive node");
  return w;
}

Eigen::MatrixXd scaled_state_matrix(const state_space_model& m, double omega_s) {
  const int k = static_cast<int>(m.inductive_nodes().size());
  Eigen::MatrixXd a = state_matrix(m);
  a.topRows(k) *= omega_s;
  a.leftCols(k) /= omega_s;
  return a / omega_s;
}

cplx harmonic_s21(const state_space_model& m, double omega) {
  if (m.output_node < 0) throw invalid_argument("harmonic_s21 needs an output port");
  const cplx jw(0.0, omega);
  Eigen::MatrixXcd y = jw * m.capacitance.cast<cplx>() + m.dissipation.cast<cplx>() +
                       m.inverse_inductance.cast<cplx>() / jw;
  Eigen::VectorXcd i = Eigen::VectorXcd::Zero(m.nodes());
  i(m.input_node) = 1.0 / m.port_impedance;
  const Eigen::VectorXcd v = y.partialPivLu().solve(i);
  return 2.0 * v(m.output_node);
}

std::vector<double> normal_mode_frequencies(const state_space_model& m) {
  const std::vector<int> ind = m.inductive_nodes();
  const int k = static_cast<int>(ind.size());
  Eigen::MatrixXd c(k, k), g(k, k);
  for (int r = 0; r < k; ++r) {
    for (int s = 0; s < k; ++s) {
      c(r, s) = m.capacitance(ind[r], ind[s]);
      g(r, s) = m.inverse_inductance(ind[r], ind[s]);
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(g, c);
  if (es.info() != Eigen::Success) throw error("normal mode eigensolver failed");
  std::vector<double> out(k);
  for (int i = 0; i < k; ++i) out[i] = std::sqrt(std::max(0.0, es.eigenvalues()(i)));
  return out;
}

std::vector<cplx> system_eigenvalues(const state_space_model& m) {
  const double ws = characteristic_frequency(m);
  Eigen::EigenSolver<Eigen::MatrixXd> es(scaled_state_matrix(m, ws), false);
  if (es.info() != Eigen::Success) throw error("state matrix eigensolver failed");
  std::vector<cplx> out(es.eigenvalues().size());
  for (int i = 0; i < es.eigenvalues().size(); ++i) out[i] = ws * es.eigenvalues()(i);
  return out;
}

}  // namespace slowline
