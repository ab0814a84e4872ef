#include "slowline/dynamics.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <sstream>

#include "slowline/band_structure.hpp"
#include "slowline/error.hpp"
#include "slowline/parallel.hpp"

namespace slowline {

void protocol::validate() const {
  if (!(std::isfinite(omega_interact) && omega_interact > 0.0)) throw invalid_argument("protocol: omega_interact must be positive");
  if (!(std::isfinite(t_max) && t_max > 0.0)) throw invalid_argument("protocol: t_max must be positive");
  if (!(std::isfinite(dt_output) && dt_output > 0.0 && dt_output <= t_max)) {
    throw invalid_argument("protocol: dt_output must lie in (0, t_max]");
  }
  if (!(initial_excited_population >= 0.0 && initial_excited_population <= 1.0)) {
    throw invalid_argument("protocol: initial_excited_population must lie in [0, 1]");
  }
  if (mod && !(mod->epsilon >= 0.0 && mod->omega_mod >= 0.0)) throw invalid_argument("protocol: modulation must be non-negative");
  if (!(tune_time >= 0.0)) throw invalid_argument("protocol: tune_time must be non-negative");
  if (!(max_step >= 0.0)) throw invalid_argument("protocol: max_step must be non-negative");
}

int protocol::samples() const { return static_cast<int>(std::floor(t_max / dt_output + 1e-9)) + 1; }

namespace {

// Eigen-decomposed state-space system with the emitter readout rows projected on the modes.
struct modal_system {
  Eigen::VectorXcd lambda;
  Eigen::MatrixXcd vinv;
  Eigen::RowVectorXcd phi_row;  // emitter flux
  Eigen::RowVectorXcd q_row;    // emitter node charge
  Eigen::VectorXcd drive;       // modal image of a unit change in the emitter inverse inductance
  double cinv_qq = 0.0;
  double gamma_base = 0.0;
  int state_size = 0;
  int emitter_flux_index = -1;
  double reconstruction_error = 0.0;
};

modal_system decompose(const state_space_model& m) {
  const std::vector<int> ind = m.inductive_nodes();
  const int k = static_cast<int>(ind.size());
  const int n = m.nodes();
  const double ws = characteristic_frequency(m);
  Eigen::EigenSolver<Eigen::MatrixXd> es(scaled_state_matrix(m, ws), true);
  if (es.info() != Eigen::Success) throw error("state matrix eigensolver failed");
  modal_system s;
  s.state_size = k + n;
  s.lambda = ws * es.eigenvalues();
  Eigen::MatrixXcd v = es.eigenvectors();
  Eigen::MatrixXcd vinv = v.inverse();
  s.reconstruction_error = (v * vinv - Eigen::MatrixXcd::Identity(k + n, k + n)).cwiseAbs().maxCoeff();
  v.topRows(k) /= ws;
  vinv.leftCols(k) *= ws;
  s.vinv = vinv;
  const int q = m.emitter_node;
  s.emitter_flux_index = static_cast<int>(std::find(ind.begin(), ind.end(), q) - ind.begin());
  s.phi_row = v.row(s.emitter_flux_index);
  s.q_row = m.capacitance.row(q).cast<cplx>() * v.bottomRows(n);
  const Eigen::MatrixXd cinv = m.capacitance.inverse();
  s.cinv_qq = cinv(q, q);
  s.gamma_base = m.inverse_inductance(q, q);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(k + n);
  b.tail(n) = -cinv.col(q).cast<cplx>();
  s.drive = s.vinv * b;
  return s;
}

double action(const modal_system& s, const Eigen::VectorXcd& y, double gamma_q) {
  const double z = std::sqrt(s.cinv_qq / gamma_q);
  const double phi = (s.phi_row * y)(0).real();
  const double q = (s.q_row * y)(0).real();
  return phi * phi / (2.0 * z) + 0.5 * z * q * q;
}

Eigen::VectorXcd initial_modal_state(const modal_system& s, double gamma_q, double p0) {
  const double z = std::sqrt(s.cinv_qq / gamma_q);
  return s.vinv.col(s.emitter_flux_index) * std::sqrt(2.0 * z * p0);
}

struct frequency_schedule {
  double omega_interact;
  double omega_start;
  double tune_time;
  std::optional<modulation> mod;

  double operator()(double t) const {
    double w = omega_interact;
    if (tune_time > 0.0 && t < tune_time) w = omega_start + (omega_interact - omega_start) * t / tune_time;
    if (mod) w += mod->epsilon * std::cos(mod->omega_mod * t);
    return w;
  }
};

std::vector<double> rk4_run(const modal_system& s, const frequency_schedule& sched, const protocol& proto, double h,
                            int substeps) {
  const int n_out = proto.samples();
  std::vector<double> out(n_out);
  auto gamma_at = [&](double t) {
    const double w = sched(t);
    return w * w / s.cinv_qq;
  };
  Eigen::VectorXcd y = initial_modal_state(s, gamma_at(0.0), proto.initial_excited_population);
  Eigen::VectorXcd k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
  auto rhs = [&](double t, const Eigen::VectorXcd& x, Eigen::VectorXcd& dx) {
    const cplx flux = (s.phi_row * x)(0);
    const double delta = gamma_at(t) - s.gamma_base;
    dx = s.lambda.cwiseProduct(x) + (delta * flux) * s.drive;
  };
  out[0] = action(s, y, gamma_at(0.0));
  double t = 0.0;
  for (int i = 1; i < n_out; ++i) {
    for (int j = 0; j < substeps; ++j) {
      rhs(t, y, k1);
      tmp = y + 0.5 * h * k1;
      rhs(t + 0.5 * h, tmp, k2);
      tmp = y + 0.5 * h * k2;
      rhs(t + 0.5 * h, tmp, k3);
      tmp = y + h * k3;
      rhs(t + h, tmp, k4);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t = (static_cast<double>(i - 1) * substeps + j + 1) * h;
    }
    out[i] = action(s, y, gamma_at(t));
  }
  return out;
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void fill_metadata(dynamics_trace& tr, const protocol& p) {
  tr.metadata["omega_interact_rad_s"] = format_double(p.omega_interact);
  tr.metadata["t_max_s"] = format_double(p.t_max);
  tr.metadata["initial_excited_population"] = format_double(p.initial_excited_population);
  tr.metadata["tune_time_s"] = format_double(p.tune_time);
  if (p.mod) {
    tr.metadata["omega_mod_rad_s"] = format_double(p.mod->omega_mod);
    tr.metadata["epsilon_rad_s"] = format_double(p.mod->epsilon);
  }
}

}  // namespace

dynamics_trace simulate_emission(const array_spec& spec, const circuit_emitter& emitter, const protocol& proto) {
  proto.validate();
  circuit_emitter em = emitter;
  em.omega_ge = proto.omega_interact;
  const state_space_model model = assemble_state_space(spec, em);
  const modal_system s = decompose(model);

  dynamics_trace tr;
  tr.metadata["termination"] = spec.termination_out == termination::matched ? "matched" : "open_mirror";
  fill_metadata(tr, proto);
  const int n_out = proto.samples();
  tr.t.resize(n_out);
  for (int i = 0; i < n_out; ++i) tr.t[i] = i * proto.dt_output;

  const bool time_varying = (proto.mod && proto.mod->epsilon > 0.0) || (proto.tune_time > 0.0 && proto.omega_start);
  if (!time_varying) {
    tr.method = "modal";
    const Eigen::VectorXcd y0 = initial_modal_state(s, s.gamma_base, proto.initial_excited_population);
    tr.p_e.resize(n_out);
    for (int i = 0; i < n_out; ++i) {
      const Eigen::VectorXcd y = (s.lambda * tr.t[i]).array().exp().matrix().cwiseProduct(y0);
      tr.p_e[i] = action(s, y, s.gamma_base);
    }
    tr.error_estimate = s.reconstruction_error;
    tr.converged = s.reconstruction_error < 1e-6;
    return tr;
  }

  tr.method = "rk4";
  frequency_schedule sched{proto.omega_interact, proto.omega_start.value_or(proto.omega_interact), proto.tune_time,
                           proto.mod};
  double h_max = proto.max_step;
  if (h_max <= 0.0) h_max = 1.0 / (50.0 * s.lambda.imag().cwiseAbs().maxCoeff());
  int substeps = static_cast<int>(std::ceil(proto.dt_output / h_max));
  if (substeps % 2) ++substeps;
  const double h = proto.dt_output / substeps;
  tr.p_e = rk4_run(s, sched, proto, h, substeps);
  const std::vector<double> coarse = rk4_run(s, sched, proto, 2.0 * h, substeps / 2);
  double err = 0.0;
  for (int i = 0; i < n_out; ++i) err = std::max(err, std::abs(tr.p_e[i] - coarse[i]) / 15.0);
  tr.error_estimate = err;
  tr.converged = err < 1e-5 && s.reconstruction_error < 1e-6;
  return tr;
}

dynamics_trace simulate_mirror(const array_spec& spec, const circuit_emitter& emitter, const protocol& proto) {
  if (spec.termination_out != termination::open_mirror) throw invalid_argument("simulate_mirror needs an open_mirror termination");
  return simulate_emission(spec, emitter, proto);
}

dynamics_trace simulate_modulated(const array_spec& spec, const circuit_emitter& emitter, const protocol& proto) {
  if (!proto.mod) throw invalid_argument("simulate_modulated needs a modulation");
  return simulate_emission(spec, emitter, proto);
}

dynamics_trace simulate_single_excitation(const array_spec& spec, const circuit_emitter& emitter,
                                          const protocol& proto) {
  proto.validate();
  if (proto.mod || proto.tune_time > 0.0) throw invalid_argument("simulate_single_excitation supports static protocols only");
  circuit_emitter em = emitter;
  em.omega_ge = proto.omega_interact;
  const state_space_model m = assemble_state_space(spec, em);
  const std::vector<int> keep = m.inductive_nodes();
  const int n = static_cast<int>(keep.size());
  std::vector<int> pos(m.nodes(), -1);
  for (int i = 0; i < n; ++i) pos[keep[i]] = i;

  Eigen::MatrixXd c(n, n);
  Eigen::VectorXd g(n), li(n);
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) c(r, s) = m.capacitance(keep[r], keep[s]);
    g(r) = m.dissipation(keep[r], keep[r]);
    li(r) = m.inverse_inductance(keep[r], keep[r]);
  }
  const double w = proto.omega_interact;
  for (int p = 0; p < m.nodes(); ++p) {
    if (pos[p] >= 0) continue;
    const double r_port = 1.0 / m.dissipation(p, p);
    for (int i = 0; i < m.nodes(); ++i) {
      if (i == p || pos[i] < 0) continue;
      const double cc = -m.capacitance(p, i);
      if (cc <= 0.0) continue;
      const double x = w * cc * r_port;
      const int a = pos[i];
      c(a, a) += -cc + cc / (1.0 + x * x);
      g(a) += w * w * cc * cc * r_port / (1.0 + x * x);
    }
  }
  const Eigen::MatrixXd ci = c.inverse();
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = std::sqrt(ci(i, i) / li(i));

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  a.topRightCorner(n, n) = ci;
  a.bottomLeftCorner(n, n) = -li.asDiagonal().toDenseMatrix();
  a.bottomRightCorner(n, n) = -(g.asDiagonal() * ci);
  // phi = S (a + a*), q = i R (a* - a) with S = sqrt(Z/2), R = sqrt(1/(2Z)).
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    const double sv = std::sqrt(z(i) / 2.0), rv = std::sqrt(1.0 / (2.0 * z(i)));
    t(i, i) = sv;
    t(i, n + i) = sv;
    t(n + i, i) = cplx(0.0, -rv);
    t(n + i, n + i) = cplx(0.0, rv);
  }
  const Eigen::MatrixXcd ap = t.partialPivLu().solve(a.cast<cplx>() * t);
  const Eigen::MatrixXcd h = cplx(0.0, 1.0) * ap.topLeftCorner(n, n);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw error("effective Hamiltonian eigensolver failed");
  const Eigen::MatrixXcd v = es.eigenvectors();
  const int qi = pos[m.emitter_node];
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(n);
  e0(qi) = 1.0;
  const Eigen::VectorXcd coef = v.partialPivLu().solve(e0);
  const Eigen::VectorXcd row = v.row(qi).transpose().cwiseProduct(coef);

  dynamics_trace tr;
  tr.method = "single_excitation";
  fill_metadata(tr, proto);
  const int n_out = proto.samples();
  for (int i = 0; i < n_out; ++i) {
    const double ti = i * proto.dt_output;
    cplx amp = 0.0;
    for (int k = 0; k < n; ++k) amp += row(k) * std::exp(cplx(0.0, -1.0) * (es.eigenvalues()(k) - w) * ti);
    tr.t.push_back(ti);
    tr.p_e.push_back(proto.initial_excited_population * std::norm(amp));
  }
  tr.error_estimate = std::abs(row.sum() - 1.0);
  tr.converged = tr.error_estimate < 1e-8;
  return tr;
}

dynamics_trace simulate_hamiltonian(const array_spec& spec, const emitter_params& emitter, double t_max,
                                    double dt_output, int m_dft) {
  const single_excitation_spectrum sp = diagonalize_single_excitation(spec, emitter, m_dft);
  const int n = static_cast<int>(sp.energies.size());
  dynamics_trace tr;
  tr.method = "hamiltonian";
  const int n_out = static_cast<int>(std::floor(t_max / dt_output + 1e-9)) + 1;
  const double ref = emitter.omega_ge;
  for (int i = 0; i < n_out; ++i) {
    const double t = i * dt_output;
    cplx amp = 0.0;
    for (int k = 0; k < n; ++k) amp += sp.emitter_weight(k) * std::exp(cplx(0.0, -(sp.energies(k) - ref) * t));
    tr.t.push_back(t);
    tr.p_e.push_back(std::norm(amp));
  }
  return tr;
}

std::vector<dynamics_trace> simulate_sweep(const array_spec& spec, const circuit_emitter& emitter,
                                           const protocol& proto, const std::vector<double>& omegas, int threads) {
  std::vector<dynamics_trace> out(omegas.size());
  parallel_for(omegas.size(), threads, [&](std::size_t i) {
    protocol p = proto;
    p.omega_interact = omegas[i];
    out[i] = simulate_emission(spec, emitter, p);
  });
  return out;
}

double default_mirror_phase(double omega, double tau_d) { return std::fmod(omega * tau_d, two_pi); }

dynamics_trace ideal_mirror_oracle(double gamma_1d, double tau_d, double phase, double t_max, double dt_output) {
  if (!(gamma_1d > 0.0 && tau_d > 0.0)) throw invalid_argument("ideal_mirror_oracle: gamma_1d and tau_d must be positive");
  if (!(t_max > 0.0 && dt_output > 0.0)) throw invalid_argument("ideal_mirror_oracle: bad time grid");
  dynamics_trace tr;
  tr.method = "delay_equation_series";
  const cplx feedback = std::exp(cplx(0.0, phase));
  const int n_out = static_cast<int>(std::floor(t_max / dt_output + 1e-9)) + 1;
  for (int i = 0; i < n_out; ++i) {
    const double t = i * dt_output;
    // Term n is the n-th reflection: ((G/2) e^{i phase})^n (t - n tau)^n / n! exp(-G (t - n tau) / 2).
    cplx c = std::exp(-0.5 * gamma_1d * t);
    for (int n = 1; n * tau_d <= t; ++n) {
      const double x = 0.5 * gamma_1d * (t - n * tau_d);
      const double mag = std::exp(n * std::log(x) - std::lgamma(n + 1.0) - x);
      c += std::pow(feedback, n) * mag;
    }
    tr.t.push_back(t);
    tr.p_e.push_back(std::norm(c));
  }
  return tr;
}

namespace {

struct secular_solution {
  std::vector<double> energy;  // in units of J, relative to omega0
  std::vector<double> weight;
};

secular_solution solve_secular(double omega_eff, const std::vector<double>& poles, const std::vector<double>& c2) {
  const std::size_t n = poles.size();
  auto f = [&](double e) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += c2[j] / (e - poles[j]);
    return e - omega_eff - s;
  };
  auto weight = [&](double e) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = e - poles[j];
      s += c2[j] / (d * d);
    }
    return 1.0 / (1.0 + s);
  };
  double total = 0.0;
  for (double x : c2) total += x;
  const double reach = 2.0 * std::sqrt(total) + 1.0;

  secular_solution out;
  auto solve = [&](double a, double b) {
    double fa = f(a), fb = f(b);
    if (!(fa < 0.0 && fb > 0.0)) {
      // Root pinned to a pole whose coupling is negligible.
      return;
    }
    boost::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(52), iters);
    const double e = 0.5 * (r.first + r.second);
    out.energy.push_back(e);
    out.weight.push_back(weight(e));
  };
  solve(std::min(poles.front(), omega_eff) - reach, poles.front() - 1e-13 * (1.0 + std::abs(poles.front())));
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double gap = poles[j + 1] - poles[j];
    solve(poles[j] + 1e-12 * gap, poles[j + 1] - 1e-12 * gap);
  }
  solve(poles.back() + 1e-13 * (1.0 + std::abs(poles.back())), std::max(poles.back(), omega_eff) + reach);
  return out;
}

std::vector<double> bandedge_population(double g, double j, double detuning, const std::vector<double>& t,
                                        double k_max, int cells) {
  const double dk = two_pi / cells;
  const int n_modes = static_cast<int>(std::floor(k_max / dk));
  const double k_edge = (n_modes + 0.5) * dk;
  // Work in units of J relative to omega0; modes at +-k combine into one symmetric mode.
  std::vector<double> poles, c2;
  for (int m = n_modes; m >= 0; --m) {
    const double k = m * dk;
    poles.push_back(-k * k);
    const double gj = (g / j) * std::sqrt(dk / two_pi);
    c2.push_back(m == 0 ? gj * gj : 2.0 * gj * gj);
  }
  const double tail = (g / j) * (g / j) / (pi * k_edge);
  const secular_solution s = solve_secular(detuning / j + tail, poles, c2);
  std::vector<double> p(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    cplx amp = 0.0;
    for (std::size_t n = 0; n < s.energy.size(); ++n) amp += s.weight[n] * std::exp(cplx(0.0, -s.energy[n] * j * t[i]));
    p[i] = std::norm(amp);
  }
  return p;
}

}  // namespace

dynamics_trace bandedge_oracle(double g_uc, double j, double omega0, double detuning, double t_max, double dt_output,
                               const bandedge_oracle_options& opt) {
  if (!(j > 0.0 && g_uc >= 0.0 && omega0 > 0.0)) throw invalid_argument("bandedge_oracle: need J > 0, g >= 0, omega0 > 0");
  dynamics_trace tr;
  tr.method = "bandedge_secular";
  const int n_out = static_cast<int>(std::floor(t_max / dt_output + 1e-9)) + 1;
  for (int i = 0; i < n_out; ++i) tr.t.push_back(i * dt_output);
  if (g_uc == 0.0) {
    tr.p_e.assign(n_out, 1.0);
    return tr;
  }
  tr.p_e = bandedge_population(g_uc, j, detuning, tr.t, opt.k_max, opt.cells);
  if (opt.check_convergence) {
    const std::vector<double> fine = bandedge_population(g_uc, j, detuning, tr.t, opt.k_max, 2 * opt.cells);
    double diff = 0.0;
    for (int i = 0; i < n_out; ++i) diff = std::max(diff, std::abs(fine[i] - tr.p_e[i]));
    tr.error_estimate = diff;
    if (diff > 0.01) {
      std::ostringstream os;
      os << "bandedge_oracle: populations with " << opt.cells << " and " << 2 * opt.cells
         << " cells differ by " << diff << "; increase the mode count";
      throw convergence_error(os.str());
    }
  }
  tr.metadata["omega0_rad_s"] = format_double(omega0);
  return tr;
}

double lifetime_1e(const dynamics_trace& tr) {
  if (tr.p_e.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double target = tr.p_e.front() / std::exp(1.0);
  for (std::size_t i = 1; i < tr.p_e.size(); ++i) {
    if (tr.p_e[i] < target) {
      const double f = (tr.p_e[i - 1] - target) / (tr.p_e[i - 1] - tr.p_e[i]);
      return tr.t[i - 1] + f * (tr.t[i] - tr.t[i - 1]);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double effective_rate(const dynamics_trace& tr, double t_lo, double t_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    if (tr.t[i] < t_lo || tr.t[i] > t_hi || !(tr.p_e[i] > 0.0)) continue;
    const double x = tr.t[i], y = std::log(tr.p_e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) throw invalid_argument("effective_rate: fit window holds fewer than 3 samples");
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope;
}

double deviation_onset(const dynamics_trace& tr, const dynamics_trace& ref, double threshold, double t_min) {
  const std::size_t n = std::min(tr.t.size(), ref.t.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (tr.t[i] < t_min) continue;
    if (std::abs(tr.p_e[i] - ref.p_e[i]) > threshold) return tr.t[i];
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> revival_onsets(const dynamics_trace& tr, const dynamics_trace& ref, double threshold,
                                   double rise_fraction, double t_min) {
  if (!(rise_fraction > 0.0 && rise_fraction < 1.0)) throw invalid_argument("revival_onsets: rise_fraction must lie in (0, 1)");
  std::vector<double> out;
  const double first = deviation_onset(tr, ref, threshold, t_min);
  if (std::isnan(first)) return out;
  out.push_back(first);
  const std::size_t n = tr.t.size();
  std::size_t i = 0;
  while (i < n && tr.t[i] < first) ++i;
  while (i < n) {
    // Peak of the current revival: maximum reached before p_e drops below the fraction of it.
    double peak = tr.p_e[i];
    for (; i < n; ++i) {
      peak = std::max(peak, tr.p_e[i]);
      if (tr.p_e[i] < rise_fraction * peak) break;
    }
    const double level = rise_fraction * peak;
    while (i < n && tr.p_e[i] <= level) ++i;
    if (i >= n) break;
    std::size_t start = i;
    while (start > 0 && tr.p_e[start - 1] <= tr.p_e[start]) --start;
    out.push_back(tr.t[start]);
  }
  return out;
}

double round_trip_delay(const array_spec& spec, int emitter_cell, double omega) {
  const int n = spec.total_cells();
  if (emitter_cell < 1 || emitter_cell > n) throw invalid_argument("round_trip_delay: emitter cell outside the array");
  const unit_cell& cell = spec.interior;
  if (!(omega > lower_band_edge(cell) && omega < upper_band_edge(cell))) {
    throw invalid_argument("round_trip_delay: frequency outside the passband");
  }
  const double per_cell = 1.0 / std::abs(group_velocity(cell, wavenumber(cell, omega)));
  return 2.0 * per_cell * (n - emitter_cell + 0.5);
}

}  // namespace slowline
