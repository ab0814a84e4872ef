#include "slowline/dressed_states.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <sstream>
#include <unsupported/Eigen/Polynomials>

#include "slowline/band_structure.hpp"
#include "slowline/error.hpp"

namespace slowline {

void emitter_params::validate() const {
  if (!(std::isfinite(omega_ge) && omega_ge > 0.0)) throw invalid_argument("emitter: omega_ge must be positive");
  if (!(std::isfinite(g_uc) && g_uc >= 0.0)) throw invalid_argument("emitter: g_uc must be non-negative");
  if (!(q_intrinsic > 0.0)) throw invalid_argument("emitter: q_intrinsic must be positive");
}

double effective_curvature(const unit_cell& cell, const dressed_options& opt) {
  if (opt.j > 0.0) return opt.j;
  if (opt.edge == band_edge::upper) return tight_binding(cell).j_tb;
  return lower_edge_curvature(cell);
}

namespace {

double edge_frequency(const unit_cell& cell, band_edge edge) {
  return edge == band_edge::upper ? upper_band_edge(cell) : lower_band_edge(cell);
}

// Integral over the Brillouin zone of f(omega_k), using the k -> -k symmetry.
template <class F>
double zone_average(F f) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, pi, 20, 1e-13, &err);
  return v / pi;
}

cplx exact_first_sheet(cplx e, double g, const unit_cell& cell) {
  const double g2 = g * g;
  const double re = zone_average([&](double k) { return (g2 / (e - dispersion(cell, k))).real(); });
  const double im = e.imag() == 0.0 ? 0.0 : zone_average([&](double k) { return (g2 / (e - dispersion(cell, k))).imag(); });
  return {re, im};
}

// Discontinuity across the passband: -2 i g^2 / |d omega / dk| at the resonant k.
cplx exact_sheet_jump(cplx e, double g, const unit_cell& cell) {
  const double r = cell.ratio();
  const double w0 = cell.omega0();
  const cplx x = w0 / e;
  const cplx s2 = (x * x - 1.0) / (4.0 * r);
  const cplx c = 1.0 - 2.0 * s2;
  const cplx sin_k = std::sqrt(1.0 - c * c);
  return cplx(0.0, -2.0) * g * g * w0 * w0 / (r * e * e * e * sin_k);
}

struct cubic_roots {
  double s_bound;
  cplx s_radiative;
};

// Roots of s^3 + b s - a = 0 with a >= 0, in units where the coefficients are O(1).
cubic_roots solve_cubic(double a, double b) {
  const double scale = std::max(std::cbrt(std::max(a, 0.0)), std::sqrt(std::abs(b)));
  if (scale == 0.0) return {0.0, cplx(0.0, 0.0)};
  const double an = a / (scale * scale * scale);
  const double bn = b / (scale * scale);
  Eigen::Vector4d coeffs(-an, bn, 0.0, 1.0);
  Eigen::PolynomialSolver<double, 3> solver(coeffs);
  std::array<cplx, 3> roots;
  for (int i = 0; i < 3; ++i) {
    cplx s = solver.roots()(i);
    for (int it = 0; it < 8; ++it) {
      const cplx f = s * s * s + bn * s - an;
      const cplx df = 3.0 * s * s + bn;
      if (std::abs(df) == 0.0) break;
      s -= f / df;
    }
    roots[i] = s;
  }
  double s_bound = 0.0;
  bool have_bound = false;
  for (const auto& s : roots) {
    if (std::abs(s.imag()) <= 1e-9 * std::max(1.0, std::abs(s)) && s.real() > 0.0) {
      s_bound = s.real();
      have_bound = true;
    }
  }
  if (!have_bound) {
    if (an > 0.0) throw no_root("dressed states: no positive real root of the edge cubic");
    s_bound = 0.0;
  }
  cplx best(std::numeric_limits<double>::quiet_NaN(), 0.0);
  for (const auto& s : roots) {
    if (!(s.real() < 0.0)) continue;
    const double im = s.imag() >= -1e-12 * std::abs(s) ? std::max(0.0, s.imag()) : -1.0;
    if (im < 0.0) continue;
    const double best_im = std::isnan(best.real()) ? -1.0 : std::max(0.0, best.imag());
    if (im > best_im + 1e-12 || (std::abs(im - best_im) <= 1e-12 && std::abs(s) < std::abs(best))) {
      best = cplx(s.real(), im);
    }
  }
  return {s_bound * scale, best * scale};
}

dressed_state_solution effective_mass_upper(double omega_ge, double g, double edge, double j) {
  dressed_state_solution sol;
  sol.edge = edge;
  sol.j = j;
  const double a = g * g / (2.0 * std::sqrt(j));
  const cubic_roots r = solve_cubic(a, edge - omega_ge);
  sol.e_bound = edge + r.s_bound * r.s_bound;
  sol.e_radiative = edge + r.s_radiative * r.s_radiative;
  if (g == 0.0) {
    sol.e_bound = std::max(omega_ge, edge);
    sol.qubit_weight = omega_ge >= edge ? 1.0 : 0.0;
    sol.e_radiative = omega_ge < edge ? cplx(omega_ge, 0.0) : cplx(edge, 0.0);
  } else {
    sol.qubit_weight = qubit_weight(sol.e_bound, omega_ge, edge);
  }
  const double binding = sol.e_bound - edge;
  sol.localization_length = binding > 0.0 ? std::sqrt(j / binding) : std::numeric_limits<double>::infinity();
  sol.splitting = std::abs(sol.e_bound - edge) + std::abs(sol.e_radiative - edge);
  return sol;
}

}  // namespace

cplx self_energy(cplx e, double g, const unit_cell& cell, const dressed_options& opt, bool second_sheet) {
  cell.validate();
  if (g == 0.0) return {0.0, 0.0};
  if (opt.model == band_model::effective_mass) {
    const double edge = edge_frequency(cell, opt.edge);
    const double j = effective_curvature(cell, opt);
    if (e == cplx(edge, 0.0)) throw invalid_argument("self_energy: singular at the band edge");
    // The lower edge is the mirror image of the upper one.
    const bool upper = opt.edge == band_edge::upper;
    const cplx detuning = upper ? e - edge : edge - e;
    cplx sigma = g * g / (2.0 * std::sqrt(j) * std::sqrt(detuning));
    if (second_sheet) sigma = -sigma;
    return upper ? sigma : -sigma;
  }
  const double lo = lower_band_edge(cell), hi = upper_band_edge(cell);
  if (e.imag() == 0.0 && e.real() >= lo && e.real() <= hi && !second_sheet) {
    throw invalid_argument("self_energy: real energy on the passband needs an analytic continuation");
  }
  cplx sigma = exact_first_sheet(e, g, cell);
  if (second_sheet) sigma += exact_sheet_jump(e, g, cell);
  return sigma;
}

double self_energy_derivative(double e, double g, const unit_cell& cell, const dressed_options& opt) {
  if (opt.model == band_model::effective_mass) {
    const double edge = edge_frequency(cell, opt.edge);
    const double j = effective_curvature(cell, opt);
    const double x = std::abs(e - edge);
    return -g * g / (4.0 * std::sqrt(j) * x * std::sqrt(x));
  }
  return -zone_average([&](double k) {
    const double d = e - dispersion(cell, k);
    return g * g / (d * d);
  });
}

double qubit_weight(double e, double omega_ge, double omega0) {
  if (e == omega0) throw invalid_argument("qubit_weight: singular at the band edge");
  return 1.0 / (1.0 + (e - omega_ge) / (2.0 * (e - omega0)));
}

double localization_length(double e, const unit_cell& cell, const dressed_options& opt) {
  if (opt.model == band_model::effective_mass) {
    const double edge = edge_frequency(cell, opt.edge);
    return std::sqrt(effective_curvature(cell, opt) / std::abs(e - edge));
  }
  const double r = cell.ratio();
  const double x = cell.omega0() / e;
  double kappa;
  if (e > upper_band_edge(cell)) {
    kappa = 2.0 * std::asinh(std::sqrt((1.0 - x * x) / (4.0 * r)));
  } else if (e < lower_band_edge(cell)) {
    kappa = 2.0 * std::acosh(std::sqrt((x * x - 1.0) / (4.0 * r)));
  } else {
    throw invalid_argument("localization_length: energy inside the passband");
  }
  return 1.0 / kappa;
}

dressed_state_solution solve_dressed_states(const emitter_params& emitter, const unit_cell& cell,
                                            const dressed_options& opt) {
  emitter.validate();
  cell.validate();
  const double edge = edge_frequency(cell, opt.edge);
  const double j = effective_curvature(cell, opt);
  const double g = emitter.g_uc;

  dressed_state_solution sol;
  if (opt.edge == band_edge::upper) {
    sol = effective_mass_upper(emitter.omega_ge, g, edge, j);
  } else {
    sol = effective_mass_upper(2.0 * edge - emitter.omega_ge, g, edge, j);
    sol.e_bound = 2.0 * edge - sol.e_bound;
    sol.e_radiative = 2.0 * edge - std::conj(sol.e_radiative);
  }
  if (opt.model == band_model::effective_mass || g == 0.0) return sol;

  // Exact band: bracket the bound state outside the band, starting just off the edge.
  const bool upper = opt.edge == band_edge::upper;
  const double eps = 1e-6 * j;
  auto f = [&](double e) { return e - emitter.omega_ge - self_energy(cplx(e, 0.0), g, cell, opt).real(); };
  double a, b;
  if (upper) {
    a = edge + eps;
    b = std::max(emitter.omega_ge, edge) + 2.0 * g + 1e-3 * j;
  } else {
    a = std::min(emitter.omega_ge, edge) - 2.0 * g - 1e-3 * j;
    b = edge - eps;
  }
  const double fa = f(a), fb = f(b);
  if (!(fa * fb < 0.0)) {
    std::ostringstream os;
    os.precision(12);
    os << "dressed states: no bound state in [" << a << ", " << b << "] rad/s";
    throw no_root(os.str());
  }
  boost::uintmax_t iters = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(50), iters);
  sol.e_bound = 0.5 * (bracket.first + bracket.second);
  sol.qubit_weight = 1.0 / (1.0 - self_energy_derivative(sol.e_bound, g, cell, opt));
  sol.localization_length = localization_length(sol.e_bound, cell, opt);

  // Radiative state: Newton on the second sheet from the effective-mass estimate.
  cplx e = sol.e_radiative;
  sol.radiative_converged = false;
  if (std::isfinite(e.real()) && std::isfinite(e.imag())) {
    auto h = [&](cplx z) { return z - emitter.omega_ge - self_energy(z, g, cell, opt, true); };
    const double step = 1e-7 * j;
    for (int it = 0; it < 60; ++it) {
      const cplx fz = h(e);
      const cplx df = (h(e + step) - h(e - step)) / (2.0 * step);
      const cplx de = fz / df;
      e -= de;
      if (std::abs(de) < 1e-10 * j) {
        sol.radiative_converged = true;
        break;
      }
    }
  }
  if (sol.radiative_converged) sol.e_radiative = e;
  sol.splitting = std::abs(sol.e_bound - edge) + std::abs(sol.e_radiative - edge);
  return sol;
}

std::vector<double> bound_profile(double e, const unit_cell& cell, int n_cells, double weight,
                                  const dressed_options& opt) {
  if (n_cells < 1) throw invalid_argument("bound_profile: n_cells must be positive");
  const double lambda = localization_length(e, cell, opt);
  const int centre = (n_cells - 1) / 2;
  std::vector<double> amp(n_cells);
  double norm = 0.0;
  for (int i = 0; i < n_cells; ++i) {
    amp[i] = std::exp(-std::abs(i - centre) / lambda);
    norm += amp[i] * amp[i];
  }
  const double scale = std::sqrt(std::max(0.0, 1.0 - weight) / norm);
  for (double& x : amp) x *= scale;
  return amp;
}

double single_excitation_spectrum::emitter_weight(int i) const {
  const double c = vectors(vectors.rows() - 1, i);
  return c * c;
}

Eigen::MatrixXd single_excitation_hamiltonian(const array_spec& spec, const emitter_params& emitter, int m_dft) {
  spec.validate();
  emitter.validate();
  const int m = spec.total_cells();
  if (m_dft <= 0) m_dft = std::max(2001, 2 * m + 1);
  if (m_dft % 2 == 0) ++m_dft;
  const coupling_spectrum v = coupling_spectrum_dft(spec.interior, m_dft, m - 1);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m + 1);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) h(i, k) = v.v[std::abs(i - k)];
  }
  auto couple = [&](int cell, double g) {
    if (cell < 1 || cell > m) {
      std::ostringstream os;
      os << "emitter coupling names cell " << cell << " but the array has " << m << " cells";
      throw invalid_argument(os.str());
    }
    h(m, cell - 1) += g;
    h(cell - 1, m) += g;
  };
  h(m, m) = emitter.omega_ge;
  couple(emitter.cell, emitter.g_uc);
  for (const auto& [offset, g] : emitter.extra_couplings) couple(emitter.cell + offset, g);
  return h;
}

single_excitation_spectrum diagonalize_single_excitation(const array_spec& spec, const emitter_params& emitter,
                                                         int m_dft) {
  const Eigen::MatrixXd h = single_excitation_hamiltonian(spec, emitter, m_dft);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw error("single-excitation eigensolver failed");
  single_excitation_spectrum out;
  out.energies = es.eigenvalues();
  out.vectors = es.eigenvectors();
  out.band_lo = lower_band_edge(spec.interior);
  out.band_hi = upper_band_edge(spec.interior);
  double best = -1.0;
  for (int i = 0; i < out.energies.size(); ++i) {
    const double e = out.energies(i);
    if (e > out.band_hi || e < out.band_lo) {
      const double w = out.emitter_weight(i);
      if (w > best) {
        best = w;
        out.bound_index = i;
      }
    }
  }
  return out;
}

double jaynes_cummings_splitting(double detuning, double g) { return std::sqrt(detuning * detuning + 4.0 * g * g); }

}  // namespace slowline
