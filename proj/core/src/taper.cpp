#include "slowline/taper.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "slowline/band_structure.hpp"
#include "slowline/error.hpp"

namespace slowline {

void taper_problem::validate() const {
  base.validate();
  if (n_modified < 0) throw invalid_argument("taper: n_modified must be non-negative");
  if (!(band_window > 0.0 && band_window <= 1.0)) throw invalid_argument("taper: band_window must lie in (0, 1]");
  if (2 * n_modified >= base.total_cells()) throw invalid_argument("taper: too many modified cells for the array length");
  if (max_iterations < 1) throw invalid_argument("taper: max_iterations must be positive");
  if (grid_points < 2) throw invalid_argument("taper: grid_points must be at least 2");
}

std::vector<double> ripple_grid(const unit_cell& cell, double band_window, int points) {
  if (!(band_window > 0.0 && band_window <= 1.0)) throw invalid_argument("ripple: band_window must lie in (0, 1]");
  const double c = band_center(cell), half = 0.5 * band_window * bandwidth(cell);
  return linspace(c - half, c + half, points);
}

double ripple(const array_spec& spec, double band_window, int points) {
  const two_port_response r = cascade_abcd(spec, ripple_grid(spec.interior, band_window, points));
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < r.s21.size(); ++i) {
    if (!r.ok[i]) throw error("ripple: transmission is singular inside the window");
    const double db = 20.0 * std::log10(std::abs(r.s21[i]));
    lo = std::min(lo, db);
    hi = std::max(hi, db);
  }
  return hi - lo;
}

array_spec apply_taper(const array_spec& base, int n, const std::vector<double>& cin, const std::vector<double>& cout) {
  if (n == 0) return base;
  if (static_cast<int>(cin.size()) != n || static_cast<int>(cout.size()) != n) {
    throw invalid_argument("apply_taper: need n_modified couplings per boundary");
  }
  const unit_cell& cell = base.interior;
  const double total = cell.c0 + 2.0 * cell.cg;
  array_spec s = base;
  const int cells = base.total_cells();
  s.boundary_in.clear();
  s.boundary_out.clear();
  s.count = cells - 2 * n;
  for (int i = 0; i < n; ++i) {
    const double left = cin[i], right = i + 1 < n ? cin[i + 1] : cell.cg;
    s.boundary_in.push_back({total - left - right, left, right, cell.l0});
  }
  for (int j = 0; j < n; ++j) {
    // boundary_out runs from the interior toward the port.
    const int i = n - 1 - j;
    const double left = cout[i], right = i + 1 < n ? cout[i + 1] : cell.cg;
    s.boundary_out.push_back({total - left - right, left, right, cell.l0});
  }
  return s;
}

std::vector<double> analytic_taper_guess(const array_spec& base, int n) {
  const unit_cell& cell = base.interior;
  const double total = cell.c0 + 2.0 * cell.cg;
  const double w = band_center(cell);
  const double j = tight_binding(cell).j_tb;
  // End-cell decay rate w^2 cp^2 z0 / total matched to 2 J.
  const double cp = std::sqrt(2.0 * j * total / (w * w * base.port_impedance));
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) c[i] = cp * std::pow(cell.cg / cp, static_cast<double>(i) / n);
  return c;
}

namespace {

struct nm_result {
  std::vector<double> x;
  double f;
  int iterations;
  bool converged;
};

template <class F>
nm_result nelder_mead(F f, std::vector<double> x0, double step, int max_iter, std::vector<double>& log) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
  for (std::size_t i = 0; i <= n; ++i) val[i] = f(pts[i]);
  std::vector<std::size_t> order(n + 1);
  int it = 0;
  bool converged = false;
  auto combine = [&](const std::vector<double>& c, const std::vector<double>& p, double t) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = c[i] + t * (p[i] - c[i]);
    return out;
  };
  for (; it < max_iter; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    log.push_back(val[best]);
    double spread = val[worst] - val[best], size = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t d = 0; d < n; ++d) size = std::max(size, std::abs(pts[i][d] - pts[best][d]));
    }
    if (spread <= 1e-9 * (1.0 + std::abs(val[best])) && size <= 1e-9) {
      converged = true;
      break;
    }
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[i][d] / n;
    }
    const auto xr = combine(centroid, pts[worst], -1.0);
    const double fr = f(xr);
    if (fr < val[best]) {
      const auto xe = combine(centroid, pts[worst], -2.0);
      const double fe = f(xe);
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
      continue;
    }
    const bool outside = fr < val[worst];
    const auto xc = combine(centroid, outside ? xr : pts[worst], 0.5);
    const double fc = f(xc);
    if (fc < (outside ? fr : val[worst])) {
      pts[worst] = xc;
      val[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      pts[i] = combine(pts[best], pts[i], 0.5);
      val[i] = f(pts[i]);
    }
  }
  const std::size_t best = static_cast<std::size_t>(std::min_element(val.begin(), val.end()) - val.begin());
  return {pts[best], val[best], it, converged};
}

}  // namespace

taper_report optimize_taper(const taper_problem& p) {
  p.validate();
  taper_report rep;
  rep.initial_ripple_db = ripple(p.base, p.band_window, p.grid_points);
  if (p.n_modified == 0) {
    rep.spec = p.base;
    rep.ripple_db = rep.initial_ripple_db;
    rep.converged = true;
    rep.log.push_back(rep.ripple_db);
    return rep;
  }
  const int n = p.n_modified;
  const std::size_t dim = p.symmetric ? n : 2 * n;
  const double cg = p.base.interior.cg;
  const std::vector<double> grid = ripple_grid(p.base.interior, p.band_window, p.grid_points);

  auto split = [&](const std::vector<double>& logc, std::vector<double>& cin, std::vector<double>& cout) {
    cin.assign(n, 0.0);
    cout.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      cin[i] = std::exp(logc[i]);
      cout[i] = std::exp(logc[p.symmetric ? i : n + i]);
    }
  };
  auto build = [&](const std::vector<double>& logc) {
    std::vector<double> cin, cout;
    split(logc, cin, cout);
    return apply_taper(p.base, n, cin, cout);
  };
  auto objective = [&](const std::vector<double>& logc) {
    const array_spec s = build(logc);
    for (const auto* side : {&s.boundary_in, &s.boundary_out}) {
      for (const auto& b : *side) {
        if (!(b.c_shunt > 0.0)) return 1e6;
      }
    }
    const two_port_response r = cascade_abcd(to_ladder(s), grid);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < r.s21.size(); ++i) {
      if (!r.ok[i]) return 1e6;
      const double db = 20.0 * std::log10(std::abs(r.s21[i]));
      lo = std::min(lo, db);
      hi = std::max(hi, db);
    }
    return hi - lo;
  };

  std::vector<std::vector<double>> seeds;
  seeds.emplace_back(dim, std::log(cg));
  {
    const std::vector<double> guess = analytic_taper_guess(p.base, n);
    std::vector<double> s(dim);
    for (std::size_t i = 0; i < dim; ++i) s[i] = std::log(guess[i % n]);
    seeds.push_back(s);
  }
  for (const auto& extra : p.extra_seeds) {
    if (extra.size() != dim) throw invalid_argument("taper: extra seed has the wrong number of couplings");
    std::vector<double> s(dim);
    for (std::size_t i = 0; i < dim; ++i) s[i] = std::log(extra[i]);
    seeds.push_back(s);
  }

  bool have = false;
  double best_dev = 0.0;
  std::vector<double> best_x;
  for (const auto& seed : seeds) {
    std::vector<double> log;
    nm_result r = nelder_mead(objective, seed, 0.5, p.max_iterations, log);
    // One restart from the best vertex with a fresh simplex.
    nm_result r2 = nelder_mead(objective, r.x, 0.05, p.max_iterations, log);
    if (r2.f <= r.f) {
      r = nm_result{r2.x, r2.f, r.iterations + r2.iterations, r2.converged};
    } else {
      r.iterations += r2.iterations;
    }
    rep.iterations += r.iterations;
    double dev = 0.0;
    for (std::size_t i = 0; i < dim; ++i) dev += (r.x[i] - seed[i]) * (r.x[i] - seed[i]);
    const bool better = !have || r.f < rep.ripple_db - 1e-12 ||
                        (std::abs(r.f - rep.ripple_db) <= 1e-12 && dev < best_dev);
    for (double v : log) rep.log.push_back(rep.log.empty() ? v : std::min(v, rep.log.back()));
    if (better) {
      have = true;
      rep.ripple_db = r.f;
      rep.converged = r.converged;
      best_x = r.x;
      best_dev = dev;
    }
  }
  rep.spec = build(best_x);
  std::vector<double> cin, cout;
  split(best_x, cin, cout);
  rep.couplings = cin;
  if (!p.symmetric) rep.couplings.insert(rep.couplings.end(), cout.begin(), cout.end());
  return rep;
}

}  // namespace slowline
