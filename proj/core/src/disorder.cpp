#include "slowline/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "slowline/band_structure.hpp"
#include "slowline/error.hpp"
#include "slowline/parallel.hpp"
#include "slowline/taper.hpp"

namespace slowline {

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(seed) ^ index);
}

namespace {

// Standard normal draws for one realization; the same draws are reused for every sigma.
std::vector<double> draw_normals(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> z(n);
  for (double& x : z) x = dist(rng);
  return z;
}

disorder_sample apply_disorder(const array_spec& spec, double sigma, std::mt19937_64& rng, const std::vector<double>* fixed) {
  disorder_sample out;
  out.spec = spec;
  if (sigma == 0.0) return out;
  const ladder net = to_ladder(spec);
  const double w0 = spec.interior.omega0();
  const int n = net.size();
  std::normal_distribution<double> dist(0.0, 1.0);
  out.spec.inductance_override.resize(n);
  out.cell_frequencies.resize(n);
  for (int i = 0; i < n; ++i) {
    double f = w0 + sigma * (fixed ? (*fixed)[i] : dist(rng));
    while (!(f > 0.0)) {
      ++out.redraws;
      f = w0 + sigma * dist(rng);
    }
    out.cell_frequencies[i] = f;
    out.spec.inductance_override[i] = net.inductance[i] * (w0 / f) * (w0 / f);
  }
  return out;
}

double mean_db(const two_port_response& r) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.s21.size(); ++i) {
    if (!r.ok[i]) throw error("disorder: transmission is singular inside the window");
    s += 20.0 * std::log10(std::abs(r.s21[i]));
  }
  return s / static_cast<double>(r.s21.size());
}

}  // namespace

disorder_sample sample_disordered(const array_spec& spec, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw invalid_argument("sample_disordered: sigma must be non-negative");
  spec.validate();
  std::mt19937_64 rng(seed);
  return apply_disorder(spec, sigma, rng, nullptr);
}

disorder_ensemble_result extinction_curve(const extinction_problem& p) {
  p.spec.validate();
  if (p.n_realizations < 1) throw invalid_argument("extinction: need at least one realization");
  const double j = p.spec.interior.omega0() * p.spec.interior.cg / (2.0 * p.spec.interior.c0);
  const std::vector<double> grid = ripple_grid(p.spec.interior, p.band_window, p.grid_points);
  const std::size_t ns = p.sigma_over_j.size();
  const int n_cells = p.spec.total_cells();
  std::vector<std::vector<double>> ext(ns, std::vector<double>(p.n_realizations));
  std::vector<int> redraws(p.n_realizations, 0);

  parallel_for(p.n_realizations, p.threads, [&](std::size_t i) {
    const std::uint64_t s = substream_seed(p.seed, i);
    const std::vector<double> z = draw_normals(n_cells, s);
    std::mt19937_64 rng(substream_seed(s, 1));
    for (std::size_t k = 0; k < ns; ++k) {
      const disorder_sample d = apply_disorder(p.spec, p.sigma_over_j[k] * j, rng, &z);
      redraws[i] += d.redraws;
      ext[k][i] = mean_db(cascade_abcd(to_ladder(d.spec), grid));
    }
  });

  disorder_ensemble_result r;
  r.sigma_over_j = p.sigma_over_j;
  r.n_realizations = p.n_realizations;
  r.seed = p.seed;
  r.redraws = std::accumulate(redraws.begin(), redraws.end(), 0);
  const double n = p.n_realizations;
  for (std::size_t k = 0; k < ns; ++k) {
    const auto& v = ext[k];
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    r.mean_extinction_db.push_back(mean);
    r.std_extinction_db.push_back(n > 1 ? std::sqrt(var / (n - 1)) : 0.0);
    // Bootstrap over realizations with its own deterministic stream.
    std::mt19937_64 rng(substream_seed(p.seed ^ 0xb0075742ULL, k));
    std::uniform_int_distribution<int> pick(0, p.n_realizations - 1);
    std::vector<double> means(std::max(1, p.bootstrap_samples));
    for (double& m : means) {
      double s = 0.0;
      for (int i = 0; i < p.n_realizations; ++i) s += v[pick(rng)];
      m = s / n;
    }
    const double bm = std::accumulate(means.begin(), means.end(), 0.0) / means.size();
    double bv = 0.0;
    for (double m : means) bv += (m - bm) * (m - bm);
    r.stderr_db.push_back(means.size() > 1 ? std::sqrt(bv / (means.size() - 1)) : 0.0);
  }
  return r;
}

double extinction_crossing(const disorder_ensemble_result& r, double level) {
  for (std::size_t k = 0; k < r.sigma_over_j.size(); ++k) {
    if (r.mean_extinction_db[k] < level) {
      if (k == 0) return r.sigma_over_j[0];
      const double a = r.mean_extinction_db[k - 1], b = r.mean_extinction_db[k];
      const double f = (a - level) / (a - b);
      return r.sigma_over_j[k - 1] + f * (r.sigma_over_j[k] - r.sigma_over_j[k - 1]);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> find_ripple_peaks(const two_port_response& r, double lo, double hi, double prominence) {
  const std::size_t n = r.omega.size();
  std::vector<double> db(n);
  for (std::size_t i = 0; i < n; ++i) {
    db[i] = r.ok[i] ? 20.0 * std::log10(std::abs(r.s21[i])) : -std::numeric_limits<double>::infinity();
  }
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(db[i] >= db[i - 1] && db[i] > db[i + 1])) continue;
    // Prominence: drop to the lowest point before reaching a higher sample on each side.
    double left = db[i];
    for (std::size_t j = i; j-- > 0;) {
      if (db[j] > db[i]) break;
      left = std::min(left, db[j]);
    }
    double right = db[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (db[j] > db[i]) break;
      right = std::min(right, db[j]);
    }
    if (db[i] - std::max(left, right) < prominence) continue;
    const double y0 = db[i - 1], y1 = db[i], y2 = db[i + 1];
    const double den = y0 - 2.0 * y1 + y2;
    const double off = den != 0.0 ? 0.5 * (y0 - y2) / den : 0.0;
    const double step = r.omega[i + 1] - r.omega[i];
    const double w = r.omega[i] + off * step;
    if (w >= lo && w <= hi) peaks.push_back(w);
  }
  return peaks;
}

fsr_report fsr_variance(const two_port_response& r, double lo, double hi) {
  fsr_report rep;
  rep.mode_freqs = find_ripple_peaks(r, lo, hi);
  if (rep.mode_freqs.size() < 4) throw error("fsr_variance: fewer than 4 ripple peaks found");
  std::vector<double> d;
  for (std::size_t i = 1; i < rep.mode_freqs.size(); ++i) d.push_back(rep.mode_freqs[i] - rep.mode_freqs[i - 1]);
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / d.size();
  double var = 0.0;
  for (double x : d) var += (x - mean) * (x - mean);
  rep.delta_fsr = std::sqrt(var / (d.size() - 1));
  return rep;
}

fsr_report fsr_variance(const two_port_response& r, const unit_cell& cell) {
  const double c = band_center(cell), q = 0.25 * bandwidth(cell);
  return fsr_variance(r, c - q, c + q);
}

two_port_response fsr_response(const array_spec& spec, int grid_points) {
  return cascade_abcd(spec, ripple_grid(spec.interior, 0.5, grid_points));
}

calibration_result calibration_table(const calibration_problem& p) {
  p.spec.validate();
  if (p.sigma.empty()) throw invalid_argument("calibration: empty sigma grid");
  if (p.n_realizations < 1) throw invalid_argument("calibration: need at least one realization");
  const std::size_t ns = p.sigma.size();
  const int n_cells = p.spec.total_cells();
  const std::vector<double> grid = ripple_grid(p.spec.interior, 0.5, p.grid_points);
  const double c = band_center(p.spec.interior), q = 0.25 * bandwidth(p.spec.interior);
  std::vector<std::vector<double>> val(ns, std::vector<double>(p.n_realizations, std::nan("")));

  parallel_for(p.n_realizations, p.threads, [&](std::size_t i) {
    const std::uint64_t s = substream_seed(p.seed, i);
    const std::vector<double> z = draw_normals(n_cells, s);
    std::mt19937_64 rng(substream_seed(s, 1));
    for (std::size_t k = 0; k < ns; ++k) {
      const disorder_sample d = apply_disorder(p.spec, p.sigma[k], rng, &z);
      try {
        val[k][i] = fsr_variance(cascade_abcd(to_ladder(d.spec), grid), c - q, c + q).delta_fsr;
      } catch (const error&) {
        // Realizations without enough resolvable ripples are left out of the mean.
      }
    }
  });

  calibration_result r;
  r.sigma = p.sigma;
  for (std::size_t k = 0; k < ns; ++k) {
    double s = 0.0;
    int cnt = 0;
    for (double x : val[k]) {
      if (std::isnan(x)) continue;
      s += x;
      ++cnt;
    }
    r.valid_realizations.push_back(cnt);
    r.mean_delta_fsr.push_back(cnt ? s / cnt : std::nan(""));
  }
  r.usable = 1;
  while (r.usable < ns && r.mean_delta_fsr[r.usable] > r.mean_delta_fsr[r.usable - 1]) ++r.usable;
  r.monotone = r.usable == ns;
  return r;
}

void invert_calibration(calibration_result& r, double measured) {
  const std::size_t n = r.usable;
  if (n == 0) throw error("calibration: empty table");
  r.clamped = false;
  if (n == 1 || measured <= r.mean_delta_fsr[0]) {
    r.sigma_estimate = r.sigma[0];
    r.clamped = measured < r.mean_delta_fsr[0];
    return;
  }
  if (measured >= r.mean_delta_fsr[n - 1]) {
    r.sigma_estimate = r.sigma[n - 1];
    r.clamped = measured > r.mean_delta_fsr[n - 1];
    return;
  }
  for (std::size_t k = 1; k < n; ++k) {
    if (measured <= r.mean_delta_fsr[k]) {
      const double a = r.mean_delta_fsr[k - 1], b = r.mean_delta_fsr[k];
      r.sigma_estimate = r.sigma[k - 1] + (measured - a) / (b - a) * (r.sigma[k] - r.sigma[k - 1]);
      return;
    }
  }
}

calibration_result calibrate_sigma(double measured, const calibration_problem& p) {
  calibration_result r = calibration_table(p);
  invert_calibration(r, measured);
  return r;
}

}  // namespace slowline
