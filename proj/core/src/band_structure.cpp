#include "slowline/band_structure.hpp"

#include <cmath>

#include "slowline/error.hpp"

namespace slowline {

double dispersion(const unit_cell& cell, double k) {
  const double s = std::sin(0.5 * k);
  return cell.omega0() / std::sqrt(1.0 + 4.0 * cell.ratio() * s * s);
}

dispersion_curve dispersion(const unit_cell& cell, int n_points, double d) {
  cell.validate();
  if (n_points < 2) throw invalid_argument("dispersion: need at least two k points");
  dispersion_curve c;
  c.d = d;
  c.k.resize(n_points);
  c.omega.resize(n_points);
  // Uniform grid on (-pi, pi], ending exactly at pi.
  for (int i = 0; i < n_points; ++i) {
    c.k[i] = -pi + two_pi * (i + 1) / n_points;
    c.omega[i] = dispersion(cell, c.k[i]);
  }
  return c;
}

double group_velocity(const unit_cell& cell, double k) {
  const double r = cell.ratio();
  const double s = std::sin(0.5 * k);
  return -cell.omega0() * r * std::sin(k) * std::pow(1.0 + 4.0 * r * s * s, -1.5);
}

double wavenumber(const unit_cell& cell, double omega) {
  const double r = cell.ratio();
  const double x = cell.omega0() / omega;
  const double s2 = (x * x - 1.0) / (4.0 * r);
  if (s2 < 0.0 || s2 > 1.0) throw invalid_argument("wavenumber: frequency outside the passband");
  return 2.0 * std::asin(std::sqrt(s2));
}

double upper_band_edge(const unit_cell& cell) { return cell.omega0(); }

double lower_band_edge(const unit_cell& cell) { return cell.omega0() / std::sqrt(1.0 + 4.0 * cell.ratio()); }

double band_center(const unit_cell& cell) { return 0.5 * (upper_band_edge(cell) + lower_band_edge(cell)); }

double bandwidth(const unit_cell& cell) { return upper_band_edge(cell) - lower_band_edge(cell); }

double lower_edge_curvature(const unit_cell& cell) {
  const double r = cell.ratio();
  return lower_band_edge(cell) * r / (2.0 * (1.0 + 4.0 * r));
}

tight_binding_params tight_binding(const unit_cell& cell) {
  cell.validate();
  if (!(cell.ratio() < 1.0)) throw invalid_argument("tight_binding: requires cg < c0");
  const double w0 = cell.omega0();
  tight_binding_params p;
  p.j_tb = w0 * cell.cg / (2.0 * cell.c0);
  p.j_exact = 0.5 * w0 * cell.cg / (cell.c0 + cell.cg);
  p.omega_p_tb = w0 - 2.0 * p.j_tb;
  p.omega_p_exact = w0 - 2.0 * p.j_exact;
  return p;
}

coupling_spectrum coupling_spectrum_dft(const unit_cell& cell, int m_cells, int max_distance) {
  cell.validate();
  if (max_distance < 0 || m_cells % 2 == 0 || m_cells < 2 * max_distance + 1) {
    throw invalid_argument("coupling_spectrum: m_cells must be odd and at least 2*max_distance+1");
  }
  std::vector<double> wk(m_cells);
  for (int j = 0; j < m_cells; ++j) wk[j] = dispersion(cell, two_pi * j / m_cells);
  coupling_spectrum out;
  for (int n = 0; n <= max_distance; ++n) {
    // The spectrum is even in k, so the sine part cancels and only the cosine sum remains.
    double acc = 0.0;
    for (int j = 0; j < m_cells; ++j) {
      const long long phase = (static_cast<long long>(j) * n) % m_cells;
      acc += wk[j] * std::cos(two_pi * static_cast<double>(phase) / m_cells);
    }
    out.distance.push_back(n);
    out.v.push_back(acc / m_cells);
  }
  return out;
}

delay_metrics delay_metrics_for(const unit_cell& cell, int n_cells, int n_points) {
  cell.validate();
  if (n_cells < 1) throw invalid_argument("delay_metrics: n_cells must be positive");
  delay_metrics m;
  const double lo = lower_band_edge(cell), hi = upper_band_edge(cell);
  // Interior samples only; the delay diverges at both edges.
  for (int i = 1; i <= n_points; ++i) {
    const double w = lo + (hi - lo) * i / (n_points + 1);
    m.omega.push_back(w);
    m.delay_per_cell.push_back(1.0 / std::abs(group_velocity(cell, wavenumber(cell, w))));
  }
  const double kmid = wavenumber(cell, band_center(cell));
  m.mid_band_delay_per_cell = 1.0 / std::abs(group_velocity(cell, kmid));
  m.total_mid_band_delay = n_cells * m.mid_band_delay_per_cell;
  // Reference line with delay 1/(2 omega0) per cell, so the ratio reads omega0/J for a cosine band.
  m.ratio_to_cpw = 2.0 * cell.omega0() * m.mid_band_delay_per_cell;
  return m;
}

double delay_per_area(const unit_cell& cell, double d, double width) {
  const double kmid = wavenumber(cell, band_center(cell));
  return 1.0 / std::abs(group_velocity(cell, kmid)) / (d * width);
}

}  // namespace slowline
