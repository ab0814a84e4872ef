#include "slowline/circuit.hpp"

#include <cmath>
#include <sstream>

#include "slowline/error.hpp"

namespace slowline {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw invalid_argument(what);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

double unit_cell::omega0() const { return 1.0 / std::sqrt(l0 * c0); }

void unit_cell::validate() const {
  require(positive_finite(c0), "unit cell: c0 must be positive");
  require(std::isfinite(cg) && cg >= 0.0, "unit cell: cg must be non-negative");
  require(positive_finite(l0), "unit cell: l0 must be positive");
  require(q_internal > 0.0, "unit cell: q_internal must be positive");
  require(positive_finite(omega0()), "unit cell: omega0 is not finite");
}

void boundary_cell::validate() const {
  require(positive_finite(c_shunt), "boundary cell: c_shunt must be positive");
  require(positive_finite(c_left), "boundary cell: c_left must be positive");
  require(positive_finite(c_right), "boundary cell: c_right must be positive");
  require(positive_finite(l0), "boundary cell: l0 must be positive");
}

int array_spec::total_cells() const {
  return static_cast<int>(boundary_in.size() + boundary_out.size()) + count;
}

void array_spec::validate() const {
  interior.validate();
  require(count >= 1, "array: interior count must be at least 1");
  require(positive_finite(port_impedance), "array: port impedance must be positive");
  for (const auto& b : boundary_in) b.validate();
  for (const auto& b : boundary_out) b.validate();
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
  for (std::size_t i = 0; i + 1 < boundary_in.size(); ++i) {
    if (!close(boundary_in[i].c_right, boundary_in[i + 1].c_left)) {
      std::ostringstream os;
      os << "array: boundary_in[" << i << "].c_right differs from boundary_in[" << i + 1 << "].c_left";
      throw invalid_argument(os.str());
    }
  }
  for (std::size_t i = 0; i + 1 < boundary_out.size(); ++i) {
    if (!close(boundary_out[i].c_left, boundary_out[i + 1].c_right)) {
      std::ostringstream os;
      os << "array: boundary_out[" << i << "].c_left differs from boundary_out[" << i + 1 << "].c_right";
      throw invalid_argument(os.str());
    }
  }
  const int n = total_cells();
  if (bend) {
    require(bend->position >= 1 && bend->position < n, "array: bend position must lie inside the chain");
    require(positive_finite(bend->capacitance), "array: bend capacitance must be positive");
  }
  if (!inductance_override.empty()) {
    require(static_cast<int>(inductance_override.size()) == n, "array: inductance_override size must equal the cell count");
    for (double l : inductance_override) require(positive_finite(l), "array: overridden inductance must be positive");
  }
  if (cg_needed()) require(interior.cg > 0.0, "array: cg must be positive when interior cells touch each other or a port");
}

bool array_spec::cg_needed() const { return count > 1 || boundary_in.empty() || boundary_out.empty(); }

double ladder::conductance(int i) const {
  const double q = q_internal[i];
  if (!std::isfinite(q)) return 0.0;
  return std::sqrt(shunt[i] / inductance[i]) / q;
}

ladder to_ladder(const array_spec& spec) {
  spec.validate();
  ladder net;
  net.port_impedance = spec.port_impedance;
  net.termination_out = spec.termination_out;
  const double q = spec.interior.q_internal;

  net.coupling.push_back(spec.boundary_in.empty() ? spec.interior.cg : spec.boundary_in.front().c_left);
  for (const auto& b : spec.boundary_in) {
    net.shunt.push_back(b.c_shunt);
    net.inductance.push_back(b.l0);
    net.coupling.push_back(b.c_right);
  }
  for (int i = 0; i < spec.count; ++i) {
    net.shunt.push_back(spec.interior.c0);
    net.inductance.push_back(spec.interior.l0);
    if (i + 1 < spec.count) net.coupling.push_back(spec.interior.cg);
  }
  net.coupling.push_back(spec.boundary_out.empty() ? spec.interior.cg : spec.boundary_out.front().c_right);
  for (const auto& b : spec.boundary_out) {
    net.shunt.push_back(b.c_shunt);
    net.inductance.push_back(b.l0);
    net.coupling.push_back(b.c_left);
  }
  net.q_internal.assign(net.shunt.size(), q);
  if (spec.bend) net.coupling[spec.bend->position] = spec.bend->capacitance;
  if (!spec.inductance_override.empty()) net.inductance = spec.inductance_override;
  return net;
}

array_spec uniform_array(const unit_cell& cell, int n, double port_impedance) {
  array_spec s;
  s.interior = cell;
  s.count = n;
  s.port_impedance = port_impedance;
  return s;
}

abcd abcd::operator*(const abcd& r) const {
  return {a * r.a + b * r.c, a * r.b + b * r.d, c * r.a + d * r.c, c * r.b + d * r.d};
}

abcd series_element(cplx z) { return {1.0, z, 0.0, 1.0}; }
abcd shunt_element(cplx y) { return {1.0, 0.0, y, 1.0}; }

namespace {

// Multiply m by a series impedance on the right.
inline void push_series(abcd& m, cplx z) {
  m.b += m.a * z;
  m.d += m.c * z;
}

inline void push_shunt(abcd& m, cplx y) {
  m.a += m.b * y;
  m.c += m.d * y;
}

}  // namespace

abcd array_abcd(const ladder& net, double omega) {
  const cplx jw(0.0, omega);
  abcd m;
  const int n = net.size();
  for (int i = 0; i < n; ++i) {
    push_series(m, 1.0 / (jw * net.coupling[i]));
    const cplx y = jw * net.shunt[i] + 1.0 / (jw * net.inductance[i]) + net.conductance(i);
    push_shunt(m, y);
  }
  push_series(m, 1.0 / (jw * net.coupling[n]));
  return m;
}

two_port_response cascade_abcd(const ladder& net, const std::vector<double>& omega) {
  two_port_response r;
  r.omega = omega;
  const std::size_t n = omega.size();
  r.s21.resize(n);
  r.s11.resize(n);
  r.ok.resize(n);
  const double z0 = net.port_impedance;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < n; ++i) {
    bool ok = std::isfinite(omega[i]) && omega[i] > 0.0;
    if (ok) {
      const abcd m = array_abcd(net, omega[i]);
      const cplx den = m.a + m.b / z0 + m.c * z0 + m.d;
      ok = std::abs(den) > 0.0 && std::isfinite(den.real()) && std::isfinite(den.imag());
      if (ok) {
        r.s21[i] = 2.0 / den;
        r.s11[i] = (m.a + m.b / z0 - m.c * z0 - m.d) / den;
      }
    }
    if (!ok) r.s21[i] = r.s11[i] = cplx(nan, nan);
    r.ok[i] = ok;
  }
  return r;
}

two_port_response cascade_abcd(const array_spec& spec, const std::vector<double>& omega) {
  for (std::size_t i = 1; i < omega.size(); ++i) {
    if (!(omega[i] > omega[i - 1])) throw invalid_argument("frequency grid must be strictly increasing");
  }
  return cascade_abcd(to_ladder(spec), omega);
}

std::vector<double> group_delay(const two_port_response& r) {
  const std::size_t n = r.omega.size();
  std::vector<double> phase(n), out(n, 0.0);
  if (n < 2) return out;
  phase[0] = std::arg(r.s21[0]);
  for (std::size_t i = 1; i < n; ++i) {
    double d = std::arg(r.s21[i]) - std::arg(r.s21[i - 1]);
    d -= two_pi * std::round(d / two_pi);
    phase[i] = phase[i - 1] + d;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    out[i] = -(phase[hi] - phase[lo]) / (r.omega[hi] - r.omega[lo]);
  }
  return out;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = a;
    return v;
  }
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

std::vector<double> default_grid(const unit_cell& cell, int n) {
  const double w0 = cell.omega0();
  return linspace(0.93 * w0, 1.02 * w0, n);
}

abcd cell_abcd(const unit_cell& cell, double omega) {
  // Symmetric T section: half of the coupling on each side (series 2 cg).
  const cplx jw(0.0, omega);
  const cplx zs = 1.0 / (jw * 2.0 * cell.cg);
  cplx y = jw * cell.c0 + 1.0 / (jw * cell.l0);
  if (std::isfinite(cell.q_internal)) y += std::sqrt(cell.c0 / cell.l0) / cell.q_internal;
  abcd m;
  push_series(m, zs);
  push_shunt(m, y);
  push_series(m, zs);
  return m;
}

std::vector<bloch_point> bloch_analysis(const unit_cell& cell, const std::vector<double>& omega) {
  cell.validate();
  if (!(cell.cg > 0.0)) throw invalid_argument("bloch analysis needs cg > 0");
  std::vector<bloch_point> out;
  out.reserve(omega.size());
  for (double w : omega) {
    const abcd m = cell_abcd(cell, w);
    const cplx half_trace = 0.5 * (m.a + m.d);
    const cplx kk = std::acos(half_trace);
    cplx k;
    if (kk.imag() == 0.0) {
      k = -kk;
    } else {
      k = (-kk).imag() < 0.0 ? -kk : kk;
    }
    if (k.real() >= pi - 1e-12) k -= two_pi;
    cplx z = m.b / std::sqrt(half_trace * half_trace - 1.0);
    if (z.real() < 0.0) z = -z;
    out.push_back({k, z});
  }
  return out;
}

}  // namespace slowline
