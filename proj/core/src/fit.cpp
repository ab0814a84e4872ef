#include "slowline/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "slowline/error.hpp"

namespace slowline {

const std::vector<std::string>& fit_parameter_names() {
  static const std::vector<std::string> names{"port_coupling", "inner_coupling", "cg", "edge_shunt",
                                              "second_shunt",  "c0",             "l0"};
  return names;
}

namespace {

void need_boundary(const array_spec& s, std::size_t n, const std::string& name) {
  if (s.boundary_in.size() < n || s.boundary_out.size() < n) {
    throw invalid_argument("fit parameter " + name + " needs " + std::to_string(n) + " boundary cells per side");
  }
}

}  // namespace

double get_fit_parameter(const array_spec& s, const std::string& name) {
  if (name == "cg") return s.interior.cg;
  if (name == "c0") return s.interior.c0;
  if (name == "l0") return s.interior.l0;
  if (name == "port_coupling") {
    need_boundary(s, 1, name);
    return s.boundary_in.front().c_left;
  }
  if (name == "edge_shunt") {
    need_boundary(s, 1, name);
    return s.boundary_in.front().c_shunt;
  }
  if (name == "inner_coupling") {
    need_boundary(s, 2, name);
    return s.boundary_in[0].c_right;
  }
  if (name == "second_shunt") {
    need_boundary(s, 2, name);
    return s.boundary_in[1].c_shunt;
  }
  throw invalid_argument("unknown fit parameter: " + name);
}

void set_fit_parameter(array_spec& s, const std::string& name, double v) {
  auto& in = s.boundary_in;
  auto& out = s.boundary_out;
  if (name == "cg") {
    s.interior.cg = v;
    if (!in.empty()) in.back().c_right = v;
    if (!out.empty()) out.front().c_right = v;
  } else if (name == "c0") {
    s.interior.c0 = v;
  } else if (name == "l0") {
    s.interior.l0 = v;
    for (auto& b : in) b.l0 = v;
    for (auto& b : out) b.l0 = v;
  } else if (name == "port_coupling") {
    need_boundary(s, 1, name);
    in.front().c_left = v;
    out.back().c_left = v;
  } else if (name == "edge_shunt") {
    need_boundary(s, 1, name);
    in.front().c_shunt = v;
    out.back().c_shunt = v;
  } else if (name == "inner_coupling") {
    need_boundary(s, 2, name);
    in[0].c_right = in[1].c_left = v;
    out[out.size() - 1].c_right = out[out.size() - 2].c_left = v;
  } else if (name == "second_shunt") {
    need_boundary(s, 2, name);
    in[1].c_shunt = v;
    out[out.size() - 2].c_shunt = v;
  } else {
    throw invalid_argument("unknown fit parameter: " + name);
  }
}

namespace {

struct spectrum_functor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const array_spec* base;
  const std::vector<std::string>* names;
  std::vector<double> omega;
  std::vector<double> target_db;
  int n_inputs;

  int inputs() const { return n_inputs; }
  int values() const { return static_cast<int>(omega.size()); }

  array_spec apply(const Eigen::VectorXd& x) const {
    array_spec s = *base;
    for (int i = 0; i < n_inputs; ++i) set_fit_parameter(s, (*names)[i], std::exp(x(i)));
    return s;
  }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    const two_port_response r = cascade_abcd(to_ladder(apply(x)), omega);
    for (int i = 0; i < values(); ++i) {
      const double db = r.ok[i] ? 20.0 * std::log10(std::abs(r.s21[i])) : -400.0;
      f(i) = db - target_db[i];
    }
    return 0;
  }
};

double rms(const Eigen::VectorXd& f) { return f.size() ? std::sqrt(f.squaredNorm() / f.size()) : 0.0; }

}  // namespace

fit_result fit_to_spectrum(const two_port_response& measured, const array_spec& initial,
                           const std::vector<std::string>& free_params, int max_evaluations) {
  spectrum_functor fn;
  fn.base = &initial;
  fn.names = &free_params;
  fn.n_inputs = static_cast<int>(free_params.size());
  for (std::size_t i = 0; i < measured.omega.size(); ++i) {
    if (!measured.ok.empty() && !measured.ok[i]) continue;
    fn.omega.push_back(measured.omega[i]);
    fn.target_db.push_back(20.0 * std::log10(std::abs(measured.s21[i])));
  }
  if (fn.omega.size() < free_params.size()) throw invalid_argument("fit: fewer usable samples than free parameters");

  Eigen::VectorXd x(fn.n_inputs);
  for (int i = 0; i < fn.n_inputs; ++i) x(i) = std::log(get_fit_parameter(initial, free_params[i]));
  Eigen::VectorXd f(fn.values());
  fn(x, f);

  fit_result res;
  res.initial_residual_db = rms(f);
  if (fn.n_inputs == 0) {
    res.spec = initial;
    res.residual_db = res.initial_residual_db;
    res.converged = true;
    return res;
  }

  Eigen::NumericalDiff<spectrum_functor, Eigen::Central> diff(fn, 1e-7);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<spectrum_functor, Eigen::Central>> lm(diff);
  lm.parameters.maxfev = max_evaluations;
  lm.parameters.xtol = 1e-12;
  lm.parameters.ftol = 1e-14;
  const auto status = lm.minimize(x);
  fn(x, f);
  res.spec = fn.apply(x);
  res.residual_db = rms(f);
  res.iterations = static_cast<int>(lm.iter);
  using namespace Eigen::LevenbergMarquardtSpace;
  res.converged = status == RelativeReductionTooSmall || status == RelativeErrorTooSmall ||
                  status == RelativeErrorAndReductionTooSmall || status == CosinusTooSmall ||
                  status == FtolTooSmall || status == XtolTooSmall || status == GtolTooSmall;
  return res;
}

}  // namespace slowline
