#include <boost/math/special_functions/bessel.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>

#include "cli_io.hpp"
#include "slowline/band_structure.hpp"
#include "slowline/disorder.hpp"
#include "slowline/dressed_states.hpp"
#include "slowline/dynamics.hpp"
#include "slowline/state_space.hpp"
#include "slowline/taper.hpp"

namespace fs = std::filesystem;
using namespace slowline;
using slowline::cli::json;

namespace {

const fs::path config_dir = SLOWLINE_CONFIG_DIR;

struct outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

struct device {
  array_spec spec;
  circuit_emitter emitter;
  protocol proto;
};

array_spec load_array(const std::string& name) {
  const json j = cli::parse_json_file(config_dir / name);
  return cli::array_spec_from_json(j.at("array"));
}

device load_device(const std::string& name) {
  const json j = cli::parse_json_file(config_dir / name);
  device d;
  d.spec = cli::array_spec_from_json(j.at("array"));
  d.emitter = cli::read_circuit_emitter(cli::object_reader(j.at("emitter"), "$.emitter"));
  d.proto = cli::read_protocol(cli::object_reader(j.at("protocol"), "$.protocol"));
  return d;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double mid_band(const unit_cell& c) { return band_center(c); }

// 1. Normal modes of a lossless uniform 51-cell array against the dispersion relation.
outcome ac1() {
  const unit_cell cell = load_array("test_device.json").interior;
  const int n = 51;
  const state_space_model m = lossless(assemble_state_space(uniform_array(cell, n)));
  const std::vector<double> modes = normal_mode_frequencies(m);
  if (static_cast<int>(modes.size()) != n) return {false, "wrong mode count"};
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    // Ascending frequency means descending |k|.
    const double k = pi * (n - i) / (n + 1.0);
    worst = std::max(worst, std::abs(modes[i] / dispersion(cell, k) - 1.0));
  }
  return {worst < 1e-3, fmt("max_rel_dev=%.3e (tol 1e-3)", worst)};
}

// 2. Fitted test device: central-band ripple and mid-band group delay.
outcome ac2() {
  const array_spec spec = load_array("test_device.json");
  const double rip = ripple(spec, 0.5);
  const double c = band_center(spec.interior), b = bandwidth(spec.interior);
  const std::vector<double> gd = group_delay(cascade_abcd(spec, linspace(c - 0.01 * b, c + 0.01 * b, 21)));
  const double delay = gd[gd.size() / 2];
  const bool ok = rip < 0.5 && std::abs(delay - 55e-9) <= 0.1 * 55e-9;
  return {ok, fmt("ripple_db=%.3f (tol < 0.5)", rip) + fmt(" delay_ns=%.2f (tol 55 +- 10%%)", delay * 1e9)};
}

// 3. Taper optimisation of an unmatched 26-cell array.
outcome ac3() {
  const auto t0 = std::chrono::steady_clock::now();
  taper_problem p;
  p.base = load_array("unmatched_26.json");
  p.n_modified = 2;
  const taper_report r = optimize_taper(p);
  const double secs = seconds_since(t0);
  const bool ok = r.initial_ripple_db > 10.0 && r.ripple_db < 0.5 && secs < 300.0;
  return {ok, fmt("initial_db=%.2f (tol > 10)", r.initial_ripple_db) + fmt(" final_db=%.4f (tol < 0.5)", r.ripple_db) +
                  fmt(" runtime_s=%.1f (tol < 300)", secs)};
}

// 4. Effective-mass dressed states with the emitter at the band edge.
outcome ac4() {
  const unit_cell cell = load_array("qubit_device.json").interior;
  const double w0 = cell.omega0();
  dressed_options o;
  o.model = band_model::effective_mass;
  const double j = effective_curvature(cell, o);
  emitter_params e;
  e.omega_ge = w0;
  e.g_uc = 0.9 * j;
  const dressed_state_solution s = solve_dressed_states(e, cell, o);
  const double omega_wg = std::cbrt(std::pow(e.g_uc, 4) / (4.0 * j));
  const double err_b = std::abs((s.e_bound - w0) / omega_wg - 1.0);
  const double err_r = std::abs(std::abs(s.e_radiative - w0) / omega_wg - 1.0);
  const double err_arg = std::abs(std::arg(w0 - s.e_radiative) / (pi / 3.0) - 1.0);
  emitter_params near = e;
  near.omega_ge = w0 + 1e-6 * j;
  const double weight = solve_dressed_states(near, cell, o).qubit_weight;
  const double err_w = std::abs(weight - 2.0 / 3.0);
  const bool ok = err_b < 1e-6 && err_r < 1e-6 && err_arg < 1e-6 && err_w < 1e-3;
  return {ok, fmt("bound_rel=%.2e", err_b) + fmt(" radiative_rel=%.2e", err_r) + fmt(" arg_rel=%.2e (tol 1e-6)", err_arg) +
                  fmt(" weight_err=%.2e (tol 1e-3)", err_w)};
}

// 5. 201-cell lossless diagonalisation against the continuum bound state.
outcome ac5() {
  const unit_cell cell = load_array("qubit_device.json").interior;
  const int n = 201, centre = 101;
  emitter_params e;
  e.omega_ge = cell.omega0();
  e.g_uc = two_pi * 22e6;
  e.cell = centre;
  const single_excitation_spectrum sp = diagonalize_single_excitation(uniform_array(cell, n), e);
  if (sp.bound_index < 0) return {false, "no bound state found"};
  dressed_options o;
  o.model = band_model::exact_band;
  const dressed_state_solution cont = solve_dressed_states(e, cell, o);
  const double w0 = cell.omega0();
  const double e_diag = sp.energies(sp.bound_index);
  const double err_e = std::abs((e_diag - w0) / (cont.e_bound - w0) - 1.0);
  // Decay length from a log-linear fit of the photonic envelope next to the emitter.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = 5;
  for (int x = 1; x <= m; ++x) {
    const double y = std::log(std::abs(sp.vectors(centre - 1 + x, sp.bound_index)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double lambda_diag = -1.0 / slope;
  const double err_l = std::abs(lambda_diag / cont.localization_length - 1.0);
  return {err_e < 0.02 && err_l < 0.05,
          fmt("binding_rel=%.4f (tol 0.02)", err_e) + fmt(" lambda_rel=%.4f (tol 0.05)", err_l)};
}

protocol with_frequency(protocol p, double w, double t_max, double dt) {
  p.omega_interact = w;
  p.t_max = t_max;
  p.dt_output = dt;
  return p;
}

// 6. Qubit-device lifetimes and the bend echo.
outcome ac6() {
  const device d = load_device("qubit_device.json");
  const double wmid = mid_band(d.spec.interior), w0 = d.spec.interior.omega0();
  const double t_mid = lifetime_1e(simulate_emission(d.spec, d.emitter, with_frequency(d.proto, wmid, 60e-9, 0.05e-9)));
  const double t_far =
      lifetime_1e(simulate_emission(d.spec, d.emitter, with_frequency(d.proto, w0 + two_pi * 250e6, 20e-6, 2e-9)));
  const device b = load_device("qubit_device_bend.json");
  const protocol pb = with_frequency(b.proto, wmid, 200e-9, 0.05e-9);
  const double echo = deviation_onset(simulate_emission(b.spec, b.emitter, pb), simulate_emission(d.spec, d.emitter, pb),
                                      1e-3);
  const bool ok = std::abs(t_mid - 7.5e-9) <= 0.15 * 7.5e-9 && t_far / t_mid >= 200.0 &&
                  std::abs(echo - 115e-9) <= 0.1 * 115e-9;
  return {ok, fmt("lifetime_ns=%.3f (tol 7.5 +- 15%%)", t_mid * 1e9) + fmt(" ratio=%.1f (tol >= 200)", t_far / t_mid) +
                  fmt(" echo_ns=%.2f (tol 115 +- 10%%)", echo * 1e9)};
}

// 7. Single-excitation Schroedinger evolution against the classical circuit.
outcome ac7() {
  const device d = load_device("qubit_device.json");
  const unit_cell& c = d.spec.interior;
  const double w0 = c.omega0();
  double worst = 0.0;
  for (double w : {mid_band(c), w0 - two_pi * 15e6, lower_band_edge(c) + two_pi * 20e6}) {
    const protocol p = with_frequency(d.proto, w, 200e-9, 0.1e-9);
    const dynamics_trace a = simulate_emission(d.spec, d.emitter, p);
    const dynamics_trace q = simulate_single_excitation(d.spec, d.emitter, p);
    for (std::size_t i = 0; i < a.p_e.size(); ++i) worst = std::max(worst, std::abs(a.p_e[i] - q.p_e[i]));
  }
  return {worst < 0.02, fmt("max_abs_diff=%.4f (tol 0.02)", worst)};
}

// 8. Open-mirror revivals and the ideal delay-equation oracle.
outcome ac8() {
  const device d = load_device("qubit_device.json");
  const device m = load_device("qubit_device_mirror.json");
  const double wmid = mid_band(d.spec.interior);
  const protocol p = with_frequency(m.proto, wmid, 600e-9, 0.1e-9);
  const dynamics_trace mirror = simulate_mirror(m.spec, m.emitter, p);
  const dynamics_trace ref = simulate_emission(d.spec, d.emitter, p);
  const std::vector<double> onsets = revival_onsets(mirror, ref, 1e-3, 0.25, 50e-9);
  const double tau = round_trip_delay(m.spec, 3, wmid);
  if (onsets.size() < 2) return {false, "fewer than two revivals found"};
  const double first = onsets[0], second = onsets[1];
  const bool first_ok = std::abs(first - 227e-9) <= 0.1 * 227e-9 && std::abs(first - tau) <= 0.1 * tau;
  const bool second_ok = std::abs(second / (2.0 * first) - 1.0) <= 0.15;

  const double gamma = 1.0 / 7.5e-9, tau_d = 227e-9;
  const dynamics_trace o = ideal_mirror_oracle(gamma, tau_d, default_mirror_phase(wmid, tau_d), 2.0 * tau_d, 0.1e-9);
  double dev = 0.0;
  for (std::size_t i = 0; i < o.t.size() && o.t[i] < tau_d; ++i) {
    dev = std::max(dev, std::abs(o.p_e[i] - std::exp(-gamma * o.t[i])));
  }
  const bool oracle_ok = dev <= 1e-14;
  return {first_ok && second_ok && oracle_ok,
          fmt("first_ns=%.2f (tol 227 +- 10%%", first * 1e9) + fmt(", model %.2f)", tau * 1e9) +
              fmt(" second_over_2first=%.4f (tol 1 +- 15%%)", second / (2.0 * first)) +
              fmt(" oracle_dev=%.2e (tol 1e-14)", dev)};
}

// 9. Sideband-mediated emission rate against the first-order Bessel factor.
outcome ac9() {
  const device d = load_device("qubit_device.json");
  const device m = load_device("qubit_device_mirror.json");
  const unit_cell& c = d.spec.interior;
  const double wmid = mid_band(c), wge = c.omega0() + two_pi * 250e6, wmod = wge - wmid;
  auto rate = [&](double index) {
    protocol p = with_frequency(d.proto, wge, 200e-9, 0.5e-9);
    p.mod = modulation{wmod, index * wmod};
    const dynamics_trace t = simulate_emission(d.spec, d.emitter, p);
    if (!t.converged) throw error("modulated run did not converge");
    return effective_rate(t, 20e-9, 180e-9);
  };
  const double base = rate(0.0);
  const std::vector<double> idx{0.2, 0.4, 0.6, 0.8};
  std::vector<double> g;
  for (double a : idx) g.push_back(rate(a));
  auto j1sq = [](double a) { return std::pow(boost::math::cyl_bessel_j(1, a), 2); };
  double worst = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const double measured = (g[i] - base) / (g[1] - base);
    const double expected = j1sq(idx[i]) / j1sq(0.4);
    worst = std::max(worst, std::abs(measured / expected - 1.0));
  }
  const double tau_d = round_trip_delay(m.spec, 3, wmid);
  const double product = g[1] * tau_d;
  return {worst <= 0.15 && std::abs(product - 1.0) <= 0.25,
          fmt("max_ratio_dev=%.4f (tol 0.15)", worst) + fmt(" gamma_tau=%.3f (tol 1 +- 25%%)", product)};
}

array_spec disorder_base() {
  const json j = cli::parse_json_file(config_dir / "disorder_extinction.json");
  return cli::array_spec_from_json(j.at("array"));
}

// 10. Disorder extinction crossing and the calibration round trip.
outcome ac10() {
  const auto t0 = std::chrono::steady_clock::now();
  extinction_problem p;
  p.spec = disorder_base();
  for (int i = 0; i <= 10; ++i) p.sigma_over_j.push_back(0.02 * i);
  p.n_realizations = 500;
  p.seed = 2024;
  p.threads = 8;
  const disorder_ensemble_result r = extinction_curve(p);
  const double secs = seconds_since(t0);
  const double cross = extinction_crossing(r, -0.5);

  const double j = tight_binding(p.spec.interior).j_tb;
  const double planted = 0.1 * j;
  const int n_measure = 20;
  double measured = 0.0;
  int used = 0;
  for (int i = 0; i < n_measure; ++i) {
    const disorder_sample s = sample_disordered(p.spec, planted, substream_seed(99, i));
    try {
      measured += fsr_variance(fsr_response(s.spec, 4001), s.spec.interior).delta_fsr;
      ++used;
    } catch (const error&) {
    }
  }
  if (used == 0) return {false, "no measurable realization"};
  measured /= used;
  calibration_problem cp;
  cp.spec = p.spec;
  for (int i = 1; i <= 10; ++i) cp.sigma.push_back(0.025 * i * j);
  cp.n_realizations = 500;
  cp.seed = 7;
  cp.threads = 8;
  const calibration_result cal = calibrate_sigma(measured, cp);
  const double err = std::abs(cal.sigma_estimate / planted - 1.0);
  const bool ok = cross >= 0.07 && cross <= 0.13 && err <= 0.2 && secs < 600.0;
  return {ok, fmt("crossing_sigma_over_j=%.4f (tol [0.07, 0.13])", cross) + fmt(" sigma_rel_err=%.3f (tol 0.2)", err) +
                  fmt(" ensemble_s=%.1f (tol < 600)", secs)};
}

std::map<std::string, std::string> csv_digests(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".csv") out[e.path().filename().string()] = cli::sha256_hex(cli::read_file(e.path()));
  }
  return out;
}

// 11. Byte-identical CSV output when seeded commands are repeated.
outcome ac11() {
  const fs::path root = fs::temp_directory_path() / "slowline_ac11";
  fs::remove_all(root);
  const json small{{"array", cli::to_json(disorder_base())},
                   {"sigma_over_j", {0.0, 0.05, 0.1}},
                   {"n_realizations", 40},
                   {"bootstrap_samples", 50}};
  fs::create_directories(root);
  cli::write_atomic(root / "extinction.json", small.dump(2));
  json cal{{"array", cli::to_json(disorder_base())},
           {"sigma_hz", {2e6, 4e6, 6e6}},
           {"n_realizations", 20},
           {"grid_points", 2001},
           {"measured_delta_fsr_hz", 1e5}};
  cli::write_atomic(root / "calibrate.json", cal.dump(2));

  struct job {
    std::string command, mode, config;
    bool sweep;
  };
  const std::vector<job> jobs{{"disorder", "extinction", (root / "extinction.json").string(), false},
                              {"disorder", "calibrate", (root / "calibrate.json").string(), false},
                              {"band", "", (config_dir / "test_device.json").string(), false},
                              {"s21", "", (config_dir / "test_device.json").string(), false},
                              {"taper-opt", "", (config_dir / "unmatched_26.json").string(), false},
                              {"dressed", "", (config_dir / "dressed_bandedge.json").string(), false},
                              {"dynamics", "", (config_dir / "qubit_device.json").string(), true}};
  int compared = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    std::map<std::string, std::string> digests[2];
    for (int rep = 0; rep < 2; ++rep) {
      cli::run_options o;
      o.command = jobs[i].command;
      o.mode = jobs[i].mode;
      o.config = jobs[i].config;
      o.out = root / ("run" + std::to_string(i) + "_" + std::to_string(rep));
      o.seed = 11;
      o.seed_set = true;
      o.threads = rep == 0 ? 1 : 4;
      o.sweep = jobs[i].sweep;
      cli::run(o);
      digests[rep] = csv_digests(o.out);
    }
    if (digests[0].empty() || digests[0] != digests[1]) {
      return {false, "outputs differ for " + jobs[i].command + (jobs[i].mode.empty() ? "" : " " + jobs[i].mode)};
    }
    compared += static_cast<int>(digests[0].size());
  }
  fs::remove_all(root);
  return {true, "identical_csv_files=" + std::to_string(compared) + " over " + std::to_string(jobs.size()) + " commands"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<outcome()>> criteria{ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10, ac11};
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::stoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: slowline_acceptance [--only N]\n");
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "criterion out of range\n");
    return 2;
  }
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    outcome r;
    try {
      r = criteria[i]();
    } catch (const std::exception& e) {
      r = {false, std::string("error: ") + e.what()};
    }
    std::printf("AC%zu %s %s\n", i + 1, r.pass ? "PASS" : "FAIL", r.detail.c_str());
    std::fflush(stdout);
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
