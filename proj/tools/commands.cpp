#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>

#include "cli_io.hpp"
#include "slowline/band_structure.hpp"
#include "slowline/disorder.hpp"
#include "slowline/dressed_states.hpp"
#include "slowline/dynamics.hpp"
#include "slowline/taper.hpp"

#ifndef SLOWLINE_VERSION
#define SLOWLINE_VERSION "0.0.0"
#endif

namespace slowline::cli {

const char* const tool_version = SLOWLINE_VERSION;

namespace {

struct check_list {
  json items = json::array();
  bool all_pass = true;

  void add(const std::string& name, bool pass) {
    items.push_back({{"name", name}, {"pass", pass}});
    all_pass = all_pass && pass;
  }
};

struct context {
  const run_options& opt;
  object_reader& cfg;
  output_set& out;
  check_list& checks;
  json summary = json::object();
};

double hz(double omega) { return omega / two_pi; }

// Either "cell" (interior parameters only) or "array" (a full array description).
unit_cell read_cell_or_array(object_reader& cfg) {
  const bool has_cell = cfg.has("cell"), has_array = cfg.has("array");
  if (has_cell == has_array) throw config_error("config: exactly one of $.cell and $.array is required");
  if (has_array) {
    object_reader a = cfg.child("array");
    const array_spec s = read_array_spec(a);
    a.finish();
    return s.interior;
  }
  object_reader c = cfg.child("cell");
  unit_cell cell;
  cell.c0 = c.number("c0_f");
  cell.cg = c.number("cg_f");
  cell.l0 = c.number("l0_h");
  cell.q_internal = c.number_or_inf("q_internal", infinite_q);
  c.finish();
  try {
    cell.validate();
  } catch (const slowline::invalid_argument& e) {
    throw config_error(std::string("config: ") + e.what());
  }
  return cell;
}

array_spec read_array(object_reader& cfg) {
  object_reader a = cfg.child("array");
  const array_spec s = read_array_spec(a);
  a.finish();
  return s;
}

void run_band(context& c) {
  const unit_cell cell = read_cell_or_array(c.cfg);
  const int k_points = c.cfg.integer("k_points", 201);
  const int max_distance = c.cfg.integer("max_distance", 10);
  const int m_cells = c.cfg.integer("m_cells", std::max(2001, 2 * max_distance + 1));
  const double pitch = c.cfg.number("cell_pitch_m", default_cell_pitch_m);
  c.cfg.finish();

  const dispersion_curve curve = dispersion(cell, k_points, pitch);
  const coupling_spectrum cs = coupling_spectrum_dft(cell, m_cells, max_distance);
  std::vector<double> dist(cs.distance.begin(), cs.distance.end());
  c.out.add("dispersion.csv", csv("k_per_d,omega_rad_s", {curve.k, curve.omega}));
  c.out.add("coupling_spectrum.csv", csv("distance_cells,v_rad_s", {dist, cs.v}));

  const tight_binding_params tb = tight_binding(cell);
  const double lo = lower_band_edge(cell), hi = upper_band_edge(cell);
  json r{{"omega0_hz", hz(cell.omega0())},
         {"lower_edge_hz", hz(lo)},
         {"upper_edge_hz", hz(hi)},
         {"bandwidth_hz", hz(bandwidth(cell))},
         {"j_tb_hz", hz(tb.j_tb)},
         {"j_exact_hz", hz(tb.j_exact)},
         {"lower_edge_curvature_hz", hz(lower_edge_curvature(cell))},
         {"delay_per_area_s_per_m2", delay_per_area(cell, pitch, pitch)}};
  c.out.add("band.json", r.dump(2) + "\n");
  c.summary = r;

  bool finite = true;
  for (double w : curve.omega) finite = finite && std::isfinite(w);
  c.checks.add("dispersion_finite", finite);
  c.checks.add("band_edges_ordered", lo < hi && std::abs(hi - cell.omega0()) <= 1e-12 * cell.omega0());
}

void run_s21(context& c) {
  const array_spec spec = read_array(c.cfg);
  std::vector<double> grid;
  if (c.cfg.has("f_start_hz") || c.cfg.has("f_stop_hz")) {
    const double a = two_pi * c.cfg.number("f_start_hz"), b = two_pi * c.cfg.number("f_stop_hz");
    if (!(b > a && a > 0.0)) throw config_error("config: need 0 < f_start_hz < f_stop_hz");
    grid = linspace(a, b, c.cfg.integer("points", 2001));
  } else {
    grid = default_grid(spec.interior, c.cfg.integer("points", 2001));
  }
  const double window = c.cfg.number("band_window", 0.5);
  c.cfg.finish();

  const two_port_response r = cascade_abcd(spec, grid);
  c.out.add("s21.csv", csv(r));
  c.out.add("group_delay.csv", csv("omega_rad_s,group_delay_s", {r.omega, group_delay(r)}));

  const double centre = band_center(spec.interior);
  const two_port_response mid = cascade_abcd(spec, linspace(centre - 0.01 * bandwidth(spec.interior),
                                                            centre + 0.01 * bandwidth(spec.interior), 21));
  const std::vector<double> gd = group_delay(mid);
  const double ripple_db = ripple(spec, window);
  json s{{"ripple_db", ripple_db}, {"band_window", window}, {"mid_band_group_delay_s", gd[gd.size() / 2]}};
  c.out.add("s21.json", s.dump(2) + "\n");
  c.summary = s;

  bool ok = true;
  for (bool b : r.ok) ok = ok && b;
  c.checks.add("response_regular", ok);
}

void run_taper(context& c) {
  taper_problem p;
  p.base = read_array(c.cfg);
  p.n_modified = c.cfg.integer("n_modified", p.n_modified);
  p.band_window = c.cfg.number("band_window", p.band_window);
  p.symmetric = c.cfg.boolean("symmetric", p.symmetric);
  p.max_iterations = c.cfg.integer("max_iterations", p.max_iterations);
  p.grid_points = c.cfg.integer("grid_points", p.grid_points);
  if (c.cfg.has("extra_seeds_f")) {
    const json& seeds = c.cfg.raw("extra_seeds_f");
    if (!seeds.is_array()) throw config_error("config: $.extra_seeds_f expected array of arrays");
    for (const auto& s : seeds) {
      if (!s.is_array()) throw config_error("config: $.extra_seeds_f expected array of arrays");
      std::vector<double> v;
      for (const auto& x : s) {
        if (!x.is_number()) throw config_error("config: $.extra_seeds_f entries must be numbers");
        v.push_back(x.get<double>());
      }
      p.extra_seeds.push_back(v);
    }
  }
  c.cfg.finish();
  try {
    p.validate();
  } catch (const slowline::invalid_argument& e) {
    throw config_error(std::string("config: ") + e.what());
  }

  const taper_report rep = optimize_taper(p);
  c.out.add("optimized_spec.json", to_json(rep.spec).dump(2) + "\n");
  std::vector<double> iter(rep.log.size());
  for (std::size_t i = 0; i < iter.size(); ++i) iter[i] = static_cast<double>(i);
  c.out.add("convergence.csv", csv("iter,ripple_db", {iter, rep.log}));
  json r{{"ripple_db", rep.ripple_db},
         {"initial_ripple_db", rep.initial_ripple_db},
         {"couplings_f", rep.couplings},
         {"iterations", rep.iterations},
         {"converged", rep.converged}};
  c.out.add("taper_report.json", r.dump(2) + "\n");
  c.summary = r;
  c.checks.add("ripple_not_worse", rep.ripple_db <= rep.initial_ripple_db);
}

void run_dressed(context& c) {
  const unit_cell cell = read_cell_or_array(c.cfg);
  const emitter_params em = read_emitter_params(c.cfg.child("emitter"));
  dressed_options o;
  const std::string model = c.cfg.string("model", "effective_mass");
  if (model == "effective_mass") {
    o.model = band_model::effective_mass;
  } else if (model == "exact_band") {
    o.model = band_model::exact_band;
  } else {
    throw config_error("config: $.model must be \"effective_mass\" or \"exact_band\"");
  }
  const std::string edge = c.cfg.string("edge", "upper");
  if (edge == "upper") {
    o.edge = band_edge::upper;
  } else if (edge == "lower") {
    o.edge = band_edge::lower;
  } else {
    throw config_error("config: $.edge must be \"upper\" or \"lower\"");
  }
  o.j = two_pi * c.cfg.number("j_hz", 0.0);
  const int profile_cells = c.cfg.integer("profile_cells", 101);
  c.cfg.finish();
  if (profile_cells < 1) throw config_error("config: $.profile_cells must be positive");

  const dressed_state_solution s = solve_dressed_states(em, cell, o);
  json r{{"e_bound_hz", hz(s.e_bound)},
         {"e_radiative_hz_re", hz(s.e_radiative.real())},
         {"e_radiative_hz_im", hz(s.e_radiative.imag())},
         {"qubit_weight", s.qubit_weight},
         {"lambda_cells", s.localization_length},
         {"splitting_hz", hz(s.splitting)}};
  c.out.add("dressed.json", r.dump(2) + "\n");
  const std::vector<double> prof = bound_profile(s.e_bound, cell, profile_cells, s.qubit_weight, o);
  std::vector<double> offset(prof.size());
  for (std::size_t i = 0; i < prof.size(); ++i) offset[i] = static_cast<double>(i) - static_cast<double>(prof.size() / 2);
  c.out.add("profile.csv", csv("cell_offset,amplitude", {offset, prof}));
  c.summary = r;
  c.checks.add("radiative_root_converged", s.radiative_converged);
}

std::string trace_csv(const dynamics_trace& t) { return csv("t_s,p_e", {t.t, t.p_e}); }

json trace_json(const dynamics_trace& t) {
  json j{{"method", t.method},
         {"converged", t.converged},
         {"error_estimate", t.error_estimate},
         {"lifetime_1e_s", std::isfinite(lifetime_1e(t)) ? json(lifetime_1e(t)) : json(nullptr)}};
  json meta = json::object();
  for (const auto& [k, v] : t.metadata) meta[k] = v;
  j["metadata"] = meta;
  return j;
}

void run_dynamics(context& c) {
  const array_spec spec = read_array(c.cfg);
  const circuit_emitter em = read_circuit_emitter(c.cfg.child("emitter"));
  const protocol proto = read_protocol(c.cfg.child("protocol"));
  const std::string method = c.cfg.string("method", "state_space");
  if (method != "state_space" && method != "single_excitation") {
    throw config_error("config: $.method must be \"state_space\" or \"single_excitation\"");
  }
  std::vector<double> omegas;
  if (c.cfg.has("sweep")) {
    object_reader s = c.cfg.child("sweep");
    const double a = two_pi * s.number("f_start_hz"), b = two_pi * s.number("f_stop_hz");
    const int n = s.integer("points");
    s.finish();
    if (n < 1) throw config_error("config: $.sweep.points must be positive");
    omegas = n == 1 ? std::vector<double>{a} : linspace(a, b, n);
  }
  c.cfg.finish();

  auto simulate = [&](const protocol& p) {
    if (method == "single_excitation") return simulate_single_excitation(spec, em, p);
    return spec.termination_out == termination::open_mirror ? simulate_mirror(spec, em, p)
                                                            : simulate_emission(spec, em, p);
  };

  if (!c.opt.sweep) {
    const dynamics_trace t = simulate(proto);
    c.out.add("trace.csv", trace_csv(t));
    json r = trace_json(t);
    c.out.add("dynamics.json", r.dump(2) + "\n");
    c.summary = r;
    c.checks.add("integrator_converged", t.converged);
    return;
  }
  if (omegas.empty()) throw config_error("config: --sweep needs a $.sweep block");
  std::vector<dynamics_trace> traces;
  if (method == "state_space") {
    traces = simulate_sweep(spec, em, proto, omegas, c.opt.threads);
  } else {
    for (double w : omegas) {
      protocol p = proto;
      p.omega_interact = w;
      traces.push_back(simulate(p));
    }
  }
  std::string index = "file,f_interact_hz,lifetime_1e_s,converged\n";
  bool all = true;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "trace_%03zu.csv", i);
    c.out.add(name, trace_csv(traces[i]));
    index += std::string(name) + "," + format_number(hz(omegas[i])) + "," + format_number(lifetime_1e(traces[i])) + "," +
             (traces[i].converged ? "1" : "0") + "\n";
    all = all && traces[i].converged;
  }
  c.out.add("index.csv", index);
  c.summary = {{"traces", traces.size()}, {"method", method}};
  c.checks.add("integrator_converged", all);
}

void run_disorder(context& c) {
  const std::string& mode = c.opt.mode;
  const array_spec spec = read_array(c.cfg);
  const int n_real = c.cfg.integer("n_realizations", 500);
  if (mode == "extinction") {
    extinction_problem p;
    p.spec = spec;
    p.sigma_over_j = c.cfg.numbers("sigma_over_j");
    p.n_realizations = n_real;
    p.seed = c.opt.seed;
    p.band_window = c.cfg.number("band_window", p.band_window);
    p.grid_points = c.cfg.integer("grid_points", p.grid_points);
    p.bootstrap_samples = c.cfg.integer("bootstrap_samples", p.bootstrap_samples);
    p.threads = c.opt.threads;
    c.cfg.finish();
    const disorder_ensemble_result r = extinction_curve(p);
    c.out.add("extinction.csv",
              csv("sigma_over_j,mean_ext_db,stderr_db", {r.sigma_over_j, r.mean_extinction_db, r.stderr_db}));
    const double cross = extinction_crossing(r, -0.5);
    json s{{"crossing_sigma_over_j_at_minus_0p5_db", std::isfinite(cross) ? json(cross) : json(nullptr)},
           {"n_realizations", r.n_realizations},
           {"redraws", r.redraws}};
    c.out.add("extinction.json", s.dump(2) + "\n");
    c.summary = s;
    c.checks.add("curve_finite", std::all_of(r.mean_extinction_db.begin(), r.mean_extinction_db.end(),
                                             [](double x) { return std::isfinite(x); }));
    return;
  }
  if (mode == "calibrate") {
    calibration_problem p;
    p.spec = spec;
    for (double s : c.cfg.numbers("sigma_hz")) p.sigma.push_back(two_pi * s);
    p.n_realizations = n_real;
    p.seed = c.opt.seed;
    p.grid_points = c.cfg.integer("grid_points", p.grid_points);
    p.threads = c.opt.threads;
    const double measured = two_pi * c.cfg.number("measured_delta_fsr_hz");
    c.cfg.finish();
    const calibration_result r = calibrate_sigma(measured, p);
    c.out.add("calibration.csv", csv("sigma_rad_s,mean_delta_fsr_rad_s", {r.sigma, r.mean_delta_fsr}));
    const unit_cell& cell = p.spec.interior;
    json s{{"sigma_estimate_hz", hz(r.sigma_estimate)},
           {"sigma_over_omega0", r.sigma_estimate / cell.omega0()},
           {"sigma_over_j", r.sigma_estimate / (cell.omega0() * cell.cg / (2.0 * cell.c0))},
           {"clamped", r.clamped},
           {"monotone", r.monotone},
           {"usable_points", r.usable}};
    c.out.add("calibration.json", s.dump(2) + "\n");
    c.summary = s;
    c.checks.add("estimate_inside_table", !r.clamped);
    return;
  }
  throw config_error("disorder: mode must be \"extinction\" or \"calibrate\"");
}

const std::map<std::string, std::function<void(context&)>>& commands() {
  static const std::map<std::string, std::function<void(context&)>> table{
      {"band", run_band},       {"s21", run_s21},           {"taper-opt", run_taper},
      {"dressed", run_dressed}, {"dynamics", run_dynamics}, {"disorder", run_disorder}};
  return table;
}

}  // namespace

run_outcome run(const run_options& opt_in) {
  run_options opt = opt_in;
  const auto it = commands().find(opt.command);
  if (it == commands().end()) throw config_error("unknown command '" + opt.command + "'");
  if (opt.threads < 1) throw config_error("--threads must be at least 1");

  const json input = parse_json_file(opt.config);
  const std::string input_bytes = read_file(opt.config);
  json config = input;
  // A manifest from an earlier run can be used as the configuration.
  if (input.is_object() && input.contains("manifest_version")) {
    if (input.value("command", "") != opt.command || input.value("mode", "") != opt.mode) {
      throw config_error("config: manifest was written by a different command");
    }
    config = input.at("parameters");
    if (!opt.seed_set) opt.seed = input.value("seed", std::uint64_t{0});
  }

  const std::string started = utc_timestamp();
  output_set out(opt.out);
  check_list checks;
  json manifest{{"manifest_version", 1},
                {"command", opt.command},
                {"mode", opt.mode},
                {"sweep", opt.sweep},
                {"tool_version", tool_version},
                {"seed", opt.seed},
                {"threads", opt.threads},
                {"parameters", config},
                {"inputs", json::array({{{"file", opt.config.string()}, {"sha256", sha256_hex(input_bytes)}}})},
                {"started_utc", started}};
  auto finish_manifest = [&](const std::string& status, const json& extra) {
    manifest["finished_utc"] = utc_timestamp();
    manifest["status"] = status;
    manifest["checks"] = checks.items;
    manifest["outputs"] = out.manifest_entries();
    for (const auto& [k, v] : extra.items()) manifest[k] = v;
    write_atomic(out.dir() / "manifest.json", manifest.dump(2) + "\n");
  };

  object_reader reader(config, "$");
  context ctx{opt, reader, out, checks};
  try {
    it->second(ctx);
  } catch (const std::exception& e) {
    finish_manifest("error", {{"error", e.what()}});
    throw;
  }
  const bool pass = checks.all_pass;
  finish_manifest(pass ? "ok" : "checks_failed", {{"summary", ctx.summary}});
  return {pass ? 0 : 3, ctx.summary};
}

}  // namespace slowline::cli
