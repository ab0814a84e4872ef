#include "cli_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace slowline::cli {

namespace fs = std::filesystem;

namespace {

std::string type_name(const json& j) { return j.type_name(); }

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

object_reader::object_reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
  if (!j_.is_object()) throw config_error("config: " + path_ + " expected object, got " + type_name(j_));
}

std::string object_reader::key_path(const std::string& key) const { return path_ + "." + key; }

bool object_reader::has(const std::string& key) const {
  used_.insert(key);
  return j_.contains(key) && !j_.at(key).is_null();
}

const json& object_reader::raw(const std::string& key) {
  used_.insert(key);
  if (!j_.contains(key)) {
    for (const auto& [k, v] : j_.items()) {
      if (lower(k) == lower(key)) {
        throw config_error("config: unknown key '" + k + "' at " + path_ + " (did you mean '" + key + "'?)");
      }
    }
    throw config_error("config: missing required key " + key_path(key));
  }
  return j_.at(key);
}

double object_reader::number(const std::string& key) {
  const json& v = raw(key);
  if (!v.is_number()) throw config_error("config: " + key_path(key) + " expected number, got " + type_name(v));
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw config_error("config: " + key_path(key) + " must be finite");
  return x;
}

double object_reader::number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

double object_reader::number_or_inf(const std::string& key, double fallback) {
  used_.insert(key);
  if (!j_.contains(key)) return fallback;
  if (j_.at(key).is_null()) return std::numeric_limits<double>::infinity();
  return number(key);
}

int object_reader::integer(const std::string& key) {
  const json& v = raw(key);
  if (!v.is_number_integer()) throw config_error("config: " + key_path(key) + " expected integer, got " + type_name(v));
  return v.get<int>();
}

int object_reader::integer(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }

bool object_reader::boolean(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const json& v = raw(key);
  if (!v.is_boolean()) throw config_error("config: " + key_path(key) + " expected boolean, got " + type_name(v));
  return v.get<bool>();
}

std::string object_reader::string(const std::string& key, const std::string& fallback) {
  if (!has(key)) return fallback;
  const json& v = raw(key);
  if (!v.is_string()) throw config_error("config: " + key_path(key) + " expected string, got " + type_name(v));
  return v.get<std::string>();
}

std::vector<double> object_reader::numbers(const std::string& key) {
  const json& v = raw(key);
  if (!v.is_array()) throw config_error("config: " + key_path(key) + " expected array, got " + type_name(v));
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw config_error("config: " + key_path(key) + "[" + std::to_string(i) + "] expected number, got " + type_name(v[i]));
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

object_reader object_reader::child(const std::string& key) { return object_reader(raw(key), key_path(key)); }

void object_reader::finish() const {
  for (const auto& [key, value] : j_.items()) {
    if (used_.count(key)) continue;
    std::string hint;
    for (const auto& known : used_) {
      if (lower(known) == lower(key) || edit_distance(known, key) <= 2) {
        hint = " (did you mean '" + known + "'?)";
        break;
      }
    }
    throw config_error("config: unknown key '" + key + "' at " + path_ + hint);
  }
}

json parse_json_file(const fs::path& path) {
  if (!fs::exists(path)) throw config_error("config: file not found: " + path.string());
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw config_error("config: " + path.string() + " is not valid JSON: " + e.what());
  }
}

const std::vector<std::string>& array_spec_keys() {
  static const std::vector<std::string> keys{"c0_f",           "cg_f",          "l0_h",           "q_internal",
                                             "boundary_in",    "boundary_out",  "interior_count", "port_impedance_ohm",
                                             "termination_out", "bend"};
  return keys;
}

namespace {

std::vector<boundary_cell> read_boundary(object_reader& r, const std::string& key) {
  std::vector<boundary_cell> out;
  if (!r.has(key)) return out;
  const json& arr = r.raw(key);
  if (!arr.is_array()) throw config_error("config: " + r.key_path(key) + " expected array, got " + arr.type_name());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    object_reader c(arr[i], r.key_path(key) + "[" + std::to_string(i) + "]");
    boundary_cell b;
    b.c_shunt = c.number("c_shunt_f");
    b.c_left = c.number("c_left_f");
    b.c_right = c.number("c_right_f");
    b.l0 = c.number("l0_h");
    c.finish();
    out.push_back(b);
  }
  return out;
}

json boundary_json(const std::vector<boundary_cell>& cells) {
  json arr = json::array();
  for (const auto& b : cells) {
    arr.push_back({{"c_shunt_f", b.c_shunt}, {"c_left_f", b.c_left}, {"c_right_f", b.c_right}, {"l0_h", b.l0}});
  }
  return arr;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::map<int, double> read_int_map(object_reader& r, const std::string& key, double scale) {
  std::map<int, double> out;
  if (!r.has(key)) return out;
  object_reader m = r.child(key);
  for (const auto& [k, v] : r.raw(key).items()) {
    int idx = 0;
    const auto res = std::from_chars(k.data(), k.data() + k.size(), idx);
    if (res.ec != std::errc() || res.ptr != k.data() + k.size()) {
      throw config_error("config: " + r.key_path(key) + " keys must be integers, got '" + k + "'");
    }
    out[idx] = m.number(k) * scale;
  }
  m.finish();
  return out;
}

json int_map_json(const std::map<int, double>& m, double scale) {
  json o = json::object();
  for (const auto& [k, v] : m) o[std::to_string(k)] = v * scale;
  return o;
}

}  // namespace

array_spec read_array_spec(object_reader& r) {
  array_spec s;
  s.interior.c0 = r.number("c0_f");
  s.interior.cg = r.number("cg_f");
  s.interior.l0 = r.number("l0_h");
  s.interior.q_internal = r.number_or_inf("q_internal", infinite_q);
  s.boundary_in = read_boundary(r, "boundary_in");
  s.boundary_out = read_boundary(r, "boundary_out");
  s.count = r.integer("interior_count");
  s.port_impedance = r.number("port_impedance_ohm", 50.0);
  const std::string term = r.string("termination_out", "matched");
  if (term == "matched") {
    s.termination_out = termination::matched;
  } else if (term == "open_mirror") {
    s.termination_out = termination::open_mirror;
  } else {
    throw config_error("config: " + r.key_path("termination_out") + " must be \"matched\" or \"open_mirror\"");
  }
  if (r.has("bend")) {
    object_reader b = r.child("bend");
    s.bend = bend_spec{b.integer("position"), b.number("c_f")};
    b.finish();
  }
  if (r.has("l_cells_h")) s.inductance_override = r.numbers("l_cells_h");
  try {
    s.validate();
  } catch (const slowline::invalid_argument& e) {
    throw config_error(std::string("config: ") + e.what());
  }
  return s;
}

json to_json(const array_spec& s) {
  json j;
  j["c0_f"] = s.interior.c0;
  j["cg_f"] = s.interior.cg;
  j["l0_h"] = s.interior.l0;
  j["q_internal"] = number_or_null(s.interior.q_internal);
  j["boundary_in"] = boundary_json(s.boundary_in);
  j["boundary_out"] = boundary_json(s.boundary_out);
  j["interior_count"] = s.count;
  j["port_impedance_ohm"] = s.port_impedance;
  j["termination_out"] = s.termination_out == termination::matched ? "matched" : "open_mirror";
  j["bend"] = s.bend ? json{{"position", s.bend->position}, {"c_f", s.bend->capacitance}} : json(nullptr);
  if (!s.inductance_override.empty()) j["l_cells_h"] = s.inductance_override;
  return j;
}

array_spec array_spec_from_json(const json& j) {
  object_reader r(j, "$");
  array_spec s = read_array_spec(r);
  r.finish();
  return s;
}

circuit_emitter read_circuit_emitter(object_reader r) {
  circuit_emitter e;
  e.c_sigma = r.number("c_sigma_f");
  e.couplings = read_int_map(r, "couplings_f", 1.0);
  e.omega_ge = two_pi * r.number("f_ge_hz", 0.0);
  e.q_intrinsic = r.number_or_inf("q_intrinsic", infinite_q);
  e.compensate_loading = r.boolean("compensate_loading", false);
  r.finish();
  return e;
}

json to_json(const circuit_emitter& e) {
  return {{"c_sigma_f", e.c_sigma},
          {"couplings_f", int_map_json(e.couplings, 1.0)},
          {"f_ge_hz", e.omega_ge / two_pi},
          {"q_intrinsic", number_or_null(e.q_intrinsic)},
          {"compensate_loading", e.compensate_loading}};
}

emitter_params read_emitter_params(object_reader r) {
  emitter_params e;
  e.omega_ge = two_pi * r.number("f_ge_hz");
  e.g_uc = two_pi * r.number("g_uc_hz");
  e.extra_couplings = read_int_map(r, "extra_couplings_hz", two_pi);
  e.q_intrinsic = r.number_or_inf("q_intrinsic", infinite_q);
  e.cell = r.integer("cell", 1);
  r.finish();
  return e;
}

json to_json(const emitter_params& e) {
  return {{"f_ge_hz", e.omega_ge / two_pi},
          {"g_uc_hz", e.g_uc / two_pi},
          {"extra_couplings_hz", int_map_json(e.extra_couplings, 1.0 / two_pi)},
          {"q_intrinsic", number_or_null(e.q_intrinsic)},
          {"cell", e.cell}};
}

protocol read_protocol(object_reader r) {
  protocol p;
  p.omega_interact = two_pi * r.number("f_interact_hz");
  p.t_max = r.number("t_max_s");
  p.dt_output = r.number("dt_output_s");
  p.initial_excited_population = r.number("initial_excited_population", 1.0);
  if (r.has("modulation")) {
    object_reader m = r.child("modulation");
    p.mod = modulation{two_pi * m.number("f_mod_hz"), two_pi * m.number("epsilon_hz")};
    m.finish();
  }
  p.tune_time = r.number("tune_time_s", 0.0);
  if (r.has("f_start_hz")) p.omega_start = two_pi * r.number("f_start_hz");
  p.max_step = r.number("max_step_s", 0.0);
  r.finish();
  try {
    p.validate();
  } catch (const slowline::invalid_argument& e) {
    throw config_error(std::string("config: ") + e.what());
  }
  return p;
}

json to_json(const protocol& p) {
  json j{{"f_interact_hz", p.omega_interact / two_pi},
         {"t_max_s", p.t_max},
         {"dt_output_s", p.dt_output},
         {"initial_excited_population", p.initial_excited_population}};
  j["modulation"] = p.mod ? json{{"f_mod_hz", p.mod->omega_mod / two_pi}, {"epsilon_hz", p.mod->epsilon / two_pi}}
                          : json(nullptr);
  j["tune_time_s"] = p.tune_time;
  j["f_start_hz"] = p.omega_start ? json(*p.omega_start / two_pi) : json(nullptr);
  j["max_step_s"] = p.max_step;
  return j;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string csv(const std::string& header, const std::vector<std::vector<double>>& columns) {
  std::string out = header + "\n";
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw slowline::error("csv: columns differ in length");
  }
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      out += format_number(columns[c][i]);
    }
    out += '\n';
  }
  return out;
}

std::string csv(const two_port_response& r) {
  std::vector<std::vector<double>> cols(5);
  for (std::size_t i = 0; i < r.omega.size(); ++i) {
    cols[0].push_back(r.omega[i]);
    cols[1].push_back(r.s21[i].real());
    cols[2].push_back(r.s21[i].imag());
    cols[3].push_back(r.s11[i].real());
    cols[4].push_back(r.s11[i].imag());
  }
  return csv("omega_rad_s,s21_re,s21_im,s11_re,s11_im", cols);
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw slowline::error("sha256: cannot allocate digest context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) == 1 && EVP_DigestFinal_ex(ctx, digest, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw slowline::error("sha256: digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw slowline::error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw slowline::error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw slowline::error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

output_set::output_set(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

void output_set::add(const std::string& name, const std::string& content) {
  for (const auto& f : files_) {
    if (f.first == name) throw slowline::error("output file written twice: " + name);
  }
  write_atomic(dir_ / name, content);
  files_.emplace_back(name, sha256_hex(content));
  sizes_[name] = content.size();
}

json output_set::manifest_entries() const {
  json arr = json::array();
  for (const auto& [name, digest] : files_) arr.push_back({{"file", name}, {"sha256", digest}, {"bytes", sizes_.at(name)}});
  return arr;
}

}  // namespace slowline::cli
