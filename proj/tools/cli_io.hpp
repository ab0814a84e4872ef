#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slowline/circuit.hpp"
#include "slowline/dressed_states.hpp"
#include "slowline/dynamics.hpp"
#include "slowline/error.hpp"
#include "slowline/state_space.hpp"

namespace slowline::cli {

using json = nlohmann::ordered_json;

// Raised for schema violations; the message names the key path.
class config_error : public slowline::error {
 public:
  using slowline::error::error;
};

// Strict reader over one JSON object: every key must be consumed, unknown keys are rejected.
class object_reader {
 public:
  object_reader(const json& j, std::string path);

  bool has(const std::string& key) const;
  double number(const std::string& key);
  double number(const std::string& key, double fallback);
  int integer(const std::string& key);
  int integer(const std::string& key, int fallback);
  bool boolean(const std::string& key, bool fallback);
  std::string string(const std::string& key, const std::string& fallback);
  std::vector<double> numbers(const std::string& key);
  // Null is read as infinity.
  double number_or_inf(const std::string& key, double fallback);
  const json& raw(const std::string& key);
  object_reader child(const std::string& key);
  std::string key_path(const std::string& key) const;

  // Throws on keys that were never read.
  void finish() const;

 private:
  const json& j_;
  std::string path_;
  mutable std::set<std::string> used_;
};

json parse_json_file(const std::filesystem::path& path);

// Keys read by read_array_spec; the same keys are emitted by to_json(array_spec).
const std::vector<std::string>& array_spec_keys();

array_spec read_array_spec(object_reader& r);
json to_json(const array_spec& spec);
array_spec array_spec_from_json(const json& j);

circuit_emitter read_circuit_emitter(object_reader r);
json to_json(const circuit_emitter& e);
emitter_params read_emitter_params(object_reader r);
json to_json(const emitter_params& e);
protocol read_protocol(object_reader r);
json to_json(const protocol& p);

std::string format_number(double x);

// CSV with a fixed header and shortest round-trip number formatting.
std::string csv(const std::string& header, const std::vector<std::vector<double>>& columns);
std::string csv(const two_port_response& r);

std::string sha256_hex(const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

// Writes via a temporary file and rename so readers never see partial output.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string utc_timestamp();

// Output files produced by one command, recorded for the manifest.
class output_set {
 public:
  explicit output_set(std::filesystem::path dir);
  void add(const std::string& name, const std::string& content);
  const std::filesystem::path& dir() const { return dir_; }
  json manifest_entries() const;

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;  // name, sha256
  std::map<std::string, std::size_t> sizes_;
};

struct run_options {
  std::string command;
  std::string mode;  // disorder: extinction | calibrate
  std::filesystem::path config;
  std::filesystem::path out;
  std::uint64_t seed = 0;
  bool seed_set = false;  // when false, a manifest used as config supplies the seed
  int threads = 1;
  bool sweep = false;
};

struct run_outcome {
  int exit_code = 0;
  json summary;
};

// Executes one subcommand; throws slowline::error on failure.
run_outcome run(const run_options& opt);

// Full command line entry point: parses arguments, runs, reports errors as JSON on stderr.
int main_entry(int argc, const char* const* argv);
int main_entry(const std::vector<std::string>& args);

extern const char* const tool_version;

}  // namespace slowline::cli
