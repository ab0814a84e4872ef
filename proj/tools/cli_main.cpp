#include <CLI11.hpp>
#include <iostream>

#include "cli_io.hpp"

namespace slowline::cli {

namespace {

int report_error(const std::string& type, const std::string& message, int code) {
  const json err{{"error", {{"type", type}, {"message", message}}}};
  std::cerr << err.dump() << "\n";
  return code;
}

}  // namespace

int main_entry(const std::vector<std::string>& args) {
  CLI::App app{"Design and simulation of coupled-resonator slow-light arrays", "slowline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version);

  run_options opt;
  std::string config, out;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON configuration or an earlier manifest")->required();
    sub->add_option("--out", out, "Output directory")->required();
    sub->add_option("--seed", opt.seed, "Random seed");
    sub->add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
  };
  for (const char* name : {"band", "s21", "taper-opt", "dressed", "dynamics", "disorder"}) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub);
    if (std::string(name) == "dynamics") sub->add_flag("--sweep", opt.sweep, "Run the frequency sweep");
    if (std::string(name) == "disorder") {
      sub->add_option("mode", opt.mode, "extinction or calibrate")
          ->required()
          ->check(CLI::IsMember({"extinction", "calibrate"}));
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), 2);
  }

  opt.command = app.get_subcommands().front()->get_name();
  opt.config = config;
  opt.out = out;
  opt.seed_set = app.get_subcommands().front()->count("--seed") > 0;
  try {
    return run(opt).exit_code;
  } catch (const config_error& e) {
    return report_error("config", e.what(), 2);
  } catch (const std::exception& e) {
    return report_error("runtime", e.what(), 1);
  }
}

int main_entry(int argc, const char* const* argv) { return main_entry(std::vector<std::string>(argv, argv + argc)); }

}  // namespace slowline::cli
