#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pswitch/run.hpp"
#include "pswitch/scenarios.hpp"
#include "pswitch/version.hpp"

namespace {

namespace fs = std::filesystem;

// The config argument is a file path when one exists, otherwise the name of a
// bundled scenario.
std::string load_config_text(const std::string& arg) {
  if (fs::exists(arg) && !fs::is_directory(arg)) {
    std::ifstream in(arg, std::ios::binary);
    if (!in) throw pswitch::config_error("cannot read config file " + arg);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  if (const auto* scenario = pswitch::find_scenario(arg))
    return scenario->json_text;
  throw pswitch::config_error("no such config file or bundled scenario: " + arg +
                              " (see `simulate scenarios`)");
}

pswitch::ScenarioConfig load_config(const std::string& arg,
                                    const std::vector<std::string>& overrides) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(load_config_text(arg));
  } catch (const nlohmann::json::parse_error& e) {
    throw pswitch::config_error(std::string("config is not valid JSON: ") +
                                e.what());
  }
  for (const auto& assignment : overrides)
    pswitch::apply_override(root, assignment);
  return pswitch::config_from_json(root);
}

int dispatch(int argc, char** argv) {
  CLI::App app{"transfer-matrix simulator for emitter-cavity waveguide "
               "single-photon switches"};
  app.set_version_flag("--version", std::string(pswitch::version_string));
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a config file or bundled scenario");
  std::string run_config;
  run->add_option("config", run_config, "config file path or scenario name")
      ->required();
  std::vector<std::string> overrides;
  run->add_option("--set", overrides,
                  "override a config value, e.g. --set layout.count=5");
  std::string out_dir = "out";
  run->add_option("--out", out_dir, "output directory (default: out)");
  std::uint64_t seed_value = 0;
  auto* seed_opt =
      run->add_option("--seed", seed_value, "override the config seed");

  auto* scenarios =
      app.add_subcommand("scenarios", "list the bundled scenario catalog");
  std::string dump_dir;
  auto* dump_opt = scenarios->add_option(
      "--dump", dump_dir, "write every scenario as <name>.json into DIR");

  auto* validate =
      app.add_subcommand("validate", "parse and validate a config, run nothing");
  std::string validate_config_arg;
  validate
      ->add_option("config", validate_config_arg,
                   "config file path or scenario name")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad usage is a config problem
  }

  if (run->parsed()) {
    const auto cfg = load_config(run_config, overrides);
    std::optional<std::uint64_t> seed;
    if (seed_opt->count() > 0) seed = seed_value;
    const auto result = pswitch::run_scenario(cfg, out_dir, seed);
    std::cout << result.console;
    std::cout << "  wall time " << result.wall_ms << " ms; wrote:\n";
    for (const auto& file : result.files) std::cout << "    " << file << "\n";
    return 0;
  }

  if (scenarios->parsed()) {
    if (dump_opt->count() > 0) {
      fs::create_directories(dump_dir);
      for (const auto& s : pswitch::scenario_catalog()) {
        const auto path = fs::path(dump_dir) / (s.name + ".json");
        std::ofstream out(path, std::ios::binary);
        if (!out)
          throw pswitch::config_error("cannot write " + path.string());
        out << s.json_text;
      }
      std::cout << "wrote " << pswitch::scenario_catalog().size()
                << " scenario files to " << dump_dir << "\n";
    } else {
      for (const auto& s : pswitch::scenario_catalog()) {
        std::cout << s.name;
        for (std::size_t i = s.name.size(); i < 36; ++i) std::cout << ' ';
        std::cout << s.summary << "\n";
      }
    }
    return 0;
  }

  const auto cfg = load_config(validate_config_arg, {});
  pswitch::validate_config(cfg);
  std::cout << "ok: " << (cfg.name.empty() ? validate_config_arg : cfg.name)
            << " (" << pswitch::to_string(cfg.experiment) << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const pswitch::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const pswitch::validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const pswitch::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
