// Experiment driver: each subcommand runs one config-described experiment
// and writes its CSV/JSON artifacts into the output directory.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "igo/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"graduated-optimization experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  if (const char* env = std::getenv("IGO_OUT_DIR")) out_dir = env;
  std::optional<std::uint64_t> seed;

  const char* kinds[] = {"smooth-sweep", "equivalence", "graduated", "variance",
                         "sharpness-sweep", "tail-test", "compare"};
  for (const char* kind : kinds) {
    auto* sub = app.add_subcommand(kind);
    sub->add_option("-c,--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("-o,--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override the config seed");
  }
  auto* validate = app.add_subcommand("validate-config", "schema-check a config and exit");
  validate->add_option("-c,--config", config_path, "experiment config (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  const auto* sub = app.get_subcommands().front();
  if (sub->get_name() == "validate-config") return igo::validate_config_file(config_path);

  // the subcommand must agree with the config's own kind
  const int rc = [&] {
    std::ifstream f(config_path);
    if (!f) {
      std::cerr << "config error: cannot open " << config_path << '\n';
      return igo::kExitConfigError;
    }
    nlohmann::json cfg;
    try {
      cfg = nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return igo::kExitConfigError;
    }
    if (cfg.value("kind", "") != sub->get_name()) {
      std::cerr << "config error: config kind '" << cfg.value("kind", "")
                << "' does not match subcommand '" << sub->get_name() << "'\n";
      return igo::kExitConfigError;
    }
    return igo::run_experiment(cfg, out_dir, seed);
  }();
  return rc;
}
