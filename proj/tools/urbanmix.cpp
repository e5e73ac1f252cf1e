#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "urbanmix/app.hpp"

int main(int argc, char** argv) {
  using namespace urbanmix;

  CLI::App cli{"Hourly renewable-integration model for mixed residential and service-sector loads"};
  cli.require_subcommand(1);

  app::GlobalOptions g;
  std::uint64_t seed = 0;
  auto* config_opt = cli.add_option("--config", g.config, "Run configuration (JSON)")->check(CLI::ExistingFile);
  auto* seed_opt = cli.add_option("--seed", seed, "Random seed (overrides the config)");
  cli.add_option("--out", g.out, "Output directory")->capture_default_str();
  cli.add_option("--parallel", g.parallel, "Worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const app::GlobalOptions&, std::ostream&);
  };
  const Command commands[] = {
      {"scale", "Service-sector mix per 100 000 households and appendix reconciliation", app::cmd_scale},
      {"profiles", "Household, service, residential-only and mixed load profiles", app::cmd_profiles},
      {"generation", "Per-unit PV and wind generation series", app::cmd_generation},
      {"sweep", "Capacity sweep over PV and wind (Experiment 1)", app::cmd_sweep},
      {"classify", "Time and weather category tables (Experiment 2)", app::cmd_classify},
      {"optimize", "Area-constrained PV/wind mix by genetic algorithm", app::cmd_optimize},
      {"validate", "Fixture battery: reconciliation, national total, identities", app::cmd_validate},
  };
  for (const auto& c : commands) cli.add_subcommand(c.name, c.help);

  std::string fixture_dir;
  std::string fixture_spec = std::string(URBANMIX_DATA_DIR) + "/nl2014/scaling.json";
  double fixture_households = 100000.0;
  auto* fixture = cli.add_subcommand("fixture", "Write a synthetic 2014 input set with config.json");
  fixture->add_option("dir", fixture_dir, "Target directory")->required();
  fixture->add_option("--scaling-spec", fixture_spec, "Scaling spec to copy")->capture_default_str();
  fixture->add_option("--households", fixture_households, "Households in the generated config")->capture_default_str();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : app::kIoError;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (fixture->parsed()) {
      return app::cmd_fixture(fixture_dir, g.seed.value_or(2014), fixture_households, fixture_spec, std::cout);
    }
    if (!*config_opt) {
      std::cerr << "error: --config is required\n";
      return app::kIoError;
    }
    for (const auto& c : commands) {
      if (cli.got_subcommand(c.name)) return c.run(g, std::cout);
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return app::kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return app::kIoError;
  }
  return app::kIoError;
}
