#include <CLI11.hpp>

#include <iostream>

#include "wavelab/parallel.hpp"
#include "wavelab/runner.hpp"
#include "wavelab/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"wavelab: rotating water-waves and Saint-Venant laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  int threads = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;

  auto add_common = [&](CLI::App* sub, bool wants_config) {
    if (wants_config)
      sub->add_option("config", config_path, "scenario config file")->required();
    sub->add_option("--out-dir", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads (0 = library default, 1 = serial)");
    sub->add_option("--seed", seed, "base seed for random initial data")
        ->each([&](const std::string&) { seed_given = true; });
  };

  CLI::App* run = app.add_subcommand("run", "execute one scenario");
  add_common(run, true);
  CLI::App* sweep = app.add_subcommand("sweep", "execute a parameter sweep");
  add_common(sweep, true);
  CLI::App* check = app.add_subcommand("check", "run the invariant self-test battery");
  add_common(check, false);

  CLI11_PARSE(app, argc, argv);

  if (threads != 0) wavelab::threads::set_num_threads(threads);

  try {
    if (check->parsed()) {
      int failures = wavelab::run_check();
      std::cout << (failures == 0 ? "all checks passed\n"
                                  : std::to_string(failures) + " check(s) failed\n");
      return failures == 0 ? 0 : 1;
    }
    wavelab::ScenarioConfig config = wavelab::parse_config_file(config_path);
    if (seed_given) config.seed = seed;
    if (run->parsed()) return wavelab::run_scenario(config, out_dir);
    return wavelab::run_sweep(config, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
