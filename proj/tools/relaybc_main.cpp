#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "relaybc/monte_carlo.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::int64_t seed = -1;
  int realizations = -1;
  std::string out;
  int parallel = -1;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("config", args->config_path, "Path to key=value config file")
      ->required();
  cmd->add_option("--seed", args->seed, "Override master seed");
  cmd->add_option("--realizations", args->realizations,
                  "Override realization count");
  cmd->add_option("--out", args->out, "Override output directory");
  cmd->add_option("--parallel", args->parallel,
                  "Override worker thread count");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

relaybc::ExperimentConfig load_with_overrides(const CommonArgs& args) {
  relaybc::ExperimentConfig config = relaybc::load_config(args.config_path);
  if (args.seed >= 0) config.seed = static_cast<std::uint64_t>(args.seed);
  if (args.realizations >= 0) config.realizations = args.realizations;
  if (!args.out.empty()) config.out_dir = args.out;
  if (args.parallel >= 0) config.parallel = args.parallel;
  relaybc::validate(config);
  return config;
}

void print_rows(const std::vector<relaybc::AggregateRow>& rows) {
  std::cout << relaybc::format_csv(rows);
}

void print_flags(const relaybc::SolverFlagCounts& flags) {
  if (flags.phase1_unconverged || flags.phase2_unconverged ||
      flags.pc_unmatched) {
    std::cout << "solver flags: phase1_unconverged="
              << flags.phase1_unconverged
              << " phase2_unconverged=" << flags.phase2_unconverged
              << " pc_unmatched=" << flags.pc_unmatched << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-hop relay network precoder design and Monte Carlo runner"};
  app.require_subcommand(1);

  CommonArgs run_args, sweep_args, single_args, validate_args;
  CLI::App* cmd_run =
      app.add_subcommand("run", "Monte Carlo sweep over the power grid");
  add_common(cmd_run, &run_args);
  CLI::App* cmd_sweep =
      app.add_subcommand("sweep-t", "Monte Carlo sweep over the t grid");
  add_common(cmd_sweep, &sweep_args);
  CLI::App* cmd_single = app.add_subcommand(
      "single", "One channel realization with full solver traces");
  add_common(cmd_single, &single_args);
  CLI::App* cmd_validate =
      app.add_subcommand("validate", "Check a config file and exit");
  add_common(cmd_validate, &validate_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_validate->parsed()) {
      const auto config = load_with_overrides(validate_args);
      std::cout << "config OK: system "
                << relaybc::format_system_spec(config.system) << ", "
                << config.realizations << " realizations, seed "
                << config.seed << "\n";
      return 0;
    }
    if (cmd_run->parsed()) {
      const auto config = load_with_overrides(run_args);
      const auto result = relaybc::monte_carlo(config);
      relaybc::emit_results(result, config, read_file(run_args.config_path),
                            config.out_dir);
      print_rows(result.rows);
      print_flags(result.flags);
      std::cout << "wrote " << config.out_dir << "/results.csv\n";
      return 0;
    }
    if (cmd_sweep->parsed()) {
      const auto config = load_with_overrides(sweep_args);
      const auto sweep = relaybc::timesharing_sweep(config);
      relaybc::emit_results(sweep.mc, config, read_file(sweep_args.config_path),
                            config.out_dir);
      print_rows(sweep.mc.rows);
      for (const auto& best : sweep.best) {
        std::cout << "best_t power_db=" << best.power_db << " variant="
                  << relaybc::variant_name(best.variant)
                  << " n_init=" << best.n_init << " t=" << best.best_t
                  << " mean=" << best.best_mean << "\n";
      }
      print_flags(sweep.mc.flags);
      std::cout << "wrote " << config.out_dir << "/results.csv\n";
      return 0;
    }
    // single
    auto config = load_with_overrides(single_args);
    config.realizations = 1;
    config.write_traces = true;
    const auto result = relaybc::monte_carlo(config);
    relaybc::emit_results(result, config, read_file(single_args.config_path),
                          config.out_dir);
    print_rows(result.rows);
    print_flags(result.flags);
    std::cout << "wrote " << config.out_dir << "/results.csv and "
              << result.traces.size() << " trace files\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
