#include "commands.hpp"

#include "dwalk/fock.hpp"
#include "dwalk/report_io.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <functional>
#include <iostream>
#include <map>

namespace {

int error_exit(int code, const std::string& kind, const std::string& message) {
  const nlohmann::json err = {{"error", kind}, {"message", message}, {"exit_code", code}};
  std::cout << err.dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using dwalk::cli::RunConfig;
  RunConfig cfg;

  CLI::App app{"Dirac quantum walk and QCA lab"};
  app.set_config("--config", "", "flat key = value file; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  app.add_option("--dim", cfg.dim, "walk dimension")->check(CLI::IsMember({1, 3}));
  app.add_option("--walk", cfg.walk, "1d, weyl+, weyl-, dirac");
  app.add_option("--theta", cfg.theta);
  app.add_option("--mass-dt", cfg.mass_dt);
  app.add_flag("--extended-theta", cfg.extended_theta, "allow theta in (-pi, pi)");
  app.add_option("--n", cfg.n, "momentum grid points per axis");
  app.add_flag("--offset", cfg.offset, "shift the grid to cell midpoints");
  app.add_option("--geometry", cfg.geometry, "3-D scans: cube or diagonal")
      ->check(CLI::IsMember({"cube", "diagonal"}));
  app.add_option("--eps-e", cfg.eps_e);
  app.add_option("--exclude-radius", cfg.exclude_radius);

  app.add_option("--N", cfg.lattice, "lattice sites per axis");
  app.add_option("--steps", cfg.steps);
  app.add_option("--init", cfg.init, "evolve: localized or wavepacket")
      ->check(CLI::IsMember({"localized", "wavepacket"}));
  app.add_option("--method", cfg.method)->check(CLI::IsMember({"position", "momentum"}));
  app.add_option("--p0", cfg.p0);
  app.add_option("--sigma-p", cfg.sigma_p);
  app.add_option("--branch", cfg.branch)->check(CLI::IsMember({-1, 1}));
  app.add_option("--snapshot-every", cfg.snapshot_every);

  app.add_option("--L", cfg.truncation, "link truncation");
  app.add_option("--coupling-dt", cfg.coupling_dt);
  app.add_option("--edge", cfg.edge)->check(CLI::IsMember({"clipped", "clock"}));
  app.add_option("--route", cfg.route)
      ->check(CLI::IsMember({"minors", "exponential", "factorized"}));
  app.add_option("--particles", cfg.particles);
  app.add_option("--max-gib", cfg.max_gib, "memory budget for many-body operators");

  app.add_option("--matrix-dim", cfg.matrix_dim);
  app.add_option("--trials", cfg.trials);

  app.add_option("--seed", cfg.seed);
  app.add_option("--out", cfg.out, "output path prefix");
  app.add_option("--format", cfg.format, "csv (with JSON sidecar) or json")
      ->check(CLI::IsMember({"csv", "json"}));

  const std::map<std::string, std::function<int(const RunConfig&)>> commands = {
      {"dispersion", dwalk::cli::cmd_dispersion},
      {"doublers", dwalk::cli::cmd_doublers},
      {"bound-check", dwalk::cli::cmd_bound_check},
      {"evolve", dwalk::cli::cmd_evolve},
      {"qca-free", dwalk::cli::cmd_qca_free},
      {"qca-schwinger", dwalk::cli::cmd_qca_schwinger},
      {"phase-bound-test", dwalk::cli::cmd_phase_bound_test},
  };
  for (const auto& [name, fn] : commands) {
    app.add_subcommand(name)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return error_exit(2, "invalid-config", e.what());
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  try {
    return commands.at(cfg.subcommand)(cfg);
  } catch (const dwalk::ResourceLimitError& e) {
    return error_exit(3, "resource-limit", e.what());
  } catch (const dwalk::cli::ConfigError& e) {
    return error_exit(2, "invalid-config", e.what());
  } catch (const std::invalid_argument& e) {
    return error_exit(2, "invalid-config", e.what());
  } catch (const std::exception& e) {
    return error_exit(1, "runtime", e.what());
  }
}
