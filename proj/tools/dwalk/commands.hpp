#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dwalk::cli {

/// Invalid values that CLI11 cannot catch on its own.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  int dim = 1;
  std::string walk;  // empty: 1d for dim 1, dirac for dim 3
  double theta = 0.0;
  double mass_dt = 0.0;
  bool extended_theta = false;
  std::size_t n = 0;  // 0: 512 in 1-D, 48 in 3-D
  bool offset = false;
  std::string geometry = "cube";
  double eps_e = 1e-3;
  double exclude_radius = 0.2;

  // lattice runs
  std::size_t lattice = 64;  // --N
  std::size_t steps = 100;
  std::string init = "localized";
  std::string method = "position";
  double p0 = 0.3;
  double sigma_p = 0.05;
  int branch = 1;
  std::size_t snapshot_every = 1;

  // qca
  int truncation = 1;  // --L
  double coupling_dt = 0.5;
  std::string edge = "clipped";
  std::string route = "minors";
  int particles = 1;
  double max_gib = 2.0;

  // phase-bound-test
  int matrix_dim = 2;
  std::size_t trials = 10000;

  std::uint64_t seed = 0;
  std::string out = "dwalk_out";
  std::string format = "csv";
};

/// Each returns the process exit code; output files are named from cfg.out.
int cmd_dispersion(const RunConfig& cfg);
int cmd_doublers(const RunConfig& cfg);
int cmd_bound_check(const RunConfig& cfg);
int cmd_evolve(const RunConfig& cfg);
int cmd_qca_free(const RunConfig& cfg);
int cmd_qca_schwinger(const RunConfig& cfg);
int cmd_phase_bound_test(const RunConfig& cfg);

}  // namespace dwalk::cli
