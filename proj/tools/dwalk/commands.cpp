#include "commands.hpp"

#include "dwalk/position_space.hpp"
#include "dwalk/qca.hpp"
#include "dwalk/report_io.hpp"
#include "dwalk/spectral_scan.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace dwalk::cli {

namespace {

using nlohmann::json;

WalkSpec walk_spec(const RunConfig& cfg) {
  WalkSpec w;
  if (cfg.walk.empty()) {
    w.kind = cfg.dim == 1 ? WalkKind::walk_1d : WalkKind::dirac;
  } else {
    w.kind = parse_walk_kind(cfg.walk);
  }
  w.theta = cfg.theta;
  w.mass_dt = cfg.mass_dt;
  w.extended_theta = cfg.extended_theta;
  w.validate();
  return w;
}

std::size_t grid_points(const RunConfig& cfg, const WalkSpec& w) {
  if (cfg.n != 0) return cfg.n;
  return w.dim() == 1 ? 512 : 48;
}

ResourceBudget budget(const RunConfig& cfg) {
  if (!(cfg.max_gib > 0.0)) throw ConfigError("max-gib must be positive");
  return {static_cast<std::size_t>(cfg.max_gib * 1073741824.0)};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_json(const std::string& path, const json& j) { write_file(path, dump_json(j) + "\n"); }

json header(const RunConfig& cfg) { return {{"command", cfg.subcommand}, {"seed", cfg.seed}}; }

ScanReport run_scan(const RunConfig& cfg, const WalkSpec& w) {
  const std::size_t n = grid_points(cfg, w);
  ScanOptions opt;
  opt.midpoint_offset = cfg.offset;
  if (w.dim() == 1) return scan_1d(w.params_1d(), n, opt);
  if (cfg.geometry == "diagonal") return scan_3d_diagonal(w, n, opt);
  const double bytes = std::pow(static_cast<double>(n), 3) * (8.0 * 3 + 8.0 * w.spinor_dim() + 32.0);
  if (bytes > cfg.max_gib * 1073741824.0) {
    throw ResourceLimitError(fmt::format("a {}^3 scan needs about {:.0f} MiB", n, bytes / 1048576.0));
  }
  return scan_3d(w, n, opt);
}

json momentum_json(const MomentumVec& p, int dim) {
  if (dim == 1) return json::array({p[0]});
  return json::array({p[0], p[1], p[2]});
}

void print_bound(const ScanReport& r) {
  fmt::print("max_abs_energy {}\nbound_rhs {}\n", format_double(r.max_abs_energy),
             format_double(r.bound_rhs));
}

Eigen::VectorXcd random_in(const std::vector<std::int64_t>& support, std::int64_t dim,
                           std::uint64_t seed) {
  if (support.empty()) throw ConfigError("the requested sector is empty");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  for (std::int64_t i : support) psi(i) = cplx{g(rng), g(rng)};
  psi /= psi.norm();
  return psi;
}

json trajectory_summary(const std::vector<TrajectoryPoint>& traj) {
  double max_abs_j = 0.0, total_leak = 0.0, number_drift = 0.0;
  double n0 = 0.0;
  for (double v : traj.front().occupation) n0 += v;
  for (const auto& p : traj) {
    for (double v : p.gauss) max_abs_j = std::max(max_abs_j, std::abs(v));
    double n = 0.0;
    for (double v : p.occupation) n += v;
    number_drift = std::max(number_drift, std::abs(n - n0));
    total_leak += p.leakage;
  }
  return {{"steps", traj.size() - 1},
          {"max_abs_gauss", max_abs_j},
          {"gauss_drift", gauss_drift(traj)},
          {"number_drift", number_drift},
          {"total_leakage", total_leak},
          {"final_norm", traj.back().norm}};
}

void emit_trajectory(const RunConfig& cfg, const std::vector<TrajectoryPoint>& traj, json& meta) {
  if (cfg.format == "csv") {
    std::ostringstream csv;
    write_trajectory_csv(traj, csv);
    write_file(cfg.out + "_trajectory.csv", csv.str());
    meta["files"] = {cfg.out + "_trajectory.csv"};
  } else {
    auto rows = json::array();
    for (const auto& p : traj) {
      rows.push_back({{"step", p.step},
                      {"norm", p.norm},
                      {"leakage", p.leakage},
                      {"occupation", p.occupation},
                      {"link_field", p.link_field},
                      {"gauss", p.gauss},
                      {"gauss_sq", p.gauss_sq}});
    }
    meta["trajectory"] = rows;
  }
}

}  // namespace

int cmd_dispersion(const RunConfig& cfg) {
  const WalkSpec w = walk_spec(cfg);
  const ScanReport r = run_scan(cfg, w);
  json meta = header(cfg);
  meta["scan"] = scan_metadata_json(r);
  if (cfg.format == "csv") {
    std::ostringstream csv;
    write_scan_csv(r, csv);
    write_file(cfg.out + ".csv", csv.str());
    meta["files"] = {cfg.out + ".csv"};
  } else {
    auto rows = json::array();
    for (const auto& rec : r.records) {
      rows.push_back({{"p", momentum_json(rec.momentum, w.dim())},
                      {"E", std::vector<double>(rec.energies.begin(), rec.energies.end())}});
    }
    meta["records"] = rows;
  }
  write_json(cfg.out + ".json", meta);
  print_bound(r);
  return 0;
}

int cmd_doublers(const RunConfig& cfg) {
  const WalkSpec w = walk_spec(cfg);
  const ScanReport r = run_scan(cfg, w);
  const SpecialPointSearch s = find_special_points(r, cfg.eps_e, cfg.exclude_radius);
  json meta = header(cfg);
  meta["scan"] = scan_metadata_json(r);
  meta["special_points"] = special_points_json(s, w.dim());
  if (w.dim() == 3 && w.theta == 0.0) {
    auto cat = json::array();
    for (const auto& sp : conventional_special_points(w.mass_dt > 0.0 && w.kind == WalkKind::dirac)) {
      cat.push_back({{"momentum", momentum_json(sp.momentum, 3)},
                     {"kind", std::string(to_string(sp.kind))},
                     {"sign", sp.sign_relation}});
    }
    meta["reference_catalogue"] = cat;
  } else if (w.dim() == 3) {
    const DoublerPoint q = doubler_point(w.theta);
    meta["reference_q"] = q.singular ? json(nullptr) : json(q.q_dx);
  }
  if (cfg.format == "csv") {
    std::string csv = w.dim() == 1 ? "class,p,residual\n" : "class,p_x,p_y,p_z,residual\n";
    auto rows = [&](const char* cls, const std::vector<RefinedPoint>& pts) {
      for (const auto& p : pts) {
        csv += cls;
        for (int j = 0; j < w.dim(); ++j) csv += "," + format_double(p.momentum[static_cast<std::size_t>(j)]);
        csv += "," + format_double(p.residual) + "\n";
      }
    };
    rows("doubler", s.doublers);
    rows("pseudo-doubler", s.pseudo_doublers);
    write_file(cfg.out + ".csv", csv);
    meta["files"] = {cfg.out + ".csv"};
  }
  write_json(cfg.out + ".json", meta);
  fmt::print("doublers {}\npseudo_doublers {}\n", s.doublers.size(), s.pseudo_doublers.size());
  print_bound(r);
  return 0;
}

int cmd_bound_check(const RunConfig& cfg) {
  const WalkSpec w = walk_spec(cfg);
  const std::size_t n = grid_points(cfg, w);
  const BoundCertificate c = bound_certificate(w, n);
  json meta = header(cfg);
  meta["certificate"] = bound_certificate_json(c, w, n);
  write_json(cfg.out + ".json", meta);
  fmt::print("holds {}\nmax_abs_energy {}\nbound_rhs {}\n", c.holds, format_double(c.max_e),
             format_double(c.rhs));
  return 0;
}

int cmd_evolve(const RunConfig& cfg) {
  const WalkSpec w = walk_spec(cfg);
  const std::size_t n = cfg.lattice;
  if (n < 4) throw ConfigError("--N must be at least 4");
  if (n > (w.dim() == 1 ? 4096u : 16u)) {
    throw ResourceLimitError(fmt::format("position-space lattices are capped at {} sites per axis",
                                         w.dim() == 1 ? 4096 : 16));
  }
  if (cfg.snapshot_every == 0) throw ConfigError("--snapshot-every must be positive");
  const double bytes = std::pow(static_cast<double>(n), w.dim()) * w.spinor_dim() * 16.0 * 3;
  if (bytes > cfg.max_gib * 1073741824.0) {
    throw ResourceLimitError(fmt::format("state of {} sites needs about {:.0f} MiB", n, bytes / 1048576.0));
  }

  LatticeState psi(w.dim(), n, w.spinor_dim());
  if (cfg.init == "wavepacket") {
    if (w.dim() != 1) throw ConfigError("wavepacket initial states are 1-D only");
    psi = branch_wavepacket_1d(w.params_1d(), n, static_cast<double>(n / 2), cfg.p0, cfg.sigma_p,
                               cfg.branch);
  } else {
    const std::size_t c = n / 2;
    std::vector<cplx> spinor(static_cast<std::size_t>(w.spinor_dim()));
    for (std::size_t a = 0; a < spinor.size(); ++a) spinor[a] = a % 2 ? cplx{0.0, 1.0} : cplx{1.0, 0.0};
    const std::size_t site = w.dim() == 1 ? c : psi.site_index(c, c, c);
    psi = localized_state(w, n, site, spinor);
  }

  std::ostringstream norm_csv, density_csv;
  norm_csv << "step,norm,norm_defect\n";
  write_density_header(w.dim(), density_csv);
  double max_defect = 0.0;
  auto record = [&](std::size_t step) {
    const double nm = psi.norm();
    max_defect = std::max(max_defect, std::abs(nm - 1.0));
    norm_csv << step << ',' << format_double(nm) << ',' << format_double(nm - 1.0) << '\n';
    if (step % cfg.snapshot_every == 0 || step == cfg.steps) write_density_rows(psi, step, density_csv);
  };
  record(0);
  for (std::size_t t = 1; t <= cfg.steps; ++t) {
    psi = cfg.method == "momentum" ? step_momentum(w, psi) : step_position(w, psi);
    record(t);
  }

  json meta = header(cfg);
  meta["walk"] = walk_json(w);
  meta["N"] = n;
  meta["steps"] = cfg.steps;
  meta["init"] = cfg.init;
  meta["method"] = cfg.method;
  meta["max_norm_defect"] = max_defect;
  if (cfg.format == "csv") {
    std::ostringstream state_csv;
    write_state_csv(psi, state_csv);
    write_file(cfg.out + "_norm.csv", norm_csv.str());
    write_file(cfg.out + "_density.csv", density_csv.str());
    write_file(cfg.out + "_state.csv", state_csv.str());
    meta["files"] = {cfg.out + "_norm.csv", cfg.out + "_density.csv", cfg.out + "_state.csv"};
  }
  write_json(cfg.out + ".json", meta);
  fmt::print("max_norm_defect {}\n", format_double(max_defect));
  return 0;
}

int cmd_qca_free(const RunConfig& cfg) {
  const Walk1DParams p{cfg.theta, cfg.mass_dt, cfg.extended_theta};
  p.validate();
  const int sites = static_cast<int>(cfg.lattice);
  if (sites < 2) throw ConfigError("qca-free needs N >= 2");
  if (sites > 8) throw ResourceLimitError("the Fock space is capped at 8 sites (16 modes)");
  if (cfg.particles < 0 || cfg.particles > 2 * sites) throw ConfigError("--particles out of range");
  const FreeStepRoute route = cfg.route == "exponential" ? FreeStepRoute::exponential
                              : cfg.route == "factorized" ? FreeStepRoute::factorized
                                                          : FreeStepRoute::minors;
  const GaugeLatticeSpace space(sites, 0, Boundary::periodic);
  const ManyBodyOperator u = build_free_step(p, sites, route, budget(cfg));

  json meta = header(cfg);
  meta["walk"] = walk_json({WalkKind::walk_1d, p.theta, p.mass_dt, p.extended_theta});
  meta["N"] = sites;
  meta["route"] = cfg.route;
  double defect = NAN;
  if (sites >= 4) {
    const auto walk = step_matrix_position({WalkKind::walk_1d, p.theta, p.mass_dt, p.extended_theta},
                                           static_cast<std::size_t>(sites));
    defect = (sector_block(u, 2 * sites, 1) - walk).cwiseAbs().maxCoeff();
  }
  meta["sector_equivalence_defect"] = defect;
  meta["unitarity_defect"] = unitarity_defect(u);
  meta["number_commutator"] = commutator_norm(u, total_number(space));

  std::vector<std::int64_t> support;
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    if (__builtin_popcount(space.occupation(i)) == cfg.particles) support.push_back(i);
  }
  const auto traj = run_trajectory(u, space, random_in(support, space.dim(), cfg.seed), cfg.steps);
  meta["particles"] = cfg.particles;
  meta["summary"] = trajectory_summary(traj);
  emit_trajectory(cfg, traj, meta);
  write_json(cfg.out + ".json", meta);
  fmt::print("sector_equivalence_defect {}\nunitarity_defect {}\n", format_double(defect),
             format_double(meta["unitarity_defect"].get<double>()));
  return 0;
}

int cmd_qca_schwinger(const RunConfig& cfg) {
  const Walk1DParams p{cfg.theta, cfg.mass_dt, cfg.extended_theta};
  p.validate();
  const int sites = static_cast<int>(cfg.lattice);
  if (sites < 2) throw ConfigError("qca-schwinger needs N >= 2");
  if (sites > 8) throw ResourceLimitError("the Fock space is capped at 8 sites (16 modes)");
  if (cfg.truncation < 0) throw ConfigError("--L must be >= 0");
  const LinkEdge edge = cfg.edge == "clock" ? LinkEdge::clock : LinkEdge::clipped;
  const GaugeLatticeSpace space(sites, cfg.truncation, Boundary::periodic);
  const ManyBodyOperator d = build_interacting_step(p, space, cfg.coupling_dt, edge, budget(cfg));

  std::vector<Eigen::VectorXd> j;
  double gauss_comm = 0.0;
  for (int n = 0; n < sites; ++n) {
    j.push_back(gauss_values(space, n));
    gauss_comm = std::max(gauss_comm, commutator_with_diagonal(d, j.back().cast<cplx>()));
  }
  // random state in the sector without static charges, J_n = 0
  std::vector<std::int64_t> support;
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    bool in = true;
    for (const auto& jn : j) in = in && jn(i) == 0.0;
    if (in) support.push_back(i);
  }
  const auto traj = run_trajectory(d, space, random_in(support, space.dim(), cfg.seed), cfg.steps);

  json meta = header(cfg);
  meta["walk"] = walk_json({WalkKind::walk_1d, p.theta, p.mass_dt, p.extended_theta});
  meta["N"] = sites;
  meta["L"] = cfg.truncation;
  meta["coupling_dt"] = cfg.coupling_dt;
  meta["edge"] = cfg.edge;
  meta["unitarity_defect"] = unitarity_defect(d);
  meta["gauss_commutator"] = gauss_comm;
  meta["summary"] = trajectory_summary(traj);
  emit_trajectory(cfg, traj, meta);
  write_json(cfg.out + ".json", meta);
  fmt::print("max_abs_gauss {}\ngauss_drift {}\n",
             format_double(meta["summary"]["max_abs_gauss"].get<double>()),
             format_double(meta["summary"]["gauss_drift"].get<double>()));
  return 0;
}

int cmd_phase_bound_test(const RunConfig& cfg) {
  if (cfg.matrix_dim < 1) throw ConfigError("--matrix-dim must be positive");
  const PhaseBoundResult r = product_phase_bound_test(cfg.matrix_dim, cfg.trials, cfg.seed);
  json meta = header(cfg);
  meta["matrix_dim"] = cfg.matrix_dim;
  meta["trials"] = r.trials;
  meta["worst_margin"] = r.worst_margin;
  meta["holds"] = r.worst_margin >= -1e-10;
  write_json(cfg.out + ".json", meta);
  fmt::print("worst_margin {}\n", format_double(r.worst_margin));
  return 0;
}

}  // namespace dwalk::cli
