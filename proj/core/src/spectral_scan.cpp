#include "dwalk/spectral_scan.hpp"

#include "dwalk/minimize.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace dwalk {

namespace {

constexpr double kPi = std::numbers::pi;

// Residuals minimised by the special-point search.
double low_residual(const PhaseSpectrum& s) { return s.min_abs(); }
double high_residual(const PhaseSpectrum& s) { return s.min_distance_to_edge(); }

void finish_report(ScanReport& r) {
  r.max_abs_energy = 0.0;
  for (const auto& rec : r.records) {
    const double m = rec.energies.max_abs();
    if (m > r.max_abs_energy) {
      r.max_abs_energy = m;
      r.argmax = rec.momentum;
    }
    if (low_residual(rec.energies) < r.options.threshold) r.low_points.push_back(rec.momentum);
    if (high_residual(rec.energies) < r.options.threshold) r.high_points.push_back(rec.momentum);
  }
  r.bound_rhs = bound_rhs(r.walk);
}

void check_grid(std::size_t n) {
  if (n < 16) throw std::invalid_argument("scan grid needs at least 16 points per axis");
}

// Per-axis factors K_j(s p_k) on the grid, s = +1 or -1.
std::array<std::vector<SpinMatrix>, 3> axis_factors(const Walk3DParams& params, std::size_t n,
                                                    bool offset, double s) {
  std::array<std::vector<SpinMatrix>, 3> f;
  for (Axis a : kAxes) {
    auto& v = f[static_cast<std::size_t>(a)];
    v.reserve(n);
    for (std::size_t k = 0; k < n; ++k) v.push_back(kj_op(params, a, s * grid_momentum(k, n, offset)));
  }
  return f;
}

MomentumVec wrap_momentum(MomentumVec p) {
  for (double& c : p) c = wrap_phase(c);
  return p;
}

}  // namespace

std::string_view to_string(WalkKind kind) {
  switch (kind) {
    case WalkKind::walk_1d:
      return "1d";
    case WalkKind::weyl_plus:
      return "weyl+";
    case WalkKind::weyl_minus:
      return "weyl-";
    case WalkKind::dirac:
      break;
  }
  return "dirac";
}

WalkKind parse_walk_kind(std::string_view name) {
  if (name == "1d") return WalkKind::walk_1d;
  if (name == "weyl+") return WalkKind::weyl_plus;
  if (name == "weyl-") return WalkKind::weyl_minus;
  if (name == "dirac") return WalkKind::dirac;
  throw std::invalid_argument("unknown walk kind '" + std::string(name) + "'");
}

std::string_view to_string(ScanGeometry g) {
  switch (g) {
    case ScanGeometry::line:
      return "line";
    case ScanGeometry::cube:
      return "cube";
    case ScanGeometry::diagonal:
      break;
  }
  return "diagonal";
}

void WalkSpec::validate() const {
  if (kind == WalkKind::walk_1d) {
    params_1d().validate();
  } else {
    params_3d().validate();
  }
}

SpinMatrix WalkSpec::at(const MomentumVec& p) const {
  switch (kind) {
    case WalkKind::walk_1d:
      return walk_op(params_1d(), p[0]);
    case WalkKind::weyl_plus:
      return weyl_op(params_3d(), WeylSign::plus, p);
    case WalkKind::weyl_minus:
      return weyl_op(params_3d(), WeylSign::minus, p);
    case WalkKind::dirac:
      break;
  }
  return dirac_op(params_3d(), p);
}

double grid_momentum(std::size_t k, std::size_t n, bool midpoint_offset) {
  const double h = 2.0 * kPi / static_cast<double>(n);
  if (midpoint_offset) return -kPi + h * (static_cast<double>(k) + 0.5);
  return -kPi + h * static_cast<double>(k + 1);
}

double bound_rhs(const WalkSpec& walk) {
  if (!(walk.theta >= 0.0 && walk.theta < kPi / 2.0)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double mass = (walk.kind == WalkKind::walk_1d || walk.kind == WalkKind::dirac)
                          ? walk.mass_dt
                          : 0.0;
  const double per_axis = kPi - 2.0 * walk.theta;
  return (walk.dim() == 1 ? per_axis : 3.0 * per_axis) + mass;
}

ScanReport scan_1d(const Walk1DParams& params, std::size_t n, ScanOptions options) {
  params.validate();
  check_grid(n);
  ScanReport r;
  r.walk = {WalkKind::walk_1d, params.theta, params.mass_dt, params.extended_theta};
  r.geometry = ScanGeometry::line;
  r.n = n;
  r.options = options;
  r.records.resize(n);
  parallel_for(n, [&](std::size_t k) {
    const double p = grid_momentum(k, n, options.midpoint_offset);
    r.records[k] = {{p, 0.0, 0.0}, eigenphases_unchecked(walk_op(params, p))};
  });
  finish_report(r);
  return r;
}

ScanReport scan_3d(const WalkSpec& walk, std::size_t n, ScanOptions options) {
  if (walk.dim() != 3) throw std::invalid_argument("scan_3d needs a 3-D walk");
  walk.validate();
  check_grid(n);
  ScanReport r;
  r.walk = walk;
  r.geometry = ScanGeometry::cube;
  r.n = n;
  r.options = options;
  r.records.resize(n * n * n);

  const Walk3DParams params = walk.params_3d();
  const bool need_plus = walk.kind != WalkKind::weyl_minus;
  const bool need_minus = walk.kind != WalkKind::weyl_plus;
  const auto kp = need_plus ? axis_factors(params, n, options.midpoint_offset, 1.0)
                            : std::array<std::vector<SpinMatrix>, 3>{};
  const auto km = need_minus ? axis_factors(params, n, options.midpoint_offset, -1.0)
                             : std::array<std::vector<SpinMatrix>, 3>{};
  const SpinMatrix w = mass_unitary_3d(walk.mass_dt);

  parallel_for(n * n, [&](std::size_t zy) {
    const std::size_t iy = zy % n;
    const std::size_t iz = zy / n;
    SpinMatrix zy_plus, zy_minus;
    if (need_plus) zy_plus = kp[2][iz] * kp[1][iy];
    if (need_minus) zy_minus = km[2][iz] * km[1][iy];
    for (std::size_t ix = 0; ix < n; ++ix) {
      SpinMatrix u;
      switch (walk.kind) {
        case WalkKind::weyl_plus:
          u = zy_plus * kp[0][ix];
          break;
        case WalkKind::weyl_minus:
          u = zy_minus * km[0][ix];
          break;
        default:
          u = w * block_diag(zy_plus * kp[0][ix], zy_minus * km[0][ix]);
          break;
      }
      const MomentumVec p{grid_momentum(ix, n, options.midpoint_offset),
                          grid_momentum(iy, n, options.midpoint_offset),
                          grid_momentum(iz, n, options.midpoint_offset)};
      r.records[ix + n * zy] = {p, eigenphases_unchecked(u)};
    }
  });
  finish_report(r);
  return r;
}

ScanReport scan_3d_diagonal(const WalkSpec& walk, std::size_t n, ScanOptions options) {
  if (walk.dim() != 3) throw std::invalid_argument("scan_3d_diagonal needs a 3-D walk");
  walk.validate();
  check_grid(n);
  ScanReport r;
  r.walk = walk;
  r.geometry = ScanGeometry::diagonal;
  r.n = n;
  r.options = options;
  r.records.resize(n);
  parallel_for(n, [&](std::size_t k) {
    const double p = grid_momentum(k, n, options.midpoint_offset);
    const MomentumVec pv{p, p, p};
    r.records[k] = {pv, eigenphases_unchecked(walk.at(pv))};
  });
  finish_report(r);
  return r;
}

double bz_distance(const MomentumVec& a, const MomentumVec& b, int dim) {
  double s = 0.0;
  for (int j = 0; j < dim; ++j) {
    const double d = wrap_phase(a[static_cast<std::size_t>(j)] - b[static_cast<std::size_t>(j)]);
    s += d * d;
  }
  return std::sqrt(s);
}

SpecialPointSearch find_special_points(const ScanReport& report, double eps_e,
                                       double exclude_radius) {
  if (!(eps_e > 0.0)) throw std::invalid_argument("eps_E must be positive");
  if (!(exclude_radius >= 0.0)) throw std::invalid_argument("exclude_radius must be >= 0");
  if (report.records.empty()) throw std::invalid_argument("empty scan report");

  SpecialPointSearch out;
  out.eps_e = eps_e;
  out.exclude_radius = exclude_radius;

  const WalkSpec walk = report.walk;
  const std::size_t n = report.n;
  const bool cube = report.geometry == ScanGeometry::cube;
  const int dim = walk.dim();
  const double h = 2.0 * kPi / static_cast<double>(n);
  const double line_scale = report.geometry == ScanGeometry::diagonal ? std::sqrt(3.0) : 1.0;
  // Largest residual a grid point next to a true zero can show: the walk has
  // range one per axis, so |grad E|_1 <= dim.
  const double seed_cap =
      eps_e + 1.01 * dim * (cube ? std::sqrt(3.0) : line_scale) * h / 2.0;

  auto line_point = [&](double t) -> MomentumVec {
    if (report.geometry == ScanGeometry::diagonal) return {t, t, t};
    return {t, 0.0, 0.0};
  };

  auto neighbours_ok = [&](const std::vector<double>& f, std::size_t i) {
    if (!cube) {
      return f[i] <= f[(i + n - 1) % n] && f[i] <= f[(i + 1) % n];
    }
    const std::size_t ix = i % n, iy = (i / n) % n, iz = i / (n * n);
    auto at = [&](std::size_t x, std::size_t y, std::size_t z) { return f[x + n * (y + n * z)]; };
    return f[i] <= at((ix + 1) % n, iy, iz) && f[i] <= at((ix + n - 1) % n, iy, iz) &&
           f[i] <= at(ix, (iy + 1) % n, iz) && f[i] <= at(ix, (iy + n - 1) % n, iz) &&
           f[i] <= at(ix, iy, (iz + 1) % n) && f[i] <= at(ix, iy, (iz + n - 1) % n);
  };

  auto search = [&](double (*residual)(const PhaseSpectrum&), bool exclude_origin) {
    std::vector<double> f(report.records.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = residual(report.records[i].energies);
    std::vector<std::size_t> seeds;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f[i] < seed_cap && neighbours_ok(f, i)) seeds.push_back(i);
    }
    auto objective = [&](const MomentumVec& p) {
      return residual(eigenphases_unchecked(walk.at(p)));
    };
    std::vector<RefinedPoint> refined(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t s) {
      const MomentumVec p0 = report.records[seeds[s]].momentum;
      MomentumVec best;
      if (cube) {
        best = minimize_3d(objective, p0, h / 2.0, 1e-10).x;
      } else {
        const double t0 = p0[0];
        best = line_point(
            minimize_1d([&](double t) { return objective(line_point(t)); }, t0 - h, t0 + h,
                        1e-10)
                .x);
      }
      best = wrap_momentum(best);
      const PhaseSpectrum e = eigenphases_unchecked(walk.at(best));
      refined[s] = {best, residual(e), e};
    });

    std::vector<RefinedPoint> kept;
    const MomentumVec origin{0.0, 0.0, 0.0};
    for (const auto& rp : refined) {
      if (!(rp.residual < eps_e)) continue;
      if (exclude_origin && bz_distance(rp.momentum, origin, dim) <= exclude_radius) continue;
      const bool dup = std::any_of(kept.begin(), kept.end(), [&](const RefinedPoint& k) {
        return bz_distance(k.momentum, rp.momentum, dim) < 1e-6;
      });
      if (!dup) kept.push_back(rp);
    }
    std::sort(kept.begin(), kept.end(),
              [](const RefinedPoint& a, const RefinedPoint& b) { return a.momentum < b.momentum; });
    return kept;
  };

  out.doublers = search(&low_residual, true);
  out.pseudo_doublers = search(&high_residual, false);
  return out;
}

double product_phase_margin(const SpinMatrix& u, const SpinMatrix& v, double lambda,
                            double eta) {
  return lambda + eta - eigenphases(u * v).max_abs();
}

PhaseBoundResult product_phase_bound_test(int dim, std::size_t trials, std::uint64_t seed) {
  if (dim != 2 && dim != 4) throw std::invalid_argument("phase bound test needs dim 2 or 4");
  if (trials < 1) throw std::invalid_argument("phase bound test needs at least one trial");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto haar = [&]() {
    Eigen::MatrixXcd z(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) z(i, j) = cplx{gauss(rng), gauss(rng)} / std::sqrt(2.0);
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
      const double a = std::abs(r(j, j));
      if (a > 0.0) q.col(j) *= r(j, j) / a;
    }
    return q;
  };
  auto random_unitary = [&](double radius) {
    const Eigen::MatrixXcd q = haar();
    Eigen::VectorXcd phases(dim);
    for (int k = 0; k < dim; ++k) {
      const double a = radius * (2.0 * unit(rng) - 1.0);
      phases(k) = cplx{std::cos(a), std::sin(a)};
    }
    const Eigen::MatrixXcd m = q * phases.asDiagonal() * q.adjoint();
    return SpinMatrix(m);
  };

  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    double lambda = kPi * unit(rng);
    double eta = kPi * unit(rng);
    if (lambda + eta > kPi) {
      lambda = kPi - lambda;
      eta = kPi - eta;
    }
    const SpinMatrix u = random_unitary(lambda);
    const SpinMatrix v = random_unitary(eta);
    worst = std::min(worst, product_phase_margin(u, v, lambda, eta));
  }
  return {worst, trials};
}

BoundCertificate bound_certificate(const WalkSpec& walk, std::size_t n) {
  if (!(walk.theta >= 0.0 && walk.theta < kPi / 2.0)) {
    throw std::invalid_argument("bound certificate needs theta in [0, pi/2)");
  }
  constexpr double kTol = 1e-10;
  const ScanReport r =
      walk.dim() == 1 ? scan_1d(walk.params_1d(), n) : scan_3d(walk, n);
  BoundCertificate c;
  c.max_e = r.max_abs_energy;
  c.rhs = r.bound_rhs;
  c.argmax = r.argmax;
  c.holds = c.max_e <= c.rhs + kTol;

  c.axis_rhs = kPi - 2.0 * walk.theta;
  c.axis_holds = true;
  const Walk3DParams p3 = walk.params_3d();
  for (Axis a : kAxes) {
    const auto j = static_cast<std::size_t>(a);
    if (walk.dim() == 1 && a != Axis::x) continue;
    double m = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double p = grid_momentum(k, n, false);
      const SpinMatrix op =
          walk.dim() == 1 ? transfer_op(walk.params_1d(), p) : kj_op(p3, a, p);
      m = std::max(m, eigenphases_unchecked(op).max_abs());
    }
    c.axis_max[j] = m;
    c.axis_holds = c.axis_holds && m <= c.axis_rhs + kTol;
  }
  return c;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace dwalk
