#pragma once

#include "dwalk/spin_algebra.hpp"
#include "dwalk/walk1d.hpp"
#include "dwalk/walk3d.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace dwalk {

enum class WalkKind { walk_1d, weyl_plus, weyl_minus, dirac };

std::string_view to_string(WalkKind kind);
/// Inverse of to_string; accepts "1d", "weyl+", "weyl-", "dirac".
WalkKind parse_walk_kind(std::string_view name);

/// One walk of the lab: which operator, and its parameters.
struct WalkSpec {
  WalkKind kind = WalkKind::walk_1d;
  double theta = 0.0;
  double mass_dt = 0.0;
  bool extended_theta = false;

  int dim() const { return kind == WalkKind::walk_1d ? 1 : 3; }
  int spinor_dim() const { return kind == WalkKind::dirac ? 4 : 2; }
  void validate() const;
  Walk1DParams params_1d() const { return {theta, mass_dt, extended_theta}; }
  Walk3DParams params_3d() const { return {theta, mass_dt, extended_theta}; }
  /// Momentum-space step; 1-D walks read p[0] only. Weyl walks ignore mass.
  SpinMatrix at(const MomentumVec& p) const;
};

enum class ScanGeometry { line, cube, diagonal };

std::string_view to_string(ScanGeometry g);

struct DispersionRecord {
  MomentumVec momentum;  // 1-D records use momentum[0]
  PhaseSpectrum energies;
};

struct ScanOptions {
  // Shift the grid by half a spacing so no point sits on a special point.
  bool midpoint_offset = false;
  // Threshold for low_points (min|E| < t) and high_points (pi - max|E| < t).
  double threshold = 1e-3;
};

struct ScanReport {
  WalkSpec walk;
  ScanGeometry geometry = ScanGeometry::line;
  std::size_t n = 0;
  ScanOptions options;
  std::vector<DispersionRecord> records;
  double max_abs_energy = 0.0;
  MomentumVec argmax{};
  std::vector<MomentumVec> low_points;
  std::vector<MomentumVec> high_points;
  // (pi - 2 theta) + m in 1-D, 3 (pi - 2 theta) + m in 3-D; NaN when theta is
  // outside [0, pi/2) where the bound is not established.
  double bound_rhs = 0.0;
};

/// Grid momentum k of an n-point axis: -pi + 2 pi k / n for k = 1..n (so the
/// set is {.., pi}), or the cell midpoints with the offset.
double grid_momentum(std::size_t k, std::size_t n, bool midpoint_offset);

/// 1-D scan over n points (n >= 16).
ScanReport scan_1d(const Walk1DParams& params, std::size_t n, ScanOptions options = {});

/// Full n^3 scan of a 3-D walk (n >= 16). Records are ordered with p_x
/// fastest.
ScanReport scan_3d(const WalkSpec& walk, std::size_t n, ScanOptions options = {});

/// The p_x = p_y = p_z slice of a 3-D walk, n points.
ScanReport scan_3d_diagonal(const WalkSpec& walk, std::size_t n, ScanOptions options = {});

double bound_rhs(const WalkSpec& walk);

struct RefinedPoint {
  MomentumVec momentum;
  // min|E| for doublers, min(pi - |E|) for pseudo-doublers, after refinement.
  double residual;
  PhaseSpectrum energies;
};

struct SpecialPointSearch {
  double eps_e = 1e-3;
  double exclude_radius = 0.2;
  std::vector<RefinedPoint> doublers;
  std::vector<RefinedPoint> pseudo_doublers;
};

/// Seeds from grid local minima of the two residuals, refines each (Brent in
/// one dimension, Nelder-Mead in three) and keeps distinct points below eps_e.
/// Doublers inside exclude_radius of p = 0 are dropped.
SpecialPointSearch find_special_points(const ScanReport& report, double eps_e = 1e-3,
                                       double exclude_radius = 0.2);

/// Periodic Euclidean distance on the Brillouin zone.
double bz_distance(const MomentumVec& a, const MomentumVec& b, int dim = 3);

struct PhaseBoundResult {
  double worst_margin;
  std::size_t trials;
};

/// lambda + eta - max|phase(U V)|.
double product_phase_margin(const SpinMatrix& u, const SpinMatrix& v, double lambda,
                            double eta);

/// Random U = exp(iH), V = exp(iG) with spectra uniform in [-lambda, lambda],
/// [-eta, eta], Haar eigenvectors and lambda + eta <= pi.
PhaseBoundResult product_phase_bound_test(int dim, std::size_t trials, std::uint64_t seed);

struct BoundCertificate {
  bool holds = false;
  double max_e = 0.0;
  double rhs = 0.0;
  MomentumVec argmax{};
  // Per-axis maximum of the K_j phase over the grid, bounded by pi - 2 theta.
  std::array<double, 3> axis_max{};
  double axis_rhs = 0.0;
  bool axis_holds = false;
};

/// Requires theta in [0, pi/2). Uses the on-grid (non-offset) scan of n points
/// per axis.
BoundCertificate bound_certificate(const WalkSpec& walk, std::size_t n);

/// Runs body(i) for i in [0, count) across hardware threads. Each index is
/// handled exactly once; results must be written to per-index slots.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace dwalk
