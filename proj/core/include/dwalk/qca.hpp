#pragma once

#include "dwalk/fock.hpp"
#include "dwalk/walk1d.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace dwalk {

/// How the free many-body step is assembled. All three agree to rounding.
enum class FreeStepRoute {
  // Gamma(u) from k x k minors of the single-particle step, per number sector.
  minors,
  // Per-sector exponentials of the second-quantized generators.
  exponential,
  // Site-local rotations and fermionic mode shifts.
  factorized,
};

/// Single-particle transport generator (1/2) P (x) s on the periodic N-site
/// ring, P with eigenvalues 2 pi k / N in (-pi, pi] on plane waves.
Eigen::MatrixXcd momentum_generator(int sites, const SpinMatrix& s);

/// W exp(-i h_a) exp(-i h_b) with h_a, h_b the generators for sigma_theta
/// and sigma_{-theta}; mode order 2 n + a.
Eigen::MatrixXcd single_particle_step(const Walk1DParams& params, int sites);

/// Byte estimate used against the budget.
std::size_t estimate_step_bytes(const GaugeLatticeSpace& space, FreeStepRoute route);

/// Free QCA step on the 2^{2N} Fock space. Throws ResourceLimitError when the
/// estimate exceeds the budget.
ManyBodyOperator build_free_step(const Walk1DParams& params, int sites,
                                 FreeStepRoute route = FreeStepRoute::minors,
                                 const ResourceBudget& budget = {});

/// Dense block of one number sector (modes given by the operator size),
/// basis ordered as sector_states().
Eigen::MatrixXcd sector_block(const ManyBodyOperator& op, int modes, int k);

/// Dense number-k block of the free step computed directly by `route`.
Eigen::MatrixXcd free_step_sector(const Walk1DParams& params, int sites, int k,
                                  FreeStepRoute route);

/// Diagonal of G_alpha: exp(i sum_n alpha_n N_n + i sum_s l_s (alpha_{s+1} - alpha_s)).
Eigen::VectorXcd gauge_phases(const GaugeLatticeSpace& space, const std::vector<double>& alpha);
ManyBodyOperator build_gauge_transform(const GaugeLatticeSpace& space,
                                       const std::vector<double>& alpha);

/// Gauge-invariant interacting step D = Gamma(W) T~ D_E on a periodic gauge
/// space: right hops lower the crossed link, left hops raise it, and D_E =
/// exp(-i coupling_dt sum_s E_s^2).
ManyBodyOperator build_interacting_step(const Walk1DParams& params,
                                        const GaugeLatticeSpace& space, double coupling_dt,
                                        LinkEdge edge = LinkEdge::clipped,
                                        const ResourceBudget& budget = {});

/// Diagonal of J_n = E_{right} - E_{left} - N_n (absent links count 0).
Eigen::VectorXd gauss_values(const GaugeLatticeSpace& space, int site);
ManyBodyOperator gauss_charge(const GaugeLatticeSpace& space, int site);

/// psi_n^a times the lowering operators of every link right of site n.
/// Needs an open chain.
ManyBodyOperator barred_field(const GaugeLatticeSpace& space, int site, int component,
                              LinkEdge edge = LinkEdge::clipped);

struct TrajectoryPoint {
  std::size_t step = 0;
  double norm = 1.0;       // <psi|psi>
  double leakage = 0.0;    // norm lost in this step
  std::vector<double> occupation;  // <N_n>
  std::vector<double> link_field;  // <E_s>
  std::vector<double> gauss;       // <J_n>
  std::vector<double> gauss_sq;    // <J_n^2>
};

/// Applies `step` repeatedly; expectations are normalized by the norm.
std::vector<TrajectoryPoint> run_trajectory(const ManyBodyOperator& step,
                                            const GaugeLatticeSpace& space,
                                            const Eigen::VectorXcd& psi0, std::size_t steps);

/// max over steps and sites of |<J_n>(t) - <J_n>(0)| and the same for <J_n^2>.
double gauss_drift(const std::vector<TrajectoryPoint>& traj);

}  // namespace dwalk
