#pragma once

#include "dwalk/spin_algebra.hpp"

#include <cstddef>
#include <vector>

namespace dwalk {

struct Walk1DParams {
  double theta = 0.0;
  double mass_dt = 0.0;
  // Accept theta in (-pi, pi) instead of (-pi/2, pi/2).
  bool extended_theta = false;

  /// Throws std::invalid_argument on out-of-range or non-finite values.
  void validate() const;
};

struct GammaTriple {
  SpinMatrix plus;
  SpinMatrix zero;
  SpinMatrix minus;
};

/// gamma+ = Pa Pb, gamma- = (I-Pa)(I-Pb), gamma0 = I - gamma+ - gamma-,
/// with Pa, Pb the +1 projectors of sigma_theta and sigma_{-theta}.
GammaTriple gamma_coeffs(const Walk1DParams& params);

/// exp(-i p sigma_theta / 2) exp(-i p sigma_{-theta} / 2).
SpinMatrix transfer_op(const Walk1DParams& params, double p_dx);

/// cos^2(p/2) - i sin(p) cos(theta) sz - exp(-2i theta sx) sin^2(p/2).
SpinMatrix transfer_closed_form(const Walk1DParams& params, double p_dx);

/// gamma+ e^{-ip} + gamma0 + gamma- e^{ip}.
SpinMatrix transfer_from_gammas(const GammaTriple& g, double p_dx);

/// exp(-i mass_dt sx).
SpinMatrix mass_unitary_1d(double mass_dt);

/// U(p) = W T(p): the transport acts first, then the mass step.
SpinMatrix walk_op(const Walk1DParams& params, double p_dx);

/// Same walk with an arbitrary Hermitian mass generator M (W = exp(-i M)).
/// Not covered by the energy-bound checks.
SpinMatrix walk_op_with_mass(const Walk1DParams& params, const SpinMatrix& mass_generator,
                             double p_dx);

struct EffectiveHamiltonian1D {
  SpinMatrix momentum_coeff;  // multiplies p_dx
  SpinMatrix constant;
};

/// E dt ~ cos(theta) p sz + mass_dt sx near p = 0.
EffectiveHamiltonian1D effective_hamiltonian_1d(const Walk1DParams& params);

/// Momenta in (-pi, pi] where T(p) = +-I, found on a grid of grid_size points
/// and refined to 1e-10. Requires grid_size >= 16 and tol > 0.
std::vector<double> continuum_points(const Walk1DParams& params, std::size_t grid_size,
                                     double tol);

}  // namespace dwalk
