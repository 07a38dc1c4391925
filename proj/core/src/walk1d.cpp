#include "dwalk/walk1d.hpp"

#include "dwalk/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dwalk {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

double continuum_residual(const Walk1DParams& params, double p) {
  const SpinMatrix t = transfer_op(params, p);
  const SpinMatrix id = SpinMatrix::Identity(2, 2);
  return std::min((t - id).norm(), (t + id).norm());
}

}  // namespace

void Walk1DParams::validate() const {
  if (!std::isfinite(theta) || !std::isfinite(mass_dt)) {
    throw std::invalid_argument("walk parameters must be finite");
  }
  const double limit = extended_theta ? kPi : kPi / 2.0;
  if (!(theta > -limit && theta < limit)) {
    throw std::invalid_argument("theta out of range (" + std::to_string(theta) + ")");
  }
  if (!(mass_dt >= 0.0 && mass_dt < kPi)) {
    throw std::invalid_argument("mass_dt must lie in [0, pi)");
  }
}

GammaTriple gamma_coeffs(const Walk1DParams& params) {
  params.validate();
  const SpinMatrix id = SpinMatrix::Identity(2, 2);
  const SpinMatrix pa = projector_up(rotated_pauli_1d(params.theta));
  const SpinMatrix pb = projector_up(rotated_pauli_1d(-params.theta));
  GammaTriple g;
  g.plus = pa * pb;
  g.minus = (id - pa) * (id - pb);
  g.zero = id - g.plus - g.minus;
  return g;
}

SpinMatrix transfer_op(const Walk1DParams& params, double p_dx) {
  return exp_neg_i_involution(rotated_pauli_1d(params.theta), 0.5 * p_dx) *
         exp_neg_i_involution(rotated_pauli_1d(-params.theta), 0.5 * p_dx);
}

SpinMatrix transfer_closed_form(const Walk1DParams& params, double p_dx) {
  const double c2 = std::cos(0.5 * p_dx) * std::cos(0.5 * p_dx);
  const double s2 = std::sin(0.5 * p_dx) * std::sin(0.5 * p_dx);
  const SpinMatrix id = SpinMatrix::Identity(2, 2);
  const SpinMatrix rot = std::cos(2.0 * params.theta) * id -
                         kI * std::sin(2.0 * params.theta) * pauli(Axis::x);
  return c2 * id - kI * std::sin(p_dx) * std::cos(params.theta) * pauli(Axis::z) - s2 * rot;
}

SpinMatrix transfer_from_gammas(const GammaTriple& g, double p_dx) {
  const cplx e{std::cos(p_dx), -std::sin(p_dx)};
  return g.plus * e + g.zero + g.minus * std::conj(e);
}

SpinMatrix mass_unitary_1d(double mass_dt) { return exp_neg_i(pauli(Axis::x), mass_dt); }

SpinMatrix walk_op(const Walk1DParams& params, double p_dx) {
  return mass_unitary_1d(params.mass_dt) * transfer_op(params, p_dx);
}

SpinMatrix walk_op_with_mass(const Walk1DParams& params, const SpinMatrix& mass_generator,
                             double p_dx) {
  if (mass_generator.rows() != 2 || mass_generator.cols() != 2) {
    throw std::invalid_argument("mass generator must be 2x2");
  }
  return exp_neg_i(mass_generator, 1.0) * transfer_op(params, p_dx);
}

EffectiveHamiltonian1D effective_hamiltonian_1d(const Walk1DParams& params) {
  params.validate();
  return {std::cos(params.theta) * pauli(Axis::z), params.mass_dt * pauli(Axis::x)};
}

std::vector<double> continuum_points(const Walk1DParams& params, std::size_t grid_size,
                                     double tol) {
  params.validate();
  if (grid_size < 16) throw std::invalid_argument("continuum_points: grid_size must be >= 16");
  if (!(tol > 0.0)) throw std::invalid_argument("continuum_points: tol must be positive");

  const std::size_t n = grid_size;
  const double h = 2.0 * kPi / static_cast<double>(n);
  std::vector<double> f(n);
  for (std::size_t k = 0; k < n; ++k) {
    f[k] = continuum_residual(params, -kPi + h * static_cast<double>(k));
  }

  std::vector<double> found;
  for (std::size_t k = 0; k < n; ++k) {
    const double left = f[(k + n - 1) % n];
    const double right = f[(k + 1) % n];
    if (!(f[k] <= left && f[k] <= right) && !(f[k] < tol)) continue;
    const double p0 = -kPi + h * static_cast<double>(k);
    const auto m = minimize_1d([&](double p) { return continuum_residual(params, p); },
                               p0 - h, p0 + h, 1e-10);
    if (m.value >= tol) continue;
    const double p = wrap_phase(m.x);
    const bool dup = std::any_of(found.begin(), found.end(), [&](double q) {
      return std::abs(wrap_phase(p - q)) < 1e-8;
    });
    if (!dup) found.push_back(p);
  }
  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace dwalk
