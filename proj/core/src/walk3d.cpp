#include "dwalk/walk3d.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dwalk {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

Axis cross_axis(Axis axis) {
  switch (axis) {
    case Axis::x:
      return Axis::y;
    case Axis::y:
      return Axis::z;
    case Axis::z:
      break;
  }
  return Axis::x;
}

}  // namespace

void Walk3DParams::validate() const {
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

std::string_view to_string(SpecialKind kind) {
  switch (kind) {
    case SpecialKind::doubler:
      return "doubler";
    case SpecialKind::pseudo_doubler:
      return "pseudo-doubler";
    case SpecialKind::opposite_chirality_doubler:
      return "opposite-chirality-doubler";
    case SpecialKind::opposite_chirality_pseudo_doubler:
      return "opposite-chirality-pseudo-doubler";
    case SpecialKind::no_continuum_limit:
      break;
  }
  return "no-continuum-limit";
}

SpinMatrix kj_op(const Walk3DParams& params, Axis axis, double p_dx) {
  return exp_neg_i_involution(rotated_pauli_3d(axis, params.theta), 0.5 * p_dx) *
         exp_neg_i_involution(rotated_pauli_3d(axis, -params.theta), 0.5 * p_dx);
}

SpinMatrix weyl_op(const Walk3DParams& params, WeylSign sign, const MomentumVec& p) {
  const double s = sign == WeylSign::plus ? 1.0 : -1.0;
  return kj_op(params, Axis::z, s * p[2]) * kj_op(params, Axis::y, s * p[1]) *
         kj_op(params, Axis::x, s * p[0]);
}

SpinMatrix beta_matrix() {
  SpinMatrix b = SpinMatrix::Zero(4, 4);
  b.topRightCorner(2, 2) = SpinMatrix::Identity(2, 2);
  b.bottomLeftCorner(2, 2) = SpinMatrix::Identity(2, 2);
  return b;
}

SpinMatrix mass_unitary_3d(double mass_dt) {
  return std::cos(mass_dt) * SpinMatrix::Identity(4, 4) - kI * std::sin(mass_dt) * beta_matrix();
}

SpinMatrix dirac_op(const Walk3DParams& params, const MomentumVec& p) {
  return mass_unitary_3d(params.mass_dt) *
         block_diag(weyl_op(params, WeylSign::plus, p), weyl_op(params, WeylSign::minus, p));
}

SpinMatrix effective_hamiltonian_3d(const Walk3DParams& params, const MomentumVec& p) {
  SpinMatrix ps = SpinMatrix::Zero(2, 2);
  for (Axis a : kAxes) ps += p[static_cast<std::size_t>(a)] * pauli(a);
  ps *= std::cos(params.theta);
  return block_diag(ps, -ps) + params.mass_dt * beta_matrix();
}

DoublerPoint doubler_point(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
  const double d = std::cos(theta) + std::sin(theta);
  if (std::abs(d) < 1e-14) return {kPi, true};
  return {wrap_phase(2.0 * std::atan(1.0 / d)), false};
}

SpinMatrix kj_at_q_closed_form(Axis axis, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const SpinMatrix id = SpinMatrix::Identity(2, 2);
  return (s * (s + c) * id - kI * c * (s + c) * pauli(axis) +
          kI * s * c * pauli(cross_axis(axis))) /
         (1.0 + c * s);
}

SpinMatrix kz_at_q_closed_form(double theta) { return kj_at_q_closed_form(Axis::z, theta); }

std::array<SpinMatrix, 3> sigma_prime(double theta) {
  const double c = std::cos(theta);
  if (std::abs(c) < 1e-12) throw std::invalid_argument("sigma_prime: cos(theta) = 0");
  const DoublerPoint q = doubler_point(theta);
  if (q.singular) throw std::invalid_argument("sigma_prime: theta = -pi/4 is singular");
  const Walk3DParams params{theta, 0.0, true};
  const SpinMatrix kx = kj_op(params, Axis::x, q.q_dx);
  const SpinMatrix kz = kj_op(params, Axis::z, q.q_dx);
  const double norm = 1.0 / (2.0 * c);
  return {
      norm * (kx.adjoint() * rotated_pauli_3d(Axis::x, theta) * kx +
              rotated_pauli_3d(Axis::x, -theta)),
      norm * (kz * rotated_pauli_3d(Axis::y, theta) * kz.adjoint() +
              kx.adjoint() * rotated_pauli_3d(Axis::y, -theta) * kx),
      norm * (rotated_pauli_3d(Axis::z, theta) +
              kz * rotated_pauli_3d(Axis::z, -theta) * kz.adjoint()),
  };
}

double doubler_expansion_check(const Walk3DParams& params, WeylSign sign,
                               const MomentumVec& eta) {
  const double q = doubler_point(params.theta).q_dx;
  const auto sp = sigma_prime(params.theta);
  const double s = sign == WeylSign::plus ? 1.0 : -1.0;
  SpinMatrix lin = SpinMatrix::Zero(2, 2);
  for (std::size_t j = 0; j < 3; ++j) lin += eta[j] * sp[j];
  const SpinMatrix expected =
      SpinMatrix::Identity(2, 2) - s * kI * std::cos(params.theta) * lin;
  const MomentumVec p{s * q + eta[0], s * q + eta[1], s * q + eta[2]};
  return (weyl_op(params, sign, p) - expected).norm();
}

std::vector<SpecialPoint> conventional_special_points(bool massive) {
  std::vector<SpecialPoint> out;
  // Two components at pi: K(P) = I.
  for (std::size_t zero = 0; zero < 3; ++zero) {
    MomentumVec p{kPi, kPi, kPi};
    p[zero] = 0.0;
    out.push_back({p, SpecialKind::doubler, +1});
  }
  // One or three components at pi: K(P) = -I.
  out.push_back({{kPi, kPi, kPi}, SpecialKind::pseudo_doubler, -1});
  for (std::size_t one = 0; one < 3; ++one) {
    MomentumVec p{0.0, 0.0, 0.0};
    p[one] = kPi;
    out.push_back({p, SpecialKind::pseudo_doubler, -1});
  }
  // Half-pi corners: K(P) = sx sy sz I, chirality flipped.
  for (int mask = 0; mask < 8; ++mask) {
    MomentumVec p{};
    int sign = 1;
    for (std::size_t j = 0; j < 3; ++j) {
      const bool neg = (mask >> j) & 1;
      p[j] = neg ? -kPi / 2.0 : kPi / 2.0;
      if (neg) sign = -sign;
    }
    SpecialKind kind = sign > 0 ? SpecialKind::opposite_chirality_doubler
                                : SpecialKind::opposite_chirality_pseudo_doubler;
    if (massive) kind = SpecialKind::no_continuum_limit;
    out.push_back({p, kind, sign});
  }
  return out;
}

}  // namespace dwalk
