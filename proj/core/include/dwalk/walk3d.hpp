#pragma once

#include "dwalk/spin_algebra.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace dwalk {

struct Walk3DParams {
  double theta = 0.0;
  double mass_dt = 0.0;
  bool extended_theta = false;

  void validate() const;
};

using MomentumVec = std::array<double, 3>;

enum class WeylSign { plus, minus };

enum class SpecialKind {
  doubler,
  pseudo_doubler,
  opposite_chirality_doubler,
  opposite_chirality_pseudo_doubler,
  no_continuum_limit,
};

std::string_view to_string(SpecialKind kind);

struct SpecialPoint {
  MomentumVec momentum;
  SpecialKind kind;
  // +1: K(P + eta) = K(eta); -1: K(P + eta) = -K(eta) (up to the chirality
  // flip at the half-pi points).
  int sign_relation;
};

/// exp(-i p sj_theta / 2) exp(-i p sj_{-theta} / 2) for one axis.
SpinMatrix kj_op(const Walk3DParams& params, Axis axis, double p_dx);

/// K+(p) = Kz(pz) Ky(py) Kx(px) (Kx acts first); K-(p) = K+(-p).
SpinMatrix weyl_op(const Walk3DParams& params, WeylSign sign, const MomentumVec& p);

/// beta = (0 I; I 0).
SpinMatrix beta_matrix();
/// exp(-i mass_dt beta).
SpinMatrix mass_unitary_3d(double mass_dt);

/// W diag(K+(p), K-(p)).
SpinMatrix dirac_op(const Walk3DParams& params, const MomentumVec& p);

/// 4x4 effective Hamiltonian cos(theta) (p.s) (+) -cos(theta) (p.s) + mass_dt beta.
SpinMatrix effective_hamiltonian_3d(const Walk3DParams& params, const MomentumVec& p);

struct DoublerPoint {
  double q_dx;
  // theta = -pi/4: the defining relation diverges and q is the limit pi.
  bool singular;
};

/// Solves tan(q/2) = 1 / (cos theta + sin theta), q in (-pi, pi].
DoublerPoint doubler_point(double theta);

/// Closed forms of K_j(q(theta)): (s(s+c) - i c(s+c) sj + i s c sk) / (1 + c s)
/// with (j, k) = (z, x), (y, z), (x, y).
SpinMatrix kj_at_q_closed_form(Axis axis, double theta);
SpinMatrix kz_at_q_closed_form(double theta);

/// Pauli representation generated by the linearisation of K+ around q(1,1,1).
/// Normalised so that each operator squares to the identity.
std::array<SpinMatrix, 3> sigma_prime(double theta);

/// || K^{+-}(+-q + eta) - (I -+ i cos(theta) eta.sigma') ||_F.
double doubler_expansion_check(const Walk3DParams& params, WeylSign sign,
                               const MomentumVec& eta);

/// Special points of the theta = 0 Weyl walk. With massive = true the
/// half-pi points are tagged no_continuum_limit.
std::vector<SpecialPoint> conventional_special_points(bool massive = false);

}  // namespace dwalk
