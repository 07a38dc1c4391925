#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <span>

namespace dwalk {

using cplx = std::complex<double>;

/// Dense single-site operator on the coin space. Only 2x2 (Weyl / 1+1-D) and
/// 4x4 (3+1-D Dirac) are used; the fixed upper bound keeps it on the stack.
using SpinMatrix =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;

enum class Axis { x = 0, y = 1, z = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::x, Axis::y, Axis::z};

/// Eigen-phases E*dt of a unitary, each in (-pi, pi], sorted ascending.
class PhaseSpectrum {
 public:
  PhaseSpectrum() = default;
  /// Takes ownership of up to four phases; wraps and sorts them.
  explicit PhaseSpectrum(std::span<const double> phases);

  std::size_t size() const { return size_; }
  double operator[](std::size_t i) const { return phases_[i]; }
  const double* begin() const { return phases_.data(); }
  const double* end() const { return phases_.data() + size_; }

  double max_abs() const;
  double min_abs() const;
  /// min_k (pi - |E_k|): distance of the spectrum to the branch edge.
  double min_distance_to_edge() const;

 private:
  std::array<double, 4> phases_{};
  std::size_t size_ = 0;
};

/// Maps any real phase into (-pi, pi]. Values within 1e-12 of -pi map to +pi.
double wrap_phase(double phase);

SpinMatrix identity(int dim);
SpinMatrix pauli(Axis axis);

/// cos(t) sz - sin(t) sy, i.e. R sz R^dag with R = exp(-i t sx / 2).
SpinMatrix rotated_pauli_1d(double theta);

/// Axis-cycled rotated Paulis:
///   x: cos sx - sin sz,  y: cos sy - sin sx,  z: cos sz - sin sy.
SpinMatrix rotated_pauli_3d(Axis axis, double theta);

/// Rank-1 projector onto the +1 eigenspace of a 2x2 Hermitian operator with
/// spectrum {+1, -1}. Throws std::invalid_argument otherwise (tolerance 1e-10).
SpinMatrix projector_up(const SpinMatrix& op);

/// exp(-i * scale * h) for Hermitian h, through its eigendecomposition.
SpinMatrix exp_neg_i(const SpinMatrix& h, double scale);

/// exp(-i a s) = cos(a) I - i sin(a) s for an involution s (s^2 = I).
/// Not checked; used in hot loops on rotated Paulis.
SpinMatrix exp_neg_i_involution(const SpinMatrix& s, double a);

/// Phases E with eigenvalues exp(-i E), mapped into (-pi, pi] and sorted.
/// Throws std::invalid_argument if u is not unitary to 1e-10.
PhaseSpectrum eigenphases(const SpinMatrix& u);

/// Same as eigenphases() without the unitarity check; for hot scan loops
/// where the operator is unitary by construction.
PhaseSpectrum eigenphases_unchecked(const SpinMatrix& u);

/// ||U^dag U - I||_F
double unitarity_defect(const SpinMatrix& u);
/// ||H - H^dag||_F
double hermiticity_defect(const SpinMatrix& h);

/// Block-diagonal (a 0; 0 b) of two 2x2 blocks.
SpinMatrix block_diag(const SpinMatrix& a, const SpinMatrix& b);

}  // namespace dwalk
