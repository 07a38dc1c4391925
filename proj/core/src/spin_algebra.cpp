#include "dwalk/spin_algebra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dwalk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEdgeSnap = 1e-12;

void require_square_dim(const SpinMatrix& m) {
  if (m.rows() != m.cols() || (m.rows() != 2 && m.rows() != 4)) {
    throw std::invalid_argument("spin matrix must be 2x2 or 4x4");
  }
}

}  // namespace

double wrap_phase(double phase) {
  double w = std::remainder(phase, 2.0 * kPi);  // [-pi, pi]
  if (w <= -kPi + kEdgeSnap) w += 2.0 * kPi;
  if (w > kPi) w = kPi;
  return w;
}

PhaseSpectrum::PhaseSpectrum(std::span<const double> phases) {
  if (phases.size() > phases_.size()) {
    throw std::invalid_argument("PhaseSpectrum holds at most four phases");
  }
  size_ = phases.size();
  for (std::size_t i = 0; i < size_; ++i) phases_[i] = wrap_phase(phases[i]);
  std::sort(phases_.begin(), phases_.begin() + size_);
}

double PhaseSpectrum::max_abs() const {
  double m = 0.0;
  for (double e : *this) m = std::max(m, std::abs(e));
  return m;
}

double PhaseSpectrum::min_abs() const {
  double m = kPi;
  for (double e : *this) m = std::min(m, std::abs(e));
  return m;
}

double PhaseSpectrum::min_distance_to_edge() const {
  return kPi - max_abs();
}

SpinMatrix identity(int dim) {
  if (dim != 2 && dim != 4) throw std::invalid_argument("dim must be 2 or 4");
  return SpinMatrix::Identity(dim, dim);
}

SpinMatrix pauli(Axis axis) {
  SpinMatrix s = SpinMatrix::Zero(2, 2);
  const cplx i{0.0, 1.0};
  switch (axis) {
    case Axis::x:
      s(0, 1) = 1.0;
      s(1, 0) = 1.0;
      break;
    case Axis::y:
      s(0, 1) = -i;
      s(1, 0) = i;
      break;
    case Axis::z:
      s(0, 0) = 1.0;
      s(1, 1) = -1.0;
      break;
  }
  return s;
}

SpinMatrix rotated_pauli_1d(double theta) {
  return std::cos(theta) * pauli(Axis::z) - std::sin(theta) * pauli(Axis::y);
}

SpinMatrix rotated_pauli_3d(Axis axis, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  switch (axis) {
    case Axis::x:
      return c * pauli(Axis::x) - s * pauli(Axis::z);
    case Axis::y:
      return c * pauli(Axis::y) - s * pauli(Axis::x);
    case Axis::z:
      break;
  }
  return c * pauli(Axis::z) - s * pauli(Axis::y);
}

SpinMatrix projector_up(const SpinMatrix& op) {
  if (op.rows() != 2 || op.cols() != 2) {
    throw std::invalid_argument("projector_up expects a 2x2 operator");
  }
  if (hermiticity_defect(op) > 1e-10) {
    throw std::invalid_argument("projector_up expects a Hermitian operator");
  }
  Eigen::SelfAdjointEigenSolver<SpinMatrix> es(op);
  const auto& ev = es.eigenvalues();
  if (std::abs(ev(0) + 1.0) > 1e-10 || std::abs(ev(1) - 1.0) > 1e-10) {
    throw std::invalid_argument("projector_up expects spectrum {+1, -1}");
  }
  // For a +-1 spectrum the spectral projector is (I + op) / 2 exactly.
  return 0.5 * (SpinMatrix::Identity(2, 2) + op);
}

SpinMatrix exp_neg_i(const SpinMatrix& h, double scale) {
  require_square_dim(h);
  if (hermiticity_defect(h) > 1e-10) {
    throw std::invalid_argument("exp_neg_i expects a Hermitian operator");
  }
  const SpinMatrix herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<SpinMatrix> es(herm);
  const auto& vecs = es.eigenvectors();
  SpinMatrix out = SpinMatrix::Zero(h.rows(), h.cols());
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    const double a = -scale * es.eigenvalues()(k);
    out += cplx{std::cos(a), std::sin(a)} * vecs.col(k) * vecs.col(k).adjoint();
  }
  return out;
}

SpinMatrix exp_neg_i_involution(const SpinMatrix& s, double a) {
  return std::cos(a) * SpinMatrix::Identity(s.rows(), s.cols()) -
         cplx{0.0, std::sin(a)} * s;
}

PhaseSpectrum eigenphases_unchecked(const SpinMatrix& u) {
  require_square_dim(u);
  std::array<double, 4> buf{};
  const auto n = static_cast<std::size_t>(u.rows());
  if (n == 2) {
    // u = exp(i phi/2) (cos l I - i sin l n.sigma). Taking l from atan2 of
    // the trace part and the traceless anti-Hermitian part stays accurate
    // near degenerate spectra, where the quadratic-root formula loses half
    // the digits.
    const cplx det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
    const double half_phi = 0.5 * std::arg(det);
    const cplx rot{std::cos(half_phi), -std::sin(half_phi)};
    const SpinMatrix v = rot * u;
    const double cos_l = 0.5 * (v(0, 0) + v(1, 1)).real();
    const SpinMatrix anti = 0.5 * (v - v.adjoint());
    const cplx tr_anti = 0.5 * (anti(0, 0) + anti(1, 1));
    const SpinMatrix traceless = anti - tr_anti * SpinMatrix::Identity(2, 2);
    const double sin_l = traceless.norm() / std::sqrt(2.0);
    const double l = std::atan2(sin_l, cos_l);
    buf[0] = -(half_phi + l);
    buf[1] = -(half_phi - l);
  } else if (n == 4) {
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(Eigen::Matrix4cd(u),
                                                   /*computeEigenvectors=*/false);
    for (std::size_t k = 0; k < n; ++k) {
      buf[k] = -std::arg(es.eigenvalues()(static_cast<Eigen::Index>(k)));
    }
  }
  return PhaseSpectrum(std::span<const double>(buf.data(), n));
}

PhaseSpectrum eigenphases(const SpinMatrix& u) {
  require_square_dim(u);
  if (unitarity_defect(u) > 1e-10) {
    throw std::invalid_argument("eigenphases expects a unitary matrix");
  }
  return eigenphases_unchecked(u);
}

double unitarity_defect(const SpinMatrix& u) {
  return (u.adjoint() * u - SpinMatrix::Identity(u.rows(), u.cols())).norm();
}

double hermiticity_defect(const SpinMatrix& h) {
  return (h - h.adjoint()).norm();
}

SpinMatrix block_diag(const SpinMatrix& a, const SpinMatrix& b) {
  SpinMatrix out = SpinMatrix::Zero(4, 4);
  out.topLeftCorner(2, 2) = a;
  out.bottomRightCorner(2, 2) = b;
  return out;
}

}  // namespace dwalk
