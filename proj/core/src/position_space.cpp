#include "dwalk/position_space.hpp"

#include <Eigen/Eigenvalues>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dwalk {

namespace {

constexpr double kPi = std::numbers::pi;

void check_lattice(int dim, std::size_t n, int components) {
  if (dim != 1 && dim != 3) throw std::invalid_argument("lattice dim must be 1 or 3");
  if (components != 2 && components != 4) {
    throw std::invalid_argument("lattice spinors have 2 or 4 components");
  }
  if (n < 4) throw std::invalid_argument("lattice needs at least 4 sites per axis");
  const std::size_t cap = dim == 1 ? 4096 : 16;
  if (n > cap) {
    throw std::invalid_argument("lattice too large: at most " + std::to_string(cap) +
                                " sites per axis in " + std::to_string(dim) + "-D");
  }
}

void check_match(const WalkSpec& walk, const LatticeState& s) {
  walk.validate();
  if (walk.dim() != s.dim() || walk.spinor_dim() != s.components()) {
    throw std::invalid_argument("state shape does not match the walk");
  }
}

GammaTriple axis_gammas(Axis axis, double theta) {
  const SpinMatrix id = SpinMatrix::Identity(2, 2);
  const SpinMatrix pa = projector_up(rotated_pauli_3d(axis, theta));
  const SpinMatrix pb = projector_up(rotated_pauli_3d(axis, -theta));
  GammaTriple g;
  g.plus = pa * pb;
  g.minus = (id - pa) * (id - pb);
  g.zero = id - g.plus - g.minus;
  return g;
}

// In place: block [offset, offset + 2) <- gamma+ S + gamma0 + gamma- S^dag along
// `axis`; `reversed` swaps the two shifts.
void apply_axis(LatticeState& st, std::size_t axis, int offset, const GammaTriple& g,
                bool reversed) {
  const LatticeState old = st;
  const std::size_t n = st.sites_per_axis();
  const std::size_t stride = axis == 0 ? 1 : (axis == 1 ? n : n * n);
  for (std::size_t s = 0; s < st.site_count(); ++s) {
    const std::size_t c = (s / stride) % n;
    const std::size_t s_prev = s - c * stride + ((c + n - 1) % n) * stride;
    const std::size_t s_next = s - c * stride + ((c + 1) % n) * stride;
    const std::size_t from_plus = reversed ? s_next : s_prev;
    const std::size_t from_minus = reversed ? s_prev : s_next;
    for (int a = 0; a < 2; ++a) {
      cplx v{0.0, 0.0};
      for (int b = 0; b < 2; ++b) {
        v += g.plus(a, b) * old.at(from_plus, offset + b) + g.zero(a, b) * old.at(s, offset + b) +
             g.minus(a, b) * old.at(from_minus, offset + b);
      }
      st.at(s, offset + a) = v;
    }
  }
}

void apply_local(LatticeState& st, const SpinMatrix& w) {
  const int c = st.components();
  std::array<cplx, 4> tmp{};
  for (std::size_t s = 0; s < st.site_count(); ++s) {
    for (int a = 0; a < c; ++a) {
      tmp[static_cast<std::size_t>(a)] = 0.0;
      for (int b = 0; b < c; ++b) tmp[static_cast<std::size_t>(a)] += w(a, b) * st.at(s, b);
    }
    for (int a = 0; a < c; ++a) st.at(s, a) = tmp[static_cast<std::size_t>(a)];
  }
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};

// Forward (sign -1) or backward DFT over the lattice axes, per component.
void dft(std::vector<cplx>& data, int dim, std::size_t n, int components, int sign) {
  std::array<int, 3> dims{};
  for (int d = 0; d < dim; ++d) dims[static_cast<std::size_t>(d)] = static_cast<int>(n);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan(fftw_plan_many_dft(
      dim, dims.data(), components, buf, nullptr, components, 1, buf, nullptr, components, 1,
      sign, FFTW_ESTIMATE));
  if (!plan) throw std::runtime_error("FFTW plan creation failed");
  fftw_execute(plan.get());
}

MomentumVec site_momentum(const LatticeState& st, std::size_t site) {
  const auto c = st.coords(site);
  const double h = 2.0 * kPi / static_cast<double>(st.sites_per_axis());
  MomentumVec p{};
  for (int d = 0; d < st.dim(); ++d) {
    p[static_cast<std::size_t>(d)] = wrap_phase(h * static_cast<double>(c[static_cast<std::size_t>(d)]));
  }
  return p;
}

LatticeState momentum_propagate(const WalkSpec& walk, const LatticeState& state,
                                std::size_t steps) {
  check_match(walk, state);
  LatticeState out = state;
  const int c = state.components();
  dft(out.amplitudes(), state.dim(), state.sites_per_axis(), c, FFTW_FORWARD);
  for (std::size_t s = 0; s < out.site_count(); ++s) {
    const SpinMatrix u1 = walk.at(site_momentum(out, s));
    SpinMatrix u = SpinMatrix::Identity(c, c);
    for (std::size_t t = 0; t < steps; ++t) u = u1 * u;
    std::array<cplx, 4> tmp{};
    for (int a = 0; a < c; ++a) {
      for (int b = 0; b < c; ++b) tmp[static_cast<std::size_t>(a)] += u(a, b) * out.at(s, b);
    }
    for (int a = 0; a < c; ++a) out.at(s, a) = tmp[static_cast<std::size_t>(a)];
  }
  dft(out.amplitudes(), state.dim(), state.sites_per_axis(), c, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(out.site_count());
  for (auto& v : out.amplitudes()) v *= scale;
  return out;
}

Eigen::MatrixXcd step_matrix(const WalkSpec& walk, std::size_t n,
                             LatticeState (*step)(const WalkSpec&, const LatticeState&)) {
  LatticeState basis(walk.dim(), n, walk.spinor_dim());
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    std::fill(basis.amplitudes().begin(), basis.amplitudes().end(), cplx{0.0, 0.0});
    basis.amplitudes()[static_cast<std::size_t>(j)] = 1.0;
    const LatticeState col = step(walk, basis);
    for (Eigen::Index i = 0; i < dim; ++i) m(i, j) = col.amplitudes()[static_cast<std::size_t>(i)];
  }
  return m;
}

}  // namespace

LatticeState::LatticeState(int dim, std::size_t n, int components)
    : dim_(dim), n_(n), components_(components) {
  check_lattice(dim, n, components);
  sites_ = dim == 1 ? n : n * n * n;
  amp_.assign(sites_ * static_cast<std::size_t>(components), cplx{0.0, 0.0});
}

std::array<std::size_t, 3> LatticeState::coords(std::size_t site) const {
  return {site % n_, (site / n_) % n_, site / (n_ * n_)};
}

double LatticeState::norm() const {
  double s = 0.0;
  for (const auto& v : amp_) s += std::norm(v);
  return std::sqrt(s);
}

void LatticeState::normalize() {
  const double nrm = norm();
  if (!(nrm > 0.0)) throw std::invalid_argument("cannot normalize the zero state");
  for (auto& v : amp_) v /= nrm;
}

std::vector<double> LatticeState::density() const {
  std::vector<double> d(sites_, 0.0);
  for (std::size_t s = 0; s < sites_; ++s) {
    for (int a = 0; a < components_; ++a) d[s] += std::norm(at(s, a));
  }
  return d;
}

LatticeState localized_state(const WalkSpec& walk, std::size_t n, std::size_t site,
                             const std::vector<cplx>& spinor) {
  LatticeState st(walk.dim(), n, walk.spinor_dim());
  if (site >= st.site_count()) throw std::invalid_argument("site index out of range");
  if (spinor.size() != static_cast<std::size_t>(st.components())) {
    throw std::invalid_argument("spinor length does not match the walk");
  }
  for (int a = 0; a < st.components(); ++a) st.at(site, a) = spinor[static_cast<std::size_t>(a)];
  st.normalize();
  return st;
}

LatticeState branch_wavepacket_1d(const Walk1DParams& params, std::size_t n, double x0,
                                  double p0, double sigma_p, int branch) {
  params.validate();
  if (branch != 1 && branch != -1) throw std::invalid_argument("branch must be +1 or -1");
  if (!(sigma_p > 0.0)) throw std::invalid_argument("sigma_p must be positive");
  LatticeState st(1, n, 2);

  auto branch_vector = [&](double p) {
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(Eigen::Matrix2cd(walk_op(params, p)));
    int pick = 0;
    const double e0 = -std::arg(es.eigenvalues()(0));
    const double e1 = -std::arg(es.eigenvalues()(1));
    if ((branch > 0 && e1 > e0) || (branch < 0 && e1 < e0)) pick = 1;
    Eigen::Vector2cd v = es.eigenvectors().col(pick);
    return Eigen::Vector2cd(v / v.norm());
  };
  const Eigen::Vector2cd ref = branch_vector(p0);

  const double h = 2.0 * kPi / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double p = wrap_phase(h * static_cast<double>(k));
    const double dp = wrap_phase(p - p0);
    Eigen::Vector2cd v = branch_vector(p);
    const cplx overlap = ref.dot(v);
    if (std::abs(overlap) > 0.0) v *= std::conj(overlap) / std::abs(overlap);
    const double amp = std::exp(-dp * dp / (4.0 * sigma_p * sigma_p));
    const cplx shift{std::cos(p * x0), -std::sin(p * x0)};
    st.at(k, 0) = amp * shift * v(0);
    st.at(k, 1) = amp * shift * v(1);
  }
  dft(st.amplitudes(), 1, n, 2, FFTW_BACKWARD);
  st.normalize();
  return st;
}

LatticeState step_position(const WalkSpec& walk, const LatticeState& state) {
  check_match(walk, state);
  LatticeState out = state;
  if (walk.kind == WalkKind::walk_1d) {
    apply_axis(out, 0, 0, gamma_coeffs(walk.params_1d()), false);
    apply_local(out, mass_unitary_1d(walk.mass_dt));
    return out;
  }
  std::array<GammaTriple, 3> g;
  for (Axis a : kAxes) g[static_cast<std::size_t>(a)] = axis_gammas(a, walk.theta);
  const bool plus_block = walk.kind != WalkKind::weyl_minus;
  const bool minus_block = walk.kind != WalkKind::weyl_plus;
  for (std::size_t axis = 0; axis < 3; ++axis) {
    if (plus_block) apply_axis(out, axis, 0, g[axis], false);
    if (minus_block) apply_axis(out, axis, walk.kind == WalkKind::dirac ? 2 : 0, g[axis], true);
  }
  if (walk.kind == WalkKind::dirac) apply_local(out, mass_unitary_3d(walk.mass_dt));
  return out;
}

LatticeState step_momentum(const WalkSpec& walk, const LatticeState& state) {
  return momentum_propagate(walk, state, 1);
}

LatticeState evolve_position(const WalkSpec& walk, const LatticeState& state, std::size_t steps) {
  LatticeState s = state;
  for (std::size_t t = 0; t < steps; ++t) s = step_position(walk, s);
  return s;
}

LatticeState evolve_momentum(const WalkSpec& walk, const LatticeState& state, std::size_t steps) {
  return momentum_propagate(walk, state, steps);
}

Eigen::MatrixXcd step_matrix_position(const WalkSpec& walk, std::size_t n) {
  return step_matrix(walk, n, &step_position);
}

Eigen::MatrixXcd step_matrix_momentum(const WalkSpec& walk, std::size_t n) {
  return step_matrix(walk, n, &step_momentum);
}

double max_amplitude_deviation(const LatticeState& a, const LatticeState& b) {
  if (a.size() != b.size()) throw std::invalid_argument("state sizes differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.amplitudes()[i] - b.amplitudes()[i]));
  }
  return m;
}

SymmetryReport symmetry_checks(const Walk1DParams& params, std::size_t n) {
  const WalkSpec walk{WalkKind::walk_1d, params.theta, params.mass_dt, params.extended_theta};
  const Eigen::MatrixXcd u = step_matrix_position(walk, n);
  const auto dim = u.rows();
  const auto sites = static_cast<Eigen::Index>(n);

  Eigen::MatrixXcd shift = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd sy = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd dressed = Eigen::MatrixXcd::Zero(dim, dim);
  const SpinMatrix py = pauli(Axis::y);
  const SpinMatrix x = py * mass_unitary_1d(params.mass_dt).adjoint();
  for (Eigen::Index s = 0; s < sites; ++s) {
    const Eigen::Index t = (s + 1) % sites;
    for (int a = 0; a < 2; ++a) {
      shift(2 * t + a, 2 * s + a) = 1.0;
      for (int b = 0; b < 2; ++b) {
        sy(2 * s + a, 2 * s + b) = py(a, b);
        dressed(2 * s + a, 2 * s + b) = x(a, b);
      }
    }
  }

  SymmetryReport r{};
  r.translation_defect = (shift * u - u * shift).norm();
  r.adjoint_defect_sigma_y = (sy * u * sy.adjoint() - u.adjoint()).norm();
  r.adjoint_defect_dressed = (dressed * u * dressed.adjoint() - u.adjoint()).norm();
  r.locality_violation = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Eigen::Index d = std::abs(i / 2 - j / 2);
      if (std::min(d, sites - d) > 1) r.locality_violation = std::max(r.locality_violation, std::abs(u(i, j)));
    }
  }
  return r;
}

}  // namespace dwalk
