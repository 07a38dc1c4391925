#include "dwalk/position_space.hpp"
#include "dwalk/qca.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>

namespace dwalk {
namespace {

using testing::kI;
using testing::kPi;

ManyBodyOperator adjoint(const ManyBodyOperator& a) { return ManyBodyOperator(a.adjoint()); }

ManyBodyOperator combine(const SpinMatrix& g, const std::vector<ManyBodyOperator>& f, int site,
                         int comp) {
  ManyBodyOperator out = cplx(g(comp, 0)) * f[static_cast<std::size_t>(FockSpace::mode(site, 0))];
  out += cplx(g(comp, 1)) * f[static_cast<std::size_t>(FockSpace::mode(site, 1))];
  return out;
}

Eigen::VectorXcd random_sector_state(const GaugeLatticeSpace& space,
                                     const std::vector<double>& charges, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Eigen::VectorXd> j;
  for (int n = 0; n < space.sites(); ++n) j.push_back(gauss_values(space, n));
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(space.dim());
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    bool in = true;
    for (int n = 0; n < space.sites(); ++n) in = in && j[static_cast<std::size_t>(n)](i) == charges[static_cast<std::size_t>(n)];
    if (in) psi(i) = cplx{g(rng), g(rng)};
  }
  return psi / psi.norm();
}

TEST(Fock, CanonicalAnticommutation) {
  for (int sites : {2, 3}) {
    const auto f = build_fields(sites);
    ASSERT_EQ(f.size(), static_cast<std::size_t>(2 * sites));
    for (std::size_t i = 0; i < f.size(); ++i) {
      EXPECT_EQ(frobenius_norm(f[i] * f[i]), 0.0);
      for (std::size_t j = 0; j < f.size(); ++j) {
        EXPECT_LT(anticommutator_defect(f[i], adjoint(f[j]), i == j ? 1.0 : 0.0), 1e-12);
        EXPECT_LT(anticommutator_defect(f[i], f[j], 0.0), 1e-12);
      }
    }
  }
  EXPECT_THROW(FockSpace(1), std::invalid_argument);
  EXPECT_THROW(FockSpace(9), std::invalid_argument);
}

TEST(Fock, JordanWignerSign) {
  EXPECT_EQ(jw_sign(0b0000, 3), 1.0);
  EXPECT_EQ(jw_sign(0b0101, 3), 1.0);
  EXPECT_EQ(jw_sign(0b0111, 3), -1.0);
  EXPECT_EQ(jw_sign(0b1000, 3), 1.0);
  EXPECT_EQ(sector_states(4, 2).size(), 6u);
  EXPECT_EQ(sector_states(4, 2).front(), 0b0011u);
}

TEST(GaugeSpace, IndexingAndLinks) {
  const GaugeLatticeSpace ring(3, 1, Boundary::periodic);
  EXPECT_EQ(ring.links(), 3);
  EXPECT_EQ(ring.dim(), 64 * 27);
  const std::vector<int> l{-1, 0, 1};
  const auto i = ring.index(0b100101, l);
  EXPECT_EQ(ring.occupation(i), 0b100101u);
  EXPECT_EQ(ring.link_values(i), l);
  EXPECT_EQ(ring.left_link(0), 2);
  EXPECT_EQ(ring.right_link(2), 2);
  const GaugeLatticeSpace chain(3, 1, Boundary::open);
  EXPECT_EQ(chain.links(), 2);
  EXPECT_EQ(chain.left_link(0), -1);
  EXPECT_EQ(chain.right_link(2), -1);
  EXPECT_THROW(GaugeLatticeSpace(3, -1, Boundary::open), std::invalid_argument);
}

TEST(GaugeSpace, LinkAlgebra) {
  const GaugeLatticeSpace s(2, 2, Boundary::open);
  const auto e = link_field(s, 0);
  const auto v = link_lowering(s, 0);
  EXPECT_LT(frobenius_norm(v * e - e * v - v), 1e-14);
  const auto b = basis_vector(s, 0, {1});
  EXPECT_NEAR((e * b - 1.0 * b).norm(), 0.0, 1e-15);
  EXPECT_NEAR((v * b - basis_vector(s, 0, {0})).norm(), 0.0, 1e-15);
  EXPECT_EQ((v * basis_vector(s, 0, {-2})).norm(), 0.0);
  const auto clock = link_lowering(s, 0, LinkEdge::clock);
  EXPECT_NEAR((clock * basis_vector(s, 0, {-2}) - basis_vector(s, 0, {2})).norm(), 0.0, 1e-15);
  EXPECT_LT(unitarity_defect(clock), 1e-14);
  // interior of the truncated range
  const auto interior = basis_vector(s, 0, {1});
  EXPECT_NEAR(((clock * e - e * clock - clock) * interior).norm(), 0.0, 1e-15);
}

TEST(FreeStep, SingleParticleSectorIsWalkMatrix) {
  for (int sites : {4, 6}) {
    for (double t : {0.0, 0.4, 1.0}) {
      for (double m : {0.0, 0.1}) {
        const Walk1DParams p{t, m};
        const auto walk = step_matrix_position({WalkKind::walk_1d, t, m}, static_cast<std::size_t>(sites));
        const auto block = free_step_sector(p, sites, 1, FreeStepRoute::minors);
        EXPECT_LT((block - walk).cwiseAbs().maxCoeff(), 1e-10) << sites << " " << t << " " << m;
        EXPECT_LT((single_particle_step(p, sites) - walk).cwiseAbs().maxCoeff(), 1e-10);
      }
    }
  }
  const auto full = build_free_step({0.4, 0.1}, 4);
  const auto walk = step_matrix_position({WalkKind::walk_1d, 0.4, 0.1}, 4);
  EXPECT_LT((sector_block(full, 8, 1) - walk).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(FreeStep, RoutesAgree) {
  const Walk1DParams p{0.7, 0.2};
  const int sites = 3;
  for (int k = 0; k <= 2 * sites; ++k) {
    const auto a = free_step_sector(p, sites, k, FreeStepRoute::minors);
    const auto b = free_step_sector(p, sites, k, FreeStepRoute::exponential);
    const auto c = free_step_sector(p, sites, k, FreeStepRoute::factorized);
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12) << k;
    EXPECT_LT((a - c).cwiseAbs().maxCoeff(), 1e-12) << k;
  }
  const auto m = build_free_step(p, sites, FreeStepRoute::minors);
  const auto e = build_free_step(p, sites, FreeStepRoute::exponential);
  const auto f = build_free_step(p, sites, FreeStepRoute::factorized);
  EXPECT_LT(frobenius_norm(m - e), 1e-11);
  EXPECT_LT(frobenius_norm(m - f), 1e-11);
}

TEST(FreeStep, UnitaryNumberConservingVacuum) {
  const auto u = build_free_step({0.5, 0.3}, 4);
  EXPECT_LT(unitarity_defect(u), 1e-10);
  const GaugeLatticeSpace space(4, 0, Boundary::periodic);
  EXPECT_LT(commutator_norm(u, total_number(space)), 1e-10);
  const auto u0 = build_free_step({0.0, 0.0}, 4);
  const auto vac = basis_vector(space, 0, std::vector<int>(4, 0));
  EXPECT_NEAR(std::abs(vac.dot(u0 * vac)), 1.0, 1e-14);
  // theta = 0 without mass permutes modes
  for (ManyBodyOperator::InnerIterator it(u0, 0b10110101); it; ++it) {
    EXPECT_NEAR(std::abs(it.value()), 1.0, 1e-12);
  }
}

TEST(FreeStep, HeisenbergTransport) {
  const int sites = 4;
  for (double t : {0.0, 0.4, 1.0}) {
    const Walk1DParams p{t, 0.0};
    const auto u = build_free_step(p, sites);
    const auto ud = adjoint(u);
    const auto f = build_fields(sites);
    const auto g = gamma_coeffs(p);
    const SpinMatrix gp = g.plus.adjoint(), g0 = g.zero.adjoint(), gm = g.minus.adjoint();
    for (int n = 0; n < sites; ++n) {
      for (int a = 0; a < 2; ++a) {
        const ManyBodyOperator lhs = u * f[static_cast<std::size_t>(FockSpace::mode(n, a))] * ud;
        const ManyBodyOperator rhs = combine(gp, f, (n + 1) % sites, a) + combine(g0, f, n, a) +
                                     combine(gm, f, (n + sites - 1) % sites, a);
        EXPECT_LT(frobenius_norm(lhs - rhs), 1e-10) << t << " " << n << " " << a;
      }
    }
  }
}

TEST(FreeStep, ResourceBudget) {
  ResourceBudget tiny{1024};
  EXPECT_THROW(build_free_step({0.2, 0.0}, 4, FreeStepRoute::minors, tiny), ResourceLimitError);
  const GaugeLatticeSpace s8(8, 0, Boundary::periodic);
  EXPECT_GT(estimate_step_bytes(s8, FreeStepRoute::exponential), ResourceBudget{}.max_bytes);
  EXPECT_THROW(build_free_step({0.2, 0.0}, 8, FreeStepRoute::exponential), ResourceLimitError);
}

TEST(Gauge, TransformActions) {
  const GaugeLatticeSpace space(3, 1, Boundary::periodic);
  const auto id = build_gauge_transform(space, {0.0, 0.0, 0.0});
  ManyBodyOperator eye(space.dim(), space.dim());
  eye.setIdentity();
  EXPECT_LT(frobenius_norm(id - eye), 1e-15);
  const auto g0 = gauge_phases(space, {0.0, 0.0, 0.0});
  EXPECT_LT((g0 - Eigen::VectorXcd::Ones(space.dim())).norm(), 1e-15);

  const auto fields = build_fields(space);
  const std::vector<double> alpha{0.3, 1.7, 4.1};
  const auto g = build_gauge_transform(space, alpha);
  const auto gd = adjoint(g);
  for (int n = 0; n < 3; ++n) {
    for (int a = 0; a < 2; ++a) {
      const auto& psi = fields[static_cast<std::size_t>(FockSpace::mode(n, a))];
      const ManyBodyOperator lhs = gd * psi * g;
      EXPECT_LT(frobenius_norm(lhs - std::exp(kI * alpha[static_cast<std::size_t>(n)]) * psi), 1e-12);
    }
  }
  const auto link_state = basis_vector(space, 0, {1, -1, 0});
  const double expect = (alpha[1] - alpha[0]) - (alpha[2] - alpha[1]);
  EXPECT_NEAR(std::abs((g * link_state)(space.index(0, {1, -1, 0})) - std::exp(kI * expect)), 0.0, 1e-14);

  // constant angle: global phase on fields, links untouched
  const auto gc = gauge_phases(space, {0.9, 0.9, 0.9});
  EXPECT_NEAR(std::abs(gc(space.index(0, {1, -1, 1})) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(gc(space.index(0b000011, {1, -1, 1})) - std::exp(kI * 1.8)), 0.0, 1e-14);
  EXPECT_THROW(gauge_phases(space, {0.1}), std::invalid_argument);
}

TEST(Interacting, GaugeAndGaussCommutation) {
  const GaugeLatticeSpace space(4, 1, Boundary::periodic);
  const auto d = build_interacting_step({0.4, 0.1}, space, 0.3);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  for (int r = 0; r < 20; ++r) {
    std::vector<double> alpha(4);
    for (auto& a : alpha) a = ang(rng);
    EXPECT_LT(commutator_with_diagonal(d, gauge_phases(space, alpha)), 1e-10);
  }
  for (int n = 0; n < 4; ++n) {
    EXPECT_LT(commutator_with_diagonal(d, gauss_values(space, n).cast<cplx>()), 1e-10);
    EXPECT_LT(commutator_norm(d, gauss_charge(space, n)), 1e-10);
  }
}

TEST(Interacting, ClockEdgeIsUnitary) {
  const GaugeLatticeSpace space(3, 1, Boundary::periodic);
  const auto d = build_interacting_step({0.6, 0.2}, space, 0.5, LinkEdge::clock);
  EXPECT_LT(unitarity_defect(d), 1e-10);
  EXPECT_THROW(build_interacting_step({0.6, 0.2}, GaugeLatticeSpace(3, 1, Boundary::open), 0.5),
               std::invalid_argument);
}

TEST(Interacting, FreeLimitWithLinkBookkeeping) {
  const int sites = 4;
  const GaugeLatticeSpace space(sites, 1, Boundary::periodic);
  for (double t : {0.0, 0.5}) {
    const Walk1DParams p{t, 0.2};
    const auto d = build_interacting_step(p, space, 0.0);
    const auto free = sector_block(build_free_step(p, sites), 2 * sites, 1);
    const std::vector<int> zero(static_cast<std::size_t>(sites), 0);
    for (int j = 0; j < 2 * sites; ++j) {
      const Eigen::VectorXcd out = d * basis_vector(space, std::uint32_t{1} << j, zero);
      EXPECT_NEAR(out.norm(), 1.0, 1e-12);
      for (int i = 0; i < 2 * sites; ++i) {
        cplx amp = 0.0;
        int configs = 0;
        for (std::int64_t k = 0; k < space.dim(); ++k) {
          if (space.occupation(k) == (std::uint32_t{1} << i) && std::abs(out(k)) > 1e-14) {
            amp += out(k);
            ++configs;
          }
        }
        EXPECT_LE(configs, 1);
        EXPECT_LT(std::abs(amp - free(i, j)), 1e-12) << t << " " << i << " " << j;
      }
    }
  }
}

TEST(Interacting, RightHopLowersCrossedLink) {
  const GaugeLatticeSpace space(4, 1, Boundary::periodic);
  const auto d = build_interacting_step({0.0, 0.0}, space, 0.0);
  // component 0 moves right at theta = 0
  const Eigen::VectorXcd out = d * basis_vector(space, 1u << FockSpace::mode(1, 0), {0, 0, 0, 0});
  EXPECT_NEAR(std::abs(out(space.index(1u << FockSpace::mode(2, 0), {0, -1, 0, 0}))), 1.0, 1e-14);
  const Eigen::VectorXcd left = d * basis_vector(space, 1u << FockSpace::mode(0, 1), {0, 0, 0, 0});
  EXPECT_NEAR(std::abs(left(space.index(1u << FockSpace::mode(3, 1), {0, 0, 0, 1}))), 1.0, 1e-14);
}

TEST(Gauss, Eigenvalues) {
  const GaugeLatticeSpace space(4, 1, Boundary::periodic);
  const auto vac = space.index(0, {0, 0, 0, 0});
  for (int n = 0; n < 4; ++n) EXPECT_EQ(gauss_values(space, n)(vac), 0.0);
  const auto one = space.index(1u << FockSpace::mode(1, 1), {0, 1, 0, 0});
  EXPECT_EQ(gauss_values(space, 1)(one), 0.0);
  EXPECT_EQ(gauss_values(space, 2)(one), -1.0);
  EXPECT_THROW(gauss_values(space, 4), std::invalid_argument);
}

TEST(Gauss, ConservedAlongTrajectory) {
  const GaugeLatticeSpace space(4, 1, Boundary::periodic);
  const auto d = build_interacting_step({0.4, 0.1}, space, 0.7);
  const auto psi = random_sector_state(space, {-1.0, 0.0, 0.0, 0.0}, 3);
  const auto traj = run_trajectory(d, space, psi, 20);
  ASSERT_EQ(traj.size(), 21u);
  EXPECT_LT(gauss_drift(traj), 1e-9);
  EXPECT_NEAR(traj[0].gauss[0], -1.0, 1e-12);
  EXPECT_NEAR(traj[0].norm, 1.0, 1e-12);
  double total = 0.0;
  for (const auto& p : traj) {
    EXPECT_GE(p.leakage, -1e-12);
    total += p.leakage;
  }
  EXPECT_NEAR(traj.back().norm, 1.0 - total, 1e-12);

  const auto clock = build_interacting_step({0.4, 0.1}, space, 0.7, LinkEdge::clock);
  const auto tc = run_trajectory(clock, space, psi, 20);
  EXPECT_NEAR(tc.back().norm, 1.0, 1e-10);
}

TEST(BarredField, GaugeInvariantOnOpenChain) {
  const GaugeLatticeSpace chain(4, 1, Boundary::open);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  for (int r = 0; r < 5; ++r) {
    std::vector<double> alpha{ang(rng), ang(rng), ang(rng), 0.0};
    const auto g = build_gauge_transform(chain, alpha);
    for (int n = 0; n < 4; ++n) {
      for (int a = 0; a < 2; ++a) {
        const auto bar = barred_field(chain, n, a);
        EXPECT_GT(frobenius_norm(bar), 0.0);
        EXPECT_LT(frobenius_norm(adjoint(g) * bar * g - bar), 1e-12);
      }
    }
  }
  // the chain end carries the residual phase
  const std::vector<double> end{0.0, 0.0, 0.0, 0.8};
  const auto g = build_gauge_transform(chain, end);
  const auto bar = barred_field(chain, 1, 0);
  EXPECT_LT(frobenius_norm(adjoint(g) * bar * g - std::exp(kI * 0.8) * bar), 1e-12);
  EXPECT_THROW(barred_field(GaugeLatticeSpace(3, 1, Boundary::periodic), 0, 0), std::invalid_argument);
}

}  // namespace
}  // namespace dwalk
