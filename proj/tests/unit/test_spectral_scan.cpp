#include "dwalk/spectral_scan.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <set>

namespace dwalk {
namespace {

using testing::kPi;

const DispersionRecord& record_at(const ScanReport& r, double p) {
  for (const auto& rec : r.records) {
    if (std::abs(rec.momentum[0] - p) < 1e-12) return rec;
  }
  throw std::runtime_error("momentum not on grid");
}

bool same_point(const MomentumVec& a, const MomentumVec& b) { return bz_distance(a, b) < 1e-6; }

TEST(WalkKind, RoundTrip) {
  for (WalkKind k : {WalkKind::walk_1d, WalkKind::weyl_plus, WalkKind::weyl_minus, WalkKind::dirac}) {
    EXPECT_EQ(parse_walk_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_walk_kind("weyl"), std::invalid_argument);
  EXPECT_EQ((WalkSpec{WalkKind::dirac}.spinor_dim()), 4);
  EXPECT_EQ((WalkSpec{WalkKind::weyl_minus}.dim()), 3);
}

TEST(Grid, MomentaCoverHalfOpenZone) {
  EXPECT_DOUBLE_EQ(grid_momentum(15, 16, false), kPi);
  EXPECT_NEAR(grid_momentum(7, 16, false), 0.0, 1e-15);
  EXPECT_GT(grid_momentum(0, 16, false), -kPi);
  EXPECT_NEAR(grid_momentum(0, 16, true), -kPi + kPi / 16, 1e-15);
  EXPECT_THROW(scan_1d({0.0, 0.0}, 8), std::invalid_argument);
  EXPECT_THROW(scan_3d({WalkKind::walk_1d}, 16), std::invalid_argument);
}

TEST(Scan1D, ConventionalMasslessIsLinear) {
  const auto r = scan_1d({0.0, 0.0}, 128);
  ASSERT_EQ(r.records.size(), 128u);
  for (const auto& rec : r.records) {
    const double p = rec.momentum[0];
    if (std::abs(p - kPi) < 1e-12) {
      EXPECT_DOUBLE_EQ(rec.energies[0], kPi);
      EXPECT_DOUBLE_EQ(rec.energies[1], kPi);
      continue;
    }
    EXPECT_NEAR(rec.energies[0], -std::abs(p), 1e-12);
    EXPECT_NEAR(rec.energies[1], std::abs(p), 1e-12);
  }
  EXPECT_DOUBLE_EQ(r.max_abs_energy, kPi);
  EXPECT_DOUBLE_EQ(r.bound_rhs, kPi);
}

TEST(Scan1D, ConventionalMassiveEndpoints) {
  const double m = 0.02;
  const auto r = scan_1d({0.0, m}, 512);
  const auto& zero = record_at(r, 0.0);
  EXPECT_NEAR(zero.energies[0], -m, 1e-14);
  EXPECT_NEAR(zero.energies[1], m, 1e-14);
  const auto& edge = record_at(r, kPi);
  EXPECT_NEAR(edge.energies[0], -(kPi - m), 1e-12);
  EXPECT_NEAR(edge.energies[1], kPi - m, 1e-12);
  EXPECT_TRUE(r.low_points.empty());
}

TEST(Scan1D, BoundHoldsAcrossFamily) {
  for (double t : {0.1, 0.2, 0.6, 1.0, 1.4, 1.55}) {
    for (double m : {0.0, 0.02, 0.05}) {
      const auto r = scan_1d({t, m}, 512);
      EXPECT_LE(r.max_abs_energy, r.bound_rhs + 1e-12) << t << " " << m;
      EXPECT_NEAR(r.bound_rhs, kPi - 2 * t + m, 1e-15);
    }
  }
  EXPECT_TRUE(std::isnan(scan_1d({-0.2, 0.0}, 64).bound_rhs));
}

TEST(Scan1D, MatchesDirectEvaluation) {
  const Walk1DParams w{0.7, 0.1};
  const auto r = scan_1d(w, 64, {.midpoint_offset = true});
  for (std::size_t k = 0; k < 64; ++k) {
    const double p = grid_momentum(k, 64, true);
    EXPECT_DOUBLE_EQ(r.records[k].momentum[0], p);
    const auto e = eigenphases(walk_op(w, p));
    EXPECT_NEAR(r.records[k].energies[0], e[0], 1e-14);
    EXPECT_NEAR(r.records[k].energies[1], e[1], 1e-14);
  }
}

TEST(Scan3D, RecordOrderAndValues) {
  for (WalkKind kind : {WalkKind::weyl_plus, WalkKind::weyl_minus, WalkKind::dirac}) {
    const WalkSpec w{kind, 0.4, 0.1};
    const std::size_t n = 16;
    const auto r = scan_3d(w, n);
    ASSERT_EQ(r.records.size(), n * n * n);
    for (std::size_t i : {std::size_t{0}, std::size_t{1}, std::size_t{17}, std::size_t{300}, n * n * n - 1}) {
      const MomentumVec p{grid_momentum(i % n, n, false), grid_momentum((i / n) % n, n, false),
                          grid_momentum(i / (n * n), n, false)};
      EXPECT_EQ(r.records[i].momentum, p);
      const auto e = eigenphases(w.at(p));
      ASSERT_EQ(r.records[i].energies.size(), e.size());
      for (std::size_t k = 0; k < e.size(); ++k) EXPECT_NEAR(r.records[i].energies[k], e[k], 1e-12);
    }
  }
}

TEST(Scan3D, Deterministic) {
  const WalkSpec w{WalkKind::dirac, 0.3, 0.05};
  const auto a = scan_3d(w, 20, {.midpoint_offset = true});
  const auto b = scan_3d(w, 20, {.midpoint_offset = true});
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].momentum, b.records[i].momentum);
    for (std::size_t k = 0; k < 4; ++k) {
      EXPECT_EQ(a.records[i].energies[k], b.records[i].energies[k]);
    }
  }
  EXPECT_EQ(a.max_abs_energy, b.max_abs_energy);
}

TEST(Scan3D, ConventionalZerosOnGrid) {
  const auto r = scan_3d({WalkKind::weyl_plus, 0.0, 0.0}, 32);
  for (const auto& sp : conventional_special_points()) {
    if (sp.sign_relation < 0) continue;
    const bool found = std::any_of(r.low_points.begin(), r.low_points.end(),
                                   [&](const MomentumVec& p) { return same_point(p, sp.momentum); });
    EXPECT_TRUE(found) << sp.momentum[0] << "," << sp.momentum[1] << "," << sp.momentum[2];
  }
  EXPECT_TRUE(std::any_of(r.low_points.begin(), r.low_points.end(),
                          [](const MomentumVec& p) { return same_point(p, {0, 0, 0}); }));
}

TEST(Scan3D, BoundHoldsButHalfPiClaimDoesNot) {
  // Proven bound 3(pi - 2 theta) + m holds; the stronger pi/2 cap at theta = pi/3 does not.
  const auto r = scan_3d({WalkKind::dirac, kPi / 3, 0.02}, 32, {.midpoint_offset = true});
  EXPECT_LE(r.max_abs_energy, r.bound_rhs + 1e-12);
  EXPECT_GT(r.max_abs_energy, kPi / 2);
  EXPECT_NEAR(r.bound_rhs, 3 * (kPi - 2 * kPi / 3) + 0.02, 1e-14);
  EXPECT_NEAR(bound_rhs({WalkKind::weyl_plus, 0.2, 0.3}), 3 * (kPi - 0.4), 1e-14);
}

TEST(SpecialPoints, ConventionalCatalogueRecovered) {
  const auto r = scan_3d({WalkKind::weyl_plus, 0.0, 0.0}, 32);
  const auto found = find_special_points(r, 1e-3, 0.2);
  std::vector<MomentumVec> plus, minus;
  for (const auto& sp : conventional_special_points()) {
    (sp.sign_relation > 0 ? plus : minus).push_back(sp.momentum);
  }
  auto matches = [](const std::vector<RefinedPoint>& got, const std::vector<MomentumVec>& want) {
    if (got.size() != want.size()) return false;
    return std::all_of(want.begin(), want.end(), [&](const MomentumVec& w) {
      return std::any_of(got.begin(), got.end(),
                         [&](const RefinedPoint& g) { return same_point(g.momentum, w); });
    });
  };
  EXPECT_TRUE(matches(found.doublers, plus)) << found.doublers.size();
  EXPECT_TRUE(matches(found.pseudo_doublers, minus)) << found.pseudo_doublers.size();
}

TEST(SpecialPoints, FamilyWeylHasSingleDoubler) {
  const double t = 0.5;
  const double q = doubler_point(t).q_dx;
  const auto r = scan_3d({WalkKind::weyl_plus, t, 0.0}, 48, {.midpoint_offset = true});
  const auto found = find_special_points(r, 1e-3, 0.2);
  ASSERT_EQ(found.doublers.size(), 1u);
  EXPECT_LT(bz_distance(found.doublers[0].momentum, {q, q, q}), 1e-6);
  // re-evaluated from scratch
  const auto e = eigenphases(weyl_op({t, 0.0}, WeylSign::plus, found.doublers[0].momentum));
  EXPECT_NEAR(e.min_abs(), found.doublers[0].residual, 1e-8);
  EXPECT_LT(found.doublers[0].residual, 1e-6);
}

TEST(SpecialPoints, NoPseudoDoublersBelowHalfPi) {
  const WalkSpec d3{WalkKind::dirac, 1.4, 0.05};
  ASSERT_LT(bound_rhs(d3), kPi / 2);
  const auto r3 = scan_3d(d3, 32, {.midpoint_offset = true});
  EXPECT_TRUE(find_special_points(r3).pseudo_doublers.empty());
  EXPECT_LT(r3.max_abs_energy, kPi / 2);
  const auto r1 = scan_1d({1.4, 0.05}, 512);
  EXPECT_TRUE(find_special_points(r1).pseudo_doublers.empty());
}

TEST(SpecialPoints, ExtendedThetaDiagonalCrossings) {
  const double t = 2 * kPi / 3;
  const double q = doubler_point(t).q_dx;
  const auto plus = find_special_points(
      scan_3d_diagonal({WalkKind::weyl_plus, t, 0.0, true}, 256), 1e-3, 0.2);
  const auto minus = find_special_points(
      scan_3d_diagonal({WalkKind::weyl_minus, t, 0.0, true}, 256), 1e-3, 0.2);
  ASSERT_FALSE(plus.doublers.empty());
  ASSERT_FALSE(minus.doublers.empty());
  EXPECT_TRUE(std::any_of(plus.doublers.begin(), plus.doublers.end(), [&](const RefinedPoint& p) {
    return std::abs(p.momentum[0] - q) < 1e-6;
  }));
  EXPECT_TRUE(std::any_of(minus.doublers.begin(), minus.doublers.end(), [&](const RefinedPoint& p) {
    return std::abs(p.momentum[0] + q) < 1e-6;
  }));
  EXPECT_GT(std::abs(plus.doublers[0].momentum[0] - minus.doublers[0].momentum[0]), 0.1);
}

TEST(SpecialPoints, OneDimensionalConventional) {
  const auto found = find_special_points(scan_1d({0.0, 0.0}, 64));
  EXPECT_TRUE(found.doublers.empty());
  ASSERT_EQ(found.pseudo_doublers.size(), 1u);
  EXPECT_NEAR(found.pseudo_doublers[0].momentum[0], kPi, 1e-8);
  EXPECT_THROW(find_special_points(scan_1d({0.0, 0.0}, 64), 0.0), std::invalid_argument);
  EXPECT_THROW(find_special_points(scan_1d({0.0, 0.0}, 64), 1e-3, -1.0), std::invalid_argument);
}

TEST(PhaseBound, TrivialCases) {
  std::mt19937_64 rng(99);
  const SpinMatrix id = identity(2);
  EXPECT_DOUBLE_EQ(product_phase_margin(id, id, 0.0, 0.0), 0.0);
  const SpinMatrix u(testing::random_unitary(4, rng));
  EXPECT_NEAR(product_phase_margin(u, SpinMatrix(u.adjoint()), 0.0, 0.0), 0.0, 1e-12);
}

TEST(PhaseBound, RandomTrialsNeverViolate) {
  for (int dim : {2, 4}) {
    const auto res = product_phase_bound_test(dim, 10000, 0);
    EXPECT_EQ(res.trials, 10000u);
    EXPECT_GE(res.worst_margin, -1e-10) << dim;
    EXPECT_EQ(product_phase_bound_test(dim, 500, 7).worst_margin,
              product_phase_bound_test(dim, 500, 7).worst_margin);
  }
  EXPECT_THROW(product_phase_bound_test(3, 10, 0), std::invalid_argument);
  EXPECT_THROW(product_phase_bound_test(2, 0, 0), std::invalid_argument);
}

TEST(BoundCertificate, PerAxis) {
  const auto c0 = bound_certificate({WalkKind::weyl_plus, 0.0, 0.0}, 32);
  for (double m : c0.axis_max) EXPECT_NEAR(m, kPi, 1e-12);
  EXPECT_TRUE(c0.holds);
  const auto c3 = bound_certificate({WalkKind::dirac, kPi / 3, 0.05}, 32);
  for (double m : c3.axis_max) EXPECT_LE(m, kPi / 3 + 1e-10);
  EXPECT_TRUE(c3.axis_holds);
  EXPECT_TRUE(c3.holds);
  EXPECT_LE(c3.max_e, c3.rhs + 1e-10);
  const auto c1 = bound_certificate({WalkKind::walk_1d, 0.6, 0.05}, 512);
  EXPECT_TRUE(c1.holds);
  EXPECT_TRUE(c1.axis_holds);
  EXPECT_THROW(bound_certificate({WalkKind::walk_1d, -0.1, 0.0}, 64), std::invalid_argument);
}

TEST(ParallelFor, EachIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  parallel_for(0, [](std::size_t) { FAIL(); });
}

}  // namespace
}  // namespace dwalk
