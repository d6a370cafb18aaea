#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "incommdos/errors.hpp"
#include "incommdos/geometry.hpp"

using namespace incomm;

namespace {

constexpr double kA = 2.46;

// Independent scan over a generous integer box.
std::set<LatticeIndex> brute_force_ball(const Mat2& a, double r, int box) {
  std::set<LatticeIndex> out;
  for (int n1 = -box; n1 <= box; ++n1) {
    for (int n2 = -box; n2 <= box; ++n2) {
      const double x = a(0, 0) * n1 + a(0, 1) * n2;
      const double y = a(1, 0) * n1 + a(1, 1) * n2;
      if (x * x + y * y < r * r) out.insert({n1, n2});
    }
  }
  return out;
}

LatticeBasis twisted(double degrees) {
  return LatticeBasis::hexagonal(kA).rotated(degrees * std::numbers::pi / 180.0);
}

}  // namespace

TEST(LatticeBasis, RejectsSingularAndNonFinite) {
  Mat2 singular;
  singular << 1, 2, 2, 4;
  EXPECT_THROW(LatticeBasis{singular}, InvalidBasis);
  Mat2 bad = Mat2::Identity();
  bad(0, 0) = std::nan("");
  EXPECT_THROW(LatticeBasis{bad}, InvalidBasis);
}

TEST(LatticeBasis, CellAreaIsAbsDeterminant) {
  const auto h = LatticeBasis::hexagonal(kA);
  EXPECT_DOUBLE_EQ(h.cell_area(), std::abs(h.matrix().determinant()));
  EXPECT_NEAR(h.cell_area(), kA * kA * std::sqrt(3.0) / 2.0, 1e-14);
  Mat2 flipped;
  flipped << 0, 1, 1, 0;
  EXPECT_DOUBLE_EQ(LatticeBasis(flipped).cell_area(), 1.0);
}

TEST(LatticeBasis, RotationPreservesAreaAndLength) {
  const auto r = twisted(6.0);
  EXPECT_NEAR(r.cell_area(), LatticeBasis::hexagonal(kA).cell_area(), 1e-12);
  EXPECT_NEAR(r.lattice_constant(), kA, 1e-14);
  const double angle = std::atan2(r.matrix()(1, 0), r.matrix()(0, 0));
  EXPECT_NEAR(angle, 6.0 * std::numbers::pi / 180.0, 1e-14);
}

TEST(SitesInBall, IdentityExamples) {
  const LatticeBasis id(Mat2::Identity());
  EXPECT_EQ(sites_in_ball(id, 1.5).size(), 9u);
  const auto one = sites_in_ball(id, 0.5);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].n, (LatticeIndex{0, 0}));
}

TEST(SitesInBall, StrictInequality) {
  const LatticeBasis id(Mat2::Identity());
  // |(1,0)| == 1 exactly is excluded.
  EXPECT_EQ(sites_in_ball(id, 1.0).size(), 1u);
  EXPECT_EQ(sites_in_ball(id, std::nextafter(1.0, 2.0)).size(), 1u);
  EXPECT_EQ(sites_in_ball(id, 1.0 + 1e-11).size(), 5u);
}

TEST(SitesInBall, RotationKeepsShells) {
  // r = 20a passes through lattice points; both orientations must agree
  const auto a = sites_in_ball(twisted(0.0), 20 * kA);
  const auto b = sites_in_ball(twisted(6.0), 20 * kA);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].n, b[i].n);
}

TEST(SitesInBall, MatchesBruteForceHexagonal) {
  for (const double deg : {0.0, 6.0, 17.3}) {
    const auto basis = twisted(deg);
    for (const double r : {kA * 3, kA * 5.5, 1.0}) {
      const auto sites = sites_in_ball(basis, r);
      const auto expected = brute_force_ball(basis.matrix(), r, 20);
      std::set<LatticeIndex> got;
      for (const auto& s : sites) {
        got.insert(s.n);
        EXPECT_LT(s.x.norm(), r);
        EXPECT_NEAR((s.x - basis.point(s.n)).norm(), 0.0, 1e-13);
      }
      EXPECT_EQ(got.size(), sites.size()) << "duplicates";
      EXPECT_EQ(got, expected) << "deg=" << deg << " r=" << r;
    }
  }
}

TEST(SitesInBall, LexicographicOrder) {
  const auto sites = sites_in_ball(twisted(6.0), 4 * kA);
  for (std::size_t i = 1; i < sites.size(); ++i) EXPECT_LT(sites[i - 1].n, sites[i].n);
}

TEST(Modulate, Examples) {
  const LatticeBasis id(Mat2::Identity());
  const auto m = modulate(id, Vec2(1.25, -0.5));
  EXPECT_NEAR(m.frac[0], 0.25, 1e-15);
  EXPECT_NEAR(m.frac[1], 0.5, 1e-15);
  const auto z = modulate(id, Vec2::Zero());
  EXPECT_EQ(z.frac, Vec2::Zero());
  const auto h = twisted(6.0);
  const auto lp = modulate(h, h.point({3, -7}));
  EXPECT_EQ(lp.frac, Vec2::Zero());
}

TEST(Modulate, PropertiesOnRandomInput) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::uniform_int_distribution<int> n(-20, 20);
  const auto basis = twisted(6.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Vec2 x(u(rng), u(rng));
    const auto m = modulate(basis, x);
    EXPECT_GE(m.frac.minCoeff(), 0.0);
    EXPECT_LT(m.frac.maxCoeff(), 1.0);
    EXPECT_NEAR((m.b - basis.to_cartesian(m.frac)).norm(), 0.0, 1e-12);
    // b - u is a lattice vector
    const Vec2 k = basis.to_fractional(m.b - x);
    EXPECT_NEAR(k[0], std::round(k[0]), 1e-9);
    EXPECT_NEAR(k[1], std::round(k[1]), 1e-9);
    // idempotent
    const auto again = modulate(basis, m.b);
    EXPECT_NEAR((again.frac - m.frac).norm(), 0.0, 1e-12);
    // invariant under lattice translation
    const auto shifted = modulate(basis, x + basis.point({n(rng), n(rng)}));
    const Vec2 d = shifted.frac - m.frac;
    EXPECT_NEAR(d[0] - std::round(d[0]), 0.0, 1e-9);
    EXPECT_NEAR(d[1] - std::round(d[1]), 0.0, 1e-9);
  }
}

TEST(ShiftGrid, IdentityExamples) {
  const LatticeBasis id(Mat2::Identity());
  const auto g1 = shift_grid(id, 1);
  ASSERT_EQ(g1.points.size(), 1u);
  EXPECT_EQ(g1.points[0].b, Vec2::Zero());
  const auto g2 = shift_grid(id, 2);
  ASSERT_EQ(g2.points.size(), 4u);
  const Vec2 expected[] = {{0, 0}, {0, 0.5}, {0.5, 0}, {0.5, 0.5}};
  for (int i = 0; i < 4; ++i) EXPECT_EQ(g2.points[i].b, expected[i]);
  EXPECT_THROW(shift_grid(id, 0), InvalidParameter);
}

TEST(ShiftGrid, HexagonalFractionsExactAndDistinct) {
  const auto h = twisted(6.0);
  const int n = 5;
  const auto g = shift_grid(h, n);
  ASSERT_EQ(g.points.size(), 25u);
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      const auto& p = g.points[i1 * n + i2];
      EXPECT_EQ(p.frac[0], static_cast<double>(i1) / n);
      EXPECT_EQ(p.frac[1], static_cast<double>(i2) / n);
      EXPECT_EQ(p.b, h.to_cartesian(p.frac));
    }
  }
  for (std::size_t a = 0; a < g.points.size(); ++a) {
    for (std::size_t b = a + 1; b < g.points.size(); ++b) {
      EXPECT_GT((g.points[a].b - g.points[b].b).norm(), 1e-3);
    }
  }
}

TEST(FourierMode, ZeroModeIsExactlyOne) {
  const auto f = fourier_mode_average(twisted(6.0), twisted(0.0), {0, 0}, 30 * kA);
  EXPECT_EQ(f.value, std::complex<double>(1.0, 0.0));
}

TEST(FourierMode, IdenticalLatticesAreCommensurate) {
  const LatticeBasis id(Mat2::Identity());
  for (const double r : {3.0, 10.0, 40.0}) {
    const auto f = fourier_mode_average(id, id, {1, 0}, r);
    EXPECT_NEAR(std::abs(f.value - 1.0), 0.0, 1e-12);
    EXPECT_TRUE(f.commensurate);
  }
}

TEST(FourierMode, DirectSumOracle) {
  const auto self = twisted(6.0);
  const auto other = twisted(0.0);
  const double r = 12 * kA;
  std::complex<double> sum = 0;
  const auto ball = brute_force_ball(self.matrix(), r, 40);
  for (const auto& n : ball) {
    const Vec2 k = other.inverse() * self.point(n);
    sum += std::polar(1.0, 2.0 * std::numbers::pi * (2.0 * k[0] - 1.0 * k[1]));
  }
  sum /= static_cast<double>(ball.size());
  const auto f = fourier_mode_average(self, other, {2, -1}, r);
  EXPECT_EQ(f.site_count, ball.size());
  EXPECT_NEAR(std::abs(f.value - sum), 0.0, 1e-12);
  EXPECT_FALSE(f.commensurate);
}

TEST(FourierMode, DecaysAtSixDegrees) {
  const auto self = twisted(6.0);
  const auto other = twisted(0.0);
  const double f50 = std::abs(fourier_mode_average(self, other, {1, 0}, 50 * kA).value);
  const double f100 = std::abs(fourier_mode_average(self, other, {1, 0}, 100 * kA).value);
  const double f200 = std::abs(fourier_mode_average(self, other, {1, 0}, 200 * kA).value);
  EXPECT_LE(f100, 0.75 * f50);
  EXPECT_LE(f200, 0.75 * f100);
  // r^-1 envelope anchored at r = 50a
  EXPECT_LE(100 * f100, 50 * f50);
  EXPECT_LE(200 * f200, 50 * f50);
}

TEST(LooksRational, Basic) {
  const double half[] = {0.5, 0.25};
  EXPECT_TRUE(looks_rational(half));
  const double third[] = {1.0 / 3.0};
  EXPECT_TRUE(looks_rational(third));
  const double irr[] = {std::sqrt(2.0)};
  EXPECT_FALSE(looks_rational(irr));
  const double mixed[] = {0.5, std::numbers::pi};
  EXPECT_FALSE(looks_rational(mixed));
}

TEST(Discrepancy, UniformGridIsSmall) {
  const int n = 64;
  std::vector<Vec2> pts;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) pts.emplace_back((i + 0.5) / n, (k + 0.5) / n);
  }
  EXPECT_LE(bin_discrepancy(pts), 1.0 / std::sqrt(static_cast<double>(pts.size())));
  EXPECT_NEAR(bin_discrepancy(pts), 0.0, 1e-15);
}

TEST(Discrepancy, ConcentratedPointsGiveOneMinusBinArea) {
  std::vector<Vec2> pts(500, Vec2(0.0, 0.0));
  EXPECT_NEAR(bin_discrepancy(pts), 1.0 - 1.0 / 256.0, 1e-15);
}

TEST(Discrepancy, CommensurateDoesNotDecay) {
  const auto h = twisted(0.0);
  EXPECT_NEAR(equidistribution_discrepancy(h, h, 30 * kA), 1.0 - 1.0 / 256.0, 1e-15);
}

TEST(Discrepancy, TooFewSites) {
  const auto h = twisted(6.0);
  EXPECT_THROW(equidistribution_discrepancy(h, twisted(0.0), 2 * kA), InsufficientSample);
}

TEST(Discrepancy, DecreasesAtSixDegrees) {
  const auto self = twisted(6.0);
  const auto other = twisted(0.0);
  const double d50 = equidistribution_discrepancy(self, other, 50 * kA);
  const double d100 = equidistribution_discrepancy(self, other, 100 * kA);
  const double d200 = equidistribution_discrepancy(self, other, 200 * kA);
  EXPECT_GT(d50, d200);
  EXPECT_GT(d100, d200);
  EXPECT_LT(d200, 0.01);
}
