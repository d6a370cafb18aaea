#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "incommdos/errors.hpp"
#include "incommdos/kpm.hpp"
#include "incommdos/numeric.hpp"

using namespace incomm;

namespace {

constexpr double kA = 2.46;

// Hand-built cluster from a dense symmetric matrix; centre orbital 0 at flat index `centre`.
ClusterHamiltonian from_dense(const Eigen::MatrixXd& d, std::size_t centre, double e_bound) {
  SparseMatrix s = d.sparseView();
  s.makeCompressed();
  std::vector<DofIndex> dofs;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    dofs.push_back({{{static_cast<int>(i), 0}, Vec2::Zero()}, i == static_cast<Eigen::Index>(centre) ? 0u : 1u,
                    1, static_cast<std::size_t>(i)});
  }
  return ClusterHamiltonian(s, dofs, {static_cast<std::ptrdiff_t>(centre)}, 1.0, 1, Vec2::Zero(),
                            SpectralWindow::from_bound(e_bound));
}

// Jackson damping as the normalised autocorrelation of a sine window.
std::vector<double> jackson_autocorrelation(int p) {
  std::vector<double> a(static_cast<std::size_t>(p));
  double norm = 0.0;
  for (int v = 0; v < p; ++v) {
    a[v] = std::sin(std::numbers::pi * (v + 1) / (p + 1));
    norm += a[v] * a[v];
  }
  std::vector<double> g(static_cast<std::size_t>(p) + 1, 0.0);
  for (int m = 0; m <= p; ++m) {
    double s = 0.0;
    for (int v = 0; v + m < p; ++v) s += a[v] * a[v + m];
    g[m] = (m == 0 ? 1.0 : 2.0) * s / norm;
  }
  return g;
}

// Chebyshev polynomial by the trigonometric definition.
double cheb_trig(int m, double x) { return std::cos(m * std::acos(x)); }

TBModel tbg6() { return builtin_model("tbg", {{"twist_degrees", 6.0}}); }

}  // namespace

TEST(Jackson, FirstCoefficientIsOne) {
  for (const int p : {1, 10, 100, 1000}) {
    for (const auto v : {KernelVariant::jackson, KernelVariant::printed_arctan}) {
      EXPECT_NEAR(jackson_coefficients(p, v).g[0], 1.0, 1e-14);
    }
  }
}

TEST(Jackson, MatchesAutocorrelationOracle) {
  for (const int p : {1, 2, 5, 64, 300}) {
    const auto k = jackson_coefficients(p);
    const auto ref = jackson_autocorrelation(p);
    ASSERT_EQ(k.g.size(), ref.size());
    for (std::size_t m = 0; m < ref.size(); ++m) EXPECT_NEAR(k.g[m], ref[m], 1e-13) << p << " " << m;
  }
}

TEST(Jackson, PositiveAndBounded) {
  for (const int p : {2, 17, 256, 1000}) {
    const auto k = jackson_coefficients(p);
    for (int m = 1; m < p; ++m) {
      EXPECT_GT(k.g[m], 0.0);
      EXPECT_LE(k.g[m], 2.0);
    }
    EXPECT_LE(std::abs(k.g[p]), 1e-15);
  }
}

TEST(Jackson, PrintedArctanVariantPinnedValues) {
  const auto k1 = jackson_coefficients(1, KernelVariant::printed_arctan);
  EXPECT_NEAR(k1.g[1], 1.0038848218538872, 1e-15);
  const auto k3 = jackson_coefficients(3, KernelVariant::printed_arctan);
  EXPECT_NEAR(k3.g[3], -0.11816682390275052, 1e-15);
}

TEST(Jackson, RejectsZeroOrder) { EXPECT_THROW(jackson_coefficients(0), InvalidParameter); }

TEST(Moments, ScalarZero) {
  const auto h = from_dense(Eigen::MatrixXd::Zero(1, 1), 0, 1.0);
  const auto t = chebyshev_moments(h, 0, 8);
  const double expected[] = {1, 0, -1, 0, 1, 0, -1, 0, 1};
  ASSERT_EQ(t.mu.size(), 9u);
  for (int m = 0; m <= 8; ++m) EXPECT_EQ(t.mu[m], expected[m]);
}

TEST(Moments, DiagonalCentre) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d(0, 0) = -0.3;
  d(1, 1) = 0.5;
  d(2, 2) = 0.9;
  const auto h = from_dense(d, 1, 1.0);
  const auto t = chebyshev_moments(h, 0, 20);
  EXPECT_DOUBLE_EQ(t.mu[2], -0.5);
  for (int m = 0; m <= 20; ++m) EXPECT_NEAR(t.mu[m], cheb_trig(m, 0.5), 1e-13);
}

TEST(Moments, MatchDenseEigendecomposition) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto m = tbg6();
  const auto w = spectral_bound(m);
  for (int trial = 0; trial < 6; ++trial) {
    const int j = 1 + trial % 2;
    const Vec2 b = m.lattice(other_sheet(j)).to_cartesian(Vec2(u(rng), u(rng)));
    const auto h = assemble(m, (3 + trial) * kA, j, b, w);
    const std::size_t alpha = m.global_index(j, trial % 2);
    const auto t = chebyshev_moments(h, alpha, 128);
    EXPECT_EQ(t.mu[0], 1.0);
    const auto spec = local_spectrum(h, alpha);
    for (int k = 0; k <= 128; ++k) {
      const double oracle = spec.evaluate([&](double e) { return cheb_trig(k, w.eta * e); });
      EXPECT_NEAR(t.mu[k], oracle, 1e-10) << "m=" << k;
      EXPECT_LE(std::abs(t.mu[k]), 1.0 + 1e-9);
    }
  }
}

TEST(Moments, WindowViolationIsDetected) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(1, 1);
  d(0, 0) = 3.0;
  const auto h = from_dense(d, 0, 1.0);
  EXPECT_THROW(chebyshev_moments(h, 0, 10), NumericalBreakdown);
}

TEST(Reconstruct, ScalarHandEvaluation) {
  const auto h = from_dense(Eigen::MatrixXd::Zero(1, 1), 0, 1.0);
  const auto t = chebyshev_moments(h, 0, 2);
  const auto k = jackson_coefficients(2);
  const double eps[] = {0.0};
  const auto v = reconstruct_values(t, k, eps);
  // T_0 = 1, T_1(0) = 0, T_2(0) = -1 and mu = (1, 0, -1)
  EXPECT_NEAR(v[0], (1.0 + k.g[2]) / std::numbers::pi, 1e-15);
  const auto s = reconstruct(t, k, eps);
  EXPECT_EQ(s[0].value, v[0]);
  EXPECT_EQ(s[0].provenance.p, 2);
}

TEST(Reconstruct, ChebyshevRecursionMatchesTrigonometry) {
  for (const double x : {-0.999, -0.3, 0.0, 0.77}) {
    const auto t = chebyshev_values(x, 500);
    for (int m = 0; m <= 500; ++m) EXPECT_NEAR(t[m], cheb_trig(m, x), 1e-12);
  }
}

TEST(Reconstruct, MatchesDensePolynomialEvaluation) {
  const auto m = tbg6();
  const auto w = spectral_bound(m);
  const auto h = assemble(m, 5 * kA, 1, Vec2(0.4, 1.1), w);
  const int p = 96;
  const auto k = jackson_coefficients(p);
  const auto t = chebyshev_moments(h, 1, p);
  const std::vector<double> eps{-7.0, -2.5, -0.4, 0.0, 0.33, 3.0, 8.9};
  const auto v = reconstruct_values(t, k, eps);
  const auto spec = local_spectrum(h, 1);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double x = w.eta * eps[i];
    const double pref = w.eta / (std::numbers::pi * std::sqrt(1.0 - x * x));
    const double oracle = spec.evaluate([&](double e) {
      double s = 0.0;
      for (int q = 0; q <= p; ++q) s += k.g[q] * cheb_trig(q, x) * cheb_trig(q, w.eta * e);
      return pref * s;
    });
    EXPECT_NEAR(v[i], oracle, 1e-10);
  }
}

TEST(Reconstruct, NormalisationAndPositivity) {
  const auto m = tbg6();
  const auto w = spectral_bound(m);
  const auto h = assemble(m, 6 * kA, 2, Vec2(0.9, 0.2), w);
  const auto t = chebyshev_moments(h, 2, 256);
  const auto k = jackson_coefficients(256);
  const double edge = (1.0 - 1e-6) / w.eta;
  const auto eps = linspace(-edge, edge, 2001);
  const auto v = reconstruct_values(t, k, eps);
  EXPECT_NEAR(trapezoid(eps, v), 1.0, 1e-3);
  for (const double x : v) EXPECT_GE(x, -1e-9);
}

TEST(Reconstruct, BipartiteMonolayerIsSymmetric) {
  const auto m = builtin_model("monolayer_graphene", {});
  const auto h = assemble(m, 8 * kA, 1, Vec2::Zero());
  const auto t = chebyshev_moments(h, 0, 200);
  for (int q = 1; q <= 200; q += 2) EXPECT_NEAR(t.mu[q], 0.0, 1e-14);
  const auto k = jackson_coefficients(200);
  const auto eps = linspace(-8.0, 8.0, 161);
  const auto v = reconstruct_values(t, k, eps);
  for (std::size_t i = 0; i < eps.size(); ++i) EXPECT_NEAR(v[i], v[eps.size() - 1 - i], 1e-9);
}

TEST(Reconstruct, OutOfWindowListsEnergies) {
  const auto h = from_dense(Eigen::MatrixXd::Zero(1, 1), 0, 1.0);
  const auto t = chebyshev_moments(h, 0, 4);
  const auto k = jackson_coefficients(4);
  const std::vector<double> eps{0.0, 1.5, -0.9999999};
  try {
    reconstruct_values(t, k, eps);
    FAIL() << "expected OutOfWindow";
  } catch (const OutOfWindow& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("1.5"), std::string::npos);
    EXPECT_NE(msg.find("-0.9999999"), std::string::npos);
  }
  EXPECT_THROW(reconstruct_values(t, jackson_coefficients(5), std::vector<double>{0.0}),
               InvalidParameter);
}

TEST(DenseOracle, CompletenessAndDiagonal) {
  const auto m = tbg6();
  const auto h = assemble(m, 4 * kA, 1, Vec2(0.1, 0.2));
  EXPECT_NEAR(dense_oracle(h, 0, [](double) { return 1.0; }), 1.0, 1e-12);
  const auto c = static_cast<int>(h.centre_dof(0));
  EXPECT_NEAR(dense_oracle(h, 0, [](double e) { return e; }), h.matrix().coeff(c, c), 1e-12);
  // second moment equals the squared norm of the centre row
  const double row2 = h.matrix().row(c).squaredNorm();
  EXPECT_NEAR(dense_oracle(h, 0, [](double e) { return e * e; }), row2, 1e-11);
  EXPECT_THROW(dense_oracle(h, 0, [](double) { return std::nan(""); }), NumericalBreakdown);
}

TEST(MomentCsv, RoundTrip) {
  const auto m = tbg6();
  const auto h = assemble(m, 4 * kA, 2, Vec2(0.3, -0.6));
  const auto t = chebyshev_moments(h, 3, 40);
  std::stringstream ss;
  write_moments_csv(ss, t);
  const auto back = read_moments_csv(ss);
  EXPECT_EQ(back.mu, t.mu);
  EXPECT_EQ(back.j, t.j);
  EXPECT_EQ(back.alpha, t.alpha);
  EXPECT_EQ(back.shift, t.shift);
  EXPECT_EQ(back.r, t.r);
  EXPECT_EQ(back.eta, t.eta);
  std::istringstream bad("m,mu\n0,1\n");
  EXPECT_THROW(read_moments_csv(bad), InvalidParameter);
}
