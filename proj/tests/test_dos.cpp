#include <gtest/gtest.h>

#include <cmath>

#include "incommdos/dos.hpp"
#include "incommdos/errors.hpp"
#include "incommdos/numeric.hpp"

using namespace incomm;

namespace {

constexpr double kA = 2.46;

TBModel tbg6(double t_perp = 0.48) {
  return builtin_model("tbg", {{"twist_degrees", 6.0}, {"t_perp", t_perp}});
}

TBModel monolayer() { return builtin_model("monolayer_graphene", {}); }

}  // namespace

TEST(TotalDos, WeightsMatchPerShiftSum) {
  const auto m = tbg6();
  const auto w = spectral_bound(m);
  const double r = 5 * kA;
  const int p = 48;
  const int n = 2;
  const auto eps = linspace(-6.0, 6.0, 25);
  const auto curve = total_dos(m, w, r, p, n, eps);

  std::vector<double> manual(eps.size(), 0.0);
  for (const int j : {1, 2}) {
    const auto grid = shift_grid(m.lattice(other_sheet(j)), n);
    const double area = m.lattice(other_sheet(j)).cell_area();
    for (std::size_t a = 0; a < m.orbital_count(j); ++a) {
      const auto field = ldos_field(m, r, p, j, m.global_index(j, a), grid, eps);
      for (const auto& row : field.values) {
        for (std::size_t e = 0; e < eps.size(); ++e) manual[e] += area * row[e];
      }
    }
  }
  for (std::size_t e = 0; e < eps.size(); ++e) {
    manual[e] *= m.nu() / (n * n);
    EXPECT_NEAR(curve.values[e], manual[e], 1e-12 * std::max(1.0, std::abs(manual[e])));
  }
  EXPECT_EQ(curve.nu, m.nu());
  EXPECT_EQ(curve.n_disc, n);
  EXPECT_DOUBLE_EQ(curve.eta, w.eta);
}

TEST(TotalDos, NonNegativeAndNormalised) {
  const auto m = tbg6();
  const auto w = spectral_bound(m);
  const auto eps = default_energy_grid(w, 801, 0.999);
  const auto curve = total_dos(m, w, 8 * kA, 128, 2, eps);
  for (const double v : curve.values) EXPECT_GE(v, -1e-9);
  EXPECT_NEAR(trapezoid(curve.epsilons, curve.values), 1.0, 2e-2);
}

TEST(TotalDos, DecoupledBilayerEqualsMonolayer) {
  const auto bi = tbg6(0.0);
  const auto mono = monolayer();
  const auto w = spectral_bound(mono);
  const auto eps = default_energy_grid(w, 201);
  const auto a = total_dos(bi, w, 7.3 * kA, 96, 2, eps);
  const auto b = total_dos(mono, w, 7.3 * kA, 96, 2, eps);
  for (std::size_t e = 0; e < eps.size(); ++e) EXPECT_NEAR(a.values[e], b.values[e], 1e-12);
}

TEST(TotalDos, DiagonalModelIsBroadenedDelta) {
  const double e0 = 0.7;
  const auto m = builtin_model("tbg", {{"twist_degrees", 6.0}, {"t_intra", 0.0}, {"t_perp", 0.0},
                                       {"onsite", e0}});
  const auto w = SpectralWindow::from_bound(2.0);
  const auto eps = linspace(-1.9, 1.9, 381);
  const auto curve = total_dos(m, w, 3 * kA, 256, 1, eps);
  const auto peak = std::max_element(curve.values.begin(), curve.values.end()) - curve.values.begin();
  EXPECT_LE(std::abs(eps[static_cast<std::size_t>(peak)] - e0), eps[1] - eps[0]);
}

TEST(TotalDos, ThreadCountDoesNotChangeBits) {
  const auto m = tbg6();
  const auto w = spectral_bound(m);
  const auto eps = default_energy_grid(w, 101);
  const auto one = total_dos(m, w, 5 * kA, 64, 3, eps, {1, KernelVariant::jackson});
  const auto two = total_dos(m, w, 5 * kA, 64, 3, eps, {2, KernelVariant::jackson});
  EXPECT_EQ(one.values, two.values);
}

TEST(TotalDos, RejectsBadInput) {
  const auto m = tbg6();
  const auto w = spectral_bound(m);
  const std::vector<double> ok{0.0};
  EXPECT_THROW(total_dos(m, w, 0.0, 8, 1, ok), InvalidParameter);
  EXPECT_THROW(total_dos(m, w, kA, 0, 1, ok), InvalidParameter);
  EXPECT_THROW(total_dos(m, w, kA, 8, 0, ok), InvalidParameter);
  const std::vector<double> outside{0.0, 1.0 / w.eta};
  EXPECT_THROW(total_dos(m, w, kA, 8, 1, outside), OutOfWindow);
  EXPECT_THROW(default_energy_grid(w, 10, 1.0), InvalidParameter);
}

TEST(Observables, MonolayerParticleHoleSymmetry) {
  const auto m = monolayer();
  const auto w = spectral_bound(m);
  const auto eps = default_energy_grid(w, 2001, 0.999);
  const auto curve = total_dos(m, w, 12 * kA, 256, 1, eps);
  EXPECT_NEAR(observable(curve, Observable::custom([](double e) { return e; })), 0.0, 1e-6);
  EXPECT_NEAR(observable(curve, Observable::fermi_occupation(0.0, 0.025)), 0.5, 1e-3);
  EXPECT_NEAR(observable(curve, Observable::indicator(-100.0, 100.0)), 1.0, 1e-3);
  EXPECT_LT(observable(curve, Observable::fermi_energy_weighted()), 0.0);
}

TEST(Observables, FactoryValuesAndErrors) {
  const auto f = Observable::fermi_occupation(0.1, 0.05);
  EXPECT_DOUBLE_EQ(f.evaluator(0.1), 0.5);
  const auto fe = Observable::fermi_energy_weighted(0.0, 0.05);
  EXPECT_DOUBLE_EQ(fe.evaluator(0.0), 0.0);
  EXPECT_NEAR(fe.evaluator(-2.0), -2.0, 1e-15);
  const auto ind = Observable::indicator(-1.0, 1.0);
  EXPECT_EQ(ind.evaluator(1.0), 1.0);
  EXPECT_EQ(ind.evaluator(1.0000001), 0.0);
  EXPECT_THROW(Observable::fermi_occupation(0.0, 0.0), InvalidParameter);
  EXPECT_THROW(Observable::indicator(1.0, -1.0), InvalidParameter);
  EXPECT_THROW(Observable::custom({}), InvalidParameter);
  DosCurve c;
  c.epsilons = {0.0, 1.0};
  c.values = {1.0, 1.0};
  EXPECT_THROW(observable(c, Observable::custom([](double e) { return 1.0 / e; })),
               NumericalBreakdown);
}

TEST(Ldos, DecoupledIsShiftIndependent) {
  const auto m = tbg6(0.0);
  const auto eps = linspace(-5.0, 5.0, 41);
  const auto grid = shift_grid(m.lattice(2), 3);
  const auto f = ldos_field(m, 6 * kA, 64, 1, 0, grid, eps);
  ASSERT_EQ(f.values.size(), 9u);
  for (const auto& row : f.values) {
    for (std::size_t e = 0; e < eps.size(); ++e) EXPECT_NEAR(row[e], f.values[0][e], 1e-12);
  }
}

TEST(Ldos, CoupledDependsOnShift) {
  const auto m = tbg6();
  const auto eps = linspace(-5.0, 5.0, 41);
  const auto grid = shift_grid(m.lattice(2), 2);
  const auto f = ldos_field(m, 6 * kA, 64, 1, 0, grid, eps);
  double diff = 0.0;
  for (std::size_t e = 0; e < eps.size(); ++e) diff = std::max(diff, std::abs(f.values[1][e] - f.values[0][e]));
  EXPECT_GT(diff, 1e-4);
}

TEST(Ldos, RejectsOrbitalOnWrongSheet) {
  const auto m = tbg6();
  const std::vector<double> eps{0.0};
  const auto grid = shift_grid(m.lattice(2), 1);
  EXPECT_THROW(ldos_field(m, 3 * kA, 8, 1, 2, grid, eps), InvalidParameter);
  EXPECT_THROW(ldos_field(m, 3 * kA, 8, 3, 0, grid, eps), InvalidParameter);
}

TEST(Convergence, RadiusErrorsDecayExponentially) {
  const auto m = tbg6();
  std::vector<double> rs;
  for (int k = 4; k <= 18; k += 2) rs.push_back(k * kA);
  const auto rep = converge_r(m, 64, Vec2::Zero(), rs, 0.0);
  EXPECT_EQ(rep.rate, RateClass::exponential) << rep.fitted_slope << " " << rep.r_squared;
  EXPECT_LT(rep.fitted_slope, 0.0);
  EXPECT_GT(rep.r_squared, 0.9);
  EXPECT_FALSE(rep.absolute_error);
  for (std::size_t i = 1; i < rep.samples.size(); ++i) {
    EXPECT_LE(rep.samples[i].error, 2.0 * rep.samples[i - 1].error) << i;
  }
  EXPECT_LT(rep.samples.back().error, 1e-10);
}

TEST(Convergence, DecoupledRadiusErrorVanishesBeyondCutoff) {
  const auto m = tbg6(0.0);
  const std::vector<double> rs{20 * kA, 22 * kA, 24 * kA, 26 * kA};
  const auto rep = converge_r(m, 16, Vec2::Zero(), rs, 1.0);
  for (const auto& s : rep.samples) EXPECT_LE(s.error, 1e-12);
}

TEST(Convergence, QuadratureErrorFallsWithNdisc) {
  const auto m = tbg6();
  const std::vector<int> nd{1, 2, 3, 4};
  const auto rep = quadrature_error_probe(m, 10 * kA, 48, nd, 5.0);
  ASSERT_EQ(rep.samples.size(), 4u);
  for (std::size_t i = 1; i < rep.samples.size(); ++i) {
    EXPECT_LT(rep.samples[i].error, rep.samples[i - 1].error);
  }
}

TEST(Convergence, QuadratureErrorZeroWhenDecoupled) {
  const auto m = tbg6(0.0);
  const std::vector<int> nd{1, 2, 3};
  const auto rep = quadrature_error_probe(m, 6 * kA, 32, nd, 1.0);
  for (const auto& s : rep.samples) EXPECT_LE(s.error, 1e-12);
}

TEST(Convergence, CoupledParameters) {
  EXPECT_NEAR(coupled_radius(0.1, 32), 0.1 * 32 * std::log(32.0), 1e-14);
  EXPECT_EQ(coupled_n_disc(0.015, 32), 2);
  EXPECT_EQ(coupled_n_disc(0.015, 128), 9);
  EXPECT_EQ(coupled_n_disc(1e-6, 32), 1);
}

TEST(Convergence, RejectsShortOrUnsortedLists) {
  const auto m = tbg6();
  const std::vector<double> three{4 * kA, 5 * kA, 6 * kA};
  EXPECT_THROW(converge_r(m, 16, Vec2::Zero(), three, 0.0), InvalidParameter);
  const std::vector<double> unsorted{4 * kA, 6 * kA, 5 * kA, 7 * kA};
  EXPECT_THROW(converge_r(m, 16, Vec2::Zero(), unsorted, 0.0), InvalidParameter);
  const std::vector<int> ps{8, 16, 32, 24};
  EXPECT_THROW(converge_coupled(m, ps, 0.1, 0.01, 0.0), InvalidParameter);
  const std::vector<int> nd{2, 1};
  EXPECT_THROW(quadrature_error_probe(m, 3 * kA, 8, nd, 0.0), InvalidParameter);
}

TEST(Convergence, Names) {
  EXPECT_STREQ(to_string(ConvergenceAxis::p_coupled), "p_coupled");
  EXPECT_STREQ(to_string(RateClass::consistent_with_p2), "consistent_with_p^-2");
}
