#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "incommdos/geometry.hpp"
#include "incommdos/kpm.hpp"
#include "incommdos/model.hpp"

namespace incomm {

struct ComputeOptions {
  int threads = 1;  // 0 = hardware concurrency
  KernelVariant kernel = KernelVariant::jackson;
};

struct DosCurve {
  std::vector<double> epsilons;  // eV
  std::vector<double> values;    // 1/eV
  double nu = 0.0;               // 1/Angstrom^2
  double r = 0.0;                // Angstrom
  int p = 0;
  int n_disc = 0;
  double eta = 0.0;
  std::string model_label;
};

/// `count` uniform energies spanning `fraction` of the scaled window [-1/eta, 1/eta].
std::vector<double> default_energy_grid(const SpectralWindow& window, std::size_t count = 401,
                                        double fraction = 0.98);

/// Total DoS by the shift-grid quadrature
///   D(e) = nu / N^2 sum_j sum_{a in A_j} sum_{b in S_{P_j}} |Gamma_{P_j}| LDoS_a[H_{r,j}(b)](e).
/// Summation order is sheet -> orbital -> shift (pairwise) -> moment, independent of threads.
DosCurve total_dos(const TBModel& model, double r, int p, int n_disc,
                   std::span<const double> epsilons, const ComputeOptions& options = {});
DosCurve total_dos(const TBModel& model, const SpectralWindow& window, double r, int p,
                   int n_disc, std::span<const double> epsilons,
                   const ComputeOptions& options = {});

enum class ObservableKind { fermi_energy_weighted, fermi_occupation, indicator, custom };

struct Observable {
  ObservableKind kind = ObservableKind::custom;
  double mu = 0.0;    // eV
  double kT = 0.025;  // eV
  std::function<double(double)> evaluator;

  /// e / (1 + exp((e - mu) / kT))
  static Observable fermi_energy_weighted(double mu = 0.0, double kT = 0.025);
  /// 1 / (1 + exp((e - mu) / kT))
  static Observable fermi_occupation(double mu = 0.0, double kT = 0.025);
  /// 1 on [lo, hi], 0 elsewhere
  static Observable indicator(double lo, double hi);
  static Observable custom(std::function<double(double)> g);
};

/// Trapezoid quadrature of D(e) g(e) over the curve's energy grid.
double observable(const DosCurve& curve, const Observable& obs);

/// Per-shift LDoS of orbital alpha on sheet j.
struct LdosField {
  std::vector<ShiftVector> shifts;
  std::vector<double> epsilons;
  std::vector<std::vector<double>> values;  // values[shift][energy]
  std::vector<MomentTable> moments;         // one per shift
  int j = 1;
  std::size_t alpha = 0;
  double r = 0.0;
  int p = 0;
  double eta = 0.0;
};

LdosField ldos_field(const TBModel& model, double r, int p, int j, std::size_t alpha,
                     std::span<const ShiftVector> shifts, std::span<const double> epsilons,
                     const ComputeOptions& options = {});
LdosField ldos_field(const TBModel& model, double r, int p, int j, std::size_t alpha,
                     const ShiftGrid& grid, std::span<const double> epsilons,
                     const ComputeOptions& options = {});

enum class ConvergenceAxis { r, p_coupled, n_disc };

enum class RateClass {
  exponential,                // log(error) linear in the parameter
  consistent_with_p2,         // log-log slope in [-2.5, -1.5]
  consistent_with_lipschitz,  // log-log slope in [-1.5, -0.5]
  inconclusive
};

struct ConvergenceSample {
  double parameter;
  double value;  // observed quantity
  double error;  // relative (or absolute, see report) deviation from the reference
  double r = 0.0;
  int p = 0;
  int n_disc = 0;
};

struct ConvergenceReport {
  ConvergenceAxis axis = ConvergenceAxis::r;
  std::vector<ConvergenceSample> samples;
  double fitted_slope = 0.0;
  double r_squared = 0.0;
  std::size_t fitted_points = 0;  // samples with error > 0 used in the fit
  RateClass rate = RateClass::inconclusive;
  double reference_value = 0.0;
  bool absolute_error = false;  // set when |reference| < 1e-12
  std::string reference;        // description of the reference run
};

/// LDoS of (j, alpha, b) at fixed energy versus cluster radius; the reference is the
/// run at 1.5 x max(r_list). Slope fitted to log(error) vs r.
ConvergenceReport converge_r(const TBModel& model, int p, const Vec2& shift,
                             std::span<const double> r_list, double epsilon, int j = 1,
                             std::size_t alpha = 0, const ComputeOptions& options = {});

/// Total DoS at fixed energy with r = c_r p ln p (Angstrom) and
/// n_disc = max(1, round(c_n p ln p)); reference at p_ref = ceil(1.5 max p).
/// Slope fitted to log(error) vs log(p).
ConvergenceReport converge_coupled(const TBModel& model, std::span<const int> p_list,
                                   double c_r, double c_n, double epsilon,
                                   const ComputeOptions& options = {});

/// Total DoS at fixed (r, p, energy) versus n_disc; reference at 2 x max(n_disc_list).
/// Slope fitted to log(error) vs n_disc.
ConvergenceReport quadrature_error_probe(const TBModel& model, double r, int p,
                                         std::span<const int> n_disc_list, double epsilon,
                                         const ComputeOptions& options = {});

/// Coupled-rate parameters used by converge_coupled().
double coupled_radius(double c_r, int p);
int coupled_n_disc(double c_n, int p);

const char* to_string(ConvergenceAxis axis);
const char* to_string(RateClass rate);

}  // namespace incomm
