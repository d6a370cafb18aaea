#include "incommdos/dos.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "incommdos/errors.hpp"
#include "incommdos/hamiltonian.hpp"
#include "incommdos/numeric.hpp"
#include "incommdos/parallel.hpp"

namespace incomm {

std::vector<double> default_energy_grid(const SpectralWindow& window, std::size_t count,
                                        double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw InvalidParameter("energy grid fraction must lie in (0, 1)");
  }
  const double edge = fraction * window.e_bound;
  return linspace(-edge, edge, count);
}

namespace {

void check_window(const SpectralWindow& window, std::span<const double> epsilons) {
  const double limit = 1.0 - kWindowGuard;
  for (const double e : epsilons) {
    if (!(std::abs(window.eta * e) <= limit)) {
      std::ostringstream os;
      os.precision(17);
      os << "energy " << e << " eV lies outside the scaled window (|eta e| <= " << limit
         << ", eta = " << window.eta << ")";
      throw OutOfWindow(os.str());
    }
  }
}

void check_dos_params(double r, int p, int n_disc) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidParameter("r must be positive");
  if (p < 1) throw InvalidParameter("p must be at least 1");
  if (n_disc < 1) throw InvalidParameter("n_disc must be at least 1");
}

}  // namespace

DosCurve total_dos(const TBModel& model, double r, int p, int n_disc,
                   std::span<const double> epsilons, const ComputeOptions& options) {
  return total_dos(model, spectral_bound(model), r, p, n_disc, epsilons, options);
}

DosCurve total_dos(const TBModel& model, const SpectralWindow& window, double r, int p,
                   int n_disc, std::span<const double> epsilons, const ComputeOptions& options) {
  check_dos_params(r, p, n_disc);
  check_window(window, epsilons);
  const auto kernel = jackson_coefficients(p, options.kernel);

  struct Job {
    int j;
    ShiftVector shift;
  };
  std::vector<Job> jobs;
  std::array<std::size_t, 3> first_job{};
  for (int j = 1; j <= 2; ++j) {
    first_job[j - 1] = jobs.size();
    if (model.orbital_count(j) == 0) continue;
    const auto grid = shift_grid(model.lattice(other_sheet(j)), n_disc);
    for (const auto& b : grid.points) jobs.push_back({j, b});
  }
  first_job[2] = jobs.size();

  // ldos[job][local orbital][energy]
  std::vector<std::vector<std::vector<double>>> ldos(jobs.size());
  parallel_for(jobs.size(), options.threads, [&](std::size_t i) {
    const auto& job = jobs[i];
    const auto h = assemble(model, r, job.j, job.shift, window);
    auto& slot = ldos[i];
    slot.resize(model.orbital_count(job.j));
    for (std::size_t a = 0; a < slot.size(); ++a) {
      const auto moments = chebyshev_moments(h, model.global_index(job.j, a), p);
      slot[a] = reconstruct_values(moments, kernel, epsilons);
    }
  });

  DosCurve curve;
  curve.epsilons.assign(epsilons.begin(), epsilons.end());
  curve.values.resize(epsilons.size());
  curve.nu = model.nu();
  curve.r = r;
  curve.p = p;
  curve.n_disc = n_disc;
  curve.eta = window.eta;
  curve.model_label = model.label();

  const double n2 = static_cast<double>(n_disc) * n_disc;
  std::vector<double> per_shift;
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    double sheet_sum = 0.0;
    for (int j = 1; j <= 2; ++j) {
      const std::size_t begin = first_job[j - 1];
      const std::size_t end = first_job[j];
      if (begin == end) continue;
      double orbital_sum = 0.0;
      for (std::size_t a = 0; a < model.orbital_count(j); ++a) {
        per_shift.clear();
        for (std::size_t i = begin; i < end; ++i) per_shift.push_back(ldos[i][a][k]);
        orbital_sum += pairwise_sum(per_shift);
      }
      sheet_sum += model.lattice(other_sheet(j)).cell_area() * orbital_sum;
    }
    curve.values[k] = curve.nu / n2 * sheet_sum;
  }
  return curve;
}

Observable Observable::fermi_energy_weighted(double mu, double kT) {
  if (!(kT > 0.0)) throw InvalidParameter("kT must be positive");
  Observable o;
  o.kind = ObservableKind::fermi_energy_weighted;
  o.mu = mu;
  o.kT = kT;
  o.evaluator = [mu, kT](double e) { return e / (1.0 + std::exp((e - mu) / kT)); };
  return o;
}

Observable Observable::fermi_occupation(double mu, double kT) {
  if (!(kT > 0.0)) throw InvalidParameter("kT must be positive");
  Observable o;
  o.kind = ObservableKind::fermi_occupation;
  o.mu = mu;
  o.kT = kT;
  o.evaluator = [mu, kT](double e) { return 1.0 / (1.0 + std::exp((e - mu) / kT)); };
  return o;
}

Observable Observable::indicator(double lo, double hi) {
  if (!(lo <= hi)) throw InvalidParameter("indicator needs lo <= hi");
  Observable o;
  o.kind = ObservableKind::indicator;
  o.evaluator = [lo, hi](double e) { return (e >= lo && e <= hi) ? 1.0 : 0.0; };
  return o;
}

Observable Observable::custom(std::function<double(double)> g) {
  if (!g) throw InvalidParameter("custom observable needs an evaluator");
  Observable o;
  o.kind = ObservableKind::custom;
  o.evaluator = std::move(g);
  return o;
}

double observable(const DosCurve& curve, const Observable& obs) {
  if (!obs.evaluator) throw InvalidParameter("observable has no evaluator");
  std::vector<double> integrand(curve.values.size());
  for (std::size_t k = 0; k < integrand.size(); ++k) {
    const double g = obs.evaluator(curve.epsilons[k]);
    if (!std::isfinite(g)) {
      throw NumericalBreakdown("observable is not finite at energy " +
                               std::to_string(curve.epsilons[k]));
    }
    integrand[k] = curve.values[k] * g;
  }
  return trapezoid(curve.epsilons, integrand);
}

LdosField ldos_field(const TBModel& model, double r, int p, int j, std::size_t alpha,
                     std::span<const ShiftVector> shifts, std::span<const double> epsilons,
                     const ComputeOptions& options) {
  check_dos_params(r, p, 1);
  if (j != 1 && j != 2) throw InvalidParameter("sheet index j must be 1 or 2");
  if (alpha >= model.orbital_count() || model.sheet_of(alpha) != j) {
    throw InvalidParameter("orbital " + std::to_string(alpha) + " is not on sheet " +
                           std::to_string(j));
  }
  const auto window = spectral_bound(model);
  check_window(window, epsilons);
  const auto kernel = jackson_coefficients(p, options.kernel);

  LdosField field;
  field.shifts.assign(shifts.begin(), shifts.end());
  field.epsilons.assign(epsilons.begin(), epsilons.end());
  field.values.resize(shifts.size());
  field.moments.resize(shifts.size());
  field.j = j;
  field.alpha = alpha;
  field.r = r;
  field.p = p;
  field.eta = window.eta;

  parallel_for(shifts.size(), options.threads, [&](std::size_t i) {
    const auto h = assemble(model, r, j, shifts[i].b, window);
    field.moments[i] = chebyshev_moments(h, alpha, p);
    field.values[i] = reconstruct_values(field.moments[i], kernel, epsilons);
  });
  return field;
}

LdosField ldos_field(const TBModel& model, double r, int p, int j, std::size_t alpha,
                     const ShiftGrid& grid, std::span<const double> epsilons,
                     const ComputeOptions& options) {
  return ldos_field(model, r, p, j, alpha, std::span<const ShiftVector>(grid.points), epsilons,
                    options);
}

double coupled_radius(double c_r, int p) {
  return c_r * p * std::log(static_cast<double>(p));
}

int coupled_n_disc(double c_n, int p) {
  const double n = std::round(c_n * p * std::log(static_cast<double>(p)));
  return std::max(1, static_cast<int>(n));
}

namespace {

void finish_report(ConvergenceReport& report, double reference_value, bool log_parameter) {
  report.reference_value = reference_value;
  report.absolute_error = std::abs(reference_value) < 1e-12;
  std::vector<double> xs, ys;
  for (auto& s : report.samples) {
    const double diff = std::abs(s.value - reference_value);
    s.error = report.absolute_error ? diff : diff / std::abs(reference_value);
    if (s.error > 0.0) {
      xs.push_back(log_parameter ? std::log(s.parameter) : s.parameter);
      ys.push_back(std::log(s.error));
    }
  }
  report.fitted_points = xs.size();
  if (xs.size() >= 2) {
    const auto fit = fit_line(xs, ys);
    report.fitted_slope = fit.slope;
    report.r_squared = fit.r_squared;
  } else {
    report.fitted_slope = std::nan("");
    report.r_squared = 0.0;
  }
  const double slope = report.fitted_slope;
  if (log_parameter) {
    if (slope >= -2.5 && slope <= -1.5) {
      report.rate = RateClass::consistent_with_p2;
    } else if (slope > -1.5 && slope <= -0.5) {
      report.rate = RateClass::consistent_with_lipschitz;
    } else {
      report.rate = RateClass::inconclusive;
    }
  } else {
    report.rate = (slope < 0.0 && report.r_squared > 0.9) ? RateClass::exponential
                                                          : RateClass::inconclusive;
  }
}

void require_increasing(std::span<const double> values, const char* what) {
  if (values.size() < 4) {
    throw InvalidParameter(std::string(what) + " needs at least 4 values");
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) {
      throw InvalidParameter(std::string(what) + " must be strictly increasing");
    }
  }
}

std::vector<double> to_doubles(std::span<const int> values) {
  return {values.begin(), values.end()};
}

}  // namespace

ConvergenceReport converge_r(const TBModel& model, int p, const Vec2& shift,
                             std::span<const double> r_list, double epsilon, int j,
                             std::size_t alpha, const ComputeOptions& options) {
  require_increasing(r_list, "r_list");
  if (alpha >= model.orbital_count() || model.sheet_of(alpha) != j) {
    throw InvalidParameter("orbital " + std::to_string(alpha) + " is not on sheet " +
                           std::to_string(j));
  }
  const auto window = spectral_bound(model);
  const double eps[] = {epsilon};
  check_window(window, eps);
  const auto kernel = jackson_coefficients(p, options.kernel);

  std::vector<double> radii(r_list.begin(), r_list.end());
  const double r_ref = 1.5 * radii.back();
  radii.push_back(r_ref);
  std::vector<double> values(radii.size());
  parallel_for(radii.size(), options.threads, [&](std::size_t i) {
    const auto h = assemble(model, radii[i], j, shift, window);
    values[i] = reconstruct_values(chebyshev_moments(h, alpha, p), kernel, eps).front();
  });

  ConvergenceReport report;
  report.axis = ConvergenceAxis::r;
  for (std::size_t i = 0; i < r_list.size(); ++i) {
    report.samples.push_back({r_list[i], values[i], 0.0, r_list[i], p, 0});
  }
  std::ostringstream os;
  os.precision(17);
  os << "LDoS of orbital " << alpha << " on sheet " << j << " at r = " << r_ref << " (1.5 x max r)";
  report.reference = os.str();
  finish_report(report, values.back(), false);
  return report;
}

ConvergenceReport converge_coupled(const TBModel& model, std::span<const int> p_list,
                                   double c_r, double c_n, double epsilon,
                                   const ComputeOptions& options) {
  require_increasing(to_doubles(p_list), "p_list");
  if (p_list.front() < 2) throw InvalidParameter("p_list entries must be at least 2");
  if (!(c_r > 0.0) || !(c_n > 0.0)) throw InvalidParameter("c_r and c_n must be positive");
  const auto window = spectral_bound(model);
  const std::vector<double> eps{epsilon};
  check_window(window, eps);

  auto run = [&](int p) {
    const double r = coupled_radius(c_r, p);
    const int n = coupled_n_disc(c_n, p);
    return ConvergenceSample{static_cast<double>(p),
                             total_dos(model, window, r, p, n, eps, options).values.front(),
                             0.0, r, p, n};
  };

  ConvergenceReport report;
  report.axis = ConvergenceAxis::p_coupled;
  for (const int p : p_list) report.samples.push_back(run(p));
  const int p_ref = static_cast<int>(std::ceil(1.5 * p_list.back()));
  const auto ref = run(p_ref);
  std::ostringstream os;
  os.precision(17);
  os << "total DoS at p = " << p_ref << " (1.5 x max p), r = " << ref.r
     << ", n_disc = " << ref.n_disc;
  report.reference = os.str();
  finish_report(report, ref.value, true);
  return report;
}

ConvergenceReport quadrature_error_probe(const TBModel& model, double r, int p,
                                         std::span<const int> n_disc_list, double epsilon,
                                         const ComputeOptions& options) {
  const auto nd = to_doubles(n_disc_list);
  if (nd.empty()) throw InvalidParameter("n_disc_list is empty");
  for (std::size_t i = 1; i < nd.size(); ++i) {
    if (!(nd[i] > nd[i - 1])) throw InvalidParameter("n_disc_list must be strictly increasing");
  }
  const auto window = spectral_bound(model);
  const std::vector<double> eps{epsilon};
  check_window(window, eps);

  ConvergenceReport report;
  report.axis = ConvergenceAxis::n_disc;
  for (const int n : n_disc_list) {
    const double v = total_dos(model, window, r, p, n, eps, options).values.front();
    report.samples.push_back({static_cast<double>(n), v, 0.0, r, p, n});
  }
  const int n_ref = 2 * n_disc_list.back();
  const double ref = total_dos(model, window, r, p, n_ref, eps, options).values.front();
  report.reference = "total DoS at n_disc = " + std::to_string(n_ref) + " (2 x max n_disc)";
  finish_report(report, ref, false);
  return report;
}

const char* to_string(ConvergenceAxis axis) {
  switch (axis) {
    case ConvergenceAxis::r: return "r";
    case ConvergenceAxis::p_coupled: return "p_coupled";
    case ConvergenceAxis::n_disc: return "n_disc";
  }
  return "?";
}

const char* to_string(RateClass rate) {
  switch (rate) {
    case RateClass::exponential: return "exponential";
    case RateClass::consistent_with_p2: return "consistent_with_p^-2";
    case RateClass::consistent_with_lipschitz: return "consistent_with_lipschitz_p^-1";
    case RateClass::inconclusive: return "inconclusive";
  }
  return "?";
}

}  // namespace incomm
