#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "incommdos/hamiltonian.hpp"

namespace incomm {

/// Damping factors for the Chebyshev series.
///
/// `jackson` is the standard Jackson kernel,
///   g_m = (2 - delta_m0) [(p-m+1) cos(pi m/(p+1)) + sin(pi m/(p+1)) cot(pi/(p+1))] / (p+1).
/// `printed_arctan` replaces cot(pi/(p+1)) by arctan(pi/(p+1)); it keeps g_0 = 1 and
/// the unit integral but splits a delta into two humps, so it is never the default.
enum class KernelVariant { jackson, printed_arctan };

struct KernelCoefficients {
  int p = 0;
  std::vector<double> g;  // length p + 1, g[0] == 1
  KernelVariant variant = KernelVariant::jackson;
};

KernelCoefficients jackson_coefficients(int p, KernelVariant variant = KernelVariant::jackson);

/// Diagonal Chebyshev moments mu[m] = [T_m(eta H)]_{0a,0a}, m = 0..p.
struct MomentTable {
  std::vector<double> mu;
  int j = 1;
  std::size_t alpha = 0;
  Vec2 shift = Vec2::Zero();
  double r = 0.0;
  double eta = 1.0;

  [[nodiscard]] int order() const { return static_cast<int>(mu.size()) - 1; }
};

/// Three-term recursion v_{m+1} = 2 eta H v_m - v_{m-1} started from e_{0 alpha}.
MomentTable chebyshev_moments(const ClusterHamiltonian& h, std::size_t alpha, int p);

struct LdosProvenance {
  int j = 1;
  std::size_t alpha = 0;
  Vec2 shift = Vec2::Zero();
  double r = 0.0;
  int p = 0;
};

struct LdosSample {
  double epsilon;  // eV
  double value;    // 1/eV
  LdosProvenance provenance;
};

/// Energies must satisfy |eta * epsilon| <= 1 - kWindowGuard.
inline constexpr double kWindowGuard = 1e-6;

/// T_0(x) .. T_p(x) by the three-term recursion.
std::vector<double> chebyshev_values(double x, int p);

/// Kernel-damped Chebyshev reconstruction
///   eta / (pi sqrt(1 - (eta e)^2)) sum_m g_m T_m(eta e) mu_m
/// at each energy. Throws OutOfWindow naming every offending energy.
std::vector<LdosSample> reconstruct(const MomentTable& moments, const KernelCoefficients& kernel,
                                    std::span<const double> epsilons);

/// Same as reconstruct() without the provenance records.
std::vector<double> reconstruct_values(const MomentTable& moments,
                                       const KernelCoefficients& kernel,
                                       std::span<const double> epsilons);

/// Eigenvalues and centre-orbital weights |<e_{0a}, psi_i>|^2 of a dense eigendecomposition.
struct LocalSpectrum {
  std::vector<double> eigenvalues;
  std::vector<double> weights;

  /// sum_i weights[i] * g(eigenvalues[i]); throws NumericalBreakdown on non-finite g.
  [[nodiscard]] double evaluate(const std::function<double(double)>& g) const;
};

LocalSpectrum local_spectrum(const ClusterHamiltonian& h, std::size_t alpha);

/// [g(H)]_{0a,0a} from a full eigendecomposition (dimension <= kDenseLimit).
double dense_oracle(const ClusterHamiltonian& h, std::size_t alpha,
                    const std::function<double(double)>& g);

/// Moment table CSV: one "# key=value ..." provenance line, a "m,mu" header, then rows.
void write_moments_csv(std::ostream& out, const MomentTable& moments);
MomentTable read_moments_csv(std::istream& in);

}  // namespace incomm
