#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "incommdos/geometry.hpp"

namespace incomm {

struct Orbital {
  std::string id;
  Vec2 tau = Vec2::Zero();     // in-cell offset (Angstrom)
  double onsite_energy = 0.0;  // eV
};

struct OrbitalSet {
  int sheet = 1;
  std::vector<Orbital> orbitals;
};

/// Hopping h_{a a'}(x) between orbitals given by model-wide orbital indices
/// (sheet-1 orbitals first, then sheet-2). Values are in eV and vanish exactly
/// beyond `cutoff_radius`. The decay metadata promises |h(x)| <= C exp(-gamma |x|).
class HoppingFunction {
 public:
  using Evaluator = std::function<double(std::size_t, std::size_t, const Vec2&)>;

  HoppingFunction(Evaluator evaluator, double decay_rate, double decay_amplitude,
                  double cutoff_radius);

  double operator()(std::size_t alpha, std::size_t alpha_prime, const Vec2& x) const {
    if (x.squaredNorm() > cutoff2_) return 0.0;
    return evaluator_(alpha, alpha_prime, x);
  }

  [[nodiscard]] double decay_rate() const { return decay_rate_; }
  [[nodiscard]] double decay_amplitude() const { return decay_amplitude_; }
  [[nodiscard]] double cutoff_radius() const { return cutoff_; }

 private:
  Evaluator evaluator_;
  double decay_rate_;
  double decay_amplitude_;
  double cutoff_;
  double cutoff2_;
};

/// Two-sheet tight-binding model. Immutable after construction.
class TBModel {
 public:
  /// Throws InvalidParameter on duplicate orbital ids or misnumbered sheets.
  TBModel(LatticeBasis lattice1, LatticeBasis lattice2, OrbitalSet orbitals1,
          OrbitalSet orbitals2, HoppingFunction hopping, std::string label);

  [[nodiscard]] const LatticeBasis& lattice(int sheet) const;
  [[nodiscard]] const OrbitalSet& orbitals(int sheet) const;
  [[nodiscard]] const HoppingFunction& hopping() const { return hopping_; }
  [[nodiscard]] const std::string& label() const { return label_; }

  [[nodiscard]] std::size_t orbital_count() const { return sheet_of_.size(); }
  [[nodiscard]] std::size_t orbital_count(int sheet) const { return orbitals(sheet).orbitals.size(); }
  /// Model-wide index of local orbital `local` on `sheet`.
  [[nodiscard]] std::size_t global_index(int sheet, std::size_t local) const;
  [[nodiscard]] int sheet_of(std::size_t global) const { return sheet_of_.at(global); }
  [[nodiscard]] const Orbital& orbital(std::size_t global) const;
  [[nodiscard]] std::optional<std::size_t> find_orbital(const std::string& id) const;

  /// Normalisation 1 / (|A2| |Gamma1| + |A1| |Gamma2|) of the shift-integral formula.
  [[nodiscard]] double nu() const;

 private:
  LatticeBasis lattice1_;
  LatticeBasis lattice2_;
  OrbitalSet orbitals1_;
  OrbitalSet orbitals2_;
  HoppingFunction hopping_;
  std::string label_;
  std::vector<int> sheet_of_;
};

/// Opposite sheet index: 1 <-> 2.
constexpr int other_sheet(int sheet) { return sheet == 1 ? 2 : 1; }

/// Parameters of the graphene-family model: first-neighbour intralayer hopping
/// plus isotropic exponential interlayer hopping
/// t(d) = t_perp exp(-(d - d0) / delta0), d = sqrt(|x|^2 + d0^2).
struct BilayerParams {
  double lattice_constant = 2.46;     // Angstrom
  double twist_degrees = 0.0;         // sheet 1 = R(twist) sheet 2
  double t_intra = -2.7;              // eV
  double t_perp = 0.48;               // eV
  double interlayer_distance = 3.35;  // Angstrom, d0
  double decay_length = 0.32;         // Angstrom, delta0
  double cutoff = 8.0;                // Angstrom, in-plane
  double onsite = 0.0;                // eV
};

/// Decay rate used for the analytic envelope of the graphene-family hoppings (1/Angstrom).
inline constexpr double kGrapheneDecayRate = 1.0;

/// First-neighbour + exponential-interlayer hopping over arbitrary orbital sets.
/// `nn_distance` is the intralayer first-neighbour bond length.
HoppingFunction make_bilayer_hopping(const OrbitalSet& orbitals1, const OrbitalSet& orbitals2,
                                     double nn_distance, const BilayerParams& params);

/// Twisted bilayer graphene (two p_z orbitals per sheet).
TBModel twisted_bilayer_graphene(const BilayerParams& params);

/// Monolayer graphene on sheet 1; sheet 2 carries no orbitals.
TBModel monolayer_graphene(const BilayerParams& params);

/// Built-in models by name: "tbg" (requires "twist_degrees") or "monolayer_graphene".
/// Recognised keys: twist_degrees, lattice_constant, t_intra, t_perp,
/// interlayer_distance, decay_length, cutoff, onsite.
TBModel builtin_model(const std::string& name, const std::map<std::string, double>& params);

struct SpectralWindow {
  double e_bound;  // eV, >= sup ||H_{r,j}(b)||_2
  double eta;      // 1 / e_bound

  static SpectralWindow from_bound(double e_bound);
};

inline constexpr double kSpectralSafety = 1.05;

/// Gershgorin bound on every cluster Hamiltonian of the model: the largest
/// absolute row sum over the infinite lattices, sampled over a 16 x 16 grid of
/// relative shifts, times kSpectralSafety.
SpectralWindow spectral_bound(const TBModel& model);

struct DecayReport {
  double max_ratio = 0.0;  // max |h(x)| / (C exp(-gamma |x|))
  bool pass = true;
  std::size_t worst_alpha = 0;
  std::size_t worst_alpha_prime = 0;
  Vec2 worst_x = Vec2::Zero();
};

/// Samples `samples` random points of the cutoff disc for every orbital pair.
DecayReport validate_decay(const HoppingFunction& hopping, std::size_t orbital_count,
                           int samples, std::uint64_t seed = 0x5eed);

}  // namespace incomm
