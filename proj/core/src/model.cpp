#include "incommdos/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <utility>

#include "incommdos/errors.hpp"

namespace incomm {

HoppingFunction::HoppingFunction(Evaluator evaluator, double decay_rate, double decay_amplitude,
                                 double cutoff_radius)
    : evaluator_(std::move(evaluator)),
      decay_rate_(decay_rate),
      decay_amplitude_(decay_amplitude),
      cutoff_(cutoff_radius),
      cutoff2_(cutoff_radius * cutoff_radius) {
  if (!evaluator_) throw InvalidParameter("hopping evaluator is empty");
  if (!(decay_rate > 0.0) || !(decay_amplitude > 0.0) || !std::isfinite(decay_amplitude)) {
    throw InvalidParameter("hopping decay metadata must be positive and finite");
  }
  if (!(cutoff_radius > 0.0) || !std::isfinite(cutoff_radius)) {
    throw InvalidParameter("hopping cutoff radius must be positive and finite");
  }
}

TBModel::TBModel(LatticeBasis lattice1, LatticeBasis lattice2, OrbitalSet orbitals1,
                 OrbitalSet orbitals2, HoppingFunction hopping, std::string label)
    : lattice1_(std::move(lattice1)),
      lattice2_(std::move(lattice2)),
      orbitals1_(std::move(orbitals1)),
      orbitals2_(std::move(orbitals2)),
      hopping_(std::move(hopping)),
      label_(std::move(label)) {
  if (orbitals1_.sheet != 1 || orbitals2_.sheet != 2) {
    throw InvalidParameter("orbital sets must be numbered sheet 1 and sheet 2");
  }
  std::set<std::string> ids;
  for (const auto* set : {&orbitals1_, &orbitals2_}) {
    for (const auto& orb : set->orbitals) {
      if (!ids.insert(orb.id).second) {
        throw InvalidParameter("orbital id '" + orb.id + "' is not unique across sheets");
      }
      if (!orb.tau.allFinite() || !std::isfinite(orb.onsite_energy)) {
        throw InvalidParameter("orbital '" + orb.id + "' has non-finite data");
      }
      sheet_of_.push_back(set->sheet);
    }
  }
  if (sheet_of_.empty()) throw InvalidParameter("model has no orbitals");
}

const LatticeBasis& TBModel::lattice(int sheet) const {
  if (sheet == 1) return lattice1_;
  if (sheet == 2) return lattice2_;
  throw InvalidParameter("sheet index must be 1 or 2");
}

const OrbitalSet& TBModel::orbitals(int sheet) const {
  if (sheet == 1) return orbitals1_;
  if (sheet == 2) return orbitals2_;
  throw InvalidParameter("sheet index must be 1 or 2");
}

std::size_t TBModel::global_index(int sheet, std::size_t local) const {
  if (local >= orbital_count(sheet)) throw InvalidParameter("orbital index out of range");
  return sheet == 1 ? local : orbitals1_.orbitals.size() + local;
}

const Orbital& TBModel::orbital(std::size_t global) const {
  const std::size_t n1 = orbitals1_.orbitals.size();
  if (global < n1) return orbitals1_.orbitals[global];
  return orbitals2_.orbitals.at(global - n1);
}

std::optional<std::size_t> TBModel::find_orbital(const std::string& id) const {
  for (std::size_t g = 0; g < orbital_count(); ++g) {
    if (orbital(g).id == id) return g;
  }
  return std::nullopt;
}

double TBModel::nu() const {
  const double a1 = static_cast<double>(orbital_count(1));
  const double a2 = static_cast<double>(orbital_count(2));
  return 1.0 / (a2 * lattice1_.cell_area() + a1 * lattice2_.cell_area());
}

namespace {

void check_bilayer_params(const BilayerParams& p) {
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(p.lattice_constant)) throw InvalidParameter("lattice_constant must be positive");
  if (!std::isfinite(p.twist_degrees)) throw InvalidParameter("twist_degrees must be finite");
  if (!std::isfinite(p.t_intra) || !std::isfinite(p.t_perp) || !std::isfinite(p.onsite)) {
    throw InvalidParameter("hopping amplitudes must be finite");
  }
  if (!positive(p.interlayer_distance)) {
    throw InvalidParameter("interlayer_distance must be positive");
  }
  if (!positive(p.decay_length)) throw InvalidParameter("decay_length must be positive");
  if (!positive(p.cutoff)) throw InvalidParameter("cutoff must be positive");
}

// max over 0 <= rho <= cutoff of |t_perp| exp(-(d - d0)/delta0 + gamma rho).
double interlayer_envelope(const BilayerParams& p, double gamma) {
  if (p.t_perp == 0.0) return 0.0;
  const double d0 = p.interlayer_distance;
  const double k = gamma * p.decay_length;
  double rho = p.cutoff;
  if (k < 1.0) rho = std::min(p.cutoff, k * d0 / std::sqrt(1.0 - k * k));
  const double d = std::hypot(rho, d0);
  return std::abs(p.t_perp) * std::exp(-(d - d0) / p.decay_length + gamma * rho);
}

Orbital graphene_site(const std::string& id, const LatticeBasis& lattice, double frac,
                      double onsite) {
  return {id, lattice.to_cartesian(Vec2(frac, frac)), onsite};
}

}  // namespace

HoppingFunction make_bilayer_hopping(const OrbitalSet& orbitals1, const OrbitalSet& orbitals2,
                                     double nn_distance, const BilayerParams& params) {
  check_bilayer_params(params);
  if (!(nn_distance > 0.0)) throw InvalidParameter("nearest-neighbour distance must be positive");

  std::vector<int> sheet;
  std::vector<double> onsite;
  double max_onsite = 0.0;
  for (const auto* set : {&orbitals1, &orbitals2}) {
    for (const auto& orb : set->orbitals) {
      sheet.push_back(set->sheet);
      onsite.push_back(orb.onsite_energy);
      max_onsite = std::max(max_onsite, std::abs(orb.onsite_energy));
    }
  }

  const double gamma = kGrapheneDecayRate;
  double amplitude = max_onsite;
  if (params.t_intra != 0.0 && nn_distance <= params.cutoff) {
    amplitude = std::max(amplitude, std::abs(params.t_intra) * std::exp(gamma * nn_distance));
  }
  amplitude = std::max(amplitude, interlayer_envelope(params, gamma));
  // Slack so the envelope is met with equality at the bond length despite rounding.
  amplitude = amplitude > 0.0 ? amplitude * (1.0 + 1e-9) : std::numeric_limits<double>::min();

  const double nn_tol = 1e-6 * nn_distance;
  const double t_intra = params.t_intra;
  const double t_perp = params.t_perp;
  const double d0 = params.interlayer_distance;
  const double delta0 = params.decay_length;

  auto evaluator = [=](std::size_t a, std::size_t b, const Vec2& x) -> double {
    const double rho2 = x.squaredNorm();
    if (sheet[a] == sheet[b]) {
      if (a == b && rho2 < 1e-18) return onsite[a];
      if (std::abs(std::sqrt(rho2) - nn_distance) <= nn_tol) return t_intra;
      return 0.0;
    }
    if (t_perp == 0.0) return 0.0;
    const double d = std::sqrt(rho2 + d0 * d0);
    return t_perp * std::exp(-(d - d0) / delta0);
  };
  return HoppingFunction(evaluator, gamma, amplitude, params.cutoff);
}

TBModel twisted_bilayer_graphene(const BilayerParams& params) {
  check_bilayer_params(params);
  const auto lattice2 = LatticeBasis::hexagonal(params.lattice_constant);
  const auto lattice1 = lattice2.rotated(params.twist_degrees * std::numbers::pi / 180.0);

  OrbitalSet orbitals1{1,
                       {graphene_site("A1", lattice1, 0.0, params.onsite),
                        graphene_site("B1", lattice1, 1.0 / 3.0, params.onsite)}};
  OrbitalSet orbitals2{2,
                       {graphene_site("A2", lattice2, 0.0, params.onsite),
                        graphene_site("B2", lattice2, 1.0 / 3.0, params.onsite)}};
  const double nn = params.lattice_constant / std::sqrt(3.0);
  auto hopping = make_bilayer_hopping(orbitals1, orbitals2, nn, params);
  return TBModel(lattice1, lattice2, std::move(orbitals1), std::move(orbitals2),
                 std::move(hopping), "tbg");
}

TBModel monolayer_graphene(const BilayerParams& params) {
  check_bilayer_params(params);
  const auto lattice = LatticeBasis::hexagonal(params.lattice_constant);
  OrbitalSet orbitals1{1,
                       {graphene_site("A1", lattice, 0.0, params.onsite),
                        graphene_site("B1", lattice, 1.0 / 3.0, params.onsite)}};
  OrbitalSet orbitals2{2, {}};
  const double nn = params.lattice_constant / std::sqrt(3.0);
  auto hopping = make_bilayer_hopping(orbitals1, orbitals2, nn, params);
  return TBModel(lattice, lattice, std::move(orbitals1), std::move(orbitals2),
                 std::move(hopping), "monolayer_graphene");
}

TBModel builtin_model(const std::string& name, const std::map<std::string, double>& params) {
  BilayerParams p;
  const std::map<std::string, double*> fields{
      {"twist_degrees", &p.twist_degrees}, {"lattice_constant", &p.lattice_constant},
      {"t_intra", &p.t_intra},             {"t_perp", &p.t_perp},
      {"interlayer_distance", &p.interlayer_distance},
      {"decay_length", &p.decay_length},   {"cutoff", &p.cutoff},
      {"onsite", &p.onsite}};
  for (const auto& [key, value] : params) {
    const auto it = fields.find(key);
    if (it == fields.end()) throw InvalidParameter("unknown model parameter '" + key + "'");
    *it->second = value;
  }
  if (name == "tbg") {
    if (!params.contains("twist_degrees")) {
      throw InvalidParameter("model 'tbg' requires twist_degrees");
    }
    return twisted_bilayer_graphene(p);
  }
  if (name == "monolayer_graphene") {
    return monolayer_graphene(p);
  }
  throw InvalidParameter("unknown built-in model '" + name + "'");
}

SpectralWindow SpectralWindow::from_bound(double e_bound) {
  if (!(e_bound > 0.0) || !std::isfinite(e_bound)) {
    throw ModelValidation("spectral bound must be positive and finite");
  }
  return {e_bound, 1.0 / e_bound};
}

namespace {

// Sum of |h(alpha, alpha', c - R' - tau_alpha')| over every lattice point R' of `sheet`.
double row_sum_on_sheet(const TBModel& model, std::size_t alpha, int sheet, const Vec2& c) {
  const auto& lattice = model.lattice(sheet);
  const auto& hop = model.hopping();
  const double cut = hop.cutoff_radius();
  double sum = 0.0;
  for (std::size_t local = 0; local < model.orbital_count(sheet); ++local) {
    const std::size_t alpha_prime = model.global_index(sheet, local);
    const Vec2 centre = c - model.orbital(alpha_prime).tau;
    const Vec2 f = lattice.to_fractional(centre);
    const auto ext = lattice.index_extent(cut);
    const int lo1 = static_cast<int>(std::floor(f[0] - ext[0]));
    const int hi1 = static_cast<int>(std::ceil(f[0] + ext[0]));
    const int lo2 = static_cast<int>(std::floor(f[1] - ext[1]));
    const int hi2 = static_cast<int>(std::ceil(f[1] + ext[1]));
    for (int n1 = lo1; n1 <= hi1; ++n1) {
      for (int n2 = lo2; n2 <= hi2; ++n2) {
        sum += std::abs(hop(alpha, alpha_prime, centre - lattice.point({n1, n2})));
      }
    }
  }
  return sum;
}

}  // namespace

SpectralWindow spectral_bound(const TBModel& model) {
  double worst = 0.0;
  for (int s = 1; s <= 2; ++s) {
    const int o = other_sheet(s);
    const bool coupled = model.orbital_count(o) > 0;
    const auto shifts = shift_grid(model.lattice(o), coupled ? 16 : 1);
    for (std::size_t local = 0; local < model.orbital_count(s); ++local) {
      const std::size_t alpha = model.global_index(s, local);
      const Vec2 tau = model.orbital(alpha).tau;
      const double same = row_sum_on_sheet(model, alpha, s, tau);
      for (const auto& b : shifts.points) {
        const double total = same + (coupled ? row_sum_on_sheet(model, alpha, o, tau - b.b) : 0.0);
        if (!std::isfinite(total)) {
          throw ModelValidation("divergent Gershgorin row sum for orbital '" +
                                model.orbital(alpha).id + "'");
        }
        worst = std::max(worst, total);
      }
    }
  }
  // A vanishing Hamiltonian has its spectrum at 0; any positive window is valid.
  if (worst == 0.0) worst = 1.0;
  return SpectralWindow::from_bound(kSpectralSafety * worst);
}

DecayReport validate_decay(const HoppingFunction& hopping, std::size_t orbital_count,
                           int samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidParameter("validate_decay needs at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double cut = hopping.cutoff_radius();
  const double amp = hopping.decay_amplitude();
  const double rate = hopping.decay_rate();

  DecayReport report;
  for (std::size_t a = 0; a < orbital_count; ++a) {
    for (std::size_t b = 0; b < orbital_count; ++b) {
      for (int s = 0; s < samples; ++s) {
        const double rho = cut * std::sqrt(unit(rng));
        const double theta = 2.0 * std::numbers::pi * unit(rng);
        const Vec2 x(rho * std::cos(theta), rho * std::sin(theta));
        const double ratio = std::abs(hopping(a, b, x)) / (amp * std::exp(-rate * rho));
        if (ratio > report.max_ratio || !std::isfinite(ratio)) {
          report.max_ratio = ratio;
          report.worst_alpha = a;
          report.worst_alpha_prime = b;
          report.worst_x = x;
        }
      }
    }
  }
  report.pass = std::isfinite(report.max_ratio) && report.max_ratio <= 1.0;
  return report;
}

}  // namespace incomm
