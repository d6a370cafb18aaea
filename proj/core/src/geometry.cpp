#include "incommdos/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "incommdos/errors.hpp"

namespace incomm {

LatticeBasis::LatticeBasis(const Mat2& vectors) : vectors_(vectors) {
  if (!vectors.allFinite()) {
    throw InvalidBasis("lattice basis has non-finite entries");
  }
  const double det = vectors.determinant();
  const double scale = vectors.col(0).norm() * vectors.col(1).norm();
  if (det == 0.0 || std::abs(det) <= 1e-12 * scale) {
    throw InvalidBasis("lattice basis is singular");
  }
  inverse_ = vectors.inverse();
  cell_area_ = std::abs(det);
}

LatticeBasis LatticeBasis::hexagonal(double lattice_constant) {
  if (!(lattice_constant > 0.0)) {
    throw InvalidBasis("lattice constant must be positive");
  }
  Mat2 m;
  m << lattice_constant, 0.5 * lattice_constant, 0.0,
      0.5 * std::sqrt(3.0) * lattice_constant;
  return LatticeBasis(m);
}

LatticeBasis LatticeBasis::rotated(double radians) const {
  Mat2 rot;
  rot << std::cos(radians), -std::sin(radians), std::sin(radians), std::cos(radians);
  return LatticeBasis(rot * vectors_);
}

Vec2 LatticeBasis::point(const LatticeIndex& n) const {
  return vectors_.col(0) * n[0] + vectors_.col(1) * n[1];
}

std::array<double, 2> LatticeBasis::index_extent(double radius) const {
  // n_k = row_k(A^-1) . x, so |n_k - c_k| <= |row_k| * radius.
  return {radius * inverse_.row(0).norm(), radius * inverse_.row(1).norm()};
}

std::vector<SitePoint> sites_in_ball(const LatticeBasis& basis, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw InvalidParameter("ball radius must be positive and finite");
  }
  const auto extent = basis.index_extent(r);
  const int n1_max = static_cast<int>(std::ceil(extent[0]));
  const int n2_max = static_cast<int>(std::ceil(extent[1]));
  // Points this close to the sphere count as on it, so rotated copies of a
  // lattice keep the same shells.
  const double r2 = r * r * (1.0 - kShellTolerance);

  std::vector<SitePoint> sites;
  for (int n1 = -n1_max; n1 <= n1_max; ++n1) {
    for (int n2 = -n2_max; n2 <= n2_max; ++n2) {
      const LatticeIndex n{n1, n2};
      const Vec2 x = basis.point(n);
      if (x.squaredNorm() < r2) {
        sites.push_back({n, x});
      }
    }
  }
  return sites;
}

ShiftVector modulate(const LatticeBasis& basis, const Vec2& u) {
  Vec2 frac = basis.to_fractional(u);
  for (int k = 0; k < 2; ++k) {
    frac[k] -= std::floor(frac[k]);
    // Lattice points reconstructed through A^-1 land a few ulps off an
    // integer; snap them onto the cell origin.
    if (frac[k] >= 1.0 - 1e-12 || frac[k] <= 1e-12) frac[k] = 0.0;
  }
  return {basis.to_cartesian(frac), frac};
}

ShiftGrid shift_grid(const LatticeBasis& basis, int n_disc) {
  if (n_disc < 1) {
    throw InvalidParameter("n_disc must be at least 1");
  }
  ShiftGrid grid{basis, n_disc, {}};
  grid.points.reserve(static_cast<std::size_t>(n_disc) * n_disc);
  const double n = n_disc;
  for (int i1 = 0; i1 < n_disc; ++i1) {
    for (int i2 = 0; i2 < n_disc; ++i2) {
      const Vec2 frac(i1 / n, i2 / n);
      grid.points.push_back({basis.to_cartesian(frac), frac});
    }
  }
  return grid;
}

bool looks_rational(std::span<const double> values, double tolerance, long max_denominator) {
  for (const double x : values) {
    if (!std::isfinite(x)) return false;
    // Continued-fraction convergents give the best approximations per denominator.
    const double whole = std::floor(x);
    double rest = x - whole;
    long p_prev = 1, q_prev = 0;
    long p = static_cast<long>(whole), q = 1;
    bool found = std::abs(x - static_cast<double>(p)) <= tolerance;
    while (!found && rest > 1e-15) {
      const double inv = 1.0 / rest;
      const double a = std::floor(inv);
      rest = inv - a;
      const long ai = static_cast<long>(a);
      const long p_next = ai * p + p_prev;
      const long q_next = ai * q + q_prev;
      if (q_next > max_denominator || q_next <= 0) break;
      p_prev = p;
      q_prev = q;
      p = p_next;
      q = q_next;
      found = std::abs(x - static_cast<double>(p) / static_cast<double>(q)) <= tolerance;
    }
    if (!found) return false;
  }
  return true;
}

FourierModeResult fourier_mode_average(const LatticeBasis& self, const LatticeBasis& other,
                                       const std::array<int, 2>& m, double r) {
  FourierModeResult result;
  const auto sites = sites_in_ball(self, r);
  result.site_count = sites.size();

  // phase(n) = m^T A_other^-1 A_self n = k . n
  const Eigen::RowVector2d mrow(m[0], m[1]);
  const Eigen::RowVector2d k = mrow * other.inverse() * self.matrix();
  const std::array<double, 2> kv{k[0], k[1]};
  result.commensurate = (m[0] != 0 || m[1] != 0) && looks_rational(kv);

  if (m[0] == 0 && m[1] == 0) {
    result.value = 1.0;
    return result;
  }

  double re = 0.0, im = 0.0;
  for (const auto& s : sites) {
    double phase = k[0] * s.n[0] + k[1] * s.n[1];
    phase -= std::floor(phase);
    re += std::cos(2.0 * std::numbers::pi * phase);
    im += std::sin(2.0 * std::numbers::pi * phase);
  }
  const double count = static_cast<double>(sites.size());
  result.value = {re / count, im / count};
  return result;
}

double bin_discrepancy(std::span<const Vec2> fractional_points, int bins) {
  if (bins < 1) throw InvalidParameter("bin count must be positive");
  if (fractional_points.empty()) throw InsufficientSample("no points to bin");

  std::vector<std::size_t> counts(static_cast<std::size_t>(bins) * bins, 0);
  for (const auto& f : fractional_points) {
    int i = static_cast<int>(std::floor(f[0] * bins));
    int j = static_cast<int>(std::floor(f[1] * bins));
    i = std::clamp(i, 0, bins - 1);
    j = std::clamp(j, 0, bins - 1);
    ++counts[static_cast<std::size_t>(i) * bins + j];
  }
  const double total = static_cast<double>(fractional_points.size());
  const double expected = 1.0 / (static_cast<double>(bins) * bins);
  double worst = 0.0;
  for (const auto c : counts) {
    worst = std::max(worst, std::abs(static_cast<double>(c) / total - expected));
  }
  return worst;
}

double equidistribution_discrepancy(const LatticeBasis& self, const LatticeBasis& other,
                                    double r) {
  const auto sites = sites_in_ball(self, r);
  if (sites.size() < 100) {
    throw InsufficientSample("equidistribution needs at least 100 sites, got " +
                             std::to_string(sites.size()));
  }
  std::vector<Vec2> fracs;
  fracs.reserve(sites.size());
  for (const auto& s : sites) {
    fracs.push_back(modulate(other, s.x).frac);
  }
  return bin_discrepancy(fracs, 16);
}

}  // namespace incomm
