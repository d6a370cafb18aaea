#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace incomm {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Integer lattice coordinates n of a Bravais site A n.
using LatticeIndex = std::array<int, 2>;

/// 2D Bravais lattice basis. Columns of the matrix are the primitive vectors (Angstrom).
class LatticeBasis {
 public:
  /// Throws InvalidBasis when the matrix is singular or non-finite.
  explicit LatticeBasis(const Mat2& vectors);

  /// Triangular lattice with primitive vectors a(1,0) and a(1/2, sqrt(3)/2).
  static LatticeBasis hexagonal(double lattice_constant);

  /// Basis rotated counter-clockwise by `radians`.
  [[nodiscard]] LatticeBasis rotated(double radians) const;

  [[nodiscard]] const Mat2& matrix() const { return vectors_; }
  [[nodiscard]] const Mat2& inverse() const { return inverse_; }
  [[nodiscard]] double cell_area() const { return cell_area_; }
  /// Length of the first primitive vector.
  [[nodiscard]] double lattice_constant() const { return vectors_.col(0).norm(); }

  [[nodiscard]] Vec2 point(const LatticeIndex& n) const;
  [[nodiscard]] Vec2 to_fractional(const Vec2& x) const { return inverse_ * x; }
  [[nodiscard]] Vec2 to_cartesian(const Vec2& frac) const { return vectors_ * frac; }

  /// Half-widths of the integer box that contains every lattice point of a
  /// disc of radius r around an arbitrary centre.
  [[nodiscard]] std::array<double, 2> index_extent(double radius) const;

  bool operator==(const LatticeBasis& other) const { return vectors_ == other.vectors_; }

 private:
  Mat2 vectors_;
  Mat2 inverse_;
  double cell_area_;
};

struct SitePoint {
  LatticeIndex n;
  Vec2 x;
};

/// A relative shift b inside the unit cell, with its fractional coordinates.
struct ShiftVector {
  Vec2 b = Vec2::Zero();
  Vec2 frac = Vec2::Zero();
};

/// Uniform N x N sample of a unit cell; point i1*N + i2 has fractional
/// coordinates (i1/N, i2/N).
struct ShiftGrid {
  LatticeBasis basis;
  int n_disc;
  std::vector<ShiftVector> points;
};

/// Relative band around |x| = r treated as the sphere itself by sites_in_ball().
inline constexpr double kShellTolerance = 1e-12;

/// All sites A n with |A n|^2 < r^2 (1 - kShellTolerance), ordered lexicographically in n.
std::vector<SitePoint> sites_in_ball(const LatticeBasis& basis, double r);

/// Folds u into the unit cell by a lattice translation.
ShiftVector modulate(const LatticeBasis& basis, const Vec2& u);

ShiftGrid shift_grid(const LatticeBasis& basis, int n_disc);

struct FourierModeResult {
  std::complex<double> value;
  std::size_t site_count = 0;
  /// Set when the mode phase looks rational, i.e. the lattices look commensurate for this mode.
  bool commensurate = false;
};

/// Average of exp(2 pi i m . A_other^{-1} l) over the sites l of `self` inside B_r.
FourierModeResult fourier_mode_average(const LatticeBasis& self, const LatticeBasis& other,
                                       const std::array<int, 2>& m, double r);

/// Rational-approximation test: true when every component is within `tolerance`
/// of a fraction whose denominator does not exceed `max_denominator`.
bool looks_rational(std::span<const double> values, double tolerance = 1e-9,
                    long max_denominator = 1000);

/// Sup-norm deviation of the empirical distribution of fractional points from
/// uniform, measured on a bins x bins grid over [0,1)^2.
double bin_discrepancy(std::span<const Vec2> fractional_points, int bins = 16);

/// Discrepancy of {mod_other(l) : l in self, |l| < r} on a 16 x 16 grid of the other cell.
/// Throws InsufficientSample for fewer than 100 sites.
double equidistribution_discrepancy(const LatticeBasis& self, const LatticeBasis& other,
                                    double r);

}  // namespace incomm
