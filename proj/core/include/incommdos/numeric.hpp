#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace incomm {

/// Recursive pairwise summation; the split points depend only on the length,
/// so the result is reproducible for a given input order.
double pairwise_sum(std::span<const double> values);

/// Trapezoid rule on a (possibly non-uniform) grid.
double trapezoid(std::span<const double> x, std::span<const double> y);

/// `count` points from lo to hi inclusive. When lo == -hi the grid is exactly
/// antisymmetric: point k equals minus point count-1-k.
std::vector<double> linspace(double lo, double hi, std::size_t count);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace incomm
