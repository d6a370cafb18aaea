#include "incommdos/numeric.hpp"

#include <cmath>

#include "incommdos/errors.hpp"

namespace incomm {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (const double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("trapezoid: x and y lengths differ");
  if (x.size() < 2) return 0.0;
  std::vector<double> panels(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    panels[i] = 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  }
  return pairwise_sum(panels);
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count < 2) throw InvalidParameter("linspace needs at least two points");
  std::vector<double> out(count);
  const double last = static_cast<double>(count - 1);
  if (lo == -hi) {
    const double half = 0.5 * last;
    for (std::size_t k = 0; k < count; ++k) {
      out[k] = hi * ((static_cast<double>(k) - half) / half);
    }
    return out;
  }
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = lo + (hi - lo) * (static_cast<double>(k) / last);
  }
  out.back() = hi;
  return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("fit_line: x and y lengths differ");
  if (x.size() < 2) throw InvalidParameter("fit_line needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidParameter("fit_line: x values are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace incomm
