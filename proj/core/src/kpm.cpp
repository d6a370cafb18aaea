#include "incommdos/kpm.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "incommdos/errors.hpp"
#include "incommdos/numeric.hpp"

namespace incomm {

KernelCoefficients jackson_coefficients(int p, KernelVariant variant) {
  if (p < 1) throw InvalidParameter("kernel order p must be at least 1");
  KernelCoefficients k{p, std::vector<double>(static_cast<std::size_t>(p) + 1), variant};
  const double np1 = static_cast<double>(p) + 1.0;
  const double base = std::numbers::pi / np1;
  const double tail = variant == KernelVariant::jackson ? 1.0 / std::tan(base) : std::atan(base);
  for (int m = 0; m <= p; ++m) {
    const double angle = std::numbers::pi * m / np1;
    const double weight = m == 0 ? 1.0 : 2.0;
    k.g[static_cast<std::size_t>(m)] =
        weight * ((p - m + 1) * std::cos(angle) + std::sin(angle) * tail) / np1;
  }
  return k;
}

MomentTable chebyshev_moments(const ClusterHamiltonian& h, std::size_t alpha, int p) {
  if (p < 1) throw InvalidParameter("moment order p must be at least 1");
  const std::size_t c = h.centre_dof(alpha);
  const double eta = h.window().eta;
  const auto& m = h.matrix();
  const int* outer = m.outerIndexPtr();
  const int* inner = m.innerIndexPtr();
  const double* val = m.valuePtr();
  const std::size_t n = h.dimension();

  MomentTable table;
  table.mu.assign(static_cast<std::size_t>(p) + 1, 0.0);
  table.j = h.sheet();
  table.alpha = alpha;
  table.shift = h.shift();
  table.r = h.radius();
  table.eta = eta;

  // prev = v_{m-1}, cur = v_m; prev is overwritten in place with v_{m+1}.
  std::vector<double> prev(n, 0.0);
  std::vector<double> cur(n, 0.0);
  prev[c] = 1.0;
  for (int k = outer[c]; k < outer[c + 1]; ++k) {
    cur[static_cast<std::size_t>(inner[k])] = eta * val[k];
  }
  table.mu[0] = 1.0;
  table.mu[1] = cur[c];

  const double two_eta = 2.0 * eta;
  for (int step = 1; step < p; ++step) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int k = outer[i]; k < outer[i + 1]; ++k) {
        acc += val[k] * cur[static_cast<std::size_t>(inner[k])];
      }
      prev[i] = two_eta * acc - prev[i];
    }
    std::swap(prev, cur);
    const double mu = cur[c];
    if (!std::isfinite(mu) || std::abs(mu) > 1.0 + 1e-9) {
      throw NumericalBreakdown("Chebyshev moment " + std::to_string(step + 1) + " = " +
                               std::to_string(mu) + " leaves [-1, 1]; spectral window too small");
    }
    table.mu[static_cast<std::size_t>(step) + 1] = mu;
  }
  return table;
}

std::vector<double> chebyshev_values(double x, int p) {
  if (p < 0) throw InvalidParameter("Chebyshev order must be non-negative");
  std::vector<double> t(static_cast<std::size_t>(p) + 1);
  t[0] = 1.0;
  if (p >= 1) t[1] = x;
  for (int m = 1; m < p; ++m) {
    t[static_cast<std::size_t>(m) + 1] =
        2.0 * x * t[static_cast<std::size_t>(m)] - t[static_cast<std::size_t>(m) - 1];
  }
  return t;
}

std::vector<double> reconstruct_values(const MomentTable& moments,
                                       const KernelCoefficients& kernel,
                                       std::span<const double> epsilons) {
  const int p = moments.order();
  if (kernel.p != p) {
    throw InvalidParameter("kernel order " + std::to_string(kernel.p) +
                           " does not match moment order " + std::to_string(p));
  }
  const double eta = moments.eta;
  const double limit = 1.0 - kWindowGuard;

  std::string offending;
  for (const double e : epsilons) {
    if (!(std::abs(eta * e) <= limit)) {
      std::ostringstream os;
      os.precision(17);
      os << (offending.empty() ? "" : ", ") << e;
      offending += os.str();
    }
  }
  if (!offending.empty()) {
    std::ostringstream os;
    os.precision(17);
    os << "energies outside the scaled window |eta e| <= " << limit << " (eta = " << eta
       << "): " << offending;
    throw OutOfWindow(os.str());
  }

  std::vector<double> out;
  out.reserve(epsilons.size());
  std::vector<double> terms(static_cast<std::size_t>(p) + 1);
  for (const double e : epsilons) {
    const double x = eta * e;
    const auto t = chebyshev_values(x, p);
    for (std::size_t m = 0; m < terms.size(); ++m) {
      terms[m] = kernel.g[m] * t[m] * moments.mu[m];
    }
    out.push_back(eta / (std::numbers::pi * std::sqrt(1.0 - x * x)) * pairwise_sum(terms));
  }
  return out;
}

std::vector<LdosSample> reconstruct(const MomentTable& moments, const KernelCoefficients& kernel,
                                    std::span<const double> epsilons) {
  const auto values = reconstruct_values(moments, kernel, epsilons);
  const LdosProvenance prov{moments.j, moments.alpha, moments.shift, moments.r, moments.order()};
  std::vector<LdosSample> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.push_back({epsilons[i], values[i], prov});
  }
  return out;
}

double LocalSpectrum::evaluate(const std::function<double(double)>& g) const {
  std::vector<double> terms(eigenvalues.size());
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    const double gi = g(eigenvalues[i]);
    if (!std::isfinite(gi)) {
      throw NumericalBreakdown("observable is not finite at eigenvalue " +
                               std::to_string(eigenvalues[i]));
    }
    terms[i] = weights[i] * gi;
  }
  return pairwise_sum(terms);
}

LocalSpectrum local_spectrum(const ClusterHamiltonian& h, std::size_t alpha) {
  const std::size_t c = h.centre_dof(alpha);
  const Eigen::MatrixXd dense = dense_form(h);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) {
    throw NumericalBreakdown("dense eigensolver did not converge");
  }
  LocalSpectrum spec;
  const auto& evals = solver.eigenvalues();
  const auto& evecs = solver.eigenvectors();
  spec.eigenvalues.assign(evals.data(), evals.data() + evals.size());
  spec.weights.resize(spec.eigenvalues.size());
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    const double amp = evecs(static_cast<Eigen::Index>(c), i);
    spec.weights[static_cast<std::size_t>(i)] = amp * amp;
  }
  return spec;
}

double dense_oracle(const ClusterHamiltonian& h, std::size_t alpha,
                    const std::function<double(double)>& g) {
  return local_spectrum(h, alpha).evaluate(g);
}

void write_moments_csv(std::ostream& out, const MomentTable& moments) {
  const auto old_precision = out.precision(17);
  out << "# j=" << moments.j << " alpha=" << moments.alpha << " b_x=" << moments.shift[0]
      << " b_y=" << moments.shift[1] << " r=" << moments.r << " eta=" << moments.eta
      << " p=" << moments.order() << '\n';
  out << "m,mu\n";
  for (std::size_t m = 0; m < moments.mu.size(); ++m) {
    out << m << ',' << moments.mu[m] << '\n';
  }
  out.precision(old_precision);
}

MomentTable read_moments_csv(std::istream& in) {
  MomentTable table;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw InvalidParameter("moment CSV: missing provenance line");
  }
  std::istringstream header(line.substr(2));
  std::string token;
  int p = -1;
  while (header >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw InvalidParameter("moment CSV: bad token '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "j") table.j = std::stoi(value);
    else if (key == "alpha") table.alpha = std::stoul(value);
    else if (key == "b_x") table.shift[0] = std::stod(value);
    else if (key == "b_y") table.shift[1] = std::stod(value);
    else if (key == "r") table.r = std::stod(value);
    else if (key == "eta") table.eta = std::stod(value);
    else if (key == "p") p = std::stoi(value);
  }
  if (!std::getline(in, line) || line != "m,mu") {
    throw InvalidParameter("moment CSV: missing 'm,mu' header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidParameter("moment CSV: bad row '" + line + "'");
    const auto m = std::stoul(line.substr(0, comma));
    if (m != table.mu.size()) throw InvalidParameter("moment CSV: rows out of order");
    table.mu.push_back(std::stod(line.substr(comma + 1)));
  }
  if (p < 0 || table.mu.size() != static_cast<std::size_t>(p) + 1) {
    throw InvalidParameter("moment CSV: row count does not match p");
  }
  return table;
}

}  // namespace incomm
