#include "incommdos/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>

#include "incommdos/errors.hpp"

namespace incomm {

ClusterHamiltonian::ClusterHamiltonian(SparseMatrix matrix, std::vector<DofIndex> dofs,
                                       std::vector<std::ptrdiff_t> centre, double r, int j,
                                       Vec2 shift, SpectralWindow window)
    : matrix_(std::move(matrix)),
      dofs_(std::move(dofs)),
      centre_(std::move(centre)),
      r_(r),
      j_(j),
      shift_(std::move(shift)),
      window_(window) {}

std::size_t ClusterHamiltonian::centre_dof(std::size_t alpha) const {
  if (alpha >= centre_.size() || centre_[alpha] < 0) {
    throw MissingDof("orbital " + std::to_string(alpha) + " has no centre DOF in this cluster");
  }
  return static_cast<std::size_t>(centre_[alpha]);
}

namespace {

// Sites of one sheet inside B_r with an O(1) lookup from lattice index to site number.
class SheetSites {
 public:
  SheetSites() = default;
  SheetSites(const LatticeBasis& lattice, double r) : sites_(sites_in_ball(lattice, r)) {
    if (sites_.empty()) return;
    int hi1 = sites_.front().n[0], hi2 = sites_.front().n[1];
    lo1_ = hi1;
    lo2_ = hi2;
    for (const auto& s : sites_) {
      lo1_ = std::min(lo1_, s.n[0]);
      hi1 = std::max(hi1, s.n[0]);
      lo2_ = std::min(lo2_, s.n[1]);
      hi2 = std::max(hi2, s.n[1]);
    }
    w1_ = hi1 - lo1_ + 1;
    w2_ = hi2 - lo2_ + 1;
    lookup_.assign(static_cast<std::size_t>(w1_) * w2_, -1);
    for (std::size_t i = 0; i < sites_.size(); ++i) {
      lookup_[slot(sites_[i].n[0], sites_[i].n[1])] = static_cast<int>(i);
    }
  }

  [[nodiscard]] const std::vector<SitePoint>& sites() const { return sites_; }

  [[nodiscard]] int find(int n1, int n2) const {
    if (n1 < lo1_ || n2 < lo2_ || n1 >= lo1_ + w1_ || n2 >= lo2_ + w2_) return -1;
    return lookup_[slot(n1, n2)];
  }

  // Clamp a lattice-index interval to the occupied box.
  [[nodiscard]] std::pair<int, int> clamp1(int lo, int hi) const {
    return {std::max(lo, lo1_), std::min(hi, lo1_ + w1_ - 1)};
  }
  [[nodiscard]] std::pair<int, int> clamp2(int lo, int hi) const {
    return {std::max(lo, lo2_), std::min(hi, lo2_ + w2_ - 1)};
  }

 private:
  [[nodiscard]] std::size_t slot(int n1, int n2) const {
    return static_cast<std::size_t>(n1 - lo1_) * w2_ + static_cast<std::size_t>(n2 - lo2_);
  }

  std::vector<SitePoint> sites_;
  int lo1_ = 0, lo2_ = 0, w1_ = 0, w2_ = 0;
  std::vector<int> lookup_;
};

}  // namespace

ClusterHamiltonian assemble(const TBModel& model, double r, int j, const Vec2& shift,
                            const SpectralWindow& window) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidParameter("cluster radius must be positive");
  if (j != 1 && j != 2) throw InvalidParameter("sheet index j must be 1 or 2");
  if (!shift.allFinite()) throw InvalidParameter("shift must be finite");

  const int shifted = other_sheet(j);
  const auto& hop = model.hopping();
  const double cut = hop.cutoff_radius();
  const double cut2 = cut * cut;

  std::array<SheetSites, 2> sheets;
  std::array<std::size_t, 2> offset{};
  std::array<double, 2> max_tau{};
  std::size_t n = 0;
  for (int s = 1; s <= 2; ++s) {
    const std::size_t norb = model.orbital_count(s);
    if (norb > 0) sheets[s - 1] = SheetSites(model.lattice(s), r);
    offset[s - 1] = n;
    n += sheets[s - 1].sites().size() * norb;
    for (std::size_t a = 0; a < norb; ++a) {
      max_tau[s - 1] =
          std::max(max_tau[s - 1], model.orbital(model.global_index(s, a)).tau.norm());
    }
  }
  if (n == 0) throw InvalidParameter("cluster contains no degrees of freedom");

  std::vector<DofIndex> dofs;
  dofs.reserve(n);
  std::vector<std::ptrdiff_t> centre(model.orbital_count(), -1);
  for (int s = 1; s <= 2; ++s) {
    const std::size_t norb = model.orbital_count(s);
    for (const auto& site : sheets[s - 1].sites()) {
      for (std::size_t a = 0; a < norb; ++a) {
        const std::size_t alpha = model.global_index(s, a);
        if (site.n[0] == 0 && site.n[1] == 0) {
          centre[alpha] = static_cast<std::ptrdiff_t>(dofs.size());
        }
        dofs.push_back({site, alpha, s, dofs.size()});
      }
    }
  }

  std::vector<int> outer;
  std::vector<int> inner;
  std::vector<double> values;
  outer.reserve(n + 1);
  outer.push_back(0);

  for (const auto& row : dofs) {
    const Vec2 row_pos = row.site.x + model.orbital(row.orbital).tau +
                         (row.sheet == shifted ? shift : Vec2::Zero());
    for (int s = 1; s <= 2; ++s) {
      const auto& cols = sheets[s - 1];
      if (cols.sites().empty()) continue;
      const auto& lattice = model.lattice(s);
      const std::size_t norb = model.orbital_count(s);
      // Column sites R' satisfy |row_pos - shift_s - R' - tau'| <= cut.
      const Vec2 centre_pos = row_pos - (s == shifted ? shift : Vec2::Zero());
      const Vec2 f = lattice.to_fractional(centre_pos);
      const auto ext = lattice.index_extent(cut + max_tau[s - 1]);
      const auto [lo1, hi1] = cols.clamp1(static_cast<int>(std::floor(f[0] - ext[0])),
                                          static_cast<int>(std::ceil(f[0] + ext[0])));
      const auto [lo2, hi2] = cols.clamp2(static_cast<int>(std::floor(f[1] - ext[1])),
                                          static_cast<int>(std::ceil(f[1] + ext[1])));
      for (int n1 = lo1; n1 <= hi1; ++n1) {
        for (int n2 = lo2; n2 <= hi2; ++n2) {
          const int site = cols.find(n1, n2);
          if (site < 0) continue;
          const Vec2 base = centre_pos - cols.sites()[static_cast<std::size_t>(site)].x;
          for (std::size_t a = 0; a < norb; ++a) {
            const std::size_t alpha_prime = model.global_index(s, a);
            const Vec2 x = base - model.orbital(alpha_prime).tau;
            if (x.squaredNorm() > cut2) continue;
            const double v = hop(row.orbital, alpha_prime, x);
            if (std::abs(v) < kDropTolerance) continue;
            if (!std::isfinite(v)) {
              throw NumericalBreakdown("hopping returned a non-finite value");
            }
            inner.push_back(static_cast<int>(offset[s - 1] +
                                             static_cast<std::size_t>(site) * norb + a));
            values.push_back(v);
          }
        }
      }
    }
    outer.push_back(static_cast<int>(inner.size()));
  }

  const int dim = static_cast<int>(n);
  const Eigen::Map<const SparseMatrix> raw(dim, dim, static_cast<int>(values.size()),
                                           outer.data(), inner.data(), values.data());
  SparseMatrix upper = raw;
  SparseMatrix transposed = upper.transpose();
  SparseMatrix diff = upper - transposed;
  const double residual = diff.nonZeros() > 0 ? diff.coeffs().cwiseAbs().maxCoeff() : 0.0;
  if (residual > 1e-10) {
    throw ModelInconsistency("hopping is not Hermitian: residual " + std::to_string(residual));
  }
  SparseMatrix matrix = 0.5 * (upper + transposed);
  matrix.prune([](int, int, double v) { return std::abs(v) >= kDropTolerance; });
  matrix.makeCompressed();

  return ClusterHamiltonian(std::move(matrix), std::move(dofs), std::move(centre), r, j, shift,
                            window);
}

ClusterHamiltonian assemble(const TBModel& model, double r, int j, const ShiftVector& shift,
                            const SpectralWindow& window) {
  return assemble(model, r, j, shift.b, window);
}

ClusterHamiltonian assemble(const TBModel& model, double r, int j, const Vec2& shift) {
  return assemble(model, r, j, shift, spectral_bound(model));
}

std::vector<std::complex<double>> matvec(const ClusterHamiltonian& h,
                                         std::span<const std::complex<double>> v) {
  const auto& m = h.matrix();
  if (v.size() != h.dimension()) {
    throw DimensionMismatch("matvec: vector length " + std::to_string(v.size()) +
                            " does not match dimension " + std::to_string(h.dimension()));
  }
  std::vector<std::complex<double>> out(v.size());
  const int* outer = m.outerIndexPtr();
  const int* inner = m.innerIndexPtr();
  const double* val = m.valuePtr();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::complex<double> acc = 0.0;
    for (int k = outer[i]; k < outer[i + 1]; ++k) {
      acc += val[k] * v[static_cast<std::size_t>(inner[k])];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

Eigen::MatrixXd dense_form(const ClusterHamiltonian& h) {
  if (h.dimension() > kDenseLimit) {
    throw SizeExceeded("dense form refused for dimension " + std::to_string(h.dimension()) +
                       " > " + std::to_string(kDenseLimit));
  }
  return Eigen::MatrixXd(h.matrix());
}

void write_coo(std::ostream& out, const ClusterHamiltonian& h) {
  const auto old_precision = out.precision(17);
  out << "row,col,value\n";
  const auto& m = h.matrix();
  for (int i = 0; i < m.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
      out << it.row() << ',' << it.col() << ',' << it.value() << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace incomm
