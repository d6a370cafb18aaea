#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "incommdos/geometry.hpp"
#include "incommdos/model.hpp"

namespace incomm {

struct DofIndex {
  SitePoint site;
  std::size_t orbital;  // model-wide orbital index
  int sheet;
  std::size_t flat;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

/// Finite-cluster Hamiltonian H_{r,j}(b) over the sites of both sheets inside
/// B_r, with the opposite sheet P_j displaced by b. Stored entries are exactly
/// symmetric. DOF order: sheet 1 sites (lexicographic in n) x orbitals, then sheet 2.
class ClusterHamiltonian {
 public:
  ClusterHamiltonian(SparseMatrix matrix, std::vector<DofIndex> dofs,
                     std::vector<std::ptrdiff_t> centre, double r, int j, Vec2 shift,
                     SpectralWindow window);

  [[nodiscard]] const SparseMatrix& matrix() const { return matrix_; }
  [[nodiscard]] const std::vector<DofIndex>& dofs() const { return dofs_; }
  [[nodiscard]] std::size_t dimension() const { return dofs_.size(); }
  [[nodiscard]] double radius() const { return r_; }
  [[nodiscard]] int sheet() const { return j_; }
  [[nodiscard]] const Vec2& shift() const { return shift_; }
  [[nodiscard]] const SpectralWindow& window() const { return window_; }

  /// Flat index of the DOF (R = 0, alpha); throws MissingDof if alpha has no centre DOF.
  [[nodiscard]] std::size_t centre_dof(std::size_t alpha) const;

 private:
  SparseMatrix matrix_;
  std::vector<DofIndex> dofs_;
  std::vector<std::ptrdiff_t> centre_;
  double r_;
  int j_;
  Vec2 shift_;
  SpectralWindow window_;
};

/// Entries below this magnitude (eV) are not stored.
inline constexpr double kDropTolerance = 1e-14;

/// Builds H_{r,j}(b). The shift is used verbatim (not folded into a cell) and is
/// added to the coordinates of every sheet-P_j orbital.
ClusterHamiltonian assemble(const TBModel& model, double r, int j, const Vec2& shift,
                            const SpectralWindow& window);
ClusterHamiltonian assemble(const TBModel& model, double r, int j, const ShiftVector& shift,
                            const SpectralWindow& window);
/// Convenience overload computing spectral_bound(model).
ClusterHamiltonian assemble(const TBModel& model, double r, int j, const Vec2& shift);

std::vector<std::complex<double>> matvec(const ClusterHamiltonian& h,
                                         std::span<const std::complex<double>> v);

inline constexpr std::size_t kDenseLimit = 4000;

/// Dense copy of the matrix; throws SizeExceeded above kDenseLimit.
Eigen::MatrixXd dense_form(const ClusterHamiltonian& h);

/// Writes "row,col,value" lines (17 significant digits) after a header line.
void write_coo(std::ostream& out, const ClusterHamiltonian& h);

}  // namespace incomm
