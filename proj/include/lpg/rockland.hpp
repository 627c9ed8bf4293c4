#pragma once

// Discrete positive Rockland operators: exact Fourier symbols on anisotropic R^n
// and a finite-difference sub-Laplacian on a truncated Heisenberg box.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <memory>
#include <variant>
#include <vector>

#include "lpg/group.hpp"

namespace lpg {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

/// Exact symbol a(xi) = sum_i xi_i^{2 m_i}, sampled at the DFT frequencies of the grid.
struct SymbolBackend {
  std::vector<int> exponents;
  std::vector<double> samples;  ///< one value per node, FFTW frequency ordering
};

/// Symmetric positive semidefinite sparse matrix acting on node values.
struct SparseBackend {
  SparseMatrix matrix;
};

/// Full symmetric eigendecomposition; eigenvectors are columns, orthonormal in l^2.
struct EigDecomp {
  Eigen::VectorXd eigenvalues;  ///< nondecreasing
  Eigen::MatrixXd eigenvectors;
};

/// Largest node count accepted by the dense eigensolver.
inline constexpr std::size_t kDenseLimit = 8192;

namespace detail {
struct EigCache;
}

class RocklandOp {
 public:
  RocklandOp(GroupSpec spec, Grid grid, Rational nu, std::variant<SymbolBackend, SparseBackend> backend);

  const GroupSpec& spec() const { return spec_; }
  const Grid& grid() const { return grid_; }
  Rational nu_rational() const { return nu_; }
  double nu() const { return nu_.value(); }
  double lambda_max() const { return lambda_max_; }

  bool has_symbol() const { return std::holds_alternative<SymbolBackend>(backend_); }
  bool is_sparse() const { return std::holds_alternative<SparseBackend>(backend_); }
  const SymbolBackend& symbol() const { return std::get<SymbolBackend>(backend_); }
  const SparseMatrix& matrix() const { return std::get<SparseBackend>(backend_).matrix; }
  bool dense_eligible() const { return grid_.size() <= kDenseLimit; }

  /// Power-iteration estimate of the top eigenvalue (sparse backend; equals lambda_max for symbols).
  double power_estimate() const { return power_estimate_; }

  /// Dense eigendecomposition, computed once and shared by copies of this operator.
  const EigDecomp& eig() const;

 private:
  GroupSpec spec_;
  Grid grid_;
  Rational nu_;
  std::variant<SymbolBackend, SparseBackend> backend_;
  double lambda_max_ = 0.0;
  double power_estimate_ = 0.0;
  std::shared_ptr<detail::EigCache> cache_;
};

/// Symbol operator with a(xi) = sum_i xi_i^{2 m_i}; requires 2 m_i nu_i to be one common value nu.
RocklandOp abelian_symbol_operator(const GroupSpec& spec, const Grid& grid, const std::vector<int>& exponents);

/// R = X_d^T X_d + Y_d^T Y_d with forward differences for X = d_x - (y/2) d_t, Y = d_y + (x/2) d_t
/// and zero extension outside the box. Needs a truncated 3-axis grid with every N_i >= 4.
RocklandOp heisenberg_sublaplacian(const Grid& grid);

/// Symbol backend: inverse DFT of a(xi) f^(xi). Sparse backend: matrix-vector product.
SampledFunction apply(const RocklandOp& op, const SampledFunction& f);

/// Eigendecomposition (at most kDenseLimit nodes). Throws Unsupported beyond the limit.
const EigDecomp& dense_eig(const RocklandOp& op);

/// Certified upper bound on the spectrum: exact symbol maximum or Gershgorin row-sum bound.
double spectral_bound(const RocklandOp& op);

/// Dense matrix of the operator (both backends); for oracles on small grids.
Eigen::MatrixXd dense_matrix(const RocklandOp& op);

/// Matrix Market coordinate export (lower triangle, "real symmetric"). Sparse backend only.
void write_matrix_market(const RocklandOp& op, std::ostream& os);

/// Gershgorin row-sum bound of a sparse matrix.
double gershgorin_bound(const SparseMatrix& m);

}  // namespace lpg
