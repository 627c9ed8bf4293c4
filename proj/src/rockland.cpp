#include "lpg/rockland.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <random>

#include "fft.hpp"
#include "lpg/error.hpp"

namespace lpg {

namespace detail {
struct EigCache {
  std::once_flag once;
  std::unique_ptr<EigDecomp> value;
};
}  // namespace detail

namespace {

Eigen::VectorXd real_part(std::span<const Complex> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i].real();
  return out;
}

Eigen::VectorXd imag_part(std::span<const Complex> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i].imag();
  return out;
}

double power_iteration(const SparseMatrix& m, int steps) {
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> dist;
  Eigen::VectorXd v(m.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = dist(rng);
  v.normalize();
  double est = 0.0;
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXd w = m * v;
    est = v.dot(w);
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    v = w / n;
  }
  return est;
}

std::unique_ptr<EigDecomp> lapack_eig(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd a = m;
  const auto n = static_cast<lapack_int>(a.rows());
  auto decomp = std::make_unique<EigDecomp>();
  decomp->eigenvalues.resize(n);
  // Column-major storage: Eigen's default layout matches LAPACK.
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, decomp->eigenvalues.data());
  if (info != 0) throw Error("dsyevd failed with info = " + std::to_string(info));
  decomp->eigenvectors = std::move(a);
  return decomp;
}

// Residual and orthogonality on a few fixed probe vectors, using Eigen's own
// products so a broken BLAS cannot vouch for itself.
bool decomposition_ok(const Eigen::MatrixXd& a, const EigDecomp& d) {
  const Eigen::Index n = a.rows();
  if (n == 0) return true;
  const Eigen::MatrixXd& v = d.eigenvectors;
  const double scale = std::max(1.0, d.eigenvalues.cwiseAbs().maxCoeff());
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> normal;
  for (int probe = 0; probe < 3; ++probe) {
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = normal(rng);
    const Eigen::VectorXd vx = v.lazyProduct(x);
    const Eigen::VectorXd lhs = a.lazyProduct(vx);
    const Eigen::VectorXd rhs = v.lazyProduct(Eigen::VectorXd(d.eigenvalues.cwiseProduct(x)));
    const Eigen::VectorXd back = v.transpose().lazyProduct(vx);
    if (!((lhs - rhs).norm() <= 1e-8 * scale * x.norm()) || !((back - x).norm() <= 1e-8 * x.norm())) return false;
  }
  return true;
}

}  // namespace

RocklandOp::RocklandOp(GroupSpec spec, Grid grid, Rational nu, std::variant<SymbolBackend, SparseBackend> backend)
    : spec_(std::move(spec)),
      grid_(std::move(grid)),
      nu_(nu),
      backend_(std::move(backend)),
      cache_(std::make_shared<detail::EigCache>()) {
  if (grid_.dim() != spec_.dim()) throw InvalidArgument("operator grid dimension does not match the group");
  if (has_symbol()) {
    const auto& s = symbol().samples;
    if (s.size() != grid_.size()) throw InvalidArgument("symbol sample count does not match grid");
    lambda_max_ = s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
    power_estimate_ = lambda_max_;
  } else {
    const auto& m = matrix();
    if (m.rows() != static_cast<Eigen::Index>(grid_.size()) || m.cols() != m.rows())
      throw InvalidArgument("sparse operator shape does not match grid");
    lambda_max_ = gershgorin_bound(m);
    power_estimate_ = m.nonZeros() == 0 ? 0.0 : power_iteration(m, 50);
  }
}

const EigDecomp& RocklandOp::eig() const {
  if (!dense_eligible())
    throw Unsupported("dense eigendecomposition limited to " + std::to_string(kDenseLimit) + " nodes, grid has " +
                      std::to_string(grid_.size()));
  std::call_once(cache_->once, [this] {
    const Eigen::MatrixXd a = dense_matrix(*this);
    auto decomp = lapack_eig(a);
    if (!decomposition_ok(a, *decomp)) {
      std::fprintf(stderr,
                   "lpg: LAPACK dsyevd returned an inaccurate decomposition (faulty BLAS kernel for this CPU? "
                   "try OPENBLAS_CORETYPE=SkylakeX); falling back to Eigen's solver\n");
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
      if (es.info() != Eigen::Success) throw Error("dense eigensolver failed");
      decomp->eigenvalues = es.eigenvalues();
      decomp->eigenvectors = es.eigenvectors();
    }
    cache_->value = std::move(decomp);
  });
  return *cache_->value;
}

RocklandOp abelian_symbol_operator(const GroupSpec& spec, const Grid& grid, const std::vector<int>& exponents) {
  if (spec.kind() != GroupKind::AbelianGraded) throw InvalidArgument("symbol operators need an abelian group");
  if (grid.boundary() != Boundary::Periodic) throw InvalidArgument("symbol operators need a periodic grid");
  if (exponents.size() != spec.dim()) throw InvalidArgument("need one exponent per coordinate");
  Rational nu(0);
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] < 1) throw InvalidArgument("symbol exponents must be positive integers");
    const Rational deg = Rational(2L * exponents[i]) * spec.weights()[i];
    if (i == 0) {
      nu = deg;
    } else if (!(deg == nu)) {
      throw InvalidArgument("inhomogeneous symbol: 2 m_i nu_i differs across coordinates (" + nu.str() + " vs " +
                            deg.str() + ")");
    }
  }
  std::vector<double> samples(grid.size());
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const auto mi = grid.multi_index(idx);
    double a = 0.0;
    for (std::size_t ax = 0; ax < grid.dim(); ++ax) {
      const double xi = detail::dft_frequency(mi[ax], grid.count(ax), grid.spacing(ax));
      a += std::pow(xi, 2 * exponents[ax]);
    }
    samples[idx] = a;
  }
  return RocklandOp(spec, grid, nu, SymbolBackend{exponents, std::move(samples)});
}

RocklandOp heisenberg_sublaplacian(const Grid& grid) {
  if (grid.dim() != 3 || grid.boundary() != Boundary::Truncated)
    throw InvalidArgument("the sub-Laplacian needs a truncated three-axis grid");
  for (int n : grid.counts())
    if (n < 4) throw InvalidArgument("sub-Laplacian grid too small: every axis needs at least 4 nodes");
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double hx = grid.spacing(0), hy = grid.spacing(1), ht = grid.spacing(2);
  const auto sx = static_cast<Eigen::Index>(grid.stride(0));
  const auto sy = static_cast<Eigen::Index>(grid.stride(1));
  const auto st = static_cast<Eigen::Index>(grid.stride(2));

  std::vector<Eigen::Triplet<double>> xt, yt;
  xt.reserve(3 * grid.size());
  yt.reserve(3 * grid.size());
  for (int i = 0; i < grid.count(0); ++i) {
    const double x = grid.coordinate(0, i);
    for (int j = 0; j < grid.count(1); ++j) {
      const double y = grid.coordinate(1, j);
      for (int k = 0; k < grid.count(2); ++k) {
        const Eigen::Index row = i * sx + j * sy + k * st;
        // X = d_x - (y/2) d_t, forward differences, zero outside the box.
        xt.emplace_back(row, row, -1.0 / hx + 0.5 * y / ht);
        if (i + 1 < grid.count(0)) xt.emplace_back(row, row + sx, 1.0 / hx);
        if (k + 1 < grid.count(2)) xt.emplace_back(row, row + st, -0.5 * y / ht);
        // Y = d_y + (x/2) d_t.
        yt.emplace_back(row, row, -1.0 / hy - 0.5 * x / ht);
        if (j + 1 < grid.count(1)) yt.emplace_back(row, row + sy, 1.0 / hy);
        if (k + 1 < grid.count(2)) yt.emplace_back(row, row + st, 0.5 * x / ht);
      }
    }
  }
  SparseMatrix xd(n, n), yd(n, n);
  xd.setFromTriplets(xt.begin(), xt.end());
  yd.setFromTriplets(yt.begin(), yt.end());
  SparseMatrix r = SparseMatrix(xd.transpose()) * xd + SparseMatrix(yd.transpose()) * yd;
  // The two triangles accumulate in different orders; average them so the matrix is exactly symmetric.
  r = 0.5 * (r + SparseMatrix(r.transpose()));
  r.prune(0.0);
  r.makeCompressed();
  return RocklandOp(GroupSpec::make(GroupKind::Heisenberg1), grid, Rational(2), SparseBackend{std::move(r)});
}

SampledFunction apply(const RocklandOp& op, const SampledFunction& f) {
  if (!(f.grid() == op.grid())) throw InvalidArgument("apply: function grid does not match operator grid");
  if (op.has_symbol()) {
    std::vector<Complex> v(f.values().begin(), f.values().end());
    const auto& shape = op.grid().counts();
    detail::fft_forward(shape, v);
    const auto& a = op.symbol().samples;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= a[i];
    detail::fft_inverse(shape, v);
    return SampledFunction(op.grid(), std::move(v));
  }
  const auto& m = op.matrix();
  // Row-major sparse product: each output entry is one sequential row dot product,
  // so results do not depend on threading.
  const Eigen::VectorXd re = m * real_part(f.values());
  const Eigen::VectorXd im = m * imag_part(f.values());
  std::vector<Complex> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = Complex(re[static_cast<Eigen::Index>(i)], im[static_cast<Eigen::Index>(i)]);
  }
  return SampledFunction(op.grid(), std::move(out));
}

const EigDecomp& dense_eig(const RocklandOp& op) { return op.eig(); }

double spectral_bound(const RocklandOp& op) { return op.lambda_max(); }

Eigen::MatrixXd dense_matrix(const RocklandOp& op) {
  const auto n = static_cast<Eigen::Index>(op.grid().size());
  if (op.is_sparse()) return Eigen::MatrixXd(op.matrix());
  Eigen::MatrixXd a(n, n);
  SampledFunction e(op.grid());
  for (Eigen::Index j = 0; j < n; ++j) {
    std::fill(e.values().begin(), e.values().end(), Complex(0.0));
    e[static_cast<std::size_t>(j)] = 1.0;
    const auto col = apply(op, e);
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = col[static_cast<std::size_t>(i)].real();
  }
  return 0.5 * (a + a.transpose());
}

double gershgorin_bound(const SparseMatrix& m) {
  double best = 0.0;
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

void write_matrix_market(const RocklandOp& op, std::ostream& os) {
  if (!op.is_sparse()) throw Unsupported("Matrix Market export needs a sparse operator");
  const auto& m = op.matrix();
  Eigen::Index count = 0;
  for (Eigen::Index r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it)
      if (it.col() <= r) ++count;
  os << "%%MatrixMarket matrix coordinate real symmetric\n";
  os << m.rows() << ' ' << m.cols() << ' ' << count << '\n';
  char buf[64];
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      if (it.col() > r) continue;
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      os << (r + 1) << ' ' << (it.col() + 1) << ' ' << buf << '\n';
    }
  }
}

}  // namespace lpg
