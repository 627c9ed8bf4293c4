#pragma once

// Model graded groups (anisotropic R^n and the Heisenberg group H^1), their
// dilations and quasi-norms, and functions sampled on discretization grids.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lpg {

using Complex = std::complex<double>;
using Point = std::vector<double>;

/// Positive rational number num/den in lowest terms.
struct Rational {
  long num = 1;
  long den = 1;

  Rational() = default;
  Rational(long n, long d = 1);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  std::string str() const;
};

enum class GroupKind { AbelianGraded, Heisenberg1 };

std::string to_string(GroupKind kind);

/// Group law, dilation weights and homogeneous dimension of a model graded group.
class GroupSpec {
 public:
  /// Heisenberg1 ignores `weights` and uses (1, 1, 2). Throws InvalidArgument on
  /// empty or non-positive weights, or when the smallest weight is not 1.
  static GroupSpec make(GroupKind kind, std::vector<Rational> weights = {});

  GroupKind kind() const { return kind_; }
  std::size_t dim() const { return weights_.size(); }
  const std::vector<Rational>& weights() const { return weights_; }
  /// Q = sum of the dilation weights.
  Rational homogeneous_dimension() const { return q_; }
  double Q() const { return q_.value(); }

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

 private:
  GroupSpec(GroupKind kind, std::vector<Rational> weights);

  GroupKind kind_;
  std::vector<Rational> weights_;
  Rational q_;
};

inline GroupSpec make_group_spec(GroupKind kind, std::vector<Rational> weights = {}) {
  return GroupSpec::make(kind, std::move(weights));
}

/// D_r x: coordinate i is multiplied by r^{nu_i}.
Point dilate_point(const GroupSpec& spec, double r, std::span<const double> x);

/// Group product a*b. Heisenberg1 uses (x,y,t)(x',y',t') = (x+x', y+y', t+t'+(xy'-yx')/2).
Point group_multiply(const GroupSpec& spec, std::span<const double> a, std::span<const double> b);

/// Inverse element; on both model groups this is coordinate negation.
Point group_inverse(const GroupSpec& spec, std::span<const double> x);

/// (sum_i |x_i|^{2M/nu_i})^{1/(2M)}, M = lcm of the weight numerators.
double quasi_norm(const GroupSpec& spec, std::span<const double> x);

enum class Boundary { Periodic, Truncated };

/// Tensor grid on prod_i [-L_i, L_i) with N_i nodes per axis, node k at -L_i + k h_i.
/// The last axis varies fastest in the linear node index.
class Grid {
 public:
  Grid(std::vector<double> half_extent, std::vector<int> counts, Boundary boundary);

  std::size_t dim() const { return counts_.size(); }
  std::size_t size() const { return size_; }
  int count(std::size_t axis) const { return counts_[axis]; }
  const std::vector<int>& counts() const { return counts_; }
  double half_extent(std::size_t axis) const { return half_extent_[axis]; }
  const std::vector<double>& half_extents() const { return half_extent_; }
  double spacing(std::size_t axis) const { return 2.0 * half_extent_[axis] / counts_[axis]; }
  double cell_volume() const;
  Boundary boundary() const { return boundary_; }

  double coordinate(std::size_t axis, int k) const {
    return -half_extent_[axis] + k * spacing(axis);
  }
  /// Node index whose coordinate along `axis` is zero.
  int origin_index(std::size_t axis) const { return counts_[axis] / 2; }

  std::size_t stride(std::size_t axis) const { return strides_[axis]; }
  std::size_t linear_index(std::span<const int> multi) const;
  std::vector<int> multi_index(std::size_t linear) const;
  Point node(std::size_t linear) const;

  /// Same extents with every count multiplied by 2.
  Grid refined() const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.half_extent_ == b.half_extent_ && a.counts_ == b.counts_ && a.boundary_ == b.boundary_;
  }

 private:
  std::vector<double> half_extent_;
  std::vector<int> counts_;
  std::vector<std::size_t> strides_;
  std::size_t size_;
  Boundary boundary_;
};

/// Complex samples of a function on every node of a grid.
class SampledFunction {
 public:
  explicit SampledFunction(Grid grid);
  SampledFunction(Grid grid, std::vector<Complex> values);

  static SampledFunction sample(const Grid& grid,
                                const std::function<Complex(std::span<const double>)>& fn);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const Complex> values() const { return values_; }
  std::span<Complex> values() { return values_; }
  Complex operator[](std::size_t i) const { return values_[i]; }
  Complex& operator[](std::size_t i) { return values_[i]; }

  bool all_finite() const;

  SampledFunction& operator+=(const SampledFunction& other);
  SampledFunction& operator-=(const SampledFunction& other);
  SampledFunction& operator*=(Complex c);
  friend SampledFunction operator+(SampledFunction a, const SampledFunction& b) { return a += b; }
  friend SampledFunction operator-(SampledFunction a, const SampledFunction& b) { return a -= b; }
  friend SampledFunction operator*(Complex c, SampledFunction a) { return a *= c; }

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

/// Quadrature L^p norm (sum |f|^p * cell volume)^{1/p}; p = infinity gives the max modulus.
double lp_norm(const SampledFunction& f, double p);

/// Quadrature inner product sum conj(f) g * cell volume.
Complex inner(const SampledFunction& f, const SampledFunction& g);

/// Plain Euclidean distance ||f - g||_2 / ||g||_2 on the sample vectors.
double relative_l2_error(const SampledFunction& f, const SampledFunction& reference);

/// (tau_h f)(x) = f(h x). Wraps on periodic grids, zero-fills on truncated grids.
/// Throws InvalidArgument when some h*x does not land on a grid node.
SampledFunction translate(const GroupSpec& spec, const SampledFunction& f, std::span<const double> h);

/// f o D_r for r = 2^k, k >= 0, sampled node-to-node; nodes whose image leaves
/// the grid get 0. Throws InvalidArgument for other r.
SampledFunction dilate_function(const GroupSpec& spec, const SampledFunction& f, double r);

}  // namespace lpg
