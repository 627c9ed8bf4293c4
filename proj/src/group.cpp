#include "lpg/group.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "lpg/error.hpp"

namespace lpg {

Rational::Rational(long n, long d) : num(n), den(d) {
  if (d == 0) throw InvalidArgument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num * b.num, a.den * b.den);
}

std::string Rational::str() const {
  std::ostringstream os;
  os << num;
  if (den != 1) os << '/' << den;
  return os.str();
}

std::string to_string(GroupKind kind) {
  return kind == GroupKind::Heisenberg1 ? "heisenberg" : "abelian";
}

GroupSpec::GroupSpec(GroupKind kind, std::vector<Rational> weights)
    : kind_(kind), weights_(std::move(weights)), q_(0, 1) {
  for (const auto& w : weights_) q_ = q_ + w;
}

GroupSpec GroupSpec::make(GroupKind kind, std::vector<Rational> weights) {
  if (kind == GroupKind::Heisenberg1) return GroupSpec(kind, {Rational(1), Rational(1), Rational(2)});
  if (weights.empty()) throw InvalidArgument("group weights must be non-empty");
  for (const auto& w : weights) {
    if (w.num <= 0) throw InvalidArgument("group weights must be positive, got " + w.str());
    if (w.value() < 1.0) throw InvalidArgument("group weights must be >= 1, got " + w.str());
  }
  const auto smallest = std::min_element(weights.begin(), weights.end(),
                                         [](const Rational& a, const Rational& b) { return a.value() < b.value(); });
  if (!(*smallest == Rational(1))) throw InvalidArgument("the smallest group weight must be 1");
  return GroupSpec(kind, std::move(weights));
}

namespace {

void check_dim(const GroupSpec& spec, std::span<const double> x, const char* what) {
  if (x.size() != spec.dim()) {
    std::ostringstream os;
    os << what << ": point has dimension " << x.size() << ", group has dimension " << spec.dim();
    throw InvalidArgument(os.str());
  }
}

}  // namespace

Point dilate_point(const GroupSpec& spec, double r, std::span<const double> x) {
  if (!(r > 0.0)) throw InvalidArgument("dilation factor must be positive");
  check_dim(spec, x, "dilate_point");
  Point out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::pow(r, spec.weights()[i].value());
  return out;
}

Point group_multiply(const GroupSpec& spec, std::span<const double> a, std::span<const double> b) {
  check_dim(spec, a, "group_multiply");
  check_dim(spec, b, "group_multiply");
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  if (spec.kind() == GroupKind::Heisenberg1) out[2] += 0.5 * (a[0] * b[1] - a[1] * b[0]);
  return out;
}

Point group_inverse(const GroupSpec& spec, std::span<const double> x) {
  check_dim(spec, x, "group_inverse");
  Point out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return -v; });
  return out;
}

double quasi_norm(const GroupSpec& spec, std::span<const double> x) {
  check_dim(spec, x, "quasi_norm");
  long m = 1;
  for (const auto& w : spec.weights()) m = std::lcm(m, w.num);
  // Scale out the largest homogeneous coordinate before raising to high powers.
  double scale = 0.0;
  std::vector<double> hom(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    hom[i] = std::pow(std::abs(x[i]), 1.0 / spec.weights()[i].value());
    scale = std::max(scale, hom[i]);
  }
  if (scale == 0.0) return 0.0;
  const double power = 2.0 * static_cast<double>(m);
  double sum = 0.0;
  for (double h : hom) sum += std::pow(h / scale, power);
  return scale * std::pow(sum, 1.0 / power);
}

// ---------------------------------------------------------------------------

Grid::Grid(std::vector<double> half_extent, std::vector<int> counts, Boundary boundary)
    : half_extent_(std::move(half_extent)), counts_(std::move(counts)), boundary_(boundary) {
  if (counts_.empty() || counts_.size() != half_extent_.size())
    throw InvalidArgument("grid needs one half-extent and one point count per axis");
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (!(half_extent_[i] > 0.0) || !std::isfinite(half_extent_[i]))
      throw InvalidArgument("grid half-extents must be positive and finite");
    if (counts_[i] < 2 || counts_[i] % 2 != 0)
      throw InvalidArgument("grid point counts must be even and >= 2");
    if (boundary_ == Boundary::Periodic && (counts_[i] & (counts_[i] - 1)) != 0)
      throw InvalidArgument("periodic grids need power-of-two point counts, got " + std::to_string(counts_[i]));
  }
  strides_.assign(counts_.size(), 1);
  for (std::size_t i = counts_.size() - 1; i > 0; --i) strides_[i - 1] = strides_[i] * counts_[i];
  size_ = strides_[0] * counts_[0];
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < dim(); ++i) v *= spacing(i);
  return v;
}

std::size_t Grid::linear_index(std::span<const int> multi) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < dim(); ++i) idx += strides_[i] * static_cast<std::size_t>(multi[i]);
  return idx;
}

std::vector<int> Grid::multi_index(std::size_t linear) const {
  std::vector<int> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    out[i] = static_cast<int>(linear / strides_[i]);
    linear %= strides_[i];
  }
  return out;
}

Point Grid::node(std::size_t linear) const {
  const auto mi = multi_index(linear);
  Point p(dim());
  for (std::size_t i = 0; i < dim(); ++i) p[i] = coordinate(i, mi[i]);
  return p;
}

Grid Grid::refined() const {
  std::vector<int> c = counts_;
  for (auto& n : c) n *= 2;
  return Grid(half_extent_, std::move(c), boundary_);
}

// ---------------------------------------------------------------------------

SampledFunction::SampledFunction(Grid grid) : grid_(std::move(grid)), values_(grid_.size()) {}

SampledFunction::SampledFunction(Grid grid, std::vector<Complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw InvalidArgument("sample count " + std::to_string(values_.size()) + " does not match grid size " +
                          std::to_string(grid_.size()));
}

SampledFunction SampledFunction::sample(const Grid& grid,
                                        const std::function<Complex(std::span<const double>)>& fn) {
  SampledFunction f(grid);
  std::vector<int> mi(grid.dim(), 0);
  Point x(grid.dim());
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    for (std::size_t a = 0; a < grid.dim(); ++a) x[a] = grid.coordinate(a, mi[a]);
    f.values_[idx] = fn(x);
    for (std::size_t a = grid.dim(); a-- > 0;) {
      if (++mi[a] < grid.count(a)) break;
      mi[a] = 0;
    }
  }
  return f;
}

bool SampledFunction::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

SampledFunction& SampledFunction::operator+=(const SampledFunction& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("grid mismatch in addition");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

SampledFunction& SampledFunction::operator-=(const SampledFunction& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("grid mismatch in subtraction");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

SampledFunction& SampledFunction::operator*=(Complex c) {
  for (auto& v : values_) v *= c;
  return *this;
}

double lp_norm(const SampledFunction& f, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("L^p norm needs p >= 1");
  const auto vals = f.values();
  if (std::isinf(p)) {
    double m = 0.0;
    for (auto v : vals) m = std::max(m, std::abs(v));
    return m;
  }
  // Normalize by the max modulus so large p does not overflow.
  double m = 0.0;
  for (auto v : vals) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  double sum = 0.0;
  if (p == 2.0) {
    for (auto v : vals) sum += std::norm(v / m);
  } else if (p == 1.0) {
    for (auto v : vals) sum += std::abs(v) / m;
  } else {
    for (auto v : vals) sum += std::pow(std::abs(v) / m, p);
  }
  return m * std::pow(sum * f.grid().cell_volume(), 1.0 / p);
}

Complex inner(const SampledFunction& f, const SampledFunction& g) {
  if (!(f.grid() == g.grid())) throw InvalidArgument("grid mismatch in inner product");
  Complex s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::conj(f[i]) * g[i];
  return s * f.grid().cell_volume();
}

double relative_l2_error(const SampledFunction& f, const SampledFunction& reference) {
  if (!(f.grid() == reference.grid())) throw InvalidArgument("grid mismatch in error computation");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    num += std::norm(f[i] - reference[i]);
    den += std::norm(reference[i]);
  }
  if (den == 0.0) return std::sqrt(num);
  return std::sqrt(num / den);
}

namespace {

constexpr double kAlignTol = 1e-9;

// Node index of coordinate v on `axis` after periodic wrapping, or nullopt when v is
// not a node. Sets *outside when v lies beyond a truncated box.
std::optional<long> locate(const Grid& grid, std::size_t axis, double v, bool* outside) {
  const double h = grid.spacing(axis);
  const double s = (v + grid.half_extent(axis)) / h;
  const double k = std::round(s);
  if (std::abs(s - k) > kAlignTol * std::max(1.0, std::abs(s))) return std::nullopt;
  long idx = static_cast<long>(k);
  const long n = grid.count(axis);
  if (grid.boundary() == Boundary::Periodic) {
    idx %= n;
    if (idx < 0) idx += n;
  } else if (idx < 0 || idx >= n) {
    *outside = true;
  }
  return idx;
}

}  // namespace

SampledFunction translate(const GroupSpec& spec, const SampledFunction& f, std::span<const double> h) {
  const Grid& grid = f.grid();
  if (h.size() != spec.dim() || grid.dim() != spec.dim())
    throw InvalidArgument("translate: dimension mismatch between group, grid and shift");
  SampledFunction out(grid);
  Point x(grid.dim());
  std::vector<int> target(grid.dim());
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const auto mi = grid.multi_index(idx);
    for (std::size_t a = 0; a < grid.dim(); ++a) x[a] = grid.coordinate(a, mi[a]);
    const Point hx = group_multiply(spec, h, x);
    bool outside = false;
    for (std::size_t a = 0; a < grid.dim(); ++a) {
      const auto k = locate(grid, a, hx[a], &outside);
      if (!k) throw InvalidArgument("translate: shift is not grid-aligned");
      target[a] = static_cast<int>(*k);
    }
    out[idx] = outside ? Complex(0.0) : f[grid.linear_index(target)];
  }
  return out;
}

SampledFunction dilate_function(const GroupSpec& spec, const SampledFunction& f, double r) {
  const Grid& grid = f.grid();
  if (grid.dim() != spec.dim()) throw InvalidArgument("dilate_function: grid and group dimensions differ");
  if (!(r > 0.0)) throw InvalidArgument("dilate_function: r must be positive");
  const double k = std::log2(r);
  if (std::abs(k - std::round(k)) > 1e-12)
    throw InvalidArgument("dilate_function: r must be a power of two");
  const long kk = std::lround(k);
  if (kk < 0)
    throw InvalidArgument("dilate_function: r < 1 would need values between nodes or outside the grid");
  std::vector<long> factor(grid.dim());
  for (std::size_t a = 0; a < grid.dim(); ++a) {
    const Rational e = spec.weights()[a] * Rational(kk);
    if (e.den != 1) throw InvalidArgument("dilate_function: r^nu is not a power of two on axis " + std::to_string(a));
    factor[a] = 1L << e.num;
  }
  SampledFunction out(grid);
  std::vector<int> target(grid.dim());
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const auto mi = grid.multi_index(idx);
    bool outside = false;
    for (std::size_t a = 0; a < grid.dim(); ++a) {
      const long o = grid.origin_index(a);
      const long t = o + factor[a] * (mi[a] - o);
      if (t < 0 || t >= grid.count(a)) outside = true;
      target[a] = static_cast<int>(t);
    }
    out[idx] = outside ? Complex(0.0) : f[grid.linear_index(target)];
  }
  return out;
}

}  // namespace lpg
