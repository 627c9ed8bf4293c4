#include "lpg/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "lpg/error.hpp"

namespace lpg {

ScalarMultiplier constant_multiplier(Complex c) {
  return {[c](double) { return c; }, "constant", std::abs(c)};
}

ScalarMultiplier imaginary_power(double tau) {
  return {[tau](double l) { return l > 0.0 ? std::exp(Complex(0.0, tau * std::log(l))) : Complex(1.0); },
          "imaginary_power", 1.0};
}

ScalarMultiplier exponential_decay(double rate) {
  return {[rate](double l) { return Complex(std::exp(-rate * l)); }, "exp_decay", 1.0};
}

ScalarMultiplier partition_block(const DyadicPartition& p, int l, bool shifted) {
  const double shift = shifted ? 1.0 : 0.0;
  return {[p, l, shift](double t) { return Complex(p.psi(l, t + shift)); }, "psi_" + std::to_string(l), 1.0};
}

ScalarMultiplier smooth_cutoff(double level, double width) {
  if (!(level > 0.0) || !(width > 0.0) || width > 1.0)
    throw InvalidArgument("smooth cutoff needs level > 0 and width in (0, 1]");
  return {[level, width](double t) {
            const double s = (t / level - (1.0 - width)) / width;
            if (s <= 0.0) return Complex(1.0);
            if (s >= 1.0) return Complex(0.0);
            const double a = std::exp(-1.0 / s);
            const double b = std::exp(-1.0 / (1.0 - s));
            return Complex(b / (a + b));
          },
          "smooth_cutoff", 1.0};
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Auto: return "auto";
    case Method::ExactSymbol: return "symbol";
    case Method::Chebyshev: return "chebyshev";
    case Method::DenseEig: return "dense";
  }
  return "?";
}

// ---------------------------------------------------------------------------

ChebyshevExpansion ChebyshevExpansion::fit(const ScalarMultiplier& m, double lambda_max, int degree) {
  if (degree < 1) throw InvalidArgument("Chebyshev degree must be >= 1");
  if (!(lambda_max >= 0.0)) throw InvalidArgument("Chebyshev interval needs lambda_max >= 0");
  ChebyshevExpansion e;
  e.lambda_max_ = lambda_max;
  if (lambda_max == 0.0) {
    e.coeffs_.assign(static_cast<std::size_t>(degree) + 1, Complex(0.0));
    e.coeffs_[0] = m(0.0);
    return e;
  }
  const int nodes = std::max(4 * (degree + 1), 512);
  std::vector<double> re(nodes), im(nodes);
  for (int j = 0; j < nodes; ++j) {
    const double x = std::cos(std::numbers::pi * (j + 0.5) / nodes);
    const Complex v = m(0.5 * (x + 1.0) * lambda_max);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InvalidArgument("multiplier '" + m.name + "' is not finite on [0, lambda_max]");
    re[j] = v.real();
    im[j] = v.imag();
  }
  const auto cr = detail::dct2(re);
  const auto ci = detail::dct2(im);
  std::vector<Complex> all(nodes);
  for (int k = 0; k < nodes; ++k) all[k] = Complex(cr[k], ci[k]) / static_cast<double>(nodes);
  all[0] *= 0.5;
  e.coeffs_.assign(all.begin(), all.begin() + degree + 1);
  double tail = 0.0;
  for (int k = degree + 1; k < nodes; ++k) tail += std::abs(all[k]);
  e.error_bound_ = tail;
  return e;
}

ChebyshevExpansion ChebyshevExpansion::fit_auto(const ScalarMultiplier& m, double lambda_max, double tol,
                                                int max_degree) {
  int d = std::min(16, max_degree);
  for (;;) {
    auto e = fit(m, lambda_max, d);
    if (e.error_bound() <= tol || d >= max_degree) return e;
    d = std::min(2 * d, max_degree);
  }
}

Complex ChebyshevExpansion::evaluate(double lambda) const {
  if (lambda_max_ == 0.0) return coeffs_[0];
  const double x = 2.0 * lambda / lambda_max_ - 1.0;
  Complex b1 = 0.0, b2 = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 1;) {
    const Complex b0 = coeffs_[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs_[0] + x * b1 - b2;
}

// ---------------------------------------------------------------------------

namespace {

using VecC = Eigen::VectorXcd;

VecC to_eigen(const SampledFunction& f) {
  VecC v(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) v[static_cast<Eigen::Index>(i)] = f[i];
  return v;
}

SampledFunction from_eigen(const Grid& g, const VecC& v) {
  std::vector<Complex> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v[i];
  return SampledFunction(g, std::move(out));
}

VecC raw_apply(const RocklandOp& op, const VecC& v) {
  if (op.is_sparse()) return op.matrix() * v;
  std::vector<Complex> buf(v.data(), v.data() + v.size());
  detail::fft_forward(op.grid().counts(), buf);
  const auto& a = op.symbol().samples;
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= a[i];
  detail::fft_inverse(op.grid().counts(), buf);
  return Eigen::Map<VecC>(buf.data(), v.size());
}

std::vector<SampledFunction> apply_symbol(const RocklandOp& op, std::span<const ScalarMultiplier> ms,
                                          const SampledFunction& f) {
  std::vector<Complex> hat(f.values().begin(), f.values().end());
  const auto& shape = op.grid().counts();
  detail::fft_forward(shape, hat);
  const auto& a = op.symbol().samples;
  std::vector<SampledFunction> out;
  out.reserve(ms.size());
  std::vector<Complex> buf(hat.size());
  for (const auto& m : ms) {
    for (std::size_t i = 0; i < hat.size(); ++i) buf[i] = hat[i] == Complex(0.0) ? Complex(0.0) : m(a[i]) * hat[i];
    detail::fft_inverse(shape, buf);
    out.emplace_back(op.grid(), buf);
  }
  return out;
}

std::vector<SampledFunction> apply_dense(const RocklandOp& op, std::span<const ScalarMultiplier> ms,
                                         const SampledFunction& f) {
  const EigDecomp& ed = op.eig();
  const VecC fv = to_eigen(f);
  const VecC c = ed.eigenvectors.transpose() * fv;
  std::vector<SampledFunction> out;
  out.reserve(ms.size());
  VecC w(c.size());
  for (const auto& m : ms) {
    for (Eigen::Index k = 0; k < c.size(); ++k) w[k] = m(std::max(ed.eigenvalues[k], 0.0)) * c[k];
    out.push_back(from_eigen(op.grid(), ed.eigenvectors * w));
  }
  return out;
}

// One three-term recurrence sweep shared by every expansion.
std::vector<SampledFunction> apply_chebyshev(const RocklandOp& op, std::span<const ChebyshevExpansion> es,
                                             const SampledFunction& f) {
  const double lmax = op.lambda_max();
  std::vector<VecC> acc;
  acc.reserve(es.size());
  const VecC t0 = to_eigen(f);
  int max_deg = 0;
  for (const auto& e : es) {
    acc.emplace_back(e.coefficients()[0] * t0);
    max_deg = std::max(max_deg, e.degree());
  }
  if (lmax > 0.0 && max_deg >= 1) {
    const double s = 2.0 / lmax;
    VecC prev = t0;
    VecC cur = s * raw_apply(op, t0) - t0;
    for (std::size_t j = 0; j < es.size(); ++j)
      if (es[j].degree() >= 1) acc[j] += es[j].coefficients()[1] * cur;
    for (int k = 2; k <= max_deg; ++k) {
      VecC next = 2.0 * (s * raw_apply(op, cur) - cur) - prev;
      for (std::size_t j = 0; j < es.size(); ++j)
        if (es[j].degree() >= k) acc[j] += es[j].coefficients()[static_cast<std::size_t>(k)] * next;
      prev = std::move(cur);
      cur = std::move(next);
    }
  }
  std::vector<SampledFunction> out;
  out.reserve(es.size());
  for (const auto& a : acc) out.push_back(from_eigen(op.grid(), a));
  return out;
}

}  // namespace

std::vector<MultiplierResult> apply_multipliers(const RocklandOp& op, std::span<const ScalarMultiplier> ms,
                                                const SampledFunction& f, const CalculusOptions& opts) {
  if (!(f.grid() == op.grid())) throw InvalidArgument("apply_multiplier: function grid does not match operator grid");
  if (opts.degree < 0) throw InvalidArgument("Chebyshev degree must be >= 1");
  std::vector<MultiplierResult> results(ms.size(), MultiplierResult{SampledFunction(op.grid())});
  if (ms.empty()) return results;

  Method method = opts.method;
  if (method == Method::ExactSymbol && !op.has_symbol())
    throw InvalidArgument("exact symbol calculus needs a symbol-backed operator");
  if (method == Method::DenseEig && !op.dense_eligible())
    throw Unsupported("dense eigendecomposition limited to " + std::to_string(kDenseLimit) + " nodes");
  if (method == Method::Auto && op.has_symbol()) method = Method::ExactSymbol;

  if (method == Method::ExactSymbol) {
    auto vals = apply_symbol(op, ms, f);
    for (std::size_t i = 0; i < ms.size(); ++i) results[i] = {std::move(vals[i]), Method::ExactSymbol, 0, 0.0};
    return results;
  }
  if (method == Method::DenseEig) {
    auto vals = apply_dense(op, ms, f);
    for (std::size_t i = 0; i < ms.size(); ++i) results[i] = {std::move(vals[i]), Method::DenseEig, 0, 0.0};
    return results;
  }

  // Chebyshev (explicit) or Auto on a sparse operator.
  std::vector<ChebyshevExpansion> expansions;
  std::vector<std::size_t> cheb_idx, dense_idx;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    auto e = opts.degree > 0 ? ChebyshevExpansion::fit(ms[i], op.lambda_max(), opts.degree)
                             : ChebyshevExpansion::fit_auto(ms[i], op.lambda_max(), opts.tolerance, opts.max_degree);
    if (method == Method::Auto && e.error_bound() > opts.tolerance) {
      if (!op.dense_eligible())
        throw Unsupported("multiplier '" + ms[i].name + "' has no Chebyshev expansion within tolerance up to degree " +
                          std::to_string(opts.max_degree) + " and the grid is too large for the dense oracle");
      dense_idx.push_back(i);
      continue;
    }
    cheb_idx.push_back(i);
    expansions.push_back(std::move(e));
  }
  if (!cheb_idx.empty()) {
    auto vals = apply_chebyshev(op, expansions, f);
    for (std::size_t j = 0; j < cheb_idx.size(); ++j)
      results[cheb_idx[j]] = {std::move(vals[j]), Method::Chebyshev, expansions[j].degree(),
                              expansions[j].error_bound()};
  }
  if (!dense_idx.empty()) {
    std::vector<ScalarMultiplier> dm;
    for (auto i : dense_idx) dm.push_back(ms[i]);
    auto vals = apply_dense(op, dm, f);
    for (std::size_t j = 0; j < dense_idx.size(); ++j)
      results[dense_idx[j]] = {std::move(vals[j]), Method::DenseEig, 0, 0.0};
  }
  return results;
}

MultiplierResult apply_multiplier(const RocklandOp& op, const ScalarMultiplier& m, const SampledFunction& f,
                                  const CalculusOptions& opts) {
  auto r = apply_multipliers(op, std::span<const ScalarMultiplier>(&m, 1), f, opts);
  return std::move(r.front());
}

SampledFunction band_project(const RocklandOp& op, double level, const SampledFunction& f) {
  if (!(level > 0.0)) throw InvalidArgument("band projector needs a positive level");
  if (!op.has_symbol() && !op.dense_eligible())
    throw Unsupported(
        "sharp band projection on a sparse grid beyond the dense limit; use a smoothed cutoff through "
        "apply_multiplier instead");
  const ScalarMultiplier chi{[level](double t) { return Complex(t <= level ? 1.0 : 0.0); }, "band", 1.0};
  CalculusOptions opts;
  opts.method = op.has_symbol() ? Method::ExactSymbol : Method::DenseEig;
  return apply_multiplier(op, chi, f, opts).value;
}

SampledFunction block(const RocklandOp& op, const DyadicPartition& p, int l, const SampledFunction& f,
                      const CalculusOptions& opts) {
  if (l < 0 || l > p.l_max()) throw InvalidArgument("block index outside [0, l_max]");
  return apply_multiplier(op, partition_block(p, l), f, opts).value;
}

std::vector<SampledFunction> blocks(const RocklandOp& op, const DyadicPartition& p, const SampledFunction& f,
                                    bool inhomogeneous, const CalculusOptions& opts) {
  std::vector<ScalarMultiplier> ms;
  ms.reserve(static_cast<std::size_t>(p.block_count()));
  for (int l = 0; l <= p.l_max(); ++l) ms.push_back(partition_block(p, l, inhomogeneous));
  auto res = apply_multipliers(op, ms, f, opts);
  std::vector<SampledFunction> out;
  out.reserve(res.size());
  for (auto& r : res) out.push_back(std::move(r.value));
  return out;
}

SpectralCoordinates spectral_coordinates(const RocklandOp& op, const SampledFunction& f) {
  if (!(f.grid() == op.grid())) throw InvalidArgument("grid mismatch");
  SpectralCoordinates sc;
  if (op.has_symbol()) {
    std::vector<Complex> hat(f.values().begin(), f.values().end());
    detail::fft_forward(op.grid().counts(), hat);
    const double s = 1.0 / std::sqrt(static_cast<double>(hat.size()));
    for (auto& v : hat) v *= s;
    sc.eigenvalues = op.symbol().samples;
    sc.coefficients = std::move(hat);
    return sc;
  }
  const EigDecomp& ed = op.eig();
  const VecC c = ed.eigenvectors.transpose() * to_eigen(f);
  sc.eigenvalues.assign(ed.eigenvalues.data(), ed.eigenvalues.data() + ed.eigenvalues.size());
  sc.coefficients.assign(c.data(), c.data() + c.size());
  return sc;
}

}  // namespace lpg
