#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lpg/calculus.hpp"
#include "lpg/error.hpp"
#include "lpg/families.hpp"

using namespace lpg;

namespace {

const Grid kBox8({2, 2, 4}, {8, 8, 8}, Boundary::Truncated);
const Grid kLine({8.0}, {256}, Boundary::Periodic);

RocklandOp line_op() { return abelian_symbol_operator(GroupSpec::make(GroupKind::AbelianGraded, {1}), kLine, {1}); }

ScalarMultiplier identity_symbol() { return {[](double l) { return Complex(l); }, "lambda", std::nullopt}; }

// Independent DFT oracle: coefficient of mode k for a grid of N points.
std::vector<Complex> naive_dft(const SampledFunction& f) {
  const std::size_t n = f.size();
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) out[k] += f[j] * std::polar(1.0, -2.0 * std::numbers::pi * double(k * j) / n);
  return out;
}

}  // namespace

TEST_SUITE("calculus") {
  TEST_CASE("identity multiplier reproduces f") {
    const auto op = heisenberg_sublaplacian(kBox8);
    const auto f = standard_family(kBox8, 1).at(4).f;
    for (auto m : {Method::Chebyshev, Method::DenseEig}) {
      CalculusOptions o;
      o.method = m;
      CHECK(relative_l2_error(apply_multiplier(op, constant_multiplier(1.0), f, o).value, f) < 1e-10);
    }
    CalculusOptions o;
    o.method = Method::ExactSymbol;
    const auto g = standard_family(kLine, 1).at(4).f;
    CHECK(relative_l2_error(apply_multiplier(line_op(), constant_multiplier(1.0), g, o).value, g) < 1e-10);
    CHECK_THROWS_AS(apply_multiplier(op, constant_multiplier(1.0), f, o), InvalidArgument);
  }

  TEST_CASE("Chebyshev reproduces polynomials") {
    const auto op = heisenberg_sublaplacian(kBox8);
    const auto f = standard_family(kBox8, 2).at(5).f;
    CalculusOptions o;
    o.method = Method::Chebyshev;
    o.degree = 3;
    CHECK(relative_l2_error(apply_multiplier(op, identity_symbol(), f, o).value, apply(op, f)) < 1e-10);
  }

  TEST_CASE("Chebyshev matches the dense oracle") {
    const auto op = heisenberg_sublaplacian(kBox8);
    CalculusOptions cheb, dense;
    cheb.method = Method::Chebyshev;
    cheb.degree = 60;
    dense.method = Method::DenseEig;
    for (const auto& m : standard_family(kBox8, 3)) {
      const auto a = apply_multiplier(op, exponential_decay(1.0), m.f, cheb);
      const auto b = apply_multiplier(op, exponential_decay(1.0), m.f, dense);
      CHECK(relative_l2_error(a.value, b.value) <= 1e-8);
    }
    const auto e = ChebyshevExpansion::fit_auto(exponential_decay(1.0), op.lambda_max(), 1e-12, 4096);
    CHECK(e.error_bound() <= 1e-12);
    CHECK(std::abs(e.evaluate(0.7) - std::exp(-0.7)) < 1e-12);
  }

  TEST_CASE("band projection") {
    const auto op = line_op();
    const auto f = standard_family(kLine, 4).at(6).f;
    CHECK(relative_l2_error(band_project(op, op.lambda_max(), f), f) < 1e-14);
    const auto t = band_project(op, 1.0, f);
    CHECK(relative_l2_error(band_project(op, 1.0, t), t) < 1e-10);
    const auto c = naive_dft(t);
    const double dxi = std::numbers::pi / 8.0;
    for (int k = 0; k < 256; ++k) {
      const int kk = k < 128 ? k : k - 256;
      if (std::abs(kk * dxi) > 1.0) CHECK(std::abs(c[k]) < 1e-10);
    }
  }

  TEST_CASE("blocks") {
    const auto op = line_op();
    const DyadicPartition p(DyadicPartition::l_max_for(op.lambda_max()));
    const auto f = standard_family(kLine, 5).at(7).f;
    const auto bs = blocks(op, p, f);
    SampledFunction sum(kLine);
    for (const auto& b : bs) sum += b;
    CHECK(relative_l2_error(sum, f) < 1e-8);
    const auto twice = block(op, p, 2, block(op, p, 4, f));
    CHECK(lp_norm(twice, 2.0) < 1e-12 * lp_norm(f, 2.0));

    const double xi = 11.0 * std::numbers::pi / 8.0;
    const auto e = SampledFunction::sample(kLine, [xi](auto x) { return std::exp(Complex(0, xi * x[0])); });
    for (int l = 0; l <= p.l_max(); ++l) CHECK(relative_l2_error(block(op, p, l, e), p.psi(l, xi * xi) * e) < 1e-10);
  }

  TEST_CASE("blocks on the sub-Laplacian") {
    const auto op = heisenberg_sublaplacian(kBox8);
    const DyadicPartition p(DyadicPartition::l_max_for(op.lambda_max()));
    const auto f = standard_family(kBox8, 6).at(3).f;
    CalculusOptions cheb, dense;
    cheb.method = Method::Chebyshev;
    dense.method = Method::DenseEig;
    const auto a = blocks(op, p, f, false, cheb);
    const auto b = blocks(op, p, f, false, dense);
    for (std::size_t l = 0; l < a.size(); ++l) CHECK(lp_norm(a[l] - b[l], 2.0) <= 1e-7 * lp_norm(f, 2.0));
  }

  TEST_CASE("multipliers") {
    CHECK(imaginary_power(1.0)(0.0) == Complex(1.0));
    CHECK(std::abs(imaginary_power(2.0)(3.0) - std::exp(Complex(0, 2.0 * std::log(3.0)))) < 1e-15);
    CHECK(smooth_cutoff(8.0, 0.5)(3.9).real() == 1.0);
    CHECK(smooth_cutoff(8.0, 0.5)(8.0).real() == 0.0);
    const DyadicPartition p(8);
    CHECK(partition_block(p, 2, true)(1.0).real() == doctest::Approx(p.psi(2, 2.0)));
  }

  TEST_CASE("spectral coordinates preserve the l2 mass") {
    const auto op = heisenberg_sublaplacian(kBox8);
    const auto f = standard_family(kBox8, 7).at(8).f;
    const auto sc = spectral_coordinates(op, f);
    double m = 0.0, n = 0.0;
    for (auto c : sc.coefficients) m += std::norm(c);
    for (auto v : f.values()) n += std::norm(v);
    CHECK(m == doctest::Approx(n).epsilon(1e-10));
  }
}
