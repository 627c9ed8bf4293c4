#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lpg/error.hpp"
#include "lpg/inequalities.hpp"

using namespace lpg;

namespace {

const auto kR1 = GroupSpec::make(GroupKind::AbelianGraded, {1});
const Grid kLine({32.0}, {512}, Boundary::Periodic);

RocklandOp line_op(const Grid& g = kLine) { return abelian_symbol_operator(kR1, g, {1}); }
DyadicPartition part_for(const RocklandOp& op) { return DyadicPartition(DyadicPartition::l_max_for(op.lambda_max())); }

}  // namespace

TEST_SUITE("inequalities") {
  TEST_CASE("slope fit") {
    const auto r = fit_slope({0, 1, 2, 3}, {1.0, 1.25, 1.5, 1.75}, 0.25);
    CHECK(r.fitted_slope == doctest::Approx(0.25));
    CHECK(r.intercept == doctest::Approx(1.0));
    CHECK(r.residual < 1e-14);
    CHECK(r.regime_reached);
    const auto noisy = fit_slope({0, 1, 2, 3}, {0.0, 0.3, 0.0, 0.3}, 0.0);
    CHECK(noisy.residual > kMaxResidual);
    CHECK_FALSE(noisy.regime_reached);
  }

  TEST_CASE("Nikolskii exponents") {
    const auto op = line_op();
    const auto f = spike(kLine);
    const std::vector<double> levels{1, 4, 16, 64};
    const auto same = nikolskii_experiment(op, f, 2.0, 2.0, levels);
    CHECK(same.theoretical_slope == 0.0);
    for (double y : same.ordinates) CHECK(y == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(nikolskii_experiment(op, f, 2.0, kInf, levels).theoretical_slope == 0.25);

    const Grid box({2, 2, 4}, {8, 8, 8}, Boundary::Truncated);
    const auto h = heisenberg_sublaplacian(box);
    CHECK(nikolskii_experiment(h, spike(box), 1.0, 2.0, {0.5, 1, 2, 4}).theoretical_slope == 1.0);
    CHECK_THROWS_AS(nikolskii_experiment(op, f, 2.0, kInf, {1, 4, 16}), InvalidArgument);
  }

  TEST_CASE("Nikolskii constant closed forms") {
    // Extent pi (m + 1/2): the unit band holds exactly 2m + 1 lattice modes.
    const Grid g({std::numbers::pi * 40.5}, {2048}, Boundary::Periodic);
    const auto op = line_op(g);
    CHECK(nikolskii_constant_abelian(op, 2.0, kInf) == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-4));
    CHECK(nikolskii_constant_abelian(op, 1.0, kInf) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-10));
    CHECK(nikolskii_constant_abelian(op, 2.0, 2.0) > 1.0);
  }

  TEST_CASE("Nikolskii inequality holds with the computed constant") {
    const Grid g({std::numbers::pi * 40.25}, {1024}, Boundary::Periodic);
    const auto op = line_op(g);
    const double c = nikolskii_constant_abelian(op, 2.0, kInf);
    const auto rep = nikolskii_experiment(op, spike(g), 2.0, kInf, {1, 4, 16, 64});
    for (std::size_t k = 0; k < rep.parameters.size(); ++k) {
      const auto t = band_project(op, rep.parameters[k], spike(g));
      CHECK(lp_norm(t, kInf) <= c * std::pow(rep.parameters[k], 0.25) * lp_norm(t, 2.0) + 1e-6);
    }
  }

  TEST_CASE("embedding chains") {
    const auto op = line_op();
    const auto p = part_for(op);
    const auto fam = standard_family(kLine, 21);
    const auto k1 = embedding_kind1(op, p, fam, 0.5, 0.5, 2.0, 2.0, 4.0);
    CHECK(k1.constant == 1.0);
    CHECK(k1.holds(1e-12));
    CHECK(k1.lhs.size() == 2 * fam.size());

    // Oracle: direct partial sums of the geometric series.
    const double eps = 1.0, q1 = 4.0, q2 = 1.0, nu = 2.0;
    double s = 0.0;
    for (int l = 0; l < 4000; ++l) s += std::exp2(-l * eps * q2 * q1 / (nu * (q1 - q2)));
    CHECK(embedding_kind2_constant(eps, q1, q2, nu) == doctest::Approx(std::pow(s, 1.0 / q2 - 1.0 / q1)));
    CHECK(embedding_kind2(op, p, fam, 0.0, eps, 2.0, q1, q2).holds(1e-12));
    CHECK_THROWS_AS(embedding_kind2(op, p, fam, 0.0, eps, 2.0, 1.0, 4.0), InvalidArgument);

    const auto k5 = embedding_kind5(op, p, fam, 2.0, 2.0);
    CHECK(k5.constant == 1.0);
    CHECK(k5.holds(1e-12));
    CHECK(embedding_kind5(op, p, fam, 1.0, 2.0).holds(1e-6));
  }

  TEST_CASE("dilation slopes") {
    const Grid g({16.0}, {4096}, Boundary::Periodic);
    const auto op = line_op(g);
    const auto base = apply(op, gaussian(g, {0.5}));
    const auto same = embedding_kind3(op, part_for(op), base, 0.0, 2.0, 2.0, 2.0, {0, 1, 2, 3});
    CHECK(same.slope_difference == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    const auto d = embedding_kind3(op, part_for(op), base, 0.0, 1.0, kInf, 2.0, {0, 1, 2, 3});
    CHECK(d.expected_difference == 1.0);
    CHECK(d.slope_difference == doctest::Approx(1.0).epsilon(0.05));
    CHECK_THROWS_AS(embedding_kind3(op, part_for(op), base, 0.0, 2.0, 1.0, 2.0, {0, 1}), InvalidArgument);
  }

  TEST_CASE("translation limit") {
    const Grid g({16.0}, {256}, Boundary::Periodic);
    const auto f = smoothed_indicator(g);
    const std::vector<Point> hs{{0.0}, {1.0}, {12.0}};
    const auto two = translation_limit_experiment(kR1, f, 2.0, hs);
    CHECK(two.front() == doctest::Approx(2.0));
    CHECK(two.back() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(translation_limit_experiment(kR1, f, 1.0, hs).back() == doctest::Approx(2.0));
  }
}
