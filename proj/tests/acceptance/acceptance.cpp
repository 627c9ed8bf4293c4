// Acceptance suite: one PASS/FAIL line per criterion.
//
//   lpg_acceptance [--only N[,M...]] [--configs DIR]
//
// Exit status is 1 when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lpg/harness.hpp"
#include "lpg/inequalities.hpp"
#include "lpg/multipliers.hpp"

using namespace lpg;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // seconds; 0 when no runtime bound applies
  std::function<Verdict()> check;
};

fs::path g_configs = LPG_CONFIG_DIR;

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

const GroupSpec kR1 = GroupSpec::make(GroupKind::AbelianGraded, {1});
const GroupSpec kR2 = GroupSpec::make(GroupKind::AbelianGraded, {1, 2});

RocklandOp line_op(double half, int n) { return abelian_symbol_operator(kR1, Grid({half}, {n}, Boundary::Periodic), {1}); }

DyadicPartition partition_for(const RocklandOp& op, Smoothness s = Smoothness::Bump) {
  return DyadicPartition(DyadicPartition::l_max_for(op.lambda_max()), s);
}

bool stable(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

std::vector<double> log_samples(double lo, double hi, int n) {
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k) t[k] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * k / (n - 1));
  return t;
}

// ---------------------------------------------------------------------------

Verdict c1_partition() {
  double worst = 0.0;
  bool ok = true;
  for (auto s : {Smoothness::Bump, Smoothness::CubicSpline}) {
    const DyadicPartition p(20, s);
    const auto rep = validate_partition(p, log_samples(1e-3, std::ldexp(1.0, p.l_max() - 1), 10000));
    worst = std::max(worst, rep.max_sum_deviation);
    ok = ok && rep.passed;
  }
  return {ok && worst <= 1e-10, "max |sum psi_l - 1| = " + fmt(worst, "%.3e")};
}

Verdict c2_calculus_oracle() {
  CalculusOptions cheb, dense;
  cheb.method = Method::Chebyshev;
  cheb.tolerance = 1e-14;
  dense.method = Method::DenseEig;
  double worst = 0.0;
  const Grid box({2, 2, 4}, {8, 8, 8}, Boundary::Truncated);
  // Extent 32 keeps e^{-R} f well above rounding level for every family member.
  const Grid line({32.0}, {256}, Boundary::Periodic);
  const std::vector<std::pair<RocklandOp, Grid>> cases{{heisenberg_sublaplacian(box), box},
                                                       {abelian_symbol_operator(kR1, line, {1}), line}};
  for (const auto& [op, grid] : cases)
    for (const auto& m : standard_family(grid, 3)) {
      const auto a = apply_multiplier(op, exponential_decay(1.0), m.f, cheb).value;
      const auto b = apply_multiplier(op, exponential_decay(1.0), m.f, dense).value;
      worst = std::max(worst, relative_l2_error(a, b));
    }
  return {worst <= 1e-8, "max relative L2 error " + fmt(worst, "%.3e")};
}

Verdict c3_nikolskii_abelian() {
  // R, a = xi^2, sharp band projector on a spike.
  const auto op1 = line_op(std::numbers::pi * 40.25, 1024);
  const auto a = nikolskii_experiment(op1, spike(op1.grid()), 2.0, kInf, {1, 4, 16, 64});
  const bool ok_a = std::abs(a.fitted_slope - 0.25) <= 0.02 && a.residual <= 0.05;

  // R^2 weights (1,2), a = xi^4 + eta^2; smooth cutoff inside the band.
  const Grid g2({32.0, 16.0}, {1024, 2048}, Boundary::Periodic);
  const auto op2 = abelian_symbol_operator(kR2, g2, {2, 1});
  NikolskiiOptions opts;
  opts.cutoff = Cutoff::Smooth;
  opts.smooth_width = 0.5;
  std::vector<double> levels;
  for (int k = 2; k <= 6; ++k) levels.push_back(std::pow(4.0, k));
  const auto b = nikolskii_experiment(op2, spike(g2), 1.0, 2.0, levels, opts);
  const bool ok_b = std::abs(b.fitted_slope - 0.375) <= 0.03 && b.residual <= 0.05;
  return {ok_a && ok_b, "R: slope " + fmt(a.fitted_slope) + " (res " + fmt(a.residual, "%.3g") + "); R2(1,2): slope " +
                            fmt(b.fitted_slope) + " (res " + fmt(b.residual, "%.3g") + ")"};
}

Verdict c4_nikolskii_heisenberg() {
  // Largest dense-eligible box, 16 x 16 x 32 nodes; dyadic L in [8 lambda_min, lambda_max / 8].
  const Grid box({4, 4, 16}, {16, 16, 32}, Boundary::Truncated);
  const auto op = heisenberg_sublaplacian(box);
  const auto& ev = dense_eig(op).eigenvalues;
  std::vector<double> levels;
  for (double l = std::exp2(std::ceil(std::log2(8.0 * ev[0]))); l <= ev[ev.size() - 1] / 8.0; l *= 2.0)
    levels.push_back(l);
  const auto r = nikolskii_experiment(op, spike(box), 1.0, 2.0, levels);
  return {std::abs(r.fitted_slope - 1.0) <= 0.1 && levels.size() >= 4,
          "slope " + fmt(r.fitted_slope) + " over " + std::to_string(levels.size()) + " levels from L = " +
              fmt(levels.front())};
}

Verdict c5_nikolskii_inequality() {
  const auto op = line_op(std::numbers::pi * 40.25, 1024);
  const auto& grid = op.grid();
  auto members = standard_family(grid, 7);
  members.push_back({"spike", spike(grid)});
  double worst = -kInf;
  for (auto [p, q] : std::vector<std::pair<double, double>>{{2.0, kInf}, {1.0, 2.0}, {1.0, kInf}}) {
    const double c = nikolskii_constant_abelian(op, p, q);
    const double expo = 0.5 * ((p == kInf ? 0.0 : 1.0 / p) - (q == kInf ? 0.0 : 1.0 / q));
    for (double level : {1.0, 4.0, 16.0, 64.0})
      for (const auto& m : members) {
        const auto g = band_project(op, level, m.f);
        worst = std::max(worst, lp_norm(g, q) - (c * std::pow(level, expo) * lp_norm(g, p) + 1e-6));
      }
  }
  // Extent pi (m + 1/2): exactly 2m + 1 lattice modes in [-1, 1].
  const auto closed = nikolskii_constant_abelian(line_op(std::numbers::pi * 40.5, 2048), 2.0, kInf);
  const double err = std::abs(closed - 1.0 / std::sqrt(std::numbers::pi));
  return {worst <= 0.0 && err <= 1e-4,
          "worst lhs - rhs = " + fmt(worst, "%.3e") + "; |C - pi^-1/2| = " + fmt(err, "%.3e")};
}

Verdict c6_lp_equivalence() {
  const Grid g0({32.0}, {256}, Boundary::Periodic);
  std::string detail;
  bool ok = true;
  const auto op0 = abelian_symbol_operator(kR1, g0, {1});
  const auto op1 = abelian_symbol_operator(kR1, g0.refined(), {1});
  const auto f0 = standard_family(g0, 1);
  const auto f1 = standard_family(g0.refined(), 1);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const auto a = lp_equivalence_experiment(op0, partition_for(op0), f0, p);
    const auto b = lp_equivalence_experiment(op1, partition_for(op1), f1, p);
    bool pass = a.bounded() && b.bounded() && stable(a.c_hat, b.c_hat, 0.2) && stable(a.C_hat, b.C_hat, 0.2);
    if (p == 2.0)
      pass = pass && a.C_hat <= 1.0 + 1e-8 && b.C_hat <= 1.0 + 1e-8 && a.c_hat >= std::sqrt(0.5) - 1e-6 &&
             b.c_hat >= std::sqrt(0.5) - 1e-6;
    ok = ok && pass;
    detail += "p=" + fmt(p) + " [" + fmt(a.c_hat, "%.4f") + ", " + fmt(a.C_hat, "%.4f") + "] ";
  }
  return {ok, detail};
}

Verdict c7_dual_dilation() {
  const FrequencyFunction sigma = [](std::span<const double> xi) {
    double s = 0.0;
    for (double v : xi) s += v * v;
    return Complex(std::exp(-s));
  };
  double worst = 0.0;
  const std::vector<std::pair<GroupSpec, Grid>> cases{
      {kR1, Grid({192.0}, {1024}, Boundary::Periodic)},
      {kR2, Grid({48.0, 192.0}, {256, 4096}, Boundary::Periodic)}};
  for (const auto& [spec, grid] : cases)
    for (double r : {2.0, 4.0})
      for (double s : {1.0, 2.0}) {
        const auto d = dual_dilation_scaling_check(spec, grid, sigma, r, s);
        worst = std::max(worst, std::abs(d.ratio / d.expected - 1.0));
      }
  return {worst <= 1e-4, "max |ratio / r^{s-Q/2} - 1| = " + fmt(worst, "%.3e")};
}

Verdict c8_embedding_slopes() {
  // Base functions R g for a Gaussian g: no spectral mass near 0, so dilation shifts the blocks.
  const Grid g1({16.0}, {4096}, Boundary::Periodic);
  const auto op1 = abelian_symbol_operator(kR1, g1, {1});
  const auto d1 = embedding_kind3(op1, partition_for(op1), apply(op1, gaussian(g1, {0.5})), 0.0, 1.0, kInf, 2.0,
                                  {0, 1, 2, 3});
  const bool ok1 = std::abs(d1.slope_difference - 1.0) <= 0.05;

  const Grid gh({10, 10, 10}, {60, 60, 120}, Boundary::Truncated);
  const auto oph = heisenberg_sublaplacian(gh);
  CalculusOptions opts;
  opts.tolerance = 1e-6;
  opts.max_degree = 65536;
  const auto dh = embedding_kind3(oph, partition_for(oph), apply(oph, gaussian(gh, {1, 1, 1})), 0.0, 1.0, 2.0, 2.0,
                                  {0, 1}, opts);
  const bool okh = std::abs(dh.slope_difference - 2.0) <= 0.1;
  return {ok1 && okh, "R: " + fmt(d1.slope_difference) + " vs 1; H1: " + fmt(dh.slope_difference) + " vs 2 (slopes " +
                          fmt(dh.first.fitted_slope) + ", " + fmt(dh.second.fitted_slope) + ")"};
}

Verdict c9_embedding_constants() {
  bool ok = true;
  double worst1 = -kInf, worst_other = -kInf;
  const Grid g1({32.0}, {512}, Boundary::Periodic);
  const Grid g2({16.0, 16.0}, {128, 256}, Boundary::Periodic);
  const Grid gh({4, 4, 8}, {8, 8, 16}, Boundary::Truncated);
  const std::vector<RocklandOp> ops{abelian_symbol_operator(kR1, g1, {1}), abelian_symbol_operator(kR2, g2, {2, 1}),
                                    heisenberg_sublaplacian(gh)};
  for (const auto& op : ops) {
    const auto part = partition_for(op);
    const auto fam = standard_family(op.grid(), 11);
    for (double p : {1.0, 2.0, 4.0}) {
      const auto k1 = embedding_kind1(op, part, fam, 0.5, 0.5, p, 2.0, 4.0);
      ok = ok && k1.constant == 1.0;
      worst1 = std::max(worst1, k1.worst_excess);
      const auto k2 = embedding_kind2(op, part, fam, 0.0, 1.0, p, 4.0, 1.0);
      worst_other = std::max(worst_other, k2.worst_excess);
    }
    if (op.has_symbol())
      for (auto [p, q] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {2.0, 2.0}, {1.0, 2.0}, {2.0, kInf}}) {
        const auto k5 = embedding_kind5(op, part, fam, p, q);
        ok = ok && !k5.constant_measured;
        worst_other = std::max(worst_other, k5.worst_excess);
      }
    else
      worst_other = std::max(worst_other, embedding_kind5(op, part, fam, 2.0, 2.0).worst_excess);
  }
  ok = ok && worst1 <= 1e-14 && worst_other <= 1e-12;
  return {ok, "kind 1 worst relative excess " + fmt(worst1, "%.3e") + "; kinds 2, 5 worst " + fmt(worst_other, "%.3e")};
}

Verdict c10_interpolation() {
  bool ok = true;
  std::string detail;
  const Grid g0({32.0}, {256}, Boundary::Periodic);
  for (auto [r0, r1] : std::vector<std::pair<double, double>>{{0.0, 2.0}, {1.0, 3.0}}) {
    std::vector<double> lo, hi;
    for (const auto& g : {g0, g0.refined()}) {
      const auto op = abelian_symbol_operator(kR1, g, {1});
      const auto part = partition_for(op);
      std::vector<double> ratios;
      for (const auto& m : standard_family(g, 5))
        ratios.push_back(interpolation_norm(op, m.f, 0.5, 2.0, {r0, 2.0}, {r1, 2.0}) /
                         besov_norm(op, part, m.f, {0.5 * (r0 + r1), 2.0, 2.0, true}));
      lo.push_back(*std::min_element(ratios.begin(), ratios.end()));
      hi.push_back(*std::max_element(ratios.begin(), ratios.end()));
    }
    ok = ok && lo[0] >= 0.1 && hi[0] <= 10.0 && lo[1] >= 0.1 && hi[1] <= 10.0 && stable(lo[0], lo[1], 0.2) &&
         stable(hi[0], hi[1], 0.2);
    detail += "(" + fmt(r0) + "," + fmt(r1) + ") bracket [" + fmt(lo[0], "%.3f") + ", " + fmt(hi[0], "%.3f") + "]; ";
  }
  // One eigenvalue: K(t) = min(A, tB) ||f||, so the norm is A^{1/2} B^{1/2} (q theta (1 - theta))^{-1/q} ||f||.
  const auto op = abelian_symbol_operator(kR1, g0, {1});
  const double xi = 7.0 * std::numbers::pi / 32.0;
  const auto e = SampledFunction::sample(g0, [xi](auto x) { return std::exp(Complex(0, xi * x[0])); });
  const double closed = std::sqrt(xi * xi) * std::pow(0.5, -0.5) * lp_norm(e, 2.0);
  const double measured = interpolation_norm(op, e, 0.5, 2.0, {0.0, 2.0}, {2.0, 2.0});
  const double rel = std::abs(measured / closed - 1.0);
  ok = ok && rel <= 0.01;
  return {ok, detail + "closed form rel. error " + fmt(rel, "%.2e")};
}

Verdict c11_partition_independence() {
  std::vector<double> lo, hi;
  const Grid g0({16.0, 16.0}, {64, 128}, Boundary::Periodic);
  for (const auto& g : {g0, g0.refined()}) {
    const auto op = abelian_symbol_operator(kR2, g, {2, 1});
    const auto st = partition_independence_experiment(op, partition_for(op), partition_for(op, Smoothness::CubicSpline),
                                                      standard_family(g, 5), {1.0, 2.0, 2.0, true});
    lo.push_back(st.min);
    hi.push_back(st.max);
  }
  const bool ok = lo[0] >= 0.25 && hi[0] <= 4.0 && lo[1] >= 0.25 && hi[1] <= 4.0 && stable(lo[0], lo[1], 0.2) &&
                  stable(hi[0], hi[1], 0.2);
  return {ok, "bracket [" + fmt(lo[0], "%.4f") + ", " + fmt(hi[0], "%.4f") + "], refined [" + fmt(lo[1], "%.4f") +
                  ", " + fmt(hi[1], "%.4f") + "]"};
}

Verdict c12_marcinkiewicz() {
  const auto ip = marcinkiewicz_check(imaginary_power(1.0), -4, 18);
  const ScalarMultiplier sine{[](double l) { return Complex(std::sin(l)); }, "sin", 1.0};
  const auto sn = marcinkiewicz_check(sine, -4, 18);
  bool ok = ip.admissible && std::abs(ip.sup_variation / std::log(2.0) - 1.0) <= 0.01 && !sn.admissible;

  const Grid g0({32.0}, {256}, Boundary::Periodic);
  const auto op0 = abelian_symbol_operator(kR1, g0, {1});
  const auto op1 = abelian_symbol_operator(kR1, g0.refined(), {1});
  const auto f0 = standard_family(g0, 3);
  const auto f1 = standard_family(g0.refined(), 3);
  double p2 = 0.0;
  for (const auto& m : {imaginary_power(1.0), exponential_decay(0.1), smooth_cutoff(16.0, 0.5)}) {
    ok = ok && marcinkiewicz_check(m, -4, 18).admissible;
    for (double p : {1.5, 2.0, 4.0}) {
      const auto a = multiplier_boundedness_experiment(op0, m, p, f0);
      const auto b = multiplier_boundedness_experiment(op1, m, p, f1);
      ok = ok && std::isfinite(a.value) && stable(a.value, b.value, 0.2);
      if (p == 2.0) {
        p2 = std::max(p2, a.value);
        ok = ok && a.value <= 1.0 + 1e-8;
      }
    }
  }
  return {ok, "sup V_j(lambda^i) = " + fmt(ip.sup_variation) + ", sin sup V_j = " + fmt(sn.sup_variation, "%.4g") +
                  ", max p=2 ratio " + fmt(p2, "%.12f")};
}

Verdict c13_besov_transfer() {
  bool ok = true;
  double worst = -kInf;
  const Grid g1({32.0}, {512}, Boundary::Periodic);
  const Grid gh({4, 4, 8}, {12, 12, 24}, Boundary::Truncated);
  const std::vector<RocklandOp> ops{abelian_symbol_operator(kR1, g1, {1}), heisenberg_sublaplacian(gh)};
  for (const auto& op : ops) {
    const auto part = partition_for(op);
    const auto fam = standard_family(op.grid(), 5);
    std::vector<BesovParams> params;
    for (double p : {1.5, 2.0, 4.0})
      for (double r : {-1.0, 0.0, 1.0})
        for (double q : {1.0, 2.0, kInf}) params.push_back({r, p, q, true});
    for (const auto& m : {imaginary_power(1.0), exponential_decay(0.1), smooth_cutoff(16.0, 0.5)})
      for (const auto& rep : besov_transfer_experiment(op, part, m, params, fam)) {
        ok = ok && rep.passed(1e-6);
        worst = std::max(worst, rep.besov_ratio / rep.lp_ratio - 1.0);
      }
  }
  return {ok, "max besov_ratio / lp_ratio - 1 = " + fmt(worst, "%.3e")};
}

Verdict c14_translation() {
  bool ok = true;
  double worst = 0.0;
  const Grid gh({12, 12, 16}, {48, 48, 256}, Boundary::Truncated);
  const std::vector<Point> hh{{0, 0, 0}, {0.5, 0, 0}, {1, 0, 0}, {2, 0, 0}, {4, 0, 0}, {7, 0, 0}};
  const Grid g1({32.0}, {512}, Boundary::Periodic);
  const std::vector<Point> h1{{0}, {1}, {4}, {8}, {16}, {24}};
  const auto heis = GroupSpec::make(GroupKind::Heisenberg1);
  for (double p : {1.0, 2.0, 4.0}) {
    for (const auto& [spec, grid, hs] : {std::tuple{heis, gh, hh}, std::tuple{kR1, g1, h1}}) {
      const double last = translation_limit_experiment(spec, smoothed_indicator(grid), p, hs).back();
      const double err = std::abs(last / std::pow(2.0, 1.0 / p) - 1.0);
      worst = std::max(worst, err);
      ok = ok && err <= 0.01;
    }
  }
  return {ok, "max |ratio / 2^{1/p} - 1| = " + fmt(worst, "%.3e")};
}

Verdict c15_determinism() {
  // Every shipped config with a sub-minute runtime; Heisenberg slope configs are excluded for time.
  const std::vector<std::string> names{"minimal",        "partition",         "calculus_oracle_h1", "calculus_oracle_r1",
                                       "nikolskii_r1",   "lp_equivalence",    "dual_dilation_r1",   "embedding1",
                                       "embedding2",     "embedding3_r1",     "embedding5",         "interpolation",
                                       "partition_independence", "marcinkiewicz", "besov_transfer", "translation",
                                       "translation_r1"};
  const auto root = fs::temp_directory_path() / "lpg_acceptance_determinism";
  int compared = 0;
  std::string mismatch;
  for (const auto& name : names) {
    auto c = load_config(g_configs / (name + ".json"));
    std::map<std::string, std::string> first;
    for (int k = 0; k < 2; ++k) {
      c.output_dir = (root / name / std::to_string(k)).string();
      fs::remove_all(c.output_dir);
      const auto m = run(c);
      for (const auto& f : m.outputs) {
        if (f == "manifest.json") continue;
        std::ifstream in(fs::path(c.output_dir) / f, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        if (k == 0) first[f] = ss.str();
        else if (first[f] != ss.str()) mismatch += name + "/" + f + " ";
        else ++compared;
      }
    }
  }
  fs::remove_all(root);
  return {mismatch.empty() && compared > 0,
          mismatch.empty() ? std::to_string(compared) + " CSVs byte-identical across reruns" : "differs: " + mismatch};
}

const std::vector<Criterion> kCriteria{
    {1, "dyadic partition of unity", 1.0, c1_partition},
    {2, "spectral calculus oracle", 30.0, c2_calculus_oracle},
    {3, "Nikolskii slope (abelian)", 60.0, c3_nikolskii_abelian},
    {4, "Nikolskii slope (Heisenberg)", 300.0, c4_nikolskii_heisenberg},
    {5, "Nikolskii inequality with computed constant", 0.0, c5_nikolskii_inequality},
    {6, "Littlewood-Paley equivalence", 120.0, c6_lp_equivalence},
    {7, "dual dilation scaling", 10.0, c7_dual_dilation},
    {8, "embedding kind 3 slopes", 0.0, c8_embedding_slopes},
    {9, "embedding kinds 1, 2, 5", 0.0, c9_embedding_constants},
    {10, "interpolation", 0.0, c10_interpolation},
    {11, "partition independence", 0.0, c11_partition_independence},
    {12, "Marcinkiewicz multipliers", 0.0, c12_marcinkiewicz},
    {13, "Besov transfer", 0.0, c13_besov_transfer},
    {14, "translation limit", 0.0, c14_translation},
    {15, "determinism", 0.0, c15_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string item; std::getline(ss, item, ',');) only.insert(std::stoi(item));
    } else if (a == "--configs" && i + 1 < argc) {
      g_configs = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--only N[,M...]] [--configs DIR]\n", argv[0]);
      return 2;
    }
  }
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0 && secs > c.time_limit) {
      v.pass = false;
      v.detail += "; runtime over " + fmt(c.time_limit) + " s";
    }
    failures += v.pass ? 0 : 1;
    std::printf("criterion %2d %s: %s (%.1f s) %s\n", c.id, v.pass ? "PASS" : "FAIL", c.title.c_str(), secs,
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
