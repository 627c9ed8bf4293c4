#include "lpg/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "fft.hpp"
#include "lpg/csv.hpp"
#include "lpg/error.hpp"

namespace lpg {

namespace {

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

void check_order(double p, double q) {
  if (!(p >= 1.0)) throw InvalidArgument("exponent p must satisfy p >= 1");
  if (!(q >= p)) throw InvalidArgument("exponents must satisfy p <= q");
}

void finish(EmbeddingReport& rep) {
  rep.worst_excess = -kInf;
  for (std::size_t i = 0; i < rep.lhs.size(); ++i) {
    const double excess = rep.rhs[i] > 0.0 ? (rep.lhs[i] - rep.constant * rep.rhs[i]) / rep.rhs[i]
                                           : (rep.lhs[i] > 0.0 ? kInf : 0.0);
    rep.worst_excess = std::max(rep.worst_excess, excess);
  }
}

void measure_constant(EmbeddingReport& rep) {
  rep.constant_measured = true;
  rep.constant = 0.0;
  for (std::size_t i = 0; i < rep.lhs.size(); ++i)
    rep.constant = std::max(rep.constant, rep.rhs[i] > 0.0 ? rep.lhs[i] / rep.rhs[i] : kInf);
  finish(rep);
}

}  // namespace

SlopeReport fit_slope(std::vector<double> x, std::vector<double> y, double theoretical_slope) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope fit needs at least two points");
  SlopeReport rep;
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("slope fit needs distinct abscissae");
  rep.fitted_slope = sxy / sxx;
  rep.intercept = my - rep.fitted_slope * mx;
  double ss = 0.0;
  rep.constant = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (rep.intercept + rep.fitted_slope * x[i]);
    ss += e * e;
    rep.constant = std::max(rep.constant, std::exp2(y[i] - theoretical_slope * x[i]));
  }
  rep.residual = std::sqrt(ss / n);
  rep.theoretical_slope = theoretical_slope;
  rep.regime_reached = rep.residual <= kMaxResidual;
  rep.abscissae = std::move(x);
  rep.ordinates = std::move(y);
  return rep;
}

SlopeReport nikolskii_experiment(const RocklandOp& op, const SampledFunction& f, double p, double q,
                                 const std::vector<double>& levels, const NikolskiiOptions& opts) {
  check_order(p, q);
  if (levels.size() < 4) throw InvalidArgument("Nikolskii experiment needs at least 4 levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] > 0.0)) throw InvalidArgument("Nikolskii levels must be positive");
    if (i > 0 && !(levels[i] > levels[i - 1])) throw InvalidArgument("Nikolskii levels must be increasing");
  }
  std::vector<double> x, y;
  for (double level : levels) {
    const SampledFunction g = opts.cutoff == Cutoff::Sharp
                                  ? band_project(op, level, f)
                                  : apply_multiplier(op, smooth_cutoff(level, opts.smooth_width), f, opts.calculus).value;
    const double np = lp_norm(g, p);
    if (np == 0.0) throw InvalidArgument("T_L f vanishes at L = " + format_number(level));
    x.push_back(std::log2(level));
    y.push_back(std::log2(lp_norm(g, q) / np));
  }
  auto rep = fit_slope(std::move(x), std::move(y), op.spec().Q() / op.nu() * (inv(p) - inv(q)));
  rep.parameters = levels;
  return rep;
}

double nikolskii_constant_abelian(const RocklandOp& op, double p, double q) {
  check_order(p, q);
  if (!op.has_symbol()) throw InvalidArgument("Nikolskii constant needs an abelian symbol operator");
  const Grid& g = op.grid();
  std::vector<Complex> buf(g.size());
  const auto& a = op.symbol().samples;
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = a[i] <= 1.0 ? 1.0 : 0.0;
  detail::fft_inverse(g.counts(), buf);
  const double vol = g.cell_volume();
  for (auto& v : buf) v /= vol;
  const double d = 1.0 + inv(q) - inv(p);
  const double rho = d == 0.0 ? kInf : 1.0 / d;
  return lp_norm(SampledFunction(g, std::move(buf)), rho);
}

EmbeddingReport embedding_kind1(const RocklandOp& op, const DyadicPartition& part,
                                const std::vector<FamilyMember>& family, double r, double eps, double p, double q1,
                                double q2, const CalculusOptions& opts) {
  if (!(eps > 0.0)) throw InvalidArgument("embedding kind 1 needs eps > 0");
  if (!(q1 <= q2)) throw InvalidArgument("embedding kind 1 needs q1 <= q2");
  EmbeddingReport rep;
  rep.kind = 1;
  for (const auto& m : family) {
    const auto bs = besov_report(op, part, m.f, {r, p, q1, true}, opts).block_norms;
    const double nu = op.nu();
    const double a = besov_aggregate(bs, r, q2, nu);
    const double b = besov_aggregate(bs, r, q1, nu);
    const double c = besov_aggregate(bs, r + eps, q1, nu);
    rep.members.push_back(m.name + ":q");
    rep.lhs.push_back(a);
    rep.rhs.push_back(b);
    rep.members.push_back(m.name + ":eps");
    rep.lhs.push_back(b);
    rep.rhs.push_back(c);
  }
  finish(rep);
  return rep;
}

double embedding_kind2_constant(double eps, double q1, double q2, double nu) {
  if (!(eps > 0.0) || !(q2 > 0.0) || !(q1 > q2)) throw InvalidArgument("embedding kind 2 needs eps > 0 and 0 < q2 < q1");
  const double rate = std::isinf(q1) ? eps * q2 / nu : eps * q2 * q1 / (nu * (q1 - q2));
  const double sum = 1.0 / (1.0 - std::exp2(-rate));
  return std::pow(sum, 1.0 / q2 - inv(q1));
}

EmbeddingReport embedding_kind2(const RocklandOp& op, const DyadicPartition& part,
                                const std::vector<FamilyMember>& family, double r, double eps, double p, double q1,
                                double q2, const CalculusOptions& opts) {
  EmbeddingReport rep;
  rep.kind = 2;
  rep.constant = embedding_kind2_constant(eps, q1, q2, op.nu());
  for (const auto& m : family) {
    const auto bs = besov_report(op, part, m.f, {r, p, q1, true}, opts).block_norms;
    rep.members.push_back(m.name);
    rep.lhs.push_back(besov_aggregate(bs, r, q2, op.nu()));
    rep.rhs.push_back(besov_aggregate(bs, r + eps, q1, op.nu()));
  }
  finish(rep);
  return rep;
}

DilationSlopes embedding_kind3(const RocklandOp& op, const DyadicPartition& part, const SampledFunction& f, double r,
                               double p1, double p2, double q, const std::vector<int>& js,
                               const CalculusOptions& opts) {
  check_order(p1, p2);
  if (js.size() < 2) throw InvalidArgument("embedding kind 3 needs at least two dilation steps");
  std::vector<double> x, y1, y2;
  for (int j : js) {
    if (j < 0) throw InvalidArgument("embedding kind 3 needs dilation steps j >= 0");
    const auto fj = dilate_function(op.spec(), f, std::exp2(j));
    const auto bs = blocks(op, part, fj, false, opts);
    std::vector<double> n1, n2;
    for (const auto& b : bs) {
      n1.push_back(lp_norm(b, p1));
      n2.push_back(lp_norm(b, p2));
    }
    x.push_back(j);
    y1.push_back(std::log2(besov_aggregate(n1, r, q, op.nu())));
    y2.push_back(std::log2(besov_aggregate(n2, r, q, op.nu())));
  }
  const double Q = op.spec().Q();
  DilationSlopes out;
  out.first = fit_slope(x, y1, r - Q * inv(p1));
  out.second = fit_slope(x, y2, r - Q * inv(p2));
  out.first.parameters = out.second.parameters = x;
  out.slope_difference = out.second.fitted_slope - out.first.fitted_slope;
  out.expected_difference = Q * (inv(p1) - inv(p2));
  return out;
}

std::pair<EmbeddingReport, EmbeddingReport> embedding_kind4(const RocklandOp& op, const DyadicPartition& part,
                                                            const std::vector<FamilyMember>& family, double r,
                                                            double p, const CalculusOptions& opts) {
  if (!(p > 1.0 && p <= 2.0)) throw InvalidArgument("embedding kind 4 needs 1 < p <= 2");
  EmbeddingReport a, b;
  a.kind = b.kind = 4;
  for (const auto& m : family) {
    const auto bs = besov_report(op, part, m.f, {r, p, p, true}, opts).block_norms;
    const double h = sobolev_norm(op, m.f, r, p, true, opts);
    a.members.push_back(m.name);
    a.lhs.push_back(h);
    a.rhs.push_back(besov_aggregate(bs, r, p, op.nu()));
    b.members.push_back(m.name);
    b.lhs.push_back(besov_aggregate(bs, r, 2.0, op.nu()));
    b.rhs.push_back(h);
  }
  measure_constant(a);
  measure_constant(b);
  return {a, b};
}

EmbeddingReport embedding_kind5(const RocklandOp& op, const DyadicPartition& part,
                                const std::vector<FamilyMember>& family, double p, double q,
                                const CalculusOptions& opts) {
  check_order(p, q);
  const double r = op.spec().Q() * (inv(p) - inv(q));
  EmbeddingReport rep;
  rep.kind = 5;
  for (const auto& m : family) {
    rep.members.push_back(m.name);
    rep.lhs.push_back(lp_norm(m.f, q));
    rep.rhs.push_back(besov_norm(op, part, m.f, {r, p, 1.0, true}, opts));
  }
  if (p == q) {
    rep.constant = 1.0;
    finish(rep);
  } else if (op.has_symbol()) {
    rep.constant = nikolskii_constant_abelian(op, p, q);
    finish(rep);
  } else {
    measure_constant(rep);
  }
  return rep;
}

std::vector<double> translation_limit_experiment(const GroupSpec& spec, const SampledFunction& f, double p,
                                                 const std::vector<Point>& hs) {
  const double n = lp_norm(f, p);
  if (n == 0.0) throw InvalidArgument("translation limit needs a nonzero function");
  std::vector<double> out;
  for (const auto& h : hs) out.push_back(lp_norm(f + translate(spec, f, h), p) / n);
  return out;
}

void write_slope_csv(std::ostream& os, const std::string& experiment, const std::string& group, double p, double q,
                     double r, const SlopeReport& rep, bool header) {
  if (header) os << "experiment,group,p,q,r,L_or_j,ratio,fitted_slope,theoretical_slope,residual,constant\n";
  for (std::size_t i = 0; i < rep.abscissae.size(); ++i)
    os << experiment << ',' << group << ',' << format_number(p) << ',' << format_number(q) << ','
       << format_number(r) << ','
       << format_number(i < rep.parameters.size() ? rep.parameters[i] : rep.abscissae[i]) << ','
       << format_number(std::exp2(rep.ordinates[i])) << ',' << format_number(rep.fitted_slope) << ','
       << format_number(rep.theoretical_slope) << ',' << format_number(rep.residual) << ','
       << format_number(rep.constant) << '\n';
}

}  // namespace lpg
