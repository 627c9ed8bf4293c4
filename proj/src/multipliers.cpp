#include "lpg/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "lpg/csv.hpp"
#include "lpg/error.hpp"

namespace lpg {

namespace {

double sampled_variation(const ScalarMultiplier& m, double a, double b, int n, double* sup_abs) {
  const double ratio = std::log(b / a);
  double v = 0.0;
  Complex prev = m(a);
  for (int k = 1; k <= n; ++k) {
    const Complex cur = m(a * std::exp(ratio * k / n));
    if (!std::isfinite(cur.real()) || !std::isfinite(cur.imag()))
      throw InvalidArgument("multiplier '" + m.name + "' is not finite on the sampled interval");
    v += std::abs(cur - prev);
    if (sup_abs) *sup_abs = std::max(*sup_abs, std::abs(cur));
    prev = cur;
  }
  if (sup_abs) *sup_abs = std::max(*sup_abs, std::abs(m(a)));
  return v;
}

Variation refine(const ScalarMultiplier& m, double a, double b, int samples, double* sup_abs) {
  const double coarse = sampled_variation(m, a, b, samples, nullptr);
  const double fine = sampled_variation(m, a, b, 2 * samples, sup_abs);
  return {fine, std::abs(fine - coarse) <= 0.01 * fine || fine < 1e-12};
}

}  // namespace

Variation bv_norm(const ScalarMultiplier& m, double a, double b, int samples) {
  if (!(a > 0.0 && b > a)) throw InvalidArgument("variation interval needs 0 < a < b");
  if (samples < 64) throw InvalidArgument("variation needs at least 64 samples per interval");
  return refine(m, a, b, samples, nullptr);
}

Variation dyadic_bv_norm(const ScalarMultiplier& m, int j, int samples_per_interval) {
  return bv_norm(m, std::ldexp(1.0, j - 1), std::ldexp(1.0, j), samples_per_interval);
}

BVReport marcinkiewicz_check(const ScalarMultiplier& m, int j_min, int j_max, double threshold,
                             int samples_per_interval) {
  if (j_max < j_min) throw InvalidArgument("empty dyadic range");
  if (samples_per_interval < 64) throw InvalidArgument("variation needs at least 64 samples per interval");
  BVReport rep;
  rep.threshold = threshold;
  bool all_stable = true;
  for (int j = j_min; j <= j_max; ++j) {
    rep.js.push_back(j);
    const auto d = refine(m, std::ldexp(1.0, j - 1), std::ldexp(1.0, j), samples_per_interval, &rep.sup_abs);
    const auto w = refine(m, std::ldexp(1.0, j - 1), std::ldexp(1.0, j + 1), 2 * samples_per_interval, &rep.sup_abs);
    rep.dyadic.push_back(d);
    rep.wide.push_back(w);
    rep.sup_variation = std::max(rep.sup_variation, d.value);
    all_stable = all_stable && d.stable;
  }
  rep.admissible = all_stable && rep.sup_variation <= threshold && rep.sup_abs <= threshold;
  return rep;
}

OperatorNormEstimate multiplier_boundedness_experiment(const RocklandOp& op, const ScalarMultiplier& m, double p,
                                                       const std::vector<FamilyMember>& family,
                                                       const CalculusOptions& opts) {
  if (family.empty()) throw InvalidArgument("empty test family");
  OperatorNormEstimate est;
  for (const auto& mem : family) {
    const double n = lp_norm(mem.f, p);
    if (n == 0.0) throw InvalidArgument("test family member '" + mem.name + "' is zero");
    est.ratios.push_back(lp_norm(apply_multiplier(op, m, mem.f, opts).value, p) / n);
  }
  est.value = *std::max_element(est.ratios.begin(), est.ratios.end());
  return est;
}

double occupied_sup(const RocklandOp& op, const ScalarMultiplier& m, const SampledFunction& f) {
  const auto sc = spectral_coordinates(op, f);
  double cmax = 0.0;
  for (auto c : sc.coefficients) cmax = std::max(cmax, std::abs(c));
  double s = 0.0;
  for (std::size_t k = 0; k < sc.coefficients.size(); ++k)
    if (std::abs(sc.coefficients[k]) > 1e-12 * cmax) s = std::max(s, std::abs(m(std::max(sc.eigenvalues[k], 0.0))));
  return s;
}

std::vector<TransferReport> besov_transfer_experiment(const RocklandOp& op, const DyadicPartition& part,
                                                      const ScalarMultiplier& m, std::span<const BesovParams> params,
                                                      const std::vector<FamilyMember>& family,
                                                      const CalculusOptions& opts) {
  for (const auto& bp : params) bp.validate();
  if (family.empty()) throw InvalidArgument("empty test family");
  struct Member {
    SampledFunction f, mf;
    std::vector<SampledFunction> in[2], out[2];  // indexed by homogeneous
  };
  std::vector<Member> members;
  for (const auto& mem : family) members.push_back({mem.f, apply_multiplier(op, m, mem.f, opts).value, {}, {}});
  for (int h = 0; h < 2; ++h) {
    if (std::none_of(params.begin(), params.end(), [h](const BesovParams& bp) { return bp.homogeneous == (h == 1); }))
      continue;
    for (auto& mem : members) {
      mem.in[h] = blocks(op, part, mem.f, h == 0, opts);
      mem.out[h] = blocks(op, part, mem.mf, h == 0, opts);
    }
  }

  std::vector<TransferReport> reports;
  for (const auto& bp : params) {
    const int h = bp.homogeneous ? 1 : 0;
    TransferReport rep;
    struct Cell {
      std::vector<double> in, out;
    };
    std::vector<Cell> cells;
    for (const auto& mem : members) {
      const double n = lp_norm(mem.f, bp.p);
      if (n > 0.0) rep.lp_ratio = std::max(rep.lp_ratio, lp_norm(mem.mf, bp.p) / n);
      Cell c;
      for (std::size_t l = 0; l < mem.in[h].size(); ++l) {
        c.in.push_back(lp_norm(mem.in[h][l], bp.p));
        c.out.push_back(lp_norm(mem.out[h][l], bp.p));
        // psi_l(R) m(R) f = m(R) psi_l(R) f, so each nonzero block is a test function too.
        if (c.in.back() > 1e-8 * n) rep.lp_ratio = std::max(rep.lp_ratio, c.out.back() / c.in.back());
      }
      cells.push_back(std::move(c));
    }
    rep.blockwise_excess = -kInf;
    for (const auto& c : cells) {
      for (std::size_t l = 0; l < c.in.size(); ++l)
        rep.blockwise_excess = std::max(rep.blockwise_excess, c.out[l] - rep.lp_ratio * c.in[l]);
      const double bin = besov_aggregate(c.in, bp.r, bp.q, op.nu());
      const double bout = besov_aggregate(c.out, bp.r, bp.q, op.nu());
      if (bin > 0.0) rep.besov_ratio = std::max(rep.besov_ratio, bout / bin);
    }
    reports.push_back(rep);
  }
  return reports;
}

TransferReport besov_transfer_experiment(const RocklandOp& op, const DyadicPartition& part, const ScalarMultiplier& m,
                                         const BesovParams& params, const std::vector<FamilyMember>& family,
                                         const CalculusOptions& opts) {
  return besov_transfer_experiment(op, part, m, std::span(&params, 1), family, opts).front();
}

void write_bv_csv(std::ostream& os, const BVReport& rep, bool header) {
  if (header) os << "j,window,variation,stable\n";
  for (std::size_t i = 0; i < rep.js.size(); ++i) {
    os << rep.js[i] << ",dyadic," << format_number(rep.dyadic[i].value) << ',' << (rep.dyadic[i].stable ? 1 : 0)
       << '\n';
    os << rep.js[i] << ",wide," << format_number(rep.wide[i].value) << ',' << (rep.wide[i].stable ? 1 : 0) << '\n';
  }
}

void write_multiplier_csv(std::ostream& os, const std::string& group, const BesovParams& params,
                          const std::string& m_name, const TransferReport& rep, bool header) {
  if (header) os << "group,p,r,q,m_name,lp_ratio,besov_ratio\n";
  os << group << ',' << format_number(params.p) << ',' << format_number(params.r) << ',' << format_number(params.q)
     << ',' << m_name << ',' << format_number(rep.lp_ratio) << ',' << format_number(rep.besov_ratio) << '\n';
}

}  // namespace lpg
