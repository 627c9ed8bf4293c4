#include "lpg/besov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "fft.hpp"
#include "lpg/csv.hpp"
#include "lpg/error.hpp"

namespace lpg {

void BesovParams::validate() const {
  if (!(p >= 1.0)) throw InvalidArgument("Besov parameter p must satisfy p >= 1");
  if (!(q > 0.0)) throw InvalidArgument("Besov parameter q must satisfy q > 0");
  if (!std::isfinite(r)) throw InvalidArgument("Besov smoothness r must be finite");
}

double besov_aggregate(std::span<const double> block_norms, double r, double q, double nu) {
  if (std::isinf(q)) {
    double s = 0.0;
    for (std::size_t l = 0; l < block_norms.size(); ++l)
      s = std::max(s, std::exp2(static_cast<double>(l) / nu * r) * block_norms[l]);
    return s;
  }
  // Factor out the largest weighted term so q-th powers stay in range.
  std::vector<double> w(block_norms.size());
  for (std::size_t l = 0; l < w.size(); ++l) w[l] = std::exp2(static_cast<double>(l) / nu * r) * block_norms[l];
  const double m = w.empty() ? 0.0 : *std::max_element(w.begin(), w.end());
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : w) s += std::pow(v / m, q);
  return m * std::pow(s, 1.0 / q);
}

double square_function_norm(const RocklandOp& op, const DyadicPartition& p, const SampledFunction& f, double lp,
                            const CalculusOptions& opts) {
  if (!(lp > 1.0) || std::isinf(lp)) throw InvalidArgument("square function norm needs p in (1, inf)");
  const auto bs = blocks(op, p, f, false, opts);
  SampledFunction sf(f.grid());
  for (const auto& b : bs)
    for (std::size_t i = 0; i < sf.size(); ++i) sf[i] += std::norm(b[i]);
  for (std::size_t i = 0; i < sf.size(); ++i) sf[i] = std::sqrt(sf[i].real());
  return lp_norm(sf, lp);
}

RatioStats ratio_stats(std::vector<double> ratios) {
  RatioStats s;
  s.ratios = std::move(ratios);
  if (!s.ratios.empty()) {
    s.min = *std::min_element(s.ratios.begin(), s.ratios.end());
    s.max = *std::max_element(s.ratios.begin(), s.ratios.end());
  }
  return s;
}

EquivalenceReport lp_equivalence_experiment(const RocklandOp& op, const DyadicPartition& p,
                                            const std::vector<FamilyMember>& family, double lp,
                                            const CalculusOptions& opts) {
  if (family.empty()) throw InvalidArgument("empty test family");
  EquivalenceReport rep;
  rep.p = lp;
  for (const auto& m : family) {
    const double n = lp_norm(m.f, lp);
    if (n == 0.0) throw InvalidArgument("test family member '" + m.name + "' is zero");
    rep.ratios.push_back(square_function_norm(op, p, m.f, lp, opts) / n);
  }
  auto st = ratio_stats(rep.ratios);
  rep.c_hat = st.min;
  rep.C_hat = st.max;
  return rep;
}

NormReport besov_report(const RocklandOp& op, const DyadicPartition& p, const SampledFunction& f,
                        const BesovParams& params, const CalculusOptions& opts) {
  params.validate();
  NormReport rep;
  rep.params = params;
  rep.nu = op.nu();
  for (const auto& b : blocks(op, p, f, !params.homogeneous, opts)) rep.block_norms.push_back(lp_norm(b, params.p));
  rep.aggregate = besov_aggregate(rep.block_norms, params.r, params.q, rep.nu);
  return rep;
}

double besov_norm(const RocklandOp& op, const DyadicPartition& p, const SampledFunction& f, const BesovParams& params,
                  const CalculusOptions& opts) {
  return besov_report(op, p, f, params, opts).aggregate;
}

namespace {

// lambda^a; zero-frequency components are dropped for a < 0 (callers check the
// low-spectrum mass first) and kept for a == 0.
ScalarMultiplier homogeneous_power(double a) {
  return {[a](double l) {
            if (l <= 0.0) return Complex(a == 0.0 ? 1.0 : 0.0);
            return Complex(std::pow(l, a));
          },
          "power", std::nullopt};
}

ScalarMultiplier inhomogeneous_power(double a) {
  return {[a](double l) { return Complex(std::pow(1.0 + std::max(l, 0.0), a)); }, "bessel_power", std::nullopt};
}

void check_low_spectrum(const RocklandOp& op, const SampledFunction& f) {
  const auto sc = spectral_coordinates(op, f);
  const double threshold = 1e-6 * op.lambda_max();
  double low = 0.0, total = 0.0;
  for (std::size_t k = 0; k < sc.coefficients.size(); ++k) {
    const double m = std::norm(sc.coefficients[k]);
    total += m;
    if (sc.eigenvalues[k] < threshold) low += m;
  }
  if (total > 0.0 && low > 1e-8 * total)
    throw InvalidArgument("homogeneous Sobolev norm with r < 0: f has relative spectral mass " +
                          format_number(low / total) + " below 1e-6 lambda_max (limit 1e-8)");
}

}  // namespace

double sobolev_norm(const RocklandOp& op, const SampledFunction& f, double r, double p, bool homogeneous,
                    const CalculusOptions& opts) {
  if (!(p >= 1.0)) throw InvalidArgument("Sobolev norm needs p >= 1");
  if (r == 0.0) return lp_norm(f, p);
  const double a = r / op.nu();
  if (homogeneous && r < 0.0) check_low_spectrum(op, f);
  const auto m = homogeneous ? homogeneous_power(a) : inhomogeneous_power(a);
  return lp_norm(apply_multiplier(op, m, f, opts).value, p);
}

DilationScaling dual_dilation_scaling_check(const GroupSpec& spec, const Grid& grid, const FrequencyFunction& sigma,
                                            double r, double s) {
  if (spec.kind() != GroupKind::AbelianGraded)
    throw InvalidArgument("dual dilation scaling check is implemented for abelian groups only");
  if (spec.dim() != grid.dim()) throw InvalidArgument("grid dimension does not match the group");
  if (grid.boundary() != Boundary::Periodic) throw InvalidArgument("dual dilation check needs a periodic grid");
  if (!(r > 0.0) || std::exp2(std::round(std::log2(r))) != r) throw InvalidArgument("dilation r must be a power of two");
  if (!(s >= 0.0)) throw InvalidArgument("dual Sobolev order must satisfy s >= 0");

  const std::size_t n = grid.dim();
  std::vector<double> fft_pos(grid.size() * n), freq(grid.size() * n);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto mi = grid.multi_index(j);
    for (std::size_t i = 0; i < n; ++i) {
      const int N = grid.count(i);
      const int kk = mi[i] < N / 2 ? mi[i] : mi[i] - N;
      fft_pos[j * n + i] = kk * grid.spacing(i);
      freq[j * n + i] = detail::dft_frequency(mi[i], N, grid.spacing(i));
    }
  }
  auto norm_of = [&](double dil) {
    std::vector<Complex> buf(grid.size());
    std::vector<double> xi(n);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      for (std::size_t i = 0; i < n; ++i) xi[i] = std::pow(dil, spec.weights()[i].value()) * freq[j * n + i];
      buf[j] = sigma(xi);
    }
    detail::fft_inverse(grid.counts(), buf);
    const double vol = grid.cell_volume();
    double sum = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double w = std::pow(quasi_norm(spec, std::span<const double>(fft_pos.data() + j * n, n)), 2.0 * s);
      sum += w * std::norm(buf[j] / vol);
    }
    return std::sqrt(sum * vol);
  };
  DilationScaling out;
  out.norm = norm_of(1.0);
  out.dilated_norm = norm_of(r);
  out.ratio = out.dilated_norm / out.norm;
  out.expected = std::pow(r, s - spec.Q() / 2.0);
  return out;
}

KFunctional::KFunctional(const RocklandOp& op, const SampledFunction& f, SobolevSpace x0, SobolevSpace x1,
                         int lambda_points) {
  if (x0.p != x1.p) throw InvalidArgument("K-functional couples need a common p");
  if (lambda_points < 2) throw InvalidArgument("K-functional needs at least 2 split points");
  if (!op.has_symbol() && !op.dense_eligible())
    throw Unsupported("K-functional needs a symbol operator or a dense-eligible grid");
  CalculusOptions opts;
  opts.method = op.has_symbol() ? Method::ExactSymbol : Method::DenseEig;
  const double a0 = x0.r / op.nu(), a1 = x1.r / op.nu();
  if (x0.r < 0.0 || x1.r < 0.0) check_low_spectrum(op, f);
  norm0_ = sobolev_norm(op, f, x0.r, x0.p, true, opts);
  norm1_ = sobolev_norm(op, f, x1.r, x1.p, true, opts);
  splits_.push_back({norm0_, 0.0});
  splits_.push_back({0.0, norm1_});

  const double lmax = op.lambda_max();
  const double lmin = 1e-6 * lmax;
  std::vector<ScalarMultiplier> ms;
  for (int k = 0; k < lambda_points; ++k) {
    const double cut = lmin * std::pow(lmax / lmin, static_cast<double>(k) / (lambda_points - 1));
    auto p0 = homogeneous_power(a0), p1 = homogeneous_power(a1);
    auto low = [cut](const ScalarMultiplier& m) {
      return ScalarMultiplier{[m, cut](double l) { return l <= cut ? m(l) : Complex(0.0); }, "low", std::nullopt};
    };
    auto high = [cut](const ScalarMultiplier& m) {
      return ScalarMultiplier{[m, cut](double l) { return l > cut ? m(l) : Complex(0.0); }, "high", std::nullopt};
    };
    ms.push_back(high(p0));  // f0 = high part
    ms.push_back(low(p1));   // f1 = low part
    ms.push_back(low(p0));   // f0 = low part
    ms.push_back(high(p1));  // f1 = high part
  }
  const auto res = apply_multipliers(op, ms, f, opts);
  for (std::size_t k = 0; k + 3 < res.size(); k += 4) {
    splits_.push_back({lp_norm(res[k].value, x0.p), lp_norm(res[k + 1].value, x1.p)});
    splits_.push_back({lp_norm(res[k + 2].value, x0.p), lp_norm(res[k + 3].value, x1.p)});
  }
}

double KFunctional::operator()(double t) const {
  double best = kInf;
  for (const auto& [a, b] : splits_) best = std::min(best, a + t * b);
  return best;
}

double KFunctional::interpolation_norm(double theta, double q, int t_points) const {
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("interpolation needs 0 < theta < 1");
  if (!(q >= 1.0) || std::isinf(q)) throw InvalidArgument("interpolation needs 1 <= q < inf");
  if (t_points < 2) throw InvalidArgument("interpolation needs at least 2 quadrature points");
  const double u0 = -30.0 * std::log(2.0), u1 = 30.0 * std::log(2.0);
  const double du = (u1 - u0) / (t_points - 1);
  double sum = 0.0;
  for (int k = 0; k < t_points; ++k) {
    const double u = u0 + k * du;
    const double v = std::pow(std::exp(-theta * u) * (*this)(std::exp(u)), q);
    sum += (k == 0 || k == t_points - 1) ? 0.5 * v : v;
  }
  return std::pow(sum * du, 1.0 / q);
}

double k_functional(const RocklandOp& op, const SampledFunction& f, double t, SobolevSpace x0, SobolevSpace x1) {
  return KFunctional(op, f, x0, x1)(t);
}

double interpolation_norm(const RocklandOp& op, const SampledFunction& f, double theta, double q, SobolevSpace x0,
                          SobolevSpace x1) {
  return KFunctional(op, f, x0, x1).interpolation_norm(theta, q);
}

RatioStats partition_independence_experiment(const RocklandOp& op, const DyadicPartition& a, const DyadicPartition& b,
                                             const std::vector<FamilyMember>& family, const BesovParams& params,
                                             const CalculusOptions& opts) {
  std::vector<double> ratios;
  for (const auto& m : family) {
    const double nb = besov_norm(op, b, m.f, params, opts);
    if (nb == 0.0) throw InvalidArgument("Besov norm of '" + m.name + "' vanishes under the reference partition");
    ratios.push_back(besov_norm(op, a, m.f, params, opts) / nb);
  }
  return ratio_stats(std::move(ratios));
}

void write_norm_csv(std::ostream& os, const std::string& experiment, const std::string& group,
                    const std::vector<NormReport>& reports, bool header) {
  if (header) os << "experiment,group,p,q,r,l,block_norm,aggregate\n";
  for (const auto& rep : reports)
    for (std::size_t l = 0; l < rep.block_norms.size(); ++l)
      os << experiment << ',' << group << ',' << format_number(rep.params.p) << ',' << format_number(rep.params.q)
         << ',' << format_number(rep.params.r) << ',' << l << ',' << format_number(rep.block_norms[l]) << ','
         << format_number(rep.aggregate) << '\n';
}

}  // namespace lpg
