#pragma once

// Littlewood-Paley square function, Besov and Sobolev norms, the dual-dilation
// scaling check, and spectral-split K-functionals.

#include <cmath>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lpg/calculus.hpp"
#include "lpg/families.hpp"

namespace lpg {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct BesovParams {
  double r = 0.0;
  double p = 2.0;  ///< in [1, inf]
  double q = 2.0;  ///< in (0, inf]
  bool homogeneous = true;

  void validate() const;
};

struct NormReport {
  BesovParams params;
  double nu = 1.0;
  std::vector<double> block_norms;  ///< ||psi_l(R) f||_p, l = 0..l_max
  double aggregate = 0.0;
};

/// (sum_l (2^{(l/nu) r} b_l)^q)^{1/q}, or the sup for q = inf.
double besov_aggregate(std::span<const double> block_norms, double r, double q, double nu);

/// ||(sum_l |psi_l(R) f|^2)^{1/2}||_p, p in (1, inf).
double square_function_norm(const RocklandOp& op, const DyadicPartition& p, const SampledFunction& f, double lp,
                            const CalculusOptions& opts = {});

struct EquivalenceReport {
  double p = 2.0;
  std::vector<double> ratios;  ///< square function norm / ||f||_p per member
  double c_hat = 0.0;
  double C_hat = 0.0;
  bool bounded() const { return c_hat > 0.0 && c_hat <= C_hat && std::isfinite(C_hat); }
};

EquivalenceReport lp_equivalence_experiment(const RocklandOp& op, const DyadicPartition& p,
                                            const std::vector<FamilyMember>& family, double lp,
                                            const CalculusOptions& opts = {});

NormReport besov_report(const RocklandOp& op, const DyadicPartition& p, const SampledFunction& f,
                        const BesovParams& params, const CalculusOptions& opts = {});

double besov_norm(const RocklandOp& op, const DyadicPartition& p, const SampledFunction& f, const BesovParams& params,
                  const CalculusOptions& opts = {});

/// ||R^{r/nu} f||_p or ||(I+R)^{r/nu} f||_p. The homogeneous norm with r < 0 throws
/// InvalidArgument when f carries spectral mass above 1e-8 (relative, l^2) below 1e-6 lambda_max.
double sobolev_norm(const RocklandOp& op, const SampledFunction& f, double r, double p, bool homogeneous,
                    const CalculusOptions& opts = {});

/// Frequency-side function sigma(xi) on R^n.
using FrequencyFunction = std::function<Complex(std::span<const double>)>;

struct DilationScaling {
  double norm = 0.0;          ///< ||sigma||_{H^s}
  double dilated_norm = 0.0;  ///< ||sigma o D_r||_{H^s}
  double ratio = 0.0;
  double expected = 0.0;      ///< r^{s - Q/2}
};

/// Dual Sobolev norms ||  |x|^s F^{-1} sigma ||_{L^2} of sigma and sigma o D_r,
/// computed by DFT on `grid` (x-side). Abelian groups only.
DilationScaling dual_dilation_scaling_check(const GroupSpec& spec, const Grid& grid, const FrequencyFunction& sigma,
                                            double r, double s);

/// Sobolev space (homogeneous, smoothness r, integrability p) as an endpoint of a couple.
struct SobolevSpace {
  double r = 0.0;
  double p = 2.0;
};

/// K(f, t) restricted to spectral splittings f = E[0,Lambda] f + E(Lambda,inf) f.
/// Lambda runs over `lambda_points` logarithmic values in [1e-6 lambda_max, lambda_max];
/// both assignments of the two pieces and the trivial splits are included.
class KFunctional {
 public:
  KFunctional(const RocklandOp& op, const SampledFunction& f, SobolevSpace x0, SobolevSpace x1,
              int lambda_points = 200);

  double operator()(double t) const;
  /// (int_{2^-30}^{2^30} (t^{-theta} K(t))^q dt/t)^{1/q} by the trapezoid rule in log t.
  double interpolation_norm(double theta, double q, int t_points = 200) const;

  double norm0() const { return norm0_; }  ///< ||f||_{X0}
  double norm1() const { return norm1_; }  ///< ||f||_{X1}

 private:
  std::vector<std::pair<double, double>> splits_;  ///< (||f0||_{X0}, ||f1||_{X1})
  double norm0_ = 0.0;
  double norm1_ = 0.0;
};

double k_functional(const RocklandOp& op, const SampledFunction& f, double t, SobolevSpace x0, SobolevSpace x1);

double interpolation_norm(const RocklandOp& op, const SampledFunction& f, double theta, double q, SobolevSpace x0,
                          SobolevSpace x1);

struct RatioStats {
  std::vector<double> ratios;
  double min = 0.0;
  double max = 0.0;
};

RatioStats ratio_stats(std::vector<double> ratios);

/// besov_norm under partition A divided by besov_norm under partition B, per member.
RatioStats partition_independence_experiment(const RocklandOp& op, const DyadicPartition& a, const DyadicPartition& b,
                                             const std::vector<FamilyMember>& family, const BesovParams& params,
                                             const CalculusOptions& opts = {});

/// CSV rows (experiment, group, p, q, r, l, block_norm, aggregate); header when `header`.
void write_norm_csv(std::ostream& os, const std::string& experiment, const std::string& group,
                    const std::vector<NormReport>& reports, bool header = true);

}  // namespace lpg
