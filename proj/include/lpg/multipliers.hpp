#pragma once

// Marcinkiewicz dyadic bounded-variation checks and spectral multiplier
// boundedness on L^p and Besov scales.

#include <iosfwd>
#include <string>
#include <span>
#include <vector>

#include "lpg/besov.hpp"

namespace lpg {

struct Variation {
  double value = 0.0;   ///< sum |m(l_{k+1}) - m(l_k)| at the finest sampling
  bool stable = false;  ///< halving the sampling step changed the value by < 1%
};

/// Total variation of m over [a, b] on a geometric sampling with `samples` steps, refined once.
Variation bv_norm(const ScalarMultiplier& m, double a, double b, int samples);

/// Variation over the dyadic interval [2^{j-1}, 2^j]; samples_per_interval >= 64.
Variation dyadic_bv_norm(const ScalarMultiplier& m, int j, int samples_per_interval = 256);

struct BVReport {
  std::vector<int> js;
  std::vector<Variation> dyadic;  ///< [2^{j-1}, 2^j]
  std::vector<Variation> wide;    ///< [2^{j-1}, 2^{j+1}]
  double sup_variation = 0.0;     ///< sup over j of the dyadic variation
  double sup_abs = 0.0;           ///< sup |m| on all samples
  double threshold = 0.0;
  bool admissible = false;        ///< both sups below threshold and every dyadic value stable
};

BVReport marcinkiewicz_check(const ScalarMultiplier& m, int j_min, int j_max, double threshold = 10.0,
                             int samples_per_interval = 256);

struct OperatorNormEstimate {
  std::vector<double> ratios;  ///< ||m(R) f||_p / ||f||_p per member
  double value = 0.0;          ///< max ratio: a lower bound for the operator norm
};

OperatorNormEstimate multiplier_boundedness_experiment(const RocklandOp& op, const ScalarMultiplier& m, double p,
                                                       const std::vector<FamilyMember>& family,
                                                       const CalculusOptions& opts = {});

/// max |m| over the occupied spectrum of f (coefficients above 1e-12 relative).
double occupied_sup(const RocklandOp& op, const ScalarMultiplier& m, const SampledFunction& f);

struct TransferReport {
  double lp_ratio = 0.0;     ///< measured L^p norm of m(R) over the family and its blocks
  double besov_ratio = 0.0;  ///< max over the family of besov(m(R) f) / besov(f)
  double blockwise_excess = 0.0;  ///< max_{l,f} ||psi_l m(R) f||_p - lp_ratio ||psi_l f||_p
  bool passed(double rel_tol = 1e-6, double abs_tol = 1e-8) const {
    return besov_ratio <= lp_ratio * (1.0 + rel_tol) && blockwise_excess <= abs_tol;
  }
};

TransferReport besov_transfer_experiment(const RocklandOp& op, const DyadicPartition& part, const ScalarMultiplier& m,
                                         const BesovParams& params, const std::vector<FamilyMember>& family,
                                         const CalculusOptions& opts = {});

/// One report per parameter set; blocks are computed once per homogeneity flag.
std::vector<TransferReport> besov_transfer_experiment(const RocklandOp& op, const DyadicPartition& part,
                                                      const ScalarMultiplier& m, std::span<const BesovParams> params,
                                                      const std::vector<FamilyMember>& family,
                                                      const CalculusOptions& opts = {});

/// CSV rows (j, window, variation, stable).
void write_bv_csv(std::ostream& os, const BVReport& rep, bool header = true);

/// CSV rows (group, p, r, q, m_name, lp_ratio, besov_ratio).
void write_multiplier_csv(std::ostream& os, const std::string& group, const BesovParams& params,
                          const std::string& m_name, const TransferReport& rep, bool header = true);

}  // namespace lpg
