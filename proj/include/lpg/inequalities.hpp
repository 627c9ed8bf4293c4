#pragma once

// Nikolskii scaling experiments, Besov embeddings and the translation limit.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lpg/besov.hpp"

namespace lpg {

struct SlopeReport {
  std::vector<double> parameters;  ///< L or j as given
  std::vector<double> abscissae;   ///< log2 L or j
  std::vector<double> ordinates;  ///< log2 of the measured ratio
  double fitted_slope = 0.0;
  double intercept = 0.0;
  double theoretical_slope = 0.0;
  double residual = 0.0;   ///< RMS residual of the least-squares line
  double constant = 0.0;   ///< max_k ratio_k / 2^{theoretical_slope x_k}
  bool regime_reached = false;  ///< residual <= kMaxResidual

  double slope_error() const { return fitted_slope - theoretical_slope; }
};

inline constexpr double kMaxResidual = 0.05;

/// Least-squares line through (x, y); fills slope, intercept, residual and regime flag.
SlopeReport fit_slope(std::vector<double> x, std::vector<double> y, double theoretical_slope);

enum class Cutoff { Sharp, Smooth };

struct NikolskiiOptions {
  Cutoff cutoff = Cutoff::Sharp;
  double smooth_width = 0.5;  ///< transition on [(1-w)L, L] for the smooth cutoff
  CalculusOptions calculus{};
};

/// ||T_L f||_q / ||T_L f||_p for each L, with the log-log slope fit against
/// (Q/nu)(1/p - 1/q). The smooth cutoff replaces T_L by a cutoff with range in that of T_L.
SlopeReport nikolskii_experiment(const RocklandOp& op, const SampledFunction& f, double p, double q,
                                 const std::vector<double>& levels, const NikolskiiOptions& opts = {});

/// ||F^{-1} chi_{a <= 1}||_{L^rho}, rho = (1 + 1/q - 1/p)^{-1}, on the DFT lattice of a symbol operator.
double nikolskii_constant_abelian(const RocklandOp& op, double p, double q);

/// Items of the embedding theorem. Each report lists one measured left side and
/// one bounding right side per family member (times `constant`).
struct EmbeddingReport {
  int kind = 0;
  std::vector<std::string> members;
  std::vector<double> lhs;
  std::vector<double> rhs;
  double constant = 1.0;     ///< explicit constant, or the measured max lhs/rhs
  bool constant_measured = false;
  double worst_excess = 0.0; ///< max (lhs - constant * rhs) / rhs
  bool holds(double rel_tol) const { return worst_excess <= rel_tol; }
};

/// Kind 1: ||f||_{r,p,q2} <= ||f||_{r,p,q1} <= ||f||_{r+eps,p,q1}, q1 <= q2 (constant 1).
/// Returns the chain with lhs = the smaller side of each step, two rows per member.
EmbeddingReport embedding_kind1(const RocklandOp& op, const DyadicPartition& part,
                                const std::vector<FamilyMember>& family, double r, double eps, double p, double q1,
                                double q2, const CalculusOptions& opts = {});

/// Explicit constant (sum_l 2^{-l eps q2 q1 / (nu (q1 - q2))})^{1/q2 - 1/q1}, q2 < q1 <= inf.
double embedding_kind2_constant(double eps, double q1, double q2, double nu);

/// Kind 2: ||f||_{r,p,q2} <= C ||f||_{r+eps,p,q1}, q2 < q1.
EmbeddingReport embedding_kind2(const RocklandOp& op, const DyadicPartition& part,
                                const std::vector<FamilyMember>& family, double r, double eps, double p, double q1,
                                double q2, const CalculusOptions& opts = {});

struct DilationSlopes {
  SlopeReport first;   ///< log2 ||f_j||_{Bdot^r_{p1,q}} against j, theory r - Q/p1
  SlopeReport second;  ///< log2 ||f_j||_{Bdot^r_{p2,q}} against j, theory r - Q/p2
  double slope_difference = 0.0;     ///< second - first
  double expected_difference = 0.0;  ///< r1 - r2 = Q (1/p1 - 1/p2)
};

/// Kind 3: dilation family f_j = f o D_{2^j}, j in `js`, 1 <= p1 <= p2. The slope gap of the
/// two norms is the smoothness loss r1 - r2 of the embedding Bdot^{r1}_{p1,q} -> Bdot^{r2}_{p2,q}.
DilationSlopes embedding_kind3(const RocklandOp& op, const DyadicPartition& part, const SampledFunction& f, double r,
                               double p1, double p2, double q, const std::vector<int>& js,
                               const CalculusOptions& opts = {});

/// Kind 4: Bdot^r_{p,p} -> Hdot^{r,p} -> Bdot^r_{p,2}, 1 < p <= 2. Two reports with measured
/// constants: ||f||_{Hdot^{r,p}} against ||f||_{Bdot^r_{p,p}}, then ||f||_{Bdot^r_{p,2}} against ||f||_{Hdot^{r,p}}.
std::pair<EmbeddingReport, EmbeddingReport> embedding_kind4(const RocklandOp& op, const DyadicPartition& part,
                                const std::vector<FamilyMember>& family, double r, double p,
                                const CalculusOptions& opts = {});

/// Kind 5: ||f||_q <= C ||f||_{Bdot^{Q(1/p-1/q)}_{p,1}}. C = 1 for p = q, the Nikolskii
/// constant on symbol operators, and the measured ratio otherwise.
EmbeddingReport embedding_kind5(const RocklandOp& op, const DyadicPartition& part,
                                const std::vector<FamilyMember>& family, double p, double q,
                                const CalculusOptions& opts = {});

/// ||f + tau_h f||_p / ||f||_p for each translation h.
std::vector<double> translation_limit_experiment(const GroupSpec& spec, const SampledFunction& f, double p,
                                                 const std::vector<Point>& hs);

/// CSV rows (experiment, group, p, q, r, L_or_j, ratio, fitted_slope, theoretical_slope, residual, constant).
void write_slope_csv(std::ostream& os, const std::string& experiment, const std::string& group, double p, double q,
                     double r, const SlopeReport& rep, bool header = true);

}  // namespace lpg
