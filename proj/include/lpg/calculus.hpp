#pragma once

// Functional calculus m(R) for the discrete Rockland operators: exact symbol
// multiplication, Chebyshev matrix-function expansions, or the dense
// eigendecomposition oracle.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpg/group.hpp"
#include "lpg/partition.hpp"
#include "lpg/rockland.hpp"

namespace lpg {

/// Bounded function m on [0, inf); must be evaluable at every nonnegative double.
struct ScalarMultiplier {
  std::function<Complex(double)> fn;
  std::string name;
  std::optional<double> sup_bound;

  Complex operator()(double lambda) const { return fn(lambda); }
};

ScalarMultiplier constant_multiplier(Complex c);
/// lambda^{i tau}, with value 1 at lambda = 0.
ScalarMultiplier imaginary_power(double tau);
ScalarMultiplier exponential_decay(double rate);  ///< e^{-rate lambda}
/// psi_l of the partition, or psi_l(1 + lambda) when `shifted`.
ScalarMultiplier partition_block(const DyadicPartition& p, int l, bool shifted = false);
/// Smooth cutoff: 1 on [0, (1-width) L], 0 on [L, inf), bump transition between.
ScalarMultiplier smooth_cutoff(double level, double width);

enum class Method { Auto, ExactSymbol, Chebyshev, DenseEig };

std::string to_string(Method m);

struct CalculusOptions {
  Method method = Method::Auto;
  int degree = 0;            ///< Chebyshev degree; 0 selects it automatically
  double tolerance = 1e-8;   ///< target for the Chebyshev coefficient-tail bound
  int max_degree = 4096;
};

/// Chebyshev expansion of m on [0, lambda_max].
class ChebyshevExpansion {
 public:
  /// Degree-d truncation of a high-order interpolant (4(d+1) Chebyshev-Gauss nodes, at least 512);
  /// error_bound() is the l^1 norm of the discarded coefficients.
  static ChebyshevExpansion fit(const ScalarMultiplier& m, double lambda_max, int degree);
  /// Doubles the degree from 16 until error_bound() <= tol or max_degree is reached.
  static ChebyshevExpansion fit_auto(const ScalarMultiplier& m, double lambda_max, double tol, int max_degree);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  double lambda_max() const { return lambda_max_; }
  double error_bound() const { return error_bound_; }
  const std::vector<Complex>& coefficients() const { return coeffs_; }
  /// Clenshaw evaluation of the truncated series.
  Complex evaluate(double lambda) const;

 private:
  std::vector<Complex> coeffs_;
  double lambda_max_ = 0.0;
  double error_bound_ = 0.0;
};

struct MultiplierResult {
  SampledFunction value;
  Method method = Method::Auto;
  int degree = 0;            ///< Chebyshev degree used (0 for other methods)
  double error_bound = 0.0;  ///< Chebyshev uniform error estimate (0 for exact methods)
};

/// m(R) f.
MultiplierResult apply_multiplier(const RocklandOp& op, const ScalarMultiplier& m, const SampledFunction& f,
                                  const CalculusOptions& opts = {});

/// m_k(R) f for several multipliers, sharing the transform of f (one FFT, one
/// eigenbasis projection, or one Chebyshev recurrence sweep).
std::vector<MultiplierResult> apply_multipliers(const RocklandOp& op, std::span<const ScalarMultiplier> ms,
                                                const SampledFunction& f, const CalculusOptions& opts = {});

/// Sharp spectral projector chi_[0,L](R) f. Symbol backend or dense-eligible grids only.
SampledFunction band_project(const RocklandOp& op, double level, const SampledFunction& f);

/// psi_l(R) f.
SampledFunction block(const RocklandOp& op, const DyadicPartition& p, int l, const SampledFunction& f,
                      const CalculusOptions& opts = {});

/// All blocks psi_0(R) f ... psi_{l_max}(R) f (psi_l(I + R) f when `inhomogeneous`).
std::vector<SampledFunction> blocks(const RocklandOp& op, const DyadicPartition& p, const SampledFunction& f,
                                    bool inhomogeneous = false, const CalculusOptions& opts = {});

/// Spectral coordinates of f: DFT coefficients (symbol backend) or eigenbasis
/// coefficients (dense). Paired with the eigenvalue of each coordinate.
struct SpectralCoordinates {
  std::vector<double> eigenvalues;
  std::vector<Complex> coefficients;  ///< normalized so that sum |c|^2 = sum |f|^2
};
SpectralCoordinates spectral_coordinates(const RocklandOp& op, const SampledFunction& f);

}  // namespace lpg
