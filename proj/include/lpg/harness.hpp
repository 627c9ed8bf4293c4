#pragma once

// Configuration-driven experiment runner: strict JSON configs, CSV outputs and
// a run manifest, plus plot-data emission for slope experiments.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lpg/calculus.hpp"
#include "lpg/group.hpp"

namespace lpg {

struct ExperimentConfig {
  std::string experiment;

  GroupKind group = GroupKind::AbelianGraded;
  std::vector<Rational> weights;  ///< abelian only

  std::vector<double> half_extent;
  std::vector<int> counts;
  Boundary boundary = Boundary::Periodic;

  std::vector<int> exponents;  ///< symbol exponents m_i; empty selects the homogeneous default

  int l_max = 0;  ///< 0 selects DyadicPartition::l_max_for(lambda_max)
  Smoothness smoothness = Smoothness::Bump;
  Smoothness smoothness_b = Smoothness::CubicSpline;

  /// Parameter lists by name: p, q, r, L, j, tau, s, dilation, eps, theta, kind, width, ...
  std::map<std::string, std::vector<double>> params;
  std::map<std::string, std::string> options;  ///< cutoff, multipliers, probe, ...
  std::vector<Point> translations;             ///< h list for translation-limit

  std::string family = "standard";
  std::optional<std::uint64_t> seed;

  std::string output_dir = "out";
  std::map<std::string, double> tolerances;
  CalculusOptions calculus{};

  double tolerance(const std::string& name) const;
  const std::vector<double>& list(const std::string& name) const;
  std::vector<double> list_or(const std::string& name, std::vector<double> fallback) const;

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
};

/// Strict parse: unknown keys, bad types and out-of-range values throw ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical JSON text of a validated config (round-trips through parse_config).
std::string to_json(const ExperimentConfig& config);

struct ExperimentOutcome {
  std::string name;
  bool passed = false;
  std::string summary;
};

struct RunManifest {
  std::string config_hash;
  std::string version;
  std::string timestamp;
  std::string experiment;
  std::vector<ExperimentOutcome> outcomes;
  std::vector<std::string> outputs;  ///< file names relative to the output directory
  bool passed() const;
};

struct ExperimentInfo {
  std::string name;
  std::string reference;
};

std::vector<ExperimentInfo> list_experiments();

/// Worker-pool size from LPG_THREADS (default: hardware concurrency, at least 1).
int worker_count();

/// Runs fn(i) for i in [0, n) on the worker pool; rethrows the lowest-index exception.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Executes the configured experiment, writes CSVs and manifest.json into output_dir.
RunManifest run(const ExperimentConfig& config);

std::string manifest_json(const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

/// Writes <csv stem>_<k>.dat (x y) and <csv stem>_<k>_fit.dat per slope series referenced
/// by the manifest; returns the written paths. Throws Error for missing CSVs.
std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& manifest_path);

}  // namespace lpg
