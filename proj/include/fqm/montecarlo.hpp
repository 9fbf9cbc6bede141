#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fqm/budget.hpp"

namespace fqm::mc {

inline constexpr int kSchemaVersion = 1;
/// Below this many trials per phase, statistical checks are reported as insufficient.
inline constexpr std::uint64_t kMinTrials = 100;

struct ExperimentConfig {
  std::string preset = "E1";
  unsigned q = 2;
  std::size_t n = 0;       // 0: preset default
  std::uint64_t trials = 0;  // 0: preset default
  std::uint64_t seed = 1;
  /// Preset parameters (c, k, m, r, ...); missing keys take preset defaults.
  std::map<std::string, double> params;
  Budget budget;
  int workers = 0;  // 0: OpenMP default
  bool serial = false;
  bool timing = false;  // include wall-clock in emitted reports
  /// Invocation flags echoed into emitted artifacts.
  std::map<std::string, std::string> flags;
};

/// Exact integer counts of one per-trial statistic; absent values count as missing.
struct Histogram {
  std::map<long, std::uint64_t> counts;
  std::uint64_t missing = 0;

  void add(std::optional<long> v);
  std::uint64_t present() const;
  std::uint64_t total() const { return present() + missing; }
  double mean() const;
  double variance() const;  // sample variance of the present values
  /// Empirical pmf over present values, normalized by total().
  std::map<long, double> pmf() const;
  /// Fraction of all trials with value == v.
  double freq(long v) const;
  /// Fraction of all trials with value <= v (missing counts as +inf).
  double cdf(long v) const;
  /// Median with missing values placed at +inf; nullopt when the median is missing.
  std::optional<double> median() const;
  void merge(const Histogram& o);
};

struct Aggregate {
  std::uint64_t trials = 0;
  std::map<std::string, Histogram> stats;
};

struct Check {
  std::string name;
  std::string kind;  // "abs", "z", "sup", "at_least", "at_most", "range", "exact"
  double predicted = 0, empirical = 0, statistic = 0, tolerance = 0;
  double lo = 0, hi = 0;  // for "range"
  std::string verdict;    // "pass", "fail", "insufficient"
};

struct ComparisonReport {
  std::map<std::string, double> predictors;
  std::vector<Check> checks;
  bool insufficient = false;
  double runtime_seconds = 0;
  bool all_pass() const;
};

struct ExperimentResult {
  ExperimentConfig config;
  Aggregate aggregate;
  ComparisonReport report;
};

/// Per-trial outcome: one optional value per statistic name of the preset.
using TrialOutcome = std::vector<std::optional<long>>;
using TrialFn = std::function<TrialOutcome(std::uint64_t trial)>;

/// Runs trials 0..count-1 and merges per-index outcomes in index order.
/// A BudgetExceeded in any trial is rethrown with the smallest failing index.
Aggregate run_trials(const std::vector<std::string>& names, std::uint64_t count, const TrialFn& fn,
                     int workers = 0);
/// Plain loop; reference for run_trials.
Aggregate run_trials_serial(const std::vector<std::string>& names, std::uint64_t count,
                            const TrialFn& fn);

struct PmfVerdict {
  double distance = 0;
  long argmax = 0;
  bool pass = false;
};
/// Sup-distance between two pmfs on the integers.
PmfVerdict compare_pmf(const std::map<long, double>& empirical,
                       const std::map<long, double>& predicted, double tolerance);

/// Preset ids with a one-line description.
std::vector<std::pair<std::string, std::string>> preset_list();
/// Fills preset defaults into the config (n, trials, params); ConfigError on unknown preset.
ExperimentConfig resolve(ExperimentConfig cfg);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Chi-square homogeneity test for two count vectors over the same categories; p-value.
double chi_square_two_sample(const std::vector<std::uint64_t>& a,
                             const std::vector<std::uint64_t>& b);

std::string to_json(const ExperimentResult& r);
std::string to_csv(const ExperimentResult& r);
/// Writes json or csv; IoError on failure.
void emit(const ExperimentResult& r, const std::string& format, const std::string& path);

}  // namespace fqm::mc
