#pragma once

#include "aprlab/exponents.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace aprlab {

// Fully determines a run: same config (including seed) gives byte-identical
// reports.
struct ExperimentConfig {
  std::string experiment;  // offdiag-ratio | multilinear-extrapolate |
                           // sparse-domination | lemma-ratio | tensor-mixed-norm
  int d = 1;
  int L = 3;
  int n = 1, m = 1;  // dimensions of the two product-grid factors
  int L2 = 3;        // depth of the second factor
  std::map<std::string, std::string> exponents;  // exact exponent strings
  std::string weight_kind = "random_a1";         // constant | power | random_a1
  double weight_param = 0.5;
  std::string variant;  // experiment-specific switch (lemma name, pair family, ...)
  int trials = 16;
  std::uint64_t seed = 1;
  int K = 16;
  int kmax = 2;         // top model-operator complexity to sweep
  int mc_samples = 8;   // Monte Carlo sample count when exact shift averaging is too big
  std::string output;   // report path prefix; .csv/.json are appended
};

ExperimentConfig config_from_json(const std::string& text);

struct TrialRow {
  int trial = 0;
  std::uint64_t seed = 0;
  double constant = 1.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct Report {
  ExperimentConfig config;
  std::vector<TrialRow> rows;

  std::string csv() const;
  std::string summary_json() const;
  double max_ratio() const;
  double median_ratio() const;
};

Report run_experiment(const ExperimentConfig& cfg);

// Invariant batteries behind `verify <suite>`; suite is one of identities,
// rdf, lemma_main, sparse, all.  Prints one line per check plus replayable
// JSON for failures; returns the number of failures.
int verify_suite(const std::string& suite, std::ostream& out, int d = 1, int L = 4,
                 std::uint64_t seed = 17);

}  // namespace aprlab
