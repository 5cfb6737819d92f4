#pragma once

#include <string>
#include <vector>

#include "primal/util.hpp"

namespace primal::runner {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kArtifactVersion = "0.1.0";

/// One config covers every subcommand; the CLI fills only what the chosen
/// subcommand reads, and the report echoes all of it back.
struct ExperimentConfig {
  std::string subcommand;  // density | local-test | count | sigma-stats | tau |
                           // lattice | variance | e-prime
  int d = 2;
  int n = 3;
  double A = 50;
  double B = 100;
  u64 samples = 1000;
  u64 mc_samples = 100'000;
  u64 seed = 1;
  i64 p_max = 101;
  int r_max = 0;  // 0 selects the 2 d + 3 default
  double epsilon = 0.1;
  double gamma = 1.0;

  // sigma-stats
  i64 p = 3;
  int N = 0;  // coefficient dimension; 0 derives it from (d, n)
  int r = 1;
  u64 Q = 0;  // direct sigma evaluation when nonzero (with --form)

  std::vector<i64> form_coeffs;  // count | local-test | tau | sigma-stats --Q
  bool list_solutions = false;

  // lattice subcommand inputs
  std::vector<i64> lattice_c;
  u64 lattice_Q = 0;  // 0: exact solution lattice; else congruence modulus
  std::vector<std::vector<i64>> lattice_basis;
  double lattice_X = -1;  // enumerate/count points when >= 0

  // density extras
  bool with_product = false;
  u64 product_samples = 2000;

  double sieve_limit = 1e7;
  double enum_budget = 5e7;

  std::string out_path;         // empty writes to stdout
  std::string format = "json";  // json | csv (csv only for variance rows)
};

struct ExperimentReport {
  std::string payload;       // full rendered report (JSON or CSV)
  std::string results_json;  // canonical determinism scope: everything but timing
  std::vector<std::string> warnings;
  double wall_ms = 0;
  int exit_code = 0;  // 0 ok, 2 budget exhausted
};

/// Runs one experiment. Invalid configs throw std::invalid_argument (the CLI
/// maps those to exit code 1); budget exhaustion is folded into the report
/// with exit code 2.
ExperimentReport run(const ExperimentConfig& cfg);

/// Convenience: runs and writes payload to cfg.out_path or stdout.
int run_and_write(const ExperimentConfig& cfg);

}  // namespace primal::runner
