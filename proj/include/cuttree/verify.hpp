#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cuttree {

struct CheckResult {
  std::string name;
  bool passed = false;
  double metric = 0.0;  // worst discrepancy or violation count
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  int oracle_trees = 1000;
  int oracle_max_n = 64;
  int oracle_points = 5;
  int coupling_runs = 10000;
  int coupling_max_n = 256;
  int symmetrization_trees = 1000;
  int symmetrization_max_n = 200;
  int emn_max_m = 6;
  int cyclic_k_max = 5;
  int cyclic_n_max = 30;
  int gwstar_max_vertices = 6;
};

// Names accepted by run_check: oracle, coupling, symmetrization, emn, cyclic, gwstar.
const std::vector<std::string>& check_names();

// Throws InputError for an unknown name; guard violations propagate as GuardError.
CheckResult run_check(const std::string& name, const VerifyOptions& options);

}  // namespace cuttree
