#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "smpc/controller.hpp"

namespace smpc {

/// A randomly drawn controller situation with the default plant parameters.
struct RandomInstance {
  PlantState state;
  ReferenceState refs;
  SwitchState u_prev_m;
  SwitchState u_prev_n;
  StepModels models;
};

RandomInstance random_instance(std::mt19937_64& rng, int n_h, double lambda = 0.1);

struct VerifyReport {
  int cases = 0;
  int kbest_checks = 0;
  int kbest_failures = 0;
  int condensation_checks = 0;
  int condensation_failures = 0;
  std::vector<std::string> messages;  // one line per failure

  bool ok() const { return kbest_failures == 0 && condensation_failures == 0; }
};

/// k_best against exhaustive enumeration (N_h in {1,2}, k in {1,4,10}) and the
/// condensed objective against the raw one, on `cases` random instances.
VerifyReport run_verification(std::uint64_t seed, int cases, double cost_tolerance = 1e-9);

}  // namespace smpc
