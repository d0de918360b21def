// Copyright 2026 The povm-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "povmforge/matcore.hpp"

namespace povmforge::verify {

/// One acceptance criterion, evaluated at its pinned tolerance.
struct CriterionResult {
  int id = 0;
  std::string name;
  double value = 0.0;      // measured figure of merit
  double threshold = 0.0;  // pinned bound
  std::string relation;    // "<=" or ">="
  bool pass = false;
  std::string detail;      // secondary figures, human readable
  double seconds = 0.0;    // wall time; not part of report files
};

struct SuiteOptions {
  std::uint64_t seed = 7;
  /// Test hook: scales the first cyclic operator in the completeness check;
  /// 1.0 leaves the family intact.
  double perturbation = 1.0;
};

CriterionResult check_completeness(double perturbation);            // id 0
CriterionResult criterion_cyclic_dilation(std::uint64_t seed);      // id 1
CriterionResult criterion_cyclic_circuit();                         // id 2
CriterionResult criterion_hw_disturbance(std::uint64_t seed);       // id 3
CriterionResult criterion_outcome_oracle(std::uint64_t seed);       // id 4
CriterionResult criterion_cv_coin(std::uint64_t seed);              // id 5
CriterionResult criterion_scattering();                             // id 6
CriterionResult criterion_thermal();                                // id 7
CriterionResult criterion_optics(std::uint64_t seed);               // id 8
CriterionResult criterion_uncertainty();                            // id 9

/// Runs the completeness check plus criteria 1-9 in order.
std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions& options);

}  // namespace povmforge::verify
