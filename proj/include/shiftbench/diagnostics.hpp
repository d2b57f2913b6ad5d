/*
 * Copyright 2026 The shiftbench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SHIFTBENCH_DIAGNOSTICS_HPP_
#define SHIFTBENCH_DIAGNOSTICS_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace shiftbench {

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;  // largest observed discrepancy
  double tolerance = 0.0;
  int instances = 0;
};

struct SelftestOptions {
  std::uint64_t seed = 20240601;
  // Perturbs the soft rates handed to PACC so the SMM/PACC check must fail.
  bool corrupt_pacc_rates = false;
};

CheckResult check_smm_pacc(const SelftestOptions& options);
CheckResult check_dys_hdy(const SelftestOptions& options);
CheckResult check_gradient(const SelftestOptions& options);

/// Runs the three checks above in order.
std::vector<CheckResult> run_selftest(const SelftestOptions& options = {});

}  // namespace shiftbench

#endif  // SHIFTBENCH_DIAGNOSTICS_HPP_
