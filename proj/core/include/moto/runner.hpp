/*
 Copyright 2026 The moto authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef MOTO_RUNNER_HPP
#define MOTO_RUNNER_HPP

#include <iosfwd>

#include "moto/config.hpp"

namespace moto {

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitBoundViolation = 3;

/// Runs the iteration loop and writes iterations.csv, timesteps.csv,
/// policy_final.txt, and config_resolved.txt into the output directory.
/// CSV rows are flushed per iteration so partial logs survive failures.
int cmd_run(const ExperimentConfig& config, std::ostream& out);

/// Runs the inequality suites (return-difference identity, Pinsker bound,
/// state-KL recursion, expected-KL inequalities, and a report-only
/// monotonic-improvement audit of a short linear-environment run); writes
/// bounds_report.csv and prints a summary. Returns kExitBoundViolation on
/// any asserted violation.
int cmd_verify_bounds(const ExperimentConfig& config, std::ostream& out);

/// Loads a saved policy and prints the mean return +/- standard error over
/// `rollouts` evaluation episodes.
int cmd_eval(const std::string& policy_path, const ExperimentConfig& config, int rollouts,
             std::ostream& out);

}  // namespace moto

#endif
