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

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "moto/runner.hpp"

namespace {

moto::ExperimentConfig load_config(const std::string& path) {
  moto::ExperimentConfig config =
      path.empty() ? moto::ExperimentConfig{} : moto::parse_config(path);
  if (const char* env_threads = std::getenv("MOTO_THREADS")) {
    const int threads = std::atoi(env_threads);
    if (threads < 1) throw std::invalid_argument("MOTO_THREADS must be a positive integer");
    config.moto.threads = threads;
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MOTO: trajectory optimization with closed-form constrained policy updates"};
  app.require_subcommand(1);

  std::string run_config_path;
  auto* run = app.add_subcommand("run", "run the iteration loop from a config file");
  run->add_option("config", run_config_path, "experiment config file")->required();

  std::string vb_config_path;
  auto* verify = app.add_subcommand("verify-bounds", "run the inequality verification suites");
  verify->add_option("config", vb_config_path, "optional experiment config file");

  std::string eval_policy_path, eval_config_path;
  int eval_rollouts = 100;
  auto* eval = app.add_subcommand("eval", "evaluate a saved policy");
  eval->add_option("policy", eval_policy_path, "policy file (MOTO-POLICY v1)")->required();
  eval->add_option("config", eval_config_path, "experiment config file")->required();
  eval->add_option("--rollouts", eval_rollouts, "evaluation episodes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? moto::kExitOk : moto::kExitUsage;
  }

  try {
    if (run->parsed()) {
      return moto::cmd_run(load_config(run_config_path), std::cout);
    }
    if (verify->parsed()) {
      return moto::cmd_verify_bounds(load_config(vb_config_path), std::cout);
    }
    return moto::cmd_eval(eval_policy_path, load_config(eval_config_path), eval_rollouts,
                          std::cout);
  } catch (const moto::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return moto::kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return moto::kExitUsage;
  }
}
