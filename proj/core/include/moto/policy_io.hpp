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

#ifndef MOTO_POLICY_IO_HPP
#define MOTO_POLICY_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "moto/gaussian.hpp"

namespace moto {

/// Versioned flat text format. Header "MOTO-POLICY v1 d_s d_a T", then for
/// each t three lines: gain (row-major), bias, covariance (row-major), all
/// with 17 significant digits so save -> load -> save round-trips
/// byte-identically.
void save_policy(std::ostream& os, const std::vector<LinGaussPolicy>& policy);
void save_policy(const std::string& path, const std::vector<LinGaussPolicy>& policy);

std::vector<LinGaussPolicy> load_policy(std::istream& is);
std::vector<LinGaussPolicy> load_policy(const std::string& path);

}  // namespace moto

#endif
