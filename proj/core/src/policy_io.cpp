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

#include "moto/policy_io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace moto {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_row_major(std::ostream& os, const Matrix& m) {
  bool first = true;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (!first) os << ' ';
      os << fmt(m(i, j));
      first = false;
    }
  }
  os << '\n';
}

std::vector<double> read_line_values(std::istream& is, int expected, const char* what) {
  std::string line;
  if (!std::getline(is, line)) {
    throw std::runtime_error(std::string("load_policy: unexpected end of file reading ") + what);
  }
  std::istringstream ss(line);
  std::vector<double> values;
  double v;
  while (ss >> v) values.push_back(v);
  if (static_cast<int>(values.size()) != expected) {
    throw std::runtime_error(std::string("load_policy: wrong value count on ") + what +
                             " line: expected " + std::to_string(expected) + ", got " +
                             std::to_string(values.size()));
  }
  return values;
}

}  // namespace

void save_policy(std::ostream& os, const std::vector<LinGaussPolicy>& policy) {
  if (policy.empty()) throw std::invalid_argument("save_policy: empty policy");
  const int d_s = policy[0].state_dim();
  const int d_a = policy[0].action_dim();
  os << "MOTO-POLICY v1 " << d_s << ' ' << d_a << ' ' << policy.size() << '\n';
  for (const auto& pol : policy) {
    write_row_major(os, pol.gain);
    write_row_major(os, pol.bias.transpose());
    write_row_major(os, pol.cov);
  }
}

void save_policy(const std::string& path, const std::vector<LinGaussPolicy>& policy) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_policy: cannot open " + path);
  save_policy(os, policy);
}

std::vector<LinGaussPolicy> load_policy(std::istream& is) {
  std::string magic, version;
  int d_s = 0, d_a = 0, T = 0;
  is >> magic >> version >> d_s >> d_a >> T;
  if (!is || magic != "MOTO-POLICY" || version != "v1") {
    throw std::runtime_error("load_policy: bad header (expected 'MOTO-POLICY v1 d_s d_a T')");
  }
  if (d_s < 1 || d_a < 1 || T < 1) throw std::runtime_error("load_policy: bad dimensions");
  is.ignore(std::numeric_limits<std::streamsize>::max(), '\n');

  std::vector<LinGaussPolicy> policy(T);
  for (int t = 0; t < T; ++t) {
    LinGaussPolicy& pol = policy[t];
    const auto gain = read_line_values(is, d_a * d_s, "gain");
    const auto bias = read_line_values(is, d_a, "bias");
    const auto cov = read_line_values(is, d_a * d_a, "covariance");
    pol.gain = Matrix(d_a, d_s);
    for (int i = 0; i < d_a; ++i) {
      for (int j = 0; j < d_s; ++j) pol.gain(i, j) = gain[i * d_s + j];
    }
    pol.bias = Eigen::Map<const Vector>(bias.data(), d_a);
    pol.cov = Matrix(d_a, d_a);
    for (int i = 0; i < d_a; ++i) {
      for (int j = 0; j < d_a; ++j) pol.cov(i, j) = cov[i * d_a + j];
    }
  }
  return policy;
}

std::vector<LinGaussPolicy> load_policy(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_policy: cannot open " + path);
  return load_policy(is);
}

}  // namespace moto
