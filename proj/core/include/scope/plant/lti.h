// Copyright 2026 The scope-rt Authors.
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
#include <stdexcept>

#include <Eigen/Dense>

namespace scope::plant {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// x_{t+1} = A x_t + B u_t, y_t = C x_t, safe while theta <= x_t <= omega.
struct LtiModel {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
  Eigen::VectorXd theta;
  Eigen::VectorXd omega;
  std::int64_t step_us = 10000;

  Eigen::Index k() const { return A.rows(); }
  Eigen::Index m() const { return B.cols(); }
  // Throws DimensionError or std::invalid_argument (bounds, step).
  void check() const;
};

Eigen::VectorXd lti_step(const LtiModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& u);
Eigen::VectorXd observe(const LtiModel& model, const Eigen::VectorXd& x);

}  // namespace scope::plant
