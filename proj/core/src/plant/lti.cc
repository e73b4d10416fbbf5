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

#include "scope/plant/lti.h"

namespace scope::plant {

void LtiModel::check() const {
  const auto n = A.rows();
  if (A.cols() != n) throw DimensionError("A must be square");
  if (B.rows() != n) throw DimensionError("B must have as many rows as A");
  if (C.rows() != n || C.cols() != n) throw DimensionError("C must be k x k");
  if (theta.size() != n || omega.size() != n) throw DimensionError("bounds must have k components");
  if ((theta.array() >= omega.array()).any()) throw std::invalid_argument("theta must be below omega");
  if (step_us <= 0) throw std::invalid_argument("step period must be positive");
}

Eigen::VectorXd lti_step(const LtiModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
  if (x.size() != model.A.cols()) throw DimensionError("state has wrong dimension");
  if (u.size() != model.B.cols()) throw DimensionError("control has wrong dimension");
  return model.A * x + model.B * u;
}

Eigen::VectorXd observe(const LtiModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.C.cols()) throw DimensionError("state has wrong dimension");
  return model.C * x;
}

}  // namespace scope::plant
