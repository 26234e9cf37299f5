// Copyright 2026 The fockchip Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Thin wrapper over Eigen's Levenberg-Marquardt for small dense problems with
// analytic Jacobians.

#include <functional>
#include <utility>

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>

namespace fockchip::detail {

using ResidualFn = std::function<void(const Eigen::VectorXd& params, Eigen::VectorXd& residuals)>;
using JacobianFn = std::function<void(const Eigen::VectorXd& params, Eigen::MatrixXd& jacobian)>;

struct LeastSquaresResult {
  Eigen::VectorXd params;
  Eigen::VectorXd residuals;
  double residual_norm = 0.0;
  Eigen::LevenbergMarquardtSpace::Status status{};
  Eigen::Index evaluations = 0;
  bool converged = false;
};

class LeastSquaresFunctor : public Eigen::DenseFunctor<double> {
 public:
  LeastSquaresFunctor(int params, int values, ResidualFn f, JacobianFn j)
      : Eigen::DenseFunctor<double>(params, values), f_(std::move(f)), j_(std::move(j)) {}

  int operator()(const InputType& x, ValueType& fvec) const {
    f_(x, fvec);
    return 0;
  }
  int df(const InputType& x, JacobianType& fjac) const {
    j_(x, fjac);
    return 0;
  }

 private:
  ResidualFn f_;
  JacobianFn j_;
};

inline LeastSquaresResult least_squares(int values, Eigen::VectorXd start, ResidualFn f, JacobianFn j,
                                        int max_evaluations = 2000) {
  LeastSquaresFunctor functor(static_cast<int>(start.size()), values, std::move(f), std::move(j));
  Eigen::LevenbergMarquardt<LeastSquaresFunctor> lm(functor);
  lm.setMaxfev(max_evaluations);
  lm.setXtol(1e-15);
  lm.setFtol(1e-15);
  lm.setGtol(0.0);
  LeastSquaresResult result;
  result.status = lm.minimize(start);
  result.params = start;
  result.residuals.resize(values);
  functor(start, result.residuals);
  result.residual_norm = result.residuals.norm();
  result.evaluations = lm.nfev();
  using Eigen::LevenbergMarquardtSpace::Status;
  result.converged =
      result.status != Status::ImproperInputParameters && result.status != Status::TooManyFunctionEvaluation;
  return result;
}

}  // namespace fockchip::detail
