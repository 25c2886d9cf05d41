// Copyright 2026 The tdcr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TDCR_QP_HPP_
#define TDCR_QP_HPP_

#include <Eigen/Dense>

#include <string_view>
#include <vector>

namespace tdcr {

/// Largest decision-vector size accepted by solve_qp.
inline constexpr int kMaxQpSize = 8;

/// Dense convex QP
///
///   minimize    1/2 z'Hz + g'z
///   subject to  A z >= b
///               lower <= z <= upper
///
/// Bounds may be +/- infinity. A and b may have zero rows.
struct QpProblem {
  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int size() const { return static_cast<int>(g.size()); }
  int num_inequalities() const { return static_cast<int>(b.size()); }

  /// Problem with n variables, m general rows, and infinite bounds.
  static QpProblem with_size(int n, int m = 0);
};

enum class QpStatus { kOptimal, kInfeasible, kMaxIterations };

std::string_view to_string(QpStatus status);

struct QpSolution {
  Eigen::VectorXd z;
  double objective = 0.0;
  /// Tight constraints at z. Indices [0, m) are rows of A, [m, m+n) lower
  /// bounds and [m+n, m+2n) upper bounds.
  std::vector<int> active_set;
  double kkt_residual = 0.0;
  QpStatus status = QpStatus::kInfeasible;
  int iterations = 0;
};

struct QpOptions {
  int max_iterations = 200;
  /// Added to the diagonal of H when its Cholesky factorization fails.
  double regularization = 1e-10;
};

/// Throws std::invalid_argument when dimensions are inconsistent, n exceeds
/// kMaxQpSize, H is asymmetric, or H has an eigenvalue below -1e-10.
void validate_qp(const QpProblem& problem);

/// Global minimizer by a primal active-set method. A feasible start point is
/// found first by an elastic phase-1 program. Deterministic.
QpSolution solve_qp(const QpProblem& problem, const QpOptions& options = {});

/// Objective value 1/2 z'Hz + g'z.
double qp_objective(const QpProblem& problem, const Eigen::VectorXd& z);

/// Maximum violation of the KKT conditions at z: stationarity (multipliers of
/// the constraints active within 1e-9 recovered by nonnegative least
/// squares), primal feasibility, and complementary slackness. Dimension
/// mismatch throws std::invalid_argument.
double check_kkt(const QpProblem& problem, const Eigen::VectorXd& z);

}  // namespace tdcr

#endif  // TDCR_QP_HPP_
