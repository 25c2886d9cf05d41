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

#include "tdcr/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tdcr {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kActiveTol = 1e-9;
// Weight of the proximity term in the phase-1 program. Small enough that the
// elastic penalty stays exact for any problem scale met in practice.
constexpr double kPhase1Proximity = 1e-8;

// All constraints as rows C z >= d, remembering where each row came from in
// the public index scheme.
struct ConstraintRows {
  MatrixXd C;
  VectorXd d;
  std::vector<int> origin;
};

ConstraintRows gather_rows(const QpProblem& p) {
  const int n = p.size();
  const int m = p.num_inequalities();
  int count = m;
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(p.lower(i))) ++count;
    if (std::isfinite(p.upper(i))) ++count;
  }
  ConstraintRows rows;
  rows.C = MatrixXd::Zero(count, n);
  rows.d = VectorXd::Zero(count);
  rows.origin.reserve(count);
  int r = 0;
  for (int i = 0; i < m; ++i, ++r) {
    rows.C.row(r) = p.A.row(i);
    rows.d(r) = p.b(i);
    rows.origin.push_back(i);
  }
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(p.lower(i))) continue;
    rows.C(r, i) = 1.0;
    rows.d(r) = p.lower(i);
    rows.origin.push_back(m + i);
    ++r;
  }
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(p.upper(i))) continue;
    rows.C(r, i) = -1.0;
    rows.d(r) = -p.upper(i);
    rows.origin.push_back(m + n + i);
    ++r;
  }
  return rows;
}

MatrixXd working_rows(const MatrixXd& C, const std::vector<int>& working) {
  MatrixXd Cw(static_cast<Eigen::Index>(working.size()), C.cols());
  for (std::size_t k = 0; k < working.size(); ++k) Cw.row(k) = C.row(working[k]);
  return Cw;
}

struct ActiveSetResult {
  VectorXd z;
  QpStatus status = QpStatus::kMaxIterations;
  int iterations = 0;
};

// Primal active-set iteration from a feasible z. H must be positive definite.
// Ties in the ratio test and the choice among negative multipliers both go to
// the lowest row index (Bland).
ActiveSetResult primal_active_set(const MatrixXd& H, const VectorXd& g,
                                  const MatrixXd& C, const VectorXd& d,
                                  VectorXd z, int max_iterations) {
  const Eigen::Index n = z.size();
  const Eigen::Index rows = C.rows();
  std::vector<int> working;
  std::vector<bool> in_working(static_cast<std::size_t>(rows), false);
  const Eigen::LLT<MatrixXd> h_llt(H);

  ActiveSetResult result;
  // Set after a full, unblocked step: z is then the minimizer on the current
  // working set, and recomputing the step would only amplify rounding when
  // H is poorly conditioned.
  bool subspace_minimum = false;
  for (int iter = 0; iter < max_iterations; ++iter) {
    result.iterations = iter + 1;
    const VectorXd grad = H * z + g;
    const auto w = static_cast<Eigen::Index>(working.size());

    VectorXd step = VectorXd::Zero(n);
    MatrixXd Cw;
    if (w > 0) Cw = working_rows(C, working);
    if (subspace_minimum) {
      subspace_minimum = false;
    } else if (w == 0) {
      step = -h_llt.solve(grad);
    } else {
      if (w < n) {
        const Eigen::HouseholderQR<MatrixXd> qr(Cw.transpose());
        const MatrixXd Q = qr.householderQ();
        const MatrixXd Z = Q.rightCols(n - w);
        const MatrixXd reduced = Z.transpose() * H * Z;
        step = -Z * reduced.llt().solve(Z.transpose() * grad);
      }
    }

    const double scale = 1.0 + z.lpNorm<Eigen::Infinity>();
    if (step.lpNorm<Eigen::Infinity>() <= 1e-13 * scale) {
      if (w == 0) {
        result.z = z;
        result.status = QpStatus::kOptimal;
        return result;
      }
      const VectorXd lambda =
          Cw.transpose().colPivHouseholderQr().solve(grad);
      const double lambda_tol = 1e-12 * (1.0 + grad.lpNorm<Eigen::Infinity>());
      int drop = -1;
      for (Eigen::Index k = 0; k < w; ++k) {
        if (lambda(k) < -lambda_tol &&
            (drop < 0 || working[k] < working[drop])) {
          drop = static_cast<int>(k);
        }
      }
      if (drop < 0) {
        result.z = z;
        result.status = QpStatus::kOptimal;
        return result;
      }
      in_working[working[drop]] = false;
      working.erase(working.begin() + drop);
      continue;
    }

    double alpha = 1.0;
    int blocking = -1;
    const double step_norm = step.norm();
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (in_working[i]) continue;
      const double slope = C.row(i).dot(step);
      if (slope >= -1e-12 * C.row(i).norm() * step_norm) continue;
      const double slack = std::max(0.0, C.row(i).dot(z) - d(i));
      const double ratio = slack / -slope;
      if (ratio < alpha) {
        alpha = ratio;
        blocking = static_cast<int>(i);
      }
    }
    z += alpha * step;
    if (blocking >= 0) {
      working.push_back(blocking);
      in_working[blocking] = true;
    } else {
      subspace_minimum = true;
    }
  }
  result.z = z;
  result.status = QpStatus::kMaxIterations;
  return result;
}

// Lawson-Hanson nonnegative least squares: min |M x - y| subject to x >= 0.
VectorXd nnls(const MatrixXd& M, const VectorXd& y) {
  const Eigen::Index k = M.cols();
  VectorXd x = VectorXd::Zero(k);
  if (k == 0) return x;
  std::vector<bool> passive(static_cast<std::size_t>(k), false);
  const double tol = 1e-14 * (1.0 + M.lpNorm<Eigen::Infinity>()) *
                     (1.0 + y.lpNorm<Eigen::Infinity>());

  auto solve_passive = [&](VectorXd& s) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < k; ++j)
      if (passive[j]) cols.push_back(j);
    MatrixXd Mp(M.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) Mp.col(c) = M.col(cols[c]);
    const VectorXd sp = Mp.colPivHouseholderQr().solve(y);
    s.setZero(k);
    for (std::size_t c = 0; c < cols.size(); ++c) s(cols[c]) = sp(c);
  };

  for (int outer = 0; outer < 3 * k + 10; ++outer) {
    const VectorXd w = M.transpose() * (y - M * x);
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!passive[j] && w(j) > tol && (best < 0 || w(j) > w(best))) best = j;
    }
    if (best < 0) break;
    passive[best] = true;
    VectorXd s;
    for (int inner = 0; inner < 3 * k + 10; ++inner) {
      solve_passive(s);
      bool positive = true;
      for (Eigen::Index j = 0; j < k; ++j)
        if (passive[j] && s(j) <= 0.0) positive = false;
      if (positive) break;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (passive[j] && s(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - s(j)));
      }
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < k; ++j) {
        if (passive[j] && x(j) <= tol) {
          passive[j] = false;
          x(j) = 0.0;
        }
      }
    }
    x = s;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!passive[j]) x(j) = 0.0;
    }
  }
  return x;
}

}  // namespace

QpProblem QpProblem::with_size(int n, int m) {
  QpProblem p;
  p.H = MatrixXd::Zero(n, n);
  p.g = VectorXd::Zero(n);
  p.A = MatrixXd::Zero(m, n);
  p.b = VectorXd::Zero(m);
  p.lower = VectorXd::Constant(n, -kInf);
  p.upper = VectorXd::Constant(n, kInf);
  return p;
}

std::string_view to_string(QpStatus status) {
  switch (status) {
    case QpStatus::kOptimal: return "optimal";
    case QpStatus::kInfeasible: return "infeasible";
    case QpStatus::kMaxIterations: return "max_iter";
  }
  return "unknown";
}

void validate_qp(const QpProblem& p) {
  const Eigen::Index n = p.g.size();
  if (n == 0 || n > kMaxQpSize) {
    throw std::invalid_argument("qp: size must be in [1, " +
                                std::to_string(kMaxQpSize) + "]");
  }
  if (p.H.rows() != n || p.H.cols() != n) {
    throw std::invalid_argument("qp: H must be n x n");
  }
  if (p.A.cols() != n || p.A.rows() != p.b.size()) {
    throw std::invalid_argument("qp: A must be m x n with m = size(b)");
  }
  if (p.lower.size() != n || p.upper.size() != n) {
    throw std::invalid_argument("qp: bounds must have n entries");
  }
  if (!p.H.allFinite() || !p.g.allFinite() || !p.A.allFinite() ||
      !p.b.allFinite()) {
    throw std::invalid_argument("qp: non-finite problem data");
  }
  const double scale = 1.0 + p.H.lpNorm<Eigen::Infinity>();
  if ((p.H - p.H.transpose()).lpNorm<Eigen::Infinity>() > 1e-12 * scale) {
    throw std::invalid_argument("qp: H is not symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(p.H, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument("qp: H is not positive semidefinite");
  }
}

double qp_objective(const QpProblem& p, const VectorXd& z) {
  return 0.5 * z.dot(p.H * z) + p.g.dot(z);
}

double check_kkt(const QpProblem& p, const VectorXd& z) {
  if (z.size() != p.size() || p.H.rows() != p.size() ||
      p.A.cols() != p.size() || p.A.rows() != p.b.size() ||
      p.lower.size() != p.size() || p.upper.size() != p.size()) {
    throw std::invalid_argument("check_kkt: dimension mismatch");
  }
  const ConstraintRows rows = gather_rows(p);
  const VectorXd slack = rows.C * z - rows.d;

  double residual = 0.0;
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < slack.size(); ++i) {
    residual = std::max(residual, -slack(i));
    if (std::abs(slack(i)) <= kActiveTol) active.push_back(i);
  }

  MatrixXd Ca(static_cast<Eigen::Index>(active.size()), z.size());
  for (std::size_t k = 0; k < active.size(); ++k) Ca.row(k) = rows.C.row(active[k]);
  const VectorXd grad = p.H * z + p.g;
  const VectorXd lambda = nnls(Ca.transpose(), grad);
  const VectorXd stationarity = Ca.transpose() * lambda - grad;
  residual = std::max(residual, stationarity.lpNorm<Eigen::Infinity>());
  for (std::size_t k = 0; k < active.size(); ++k) {
    residual = std::max(residual, std::abs(lambda(k) * slack(active[k])));
  }
  return residual;
}

QpSolution solve_qp(const QpProblem& p, const QpOptions& options) {
  validate_qp(p);
  const int n = p.size();
  QpSolution solution;
  solution.z = VectorXd::Zero(n);

  for (int i = 0; i < n; ++i) {
    if (p.lower(i) > p.upper(i)) {
      solution.status = QpStatus::kInfeasible;
      solution.kkt_residual = kInf;
      return solution;
    }
  }

  MatrixXd H = p.H;
  if (Eigen::LLT<MatrixXd>(H).info() != Eigen::Success) {
    double delta = options.regularization;
    do {
      H = p.H + delta * MatrixXd::Identity(n, n);
      delta *= 10.0;
    } while (Eigen::LLT<MatrixXd>(H).info() != Eigen::Success && delta < 1e-2);
  }

  const ConstraintRows rows = gather_rows(p);
  const int m = p.num_inequalities();

  VectorXd z0(n);
  for (int i = 0; i < n; ++i) z0(i) = std::clamp(0.0, p.lower(i), p.upper(i));

  double violation = 0.0;
  for (int i = 0; i < m; ++i) {
    violation = std::max(violation, p.b(i) - p.A.row(i).dot(z0));
  }

  int iterations = 0;
  VectorXd start = z0;
  if (violation > 0.0) {
    // Elastic phase 1 over (z, t): minimize t + rho/2 |(z - z0, t)|^2
    // subject to A z + t >= b, t >= 0, and the bounds on z.
    const Eigen::Index rcount = rows.C.rows();
    MatrixXd C1 = MatrixXd::Zero(rcount + 1, n + 1);
    VectorXd d1 = VectorXd::Zero(rcount + 1);
    C1.topLeftCorner(rcount, n) = rows.C;
    d1.head(rcount) = rows.d;
    C1.block(0, n, m, 1).setOnes();
    C1(rcount, n) = 1.0;
    const MatrixXd H1 = kPhase1Proximity * MatrixXd::Identity(n + 1, n + 1);
    VectorXd g1(n + 1);
    g1.head(n) = -kPhase1Proximity * z0;
    g1(n) = 1.0;
    VectorXd x1(n + 1);
    x1.head(n) = z0;
    x1(n) = violation;
    const ActiveSetResult phase1 =
        primal_active_set(H1, g1, C1, d1, x1, options.max_iterations);
    iterations += phase1.iterations;
    if (phase1.status != QpStatus::kOptimal) {
      solution.status = phase1.status;
      solution.kkt_residual = kInf;
      solution.iterations = iterations;
      return solution;
    }
    const double feas_tol = 1e-9 * (1.0 + p.b.lpNorm<Eigen::Infinity>());
    if (phase1.z(n) > feas_tol) {
      solution.status = QpStatus::kInfeasible;
      solution.kkt_residual = kInf;
      solution.iterations = iterations;
      return solution;
    }
    start = phase1.z.head(n);
  }

  const ActiveSetResult phase2 = primal_active_set(
      H, p.g, rows.C, rows.d, start, options.max_iterations - iterations);
  solution.z = phase2.z;
  solution.status = phase2.status;
  solution.iterations = iterations + phase2.iterations;
  solution.objective = qp_objective(p, solution.z);
  solution.kkt_residual = check_kkt(p, solution.z);

  const VectorXd slack = rows.C * solution.z - rows.d;
  for (Eigen::Index i = 0; i < slack.size(); ++i) {
    if (std::abs(slack(i)) <= kActiveTol) solution.active_set.push_back(rows.origin[i]);
  }
  std::sort(solution.active_set.begin(), solution.active_set.end());
  return solution;
}

}  // namespace tdcr
