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

// Reference solvers used only to check the library. They share no code with
// it: first-order methods with a final exact solve on the identified active
// set.

#ifndef TDCR_TESTS_ORACLES_HPP_
#define TDCR_TESTS_ORACLES_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

#include "tdcr/qp.hpp"

namespace tdcr::oracle {

struct Result {
  Eigen::VectorXd z;
  double objective = 0.0;
  int iterations = 0;
};

inline double objective(const QpProblem& p, const Eigen::VectorXd& z) {
  return 0.5 * z.dot(p.H * z) + p.g.dot(z);
}

inline double max_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

// Exact minimizer with the coordinates outside `free` held at their bounds,
// accepted only if it carries a full KKT certificate.
inline bool polish_box(const QpProblem& p, Eigen::VectorXd& z) {
  const int n = p.size();
  std::vector<int> free;
  for (int i = 0; i < n; ++i) {
    if (z(i) > p.lower(i) + 1e-9 && z(i) < p.upper(i) - 1e-9) free.push_back(i);
  }
  Eigen::VectorXd cand = z;
  for (int i = 0; i < n; ++i) {
    if (std::find(free.begin(), free.end(), i) != free.end()) continue;
    cand(i) = std::abs(z(i) - p.lower(i)) < std::abs(z(i) - p.upper(i)) ? p.lower(i) : p.upper(i);
  }
  if (!free.empty()) {
    const int f = static_cast<int>(free.size());
    Eigen::MatrixXd hff(f, f);
    Eigen::VectorXd rhs(f);
    for (int a = 0; a < f; ++a) {
      rhs(a) = -p.g(free[a]);
      for (int j = 0; j < n; ++j) {
        if (std::find(free.begin(), free.end(), j) == free.end()) rhs(a) -= p.H(free[a], j) * cand(j);
      }
      for (int b = 0; b < f; ++b) hff(a, b) = p.H(free[a], free[b]);
    }
    const Eigen::VectorXd zf = hff.ldlt().solve(rhs);
    for (int a = 0; a < f; ++a) cand(free[a]) = zf(a);
  }
  const Eigen::VectorXd grad = p.H * cand + p.g;
  for (int i = 0; i < n; ++i) {
    if (cand(i) < p.lower(i) - 1e-12 || cand(i) > p.upper(i) + 1e-12) return false;
    const bool is_free = std::find(free.begin(), free.end(), i) != free.end();
    if (is_free) continue;
    if (cand(i) == p.lower(i) && grad(i) < -1e-12) return false;
    if (cand(i) == p.upper(i) && grad(i) > 1e-12) return false;
  }
  z = cand;
  return true;
}

// Projected gradient descent with step 1/L for box-constrained problems.
inline Result box_projected_gradient(const QpProblem& p, int max_iterations = 1'000'000) {
  const double step = 1.0 / max_eigenvalue(p.H);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(p.size()).cwiseMax(p.lower).cwiseMin(p.upper);
  Result r;
  for (r.iterations = 0; r.iterations < max_iterations; ++r.iterations) {
    z = (z - step * (p.H * z + p.g)).cwiseMax(p.lower).cwiseMin(p.upper);
    if (r.iterations % 25 == 24) {
      Eigen::VectorXd cand = z;
      if (polish_box(p, cand)) {
        z = cand;
        break;
      }
    }
  }
  r.z = z;
  r.objective = objective(p, z);
  return r;
}

// All constraints as rows C z >= d, finite bounds included.
inline void stack_constraints(const QpProblem& p, Eigen::MatrixXd& c, Eigen::VectorXd& d) {
  const int n = p.size();
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (int i = 0; i < p.num_inequalities(); ++i) {
    rows.push_back(p.A.row(i).transpose());
    rhs.push_back(p.b(i));
  }
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(p.lower(i))) {
      rows.push_back(Eigen::VectorXd::Unit(n, i));
      rhs.push_back(p.lower(i));
    }
    if (std::isfinite(p.upper(i))) {
      rows.push_back(-Eigen::VectorXd::Unit(n, i));
      rhs.push_back(-p.upper(i));
    }
  }
  c.resize(static_cast<int>(rows.size()), n);
  d.resize(static_cast<int>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    c.row(static_cast<int>(k)) = rows[k].transpose();
    d(static_cast<int>(k)) = rhs[k];
  }
}

// Exact solve with the rows whose multipliers are clearly positive held as
// equalities; accepted only with a full KKT certificate.
inline bool polish_dual(const QpProblem& p, const Eigen::MatrixXd& c, const Eigen::VectorXd& d,
                        const Eigen::VectorXd& mu, Eigen::VectorXd& z) {
  const int n = p.size();
  std::vector<int> act;
  for (int k = 0; k < static_cast<int>(mu.size()); ++k) {
    if (mu(k) > 1e-9) act.push_back(k);
  }
  const int a = static_cast<int>(act.size());
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + a, n + a);
  Eigen::VectorXd rhs(n + a);
  kkt.topLeftCorner(n, n) = p.H;
  rhs.head(n) = -p.g;
  for (int j = 0; j < a; ++j) {
    kkt.block(0, n + j, n, 1) = -c.row(act[j]).transpose();
    kkt.block(n + j, 0, 1, n) = c.row(act[j]);
    rhs(n + j) = d(act[j]);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
  if (!lu.isInvertible()) return false;
  const Eigen::VectorXd sol = lu.solve(rhs);
  const Eigen::VectorXd cand = sol.head(n);
  if (a > 0 && (sol.tail(a).array() < -1e-12).any()) return false;
  if (((c * cand - d).array() < -1e-12).any()) return false;
  z = cand;
  return true;
}

// Projected gradient ascent on the dual of a strictly convex QP, accelerated
// with adaptive restart. The primal point is recovered from the multipliers.
inline Result dual_projected_gradient(const QpProblem& p, int max_iterations = 1'000'000) {
  Eigen::MatrixXd c;
  Eigen::VectorXd d;
  stack_constraints(p, c, d);
  const Eigen::LDLT<Eigen::MatrixXd> h(p.H);
  const Eigen::MatrixXd hinv_ct = h.solve(c.transpose());
  const Eigen::VectorXd hinv_g = h.solve(p.g);
  const int m = static_cast<int>(d.size());
  auto primal = [&](const Eigen::VectorXd& mu) -> Eigen::VectorXd {
    return hinv_ct * mu - hinv_g;
  };
  auto dual_value = [&](const Eigen::VectorXd& mu) {
    const Eigen::VectorXd z = primal(mu);
    return -0.5 * z.dot(p.H * z) + d.dot(mu);
  };

  Result r;
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd z = primal(mu);
  if (m > 0 && !polish_dual(p, c, d, mu, z)) {
    const double step = 1.0 / max_eigenvalue(c * hinv_ct);
    Eigen::VectorXd prev = mu, w = mu;
    double t = 1.0, value = dual_value(mu);
    bool certified = false;
    for (r.iterations = 0; r.iterations < max_iterations; ++r.iterations) {
      const Eigen::VectorXd next = (w + step * (d - c * primal(w))).cwiseMax(0.0);
      const double next_value = dual_value(next);
      if (next_value < value - 1e-14 * (1.0 + std::abs(value))) {  // restart momentum
        t = 1.0;
        w = mu;
      } else {
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        prev = mu;
        mu = next;
        w = mu + ((t - 1.0) / t_next) * (mu - prev);
        t = t_next;
        value = std::max(value, next_value);
      }
      if (r.iterations % 25 == 24 && polish_dual(p, c, d, mu, z)) {
        certified = true;
        break;
      }
    }
    if (!certified) z = primal(mu);
  }
  r.z = z;
  r.objective = objective(p, z);
  return r;
}

// Random strictly convex problem with a known feasible point. Eigenvalues of
// H lie in [0.5, 10].
inline QpProblem random_problem(std::mt19937_64& rng, int n, int m, bool boxed = true) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  Eigen::VectorXd eig(n);
  for (int i = 0; i < n; ++i) eig(i) = 0.5 + 9.5 * unit(rng);

  QpProblem p = QpProblem::with_size(n, m);
  p.H = q * eig.asDiagonal() * q.transpose();
  p.H = 0.5 * (p.H + p.H.transpose()).eval();
  for (int i = 0; i < n; ++i) p.g(i) = 5.0 * normal(rng);

  Eigen::VectorXd feasible(n);
  for (int i = 0; i < n; ++i) feasible(i) = 2.0 * unit(rng) - 1.0;
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < n; ++i) p.A(k, i) = normal(rng);
    p.b(k) = p.A.row(k).dot(feasible) - unit(rng);
  }
  if (boxed) {
    for (int i = 0; i < n; ++i) {
      p.lower(i) = feasible(i) - 0.5 - 1.5 * unit(rng);
      p.upper(i) = feasible(i) + 0.5 + 1.5 * unit(rng);
    }
  }
  return p;
}

}  // namespace tdcr::oracle

#endif  // TDCR_TESTS_ORACLES_HPP_
