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

#include <Eigen/Dense>

#include <random>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "tdcr/qp.hpp"

using tdcr::QpProblem;
using tdcr::QpStatus;

namespace {

QpProblem box_problem(int n, double lo, double hi) {
  QpProblem p = QpProblem::with_size(n);
  p.H = 2.0 * Eigen::MatrixXd::Identity(n, n);
  p.lower.setConstant(lo);
  p.upper.setConstant(hi);
  return p;
}

}  // namespace

TEST_CASE("unconstrained minimum at the origin") {
  const auto sol = tdcr::solve_qp(box_problem(3, -10, 10));
  CHECK(sol.status == QpStatus::kOptimal);
  CHECK(sol.z.norm() == doctest::Approx(0.0));
  CHECK(sol.objective == doctest::Approx(0.0));
  CHECK(sol.active_set.empty());
}

TEST_CASE("clipped minimum matches projected gradient") {
  QpProblem p = box_problem(2, -10, 0.5);
  p.g << -2, -2;
  const auto sol = tdcr::solve_qp(p);
  REQUIRE(sol.status == QpStatus::kOptimal);
  const auto ref = tdcr::oracle::box_projected_gradient(p);
  CHECK((sol.z - ref.z).norm() <= 1e-8);
  CHECK(sol.z(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol.z(1) == doctest::Approx(0.5).epsilon(1e-12));
  // Both upper bounds: indices m + n + i with m = 0, n = 2.
  CHECK(sol.active_set == std::vector<int>{2, 3});
}

TEST_CASE("random box problems agree with projected gradient") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 5;
    const QpProblem p = tdcr::oracle::random_problem(rng, n, 0);
    const auto sol = tdcr::solve_qp(p);
    REQUIRE(sol.status == QpStatus::kOptimal);
    const auto ref = tdcr::oracle::box_projected_gradient(p);
    CHECK((sol.z - ref.z).lpNorm<Eigen::Infinity>() <= 1e-6);
    CHECK(std::abs(sol.objective - ref.objective) <= 1e-9);
    CHECK(sol.kkt_residual <= 1e-8);
  }
}

TEST_CASE("random general problems agree with the dual oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 5;
    const int m = 1 + trial % (2 * n);
    const QpProblem p = tdcr::oracle::random_problem(rng, n, m, trial % 3 != 0);
    const auto sol = tdcr::solve_qp(p);
    REQUIRE(sol.status == QpStatus::kOptimal);
    const auto ref = tdcr::oracle::dual_projected_gradient(p);
    CHECK((sol.z - ref.z).lpNorm<Eigen::Infinity>() <= 1e-6);
    CHECK(std::abs(sol.objective - ref.objective) <= 1e-9);
    CHECK(sol.kkt_residual <= 1e-8);
    CHECK(((p.A * sol.z - p.b).array() >= -1e-10).all());
  }
}

TEST_CASE("optimal solutions satisfy the solution invariants") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const QpProblem p = tdcr::oracle::random_problem(rng, 4, 5);
    const auto sol = tdcr::solve_qp(p);
    REQUIRE(sol.status == QpStatus::kOptimal);
    CHECK(sol.kkt_residual <= 1e-8);
    CHECK((sol.z.array() >= p.lower.array() - 1e-10).all());
    CHECK((sol.z.array() <= p.upper.array() + 1e-10).all());
    CHECK(((p.A * sol.z - p.b).array() >= -1e-10).all());
    CHECK(sol.objective == doctest::Approx(tdcr::qp_objective(p, sol.z)));
  }
}

TEST_CASE("solutions are bitwise deterministic") {
  std::mt19937_64 rng(5);
  const QpProblem p = tdcr::oracle::random_problem(rng, 6, 8);
  const auto a = tdcr::solve_qp(p);
  const auto b = tdcr::solve_qp(p);
  CHECK(a.z == b.z);
  CHECK(a.objective == b.objective);
  CHECK(a.active_set == b.active_set);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("scaling a constraint row leaves the minimizer unchanged") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    QpProblem p = tdcr::oracle::random_problem(rng, 3, 4);
    const auto base = tdcr::solve_qp(p);
    for (int k = 0; k < p.num_inequalities(); ++k) {
      const double c = scale(rng);
      p.A.row(k) *= c;
      p.b(k) *= c;
    }
    const auto scaled = tdcr::solve_qp(p);
    CHECK((base.z - scaled.z).norm() <= 1e-10);
  }
}

TEST_CASE("an inactive constraint does not move the minimizer") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const QpProblem p = tdcr::oracle::random_problem(rng, 3, 2);
    const auto base = tdcr::solve_qp(p);
    QpProblem q = QpProblem::with_size(3, 3);
    q.H = p.H;
    q.g = p.g;
    q.lower = p.lower;
    q.upper = p.upper;
    q.A.topRows(2) = p.A;
    q.b.head(2) = p.b;
    q.A.row(2) << 1.0, -2.0, 0.5;
    q.b(2) = q.A.row(2).dot(base.z) - 1.0;  // strictly satisfied
    const auto extended = tdcr::solve_qp(q);
    CHECK((base.z - extended.z).norm() <= 1e-10);
  }
}

TEST_CASE("infeasibility is reported") {
  SUBCASE("crossed bounds") {
    QpProblem p = box_problem(2, -1, 1);
    p.lower(1) = 2.0;
    CHECK(tdcr::solve_qp(p).status == QpStatus::kInfeasible);
  }
  SUBCASE("contradictory rows") {
    QpProblem p = box_problem(2, -10, 10);
    p.A.resize(2, 2);
    p.b.resize(2);
    p.A << 1, 0, -1, 0;
    p.b << 1, 0;  // z0 >= 1 and z0 <= 0
    const auto sol = tdcr::solve_qp(p);
    CHECK(sol.status == QpStatus::kInfeasible);
    CHECK(tdcr::to_string(sol.status) == "infeasible");
  }
  SUBCASE("rows against bounds") {
    QpProblem p = box_problem(2, -1, 1);
    p.A.resize(1, 2);
    p.b.resize(1);
    p.A << 1, 1;
    p.b << 3;
    CHECK(tdcr::solve_qp(p).status == QpStatus::kInfeasible);
  }
}

TEST_CASE("feasible start outside the box is repaired") {
  // The clamped origin violates the row, so phase one has to run.
  QpProblem p = box_problem(2, -5, 5);
  p.A.resize(1, 2);
  p.b.resize(1);
  p.A << 1, 1;
  p.b << 4;
  const auto sol = tdcr::solve_qp(p);
  REQUIRE(sol.status == QpStatus::kOptimal);
  CHECK(sol.z(0) == doctest::Approx(2.0));
  CHECK(sol.z(1) == doctest::Approx(2.0));
  CHECK(sol.active_set == std::vector<int>{0});
}

TEST_CASE("semidefinite cost is regularized") {
  QpProblem p = QpProblem::with_size(3);
  p.H.setZero();
  p.H(0, 0) = 2.0;
  p.g << -2, 1, -1;
  p.lower.setConstant(-1);
  p.upper.setConstant(1);
  const auto sol = tdcr::solve_qp(p);
  REQUIRE(sol.status == QpStatus::kOptimal);
  CHECK(sol.z(0) == doctest::Approx(1.0));
  CHECK(sol.z(1) == doctest::Approx(-1.0));
  CHECK(sol.z(2) == doctest::Approx(1.0));
}

TEST_CASE("problem validation") {
  QpProblem p = box_problem(2, -1, 1);
  CHECK_NOTHROW(tdcr::validate_qp(p));
  SUBCASE("asymmetric") {
    p.H(0, 1) = 1.0;
    CHECK_THROWS_AS(tdcr::validate_qp(p), std::invalid_argument);
  }
  SUBCASE("indefinite") {
    p.H(1, 1) = -1.0;
    CHECK_THROWS_AS(tdcr::validate_qp(p), std::invalid_argument);
  }
  SUBCASE("non-finite") {
    p.g(0) = std::nan("");
    CHECK_THROWS_AS(tdcr::validate_qp(p), std::invalid_argument);
  }
  SUBCASE("too large") {
    CHECK_THROWS_AS(tdcr::validate_qp(box_problem(9, -1, 1)), std::invalid_argument);
  }
  SUBCASE("shape mismatch") {
    p.g.resize(3);
    CHECK_THROWS_AS(tdcr::validate_qp(p), std::invalid_argument);
  }
}

TEST_CASE("kkt residual") {
  std::mt19937_64 rng(19);
  QpProblem p = tdcr::oracle::random_problem(rng, 3, 0, false);
  p.lower.setConstant(-100);
  p.upper.setConstant(100);
  const auto sol = tdcr::solve_qp(p);
  REQUIRE(sol.status == QpStatus::kOptimal);
  CHECK(tdcr::check_kkt(p, sol.z) <= 1e-8);

  SUBCASE("perturbed optimizer violates stationarity") {
    Eigen::VectorXd z = sol.z;
    z(0) += 0.1;
    const double stationarity = (p.H * z + p.g).lpNorm<Eigen::Infinity>();
    CHECK(stationarity > 1e-3);
    CHECK(tdcr::check_kkt(p, z) >= stationarity - 1e-12);
  }
  SUBCASE("bound violation lower-bounds the residual") {
    Eigen::VectorXd z = sol.z;
    z(1) = p.upper(1) + 0.2;
    CHECK(tdcr::check_kkt(p, z) >= 0.2);
  }
  SUBCASE("dimension mismatch is a contract violation") {
    CHECK_THROWS_AS(tdcr::check_kkt(p, Eigen::VectorXd::Zero(2)), std::invalid_argument);
  }
}
