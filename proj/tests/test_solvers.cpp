// Copyright 2026 qnewton contributors
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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "qnewton/pde.hpp"
#include "qnewton/solvers.hpp"
#include "test_helpers.hpp"

using namespace qnewton;

namespace {

// A linear system wrapped as a nonlinear problem: F(u) = A u - b.
NonlinearProblem affine_problem(const ComplexMatrix& a, const RVector& b) {
  NonlinearProblem p;
  p.name = "affine";
  p.size = b.size();
  p.target.assign(b.size(), 0.0);
  p.initial_guess.assign(b.size(), 0.0);
  p.residual = [a, b](const RVector& u) {
    RVector f = a.apply_real(u);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] -= b[i];
    return f;
  };
  p.jacobian = [a](const RVector&) { return a; };
  return p;
}

NonlinearProblem scalar_square_problem(double u0) {
  NonlinearProblem p;
  p.name = "scalar";
  p.size = 1;
  p.target.assign(1, 0.0);
  p.initial_guess.assign(1, u0);
  p.residual = [](const RVector& u) { return RVector{u[0] * u[0] - 4.0}; };
  p.jacobian = [](const RVector& u) {
    ComplexMatrix j(1, 1);
    j(0, 0) = 2.0 * u[0];
    return j;
  };
  return p;
}

}  // namespace

TEST_CASE("gauss_seidel") {
  SECTION("identity converges in one sweep") {
    const RVector b{1, -2, 3};
    const RVector x = gauss_seidel(ComplexMatrix::identity(3), b, RVector(3, 0.0), 1);
    for (std::size_t i = 0; i < 3; ++i) CHECK(x[i] == b[i]);
  }
  SECTION("2x2 SPD system converges to the fixed point") {
    ComplexMatrix a(2, 2);
    a(0, 0) = 2; a(0, 1) = 1; a(1, 0) = 1; a(1, 1) = 2;
    const RVector b{3, 3};
    double prev_err = 1e30;
    for (int sweeps : {1, 3, 6, 12, 24}) {
      const RVector x = gauss_seidel(a, b, RVector(2, 0.0), sweeps);
      const double err = std::hypot(x[0] - 1.0, x[1] - 1.0);
      CHECK(err < prev_err);
      prev_err = err;
    }
    CHECK(prev_err < 1e-6);
  }
  SECTION("zero diagonal is rejected") {
    ComplexMatrix a(2, 2);
    a(0, 1) = 1; a(1, 0) = 1;
    CHECK_THROWS_AS(gauss_seidel(a, RVector{1, 1}, RVector(2, 0.0), 1), ZeroDiagonalError);
  }
  SECTION("non-dominant systems may diverge without error") {
    ComplexMatrix a(2, 2);
    a(0, 0) = 0.1; a(0, 1) = 1; a(1, 0) = 1; a(1, 1) = 0.1;
    CHECK_NOTHROW(gauss_seidel(a, RVector{1, 1}, RVector(2, 0.0), 5));
  }
}

TEST_CASE("Newton on an affine problem converges in exactly one iteration") {
  const ComplexMatrix a = testing::matrix_with_spectrum({1.0, 3.0, 6.0}, 8);
  const RVector b{0.4, -1.0, 2.0};
  const NewtonResult res = newton_solve(affine_problem(a, b), make_direct_solver(), {1e-10, 10, 1e12});
  CHECK(res.record.stop_reason == StopReason::ThresholdReached);
  CHECK(res.record.iterations_to(1e-10) == 1);
}

TEST_CASE("Newton on u^2 = 4 follows the hand iteration") {
  const NewtonResult res = newton_solve(scalar_square_problem(3.0), make_direct_solver(),
                                        {1e-12, 20, 1e12});
  CHECK_THAT(res.solution[0], Catch::Matchers::WithinAbs(2.0, 1e-9));
  // iterates 3 -> 13/6 -> 2.0064... (recorded residuals are |u^2 - 4|)
  REQUIRE(res.record.entries.size() >= 3);
  CHECK_THAT(res.record.entries[0].residual, Catch::Matchers::WithinAbs(5.0, 1e-12));
  CHECK_THAT(res.record.entries[1].residual,
             Catch::Matchers::WithinAbs(std::abs(13.0 / 6.0 * 13.0 / 6.0 - 4.0), 1e-9));
  CHECK_THAT(res.record.entries[2].residual,
             Catch::Matchers::WithinAbs(625.0 / 24336.0, 1e-9));  // (313/156)^2 - 4
}

TEST_CASE("stopping criteria") {
  SECTION("max iterations") {
    const NewtonResult res = newton_solve(scalar_square_problem(1e3), make_direct_solver(),
                                          {1e-12, 1, 1e12});
    CHECK(res.record.stop_reason == StopReason::MaxIterations);
    CHECK(res.record.entries.size() == 2);  // residual before the solve and after termination
  }
  SECTION("divergence guard") {
    const NewtonResult res = newton_solve(scalar_square_problem(1e7), make_direct_solver(),
                                          {1e-12, 50, 1e12});
    CHECK(res.record.stop_reason == StopReason::Diverged);
  }
  SECTION("failing inner solve is recorded and stops the run") {
    LinearSolverFn broken = [](const ComplexMatrix&, const RVector&, double&) -> RVector {
      throw ZeroProbabilityError("post-selection wiped out");
    };
    const NewtonResult res = newton_solve(scalar_square_problem(3.0), broken, {1e-12, 10, 1e12});
    CHECK(res.record.stop_reason == StopReason::Diverged);
    CHECK(res.record.failure_message.find("iteration 0") != std::string::npos);
  }
  SECTION("invalid criteria are rejected") {
    CHECK_THROWS_AS(newton_solve(scalar_square_problem(1.0), make_direct_solver(), {0.0, 10, 1e12}),
                    ConfigError);
  }
}

TEST_CASE("recorded residuals match independent evaluation") {
  const NonlinearProblem p = nonlinear_poisson(6);
  const NewtonResult res = newton_solve(p, make_direct_solver(), {1e-9, 20, 1e12});
  // terminal entry equals a fresh evaluation at the returned solution
  const double r = norm2(p.residual(res.solution));
  CHECK_THAT(res.record.final_residual(), Catch::Matchers::WithinRel(r, 1e-12));
  // first entry equals the residual at the initial guess
  const double r0 = norm2(p.residual(p.initial_guess));
  CHECK_THAT(res.record.entries.front().residual, Catch::Matchers::WithinRel(r0, 1e-12));
  // indices strictly increasing, residuals non-negative
  for (std::size_t i = 0; i < res.record.entries.size(); ++i) {
    CHECK(res.record.entries[i].residual >= 0);
    if (i > 0) CHECK(res.record.entries[i].iteration > res.record.entries[i - 1].iteration);
  }
}

TEST_CASE("Newton with the direct solver decays superlinearly on Poisson") {
  const NonlinearProblem p = nonlinear_poisson(8);
  const NewtonResult res = newton_solve(p, make_direct_solver(), {1e-13, 30, 1e12});
  bool seen = false;
  for (std::size_t i = 0; i + 1 < res.record.entries.size(); ++i) {
    const double r0 = res.record.entries[i].residual;
    const double r1 = res.record.entries[i + 1].residual;
    if (r0 < 1.0 && r0 > 1e-8) {
      CHECK(r1 <= std::max(4.0 * r0 * r0, 1e-12));
      seen = true;
    }
  }
  CHECK(seen);
}

TEST_CASE("model QLSS at large m matches the direct solver's path") {
  const NonlinearProblem p = nonlinear_poisson(8);
  QLSSConfig cfg;
  cfg.m = 40;
  cfg.mode = EncodingMode::HermitianPD;
  const NewtonResult direct = newton_solve(p, make_direct_solver(), {1e-30, 5, 1e12});
  const NewtonResult model = newton_solve(p, make_model_qlss_solver(cfg), {1e-30, 5, 1e12});
  double diff = 0, scale = 0;
  for (std::size_t i = 0; i < p.size; ++i) {
    diff = std::max(diff, std::abs(direct.solution[i] - model.solution[i]));
    scale = std::max(scale, std::abs(direct.solution[i]));
  }
  CHECK(diff <= 1e-6 * std::max(scale, 1.0));
}

TEST_CASE("Poisson with a coarse model QLSS still descends") {
  // m = 2 quantizes the spectrum to three usable levels plus the clamp, yet
  // the iteration keeps reducing the residual, just slowly.
  const NonlinearProblem p = nonlinear_poisson(8);
  QLSSConfig cfg;
  cfg.m = 2;
  cfg.mode = EncodingMode::HermitianPD;
  const NewtonResult res = newton_solve(p, make_model_qlss_solver(cfg), {1e-9, 100, 1e12});
  const double r0 = res.record.entries.front().residual;
  CHECK(res.record.final_residual() < 0.1 * r0);
}

TEST_CASE("final residual trend is monotone for m >= 20 (fixed 50 iterations)") {
  const NonlinearProblem p = nonlinear_poisson(8);
  double prev = 1e30;
  for (int m : {20, 24, 28}) {
    QLSSConfig cfg;
    cfg.m = m;
    cfg.mode = EncodingMode::HermitianPD;
    const NewtonResult res = newton_solve(p, make_model_qlss_solver(cfg), {1e-300, 50, 1e12});
    const double r = res.record.final_residual();
    CHECK(r <= std::max(1.1 * prev, 1e-10));  // non-increasing down to the fp floor
    prev = r;
  }
}

TEST_CASE("gate QLSS plugs into Newton") {
  const NonlinearProblem p = nonlinear_poisson(4);
  QLSSConfig cfg;
  cfg.m = 2;
  cfg.mode = EncodingMode::HermitianPD;
  const NewtonResult res = newton_solve(p, make_gate_qlss_solver(cfg), {1e-9, 3, 1e12});
  REQUIRE(res.record.entries.size() >= 2);
  CHECK(res.record.entries.back().residual < res.record.entries.front().residual);
  // the diagnostic column carries the success probability
  CHECK(res.record.entries.front().solver_diagnostic > 0);
}
