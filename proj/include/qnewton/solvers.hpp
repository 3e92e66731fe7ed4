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

#ifndef QNEWTON_SOLVERS_HPP
#define QNEWTON_SOLVERS_HPP

#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qnewton/complex_matrix.hpp"
#include "qnewton/common.hpp"
#include "qnewton/model_qlss.hpp"
#include "qnewton/pde.hpp"
#include "qnewton/qlss.hpp"

namespace qnewton {

/// Forward Gauss-Seidel sweeps; exactly `iterations` of them, deterministic.
/// No convergence guarantee is implied; a diverging iterate is the caller's
/// concern.
inline RVector gauss_seidel(const ComplexMatrix& a, const RVector& b, const RVector& x0,
                            int iterations) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n || x0.size() != n)
    throw DimensionMismatchError("gauss_seidel dimensions");
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(a(i, i)) < 1e-300) throw ZeroDiagonalError("zero diagonal at row " + std::to_string(i));
  RVector x = x0;
  for (int sweep = 0; sweep < iterations; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = b[i];
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) s -= a(i, j).real() * x[j];
      x[i] = s / a(i, i).real();
    }
  }
  return x;
}

enum class StopReason { ThresholdReached, MaxIterations, Diverged };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::ThresholdReached: return "threshold reached";
    case StopReason::MaxIterations: return "max iterations";
    case StopReason::Diverged: return "diverged";
  }
  return "?";
}

struct StopCriteria {
  double residual_threshold = 1e-6;
  int max_iterations = 100;
  double divergence_guard = 1e12;
};

struct IterationEntry {
  int iteration = 0;
  double residual = 0;          // ||F(u_i) - y||_2 before the solve at iterate i
  double solver_diagnostic = 0; // solver-specific (QLSS success probability, GS sweeps, ...)
  double wall_ms = 0;
};

struct ConvergenceRecord {
  std::vector<IterationEntry> entries;
  StopReason stop_reason = StopReason::MaxIterations;
  std::string failure_message;

  /// Number of Newton updates needed to first push the residual below tol,
  /// or -1 if it never happened.
  int iterations_to(double tol) const {
    for (const IterationEntry& e : entries)
      if (e.residual < tol) return e.iteration;
    return -1;
  }
  double final_residual() const { return entries.empty() ? 0.0 : entries.back().residual; }
};

/// A pluggable inner solver for J du = rhs. Fills `diagnostic` with a scalar
/// worth recording per iteration.
using LinearSolverFn =
    std::function<RVector(const ComplexMatrix& jac, const RVector& rhs, double& diagnostic)>;

inline LinearSolverFn make_direct_solver() {
  return [](const ComplexMatrix& jac, const RVector& rhs, double& diag) {
    diag = 0;
    return lu_solve_real(jac, rhs);
  };
}

/// Gauss-Seidel baseline; each Newton step restarts from the zero vector.
inline LinearSolverFn make_gauss_seidel_solver(int sweeps) {
  return [sweeps](const ComplexMatrix& jac, const RVector& rhs, double& diag) {
    diag = sweeps;
    return gauss_seidel(jac, rhs, RVector(rhs.size(), 0.0), sweeps);
  };
}

inline LinearSolverFn make_model_qlss_solver(QLSSConfig cfg) {
  return [cfg](const ComplexMatrix& jac, const RVector& rhs, double& diag) {
    const QLSSResult r = model_qlss_solve(jac, rhs, cfg);
    diag = r.success_probability;
    return r.solution_real();
  };
}

inline LinearSolverFn make_gate_qlss_solver(QLSSConfig cfg) {
  return [cfg](const ComplexMatrix& jac, const RVector& rhs, double& diag) {
    const QLSSResult r = run_qlss(jac, rhs, cfg);
    diag = r.success_probability;
    return r.solution_real();
  };
}

struct NewtonResult {
  RVector solution;
  ConvergenceRecord record;
};

/// Undamped Newton iteration u <- u + J_F(u)^{-1} (y - F(u)) with a pluggable
/// inner linear solver. Residuals are recorded before every solve and once
/// after termination. A failing inner solve is recorded and terminates the
/// run as diverged rather than being retried.
inline NewtonResult newton_solve(const NonlinearProblem& problem, const LinearSolverFn& solver,
                                 const StopCriteria& stop = {}) {
  if (stop.residual_threshold <= 0) throw ConfigError("residual threshold must be positive");
  if (stop.max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  NewtonResult out;
  out.solution = problem.initial_guess;
  const RVector& y = problem.target;

  auto residual_norm = [&](const RVector& u) {
    RVector f = problem.residual(u);
    if (!y.empty())
      for (std::size_t i = 0; i < f.size(); ++i) f[i] -= y[i];
    return norm2(f);
  };

  double r = residual_norm(out.solution);
  for (int it = 0; it < stop.max_iterations; ++it) {
    if (r < stop.residual_threshold) {
      out.record.stop_reason = StopReason::ThresholdReached;
      out.record.entries.push_back({it, r, 0, 0});
      return out;
    }
    if (!std::isfinite(r) || r > stop.divergence_guard) {
      out.record.stop_reason = StopReason::Diverged;
      out.record.entries.push_back({it, r, 0, 0});
      return out;
    }
    const auto t0 = std::chrono::steady_clock::now();
    RVector rhs = problem.residual(out.solution);
    for (std::size_t i = 0; i < rhs.size(); ++i)
      rhs[i] = (y.empty() ? 0.0 : y[i]) - rhs[i];
    double diag = 0;
    RVector du;
    try {
      du = solver(problem.jacobian(out.solution), rhs, diag);
    } catch (const Error& e) {
      out.record.stop_reason = StopReason::Diverged;
      out.record.failure_message =
          std::string("linear solve failed at iteration ") + std::to_string(it) + ": " + e.what();
      out.record.entries.push_back({it, r, diag, 0});
      return out;
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    out.record.entries.push_back({it, r, diag, ms});
    for (std::size_t i = 0; i < out.solution.size(); ++i) out.solution[i] += du[i];
    r = residual_norm(out.solution);
  }
  out.record.stop_reason =
      r < stop.residual_threshold ? StopReason::ThresholdReached : StopReason::MaxIterations;
  out.record.entries.push_back({stop.max_iterations, r, 0, 0});
  return out;
}

}  // namespace qnewton

#endif
