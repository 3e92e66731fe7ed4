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

#ifndef QNEWTON_PDE_HPP
#define QNEWTON_PDE_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qnewton/complex_matrix.hpp"
#include "qnewton/common.hpp"

namespace qnewton {

struct GridInfo {
  int points = 0;            // grid points per dimension (N)
  std::size_t unknowns = 0;  // total unknowns
  double spacing = 0;        // h
  std::string domain;
};

/// A dense linear system with a reference solution from a direct solve.
struct LinearProblem {
  std::string name;
  ComplexMatrix a;
  RVector b;
  RVector reference_solution;
  GridInfo grid;
  double constant = 0;       // problem constant (D, C, ...)
  std::uint64_t seed = 0;

  nlohmann::json to_json() const {
    return {{"problem", name},   {"n", grid.points},      {"unknowns", grid.unknowns},
            {"spacing", grid.spacing}, {"domain", grid.domain}, {"constant", constant},
            {"seed", seed}};
  }
};

/// Residual F, analytic Jacobian J_F, optional target y (F(u) = y; usually 0),
/// and an initial guess. Evaluators are pure and reentrant.
struct NonlinearProblem {
  std::string name;
  std::size_t size = 0;
  std::function<RVector(const RVector&)> residual;
  std::function<ComplexMatrix(const RVector&)> jacobian;
  RVector target;
  RVector initial_guess;
  GridInfo grid;
  double constant = 0;

  nlohmann::json to_json() const {
    return {{"problem", name},   {"n", grid.points},      {"unknowns", grid.unknowns},
            {"spacing", grid.spacing}, {"domain", grid.domain}, {"constant", constant}};
  }
};

/// Steady advection-diffusion v . grad(u) - D lap(u) = f on the periodic
/// square [0, 2pi]^2 with a Taylor-Green velocity field
/// v = (sin x cos y, -cos x sin y) and f = D sin x sin y. Second-order central
/// differences for both terms, N x N grid, x-major row ordering
/// (row = i*N + j with i the x index).
///
/// The periodic operator annihilates constants and the right-hand side is
/// mean-free, so the system is consistent with a one-dimensional null space;
/// the reference solve pins the mean-free solution by deflating the constant
/// direction.
inline LinearProblem advection_diffusion_system(int n, double diffusion = 0.25) {
  if (n < 4) throw ConfigError("advection-diffusion needs N >= 4");
  LinearProblem p;
  p.name = "advdiff";
  p.constant = diffusion;
  const double h = 2.0 * M_PI / n;
  const std::size_t unknowns = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  p.grid = {n, unknowns, h, "[0,2pi]^2 periodic"};
  p.a = ComplexMatrix(unknowns, unknowns);
  p.b.assign(unknowns, 0.0);
  auto idx = [n](int i, int j) {
    return static_cast<std::size_t>(((i % n) + n) % n) * static_cast<std::size_t>(n) +
           static_cast<std::size_t>(((j % n) + n) % n);
  };
  for (int i = 0; i < n; ++i) {
    const double x = i * h;
    for (int j = 0; j < n; ++j) {
      const double y = j * h;
      const std::size_t r = idx(i, j);
      const double vx = std::sin(x) * std::cos(y);
      const double vy = -std::cos(x) * std::sin(y);
      p.a(r, idx(i + 1, j)) += vx / (2 * h);
      p.a(r, idx(i - 1, j)) -= vx / (2 * h);
      p.a(r, idx(i, j + 1)) += vy / (2 * h);
      p.a(r, idx(i, j - 1)) -= vy / (2 * h);
      p.a(r, r) += 4 * diffusion / (h * h);
      for (std::size_t nb : {idx(i + 1, j), idx(i - 1, j), idx(i, j + 1), idx(i, j - 1)})
        p.a(r, nb) -= diffusion / (h * h);
      p.b[r] = diffusion * std::sin(x) * std::sin(y);
    }
  }
  // Deflated direct solve: (A + e e^T / n^2) x = b has the unique mean-free
  // solution of A x = b, since b is orthogonal to the constant left-null
  // vector.
  ComplexMatrix shifted = p.a;
  const double w = 1.0 / static_cast<double>(unknowns);
  for (std::size_t r = 0; r < unknowns; ++r)
    for (std::size_t c = 0; c < unknowns; ++c) shifted(r, c) += w;
  p.reference_solution = lu_solve_real(shifted, p.b);
  return p;
}

/// Nonlinear Poisson problem -lap(u) = C^2 cos(Cx) cos(Cy) + u^2 on the unit
/// square with Dirichlet boundary cos(Cx) cos(Cy). N x N interior unknowns,
/// h = 1/(N+1), five-point Laplacian, boundary values folded into the
/// residual; F(u) = -lap_h(u) - u^2 - C^2 cos cos, J_F = -lap_h - 2 diag(u),
/// initial guess zero.
inline NonlinearProblem nonlinear_poisson(int n, double c = 10.0) {
  if (n < 4) throw ConfigError("nonlinear Poisson needs N >= 4");
  NonlinearProblem p;
  p.name = "poisson";
  p.constant = c;
  const double h = 1.0 / (n + 1);
  const std::size_t unknowns = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  p.size = unknowns;
  p.grid = {n, unknowns, h, "[0,1]^2 Dirichlet"};
  p.target.assign(unknowns, 0.0);
  p.initial_guess.assign(unknowns, 0.0);

  auto fb = [c](double x, double y) { return std::cos(c * x) * std::cos(c * y); };
  auto idx = [n](int i, int j) {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
  };

  p.residual = [n, h, c, fb, idx](const RVector& u) {
    RVector out(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
      const double x = (i + 1) * h;
      for (int j = 0; j < n; ++j) {
        const double y = (j + 1) * h;
        const std::size_t r = idx(i, j);
        double acc = 4.0 * u[r];
        for (auto [ii, jj] : {std::pair{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}}) {
          if (ii >= 0 && ii < n && jj >= 0 && jj < n)
            acc -= u[idx(ii, jj)];
          else
            acc -= fb((ii + 1) * h, (jj + 1) * h);
        }
        out[r] = acc / (h * h) - u[r] * u[r] - c * c * fb(x, y);
      }
    }
    return out;
  };

  p.jacobian = [n, h, idx](const RVector& u) {
    const std::size_t m = static_cast<std::size_t>(n) * n;
    ComplexMatrix jac(m, m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t r = idx(i, j);
        jac(r, r) = 4.0 / (h * h) - 2.0 * u[r];
        for (auto [ii, jj] : {std::pair{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}})
          if (ii >= 0 && ii < n && jj >= 0 && jj < n) jac(r, idx(ii, jj)) = -1.0 / (h * h);
      }
    }
    return jac;
  };
  return p;
}

/// Inviscid Burgers u_t + u u_x = 0 on x in [0,1], t in [0, 0.5], u(x,0) =
/// sin(2 pi x), u(0,t) = u(1,t) = 0, solved as one space-time system:
/// N interior space points (h = 1/(N+1)) times N backward-Euler time levels
/// (dt = 0.5/N, twice as fine as the spatial grid), first-order upwinding with
/// the direction chosen by the sign of the local iterate. Unknowns are ordered
/// in time-major blocks (index = level*N + point); the Jacobian is block
/// bidiagonal in time. The initial guess broadcasts the initial condition to
/// every level.
inline NonlinearProblem burgers_space_time(int n) {
  if (n < 4) throw ConfigError("Burgers needs N >= 4");
  NonlinearProblem p;
  p.name = "burgers";
  const double h = 1.0 / (n + 1);
  const double dt = 0.5 / n;
  const std::size_t unknowns = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  p.size = unknowns;
  p.grid = {n, unknowns, h, "x in [0,1], t in [0,0.5]"};
  p.target.assign(unknowns, 0.0);

  RVector ic(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ic[static_cast<std::size_t>(i)] = std::sin(2.0 * M_PI * (i + 1) * h);
  p.initial_guess.resize(unknowns);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) p.initial_guess[static_cast<std::size_t>(j) * n + i] = ic[static_cast<std::size_t>(i)];

  auto idx = [n](int i, int j) {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
  };

  p.residual = [n, h, dt, ic, idx](const RVector& u) {
    RVector out(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const double uc = u[idx(i, j)];
        const double ul = i > 0 ? u[idx(i - 1, j)] : 0.0;
        const double ur = i < n - 1 ? u[idx(i + 1, j)] : 0.0;
        const double prev = j > 0 ? u[idx(i, j - 1)] : ic[static_cast<std::size_t>(i)];
        const double dudx = uc >= 0 ? (uc - ul) / h : (ur - uc) / h;
        out[idx(i, j)] = (uc - prev) / dt + uc * dudx;
      }
    }
    return out;
  };

  p.jacobian = [n, h, dt, idx](const RVector& u) {
    const std::size_t m = static_cast<std::size_t>(n) * n;
    ComplexMatrix jac(m, m);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const std::size_t r = idx(i, j);
        const double uc = u[r];
        if (uc >= 0) {
          const double ul = i > 0 ? u[idx(i - 1, j)] : 0.0;
          jac(r, r) = 1.0 / dt + (2.0 * uc - ul) / h;
          if (i > 0) jac(r, idx(i - 1, j)) = -uc / h;
        } else {
          const double ur = i < n - 1 ? u[idx(i + 1, j)] : 0.0;
          jac(r, r) = 1.0 / dt + (ur - 2.0 * uc) / h;
          if (i < n - 1) jac(r, idx(i + 1, j)) = uc / h;
        }
        if (j > 0) jac(r, idx(i, j - 1)) = -1.0 / dt;
      }
    }
    return jac;
  };
  return p;
}

/// Random study matrix: off-diagonal entries uniform in [-1, 1], diagonal set
/// to the off-diagonal absolute row sum plus uniform [0, 1] (strict
/// dominance), right-hand side a random unit vector. Deterministic per seed.
/// The QLSS studies solve it through the normal equations, so the effective
/// system matrix A^T A is symmetric positive definite.
inline LinearProblem random_spd_problem(int n, std::uint64_t seed) {
  if (n < 2) throw ConfigError("random problem needs N >= 2");
  LinearProblem p;
  p.name = "random";
  p.seed = seed;
  const std::size_t un = static_cast<std::size_t>(n);
  p.grid = {n, un, 0.0, "random diagonally dominant"};
  p.a = ComplexMatrix(un, un);
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < un; ++i)
    for (std::size_t j = 0; j < un; ++j)
      if (i != j) p.a(i, j) = rng.symmetric();
  for (std::size_t i = 0; i < un; ++i) {
    double row = 0;
    for (std::size_t j = 0; j < un; ++j)
      if (i != j) row += std::abs(p.a(i, j));
    p.a(i, i) = row + rng.uniform();
  }
  p.b.resize(un);
  for (std::size_t i = 0; i < un; ++i) p.b[i] = rng.symmetric();
  const double nb = norm2(p.b);
  for (double& v : p.b) v /= nb;
  p.reference_solution = lu_solve_real(p.a, p.b);
  return p;
}

/// Central finite-difference Jacobian, the oracle the analytic Jacobians are
/// checked against (step 1e-6 * (1 + |u_j|)).
inline ComplexMatrix finite_difference_jacobian(const NonlinearProblem& p, const RVector& u) {
  ComplexMatrix jac(p.size, p.size);
  RVector up = u, um = u;
  for (std::size_t j = 0; j < p.size; ++j) {
    const double eps = 1e-6 * (1.0 + std::abs(u[j]));
    up[j] = u[j] + eps;
    um[j] = u[j] - eps;
    const RVector fp = p.residual(up), fm = p.residual(um);
    for (std::size_t i = 0; i < p.size; ++i) jac(i, j) = (fp[i] - fm[i]) / (2 * eps);
    up[j] = u[j];
    um[j] = u[j];
  }
  return jac;
}

}  // namespace qnewton

#endif
