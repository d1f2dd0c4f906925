#pragma once

#include <functional>
#include <vector>

#include "epdt/grid.hpp"
#include "epdt/model.hpp"

namespace epdt {

using ScalarFn = std::function<double(double)>;
using SourceFn = std::function<double(double, double)>;

// Cauchy problem for u_tt - t^{2l} u_xx + mu t^{-1} u_t + nu2 t^{-2} u = g on t > 1,
// with u(1) = u0 and u_t(1) = u1 supported in [-R, R]. params.n is ignored.
struct LinearProblem {
  ModelParams params;
  ScalarFn u0;
  ScalarFn u1;
  SourceFn g;  // empty means g = 0
  double t_end = 3.0;

  // Throws InvalidArgument / NegativeDelta; fails when u0 or u1 is missing.
  void validate() const;
};

struct RepresentationOptions {
  double abs_tol = 1e-10;        // per data integral
  double duhamel_inner_tol = 1e-10;
  double duhamel_outer_tol = 1e-9;
};

// Exact solution through the kernel representation, each integral evaluated
// by adaptive Gauss-Kronrod quadrature. Throws DomainError for t outside
// [1, t_end], QuadratureFailure, NegativeDelta.
double solve_representation(const LinearProblem& prob, double t, double x,
                            const RepresentationOptions& opt = {});

// Representation evaluated on every point of a grid (x0 + i dx, i < count).
std::vector<double> solve_representation_grid(const LinearProblem& prob, double t, double x0, double dx,
                                              std::size_t count, const RepresentationOptions& opt = {});

struct FdOptions {
  double dx = 1.0 / 400.0;
  double dt = 0.0;           // 0 selects safety * dx / max t^l
  double safety = 0.5;
  double half_width = 0.0;   // 0 selects R + A(t_end) + 5 dx
  int snapshot_every = 0;    // steps between stored snapshots; 0 stores only the final state
};

struct FdSolution {
  std::vector<double> times;
  std::vector<GridFunction> snapshots;
  double dt = 0.0;
  std::size_t steps = 0;
};

// Centered second differences in x, leapfrog in t, Taylor-seeded first step.
// Throws CFLViolation when dt exceeds safety * dx / max_{[1,t_end]} t^l and
// DomainTooSmall when the light cone of the data reaches the boundary.
FdSolution solve_fd_oracle(const LinearProblem& prob, const FdOptions& opt = {});

// Max over a sample grid of |(u(1+h,x) - u(1,x))/h - u1(x)| with h = 1e-4.
double check_initial_velocity(const LinearProblem& prob, double h = 1e-4, int samples = 41);

}  // namespace epdt
