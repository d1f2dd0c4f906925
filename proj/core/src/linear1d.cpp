#include "epdt/linear1d.hpp"

#include <algorithm>
#include <cmath>

#include "epdt/error.hpp"
#include "epdt/kernel.hpp"
#include "epdt/quadrature.hpp"

namespace epdt {

void LinearProblem::validate() const {
  params.validate_admissible();
  require(static_cast<bool>(u0) && static_cast<bool>(u1), ErrorCode::InvalidArgument,
          "linear problem needs both u0 and u1");
  require(t_end > 1.0, ErrorCode::InvalidArgument, "t_end must exceed 1");
}

namespace {

// phi(t) - phi(b) without cancellation for b close to t.
double cone_gap(double t, double b, double ell) {
  const double l1 = ell + 1.0;
  return std::pow(b, l1) * std::expm1(l1 * std::log(t / b)) / l1;
}

template <class Kernel>
double data_term(const ScalarFn& data, Kernel&& kern, double x, double half, double R, double tol) {
  const double lo = std::max(x - half, -R);
  const double hi = std::min(x + half, R);
  if (!(hi > lo)) return 0.0;
  return quad::integrate([&](double y) { return data(y) * kern(y); }, lo, hi, {tol, 0.0, 4000});
}

double representation(const LinearProblem& prob, const KernelEvaluator& kern, double t, double x,
                      const RepresentationOptions& opt) {
  const ModelParams& p = prob.params;
  if (t == 1.0) return prob.u0(x);
  const double A = amplitude(t, p.ell);
  double u = 0.5 * std::pow(t, -0.5 * (p.mu + p.ell)) * (prob.u0(x + A) + prob.u0(x - A));
  u += data_term(prob.u0, [&](double y) { return kern.K0(t, x, y); }, x, A, p.R, opt.abs_tol);
  u += data_term(prob.u1, [&](double y) { return kern.K1(t, x, y); }, x, A, p.R, opt.abs_tol);
  if (prob.g) {
    auto inner = [&](double b) {
      const double w = cone_gap(t, b, p.ell);
      if (!(w > 0.0)) return 0.0;
      return quad::integrate([&](double y) { return prob.g(b, y) * kern.E({t, x, b, y}); }, x - w, x + w,
                             {opt.duhamel_inner_tol, 0.0, 4000});
    };
    u += quad::integrate(inner, 1.0, t, {opt.duhamel_outer_tol, 0.0, 4000});
  }
  return u;
}

}  // namespace

double solve_representation(const LinearProblem& prob, double t, double x, const RepresentationOptions& opt) {
  prob.validate();
  require(t >= 1.0 && t <= prob.t_end, ErrorCode::DomainError, "t must lie in [1, t_end]");
  const KernelEvaluator kern(prob.params);
  return representation(prob, kern, t, x, opt);
}

std::vector<double> solve_representation_grid(const LinearProblem& prob, double t, double x0, double dx,
                                              std::size_t count, const RepresentationOptions& opt) {
  prob.validate();
  require(t >= 1.0 && t <= prob.t_end, ErrorCode::DomainError, "t must lie in [1, t_end]");
  const KernelEvaluator kern(prob.params);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = representation(prob, kern, t, x0 + dx * static_cast<double>(i), opt);
  return out;
}

FdSolution solve_fd_oracle(const LinearProblem& prob, const FdOptions& opt) {
  prob.validate();
  const ModelParams& p = prob.params;
  require(opt.dx > 0.0, ErrorCode::InvalidArgument, "dx must be positive");
  const double dx = opt.dx;
  const double reach = p.R + amplitude(prob.t_end, p.ell);
  const double width = opt.half_width > 0.0 ? opt.half_width : reach + 5.0 * dx;
  require(width >= reach + dx, ErrorCode::DomainTooSmall, "light cone of the data reaches the boundary");

  // t^l is monotone, so its maximum over [1, t_end] sits at an endpoint.
  const double speed = std::max(1.0, std::pow(prob.t_end, p.ell));
  const double dt_cfl = opt.safety * dx / speed;
  double dt = opt.dt > 0.0 ? opt.dt : dt_cfl;
  require(dt <= dt_cfl * (1.0 + 1e-12), ErrorCode::CFLViolation, "dt violates the CFL bound");
  const auto steps = static_cast<std::size_t>(std::ceil((prob.t_end - 1.0) / dt - 1e-9));
  dt = (prob.t_end - 1.0) / static_cast<double>(steps);

  const auto half = static_cast<std::size_t>(std::ceil(width / dx));
  const std::size_t n = 2 * half + 1;
  const double x0 = -dx * static_cast<double>(half);
  std::vector<double> prev(n), cur(n), next(n, 0.0), u1(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = x0 + dx * static_cast<double>(i);
    prev[i] = prob.u0(x);
    u1[i] = prob.u1(x);
  }

  FdSolution sol;
  sol.dt = dt;
  sol.steps = steps;
  auto store = [&](double t, const std::vector<double>& v) {
    sol.times.push_back(t);
    sol.snapshots.push_back(GridFunction{x0, dx, v, -1.0});
  };
  if (opt.snapshot_every > 0) store(1.0, prev);

  const double inv_dx2 = 1.0 / (dx * dx);
  // Taylor seed for u(1 + dt).
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double x = x0 + dx * static_cast<double>(i);
    const double lap = (prev[i - 1] - 2.0 * prev[i] + prev[i + 1]) * inv_dx2;
    const double src = prob.g ? prob.g(1.0, x) : 0.0;
    cur[i] = prev[i] + dt * u1[i] + 0.5 * dt * dt * (lap - p.mu * u1[i] - p.nu2 * prev[i] + src);
  }
  cur.front() = cur.back() = 0.0;

  for (std::size_t k = 1; k < steps; ++k) {
    const double t = 1.0 + dt * static_cast<double>(k);
    if (opt.snapshot_every > 0 && k % static_cast<std::size_t>(opt.snapshot_every) == 0) store(t, cur);
    const double c2 = std::pow(t, 2.0 * p.ell);
    const double damp = 0.5 * p.mu * dt / t;
    const double mass = p.nu2 / (t * t);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double lap = (cur[i - 1] - 2.0 * cur[i] + cur[i + 1]) * inv_dx2;
      const double src = prob.g ? prob.g(t, x0 + dx * static_cast<double>(i)) : 0.0;
      next[i] = (2.0 * cur[i] - (1.0 - damp) * prev[i] + dt * dt * (c2 * lap - mass * cur[i] + src)) / (1.0 + damp);
    }
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  store(prob.t_end, cur);
  return sol;
}

double check_initial_velocity(const LinearProblem& prob, double h, int samples) {
  prob.validate();
  require(prob.t_end >= 1.0 + h, ErrorCode::InvalidArgument, "t_end too close to 1");
  const KernelEvaluator kern(prob.params);
  const RepresentationOptions opt{};
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double x = -prob.params.R + 2.0 * prob.params.R * k / std::max(1, samples - 1);
    const double fd = (representation(prob, kern, 1.0 + h, x, opt) - prob.u0(x)) / h;
    worst = std::max(worst, std::fabs(fd - prob.u1(x)));
  }
  return worst;
}

}  // namespace epdt
