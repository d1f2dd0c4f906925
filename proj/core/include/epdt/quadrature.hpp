#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "epdt/error.hpp"

namespace epdt::quad {

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

namespace detail {

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& o) const noexcept { return error < o.error; }
};

// One 15-point Kronrod panel with its embedded 7-point Gauss estimate.
template <class F>
Panel kronrod15(F& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  const auto& xk = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(mid);
  double kr = f0 * wk[0];
  double ga = f0 * wg[0];
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double fp = f(mid + half * xk[i]);
    const double fm = f(mid - half * xk[i]);
    kr += (fp + fm) * wk[i];
    if (i % 2 == 0) ga += (fp + fm) * wg[i / 2];
  }
  return {a, b, kr * half, std::fabs((kr - ga) * half)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) quadrature: the panel with the
// largest error estimate is bisected until the summed estimate drops below
// max(abs_tol, rel_tol * |value|).
template <class F>
Result adaptive(F&& f, double a, double b, const Options& opt = {}) {
  if (a == b) return {};
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::priority_queue<detail::Panel> heap;
  heap.push(detail::kronrod15(f, a, b));
  double value = heap.top().value;
  double error = heap.top().error;
  int count = 1;
  while (error > std::max(opt.abs_tol, opt.rel_tol * std::fabs(value)) && count < opt.max_intervals) {
    const detail::Panel worst = heap.top();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b)) break;
    heap.pop();
    const detail::Panel left = detail::kronrod15(f, worst.a, m);
    const detail::Panel right = detail::kronrod15(f, m, worst.b);
    heap.push(left);
    heap.push(right);
    ++count;
    // Re-summing keeps round-off from accumulating over many updates.
    if (count % 64 == 0) {
      auto copy = heap;
      value = 0.0;
      error = 0.0;
      while (!copy.empty()) {
        value += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    } else {
      value += left.value + right.value - worst.value;
      error += left.error + right.error - worst.error;
    }
  }
  return {sign * value, error, count};
}

// As adaptive(), throwing QuadratureFailure when the tolerance is not met.
template <class F>
double integrate(F&& f, double a, double b, const Options& opt = {}) {
  const Result r = adaptive(f, a, b, opt);
  if (!std::isfinite(r.value))
    fail(ErrorCode::QuadratureFailure, "non-finite integrand value");
  // Round-off floor: estimates below a few ulps of the integrand mass cannot shrink further.
  if (r.error > std::max(opt.abs_tol, opt.rel_tol * std::fabs(r.value)) && r.error > 1e-14 * std::fabs(r.value))
    fail(ErrorCode::QuadratureFailure, "tolerance not reached within the panel budget");
  return r.value;
}

}  // namespace epdt::quad
