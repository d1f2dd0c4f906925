#include "epdt/radon.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/constants/constants.hpp>

#include "epdt/error.hpp"
#include "epdt/quadrature.hpp"

namespace epdt {

void RadialFunction::validate() const {
  require(n >= 2, ErrorCode::DimensionTooSmall, "the Radon reduction needs n >= 2");
  samples.validate();
  require(samples.x0 == 0.0, ErrorCode::InvalidArgument, "radial samples must start at r = 0");
  require(samples.support_radius < 0.0 || samples.support_radius <= r_max(), ErrorCode::InvalidArgument,
          "r_max must cover the support radius");
  for (double v : samples.values) require(std::isfinite(v), ErrorCode::NonfiniteState, "non-finite radial sample");
}

double RadialFunction::support() const noexcept {
  return samples.support_radius >= 0.0 ? samples.support_radius : r_max();
}

double radon_constant(int n) {
  require(n >= 2, ErrorCode::DimensionTooSmall, "the Radon reduction needs n >= 2");
  const double h = 0.5 * (n - 1);
  return 2.0 * std::pow(boost::math::constants::pi<double>(), h) / std::tgamma(h);
}

double radon_radial(const std::function<double(double)>& f, double support, int n, double rho,
                    const RadonOptions& opt) {
  const double c = radon_constant(n);
  const double a = std::fabs(rho);
  if (!(support > a)) return 0.0;
  // r = a + s^2: (r^2 - a^2)^{(n-3)/2} r dr = 2 s^{n-2} (2a + s^2)^{(n-3)/2} r ds.
  const double e = 0.5 * (n - 3);
  auto g = [&](double s) {
    const double s2 = s * s;
    const double r = a + s2;
    const double w = (n == 3) ? 1.0 : std::pow(2.0 * a + s2, e);
    return 2.0 * std::pow(s, n - 2) * w * r * f(r);
  };
  const double hi = std::sqrt(support - a);
  return c * quad::integrate(g, 0.0, hi, {opt.abs_tol, opt.rel_tol, 4000});
}

double radon_radial(const RadialFunction& f, double rho, const RadonOptions& opt) {
  f.validate();
  require(std::fabs(rho) <= f.r_max(), ErrorCode::DomainError, "|rho| exceeds r_max");
  return radon_radial([&](double r) { return f.samples(r); }, f.support(), f.n, rho, opt);
}

RadialFunction radial_laplacian(const RadialFunction& f) {
  f.validate();
  const auto& v = f.samples.values;
  const std::size_t m = v.size();
  require(m >= 3, ErrorCode::InvalidArgument, "need at least three radial samples");
  const double dx = f.samples.dx;
  RadialFunction out{GridFunction{0.0, dx, std::vector<double>(m, 0.0), f.samples.support_radius}, f.n};
  auto at = [&](std::ptrdiff_t i) {
    if (i < 0) return v[static_cast<std::size_t>(-i)];
    if (static_cast<std::size_t>(i) >= m) return 0.0;
    return v[static_cast<std::size_t>(i)];
  };
  for (std::size_t i = 0; i < m; ++i) {
    const auto k = static_cast<std::ptrdiff_t>(i);
    const double d2 = (at(k + 1) - 2.0 * at(k) + at(k - 1)) / (dx * dx);
    if (i == 0) {
      out.samples.values[i] = f.n * d2;
    } else {
      const double d1 = (at(k + 1) - at(k - 1)) / (2.0 * dx);
      out.samples.values[i] = d2 + (f.n - 1) * d1 / f.samples.x_at(i);
    }
  }
  // Differences reach one cell past the declared support.
  if (out.samples.support_radius >= 0.0)
    out.samples.support_radius = std::min(out.r_max(), out.samples.support_radius + dx);
  return out;
}

double radon_laplacian_identity_check(const RadialFunction& f, const std::vector<double>& rho_grid, double h) {
  const RadialFunction lap = radial_laplacian(f);
  if (h <= 0.0) h = f.samples.dx;
  double worst = 0.0;
  for (double rho : rho_grid) {
    const double lhs = radon_radial(lap, rho);
    auto Rf = [&](double r) { return std::fabs(r) <= f.r_max() ? radon_radial(f, r) : 0.0; };
    const double rhs = (Rf(rho + h) - 2.0 * Rf(rho) + Rf(rho - h)) / (h * h);
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return worst;
}

double averaging_operator(const GridFunction& h, double t, double tau, const ModelParams& params) {
  params.validate();
  require(params.n >= 2, ErrorCode::DimensionTooSmall, "the averaging operator needs n >= 2");
  const double M = amplitude(t, params.ell) + params.R;
  require(tau < M, ErrorCode::DegenerateUpperLimit, "tau must lie below A(t) + R");
  const int n = params.n;
  // r = tau + s^2 removes the (r - tau)^{-1/2} singularity at n = 2.
  auto g = [&](double s) { return 2.0 * std::pow(s, n - 2) * h(tau + s * s); };
  const double top = std::sqrt(M - tau);
  const double lo = std::max(tau, h.x0), hi = std::min(M, h.x_end());
  if (!(hi > lo)) return 0.0;
  const double s_lo = std::sqrt(lo - tau), s_hi = std::min(top, std::sqrt(hi - tau));
  const double val = quad::integrate(g, s_lo, s_hi, {1e-10, 1e-10, 4000});
  return std::pow(M - tau, -0.5 * (n - 1)) * val;
}

double empirical_operator_norm(const ModelParams& params, const std::vector<double>& t_grid,
                               const std::vector<GridFunction>& bank, double p) {
  require(p >= 1.0, ErrorCode::InvalidArgument, "p must be at least 1");
  auto lp = [p](const std::vector<double>& v, double dx) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double w = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
      s += w * std::pow(std::fabs(v[i]), p);
    }
    return std::pow(s * dx, 1.0 / p);
  };
  double worst = 0.0;
  for (const auto& h : bank) {
    const double hn = lp(h.values, h.dx);
    if (!(hn > 0.0)) continue;
    for (double t : t_grid) {
      const double M = amplitude(t, params.ell) + params.R;
      std::vector<double> th;
      for (std::size_t i = 0; i < h.size() && h.x_at(i) < M; ++i) th.push_back(averaging_operator(h, t, h.x_at(i), params));
      worst = std::max(worst, lp(th, h.dx) / hn);
    }
  }
  return worst;
}

}  // namespace epdt
