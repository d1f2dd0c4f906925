#include "epdt/kernel.hpp"

#include <cmath>

#include "epdt/error.hpp"
#include "epdt/special.hpp"

namespace epdt {

namespace {

struct ConeGeometry {
  double phi_t;
  double phi_b;
  double d2;   // (y-x)^2
  double num;  // (phi_t - phi_b)^2 - d2
  double den;  // (phi_t + phi_b)^2 - d2
};

ConeGeometry geometry(const KernelPoint& pt, double ell) {
  require(pt.b >= 1.0 && pt.b <= pt.t, ErrorCode::DomainError, "kernel needs 1 <= b <= t");
  const double l1 = ell + 1.0;
  const double phi_t = phi_ell(pt.t, ell);
  const double phi_b = phi_ell(pt.b, ell);
  // phi(t) - phi(b) without cancellation when b is close to t.
  const double gap = std::pow(pt.b, l1) * std::expm1(l1 * std::log(pt.t / pt.b)) / l1;
  const double d = std::fabs(pt.y - pt.x);
  double lo = gap - d;
  if (lo < 0.0) {
    require(lo >= -1e-13 * (phi_t + d), ErrorCode::OutsideCone, "source point outside the light cone");
    lo = 0.0;
  }
  const double num = lo * (gap + d);
  const double den = (phi_t + phi_b - d) * (phi_t + phi_b + d);
  return {phi_t, phi_b, d * d, num, den};
}

}  // namespace

double z_argument(const KernelPoint& pt, double ell) {
  const ConeGeometry g = geometry(pt, ell);
  return g.num / g.den;
}

KernelEvaluator::KernelEvaluator(const ModelParams& params)
    : params_(params),
      sqrt_delta_(0.0),
      gamma_(kernel_gamma(params)),
      c_(kernel_constant(params)),
      c_transformed_(0.0) {
  sqrt_delta_ = std::sqrt(delta(params.mu, params.nu2));
  c_transformed_ = std::pow(2.0 / (params.ell + 1.0), 2.0 * (1.0 - 2.0 * gamma_)) * c_;
}

double KernelEvaluator::E_original(const KernelPoint& pt) const {
  const ConeGeometry g = geometry(pt, params_.ell);
  const double z = g.num / g.den;
  const double mu = params_.mu;
  const double s = sqrt_delta_;
  const double log_scale = (-0.5 * mu + 0.5 * (1.0 - s)) * std::log(pt.t) +
                           (0.5 * mu + 0.5 * (1.0 - s)) * std::log(pt.b) - gamma_ * std::log(g.den);
  return c_ * std::exp(log_scale) * special::gauss_2f1(gamma_, gamma_, 1.0, z);
}

double KernelEvaluator::E_transformed(const KernelPoint& pt) const {
  const ConeGeometry g = geometry(pt, params_.ell);
  const double z = g.num / g.den;
  const double mu = params_.mu;
  const double s = sqrt_delta_;
  const double a = 1.0 - gamma_;
  const double log_scale = (-0.5 * mu + 0.5 * (1.0 + s)) * std::log(pt.t) +
                           (0.5 * mu + 0.5 * (1.0 + s)) * std::log(pt.b) + (gamma_ - 1.0) * std::log(g.den);
  return c_transformed_ * std::exp(log_scale) * special::gauss_2f1(a, a, 1.0, z);
}

double KernelEvaluator::E(const KernelPoint& pt) const {
  return gamma_ < 0.0 ? E_transformed(pt) : E_original(pt);
}

double KernelEvaluator::K1(double t, double x, double y) const { return E({t, x, 1.0, y}); }

double KernelEvaluator::K0(double t, double x, double y) const {
  const KernelPoint pt{t, x, 1.0, y};
  const ConeGeometry g = geometry(pt, params_.ell);
  const double z = g.num / g.den;
  const double mu = params_.mu;
  const double s = sqrt_delta_;
  const double a = 1.0 - gamma_;
  const double dz = dz_db_at_1(t, x, y, params_.ell);
  const double bracket = 0.5 * (mu - 1.0 - s) + 2.0 * a * (g.phi_t + g.phi_b) / g.den;
  const double curly = bracket * special::gauss_2f1(a, a, 1.0, z) -
                       a * a * dz * special::gauss_2f1(a + 1.0, a + 1.0, 2.0, z);
  const double log_scale = (-0.5 * mu + 0.5 * (1.0 + s)) * std::log(t) + (gamma_ - 1.0) * std::log(g.den);
  return c_transformed_ * std::exp(log_scale) * curly;
}

double kernel_E(const KernelPoint& pt, const ModelParams& params) { return KernelEvaluator(params).E(pt); }

double kernel_E_original(const KernelPoint& pt, const ModelParams& params) {
  return KernelEvaluator(params).E_original(pt);
}

double kernel_E_transformed(const KernelPoint& pt, const ModelParams& params) {
  return KernelEvaluator(params).E_transformed(pt);
}

double kernel_K1(double t, double x, double y, const ModelParams& params) {
  return KernelEvaluator(params).K1(t, x, y);
}

double kernel_K0(double t, double x, double y, const ModelParams& params) {
  return KernelEvaluator(params).K0(t, x, y);
}

double dz_db_at_1(double t, double x, double y, double ell) {
  const ConeGeometry g = geometry({t, x, 1.0, y}, ell);
  // phi(t)^2 - phi(1)^2 - (y-x)^2 written as num + 2 phi(1)(phi(t)-phi(1)), both terms >= 0.
  const double gap = g.phi_t - g.phi_b;
  const double bracket = g.num + 2.0 * g.phi_b * gap;
  return -4.0 * g.phi_t * bracket / (g.den * g.den);
}

}  // namespace epdt
