#include "epdt/model.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "epdt/error.hpp"

namespace epdt {

double Extended::value() const {
  require(!infinite_, ErrorCode::DomainError, "value() of +inf");
  return value_;
}

double Extended::to_double() const noexcept {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

std::string Extended::to_string() const {
  if (infinite_) return "+inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value_);
  return std::string(buf, res.ptr);
}

Extended max(const Extended& a, const Extended& b) noexcept { return (a < b) ? b : a; }

void ModelParams::validate() const {
  require(ell > -1.0, ErrorCode::InvalidArgument, "ell must exceed -1");
  require(mu >= 0.0, ErrorCode::InvalidArgument, "mu must be nonnegative");
  require(nu2 >= 0.0, ErrorCode::InvalidArgument, "nu2 must be nonnegative");
  require(n >= 1, ErrorCode::InvalidArgument, "n must be a positive integer");
  require(R > 0.0, ErrorCode::InvalidArgument, "R must be positive");
}

void ModelParams::validate_admissible() const {
  validate();
  require(delta(mu, nu2) >= 0.0, ErrorCode::NegativeDelta, "(mu-1)^2 - 4 nu2 < 0");
}

double delta(double mu, double nu2) noexcept { return (mu - 1.0) * (mu - 1.0) - 4.0 * nu2; }

CharacteristicRoots characteristic_roots(double mu, double nu2) {
  const double d = delta(mu, nu2);
  require(d >= 0.0, ErrorCode::NegativeDelta, "(mu-1)^2 - 4 nu2 < 0");
  const double s = std::sqrt(d);
  const double b = mu - 1.0;
  // r1 r2 = nu2; take the larger-magnitude root from the sum to avoid cancellation.
  double r1 = 0.5 * (b + s);
  double r2 = 0.5 * (b - s);
  if (b > 0.0 && r1 != 0.0) {
    r2 = nu2 / r1;
  } else if (b < 0.0 && r2 != 0.0) {
    r1 = nu2 / r2;
  }
  return {r1, r2};
}

namespace {

Extended larger_root(double a2, double a1, double a0) {
  // a2 p^2 - a1 p - a0 = 0 with a0 > 0.
  if (!(a2 > 0.0)) return Extended::infinity();
  const double disc = std::sqrt(a1 * a1 + 4.0 * a2 * a0);
  if (a1 >= 0.0) return Extended::finite((a1 + disc) / (2.0 * a2));
  return Extended::finite(2.0 * a0 / (disc - a1));
}

}  // namespace

Extended strauss_exponent(double n_eff, double ell) {
  const double s = ell / (2.0 * (ell + 1.0));
  const double a2 = 0.5 * (n_eff - 1.0) + s;
  const double a1 = 0.5 * (n_eff + 1.0) - 3.0 * s;
  return larger_root(a2, a1, 1.0);
}

Quadratic shifted_strauss_quadratic(const ModelParams& params) noexcept {
  const double l1 = params.ell + 1.0;
  const double n = params.n;
  return {0.5 * (n - 1.0) * l1 + 0.5 * (params.ell + params.mu),
          0.5 * (n + 1.0) * l1 + 0.5 * (params.mu - 3.0 * params.ell), l1};
}

Extended strauss_exponent_shifted(const ModelParams& params) {
  params.validate();
  const Quadratic q = shifted_strauss_quadratic(params);
  return larger_root(q.a2, q.a1, q.a0);
}

double fujita_exponent(double d) {
  require(d > 0.0, ErrorCode::NonpositiveDimension, "Fujita exponent needs d > 0");
  return 1.0 + 2.0 / d;
}

double fujita_shifted_dimension(const ModelParams& params) {
  const auto roots = characteristic_roots(params.mu, params.nu2);
  return (params.ell + 1.0) * params.n + roots.r2;
}

Extended blowup_range_sup(const ModelParams& params) {
  params.validate_admissible();
  const double d = fujita_shifted_dimension(params);
  const Extended fujita = d > 0.0 ? Extended::finite(fujita_exponent(d)) : Extended::infinity();
  return max(strauss_exponent_shifted(params), fujita);
}

double kernel_gamma(const ModelParams& params) {
  params.validate_admissible();
  return 0.5 - std::sqrt(delta(params.mu, params.nu2)) / (2.0 * (params.ell + 1.0));
}

double kernel_constant(const ModelParams& params) {
  params.validate_admissible();
  const double s = std::sqrt(delta(params.mu, params.nu2)) / (1.0 + params.ell);
  return std::pow(2.0, -s) * std::pow(1.0 + params.ell, -1.0 + s);
}

SpectralConstants spectral_constants(const ModelParams& params) {
  params.validate_admissible();
  const auto roots = characteristic_roots(params.mu, params.nu2);
  const double d = fujita_shifted_dimension(params);
  return {delta(params.mu, params.nu2),
          roots.r1,
          roots.r2,
          kernel_gamma(params),
          kernel_constant(params),
          strauss_exponent_shifted(params),
          d > 0.0 ? fujita_exponent(d) : std::numeric_limits<double>::infinity(),
          blowup_range_sup(params)};
}

double phi_ell(double t, double ell) noexcept { return std::pow(t, ell + 1.0) / (ell + 1.0); }

double amplitude(double t, double ell) {
  require(t >= 1.0, ErrorCode::DomainError, "the light cone starts at t = 1");
  // (t^{l+1} - 1)/(l+1) without cancellation near t = 1.
  return std::expm1((ell + 1.0) * std::log(t)) / (ell + 1.0);
}

double amplitude_inv(double sigma, double ell) {
  require(sigma >= 0.0, ErrorCode::DomainError, "amplitude_inv needs sigma >= 0");
  return std::exp(std::log1p((ell + 1.0) * sigma) / (ell + 1.0));
}

TransformedCoefficients delta_invariance_check(double mu, double nu2, double theta) noexcept {
  const double mu_t = mu - 2.0 * theta;
  const double nu2_t = theta * theta - (mu - 1.0) * theta + nu2;
  return {mu_t, nu2_t, delta(mu_t, nu2_t)};
}

double critical_exponent_collapse(const ModelParams& params, double p) {
  const auto roots = characteristic_roots(params.mu, params.nu2);
  const double l1 = params.ell + 1.0;
  const double lead = 0.5 * (params.n - 1.0) + (params.ell + params.mu) / (2.0 * l1);
  const double lin = (roots.r2 + 2.0) / l1 + 0.5 * (params.n - 1.0) - kernel_gamma(params);
  return -lead * p * p + lin * p;
}

}  // namespace epdt
