#include "epdt/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "epdt/error.hpp"

namespace epdt {

namespace {

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

double ratio(const IterationConfig& cfg) { return 4.0 / (1.0 - cfg.theta); }

double phi1(const IterationConfig& cfg) { return phi_ell(1.0, cfg.params.ell); }

// 1 - (1/2 (1 + phi1/den))^power
double beta_form(double den, double power, const IterationConfig& cfg) {
  return -std::expm1(power * std::log(0.5 * (1.0 + phi1(cfg) / den)));
}

double beta_power(double r, const IterationConfig& cfg) {
  return (r + 2.0) / (cfg.params.ell + 1.0) + cfg.params.n - 1;
}

Extended exp_or_inf(double x) {
  if (x > std::log(std::numeric_limits<double>::max())) return Extended::infinity();
  return Extended::finite(std::exp(x));
}

}  // namespace

double IterationConfig::exponent() const {
  if (p != 0.0) return p;
  const Extended ps = strauss_exponent_shifted(params);
  if (ps.is_infinite()) throw Error(ErrorCode::InvalidArgument, "critical exponent is +inf for these parameters");
  return ps.value();
}

void IterationConfig::validate() const {
  params.validate_admissible();
  if (!(theta > 0.5 && theta < 1.0)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (1/2, 1)");
  if (!(a0 >= std::max(2.0, 1.0 / (2.0 * theta - 1.0))))
    throw Error(ErrorCode::InvalidArgument, "a0 must be >= max{2, 1/(2 theta - 1)}");
  if (!(T2 > 2.0)) throw Error(ErrorCode::InvalidArgument, "T2 must exceed 2");
  if (!(alpha0 > 2.0 * (std::pow(T2, params.ell + 1.0) - 1.0)))
    throw Error(ErrorCode::InvalidArgument, "alpha0 must exceed 2(T2^{l+1} - 1)");
  if (!positive(D) || !positive(B0) || !positive(Q) || !positive(M))
    throw Error(ErrorCode::InvalidArgument, "D, B0, Q, M must be positive");
  const double pe = exponent();
  if (!(pe > 1.0) || !std::isfinite(pe)) throw Error(ErrorCode::InvalidArgument, "p must be a finite real > 1");
  const auto [r1, r2] = characteristic_roots(params.mu, params.nu2);
  if (!(beta_power(r2, *this) > 0.0) || !(beta_power(r1, *this) > 0.0))
    throw Error(ErrorCode::InvalidArgument, "(r2+2)/(l+1) + n - 1 must be positive");
}

double a_closed_form(std::size_t j, const IterationConfig& cfg) {
  return (cfg.a0 - 1.0) * std::pow(ratio(cfg), static_cast<double>(j)) + 1.0;
}

double alpha_closed_form(std::size_t j, const IterationConfig& cfg) {
  return (cfg.alpha0 + 2.0) * std::pow(ratio(cfg), static_cast<double>(j)) - 2.0;
}

double log_B_closed_form(std::size_t j, const IterationConfig& cfg) {
  if (j == 0) return std::log(cfg.B0);
  const double p = cfg.exponent();
  const double lp = std::log(p), lD = std::log(cfg.D);
  const double log_E0 = derived_constants(cfg).log_E0;
  const double jj = static_cast<double>(j);
  return std::pow(p, jj) * log_E0 + (jj + 1.0) * lp / (p - 1.0) + lp / ((p - 1.0) * (p - 1.0)) - lD / (p - 1.0);
}

double beta_j(double a, double alpha, const IterationConfig& cfg) {
  const double r2 = characteristic_roots(cfg.params.mu, cfg.params.nu2).r2;
  const double f = phi1(cfg);
  return beta_form(4.0 * a * cfg.params.R + (4.0 * alpha + 3.0) * f, beta_power(r2, cfg), cfg);
}

double beta_tilde_j(double a, double alpha, const IterationConfig& cfg) {
  const double r1 = characteristic_roots(cfg.params.mu, cfg.params.nu2).r1;
  const double f = phi1(cfg);
  return beta_form(8.0 * a * cfg.params.R + (8.0 * alpha + 5.0) * f, beta_power(r1, cfg), cfg);
}

SigmaTerms sigma_terms(double a, double alpha, const IterationConfig& cfg) {
  const double l = cfg.params.ell, R = cfg.params.R, f = phi1(cfg);
  const double w = (a - 1.0) * R + (alpha + 2.0) * f;
  SigmaTerms s{};
  s.terms[0] = amplitude_inv(8.0 * a * R + 4.0 * (2.0 * alpha + 1.0), l);
  s.terms[1] = amplitude_inv(16.0 / ((1.0 - cfg.theta) * (1.0 - cfg.theta)) * w * w, l);
  s.terms[2] = std::pow(2.0, 1.0 / (l + 1.0));
  s.terms[3] = std::pow(2.0 * (l + 1.0), 1.0 / (l + 1.0));
  s.dominant = static_cast<int>(std::max_element(s.terms, s.terms + 4) - s.terms);
  s.value = s.terms[s.dominant];
  return s;
}

double sigma_j(const IterationState& s, const IterationConfig& cfg) { return sigma_terms(s.a, s.alpha, cfg).value; }

IterationState initial_state(const IterationConfig& cfg) {
  IterationState s;
  s.j = 0;
  s.a = cfg.a0;
  s.alpha = cfg.alpha0;
  s.log_B = std::log(cfg.B0);
  s.beta = beta_j(s.a, s.alpha, cfg);
  s.beta_tilde = beta_tilde_j(s.a, s.alpha, cfg);
  s.sigma = sigma_j(s, cfg);
  return s;
}

IterationState sequence_step(const IterationState& s, const IterationConfig& cfg) {
  const double p = cfg.exponent();
  IterationState n;
  n.j = s.j + 1;
  n.a = 1.0 + 4.0 * (s.a - 1.0) / (1.0 - cfg.theta);
  n.alpha = -2.0 + 4.0 * (s.alpha + 2.0) / (1.0 - cfg.theta);
  n.log_B = p * s.log_B - static_cast<double>(n.j) * std::log(p) + std::log(cfg.D);
  n.beta = beta_j(n.a, n.alpha, cfg);
  n.beta_tilde = beta_tilde_j(n.a, n.alpha, cfg);
  n.sigma = sigma_j(n, cfg);
  return n;
}

std::vector<IterationState> sequence_table(const IterationConfig& cfg, std::size_t j_max) {
  std::vector<IterationState> out{initial_state(cfg)};
  while (out.back().j < j_max) out.push_back(sequence_step(out.back(), cfg));
  return out;
}

DerivedConstants derived_constants(const IterationConfig& cfg) {
  const double p = cfg.exponent();
  const double lp = std::log(p), lD = std::log(cfg.D);
  DerivedConstants d{};
  d.log_E0 = std::log(cfg.B0) - p * lp / ((p - 1.0) * (p - 1.0)) + lD / (p - 1.0);
  d.log_E1 = std::log(cfg.Q) + d.log_E0 / p;
  d.E2 = std::exp((p - 1.0) * (1.0 - d.log_E1));
  d.log_N = std::log(cfg.M) + lp / ((p - 1.0) * (p - 1.0)) - lD / (p - 1.0);
  return d;
}

double L_function(double t, double eps, const IterationConfig& cfg) {
  if (!(t > 1.0)) throw Error(ErrorCode::DomainError, "L(t, eps) needs t > 1");
  if (!(eps > 0.0)) throw Error(ErrorCode::DomainError, "L(t, eps) needs eps > 0");
  const double p = cfg.exponent();
  return derived_constants(cfg).log_E1 + p * std::log(eps) + std::log(std::log(t)) / (p - 1.0);
}

double K_j_log(std::size_t j, double t, double eps, const IterationConfig& cfg) {
  const double L = L_function(t, eps, cfg);
  const double p = cfg.exponent();
  const double a = a_closed_form(j, cfg), al = alpha_closed_form(j, cfg);
  const double jj = static_cast<double>(j);
  return std::pow(p, jj + 1.0) * L + derived_constants(cfg).log_N +
         std::log(beta_j(a, al, cfg) * beta_tilde_j(a, al, cfg)) + (jj + 1.0) * std::log(p) / (p - 1.0) -
         std::log(std::log(t)) / (p - 1.0);
}

double K_j_log_product(std::size_t j, double t, double eps, const IterationConfig& cfg) {
  if (!(t > 1.0)) throw Error(ErrorCode::DomainError, "K_j needs t > 1");
  if (!(eps > 0.0)) throw Error(ErrorCode::DomainError, "K_j needs eps > 0");
  const double p = cfg.exponent();
  IterationState s = initial_state(cfg);
  while (s.j < j) s = sequence_step(s, cfg);
  const double pj1 = std::pow(p, static_cast<double>(j) + 1.0);
  return std::log(cfg.M) + std::log(s.beta * s.beta_tilde) + pj1 * std::log(cfg.Q) + s.log_B +
         pj1 * p * std::log(eps) + (pj1 - 1.0) / (p - 1.0) * std::log(std::log(t));
}

Extended T0_of_eps(double eps, const IterationConfig& cfg) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  const double p = cfg.exponent();
  return exp_or_inf(derived_constants(cfg).E2 * std::pow(eps, -p * (p - 1.0)));
}

Extended lifespan_bound(double eps, const IterationConfig& cfg) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  const double p = cfg.exponent();
  const double E = 2.0 * std::exp(derived_constants(cfg).log_E1);
  return exp_or_inf(E * std::pow(eps, -p * (p - 1.0)));
}

double first_lower_bound(double C_tilde, double eps, double t, const IterationConfig& cfg) {
  const double p = cfg.exponent();
  const double l = cfg.params.ell, mu = cfg.params.mu, nm1 = cfg.params.n - 1.0;
  return C_tilde * std::pow(eps, p) * std::pow(t, -(nm1 * (l + 1.0) / 2.0 + (l + mu) / 2.0) * p + nm1 * (l + 1.0));
}

std::optional<std::size_t> find_j0(const IterationConfig& cfg, std::size_t j_max) {
  const auto table = sequence_table(cfg, j_max);
  std::optional<std::size_t> j0;
  for (const auto& s : table) {
    if (sigma_terms(s.a, s.alpha, cfg).dominant == 1) {
      if (!j0) j0 = s.j;
    } else {
      j0.reset();
    }
  }
  return j0;
}

std::optional<std::size_t> find_J(const IterationConfig& cfg, double K0, std::size_t j_max) {
  if (!(K0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "K0 must be positive");
  const auto j0 = find_j0(cfg, j_max + 1);
  if (!j0) return std::nullopt;
  const double p = cfg.exponent();
  const double log_N = derived_constants(cfg).log_N;
  const auto table = sequence_table(cfg, j_max + 1);
  std::optional<std::size_t> J;
  for (std::size_t j = *j0; j <= j_max; ++j) {
    const auto& s = table[j];
    const double jj = static_cast<double>(j);
    // On [sigma_j, sigma_{j+1}] with L >= 1, ln ln t <= ln ln sigma_{j+1}.
    const double lb = std::pow(p, jj + 1.0) + log_N + std::log(s.beta * s.beta_tilde) +
                      (jj + 1.0) * std::log(p) / (p - 1.0) -
                      std::log(std::log(table[j + 1].sigma)) / (p - 1.0);
    if (lb >= std::log(K0)) {
      if (!J) J = j;
    } else {
      J.reset();
    }
  }
  return J;
}

}  // namespace epdt
