#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "epdt/model.hpp"

namespace epdt {

// Constants of the iteration argument. D, B0, Q and M are implicit in the
// analysis and enter only as positive inputs; E0, E1, E2 and N are derived
// from them (see derived_constants).
struct IterationConfig {
  ModelParams params;
  double p = 0.0;  // 0 selects strauss_exponent_shifted(params)
  double theta = 0.75;
  double a0 = 2.0;
  double alpha0 = 4.0;
  double T2 = 2.5;
  double D = 1.0;
  double B0 = 1.0;
  double Q = 1.0;
  double M = 1.0;

  // p, resolved. Throws InvalidArgument when the critical exponent is +inf.
  double exponent() const;

  // Throws InvalidArgument (theta, a0, alpha0, constants, p <= 1, or a
  // nonpositive power in beta_j / beta~_j) and NegativeDelta.
  void validate() const;
};

struct IterationState {
  std::size_t j = 0;
  double a = 0.0;
  double alpha = 0.0;
  double log_B = 0.0;
  double beta = 0.0;
  double beta_tilde = 0.0;
  double sigma = 0.0;
};

IterationState initial_state(const IterationConfig& cfg);

// a_{j+1} = 1 + 4(a_j-1)/(1-theta), alpha_{j+1} = -2 + 4(alpha_j+2)/(1-theta),
// ln B_{j+1} = p ln B_j - (j+1) ln p + ln D.
IterationState sequence_step(const IterationState& s, const IterationConfig& cfg);

std::vector<IterationState> sequence_table(const IterationConfig& cfg, std::size_t j_max);

double a_closed_form(std::size_t j, const IterationConfig& cfg);
double alpha_closed_form(std::size_t j, const IterationConfig& cfg);
double log_B_closed_form(std::size_t j, const IterationConfig& cfg);

double beta_j(double a, double alpha, const IterationConfig& cfg);
double beta_tilde_j(double a, double alpha, const IterationConfig& cfg);

struct SigmaTerms {
  double terms[4];
  double value;
  int dominant;  // index of the largest term
};

// The four lower limits whose maximum is sigma_j, in displayed order. The
// first term is A^{-1}(8 a R + 4(2 alpha + 1)) as displayed, without phi(1).
SigmaTerms sigma_terms(double a, double alpha, const IterationConfig& cfg);
double sigma_j(const IterationState& s, const IterationConfig& cfg);

struct DerivedConstants {
  double log_E0;  // ln B0 - p ln p/(p-1)^2 + ln D/(p-1)
  double log_E1;  // ln Q + ln E0 / p
  double E2;      // (e/E1)^{p-1}
  double log_N;   // ln M + ln p/(p-1)^2 - ln D/(p-1)
};

DerivedConstants derived_constants(const IterationConfig& cfg);

// L(t, eps) = ln(E1 eps^p (ln t)^{1/(p-1)}). DomainError for t <= 1 or eps <= 0.
double L_function(double t, double eps, const IterationConfig& cfg);

// ln K_j(t, eps) through the exponential rewriting with L.
double K_j_log(std::size_t j, double t, double eps, const IterationConfig& cfg);
// ln K_j(t, eps) straight from M beta beta~ Q^{p^{j+1}} B_j eps^{p^{j+2}} (ln t)^{(p^{j+1}-1)/(p-1)},
// with ln B_j from the recursion.
double K_j_log_product(std::size_t j, double t, double eps, const IterationConfig& cfg);

// T0(eps) = exp(E2 eps^{-p(p-1)}); +inf on overflow.
Extended T0_of_eps(double eps, const IterationConfig& cfg);

// exp(E eps^{-p(p-1)}) with E = 2 E1; +inf on overflow. InvalidArgument for eps <= 0.
Extended lifespan_bound(double eps, const IterationConfig& cfg);

// C~ eps^p t^{-((n-1)(l+1)/2 + (l+mu)/2) p + (n-1)(l+1)}.
double first_lower_bound(double C_tilde, double eps, double t, const IterationConfig& cfg);

// Smallest j <= j_max from which the second sigma term dominates up to j_max.
std::optional<std::size_t> find_j0(const IterationConfig& cfg, std::size_t j_max);

// Smallest j >= j0 from which the lower bound of ln K_j over [sigma_j, sigma_{j+1}]
// with t >= T0 stays >= ln K0 up to j_max. Relative to the configured constants.
std::optional<std::size_t> find_J(const IterationConfig& cfg, double K0, std::size_t j_max);

}  // namespace epdt
