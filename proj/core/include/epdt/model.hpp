#pragma once

#include <compare>
#include <string>

namespace epdt {

// A real number or +infinity, tagged explicitly so that comparisons between
// critical exponents never depend on how a sentinel float behaves.
class Extended {
 public:
  static constexpr Extended finite(double v) noexcept { return Extended(false, v); }
  static constexpr Extended infinity() noexcept { return Extended(true, 0.0); }

  constexpr bool is_finite() const noexcept { return !infinite_; }
  constexpr bool is_infinite() const noexcept { return infinite_; }

  // Throws DomainError when called on +infinity.
  double value() const;
  // +inf maps to std::numeric_limits<double>::infinity().
  double to_double() const noexcept;
  // "+inf" or the shortest round-tripping decimal.
  std::string to_string() const;

  friend constexpr bool operator==(const Extended& a, const Extended& b) noexcept {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend constexpr std::partial_ordering operator<=>(const Extended& a, const Extended& b) noexcept {
    if (a.infinite_ && b.infinite_) return std::partial_ordering::equivalent;
    if (a.infinite_) return std::partial_ordering::greater;
    if (b.infinite_) return std::partial_ordering::less;
    return a.value_ <=> b.value_;
  }

 private:
  constexpr Extended(bool inf, double v) noexcept : infinite_(inf), value_(v) {}
  bool infinite_;
  double value_;
};

Extended max(const Extended& a, const Extended& b) noexcept;

struct ModelParams {
  double ell = 0.0;  // speed exponent, t^ell
  double mu = 0.0;   // scale-invariant damping
  double nu2 = 0.0;  // scale-invariant mass
  int n = 1;         // space dimension
  double R = 1.0;    // data support radius

  // Throws InvalidArgument on ell <= -1, mu < 0, nu2 < 0, n < 1 or R <= 0.
  void validate() const;
  // validate() plus NegativeDelta when (mu-1)^2 - 4 nu2 < 0.
  void validate_admissible() const;
};

struct CharacteristicRoots {
  double r1;
  double r2;
};

struct SpectralConstants {
  double delta;
  double r1;
  double r2;
  double gamma;
  double c;
  Extended p_strauss_shifted;
  double p_fujita_shifted;  // +inf as a double when the shifted dimension is <= 0
  Extended p_blowup_sup;
};

double delta(double mu, double nu2) noexcept;

// Roots of r^2 - (mu-1) r + nu2 = 0 with r1 >= r2. Throws NegativeDelta.
CharacteristicRoots characteristic_roots(double mu, double nu2);

// Larger root of ((n_eff-1)/2 + l/(2(l+1))) p^2 - ((n_eff+1)/2 - 3l/(2(l+1))) p - 1 = 0;
// +inf when the leading coefficient is not positive.
Extended strauss_exponent(double n_eff, double ell);

// Same exponent with the dimension shifted by mu/(l+1), computed from the
// (l+1)-scaled quadratic directly.
Extended strauss_exponent_shifted(const ModelParams& params);

// Coefficients (a2, a1, a0) of a2 p^2 - a1 p - a0 = 0 for the shifted exponent.
struct Quadratic {
  double a2;
  double a1;
  double a0;
  double residual(double p) const noexcept { return a2 * p * p - a1 * p - a0; }
};
Quadratic shifted_strauss_quadratic(const ModelParams& params) noexcept;

// 1 + 2/d. Throws NonpositiveDimension for d <= 0.
double fujita_exponent(double d);

// Argument (l+1) n + (mu-1-sqrt(delta))/2 of the Fujita branch.
double fujita_shifted_dimension(const ModelParams& params);

// max{shifted Strauss, shifted Fujita}. A nonpositive Fujita dimension counts
// as +inf. Throws NegativeDelta.
Extended blowup_range_sup(const ModelParams& params);

SpectralConstants spectral_constants(const ModelParams& params);

// Kernel exponent gamma = 1/2 - sqrt(delta)/(2(l+1)).
double kernel_gamma(const ModelParams& params);
// Kernel constant c = 2^{-sqrt(delta)/(1+l)} (1+l)^{-1+sqrt(delta)/(1+l)}.
double kernel_constant(const ModelParams& params);

double phi_ell(double t, double ell) noexcept;
// A_l(t) = phi_l(t) - phi_l(1); throws DomainError for t < 1.
double amplitude(double t, double ell);
// Inverse of amplitude: ((l+1) sigma + 1)^{1/(l+1)}; throws DomainError for sigma < 0.
double amplitude_inv(double sigma, double ell);

struct TransformedCoefficients {
  double mu;           // mu - 2 theta
  double nu2;          // theta^2 - (mu-1) theta + nu2  (may be negative)
  double delta;        // discriminant of the transformed pair
};

// Coefficients of the equation solved by t^theta * phi when phi solves the
// linear problem with (mu, nu2).
TransformedCoefficients delta_invariance_check(double mu, double nu2, double theta) noexcept;

// Left side of the exponent collapse used when p is the shifted Strauss
// exponent: -((n-1)/2 + (l+mu)/(2(l+1))) p^2 + ((r2+2)/(l+1) + (n-1)/2 - gamma) p.
// Equals -1 exactly at the critical power.
double critical_exponent_collapse(const ModelParams& params, double p);

}  // namespace epdt
