#include "epdt/special.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "epdt/error.hpp"

namespace epdt::special {

namespace {

bool is_nonpositive_integer(double c) { return c <= 0.0 && std::floor(c) == c; }

void validate(const HypergeometricQuery& q) {
  require(!is_nonpositive_integer(q.c), ErrorCode::InvalidC,
          "c = " + std::to_string(q.c) + " is a nonpositive integer");
  require(q.z >= 0.0 && q.z < 1.0, ErrorCode::DomainError, "z must lie in [0, 1)");
  require(q.z <= 1.0 - kBoundaryGuard, ErrorCode::NearBoundary, "z too close to 1");
  require(q.rel_tol > 0.0, ErrorCode::InvalidArgument, "rel_tol must be positive");
}

// Kahan-compensated partial sums of sum_k (a)_k (b)_k / ((c)_k k!) z^k.
// Stops once the geometric tail bound term * q/(1-q) falls below rel_tol * |sum|,
// where q bounds the remaining term ratios.
double series(double a, double b, double c, double z, double rel_tol, std::size_t max_terms) {
  if (z == 0.0) return 1.0;
  double sum = 1.0;
  double comp = 0.0;
  double term = 1.0;
  for (std::size_t k = 0; k < max_terms; ++k) {
    const double kd = static_cast<double>(k);
    const double ratio = (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0)) * z;
    term *= ratio;
    if (term == 0.0) return sum;  // terminating series
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    // Past the point where (a+k)(b+k)/((c+k)(k+1)) settles, |ratio| is
    // monotone toward z, so max(|ratio|, z) bounds every later ratio.
    if (kd + 1.0 > std::max({std::fabs(a), std::fabs(b), std::fabs(c)})) {
      const double nxt = std::fabs((a + kd + 1.0) * (b + kd + 1.0) /
                                   ((c + kd + 1.0) * (kd + 2.0)) * z);
      const double qb = std::max(nxt, z);
      if (qb < 1.0) {
        const double tail = std::fabs(term) * qb / (1.0 - qb);
        if (tail <= rel_tol * std::fabs(sum)) return sum;
      }
    }
    if (!std::isfinite(sum)) break;
  }
  fail(ErrorCode::Nonconvergence, "2F1 series did not reach tolerance within the term cap");
}

}  // namespace

double gauss_2f1_series(const HypergeometricQuery& q) {
  validate(q);
  return series(q.a, q.b, q.c, q.z, q.rel_tol, q.max_terms);
}

double gauss_2f1(const HypergeometricQuery& q) {
  validate(q);
  const double excess = q.a + q.b - q.c;
  if (excess > 0.0 && q.z > 0.5) {
    const double s = series(q.c - q.a, q.c - q.b, q.c, q.z, q.rel_tol, q.max_terms);
    return std::pow(1.0 - q.z, -excess) * s;
  }
  return series(q.a, q.b, q.c, q.z, q.rel_tol, q.max_terms);
}

double gauss_2f1(double a, double b, double c, double z) {
  return gauss_2f1(HypergeometricQuery{a, b, c, z});
}

EulerSides euler_transform_identity_check(double a, double b, double c, double z) {
  const double lhs = gauss_2f1_series({a, b, c, z});
  const double rhs = std::pow(1.0 - z, c - a - b) * gauss_2f1_series({c - a, c - b, c, z});
  return {lhs, rhs};
}

double gauss_2f1_derivative(double a, double b, double c, double z) {
  if (a == 0.0 || b == 0.0) {
    validate({a, b, c, z});
    return 0.0;
  }
  return a * b / c * gauss_2f1(a + 1.0, b + 1.0, c + 1.0, z);
}

}  // namespace epdt::special
