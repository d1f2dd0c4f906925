#pragma once

#include <cstddef>

namespace epdt::special {

struct HypergeometricQuery {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
  double z = 0.0;
  double rel_tol = 1e-13;
  std::size_t max_terms = 1'000'000;
};

// Points with z above this are rejected with NearBoundary.
inline constexpr double kBoundaryGuard = 1e-12;

// Gauss 2F1(a,b;c;z) on z in [0,1). Sums the power series with compensated
// summation; when a+b > c and z > 1/2 it sums the Euler-transformed series
// (1-z)^{c-a-b} 2F1(c-a,c-b;c;z) instead.
// Errors: InvalidC, NearBoundary, DomainError (z outside [0,1)), Nonconvergence.
double gauss_2f1(const HypergeometricQuery& q);
double gauss_2f1(double a, double b, double c, double z);

// Direct power series with no transformation; used as an independent route.
double gauss_2f1_series(const HypergeometricQuery& q);

struct EulerSides {
  double direct;       // 2F1(a,b;c;z)
  double transformed;  // (1-z)^{c-a-b} 2F1(c-a,c-b;c;z)
};

// Both sides of Euler's transformation, each by the direct series.
EulerSides euler_transform_identity_check(double a, double b, double c, double z);

// d/dz 2F1(a,b;c;z) = (ab/c) 2F1(a+1,b+1;c+1;z).
double gauss_2f1_derivative(double a, double b, double c, double z);

}  // namespace epdt::special
