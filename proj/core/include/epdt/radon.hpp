#pragma once

#include <functional>
#include <vector>

#include "epdt/grid.hpp"
#include "epdt/model.hpp"

namespace epdt {

// Radial profile f(|x|) on R^n, sampled on r in [0, r_max].
struct RadialFunction {
  GridFunction samples;
  int n = 3;

  // Throws DimensionTooSmall for n < 2, InvalidArgument when the grid does
  // not start at r = 0 or does not reach the declared support radius,
  // NonfiniteState on non-finite samples.
  void validate() const;
  double r_max() const noexcept { return samples.x_end(); }
  // Where the profile is known to vanish; r_max when no support is declared.
  double support() const noexcept;
};

// |S^{n-2}| = 2 pi^{(n-1)/2} / Gamma((n-1)/2), the constant that makes the radial
// formula agree with the integral over the hyperplane {x . xi = rho}.
double radon_constant(int n);

struct RadonOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-11;
};

// c_n * int_{|rho|}^{support} f(r) (r^2 - rho^2)^{(n-3)/2} r dr, evaluated after r = |rho| + s^2.
double radon_radial(const RadialFunction& f, double rho, const RadonOptions& opt = {});
// Same for an analytic profile vanishing for r >= support.
double radon_radial(const std::function<double(double)>& f, double support, int n, double rho,
                    const RadonOptions& opt = {});

// Radial Laplacian f'' + (n-1) f'/r on the sample grid by centered differences,
// with the even extension across r = 0 and n f''(0) at the origin.
RadialFunction radial_laplacian(const RadialFunction& f);

// max over rho_grid of |R[Laplacian f](rho) - (R[f](rho+h) - 2 R[f](rho) + R[f](rho-h)) / h^2|.
// h = 0 uses the sample spacing, which lets the two difference errors cancel to leading order.
double radon_laplacian_identity_check(const RadialFunction& f, const std::vector<double>& rho_grid,
                                      double h = 0.0);

// T_t(h)(tau) = (M - tau)^{-(n-1)/2} int_tau^M h(r) (r - tau)^{(n-3)/2} dr with M = A(t) + R.
// Throws DegenerateUpperLimit for tau >= M and DimensionTooSmall for n < 2.
double averaging_operator(const GridFunction& h, double t, double tau, const ModelParams& params);

// max over t in t_grid and h in bank of ||T_t h||_p / ||h||_p, both discrete
// trapezoid norms on the native grid of h (tau restricted to tau < M).
// Functions with zero norm are skipped.
double empirical_operator_norm(const ModelParams& params, const std::vector<double>& t_grid,
                               const std::vector<GridFunction>& bank, double p);

}  // namespace epdt
