#pragma once

#include "epdt/model.hpp"

namespace epdt {

// Observation point (t, x) and source point (b, y) of the 1D kernels.
struct KernelPoint {
  double t = 1.0;
  double x = 0.0;
  double b = 1.0;
  double y = 0.0;
};

// ((phi(t)-phi(b))^2 - (y-x)^2) / ((phi(t)+phi(b))^2 - (y-x)^2).
// Throws OutsideCone when |y-x| exceeds phi(t)-phi(b), DomainError unless 1 <= b <= t.
double z_argument(const KernelPoint& pt, double ell);

// Precomputes the parameter-dependent constants once; the free functions
// below build one of these per call.
class KernelEvaluator {
 public:
  // Throws InvalidArgument or NegativeDelta.
  explicit KernelEvaluator(const ModelParams& params);

  const ModelParams& params() const noexcept { return params_; }
  double gamma() const noexcept { return gamma_; }
  double c() const noexcept { return c_; }

  // Transformed form when gamma < 0, original form otherwise.
  double E(const KernelPoint& pt) const;
  double E_original(const KernelPoint& pt) const;
  double E_transformed(const KernelPoint& pt) const;
  double K1(double t, double x, double y) const;
  double K0(double t, double x, double y) const;

 private:
  ModelParams params_;
  double sqrt_delta_;
  double gamma_;
  double c_;
  double c_transformed_;
};

double kernel_E(const KernelPoint& pt, const ModelParams& params);
double kernel_E_original(const KernelPoint& pt, const ModelParams& params);
double kernel_E_transformed(const KernelPoint& pt, const ModelParams& params);
double kernel_K1(double t, double x, double y, const ModelParams& params);
double kernel_K0(double t, double x, double y, const ModelParams& params);

// dz/db at b = 1: -4 b^l phi(t) (phi(t)^2 - phi(b)^2 - (y-x)^2) / D^2 with
// D = (phi(t)+phi(b))^2 - (y-x)^2.
double dz_db_at_1(double t, double x, double y, double ell);

}  // namespace epdt
