#pragma once

#include <functional>
#include <vector>

namespace epdt {

// Samples of a real function on the uniform grid x0 + i*dx.
struct GridFunction {
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<double> values;
  double support_radius = -1.0;  // negative when no support metadata is attached

  std::size_t size() const noexcept { return values.size(); }
  double x_at(std::size_t i) const noexcept { return x0 + dx * static_cast<double>(i); }
  double x_end() const noexcept { return x_at(values.size() - 1); }

  // Four-point cubic Lagrange interpolation; zero outside [x0, x_end].
  double operator()(double x) const;

  // Throws InvalidArgument on fewer than two samples or dx <= 0, and when
  // samples outside the declared support are not zero.
  void validate() const;

  // Trapezoid rule over the grid.
  double integral() const;
  double sup_norm() const;
};

GridFunction sample(const std::function<double(double)>& f, double x0, double dx, std::size_t count,
                    double support_radius = -1.0);

}  // namespace epdt
