#include "epdt/grid.hpp"

#include <algorithm>
#include <cmath>

#include "epdt/error.hpp"

namespace epdt {

double GridFunction::operator()(double x) const {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  const double s = (x - x0) / dx;
  if (s < 0.0 || s > static_cast<double>(n - 1)) return 0.0;
  if (n < 4) {
    const auto i = std::min(static_cast<std::size_t>(s), n - 2);
    const double w = s - static_cast<double>(i);
    return (1.0 - w) * values[i] + w * values[i + 1];
  }
  // Stencil i-1..i+2 around the cell containing s, shifted inward at the ends.
  auto i = static_cast<std::ptrdiff_t>(std::floor(s)) - 1;
  i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 4);
  const double u = s - static_cast<double>(i);
  const double f0 = values[i], f1 = values[i + 1], f2 = values[i + 2], f3 = values[i + 3];
  return f0 * (u - 1) * (u - 2) * (u - 3) / -6.0 + f1 * u * (u - 2) * (u - 3) / 2.0 +
         f2 * u * (u - 1) * (u - 3) / -2.0 + f3 * u * (u - 1) * (u - 2) / 6.0;
}

void GridFunction::validate() const {
  require(values.size() >= 2, ErrorCode::InvalidArgument, "grid function needs at least two samples");
  require(dx > 0.0, ErrorCode::InvalidArgument, "grid spacing must be positive");
  if (support_radius < 0.0) return;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::fabs(x_at(i)) > support_radius)
      require(std::fabs(values[i]) <= 1e-14, ErrorCode::InvalidArgument,
              "nonzero sample outside the declared support");
  }
}

double GridFunction::integral() const {
  if (values.size() < 2) return 0.0;
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
  return s * dx;
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::fabs(v));
  return m;
}

GridFunction sample(const std::function<double(double)>& f, double x0, double dx, std::size_t count,
                    double support_radius) {
  GridFunction g{x0, dx, std::vector<double>(count), support_radius};
  for (std::size_t i = 0; i < count; ++i) g.values[i] = f(g.x_at(i));
  return g;
}

}  // namespace epdt
