#include <doctest.h>

#include <cmath>
#include <vector>

#include "epdt/error.hpp"
#include "epdt/linear1d.hpp"
#include "epdt/quadrature.hpp"

using namespace epdt;

namespace {

double bump(double x, int k) { return std::fabs(x) < 1.0 ? std::pow(1.0 - x * x, k) : 0.0; }

LinearProblem make_problem(ModelParams p, double a0, double a1) {
  p.n = 1;
  p.R = 1.0;
  return {p, [a0](double x) { return a0 * bump(x, 6); }, [a1](double x) { return a1 * bump(x - 0.1, 5); }, {}, 3.0};
}

// Closed-form d'Alembert solution for (l, mu, nu2) = (0, 0, 0); the u1 primitive comes from
// a high-accuracy quadrature that shares no code path with the kernel integrals.
double dalembert(const LinearProblem& prob, double t, double x) {
  const double s = t - 1.0;
  const double lo = std::max(x - s, -1.0), hi = std::min(x + s, 1.0);
  double v = 0.5 * (prob.u0(x + s) + prob.u0(x - s));
  if (hi > lo) v += 0.5 * quad::integrate(prob.u1, lo, hi, {1e-14, 0.0, 4000});
  return v;
}

}  // namespace

TEST_CASE("grid function interpolation and validation") {
  const auto g = sample([](double x) { return x * x * x - 2 * x; }, -1.0, 0.25, 9, -1.0);
  CHECK(g(0.1) == doctest::Approx(0.001 - 0.2).epsilon(1e-13));
  CHECK(g(-0.95) == doctest::Approx(std::pow(-0.95, 3) + 1.9).epsilon(1e-13));
  CHECK(g(1.5) == 0.0);
  GridFunction bad{0.0, 1.0, {1.0}, -1.0};
  CHECK_THROWS_AS(bad.validate(), Error);
  const auto s = sample([](double x) { return bump(x, 3); }, -2.0, 0.125, 33, 1.0);
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("representation at t = 1 returns u0") {
  const auto prob = make_problem({0.5, 1.5, 0.0625, 1, 1}, 1.0, 1.0);
  for (double x : {-0.7, 0.0, 0.3}) CHECK(solve_representation(prob, 1.0, x) == prob.u0(x));
}

TEST_CASE("d'Alembert case") {
  const auto prob = make_problem({0, 0, 0, 1, 1}, 1.0, 0.8);
  for (double t : {1.3, 2.0, 3.0}) {
    for (double x = -3.0; x <= 3.0; x += 0.37) {
      CHECK(std::fabs(solve_representation(prob, t, x) - dalembert(prob, t, x)) <= 1e-9);
    }
  }
}

TEST_CASE("finite speed of propagation") {
  const auto prob = make_problem({1, 0, 0, 1, 1}, 1.0, 1.0);
  const double t = 2.2;
  const double edge = 1.0 + amplitude(t, 1.0);
  for (double x : {edge + 1e-6, edge + 0.5, -edge - 0.01}) CHECK(std::fabs(solve_representation(prob, t, x)) <= 1e-9);
}

TEST_CASE("linearity in the data") {
  const ModelParams p{-0.5, 1, 0, 1, 1};
  const auto one = make_problem(p, 1.0, 0.5);
  const auto three = make_problem(p, 3.0, 1.5);
  for (double x : {-1.2, 0.0, 0.9}) {
    CHECK(std::fabs(solve_representation(three, 2.5, x) - 3.0 * solve_representation(one, 2.5, x)) <= 3e-9);
  }
}

TEST_CASE("positivity under the sign conditions") {
  // mu < 1 needs u1 + (mu-1-sqrt(delta))/2 u0 >= 0; choose u1 = u0 with coefficient -1.
  for (const ModelParams& p : {ModelParams{0, 0, 0, 1, 1}, ModelParams{0, 0.5, 0, 1, 1},
                               ModelParams{1, 0.3, 0.01, 1, 1}, ModelParams{0, 3, 1, 1, 1}}) {
    const double shift = -(p.mu - 1 - std::sqrt(delta(p.mu, p.nu2))) / 2;
    LinearProblem prob{p, [](double x) { return bump(x, 6); },
                       [shift](double x) { return (shift + 0.1) * bump(x, 6); }, {}, 3.0};
    for (double t : {1.5, 3.0}) {
      for (double x = -4.0; x <= 4.0; x += 0.25) CHECK(solve_representation(prob, t, x) >= -1e-9);
    }
  }
}

TEST_CASE("initial velocity is recovered") {
  const auto prob = make_problem({0, 0, 0, 1, 1}, 0.0, 0.0);
  CHECK(check_initial_velocity(prob) == 0.0);
  for (const ModelParams& p : {ModelParams{0, 0, 0, 1, 1}, ModelParams{0, 2, 0, 1, 1}, ModelParams{1, 0, 0, 1, 1}}) {
    const auto q = make_problem(p, 1.0, 1.0);
    CHECK(check_initial_velocity(q) <= 1e-2 * (1.0 + 1.0));
  }
}

TEST_CASE("Duhamel term against the finite-difference oracle") {
  LinearProblem prob{{0, 2, 0, 1, 1}, [](double) { return 0.0; }, [](double) { return 0.0; },
                     [](double t, double x) { return std::exp(-t) * bump(x, 6); }, 2.0};
  FdOptions fo;
  fo.dx = 1.0 / 200.0;
  const auto fd = solve_fd_oracle(prob, fo);
  const auto& snap = fd.snapshots.back();
  for (double x : {-1.5, -0.4, 0.0, 0.8}) {
    CHECK(std::fabs(solve_representation(prob, 2.0, x) - snap(x)) <= 1e-4);
  }
}

TEST_CASE("finite-difference oracle") {
  SUBCASE("zero data stays zero") {
    const auto prob = make_problem({0, 2, 0, 1, 1}, 0.0, 0.0);
    FdOptions fo;
    fo.dx = 0.05;
    for (double v : solve_fd_oracle(prob, fo).snapshots.back().values) CHECK(v == 0.0);
  }
  SUBCASE("CFL and domain guards") {
    const auto prob = make_problem({1, 0, 0, 1, 1}, 1.0, 1.0);
    FdOptions fo;
    fo.dx = 0.05;
    fo.dt = 0.05;
    CHECK_THROWS_AS(solve_fd_oracle(prob, fo), Error);
    fo.dt = 0.0;
    fo.half_width = 2.0;
    try {
      solve_fd_oracle(prob, fo);
      FAIL("expected DomainTooSmall");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DomainTooSmall);
    }
  }
  SUBCASE("second-order convergence in the d'Alembert case") {
    const auto prob = make_problem({0, 0, 0, 1, 1}, 1.0, 0.8);
    std::vector<double> errs;
    for (double dx : {1.0 / 50, 1.0 / 100, 1.0 / 200}) {
      FdOptions fo;
      fo.dx = dx;
      const auto snap = solve_fd_oracle(prob, fo).snapshots.back();
      double e = 0.0;
      for (std::size_t i = 0; i < snap.size(); ++i) e = std::max(e, std::fabs(snap.values[i] - dalembert(prob, 3.0, snap.x_at(i))));
      errs.push_back(e);
    }
    CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.25));
    CHECK(errs[1] / errs[2] == doctest::Approx(4.0).epsilon(0.25));
  }
}
