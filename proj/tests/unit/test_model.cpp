#include <doctest.h>

#include <cmath>
#include <random>

#include "epdt/error.hpp"
#include "epdt/model.hpp"

using namespace epdt;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an epdt::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("delta and characteristic roots") {
  CHECK(delta(2, 0) == 1.0);
  CHECK(delta(3, 1) == 0.0);
  CHECK(delta(0, 0) == 1.0);

  auto r = characteristic_roots(0, 0);
  CHECK(r.r1 == 0.0);
  CHECK(r.r2 == -1.0);
  r = characteristic_roots(2, 0);
  CHECK(r.r1 == 1.0);
  CHECK(r.r2 == 0.0);
  r = characteristic_roots(3, 1);
  CHECK(r.r1 == 1.0);
  CHECK(r.r2 == 1.0);

  CHECK(code_of([] { characteristic_roots(1.0, 1.0); }) == ErrorCode::NegativeDelta);
}

TEST_CASE("Vieta relations hold on a sampled admissible set") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mu_d(0.0, 10.0), frac(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double mu = mu_d(rng);
    const double nu2 = frac(rng) * (mu - 1.0) * (mu - 1.0) / 4.0;
    const auto r = characteristic_roots(mu, nu2);
    CHECK(r.r1 >= r.r2);
    CHECK(std::fabs(r.r1 + r.r2 + 1.0 - mu) <= 1e-12 * std::max(1.0, mu));
    CHECK(std::fabs(r.r1 * r.r2 - nu2) <= 1e-12 * std::max(1.0, nu2));
  }
}

TEST_CASE("Strauss exponent values") {
  CHECK(strauss_exponent(3, 0).value() == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-15));
  CHECK(strauss_exponent(1, 0).is_infinite());
  CHECK(strauss_exponent(2, 0).value() == doctest::Approx((3.0 + std::sqrt(17.0)) / 2.0).epsilon(1e-15));

  CHECK(strauss_exponent_shifted({0, 2, 0, 1, 1}).value() == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-15));
  CHECK(strauss_exponent_shifted({0, 0, 0, 3, 1}).value() == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-15));
  CHECK(strauss_exponent_shifted({0, 0, 0, 1, 1}).is_infinite());
}

TEST_CASE("Strauss exponent is non-increasing in the effective dimension") {
  for (double ell : {-0.5, 0.0, 0.7, 2.0}) {
    Extended prev = Extended::infinity();
    for (double n = 0.25; n <= 12.0; n += 0.25) {
      const Extended cur = strauss_exponent(n, ell);
      CHECK(cur <= prev);
      prev = cur;
    }
  }
}

TEST_CASE("shifted quadratic residual and shift identity") {
  for (double ell : {-0.6, 0.0, 0.5, 1.0, 3.0}) {
    for (double mu : {0.0, 0.5, 2.0, 5.0}) {
      for (int n = 1; n <= 4; ++n) {
        const ModelParams p{ell, mu, 0.0, n, 1.0};
        const Extended ps = strauss_exponent_shifted(p);
        const Extended pu = strauss_exponent(n + mu / (ell + 1.0), ell);
        REQUIRE(ps.is_finite() == pu.is_finite());
        if (!ps.is_finite()) continue;
        CHECK(std::fabs(ps.value() - pu.value()) <= 1e-12);
        CHECK(std::fabs(shifted_strauss_quadratic(p).residual(ps.value())) <= 1e-12);
      }
    }
  }
}

TEST_CASE("Fujita exponent and blow-up range") {
  CHECK(fujita_exponent(2) == 2.0);
  CHECK(fujita_exponent(1) == 3.0);
  CHECK(fujita_exponent(4) == 1.5);
  CHECK(code_of([] { fujita_exponent(0.0); }) == ErrorCode::NonpositiveDimension);

  CHECK(blowup_range_sup({0, 0, 0, 3, 1}).value() == doctest::Approx(1.0 + std::sqrt(2.0)));
  CHECK(blowup_range_sup({0, 2, 0, 1, 1}).value() == doctest::Approx(3.0));
  CHECK(blowup_range_sup({0, 0, 0, 1, 1}).is_infinite());
  CHECK(code_of([] { blowup_range_sup({0, 1, 1, 1, 1}); }) == ErrorCode::NegativeDelta);
}

TEST_CASE("spectral constants") {
  const auto s = spectral_constants({0, 2, 0, 1, 1});
  CHECK(s.delta == 1.0);
  CHECK(s.gamma == 0.0);
  CHECK(s.c == doctest::Approx(0.5));
  CHECK(s.p_fujita_shifted == doctest::Approx(3.0));

  // gamma and c written out independently for ell = 1, delta = 4.
  const auto t = spectral_constants({1.0, 5.0, 0.0, 1, 1});
  CHECK(t.delta == 16.0);
  CHECK(t.gamma == doctest::Approx(0.5 - 4.0 / 4.0));
  CHECK(t.c == doctest::Approx(std::pow(2.0, -2.0) * std::pow(2.0, 1.0)));
}

TEST_CASE("phi, amplitude and its inverse") {
  for (double ell : {-0.5, 0.0, 1.0, 2.5}) {
    CHECK(phi_ell(1, ell) == doctest::Approx(1.0 / (ell + 1.0)));
    CHECK(amplitude(1, ell) == 0.0);
    for (double t = 1.0; t <= 100.0; t *= 1.07) {
      CHECK(std::fabs(amplitude_inv(amplitude(t, ell), ell) - t) <= 1e-10 * t);
    }
  }
  CHECK(amplitude(3, 0) == doctest::Approx(2.0));
  CHECK(amplitude_inv(2, 0) == doctest::Approx(3.0));
  CHECK(code_of([] { amplitude(0.5, 0.0); }) == ErrorCode::DomainError);
  CHECK(code_of([] { amplitude_inv(-0.1, 0.0); }) == ErrorCode::DomainError);
}

TEST_CASE("delta is invariant under t^theta conjugation") {
  auto r = delta_invariance_check(2, 0, 0);
  CHECK(r.mu == 2.0);
  CHECK(r.nu2 == 0.0);
  CHECK(r.delta == 1.0);
  r = delta_invariance_check(2, 0, 1);
  CHECK(r.mu == 0.0);
  CHECK(r.nu2 == 0.0);
  CHECK(r.delta == 1.0);
  r = delta_invariance_check(0, 0, -0.5);
  CHECK(r.mu == 1.0);
  CHECK(r.nu2 == doctest::Approx(-0.25));
  CHECK(r.delta == doctest::Approx(1.0));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 6.0), th(-4.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    const double mu = u(rng), nu2 = u(rng), theta = th(rng);
    const double d = delta(mu, nu2);
    CHECK(std::fabs(delta_invariance_check(mu, nu2, theta).delta - d) <= 1e-12 * std::max(1.0, std::fabs(d)));
  }
}

TEST_CASE("exponent collapse at the critical power") {
  for (double ell : {-0.5, 0.0, 1.0}) {
    for (double mu : {0.0, 1.5, 3.0}) {
      for (int n = 1; n <= 3; ++n) {
        const ModelParams p{ell, mu, 0.0, n, 1.0};
        const Extended pc = strauss_exponent_shifted(p);
        if (!pc.is_finite()) continue;
        CHECK(critical_exponent_collapse(p, pc.value()) == doctest::Approx(-1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK(code_of([] { ModelParams{-1.0, 0, 0, 1, 1}.validate(); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { ModelParams{0, -0.1, 0, 1, 1}.validate(); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { ModelParams{0, 0, -1, 1, 1}.validate(); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { ModelParams{0, 0, 0, 0, 1}.validate(); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { ModelParams{0, 0, 0, 1, 0}.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("extended reals") {
  const auto inf = Extended::infinity();
  const auto two = Extended::finite(2.0);
  CHECK(two < inf);
  CHECK(max(two, inf) == inf);
  CHECK(inf.to_string() == "+inf");
  CHECK(two.to_string() == "2");
  CHECK(code_of([&] { (void)inf.value(); }) == ErrorCode::DomainError);
}
