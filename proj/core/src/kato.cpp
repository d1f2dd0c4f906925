#include "epdt/kato.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <thread>

#include <boost/numeric/odeint.hpp>

#include "epdt/error.hpp"

namespace epdt {

namespace odeint = boost::numeric::odeint;

void KatoProblem::validate() const {
  require(mu >= 0.0 && nu2 >= 0.0, ErrorCode::InvalidArgument, "mu and nu2 must be nonnegative");
  require(delta(mu, nu2) >= 0.0, ErrorCode::NegativeDelta, "(mu-1)^2 - 4 nu2 < 0");
  require(p > 1.0, ErrorCode::InvalidArgument, "p must exceed 1");
  require(q >= 0.0, ErrorCode::InvalidArgument, "q must be nonnegative");
  require(B > 0.0 && K > 0.0, ErrorCode::InvalidArgument, "B and K must be positive");
  require(T0 >= 1.0, ErrorCode::InvalidArgument, "T0 must be at least 1");
  require(G1 >= 0.0 && G1p >= 0.0, ErrorCode::InvalidArgument, "G(1) and G'(1) must be nonnegative");
  require(std::isfinite(G1) && std::isfinite(G1p), ErrorCode::NonfiniteState, "non-finite initial data");
  require(beta > 0.0 && beta < 0.5 * (p - 1.0), ErrorCode::InvalidArgument, "beta must lie in (0, (p-1)/2)");
  require(std::fabs(a * (p - 1.0) - (q - 2.0)) <= 1e-12 * std::max(1.0, std::fabs(q - 2.0)),
          ErrorCode::InvalidCriticalCondition, "a(p-1) must equal q-2");
  const auto roots = characteristic_roots(mu, nu2);
  require(a + roots.r1 >= -1e-14, ErrorCode::InvalidCriticalCondition, "a + r1 must be nonnegative");
  const double den = G1p + roots.r1 * G1;
  require(den != 0.0, ErrorCode::ZeroDenominator, "G'(1) + r1 G(1) vanishes");
  require(den > 0.0, ErrorCode::InvalidArgument, "G'(1) + r1 G(1) must be positive");
}

double default_beta(double p) noexcept { return 0.25 * (p - 1.0); }

KatoThresholds kato_thresholds(const KatoProblem& prob) {
  prob.validate();
  const auto [r1, r2] = characteristic_roots(prob.mu, prob.nu2);
  const double den = prob.G1p + r1 * prob.G1;
  const double gap = r1 - r2;
  const double T0_tilde =
      gap != 0.0 ? std::exp(std::log1p(gap * prob.G1 / den) / gap) : std::exp(prob.G1 / den);
  const double lead = std::pow((prob.p + 1.0) / prob.B, 1.0 / (prob.p - 1.0));
  const double s = prob.a + r1;
  double K0;
  if (s > 1e-14) {
    const double one_minus = -std::expm1(-prob.beta * s * std::log(2.0));
    K0 = lead * std::pow(s / one_minus, 2.0 / (prob.p - 1.0));
  } else {
    K0 = lead * std::pow(prob.beta * std::log(2.0), -2.0 / (prob.p - 1.0));
  }
  return {T0_tilde, K0, std::max(prob.T0, T0_tilde)};
}

double kato_G_lin(double mu, double nu2, double G1, double G1p, double t) {
  const auto [r1, r2] = characteristic_roots(mu, nu2);
  if (r1 != r2) {
    const double a = std::pow(t, -r2), b = std::pow(t, -r1);
    return (r1 * a - r2 * b) / (r1 - r2) * G1 + (a - b) / (r1 - r2) * G1p;
  }
  const double lt = std::log(t);
  return std::pow(t, -r1) * ((1.0 + r1 * lt) * G1 + lt * G1p);
}

namespace {

using State = std::array<double, 2>;

struct KatoRhs {
  double mu, nu2, p, q, B;
  double accel(double t, double G, double dG) const {
    return -mu * dG / t - nu2 * G / (t * t) + B * std::pow(t, -q) * std::pow(std::fabs(G), p);
  }
  void operator()(const State& x, State& dxdt, double t) const {
    dxdt[0] = x[1];
    dxdt[1] = accel(t, x[0], x[1]);
  }
};

bool finite(const State& x) { return std::isfinite(x[0]) && std::isfinite(x[1]); }

}  // namespace

KatoRun kato_simulate(const KatoProblem& prob, const KatoSimOptions& opt) {
  prob.validate();
  require(opt.t_max > 1.0, ErrorCode::InvalidArgument, "t_max must exceed 1");
  require(opt.blowup_threshold > 0.0, ErrorCode::InvalidArgument, "threshold must be positive");
  const KatoRhs rhs{prob.mu, prob.nu2, prob.p, prob.q, prob.B};
  auto sample_of = [&](double t, const State& x) { return KatoSample{t, x[0], x[1], rhs.accel(t, x[0], x[1])}; };

  auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_dopri5<State>());
  odeint::runge_kutta_dopri5<State> single;

  KatoRun run;
  State x{prob.G1, prob.G1p};
  double t = 1.0;
  double dt = 1e-3;
  run.steps.push_back(sample_of(t, x));
  if (opt.sample_dt > 0.0) run.samples.push_back(sample_of(t, x));
  std::size_t next_sample = 1;

  if (std::fabs(x[0]) >= opt.blowup_threshold) {
    run.blowup_time = Extended::finite(1.0);
    return run;
  }

  while (t < opt.t_max) {
    double target = opt.t_max;
    if (opt.sample_dt > 0.0) target = std::min(target, 1.0 + opt.sample_dt * static_cast<double>(next_sample));
    double h = std::min(dt, target - t);
    const State x_prev = x;
    const double t_prev = t;
    double t_try = t;
    State x_try = x;
    const auto res = stepper.try_step(rhs, x_try, t_try, h);
    if (res == odeint::fail || !finite(x_try)) {
      if (res != odeint::fail) h = 0.5 * (t_try - t_prev);
      dt = h;
      if (dt < opt.min_step * std::max(1.0, t)) {
        run.step_underflow = true;
        run.blowup_time = Extended::finite(t);
        return run;
      }
      continue;
    }
    // Keep the controller's proposal unless the step was clipped to an output time.
    if (t_try - t_prev < dt) dt = std::max(dt, h);
    else dt = h;
    x = x_try;
    t = (t_try >= target - 1e-14 * target) ? target : t_try;

    if (std::fabs(x[0]) >= opt.blowup_threshold) {
      double lo = 0.0, hi = t - t_prev;
      while (hi - lo > opt.refine_rel * t_prev) {
        const double mid = 0.5 * (lo + hi);
        State probe = x_prev;
        single.do_step(rhs, probe, t_prev, mid);
        if (finite(probe) && std::fabs(probe[0]) < opt.blowup_threshold) lo = mid;
        else hi = mid;
      }
      run.blowup_time = Extended::finite(t_prev + hi);
      run.steps.push_back(sample_of(t, x));
      return run;
    }
    run.steps.push_back(sample_of(t, x));
    if (opt.sample_dt > 0.0 && t == target && target < opt.t_max + 1e-12) {
      run.samples.push_back(sample_of(t, x));
      ++next_sample;
    }
  }
  return run;
}

std::string to_string(KatoVerdict v) {
  switch (v) {
    case KatoVerdict::Checked: return "checked";
    case KatoVerdict::Inapplicable: return "inapplicable";
    case KatoVerdict::OutsideHypothesis: return "outside_hypothesis";
  }
  return "unknown";
}

KatoReport kato_lemma_check(const KatoProblem& prob, const KatoSimOptions& opt) {
  const KatoThresholds th = kato_thresholds(prob);
  KatoSimOptions sim = opt;
  sim.t_max = std::max(opt.t_max, 4.0 * th.T1);
  const KatoRun run = kato_simulate(prob, sim);

  double k_sup = std::numeric_limits<double>::infinity();
  for (const auto& s : run.steps) {
    if (s.t < prob.T0) continue;
    if (run.blowup_time.is_finite() && s.t > run.blowup_time.value()) break;
    k_sup = std::min(k_sup, s.G * std::pow(s.t, -prob.a));
  }
  KatoReport rep{th, prob.K <= k_sup * (1.0 + 1e-10), k_sup, run.blowup_time, false, KatoVerdict::Checked};
  rep.bound_satisfied = run.blowup_time <= Extended::finite(2.0 * th.T1 * (1.0 + 1e-8));
  if (!rep.premise_holds) rep.verdict = KatoVerdict::Inapplicable;
  else if (prob.K < th.K0) rep.verdict = KatoVerdict::OutsideHypothesis;
  return rep;
}

double factorization_identity_check(double mu, double nu2, const std::vector<KatoSample>& s) {
  const auto [r1, r2] = characteristic_roots(mu, nu2);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double hm = s[i].t - s[i - 1].t, hp = s[i + 1].t - s[i].t;
    const double Fm = std::pow(s[i - 1].t, r1) * s[i - 1].G;
    const double F0 = std::pow(s[i].t, r1) * s[i].G;
    const double Fp = std::pow(s[i + 1].t, r1) * s[i + 1].G;
    const double tm = 0.5 * (s[i - 1].t + s[i].t), tp = 0.5 * (s[i].t + s[i + 1].t);
    const double wm = std::pow(tm, r2 + 1.0 - r1) * (F0 - Fm) / hm;
    const double wp = std::pow(tp, r2 + 1.0 - r1) * (Fp - F0) / hp;
    const double lhs = std::pow(s[i].t, -(r2 + 1.0)) * (wp - wm) / (tp - tm);
    const double t = s[i].t;
    const double rhs = s[i].d2G + mu * s[i].dG / t + nu2 * s[i].G / (t * t);
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return worst;
}

KatoDraw kato_draw(std::uint64_t seed, std::size_t index, const KatoDrawRanges& ranges, const KatoSimOptions& opt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  KatoProblem pr;
  pr.mu = ranges.mu_max * u(rng);
  pr.nu2 = u(rng) * (pr.mu - 1.0) * (pr.mu - 1.0) / 4.0;
  if (u(rng) < 0.15) pr.nu2 = (pr.mu - 1.0) * (pr.mu - 1.0) / 4.0;  // exercise the double-root branch
  pr.p = ranges.p_min + (ranges.p_max - ranges.p_min) * u(rng);
  const auto roots = characteristic_roots(pr.mu, pr.nu2);
  const double a_lo = std::max(-roots.r1, -2.0 / (pr.p - 1.0));
  pr.a = a_lo + ranges.a_span * u(rng);
  pr.q = std::max(0.0, pr.a * (pr.p - 1.0) + 2.0);
  pr.B = ranges.B_min + (ranges.B_max - ranges.B_min) * u(rng);
  pr.G1 = ranges.G_max * u(rng);
  pr.G1p = ranges.G_max * (0.05 + 0.95 * u(rng)) + std::max(0.0, -roots.r1) * pr.G1;
  pr.beta = default_beta(pr.p);
  pr.K = 1.0;
  pr.T0 = 1.0;

  KatoDraw draw{index, pr, false, {}};
  const KatoThresholds th = kato_thresholds(pr);
  const KatoRun run = kato_simulate(pr, opt);
  if (!run.blowup_time.is_finite()) return draw;

  // Earliest trajectory time after which G >= K0 t^a holds up to blow-up.
  const double T = run.blowup_time.value();
  double start = -1.0;
  for (auto it = run.steps.rbegin(); it != run.steps.rend(); ++it) {
    if (it->t > T) continue;
    if (it->G < th.K0 * std::pow(it->t, pr.a)) break;
    start = it->t;
  }
  if (start < 1.0) return draw;
  draw.problem.K = th.K0;
  draw.problem.T0 = start;
  draw.report = kato_lemma_check(draw.problem, opt);
  draw.applicable = draw.report.verdict == KatoVerdict::Checked;
  return draw;
}

std::vector<KatoDraw> kato_monte_carlo(std::uint64_t seed, std::size_t draws, unsigned jobs,
                                       const KatoDrawRanges& ranges, const KatoSimOptions& opt) {
  std::vector<KatoDraw> out(draws);
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(draws, 1))));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < draws; i += jobs) out[i] = kato_draw(seed, i, ranges, opt);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace epdt
