// One line per acceptance criterion; exits nonzero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "epdt/iteration.hpp"
#include "epdt/kato.hpp"
#include "epdt/kernel.hpp"
#include "epdt/linear1d.hpp"
#include "epdt/model.hpp"
#include "epdt/radon.hpp"
#include "epdt/semilinear.hpp"
#include "epdt/special.hpp"
#include "lab.hpp"

using namespace epdt;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

double rel(double a, double b) { return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300}); }

// Collects failed checks and remembers the first one.
struct Checks {
  std::size_t failed = 0;
  std::string first;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (failed++ == 0) first = what;
  }
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<void(Checks&)> body;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void exponents(Checks& c) {
  const Extended p3 = strauss_exponent(3.0, 0.0);
  c.require(p3.is_finite() && std::fabs(p3.value() - (1.0 + std::sqrt(2.0))) <= 1e-12, "p_Str(3,0)");
  std::size_t points = 0;
  double worst_shift = 0.0, worst_res = 0.0;
  for (double ell : {-0.5, 0.0, 0.5, 1.0, 2.0}) {
    for (double mu : {0.0, 0.7, 2.0, 4.5, 9.0}) {
      for (int n : {2, 3}) {
        const ModelParams pm{ell, mu, 0.0, n, 1.0};
        ++points;
        const Extended ps = strauss_exponent_shifted(pm);
        const Extended pu = strauss_exponent(n + mu / (ell + 1.0), ell);
        c.require(ps.is_finite() == pu.is_finite(), "finiteness differs");
        if (!ps.is_finite() || !pu.is_finite()) continue;
        worst_shift = std::max(worst_shift, std::fabs(ps.value() - pu.value()));
        worst_res = std::max(worst_res, std::fabs(shifted_strauss_quadratic(pm).residual(ps.value())));
      }
    }
  }
  c.require(points == 50, "grid size");
  c.require(worst_shift <= 1e-12, "shift identity " + fmt(worst_shift));
  c.require(worst_res <= 1e-12, "quadratic residual " + fmt(worst_res));
  c.note = "grid=" + std::to_string(points) + " shift=" + fmt(worst_shift) + " residual=" + fmt(worst_res);
}

void delta_invariance(Checks& c) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 6.0), th(-4.0, 4.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double mu = u(rng), nu2 = u(rng), theta = th(rng);
    const double d = (mu - 1.0) * (mu - 1.0) - 4.0 * nu2;
    worst = std::max(worst, std::fabs(delta_invariance_check(mu, nu2, theta).delta - d) / std::max(1.0, std::fabs(d)));
  }
  c.require(worst <= 1e-12, "delta drift " + fmt(worst));
  c.note = "draws=100 worst=" + fmt(worst);
}

void hypergeometric(Checks& c) {
  double worst_log = 0.0, worst_euler = 0.0;
  for (int k = 1; k <= 9; ++k) {
    const double z = 0.1 * k;
    worst_log = std::max(worst_log, rel(special::gauss_2f1(1, 1, 2, z), -std::log1p(-z) / z));
  }
  for (double g : {-1.0, -0.25, 0.0, 0.25, 0.5}) {
    for (double z : {0.1, 0.5, 0.9, 0.99}) {
      for (double a : {g, 1.0 - g}) {
        const auto s = special::euler_transform_identity_check(a, a, 1.0, z);
        worst_euler = std::max(worst_euler, rel(s.direct, s.transformed));
      }
    }
  }
  c.require(worst_log <= 1e-10, "log identity " + fmt(worst_log));
  c.require(worst_euler <= 1e-10, "Euler identity " + fmt(worst_euler));
  c.note = "log=" + fmt(worst_log) + " euler=" + fmt(worst_euler);
}

std::vector<KernelPoint> cone_points(double ell, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<KernelPoint> pts;
  for (int i = 0; i < count; ++i) {
    const double t = 1.0 + 4.0 * u(rng);
    const double b = 1.0 + (t - 1.0) * u(rng);
    const double x = -2.0 + 4.0 * u(rng);
    const double w = (phi_ell(t, ell) - phi_ell(b, ell)) * 0.98;
    pts.push_back({t, x, b, x + w * (2.0 * u(rng) - 1.0)});
  }
  return pts;
}

void kernel_reduction(Checks& c) {
  const ModelParams wave{0, 0, 0, 1, 1};
  double worst_E = 0.0, worst_K0 = 0.0, worst_form = 0.0;
  for (const auto& pt : cone_points(0.0, 1000, 3)) {
    worst_E = std::max(worst_E, std::fabs(kernel_E(pt, wave) - 0.5));
    const double y = pt.x + (pt.t - 1.0) * 0.98 * (2.0 * (pt.b - 1.0) / std::max(pt.t - 1.0, 1e-12) - 1.0);
    worst_K0 = std::max(worst_K0, std::fabs(kernel_K0(pt.t, pt.x, y, wave)));
  }
  std::size_t compared = 0;
  for (double d : {0.0, 0.25, 1.0, 4.0}) {
    for (double ell : {-0.5, 0.0, 1.0}) {
      const double mu = 1.5 + std::sqrt(d);
      const ModelParams q{ell, mu, ((mu - 1) * (mu - 1) - d) / 4.0, 1, 1};
      for (const auto& pt : cone_points(ell, 200, 17)) {
        worst_form = std::max(worst_form, rel(kernel_E_transformed(pt, q), kernel_E_original(pt, q)));
        ++compared;
      }
    }
  }
  c.require(worst_E <= 1e-12, "E != 1/2 by " + fmt(worst_E));
  c.require(worst_K0 <= 1e-12, "K0 != 0 by " + fmt(worst_K0));
  c.require(worst_form <= 1e-9, "forms differ by " + fmt(worst_form));
  c.note = "E=" + fmt(worst_E) + " K0=" + fmt(worst_K0) + " forms=" + fmt(worst_form) + " over " +
           std::to_string(compared);
}

double poly_bump(double x, int k) { return std::fabs(x) < 1.0 ? std::pow(1.0 - x * x, k) : 0.0; }

void representation_vs_fd(Checks& c) {
  const std::vector<ModelParams> sets{{0, 0, 0, 1, 1}, {1, 0, 0, 1, 1}, {-0.5, 1, 0, 1, 1}, {0.5, 2, 0.1, 1, 1},
                                      {0, 3, 1, 1, 1}};
  double worst = 0.0, ratio_lo = INFINITY, ratio_hi = 0.0;
  for (const auto& pm : sets) {
    const LinearProblem lp{pm, [](double x) { return poly_bump(x, 6); },
                           [](double x) { return 0.8 * poly_bump(x, 5); }, {}, 3.0};
    const double reach = pm.R + amplitude(3.0, pm.ell) + 0.5;
    std::vector<double> xs, exact;
    double scale = 0.0;
    for (double x = -reach; x <= reach; x += 0.05) {
      xs.push_back(x);
      exact.push_back(solve_representation(lp, 3.0, x));
      scale = std::max(scale, std::fabs(exact.back()));
    }
    std::vector<double> errs;
    for (double dx : {1.0 / 100, 1.0 / 200, 1.0 / 400}) {
      FdOptions fo;
      fo.dx = dx;
      const auto snap = solve_fd_oracle(lp, fo).snapshots.back();
      double e = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) e = std::max(e, std::fabs(snap(xs[i]) - exact[i]));
      errs.push_back(e / scale);
    }
    worst = std::max(worst, errs.back());
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
      ratio_lo = std::min(ratio_lo, errs[i] / errs[i + 1]);
      ratio_hi = std::max(ratio_hi, errs[i] / errs[i + 1]);
    }
  }
  c.require(worst <= 2e-3, "rel Linf " + fmt(worst));
  c.require(ratio_lo >= 3.0 && ratio_hi <= 5.0, "halving ratio in [" + fmt(ratio_lo) + ", " + fmt(ratio_hi) + "]");
  c.note = "rel=" + fmt(worst) + " ratios=[" + fmt(ratio_lo) + "," + fmt(ratio_hi) + "]";
}

void kato(Checks& c) {
  const auto draws = kato_monte_carlo(20240611, 120, 1);
  std::size_t applicable = 0, bounded = 0;
  double worst_shift = 0.0;
  KatoSimOptions doubled;
  doubled.blowup_threshold *= 2.0;
  for (const auto& d : draws) {
    if (!d.applicable) continue;
    ++applicable;
    c.require(d.report.premise_holds, "premise not verified at draw " + std::to_string(d.index));
    c.require(d.problem.K >= d.report.thresholds.K0, "K < K0 at draw " + std::to_string(d.index));
    if (d.report.bound_satisfied) ++bounded;
    const Extended T2 = kato_simulate(d.problem, doubled).blowup_time;
    const Extended& T1 = d.report.blowup_time;
    c.require(T1.is_finite() && T2.is_finite(), "no blow-up at draw " + std::to_string(d.index));
    if (T1.is_finite() && T2.is_finite()) worst_shift = std::max(worst_shift, rel(T2.value(), T1.value()));
  }
  c.require(applicable >= 50, "only " + std::to_string(applicable) + " applicable draws");
  c.require(bounded == applicable, std::to_string(applicable - bounded) + " draws exceed 2 T1");
  c.require(worst_shift < 1e-2, "threshold doubling shift " + fmt(worst_shift));
  c.note = "applicable=" + std::to_string(applicable) + " bounded=" + std::to_string(bounded) +
           " doubling=" + fmt(worst_shift);
}

double smooth_bump(double r) { return r < 1.0 ? std::exp(-4.0 * r * r) * std::pow(1.0 - r * r, 4) : 0.0; }

void radon(Checks& c) {
  const double rho = 0.5, a = std::sqrt(1.0 - rho * rho);
  // Area of the slice {x_3 = rho} of the unit ball, integrated over the plane.
  const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [a](double y) { return 2.0 * std::sqrt(std::max(0.0, a * a - y * y)); }, -a, a, 15, 1e-13);
  const double analytic = kPi * (1.0 - rho * rho);
  const RadialFunction ball{sample([](double) { return 1.0; }, 0.0, 0.01, 101, 1.0), 3};
  const double v = radon_radial(ball, rho);
  c.require(std::fabs(v - analytic) <= 1e-6, "ball vs pi(1-rho^2) " + fmt(std::fabs(v - analytic)));
  c.require(std::fabs(v - oracle) <= 1e-6, "ball vs hyperplane " + fmt(std::fabs(v - oracle)));

  const std::vector<double> rhos{0.0, 0.15, 0.3, 0.5, 0.7, 0.85};
  double worst = 0.0;
  for (int n : {2, 3, 4}) {
    const RadialFunction f{sample(smooth_bump, 0.0, 1e-3, 1001, 1.0), n};
    const double e = radon_laplacian_identity_check(f, rhos);
    c.require(e <= 1e-3, "Laplacian identity n=" + std::to_string(n) + " " + fmt(e));
    worst = std::max(worst, e);
  }
  c.note = "ball=" + fmt(std::fabs(v - analytic)) + " identity=" + fmt(worst);
}

double mollifier(double x) { return std::fabs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }
double mollifier_dx(double x) {
  return std::fabs(x) < 1.0 ? mollifier(x) * (-2.0 * x / ((1.0 - x * x) * (1.0 - x * x))) : 0.0;
}

void semilinear(Checks& c) {
  auto bump = [](double x) { return default_bump(x, 1.0); };
  double worst_lin = 0.0;
  for (const ModelParams& pm : {ModelParams{0, 2, 0, 1, 1}, ModelParams{1, 0, 0, 1, 1},
                                ModelParams{-0.5, 1, 0, 1, 1}, ModelParams{0.5, 2, 0.1, 1, 1}}) {
    const SemilinearProblem pr{pm, 2.0, 1.0, bump, bump, false, true};
    SemilinearOptions o;
    o.t_max = 3.0;
    o.dx = 1.0 / 200;
    o.snapshot_times = {3.0};
    const auto run = solve_semilinear(pr, o);
    const LinearProblem lp{pm, bump, bump, {}, 3.0};
    double err = 0.0, scale = 0.0;
    for (double x = -5.0; x <= 5.0; x += 0.05) {
      const double r = solve_representation(lp, 3.0, x);
      err = std::max(err, std::fabs(run.snapshots.front().u(x) - r));
      scale = std::max(scale, std::fabs(r));
    }
    worst_lin = std::max(worst_lin, err / scale);
  }
  c.require(worst_lin <= 2e-3, "linear mismatch " + fmt(worst_lin));

  std::vector<WeakTestFunction> bank;
  for (int k = 0; k < 5; ++k) {
    const double ctr = -1.5 + 0.75 * k, w = 1.2 + 0.2 * k, om = 0.3 * k;
    bank.push_back({[=](double s, double x) { return std::cos(om * s) * mollifier((x - ctr) / w); },
                    [=](double s, double x) { return -om * std::sin(om * s) * mollifier((x - ctr) / w); },
                    [=](double s, double x) { return std::cos(om * s) * mollifier_dx((x - ctr) / w) / w; }});
  }
  const SemilinearProblem pr{{0.5, 1.5, 0.05, 1, 1}, 2.0, 0.5, bump, bump, true, true};
  std::vector<double> ode, weak;
  for (double dx : {1.0 / 100, 1.0 / 200}) {
    SemilinearOptions o;
    o.t_max = 3.0;
    o.dx = dx;
    o.keep_records = true;
    const auto run = solve_semilinear(pr, o);
    c.require(!run.record.blew_up, "consistency run blew up");
    ode.push_back(u_ode_residual(run, pr));
    weak.push_back(weak_form_residual(run, pr, bank));
  }
  const double r_ode = ode[0] / ode[1], r_weak = weak[0] / weak[1];
  c.require(r_ode >= 3.0 && r_ode <= 5.0, "U-ODE ratio " + fmt(r_ode));
  c.require(r_weak >= 3.0 && r_weak <= 5.0, "weak-form ratio " + fmt(r_weak));
  c.note = "linear=" + fmt(worst_lin) + " ode_ratio=" + fmt(r_ode) + " weak_ratio=" + fmt(r_weak);
}

void sweep(Checks& c) {
  auto bump = [](double x) { return default_bump(x, 1.0); };
  const SemilinearProblem base{{0, 2, 0, 1, 1}, 1.0 + std::sqrt(2.0), 1.0, bump, bump, true, true};
  std::vector<double> eps;
  for (int i = 0; i < 8; ++i) eps.push_back(0.4 + 1.2 * i / 7.0);
  SemilinearOptions o;
  o.t_max = 1000.0;
  o.dx = 0.02;
  o.record_dt = 0.5;
  const auto sw = lifespan_sweep(base, eps, o, 1);
  c.require(sw.complete, "some eps did not blow up");
  c.require(sw.strictly_decreasing, "T not strictly decreasing");
  c.require(sw.fit.slope > 0.0, "slope " + fmt(sw.fit.slope));
  std::ostringstream s;
  s << "slope=" << fmt(sw.fit.slope) << " T=[";
  for (std::size_t i = 0; i < sw.records.size(); ++i) {
    s << (i ? "," : "") << (sw.records[i].T_numeric.is_finite() ? fmt(sw.records[i].T_numeric.value()) : "inf");
  }
  c.note = s.str() + "]";
}

void iteration(Checks& c) {
  IterationConfig wave;
  wave.params = {0.0, 0.0, 0.0, 3, 1.0};
  IterationConfig skew;
  skew.params = {0.5, 1.5, 0.05, 2, 0.8};
  skew.theta = 0.6;
  skew.a0 = 5.5;
  skew.alpha0 = 2.0 * (std::pow(2.5, 1.5) - 1.0) + 0.5;
  skew.B0 = 1.7;
  skew.D = 0.6;
  skew.Q = 0.9;
  skew.M = 2.3;
  auto r = [](double a, double b) { return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1.0}); };
  double wa = 0.0, wB = 0.0, wK = 0.0;
  for (const auto& cfg : {wave, skew}) {
    for (const auto& s : sequence_table(cfg, 30)) {
      wa = std::max({wa, r(s.a, a_closed_form(s.j, cfg)), r(s.alpha, alpha_closed_form(s.j, cfg))});
      if (s.j <= 25) wB = std::max(wB, r(s.log_B, log_B_closed_form(s.j, cfg)));
    }
    for (std::size_t j = 0; j <= 30; ++j) {
      for (double t : {1.5, 100.0, 1e6}) {
        for (double e : {0.1, 0.5, 1.0}) wK = std::max(wK, r(K_j_log(j, t, e, cfg), K_j_log_product(j, t, e, cfg)));
      }
    }
    const double e = 0.9;
    const Extended T0 = T0_of_eps(e, cfg);
    c.require(T0.is_finite(), "T0 infinite");
    if (!T0.is_finite()) continue;
    const double t = 2.0 * T0.value();
    c.require(L_function(t, e, cfg) >= 1.0, "L < 1");
    double prev = -INFINITY, last = 0.0;
    bool increasing_tail = true;
    for (std::size_t j = 0; j <= 30; ++j) {
      last = K_j_log(j, t, e, cfg);
      if (j >= 5 && !(last > prev)) increasing_tail = false;
      prev = last;
    }
    c.require(increasing_tail && last > 1e6, "K_j_log does not diverge");
  }
  c.require(wa <= 1e-12, "a/alpha closed forms " + fmt(wa));
  c.require(wB <= 1e-10, "log B closed form " + fmt(wB));
  c.require(wK <= 1e-10, "K_j forms " + fmt(wK));
  c.note = "a=" + fmt(wa) + " logB=" + fmt(wB) + " K=" + fmt(wK);
}

void cli_determinism(Checks& c) {
  const fs::path root = fs::temp_directory_path() / "epdt_acceptance_cli";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::vector<std::pair<const char*, const char*>> runs{
      {"exponents", R"({"model": {"ell": 0.5, "mu": 2, "nu2": 0.1, "n": 2}})"},
      {"kato", R"({"kato": {"draws": 60}})"},
      {"blowup-sweep", R"({"model": {"mu": 2, "n": 1},
          "sweep": {"eps": [0.8, 1.2, 1.6], "dx": 0.05, "t_max": 100, "record_dt": 0.5}})"},
      {"iterate", R"({"iteration": {"j_max": 20}})"},
      {"linear", R"({"model": {"mu": 2}, "linear": {"dx": 0.01, "stride": 10}})"},
      {"radon", R"({"model": {"n": 3}})"},
  };
  std::size_t compared = 0;
  for (const auto& [cmd, text] : runs) {
    const fs::path cfg = root / (std::string(cmd) + ".json");
    std::ofstream(cfg) << text;
    std::string hashes[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path out = root / (std::string(cmd) + "_" + std::to_string(k));
      std::ostringstream sink;
      std::vector<std::string> args{cmd, "--config", cfg.string(), "--seed", "77", "--out", out.string()};
      if (k == 1) args.insert(args.end(), {"--jobs", "2"});
      const int code = lab::run(args, sink);
      c.require(code == 0, std::string(cmd) + " exit " + std::to_string(code));
      hashes[k] = lab::hash_tree(out);
    }
    c.require(hashes[0] == hashes[1], std::string(cmd) + " outputs differ");
    ++compared;
  }
  c.note = "commands=" + std::to_string(compared);
  fs::remove_all(root);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "exponent suite", 1.0, exponents},
      {2, "delta invariance", 1.0, delta_invariance},
      {3, "hypergeometric identities", 1.0, hypergeometric},
      {4, "kernel reduction", 5.0, kernel_reduction},
      {5, "representation vs finite differences", 60.0, representation_vs_fd},
      {6, "Kato lemma Monte-Carlo", 60.0, kato},
      {7, "Radon transform", 30.0, radon},
      {8, "semilinear consistency", 120.0, semilinear},
      {9, "lifespan sweep", 600.0, sweep},
      {10, "iteration machinery", 1.0, iteration},
      {11, "CLI determinism", 30.0, cli_determinism},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    Checks checks;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.body(checks);
    } catch (const std::exception& e) {
      checks.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    checks.require(secs < cr.budget_s, "over budget " + fmt(cr.budget_s) + " s");
    const bool ok = checks.failed == 0;
    failures += ok ? 0 : 1;
    std::printf("%s %2d %-38s %8.3f s  %s%s%s\n", ok ? "PASS" : "FAIL", cr.id, cr.name, secs, checks.note.c_str(),
                ok ? "" : "  first failure: ", ok ? "" : checks.first.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
