#include "epdt/semilinear.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>
#include <tuple>

#include <boost/math/constants/constants.hpp>

#include "epdt/error.hpp"
#include "epdt/kato.hpp"
#include "epdt/quadrature.hpp"

namespace epdt {

namespace {

double sphere_surface(int n) {
  const double h = 0.5 * n;
  return 2.0 * std::pow(boost::math::constants::pi<double>(), h) / std::tgamma(h);
}

// Trapezoid weights of the spatial measure on index i.
double measure(int n, double dx, std::size_t i, std::size_t size) {
  const double end = (i == 0 || i + 1 == size) ? 0.5 : 1.0;
  if (n == 1) return end * dx;
  const double r = dx * static_cast<double>(i);
  return end * dx * sphere_surface(n) * std::pow(r, n - 1);
}

}  // namespace

double default_bump(double x, double R) {
  const double s = x / R;
  return std::fabs(s) < 1.0 ? std::pow(1.0 - s * s, 3) : 0.0;
}

void SemilinearProblem::validate() const {
  params.validate_admissible();
  require(p > 1.0, ErrorCode::InvalidArgument, "p must exceed 1");
  require(eps >= 0.0 && std::isfinite(eps), ErrorCode::InvalidArgument, "eps must be finite and nonnegative");
  require(static_cast<bool>(u0) && static_cast<bool>(u1), ErrorCode::InvalidArgument, "u0 and u1 are required");
  if (!theorem_data) return;
  const double R = params.R;
  const double sd = std::sqrt(delta(params.mu, params.nu2));
  const double lo = params.n == 1 ? -2.0 * R : 0.0;
  const int count = 4001;
  const double h = (2.0 * R - lo) / (count - 1);
  double mass = 0.0;
  for (int i = 0; i < count; ++i) {
    const double x = lo + h * i;
    const double a = u0(x), b = u1(x);
    require(std::isfinite(a) && std::isfinite(b), ErrorCode::InvalidArgument, "data must be finite");
    if (std::fabs(x) > R) {
      require(a == 0.0 && b == 0.0, ErrorCode::InvalidArgument, "data must vanish outside B_R");
      continue;
    }
    require(a >= 0.0 && b >= 0.0, ErrorCode::InvalidArgument, "data must be nonnegative");
    require(b + 0.5 * (params.mu - 1.0 - sd) * a >= -1e-14, ErrorCode::InvalidArgument,
            "u1 + (mu-1-sqrt(delta))/2 u0 must be nonnegative");
    const double w = params.n == 1 ? 1.0 : std::pow(x, params.n - 1);
    mass += w * (b + 0.5 * (params.mu - 1.0 + sd) * a);
  }
  require(mass > 0.0, ErrorCode::InvalidArgument, "the integral assumption on the data fails");
}

double spatial_average(const GridFunction& u, int n) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += measure(n, u.dx, i, u.size()) * u.values[i];
  return s;
}

namespace {

class Stepper {
 public:
  Stepper(const SemilinearProblem& prob, const SemilinearOptions& opt) : prob_(prob), opt_(opt) {
    const ModelParams& pm = prob.params;
    n_ = pm.n;
    dx_ = opt.dx;
    const double width = pm.R + amplitude(opt.t_max, pm.ell) + opt.margin + 2.0 * dx_;
    half_ = static_cast<std::size_t>(std::ceil(width / dx_));
    size_ = n_ == 1 ? 2 * half_ + 1 : half_ + 1;
    x0_ = n_ == 1 ? -dx_ * static_cast<double>(half_) : 0.0;
  }

  std::size_t size() const { return size_; }
  double x0() const { return x0_; }
  double x(std::size_t i) const { return x0_ + dx_ * static_cast<double>(i); }

  // Cells the scheme can reach: the nonzero data widened by one cell per step.
  // Everything outside is exactly zero, so skipping it changes nothing.
  void seed_active(const std::vector<double>& a, const std::vector<double>& b) {
    lo_ = size_;
    hi_ = 0;
    for (std::size_t i = 0; i < size_; ++i) {
      if (a[i] != 0.0 || b[i] != 0.0) {
        lo_ = std::min(lo_, i);
        hi_ = std::max(hi_, i);
      }
    }
    if (lo_ > hi_) lo_ = hi_ = (n_ == 1 ? half_ : 0);
  }
  std::pair<std::size_t, std::size_t> reach() const {
    const std::size_t lo = n_ == 1 ? std::max<std::size_t>(1, lo_ == 0 ? 0 : lo_ - 1) : 0;
    return {lo, std::min(size_ - 2, hi_ + 1)};
  }
  void widen() { std::tie(lo_, hi_) = reach(); }

  double lap(const std::vector<double>& v, std::size_t i) const {
    const double inv = 1.0 / (dx_ * dx_);
    if (n_ == 1) return (v[i - 1] - 2.0 * v[i] + v[i + 1]) * inv;
    if (i == 0) return n_ * 2.0 * (v[1] - v[0]) * inv;
    const double r = dx_ * static_cast<double>(i);
    return (v[i + 1] - 2.0 * v[i] + v[i - 1]) * inv + (n_ - 1) / r * (v[i + 1] - v[i - 1]) / (2.0 * dx_);
  }

  double force(const std::vector<double>& v, std::size_t i, double t) const {
    const ModelParams& pm = prob_.params;
    double f = std::pow(t, 2.0 * pm.ell) * lap(v, i) - pm.nu2 / (t * t) * v[i];
    if (prob_.nonlinear) f += std::pow(std::fabs(v[i]), prob_.p);
    return f;
  }

  // Taylor start from (u, u_t) at t = 1.
  void first(const std::vector<double>& u, const std::vector<double>& ut, double h, std::vector<double>& out) const {
    const auto [lo, hi] = reach();
    for (std::size_t i = lo; i <= hi; ++i) {
      const double acc = force(u, i, 1.0) - prob_.params.mu * ut[i];
      out[i] = u[i] + h * ut[i] + 0.5 * h * h * acc;
    }
  }

  void step(const std::vector<double>& prev, const std::vector<double>& cur, double t, double k, double h,
            std::vector<double>& out) const {
    const double a = 2.0 / (h * (h + k)), b = 2.0 / (k * (h + k));
    const double c = k / (h * (h + k)), d = h / (k * (h + k));
    const double m = prob_.params.mu / t;
    const double den = a + m * c;
    const double back = b - m * d;
    const auto [lo, hi] = reach();
    for (std::size_t i = lo; i <= hi; ++i) out[i] = cur[i] + (force(cur, i, t) + back * (cur[i] - prev[i])) / den;
  }

  double sup(const std::vector<double>& v) const {
    const auto [lo, hi] = reach();
    double s = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
      if (!std::isfinite(v[i])) return std::numeric_limits<double>::infinity();
      s = std::max(s, std::fabs(v[i]));
    }
    return s;
  }

  double integral(const std::vector<double>& v, double power) const {
    double s = 0.0;
    for (std::size_t i = 0; i < size_; ++i) {
      if (v[i] == 0.0) continue;
      const double w = measure(n_, dx_, i, size_);
      s += w * (power == 1.0 ? v[i] : std::pow(std::fabs(v[i]), power));
    }
    return s;
  }

  // Outermost |x| where |v| exceeds level.
  double outermost(const std::vector<double>& v, double level) const {
    double r = 0.0;
    for (std::size_t i = 0; i < size_; ++i)
      if (std::fabs(v[i]) > level) r = std::max(r, std::fabs(x(i)));
    return r;
  }

  GridFunction grid(std::vector<double> v) const { return GridFunction{x0_, dx_, std::move(v), -1.0}; }

 private:
  const SemilinearProblem& prob_;
  const SemilinearOptions& opt_;
  int n_ = 1;
  double dx_ = 0.0;
  std::size_t half_ = 0;
  std::size_t size_ = 0;
  double x0_ = 0.0;
  std::size_t lo_ = 0;
  std::size_t hi_ = 0;
};

}  // namespace

SemilinearRun solve_semilinear(const SemilinearProblem& prob, const SemilinearOptions& opt) {
  prob.validate();
  const ModelParams& pm = prob.params;
  require(opt.t_max > 1.0, ErrorCode::InvalidArgument, "t_max must exceed 1");
  require(opt.dx > 0.0 && opt.safety > 0.0 && opt.safety <= 1.0, ErrorCode::InvalidArgument, "bad grid options");
  require(opt.blowup_threshold > 0.0, ErrorCode::InvalidArgument, "threshold must be positive");
  const double record_dt = opt.record_dt > 0.0 ? opt.record_dt : 4.0 * opt.safety * opt.dx;
  const double support_level = opt.support_level > 0.0 ? opt.support_level : opt.dx * opt.dx;
  std::vector<double> snaps = opt.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  for (double s : snaps) require(s >= 1.0 && s <= opt.t_max, ErrorCode::DomainError, "snapshot time outside [1, t_max]");

  Stepper st(prob, opt);
  const std::size_t N = st.size();
  std::vector<double> prev(N, 0.0), cur(N, 0.0), next(N, 0.0), ut0(N, 0.0), trial(N, 0.0);
  for (std::size_t i = 1; i + 1 < N; ++i) {
    cur[i] = prob.eps * prob.u0(st.x(i));
    ut0[i] = prob.eps * prob.u1(st.x(i));
  }
  if (pm.n >= 2) {
    cur[0] = prob.eps * prob.u0(0.0);
    ut0[0] = prob.eps * prob.u1(0.0);
  }
  st.seed_active(cur, ut0);

  SemilinearRun run;
  run.record.eps = prob.eps;
  run.record.dx = opt.dx;
  run.record.t_max = opt.t_max;
  run.record.dt_min = std::numeric_limits<double>::infinity();
  run.U1p = st.integral(ut0, 1.0);

  std::size_t next_record = 0;
  std::size_t next_snap = 0;
  auto record_time = [&](std::size_t j) { return std::min(opt.t_max, 1.0 + record_dt * static_cast<double>(j)); };
  while (next_snap < snaps.size() && snaps[next_snap] <= 1.0) ++next_snap;

  double t = 1.0, k = 0.0;
  bool at_record = true, at_snap = !snaps.empty() && snaps.front() == 1.0;
  next_record = 1;
  double sup_cur = st.sup(cur);

  auto speed_step = [&](double tt) {
    const double h1 = opt.safety * opt.dx / std::pow(tt, pm.ell);
    return pm.ell > 0.0 ? opt.safety * opt.dx / std::pow(tt + h1, pm.ell) : h1;
  };

  while (true) {
    double h = speed_step(t);
    if (prob.nonlinear && sup_cur > 0.0)
      h = std::min(h, opt.nonlinear_dt / std::sqrt(prob.p * std::pow(sup_cur, prob.p - 1.0)));
    if (k > 0.0) h = std::min(h, 2.0 * k);
    bool land_record = false, land_snap = false;
    if (t < opt.t_max) {
      const double tr = record_time(next_record);
      const double ts = next_snap < snaps.size() ? snaps[next_snap] : std::numeric_limits<double>::infinity();
      const double target = std::min(tr, ts);
      if (target - t <= h * (1.0 + 1e-9)) {
        h = target - t;
        land_record = tr == target;
        land_snap = ts == target;
      } else if (target - t < 2.0 * h) {
        h = 0.5 * (target - t);
      }
    }
    if (h < opt.min_dt * std::max(1.0, t)) {
      run.record.blew_up = true;
      run.record.T_numeric = Extended::finite(t);
      break;
    }

    if (k == 0.0) st.first(cur, ut0, h, next);
    else st.step(prev, cur, t, k, h, next);

    if (at_record || at_snap) {
      std::vector<double> ut(N, 0.0);
      if (k == 0.0) {
        ut = ut0;
      } else {
        const double c = k / (h * (h + k)), d = h / (k * (h + k));
        for (std::size_t i = 0; i < N; ++i) ut[i] = c * (next[i] - cur[i]) + d * (cur[i] - prev[i]);
      }
      if (at_record) {
        run.series.push_back({t, st.integral(cur, 1.0), st.integral(cur, prob.p), sup_cur});
        run.support_excess = std::max(run.support_excess, st.outermost(cur, support_level * sup_cur) -
                                                              (pm.R + amplitude(t, pm.ell)));
        if (opt.keep_records) run.records.push_back({t, st.grid(cur), st.grid(ut)});
      }
      if (at_snap) run.snapshots.push_back({t, st.grid(cur), st.grid(ut)});
    }
    if (t >= opt.t_max) break;

    const double sup_next = st.sup(next);
    if (!std::isfinite(sup_next)) {
      run.record.blew_up = true;
      run.record.T_numeric = Extended::finite(t);
      break;
    }
    if (sup_next >= opt.blowup_threshold) {
      double lo = 0.0, hi = h;
      while (hi - lo > opt.refine_rel * t) {
        const double mid = 0.5 * (lo + hi);
        if (k == 0.0) st.first(cur, ut0, mid, trial);
        else st.step(prev, cur, t, k, mid, trial);
        const double s = st.sup(trial);
        if (std::isfinite(s) && s < opt.blowup_threshold) lo = mid;
        else hi = mid;
      }
      run.record.blew_up = true;
      run.record.T_numeric = Extended::finite(t + hi);
      run.record.final_sup_norm = sup_next;
      run.record.dt_min = std::min(run.record.dt_min, h);
      ++run.record.steps;
      return run;
    }

    run.record.dt_min = std::min(run.record.dt_min, h);
    ++run.record.steps;
    st.widen();
    std::swap(prev, cur);
    std::swap(cur, next);
    k = h;
    t = land_record ? record_time(next_record) : (land_snap ? snaps[next_snap] : t + h);
    sup_cur = sup_next;
    at_record = land_record;
    at_snap = land_snap;
    if (land_record) ++next_record;
    if (land_snap) ++next_snap;
  }
  run.record.final_sup_norm = sup_cur;
  return run;
}

double u_ode_residual(const SemilinearRun& run, const SemilinearProblem& prob) {
  const auto& s = run.series;
  const double mu = prob.params.mu, nu2 = prob.params.nu2;
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < s.size(); ++j) {
    const double k = s[j].t - s[j - 1].t, h = s[j + 1].t - s[j].t, t = s[j].t;
    const double up = s[j + 1].U - s[j].U, um = s[j].U - s[j - 1].U;
    const double d2 = 2.0 / (h + k) * (up / h - um / k);
    const double d1 = (k / (h * (h + k))) * up + (h / (k * (h + k))) * um;
    const double rhs = prob.nonlinear ? s[j].Np : 0.0;
    worst = std::max(worst, std::fabs(d2 + mu * d1 / t + nu2 * s[j].U / (t * t) - rhs));
  }
  return worst;
}

double u_representation_check(const SemilinearRun& run, const SemilinearProblem& prob) {
  const auto& s = run.series;
  if (s.empty()) return 0.0;
  const auto [r1, r2] = characteristic_roots(prob.params.mu, prob.params.nu2);
  const double U1 = s.front().U;
  double inner = 0.0, outer = 0.0, worst = 0.0, scale = 0.0;
  auto src = [&](std::size_t j) { return prob.nonlinear ? s[j].Np : 0.0; };
  double prev_inner_w = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double t = s[j].t;
    if (j > 0) {
      const double tp = s[j - 1].t, dt = t - tp;
      inner += 0.5 * dt * (std::pow(tp, r2 + 1.0) * src(j - 1) + std::pow(t, r2 + 1.0) * src(j));
      const double w = std::pow(t, r1 - r2 - 1.0) * inner;
      outer += 0.5 * dt * (prev_inner_w + w);
      prev_inner_w = w;
    }
    const double rep = kato_G_lin(prob.params.mu, prob.params.nu2, U1, run.U1p, t) + std::pow(t, -r1) * outer;
    worst = std::max(worst, std::fabs(s[j].U - rep));
    scale = std::max(scale, std::fabs(s[j].U));
  }
  return scale > 0.0 ? worst / scale : worst;
}

double weak_form_residual(const SemilinearRun& run, const SemilinearProblem& prob,
                          const std::vector<WeakTestFunction>& bank) {
  const auto& rec = run.records;
  require(!rec.empty(), ErrorCode::InvalidArgument, "weak-form check needs a run with keep_records");
  const ModelParams& pm = prob.params;
  const int n = pm.n;
  double worst = 0.0;
  for (const auto& tf : bank) {
    std::vector<double> resid(rec.size(), 0.0), scale(rec.size(), 0.0);
    double body = 0.0, body_abs = 0.0, last = 0.0, last_abs = 0.0, data = 0.0;
    for (std::size_t j = 0; j < rec.size(); ++j) {
      const double t = rec[j].t;
      const auto& u = rec[j].u;
      const auto& ut = rec[j].ut;
      const std::size_t m = u.size();
      double b = 0.0, b_abs = 0.0, edge = 0.0, edge_abs = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double x = u.x_at(i);
        const double w = measure(n, u.dx, i, m);
        const double ph = tf.phi(t, x);
        double ux = 0.0;
        if (i > 0 && i + 1 < m) ux = (u.values[i + 1] - u.values[i - 1]) / (2.0 * u.dx);
        const double terms[4] = {-ut.values[i] * tf.phi_s(t, x), std::pow(t, 2.0 * pm.ell) * ux * tf.phi_x(t, x),
                                 pm.mu / t * ut.values[i] * ph, pm.nu2 / (t * t) * u.values[i] * ph};
        double nl = prob.nonlinear ? std::pow(std::fabs(u.values[i]), prob.p) * ph : 0.0;
        for (double v : terms) {
          b += w * v;
          b_abs += w * std::fabs(v);
        }
        b -= w * nl;
        b_abs += w * std::fabs(nl);
        edge += w * ut.values[i] * ph;
        edge_abs += w * std::fabs(ut.values[i] * ph);
      }
      if (j == 0) {
        data = edge;
      } else {
        const double dt = t - rec[j - 1].t;
        body += 0.5 * dt * (last + b);
        body_abs += 0.5 * dt * (last_abs + b_abs);
      }
      last = b;
      last_abs = b_abs;
      resid[j] = std::fabs(edge + body - data);
      scale[j] = edge_abs + body_abs + std::fabs(data);
    }
    const double sc = *std::max_element(scale.begin(), scale.end());
    if (!(sc > 0.0)) continue;
    worst = std::max(worst, *std::max_element(resid.begin(), resid.end()) / sc);
  }
  return worst;
}

LifespanSweep lifespan_sweep(const SemilinearProblem& base, const std::vector<double>& eps_grid,
                             const SemilinearOptions& opt, unsigned jobs) {
  LifespanSweep out;
  const std::size_t m = eps_grid.size();
  out.records.resize(m);
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(m, 1))));
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < m; i += jobs) {
          SemilinearProblem pr = base;
          pr.eps = eps_grid[i];
          out.records[i] = solve_semilinear(pr, opt).record;
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& r = out.records[i];
    if (!r.blew_up) out.complete = false;
    if (i > 0 && eps_grid[i] > eps_grid[i - 1]) {
      const auto& q = out.records[i - 1];
      if (!(r.T_numeric <= q.T_numeric)) out.nonincreasing = false;
      if (!(r.T_numeric < q.T_numeric)) out.strictly_decreasing = false;
    }
    if (r.blew_up) {
      xs.push_back(std::pow(eps_grid[i], -base.p * (base.p - 1.0)));
      ys.push_back(std::log(r.T_numeric.value()));
    }
  }
  out.fit.points = xs.size();
  if (xs.size() >= 2) {
    const double k = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double den = k * sxx - sx * sx;
    if (den != 0.0) {
      out.fit.slope = (k * sxy - sx * sy) / den;
      out.fit.intercept = (sy - out.fit.slope * sx) / k;
      double ss = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - out.fit.intercept - out.fit.slope * xs[i];
        ss += e * e;
      }
      out.fit.residual = std::sqrt(ss / k);
    }
  }
  return out;
}

IterationFrameReport iteration_frame_check(const SemilinearRun& run, const SemilinearProblem& prob) {
  const ModelParams& pm = prob.params;
  require(pm.n >= 2, ErrorCode::DimensionTooSmall, "the iteration frame is checked for n >= 2");
  const auto& s = run.series;
  IterationFrameReport rep;
  if (s.size() < 2) return rep;
  const double p = prob.p, R = pm.R, ell = pm.ell;
  const double sd = std::sqrt(delta(pm.mu, pm.nu2));
  const double gamma = kernel_gamma(pm);
  const double phi1 = phi_ell(1.0, ell);
  const double R1 = gamma >= 0.0 ? 0.0 : phi1 - R;
  const double e = 1.0 - 0.5 * p;
  const double e_plus = std::max(e, 0.0), e_minus = std::max(-e, 0.0);
  const double wexp = 0.5 * pm.mu + 0.5 * (1.0 - sd);

  // Cumulative integral of b^{wexp} Np(b) on the record grid.
  std::vector<double> cum(s.size(), 0.0);
  for (std::size_t j = 1; j < s.size(); ++j) {
    cum[j] = cum[j - 1] + 0.5 * (s[j].t - s[j - 1].t) *
                              (std::pow(s[j - 1].t, wexp) * s[j - 1].Np + std::pow(s[j].t, wexp) * s[j].Np);
  }
  auto C = [&](double b) {
    if (b <= s.front().t) return 0.0;
    if (b >= s.back().t) return cum.back();
    const auto it = std::upper_bound(s.begin(), s.end(), b, [](double v, const SeriesPoint& q) { return v < q.t; });
    const std::size_t j = static_cast<std::size_t>(it - s.begin());
    const double t0 = s[j - 1].t, t1 = s[j].t;
    const double f0 = std::pow(t0, wexp) * s[j - 1].Np, f1 = std::pow(t1, wexp) * s[j].Np;
    const double fb = f0 + (f1 - f0) * (b - t0) / (t1 - t0);
    return cum[j - 1] + 0.5 * (b - t0) * (f0 + fb);
  };

  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : s) {
    const double t = q.t;
    const double A = amplitude(t, ell);
    if (!(A > R)) continue;
    const double pt = phi_ell(t, ell);
    auto integrand = [&](double rho) {
      const double top = amplitude_inv(0.5 * (A - rho - R), ell);
      const double inner = C(top);
      if (inner <= 0.0) return 0.0;
      return std::pow(rho, (pm.n - 1) * e_plus) * std::pow((pt + R1) * (pt + R1) - rho * rho, -gamma * p) /
             std::pow(A + R - rho, 0.5 * (pm.n - 1) * p) * std::pow(inner, p);
    };
    const double integral = quad::adaptive(integrand, 0.0, A - R, {0.0, 1e-8, 4000}).value;
    const double pre = std::pow(t, -0.5 * pm.mu * p + 0.5 * (1.0 - sd) * p) / std::pow(A + R, (pm.n - 1) * e_minus);
    const double rhs1 = pre * integral;
    rep.times.push_back(t);
    rep.lhs.push_back(q.Np);
    rep.rhs1.push_back(rhs1);
    if (rhs1 > 0.0) {
      ++rep.checked_times;
      const double k = q.Np / rhs1;
      if (k < best) {
        best = k;
        rep.worst_time = t;
      }
    }
  }
  if (std::isfinite(best)) rep.max_K = Extended::finite(best);
  return rep;
}

}  // namespace epdt
