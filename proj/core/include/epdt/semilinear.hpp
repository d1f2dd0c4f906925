#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "epdt/grid.hpp"
#include "epdt/model.hpp"

namespace epdt {

// u_tt - t^{2l} Lap u + mu t^{-1} u_t + nu2 t^{-2} u = |u|^p on t > 1 with
// u(1) = eps u0, u_t(1) = eps u1. For n >= 2 the data are radial profiles in r.
struct SemilinearProblem {
  ModelParams params;
  double p = 2.0;
  double eps = 1.0;
  std::function<double(double)> u0;
  std::function<double(double)> u1;
  bool nonlinear = true;     // false drops |u|^p (linear cross-checks)
  bool theorem_data = true;  // check sign, support and integral assumptions on the data

  // Throws InvalidArgument (including data violating the assumptions when
  // theorem_data is set) and NegativeDelta.
  void validate() const;
};

// (1 - (x/R)^2)^3 on |x| <= R.
double default_bump(double x, double R);

struct SemilinearOptions {
  double t_max = 10.0;
  double dx = 1.0 / 200.0;
  double safety = 0.5;              // dt <= safety dx / t^l
  double blowup_threshold = 1e8;
  double min_dt = 1e-12;            // relative to max(1, t)
  double nonlinear_dt = 0.2;        // dt <= nonlinear_dt / sqrt(p sup|u|^{p-1})
  double record_dt = 0.0;           // 0 selects 4 safety dx; steps land on the record grid
  double margin = 1.0;              // domain half-width is R + A(t_max) + margin
  double support_level = 0.0;       // |u| > level sup|u| defines the numerical support; 0 selects dx^2
  double refine_rel = 1e-9;
  bool keep_records = false;        // store u and u_t at every record time
  std::vector<double> snapshot_times;
};

struct SeriesPoint {
  double t;
  double U;     // spatial integral of u
  double Np;    // integral of |u|^p
  double sup;
};

struct SemilinearSnapshot {
  double t;
  GridFunction u;   // x-grid for n = 1, r-grid from 0 for n >= 2
  GridFunction ut;
};

struct LifespanRecord {
  double eps = 0.0;
  Extended T_numeric = Extended::infinity();
  bool blew_up = false;
  double final_sup_norm = 0.0;
  double dt_min = 0.0;
  double dx = 0.0;
  double t_max = 0.0;
  std::size_t steps = 0;
};

struct SemilinearRun {
  LifespanRecord record;
  std::vector<SeriesPoint> series;           // on the record grid
  std::vector<SemilinearSnapshot> records;   // when keep_records
  std::vector<SemilinearSnapshot> snapshots; // at requested snapshot_times
  double U1p = 0.0;                          // discrete eps * integral of u1
  double support_excess = 0.0;  // max over records of (outermost |u| > support_level sup|u|) - (R + A(t))
};

// Variable-step leapfrog (second order on smoothly varying steps), centered
// second differences in space, radial Laplacian with the even reflection at
// r = 0 for n >= 2. Blow-up is the first time sup|u| >= threshold, refined by
// bisecting the last step; non-finite states and step underflow count as
// blow-up at the current time.
SemilinearRun solve_semilinear(const SemilinearProblem& prob, const SemilinearOptions& opt = {});

// Trapezoid integral, with the measure |S^{n-1}| r^{n-1} dr for n >= 2.
double spatial_average(const GridFunction& u, int n);

// max over interior record times of |U'' + mu U'/t + nu2 U/t^2 - Np| with
// three-point differences on the record grid (Np replaced by 0 for linear runs).
double u_ode_residual(const SemilinearRun& run, const SemilinearProblem& prob);

// max_t |U(t) - U_lin(t) - t^{-r1} int_1^t s^{r1-r2-1} int_1^s tau^{r2+1} Np dtau ds| / max_t |U|,
// with both integrals by cumulative trapezoid on the record grid.
double u_representation_check(const SemilinearRun& run, const SemilinearProblem& prob);

struct WeakTestFunction {
  std::function<double(double, double)> phi;    // (s, x) or (s, r)
  std::function<double(double, double)> phi_s;
  std::function<double(double, double)> phi_x;
};

// Max over record times t and test functions of |LHS - RHS| of the integral
// identity defining weak solutions, normalized by the largest sum of the
// absolute values of its terms. Needs a run with keep_records.
double weak_form_residual(const SemilinearRun& run, const SemilinearProblem& prob,
                          const std::vector<WeakTestFunction>& bank);

struct LifespanFit {
  double slope = 0.0;      // fitted E in ln T = E eps^{-p(p-1)} + c
  double intercept = 0.0;
  double residual = 0.0;   // root mean square of the fit
  std::size_t points = 0;
};

struct LifespanSweep {
  std::vector<LifespanRecord> records;  // in eps order
  bool complete = true;                 // false: some eps never blew up (SweepIncomplete)
  bool nonincreasing = true;
  bool strictly_decreasing = true;
  LifespanFit fit;
};

LifespanSweep lifespan_sweep(const SemilinearProblem& base, const std::vector<double>& eps_grid,
                             const SemilinearOptions& opt = {}, unsigned jobs = 1);

struct IterationFrameReport {
  Extended max_K = Extended::infinity();  // largest K for which the frame holds at every checked time
  std::size_t checked_times = 0;
  double worst_time = 0.0;
  std::vector<double> times;
  std::vector<double> lhs;   // ||u(t)||_p^p
  std::vector<double> rhs1;  // right side with K = 1
};

// Evaluates the right side of the iteration frame for ||u(t)||_p^p with K = 1 on
// every record time t with A(t) > R, from the recorded Np series. Needs n >= 2.
IterationFrameReport iteration_frame_check(const SemilinearRun& run, const SemilinearProblem& prob);

}  // namespace epdt
