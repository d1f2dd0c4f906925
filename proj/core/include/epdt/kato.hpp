#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epdt/model.hpp"

namespace epdt {

// G'' + mu G'/t + nu2 G/t^2 >= B t^{-q} |G|^p with G >= K t^a on [T0, T),
// critical balance a(p-1) = q-2.
struct KatoProblem {
  double mu = 0.0;
  double nu2 = 0.0;
  double p = 2.0;
  double q = 2.0;
  double a = 0.0;
  double B = 1.0;
  double K = 1.0;
  double T0 = 1.0;
  double G1 = 1.0;
  double G1p = 1.0;
  double beta = 0.25;

  // Throws InvalidArgument, NegativeDelta, InvalidCriticalCondition (a(p-1) != q-2
  // or a + r1 < 0) and ZeroDenominator (G'(1) + r1 G(1) = 0).
  void validate() const;
};

// Midpoint of the admissible interval (0, (p-1)/2).
double default_beta(double p) noexcept;

struct KatoThresholds {
  double T0_tilde;
  double K0;
  double T1;
};

KatoThresholds kato_thresholds(const KatoProblem& prob);

// Lower solution of the linear part: the delta > 0 and delta = 0 branch formulas.
double kato_G_lin(double mu, double nu2, double G1, double G1p, double t);

struct KatoSample {
  double t;
  double G;
  double dG;
  double d2G;
};

struct KatoSimOptions {
  double t_max = 1e6;
  double blowup_threshold = 1e12;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double refine_rel = 1e-9;  // bisection width of the crossing time, relative to t
  double min_step = 1e-12;   // step underflow, relative to max(1, t)
  double sample_dt = 0.0;    // > 0 forces steps onto a uniform output grid
};

struct KatoRun {
  Extended blowup_time = Extended::infinity();
  bool step_underflow = false;
  std::vector<KatoSample> steps;    // every accepted step, starting at t = 1
  std::vector<KatoSample> samples;  // uniform grid when sample_dt > 0
};

// Integrates the ODE taken with equality by an adaptive Dormand-Prince 5(4)
// scheme. Blow-up is the first crossing of |G| >= threshold, refined by
// bisection; step underflow counts as blow-up at the current time.
KatoRun kato_simulate(const KatoProblem& prob, const KatoSimOptions& opt = {});

enum class KatoVerdict { Checked, Inapplicable, OutsideHypothesis };
std::string to_string(KatoVerdict v);

struct KatoReport {
  KatoThresholds thresholds{};
  bool premise_holds = false;
  double K_supported = 0.0;  // min of G(t) t^{-a} over trajectory points with t >= T0
  Extended blowup_time = Extended::infinity();
  bool bound_satisfied = false;  // blowup_time <= 2 T1
  KatoVerdict verdict = KatoVerdict::Inapplicable;
};

KatoReport kato_lemma_check(const KatoProblem& prob, const KatoSimOptions& opt = {});

// Max over interior uniform samples of |t^{-(r2+1)} (t^{r2+1-r1} F')' - (G'' + mu G'/t + nu2 G/t^2)|,
// with F = t^{r1} G differentiated by centered differences.
double factorization_identity_check(double mu, double nu2, const std::vector<KatoSample>& samples);

struct KatoDrawRanges {
  double mu_max = 4.0;
  double p_min = 1.3;
  double p_max = 4.0;
  double a_span = 1.5;  // a drawn from [max(-r1, -2/(p-1)), that + a_span]
  double B_min = 0.2;
  double B_max = 5.0;
  double G_max = 2.0;
};

struct KatoDraw {
  std::size_t index = 0;
  KatoProblem problem;
  bool applicable = false;  // blew up within t_max and a premise start T0 exists
  KatoReport report;
};

// One random admissible problem per index; K is set to K0 and T0 to the
// earliest trajectory time after which G >= K0 t^a holds. Draw i depends only
// on (seed, i).
KatoDraw kato_draw(std::uint64_t seed, std::size_t index, const KatoDrawRanges& ranges = {},
                   const KatoSimOptions& opt = {});

std::vector<KatoDraw> kato_monte_carlo(std::uint64_t seed, std::size_t draws, unsigned jobs = 1,
                                       const KatoDrawRanges& ranges = {}, const KatoSimOptions& opt = {});

}  // namespace epdt
