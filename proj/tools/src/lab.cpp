#include "lab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

#include "epdt/error.hpp"
#include "epdt/iteration.hpp"
#include "epdt/kato.hpp"
#include "epdt/linear1d.hpp"
#include "epdt/model.hpp"
#include "epdt/radon.hpp"
#include "epdt/semilinear.hpp"

namespace epdt::lab {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex16(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return s;
}

std::uint64_t hash_tree(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), dir));
  std::sort(files.begin(), files.end());
  std::uint64_t h = fnv1a("");
  for (const auto& f : files) {
    h = fnv1a(f.generic_string(), h);
    h = fnv1a(std::string_view("\0", 1), h);
    std::ifstream in(dir / f, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    h = fnv1a(buf.str(), h);
  }
  return h;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v + 0.0);
  return std::string(buf, r.ptr);
}

namespace {

const json& empty_object() {
  static const json e = json::object();
  return e;
}

// Reads one config block, recording every key with its effective value so the
// resolved block can be hashed and echoed. Unread keys are rejected.
class Block {
 public:
  Block(const json& root, std::string name) : name_(std::move(name)) {
    in_ = root.contains(name_) ? &root.at(name_) : &empty_object();
    if (!in_->is_object()) throw Error(ErrorCode::InvalidArgument, name_ + " must be an object");
  }

  template <class T>
  T get(const std::string& key, T def) {
    T v = def;
    if (in_->contains(key)) {
      try {
        v = in_->at(key).get<T>();
      } catch (const json::exception&) {
        throw Error(ErrorCode::InvalidArgument, name_ + "." + key + " has the wrong type");
      }
    }
    out_[key] = v;
    return v;
  }

  json finish() const {
    for (auto it = in_->begin(); it != in_->end(); ++it)
      if (!out_.contains(it.key())) throw Error(ErrorCode::InvalidArgument, name_ + ": unknown key " + it.key());
    return out_;
  }

 private:
  std::string name_;
  const json* in_;
  json out_ = json::object();
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

json num(double v) { return std::isfinite(v) ? json(v + 0.0) : json(format_number(v)); }
json num(const Extended& e) { return e.is_finite() ? json(e.value() + 0.0) : json("+inf"); }

class Table {
 public:
  explicit Table(std::vector<std::string> header) { line(header); }

  template <class... Ts>
  void row(const Ts&... cells) {
    std::vector<std::string> v{cell(cells)...};
    line(v);
  }

  const std::string& str() const { return s_; }

 private:
  static std::string cell(double v) { return format_number(v); }
  static std::string cell(const Extended& e) { return e.is_finite() ? format_number(e.value()) : "+inf"; }
  static std::string cell(bool b) { return b ? "1" : "0"; }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(const std::string& s) { return s; }

  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s_ += ',';
      s_ += cells[i];
    }
    s_ += '\n';
  }
  std::string s_;
};

struct Context {
  std::string command;
  fs::path out_dir;
  std::string slug;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::vector<std::string> outputs;

  std::string stem() const {
    std::string c = command;
    std::replace(c.begin(), c.end(), '-', '_');
    return c + "_" + slug;
  }

  void write(const std::string& suffix, const std::string& ext, const std::string& content) {
    const std::string name = stem() + (suffix.empty() ? "" : "_" + suffix) + "." + ext;
    std::ofstream f(out_dir / name, std::ios::binary | std::ios::trunc);
    f << content;
    f.close();
    if (!f) throw std::runtime_error("cannot write " + (out_dir / name).string());
    outputs.push_back(name);
  }
};

struct Outcome {
  json summary;
  bool partial = false;
};

struct Prepared {
  json resolved;  // effective settings of every block the command reads
  bool uses_seed = false;
  std::function<Outcome(Context&)> compute;
};

ModelParams read_model(const json& root, json& resolved) {
  Block b(root, "model");
  ModelParams pm;
  pm.ell = b.get("ell", 0.0);
  pm.mu = b.get("mu", 0.0);
  pm.nu2 = b.get("nu2", 0.0);
  pm.n = b.get("n", 3);
  pm.R = b.get("R", 1.0);
  resolved["model"] = b.finish();
  return pm;
}

std::vector<double> read_grid(Block& b, const std::string& key, double lo, double hi, int count) {
  auto list = b.get(key, std::vector<double>{});
  const double a = b.get(key + "_min", lo), z = b.get(key + "_max", hi);
  const int m = b.get(key + "_count", count);
  if (!list.empty()) return list;
  require(m >= 1, key + "_count must be >= 1");
  require(std::isfinite(a) && std::isfinite(z) && z >= a, key + " range must satisfy min <= max");
  for (int i = 0; i < m; ++i) list.push_back(m == 1 ? a : a + (z - a) * i / (m - 1));
  return list;
}

double bump_profile(double x, double R) { return default_bump(x, R); }

Prepared prepare_exponents(const json& root) {
  Prepared pr;
  const ModelParams pm = read_model(root, pr.resolved);
  pm.validate_admissible();
  pr.compute = [pm](Context&) {
    const SpectralConstants s = spectral_constants(pm);
    json j;
    j["delta"] = s.delta;
    j["r1"] = num(s.r1);
    j["r2"] = s.r2;
    j["gamma"] = s.gamma;
    j["c"] = s.c;
    j["p_strauss"] = num(s.p_strauss_shifted);
    j["p_fujita"] = num(s.p_fujita_shifted);
    j["p_blowup_sup"] = num(s.p_blowup_sup);
    return Outcome{j};
  };
  return pr;
}

Prepared prepare_linear(const json& root) {
  Prepared pr;
  ModelParams pm = read_model(root, pr.resolved);
  Block b(root, "linear");
  const double t = b.get("t", 3.0);
  const double dx = b.get("dx", 1.0 / 400.0);
  const double tol = b.get("tolerance", 2e-3);
  const int stride = b.get("stride", 4);
  const double a0 = b.get("u0_amp", 1.0), a1 = b.get("u1_amp", 1.0);
  pr.resolved["linear"] = b.finish();
  require(t > 1.0 && std::isfinite(t), "linear.t must exceed 1");
  require(dx > 0.0 && dx < 1.0, "linear.dx must lie in (0, 1)");
  require(stride >= 1, "linear.stride must be >= 1");
  require(tol > 0.0, "linear.tolerance must be positive");
  pm.n = 1;
  const double R = pm.R;
  LinearProblem lp{pm, [a0, R](double x) { return a0 * bump_profile(x, R); },
                   [a1, R](double x) { return a1 * bump_profile(x, R); }, {}, t};
  lp.validate();
  pr.compute = [lp, t, dx, tol, stride](Context& ctx) {
    FdOptions fo;
    fo.dx = dx;
    const FdSolution fd = solve_fd_oracle(lp, fo);
    const GridFunction& u = fd.snapshots.back();
    Table tab({"x", "representation", "fd"});
    double err = 0.0, scale = 0.0;
    std::size_t points = 0;
    for (std::size_t i = 0; i < u.size(); i += static_cast<std::size_t>(stride)) {
      const double x = u.x_at(i);
      const double r = solve_representation(lp, t, x);
      err = std::max(err, std::fabs(r - u.values[i]));
      scale = std::max(scale, std::fabs(r));
      tab.row(x, r, u.values[i]);
      ++points;
    }
    ctx.write("", "csv", tab.str());
    const double rel = scale > 0.0 ? err / scale : err;
    json j;
    j["rel_linf"] = rel;
    j["abs_linf"] = err;
    j["tolerance"] = tol;
    j["pass"] = rel <= tol;
    j["points"] = points;
    j["fd_steps"] = fd.steps;
    j["fd_dt"] = fd.dt;
    return Outcome{j};
  };
  return pr;
}

Prepared prepare_kato(const json& root) {
  Prepared pr;
  pr.uses_seed = true;
  Block b(root, "kato");
  const int draws = b.get("draws", 120);
  KatoSimOptions opt;
  opt.t_max = b.get("t_max", opt.t_max);
  opt.blowup_threshold = b.get("blowup_threshold", opt.blowup_threshold);
  opt.rel_tol = b.get("rel_tol", opt.rel_tol);
  opt.abs_tol = b.get("abs_tol", opt.abs_tol);
  KatoDrawRanges rg;
  rg.mu_max = b.get("mu_max", rg.mu_max);
  rg.p_min = b.get("p_min", rg.p_min);
  rg.p_max = b.get("p_max", rg.p_max);
  rg.a_span = b.get("a_span", rg.a_span);
  rg.B_min = b.get("B_min", rg.B_min);
  rg.B_max = b.get("B_max", rg.B_max);
  rg.G_max = b.get("G_max", rg.G_max);
  pr.resolved["kato"] = b.finish();
  require(draws >= 1, "kato.draws must be >= 1");
  require(opt.t_max > 1.0 && opt.blowup_threshold > 0.0, "kato.t_max must exceed 1 and the threshold be positive");
  require(opt.rel_tol > 0.0 && opt.abs_tol > 0.0, "kato tolerances must be positive");
  require(rg.mu_max >= 0.0, "kato.mu_max must be >= 0");
  require(rg.p_min > 1.0 && rg.p_max > rg.p_min, "kato needs 1 < p_min < p_max");
  require(rg.a_span > 0.0, "kato.a_span must be positive");
  require(rg.B_min > 0.0 && rg.B_max > rg.B_min, "kato needs 0 < B_min < B_max");
  require(rg.G_max > 0.0, "kato.G_max must be positive");
  pr.compute = [draws, opt, rg](Context& ctx) {
    const auto all = kato_monte_carlo(ctx.seed, static_cast<std::size_t>(draws), ctx.jobs, rg, opt);
    Table tab({"index", "mu", "nu2", "p", "q", "a", "B", "K", "T0", "G1", "G1p", "beta", "T0_tilde", "K0", "T1",
               "blowup_time", "applicable", "bound_satisfied", "verdict"});
    std::size_t applicable = 0, satisfied = 0;
    for (const auto& d : all) {
      const auto& p = d.problem;
      const auto& r = d.report;
      tab.row(d.index, p.mu, p.nu2, p.p, p.q, p.a, p.B, p.K, p.T0, p.G1, p.G1p, p.beta, r.thresholds.T0_tilde,
              r.thresholds.K0, r.thresholds.T1, r.blowup_time, d.applicable, r.bound_satisfied, to_string(r.verdict));
      if (d.applicable) {
        ++applicable;
        if (r.bound_satisfied) ++satisfied;
      }
    }
    ctx.write("draws", "csv", tab.str());
    json j;
    j["draws"] = all.size();
    j["applicable"] = applicable;
    j["bound_satisfied"] = satisfied;
    j["all_bounded"] = applicable > 0 && satisfied == applicable;
    return Outcome{j};
  };
  return pr;
}

Prepared prepare_radon(const json& root) {
  Prepared pr;
  const ModelParams pm = read_model(root, pr.resolved);
  Block b(root, "radon");
  const std::string profile = b.get("profile", std::string("bump"));
  const double dx = b.get("dx", 1e-3);
  std::vector<double> rhos = read_grid(b, "rho", 0.0, 0.9 * pm.R, 10);
  pr.resolved["radon"] = b.finish();
  require(profile == "bump" || profile == "ball", "radon.profile must be \"bump\" or \"ball\"");
  require(dx > 0.0 && dx < pm.R, "radon.dx must lie in (0, R)");
  pm.validate();
  const int n = pm.n;
  const double R = pm.R;
  const std::size_t count = static_cast<std::size_t>(std::llround(R / dx)) + 1;
  RadialFunction f{sample([R](double r) { return bump_profile(r, R); }, 0.0, R / static_cast<double>(count - 1), count, R), n};
  f.validate();
  pr.compute = [f, profile, rhos, n, R](Context& ctx) {
    json j;
    if (profile == "ball") {
      const double k = n - 1.0;
      const double omega = std::pow(boost::math::constants::pi<double>(), k / 2) / boost::math::tgamma(k / 2 + 1);
      Table tab({"rho", "radon", "exact"});
      double worst = 0.0;
      for (double rho : rhos) {
        const double v = radon_radial([](double) { return 1.0; }, R, n, rho);
        const double e = std::fabs(rho) < R ? omega * std::pow(R * R - rho * rho, k / 2) : 0.0;
        worst = std::max(worst, std::fabs(v - e));
        tab.row(rho, v, e);
      }
      ctx.write("", "csv", tab.str());
      j["max_abs_error"] = worst;
      return Outcome{j};
    }
    const RadialFunction lap = radial_laplacian(f);
    const double h = f.samples.dx;
    Table tab({"rho", "radon", "radon_laplacian", "d2_radon"});
    for (double rho : rhos) {
      const double c = radon_radial(f, rho);
      const double d2 = (radon_radial(f, rho + h) - 2 * c + radon_radial(f, rho - h)) / (h * h);
      tab.row(rho, c, radon_radial(lap, rho), d2);
    }
    ctx.write("", "csv", tab.str());
    j["radon_constant"] = radon_constant(n);
    j["laplacian_identity_residual"] = radon_laplacian_identity_check(f, rhos);
    return Outcome{j};
  };
  return pr;
}

Prepared prepare_sweep(const json& root) {
  Prepared pr;
  const ModelParams pm = read_model(root, pr.resolved);
  Block b(root, "sweep");
  double p = b.get("p", 0.0);
  const std::vector<double> eps = read_grid(b, "eps", 0.4, 1.6, 8);
  SemilinearOptions opt;
  opt.dx = b.get("dx", 0.02);
  opt.t_max = b.get("t_max", 1000.0);
  opt.record_dt = b.get("record_dt", 0.5);
  opt.blowup_threshold = b.get("blowup_threshold", opt.blowup_threshold);
  opt.safety = b.get("safety", opt.safety);
  pr.resolved["sweep"] = b.finish();
  if (p == 0.0) {
    pm.validate_admissible();
    const Extended ps = strauss_exponent_shifted(pm);
    require(ps.is_finite(), "the critical exponent is +inf for this model; set sweep.p");
    p = ps.value();
  }
  for (double e : eps) require(e > 0.0 && std::isfinite(e), "sweep eps values must be positive");
  require(opt.dx > 0.0 && opt.t_max > 1.0 && opt.record_dt >= 0.0, "sweep needs dx > 0, t_max > 1, record_dt >= 0");
  require(opt.safety > 0.0 && opt.safety <= 1.0 && opt.blowup_threshold > 0.0,
          "sweep needs 0 < safety <= 1 and a positive threshold");
  const double R = pm.R;
  SemilinearProblem base{pm, p, eps.front(), [R](double x) { return bump_profile(x, R); },
                         [R](double x) { return bump_profile(x, R); }, true, true};
  base.validate();
  pr.compute = [base, eps, opt](Context& ctx) {
    const LifespanSweep sw = lifespan_sweep(base, eps, opt, ctx.jobs);
    Table tab({"eps", "T", "blew_up", "dt_min", "steps", "final_sup_norm"});
    for (const auto& r : sw.records) tab.row(r.eps, r.T_numeric, r.blew_up, r.dt_min, r.steps, r.final_sup_norm);
    ctx.write("lifespan", "csv", tab.str());
    json fit;
    fit["p"] = base.p;
    fit["slope"] = sw.fit.slope;
    fit["intercept"] = sw.fit.intercept;
    fit["residual"] = sw.fit.residual;
    fit["points"] = sw.fit.points;
    fit["complete"] = sw.complete;
    fit["nonincreasing"] = sw.nonincreasing;
    fit["strictly_decreasing"] = sw.strictly_decreasing;
    ctx.write("fit", "json", fit.dump(2) + "\n");
    Outcome o{fit, !sw.complete};
    if (!sw.complete) o.summary["error"] = {{"code", to_string(ErrorCode::SweepIncomplete)},
                                            {"message", "some eps did not blow up before t_max"}};
    return o;
  };
  return pr;
}

Prepared prepare_iterate(const json& root) {
  Prepared pr;
  IterationConfig cfg;
  cfg.params = read_model(root, pr.resolved);
  Block b(root, "iteration");
  cfg.p = b.get("p", 0.0);
  cfg.theta = b.get("theta", cfg.theta);
  cfg.a0 = b.get("a0", cfg.a0);
  cfg.alpha0 = b.get("alpha0", cfg.alpha0);
  cfg.T2 = b.get("T2", cfg.T2);
  cfg.D = b.get("D", cfg.D);
  cfg.B0 = b.get("B0", cfg.B0);
  cfg.Q = b.get("Q", cfg.Q);
  cfg.M = b.get("M", cfg.M);
  const int j_max = b.get("j_max", 30);
  const double K0 = b.get("K0", 0.0);
  const std::vector<double> eps = read_grid(b, "eps", 0.5, 2.0, 16);
  pr.resolved["iteration"] = b.finish();
  require(j_max >= 1 && j_max <= 60, "iteration.j_max must lie in [1, 60]");
  require(K0 >= 0.0, "iteration.K0 must be >= 0");
  for (double e : eps) require(e > 0.0 && std::isfinite(e), "iteration eps values must be positive");
  cfg.validate();
  pr.compute = [cfg, j_max, K0, eps](Context& ctx) {
    const auto table = sequence_table(cfg, static_cast<std::size_t>(j_max));
    Table seq({"j", "a", "alpha", "log_B", "beta", "beta_tilde", "sigma", "sigma_dominant"});
    double ea = 0.0, eal = 0.0, eb = 0.0;
    auto rel = [](double x, double y) { return std::fabs(x - y) / std::max({std::fabs(x), std::fabs(y), 1.0}); };
    for (const auto& s : table) {
      seq.row(s.j, s.a, s.alpha, s.log_B, s.beta, s.beta_tilde, s.sigma, sigma_terms(s.a, s.alpha, cfg).dominant + 1);
      ea = std::max(ea, rel(s.a, a_closed_form(s.j, cfg)));
      eal = std::max(eal, rel(s.alpha, alpha_closed_form(s.j, cfg)));
      if (s.j <= 25) eb = std::max(eb, rel(s.log_B, log_B_closed_form(s.j, cfg)));
    }
    ctx.write("sequences", "csv", seq.str());
    Table life({"eps", "T0", "lifespan_bound"});
    for (double e : eps) life.row(e, T0_of_eps(e, cfg), lifespan_bound(e, cfg));
    ctx.write("lifespan", "csv", life.str());
    const DerivedConstants d = derived_constants(cfg);
    json j;
    j["p"] = cfg.exponent();
    j["log_E0"] = d.log_E0;
    j["log_E1"] = d.log_E1;
    j["E2"] = d.E2;
    j["log_N"] = d.log_N;
    j["max_rel_error_a"] = ea;
    j["max_rel_error_alpha"] = eal;
    j["max_rel_error_log_B"] = eb;
    const auto j0 = find_j0(cfg, static_cast<std::size_t>(j_max));
    j["j0"] = j0 ? json(*j0) : json(nullptr);
    if (K0 > 0.0) {
      const auto J = find_J(cfg, K0, static_cast<std::size_t>(j_max) - 1);
      j["J"] = J ? json(*J) : json(nullptr);
    }
    j["constants_note"] = "j0 and J are relative to the configured D, B0, Q, M";
    return Outcome{j};
  };
  return pr;
}

const std::map<std::string, Prepared (*)(const json&)>& commands() {
  static const std::map<std::string, Prepared (*)(const json&)> m{
      {"exponents", prepare_exponents}, {"linear", prepare_linear},       {"kato", prepare_kato},
      {"radon", prepare_radon},         {"blowup-sweep", prepare_sweep}, {"iterate", prepare_iterate}};
  return m;
}

json error_object(const std::string& code, const std::string& message, const std::string& stage) {
  return {{"error", {{"code", code}, {"message", message}, {"stage", stage}}}};
}

int fail(std::ostream& out, Exit code, const std::string& err, const std::string& message, const std::string& stage) {
  json e = error_object(err, message, stage);
  e["exit_code"] = static_cast<int>(code);
  out << e.dump(2) << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Experiments for the generalized Euler-Poisson-Darboux-Tricomi equation", "epdt_lab"};
  app.fallthrough();
  app.require_subcommand(1);
  std::string config_path, out_opt;
  std::optional<std::uint64_t> seed_opt;
  unsigned jobs = 1;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_opt, "output directory");
  app.add_option("--seed", seed_opt, "seed for Monte-Carlo draws");
  app.add_option("--jobs", jobs, "worker threads for sweeps")->check(CLI::Range(1u, 1024u));
  for (const auto& [name, _] : commands()) {
    (void)_;
    app.add_subcommand(name);
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return Ok;
  } catch (const CLI::ParseError& e) {
    return fail(out, ValidationFailure, "InvalidArgument", e.what(), "arguments");
  }
  const std::string command = app.get_subcommands().front()->get_name();

  Context ctx;
  ctx.command = command;
  ctx.jobs = jobs;
  Prepared prep;
  json root = json::object();
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      try {
        root = json::parse(in);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
      }
      require(root.is_object(), "config must be a JSON object");
    }
    static const std::vector<std::string> top{"config_version", "output_dir", "seed",  "model", "linear",
                                              "kato",           "radon",      "sweep", "iteration"};
    for (auto it = root.begin(); it != root.end(); ++it)
      require(std::find(top.begin(), top.end(), it.key()) != top.end(), "unknown top-level key " + it.key());
    if (root.contains("config_version"))
      require(root["config_version"].is_number_integer() && root["config_version"].get<int>() == config_version,
              "config_version must be " + std::to_string(config_version));
    if (root.contains("output_dir")) require(root["output_dir"].is_string(), "output_dir must be a string");
    if (root.contains("seed")) require(root["seed"].is_number_unsigned(), "seed must be a nonnegative integer");

    prep = commands().at(command)(root);

    ctx.seed = seed_opt ? *seed_opt : root.value("seed", std::uint64_t{20240611});
    if (!out_opt.empty()) {
      ctx.out_dir = out_opt;
    } else if (const char* env = std::getenv("EPDT_LAB_OUT"); env && *env) {
      ctx.out_dir = env;
    } else {
      ctx.out_dir = root.value("output_dir", std::string("."));
    }
  } catch (const Error& e) {
    return fail(out, ValidationFailure, std::string(to_string(e.code())), e.what(), "validation");
  }

  json resolved = prep.resolved;
  resolved["config_version"] = config_version;
  resolved["command"] = command;
  if (prep.uses_seed) resolved["seed"] = ctx.seed;
  ctx.slug = hex16(fnv1a(resolved.dump()));

  Outcome o;
  try {
    fs::create_directories(ctx.out_dir);
    ctx.write("config", "json", resolved.dump(2) + "\n");
    o = prep.compute(ctx);
  } catch (const Error& e) {
    return fail(out, NumericFailure, std::string(to_string(e.code())), e.what(), "compute");
  } catch (const std::exception& e) {
    return fail(out, NumericFailure, "IOError", e.what(), "compute");
  }

  json summary;
  summary["config_version"] = config_version;
  summary["command"] = command;
  summary["slug"] = ctx.slug;
  summary["partial"] = o.partial;
  summary["result"] = o.summary;
  ctx.outputs.push_back(ctx.stem() + ".json");
  summary["outputs"] = ctx.outputs;
  try {
    ctx.outputs.pop_back();
    ctx.write("", "json", summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    return fail(out, NumericFailure, "IOError", e.what(), "compute");
  }
  out << summary.dump(2) << '\n';
  return o.partial ? NumericFailure : Ok;
}

}  // namespace epdt::lab
