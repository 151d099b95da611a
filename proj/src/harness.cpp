#include "chemokin/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "chemokin/error.hpp"
#include "chemokin/io.hpp"
#include "chemokin/macro.hpp"
#include "chemokin/metrics.hpp"
#include "chemokin/rng.hpp"
#include "json.hpp"

namespace chemokin {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Writes files into the output directory and keeps the report in step.
class Output {
 public:
  Output(const ExperimentConfig& cfg, const fs::path& dir) : cfg_(cfg), dir_(dir), hash_(config_hash(cfg)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
    write_text_file(dir_ / "config.resolved.json", resolved_config_json(cfg_));
    report.files.push_back("config.resolved.json");
  }

  const std::string& hash() const { return hash_; }

  void table(const std::string& name, const ResultTable& t) {
    t.write_csv(dir_ / name, hash_);
    report.files.push_back(name);
  }

  void summary(const std::string& name, json body) {
    body["config_hash"] = hash_;
    body["config"] = json::parse(resolved_config_json(cfg_));
    body["violations"] = report.violations;
    body["notes"] = report.notes;
    report.summary_json = body.dump(2) + "\n";
    write_text_file(dir_ / name, report.summary_json);
    report.files.push_back(name);
  }

  RunReport report;

 private:
  const ExperimentConfig& cfg_;
  fs::path dir_;
  std::string hash_;
};

// JSON has no NaN or infinity.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string fmt(double v) { return format_number(v); }

std::vector<double> gaussian_profile(int n, double L, double center, double sigma) {
  std::vector<double> r(static_cast<std::size_t>(n));
  const double dx = L / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    // Periodic distance to the centre.
    double x = (i + 0.5) * dx - center;
    x -= L * std::round(x / L);
    r[static_cast<std::size_t>(i)] = std::exp(-0.5 * x * x / (sigma * sigma));
    s += r[static_cast<std::size_t>(i)] * dx;
  }
  for (auto& v : r) v /= s;
  return r;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

PhysParams with_kR(PhysParams p, double kR) {
  p.kR = kR;
  p.validate();
  return p;
}

}  // namespace

HistogramSpec support_histogram(const ClosureProfile& prof, int bins, int x_bins) {
  HistogramSpec h;
  h.bins = bins;
  h.x_bins = x_bins;
  if (!prof.is_delta()) {
    h.lo = std::max(0.0, prof.support_lo());
    h.hi = std::min(1.0, prof.support_hi());
  }
  return h;
}

HistogramComparison compare_histogram(const EnsembleStats& st, const ClosureProfile& prof) {
  HistogramComparison c;
  c.edges = st.bin_edges();
  c.mc_plus = st.mass_plus();
  c.mc_minus = st.mass_minus();
  const std::size_t nb = c.mc_plus.size();
  std::vector<double> Fp(nb + 1), Fm(nb + 1), Gp(nb + 1), Gm(nb + 1);
  // MC mass below the histogram range cannot be located; it is attributed to
  // the lower edge so that it still counts against the match.
  Fp[0] = Fm[0] = 0.0;
  for (std::size_t k = 0; k <= nb; ++k) {
    Gp[k] = prof.cumulative(Direction::Plus, c.edges[k]);
    Gm[k] = prof.cumulative(Direction::Minus, c.edges[k]);
  }
  for (std::size_t k = 0; k < nb; ++k) {
    c.closure_plus.push_back(Gp[k + 1] - Gp[k]);
    c.closure_minus.push_back(Gm[k + 1] - Gm[k]);
    Fp[k + 1] = Fp[k] + c.mc_plus[k];
    Fm[k + 1] = Fm[k] + c.mc_minus[k];
  }
  c.l1_plus = 2.0 * l1_mass_distance(c.mc_plus, c.closure_plus);
  c.l1_minus = 2.0 * l1_mass_distance(c.mc_minus, c.closure_minus);
  // Outside mass of the closure (edges inside the support) also counts.
  c.l1_plus += 2.0 * (Gp[0] + (prof.direction_mass(Direction::Plus) - Gp[nb]));
  c.l1_minus += 2.0 * (Gm[0] + (prof.direction_mass(Direction::Minus) - Gm[nb]));
  const double op = static_cast<double>(st.outside_plus), om = static_cast<double>(st.outside_minus);
  const double n = static_cast<double>(std::max<std::uint64_t>(1, st.agent_samples));
  c.l1_plus += 2.0 * op / n;
  c.l1_minus += 2.0 * om / n;
  for (auto* F : {&Fp, &Fm, &Gp, &Gm}) {
    for (auto& v : *F) v *= 2.0;
  }
  c.w1_plus = integrate_abs_difference(c.edges, Fp, Gp);
  c.w1_minus = integrate_abs_difference(c.edges, Fm, Gm);
  return c;
}

Environment agent_environment(const ExperimentConfig& cfg, const PhysParams& p, double G) {
  if (!std::isnan(cfg.env.x_min)) {
    Environment env;
    env.G = G;
    env.x_min = cfg.env.x_min;
    env.x_max = cfg.env.x_max;
    env.validate();
    return env;
  }
  return make_environment(p, G, cfg.env.domain_length);
}

bool drift_agrees(double v_d, double stderr_v, double kappa) {
  return std::abs(v_d - kappa) <= std::max(0.05 * std::abs(kappa), 3.0 * stderr_v);
}

AgentRun run_agents(const ExperimentConfig& cfg, const PhysParams& p, double G, std::uint64_t seed, unsigned threads,
                    std::vector<DriftSample>* series) {
  const auto& an = cfg.agents;
  const auto prof = ClosureProfile::make(p, G);
  AgentOptions o;
  o.count = an.count;
  o.dt = an.dt;
  o.seed = seed;
  o.threads = threads;
  o.init_activity_lo = an.init_activity_lo;
  o.init_activity_hi = an.init_activity_hi;
  o.series_stride = an.series_stride;
  Ensemble ens(p, agent_environment(cfg, p, G), o);
  SteadyStateOptions so;
  so.window = an.window;
  so.tol = an.tol;
  so.var_tol = an.var_tol;
  so.max_time = an.max_time;
  so.sample_steps = an.sample_steps;
  so.sample_every = an.sample_every;
  so.batches = an.batches;
  so.hist = support_histogram(prof, an.bins, an.x_bins);
  AgentRun run;
  run.kappa = prof.drift_velocity();
  try {
    run.result = run_to_steady_state(ens, so);
  } catch (const TimeoutError& e) {
    run.result = e.partial();
    run.timed_out = true;
  }
  if (series) *series = ens.drift_series();
  return run;
}

double convergence_order(const std::vector<double>& eps, const std::vector<double>& w) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < eps.size() && i < w.size(); ++i) {
    if (!(w[i] > 0.0) || !(eps[i] > 0.0)) continue;
    const double x = std::log(eps[i]), y = std::log(w[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double den = n * sxx - sx * sx;
  if (n < 2 || !(std::abs(den) > 0.0)) return std::nan("");
  return (n * sxy - sx * sy) / den;
}

KineticRun run_kinetic(const ExperimentConfig& cfg, double eps) {
  const auto& k = cfg.kinetic;
  const PhysParams& p = cfg.params;
  const bool case2 = k.scaling == "case2";
  KineticRun run;
  run.eps = eps;
  run.G = case2 ? case2_gradient(eps, k.mu, k.G_mu) : cfg.env.G_list.front();
  const KineticScaling sc = case2 ? KineticScaling::case2(eps, k.mu) : KineticScaling::case1(eps);

  Environment env;
  env.G = run.G;
  env.x_min = 0.0;
  env.x_max = k.domain_length;
  KineticOptions o;
  o.x_cells = k.x_cells;
  o.a_cells = k.a_cells;
  o.u_span = k.u_span;
  o.stretch = k.stretch;
  o.margin = k.margin;
  o.threads = std::max(1u, cfg.threads);
  KineticField f(p, env, sc, o);

  std::vector<double> rho0;
  if (k.bump_width > 0.0) {
    rho0 = gaussian_profile(k.x_cells, k.domain_length, k.bump_center * k.domain_length, k.bump_width);
  } else {
    rho0.assign(static_cast<std::size_t>(k.x_cells), 1.0 / k.domain_length);
  }
  const auto prof = ClosureProfile::make(p, run.G);
  if (k.init == "closure" && !prof.is_delta()) {
    f.fill_from_closure(prof, rho0);
  } else {
    f.fill_point(k.init == "closure" ? 0.5 : k.init_a, rho0);
  }
  rho0 = f.density();

  // Courant number 1: the transport step is then an exact shift.
  const double dt = f.max_stable_dt();
  if (k.steady) {
    const auto r = run_kinetic_to_steady(f, dt, k.steady_tol, k.max_time);
    run.converged = r.converged;
  } else {
    const long steps = std::lround(k.T / dt);
    for (long s = 0; s < steps; ++s) f.advance(dt);
  }
  run.time = f.time();
  run.w1_to_closure = f.w1_to_closure(prof);
  run.mass = f.total_mass();
  run.min_value = f.min_value();
  run.marginal = f.marginal_activity();
  run.rho = f.density();
  for (int i = 0; i < f.x_cells(); ++i) run.x.push_back(f.x_center(i));

  // Matching macroscopic equation in the same scaled units.
  if (case2) {
    run.macro_kappa = case2_coefficients(p, k.G_mu).kappa3;
    run.macro_D0 = k.mu == 1.0 ? diffusion_coefficient(p) : 0.0;
  } else {
    run.macro_kappa = prof.drift_velocity();
    run.macro_D0 = 0.0;
  }
  run.rho_macro = solve_keller_segel(rho0, 0.0, k.domain_length, run.macro_D0, run.macro_kappa, run.time);
  run.l1_to_macro = l1_density_distance(run.rho, run.rho_macro, f.dx());
  return run;
}

RunReport cmd_closure(const ExperimentConfig& cfg, const fs::path& dir) {
  Output out(cfg, dir);
  const PhysParams& p = cfg.params;
  ResultTable summary({{"G", "1/um"},
                       {"g", "1"},
                       {"regime", "-"},
                       {"a1", "1"},
                       {"a2", "1"},
                       {"c0", "1"},
                       {"theta_left", "1"},
                       {"theta_right", "1"},
                       {"kappa", "um/s"},
                       {"kappa3", "um/s"},
                       {"D0", "um^2/s"}});
  json points = json::array();
  const auto c2d = diffusion_coefficient(p);
  for (std::size_t k = 0; k < cfg.env.G_list.size(); ++k) {
    const double G = cfg.env.G_list[k];
    const auto prof = ClosureProfile::make(p, G);
    const auto gn = gradient_number(p, G);
    const std::string regime = to_string(classify_regime(gn.g));
    double tl = std::nan(""), tr = std::nan("");
    if (!prof.is_delta()) {
      tl = prof.exponents().left;
      tr = prof.exponents().right;
      ResultTable curve({{"a", "1"}, {"density_plus", "1"}, {"density_minus", "1"}});
      for (double a : prof.grid()) {
        const double dp = prof.density(Direction::Plus, a), dm = prof.density(Direction::Minus, a);
        if (std::isfinite(dp) && std::isfinite(dm)) curve.add_row({a, dp, dm});
      }
      out.table("closure_profile_" + std::to_string(k) + ".csv", curve);
    }
    const double kappa = prof.drift_velocity();
    const double kappa3 = case2_coefficients(p, G).kappa3;
    summary.add_row({G, gn.g, regime, gn.a1, gn.a2, prof.is_delta() ? std::nan("") : prof.c0(), tl, tr, kappa, kappa3,
                     c2d});
    points.push_back({{"G", G},
                      {"g", gn.g},
                      {"regime", regime},
                      {"a1", gn.a1},
                      {"a2", gn.a2},
                      {"c0", prof.is_delta() ? json(nullptr) : json(prof.c0())},
                      {"theta_left", num(tl)},
                      {"theta_right", num(tr)},
                      {"kappa", kappa},
                      {"kappa3", kappa3},
                      {"D0", c2d},
                      {"profile", prof.is_delta() ? json(nullptr)
                                                  : json("closure_profile_" + std::to_string(k) + ".csv")}});
  }
  out.table("closure_summary.csv", summary);
  out.summary("closure_summary.json", {{"command", "closure"}, {"points", points}});
  return out.report;
}

RunReport cmd_agents(const ExperimentConfig& cfg, const fs::path& dir) {
  Output out(cfg, dir);
  const double G = cfg.env.G_list.front();
  std::vector<DriftSample> series;
  const auto run = run_agents(cfg, cfg.params, G, cfg.seed, cfg.threads, &series);
  const auto& r = run.result;

  ResultTable drift({{"t", "s"}, {"v_d", "um/s"}, {"N_plus", "1"}, {"N_minus", "1"}});
  for (const auto& s : series) drift.add_row({s.t, s.v_d, s.n_plus, s.n_minus});
  out.table("agents_drift.csv", drift);

  ResultTable hist({{"a_bin_center", "1"}, {"density_plus", "1"}, {"density_minus", "1"}});
  if (r.stats.agent_samples > 0) {
    const auto c = r.stats.bin_centers();
    const auto dp = r.stats.density_plus(), dm = r.stats.density_minus();
    for (std::size_t k = 0; k < c.size(); ++k) hist.add_row({c[k], dp[k], dm[k]});
  }
  out.table("agents_histogram.csv", hist);

  if (run.timed_out) out.report.notes.push_back("steady state not reached within numerics.agents.max_time");
  const bool agree = !run.timed_out && drift_agrees(r.v_d, r.stderr_v, run.kappa);
  if (!run.timed_out && !agree) {
    out.report.violations.push_back("v_d = " + fmt(r.v_d) + " +- " + fmt(r.stderr_v) + " differs from kappa = " +
                                    fmt(run.kappa) + " by more than max(5%, 3 stderr)");
  }
  out.summary("agents_summary.json", {{"command", "agents"},
                                      {"G", G},
                                      {"converged", r.converged},
                                      {"t_converged", r.t_converged},
                                      {"v_d", r.v_d},
                                      {"v_d_stderr", r.stderr_v},
                                      {"com_speed", r.com_speed},
                                      {"kappa_closure", run.kappa},
                                      {"drift_agrees", agree},
                                      {"inside_fraction", r.stats.agent_samples ? r.stats.inside_fraction() : 0.0}});
  return out.report;
}

RunReport cmd_compare(const ExperimentConfig& cfg, const fs::path& dir) {
  Output out(cfg, dir);
  const PhysParams& p = cfg.params;
  const double G = cfg.env.G_list.front();
  const auto prof = ClosureProfile::make(p, G);
  const auto gn = gradient_number(p, G);
  const auto run = run_agents(cfg, p, G, cfg.seed, cfg.threads);
  const auto& st = run.result.stats;
  if (st.agent_samples == 0) throw Error(ErrorCode::Timeout, "compare: agents did not reach a steady state");
  if (run.timed_out) out.report.notes.push_back("agents: steady state not reached; histogram from the partial run");

  const auto c = compare_histogram(st, prof);
  const auto centers = st.bin_centers();
  ResultTable overlay({{"a_bin_center", "1"},
                       {"mc_plus", "1"},
                       {"closure_plus", "1"},
                       {"mc_minus", "1"},
                       {"closure_minus", "1"}});
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const double w = c.edges[k + 1] - c.edges[k];
    overlay.add_row({centers[k], 2.0 * c.mc_plus[k] / w, 2.0 * c.closure_plus[k] / w, 2.0 * c.mc_minus[k] / w,
                     2.0 * c.closure_minus[k] / w});
  }
  out.table("compare_histogram.csv", overlay);

  const Environment env = agent_environment(cfg, p, G);
  const auto xc = st.x_bin_centers(env);
  const auto xm = st.x_mean_activity(), xv = st.x_var_activity();
  ResultTable xtab({{"x", "um"}, {"mean_a", "1"}, {"var_a", "1"}});
  double lo = INFINITY, hi = -INFINITY, avg = 0.0;
  for (std::size_t k = 0; k < xc.size(); ++k) {
    xtab.add_row({xc[k], xm[k], xv[k]});
    lo = std::min(lo, xm[k]);
    hi = std::max(hi, xm[k]);
    avg += xm[k] / static_cast<double>(xc.size());
  }
  out.table("compare_x_profile.csv", xtab);
  const double flatness = (hi - lo) / avg;
  const double inside = st.inside_fraction();

  auto check = [&](bool ok, const std::string& what) {
    if (!ok) out.report.violations.push_back(what);
  };
  check(c.l1_plus <= 0.05, "L1 (plus) = " + fmt(c.l1_plus) + " > 0.05");
  check(c.l1_minus <= 0.05, "L1 (minus) = " + fmt(c.l1_minus) + " > 0.05");
  check(flatness <= 0.05, "mean activity varies by " + fmt(flatness) + " > 5% across x");
  const bool confined = gn.g > 0.0 && gn.g < 1.0;
  if (confined) check(inside >= 0.99, "mass inside [a1, a2] = " + fmt(inside) + " < 0.99");

  out.summary("compare_summary.json", {{"command", "compare"},
                                       {"G", G},
                                       {"g", gn.g},
                                       {"a1", gn.a1},
                                       {"a2", gn.a2},
                                       {"l1_plus", c.l1_plus},
                                       {"l1_minus", c.l1_minus},
                                       {"w1_plus", c.w1_plus},
                                       {"w1_minus", c.w1_minus},
                                       {"mean_a_flatness", flatness},
                                       {"inside_fraction", inside},
                                       {"v_d", run.result.v_d},
                                       {"v_d_stderr", run.result.stderr_v},
                                       {"kappa_closure", run.kappa}});
  return out.report;
}

RunReport cmd_velocity_sweep(const ExperimentConfig& cfg, const fs::path& dir) {
  Output out(cfg, dir);
  const auto& kRs = cfg.sweep.kR_list;
  const auto& Gs = cfg.env.G_list;
  const std::size_t npts = kRs.size() * Gs.size();

  struct Point {
    double kappa = 0.0;
    double v_d = std::nan(""), se = std::nan("");
    std::string status = "analytic";
  };
  std::vector<Point> pts(npts);
  // Closure first (cheap), then Monte Carlo points in the pool; each point
  // runs single-threaded with a seed derived from its index.
  for (std::size_t i = 0; i < npts; ++i) {
    const PhysParams p = with_kR(cfg.params, kRs[i / Gs.size()]);
    pts[i].kappa = ClosureProfile::make(p, Gs[i % Gs.size()]).drift_velocity();
  }
  if (cfg.sweep.monte_carlo) {
    parallel_for(npts, cfg.threads, [&](std::size_t i) {
      const PhysParams p = with_kR(cfg.params, kRs[i / Gs.size()]);
      try {
        const auto run = run_agents(cfg, p, Gs[i % Gs.size()], derive_seed(cfg.seed, i), 1);
        pts[i].v_d = run.result.v_d;
        pts[i].se = run.result.stderr_v;
        pts[i].status = run.timed_out ? "timeout" : "ok";
      } catch (const Error& e) {
        pts[i].status = std::string("error: ") + e.what();
      }
    });
  }

  json curves = json::array();
  for (std::size_t r = 0; r < kRs.size(); ++r) {
    ResultTable t({{"G", "1/um"}, {"kappa_analytic", "um/s"}, {"v_d_mc", "um/s"}, {"v_d_stderr", "um/s"}, {"status", "-"}});
    std::vector<double> kap;
    json rows = json::array();
    for (std::size_t g = 0; g < Gs.size(); ++g) {
      const Point& pt = pts[r * Gs.size() + g];
      t.add_row({Gs[g], pt.kappa, pt.v_d, pt.se, pt.status});
      kap.push_back(pt.kappa);
      if (pt.status == "ok" && !drift_agrees(pt.v_d, pt.se, pt.kappa)) {
        out.report.violations.push_back("kR = " + fmt(kRs[r]) + ", G = " + fmt(Gs[g]) + ": v_d = " + fmt(pt.v_d) +
                                        " +- " + fmt(pt.se) + " vs kappa = " + fmt(pt.kappa));
      }
      if (pt.status != "ok" && pt.status != "analytic") {
        out.report.notes.push_back("kR = " + fmt(kRs[r]) + ", G = " + fmt(Gs[g]) + ": " + pt.status);
      }
      rows.push_back({{"G", Gs[g]}, {"kappa", pt.kappa}, {"v_d", num(pt.v_d)}, {"stderr", num(pt.se)},
                      {"status", pt.status}});
    }
    // Interior maximum over the sampled G values (rises then falls).
    const auto imax = static_cast<std::size_t>(std::max_element(kap.begin(), kap.end()) - kap.begin());
    const bool interior = kap.size() >= 3 && imax > 0 && imax + 1 < kap.size();
    const std::string name = "velocity_kR_" + std::to_string(r) + ".csv";
    out.table(name, t);
    curves.push_back({{"kR", kRs[r]}, {"file", name}, {"interior_maximum", interior}, {"G_at_max", Gs[imax]},
                      {"points", rows}});
  }
  out.summary("velocity_sweep_summary.json",
              {{"command", "velocity-sweep"}, {"monte_carlo", cfg.sweep.monte_carlo}, {"curves", curves}});
  return out.report;
}

RunReport cmd_kinetic(const ExperimentConfig& cfg, const fs::path& dir) {
  Output out(cfg, dir);
  const auto run = run_kinetic(cfg, cfg.kinetic.eps);
  ResultTable marg({{"a_lo", "1"}, {"a_hi", "1"}, {"marginal_plus", "1"}, {"marginal_minus", "1"}});
  const auto& m = run.marginal;
  for (std::size_t j = 0; j < m.mass_plus.size(); ++j) {
    marg.add_row({m.a_faces[j], m.a_faces[j + 1], m.mass_plus[j], m.mass_minus[j]});
  }
  out.table("kinetic_marginal.csv", marg);
  ResultTable rho({{"x", "scaled"}, {"rho", "1/scaled"}, {"rho_macro", "1/scaled"}});
  for (std::size_t i = 0; i < run.x.size(); ++i) rho.add_row({run.x[i], run.rho[i], run.rho_macro[i]});
  out.table("kinetic_density.csv", rho);
  if (!run.converged) out.report.notes.push_back("kinetic steady state not reached within numerics.kinetic.max_time");
  out.summary("kinetic_summary.json", {{"command", "kinetic"},
                                       {"eps", run.eps},
                                       {"G", run.G},
                                       {"time", run.time},
                                       {"converged", run.converged},
                                       {"W1_to_closure", run.w1_to_closure},
                                       {"L1_density_to_macro", run.l1_to_macro},
                                       {"macro_kappa", run.macro_kappa},
                                       {"macro_D0", run.macro_D0},
                                       {"mass", run.mass},
                                       {"min_value", run.min_value}});
  return out.report;
}

RunReport cmd_macro(const ExperimentConfig& cfg, const fs::path& dir) {
  Output out(cfg, dir);
  const auto& m = cfg.macro;
  const PhysParams& p = cfg.params;
  const bool ks = m.equation == "keller-segel";
  double kappa = m.kappa, D0 = 0.0;
  if (std::isnan(kappa)) {
    kappa = ks ? case2_coefficients(p, m.G_mu).kappa3 : ClosureProfile::make(p, cfg.env.G_list.front()).drift_velocity();
  }
  if (ks) D0 = std::isnan(m.D0) ? diffusion_coefficient(p) : m.D0;

  MacroField f(0.0, m.domain_length, gaussian_profile(m.cells, m.domain_length, m.bump_center * m.domain_length,
                                                      m.bump_width),
               kappa, D0);
  std::vector<Column> cols{{"x", "um"}};
  std::vector<std::vector<double>> snaps;
  json stats = json::array();
  for (double t : m.times) {
    f.advance_to(t);
    snaps.push_back(f.rho());
    cols.push_back({"rho_t" + std::to_string(snaps.size() - 1), "1/um"});
    stats.push_back({{"t", t}, {"mass", f.mass()}, {"center_of_mass", f.center_of_mass()}, {"variance", f.variance()}});
  }
  ResultTable t(cols);
  for (int i = 0; i < f.cells(); ++i) {
    std::vector<ResultTable::Cell> row{f.x_center(i)};
    for (const auto& s : snaps) row.emplace_back(s[static_cast<std::size_t>(i)]);
    t.add_row(std::move(row));
  }
  out.table("macro_rho.csv", t);
  out.summary("macro_summary.json", {{"command", "macro"},
                                     {"equation", m.equation},
                                     {"kappa", kappa},
                                     {"D0", D0},
                                     {"snapshots", stats}});
  return out.report;
}

RunReport cmd_convergence(const ExperimentConfig& cfg, const fs::path& dir) {
  Output out(cfg, dir);
  const auto& k = cfg.kinetic;
  std::vector<KineticRun> runs;
  for (double eps : k.eps_list) {
    runs.push_back(run_kinetic(cfg, eps));
    if (!runs.back().converged) out.report.notes.push_back("eps = " + fmt(eps) + ": steady state not reached");
  }
  std::vector<double> eps, w1, l1;
  for (const auto& r : runs) {
    eps.push_back(r.eps);
    w1.push_back(r.w1_to_closure);
    l1.push_back(r.l1_to_macro);
  }
  ResultTable t({{"eps", "1"},
                 {"W1_to_closure", "1"},
                 {"L1_density_to_macro", "1"},
                 {"order_W1", "1"},
                 {"converged", "-"}});
  for (std::size_t i = 0; i < runs.size(); ++i) {
    double order = std::nan("");
    if (i > 0) order = std::log(w1[i - 1] / w1[i]) / std::log(eps[i - 1] / eps[i]);
    t.add_row({eps[i], w1[i], l1[i], order, runs[i].converged ? "yes" : "no"});
  }
  out.table("convergence.csv", t);

  const bool case2 = k.scaling == "case2";
  if (!case2) {
    for (std::size_t i = 1; i < runs.size(); ++i) {
      if (eps[i] < eps[i - 1] && !(w1[i] < w1[i - 1])) {
        out.report.violations.push_back("W1 does not decrease from eps = " + fmt(eps[i - 1]) + " to " + fmt(eps[i]));
      }
    }
  } else if (k.mu == 1.0 && !runs.empty()) {
    const auto it = std::min_element(eps.begin(), eps.end());
    const double l1min = l1[static_cast<std::size_t>(it - eps.begin())];
    if (!(l1min <= 0.05)) {
      out.report.violations.push_back("L1 density to Keller-Segel = " + fmt(l1min) + " > 0.05 at eps = " + fmt(*it));
    }
  }
  json rows = json::array();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    rows.push_back({{"eps", eps[i]},
                    {"G", runs[i].G},
                    {"time", runs[i].time},
                    {"W1_to_closure", w1[i]},
                    {"L1_density_to_macro", l1[i]},
                    {"converged", runs[i].converged}});
  }
  out.summary("convergence_summary.json", {{"command", "convergence"},
                                           {"scaling", k.scaling},
                                           {"order_W1", num(convergence_order(eps, w1))},
                                           {"order_L1", num(convergence_order(eps, l1))},
                                           {"rows", rows}});
  return out.report;
}

RunReport run_experiment(const ExperimentConfig& cfg, const fs::path& out_dir) {
  switch (cfg.tier) {
    case Tier::Closure: return cmd_closure(cfg, out_dir);
    case Tier::Agents: return cmd_agents(cfg, out_dir);
    case Tier::Kinetic: return cmd_kinetic(cfg, out_dir);
    case Tier::Macro: return cmd_macro(cfg, out_dir);
    case Tier::Compare: return cmd_compare(cfg, out_dir);
    case Tier::VelocitySweep: return cmd_velocity_sweep(cfg, out_dir);
    case Tier::Convergence: return cmd_convergence(cfg, out_dir);
  }
  throw Error(ErrorCode::Internal, "run_experiment: unknown tier");
}

}  // namespace chemokin
