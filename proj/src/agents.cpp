#include "chemokin/agents.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "chemokin/rng.hpp"

namespace chemokin {

namespace {

constexpr std::size_t kChunk = 4096;
constexpr std::uint64_t kInitCounter = ~0ULL;
// Upper bound on Z * substep, so the hazard integral stays accurate where
// the Hill term makes the tumbling rate steep.
constexpr double kRateStep = 0.1;

double hill(double r, double H) {
  if (H == std::floor(H) && H > 0.0 && H <= 64.0) {
    auto n = static_cast<unsigned>(H);
    double result = 1.0, base = r;
    while (n) {
      if (n & 1U) result *= base;
      base *= base;
      n >>= 1U;
    }
    return result;
  }
  return std::pow(r, H);
}

}  // namespace

Agent wrap(const Agent& agent, const PhysParams& p, const Environment& env) {
  const double L = env.length();
  Agent out = agent;
  double periods = 0.0;
  if (agent.x >= env.x_max) periods = -std::floor((agent.x - env.x_min) / L);
  else if (agent.x < env.x_min) periods = std::ceil((env.x_min - agent.x) / L);
  out.x = agent.x + periods * L;
  if (out.x >= env.x_max) out.x -= L;  // rounding at the seam
  // M is linear in x with slope G/alpha0.
  out.m = agent.m + env.G / p.alpha0 * (out.x - agent.x);
  return out;
}

std::vector<double> EnsembleStats::bin_edges() const {
  std::vector<double> e(static_cast<std::size_t>(spec.bins) + 1);
  for (int i = 0; i <= spec.bins; ++i) e[i] = spec.lo + (spec.hi - spec.lo) * i / spec.bins;
  return e;
}

std::vector<double> EnsembleStats::bin_centers() const {
  std::vector<double> c(static_cast<std::size_t>(spec.bins));
  for (int i = 0; i < spec.bins; ++i) c[i] = spec.lo + (spec.hi - spec.lo) * (i + 0.5) / spec.bins;
  return c;
}

std::vector<double> EnsembleStats::mass_plus() const {
  std::vector<double> m(count_plus.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = agent_samples ? double(count_plus[i]) / double(agent_samples) : 0.0;
  return m;
}

std::vector<double> EnsembleStats::mass_minus() const {
  std::vector<double> m(count_minus.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = agent_samples ? double(count_minus[i]) / double(agent_samples) : 0.0;
  return m;
}

std::vector<double> EnsembleStats::density_plus() const {
  auto m = mass_plus();
  const double w = (spec.hi - spec.lo) / spec.bins;
  for (auto& v : m) v *= 2.0 / w;
  return m;
}

std::vector<double> EnsembleStats::density_minus() const {
  auto m = mass_minus();
  const double w = (spec.hi - spec.lo) / spec.bins;
  for (auto& v : m) v *= 2.0 / w;
  return m;
}

double EnsembleStats::inside_fraction() const {
  if (!agent_samples) return 0.0;
  return 1.0 - double(outside_plus + outside_minus) / double(agent_samples);
}

std::vector<double> EnsembleStats::x_bin_centers(const Environment& env) const {
  std::vector<double> c(x_count.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = env.x_min + env.length() * (i + 0.5) / c.size();
  return c;
}

std::vector<double> EnsembleStats::x_mean_activity() const {
  std::vector<double> m(x_count.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = x_count[i] ? x_sum_a[i] / double(x_count[i]) : 0.0;
  return m;
}

std::vector<double> EnsembleStats::x_var_activity() const {
  std::vector<double> v(x_count.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!x_count[i]) continue;
    const double n = double(x_count[i]);
    const double mean = x_sum_a[i] / n;
    v[i] = std::max(0.0, x_sum_a2[i] / n - mean * mean);
  }
  return v;
}

namespace {

EnsembleStats empty_stats(const HistogramSpec& spec) {
  if (spec.bins < 1 || !(spec.hi > spec.lo) || spec.x_bins < 1) {
    throw ConfigError("histogram spec needs bins >= 1, x_bins >= 1 and hi > lo");
  }
  EnsembleStats st;
  st.spec = spec;
  st.count_plus.assign(static_cast<std::size_t>(spec.bins), 0);
  st.count_minus.assign(static_cast<std::size_t>(spec.bins), 0);
  st.x_sum_a.assign(static_cast<std::size_t>(spec.x_bins), 0.0);
  st.x_sum_a2.assign(static_cast<std::size_t>(spec.x_bins), 0.0);
  st.x_count.assign(static_cast<std::size_t>(spec.x_bins), 0);
  return st;
}

void merge(EnsembleStats& into, const EnsembleStats& from) {
  for (std::size_t i = 0; i < into.count_plus.size(); ++i) {
    into.count_plus[i] += from.count_plus[i];
    into.count_minus[i] += from.count_minus[i];
  }
  into.outside_plus += from.outside_plus;
  into.outside_minus += from.outside_minus;
  into.agent_samples += from.agent_samples;
  for (std::size_t i = 0; i < into.x_count.size(); ++i) {
    into.x_sum_a[i] += from.x_sum_a[i];
    into.x_sum_a2[i] += from.x_sum_a2[i];
    into.x_count[i] += from.x_count[i];
  }
}

}  // namespace

struct Ensemble::ChunkOut {
  std::vector<std::uint32_t> nplus;
  EnsembleStats stats;
  std::uint64_t substeps = 0;
};

Ensemble::Ensemble(const PhysParams& p, const Environment& env, const AgentOptions& opt)
    : p_(p), env_(env), opt_(opt) {
  p_.validate();
  env_.validate();
  if (opt_.count == 0) throw ConfigError("numerics.agents must be >= 1");
  if (!(opt_.dt > 0.0)) throw ConfigError("numerics.dt must be > 0");
  if (opt_.dt * p_.kR > 0.1) throw ConfigError("numerics.dt violates the adaptation guard dt <= 0.1/kR");
  // Steeper rates away from a0 are handled by substepping.
  if (opt_.dt * tumbling_rate(p_.a0, p_) > kRateStep) {
    throw ConfigError("numerics.dt violates the tumbling guard dt <= 0.1/Z(a0)");
  }
  if (!(opt_.init_activity_lo > 0.0 && opt_.init_activity_hi < 1.0 &&
        opt_.init_activity_lo <= opt_.init_activity_hi)) {
    throw ConfigError("initial activity range must satisfy 0 < lo <= hi < 1");
  }
  if (opt_.threads == 0) opt_.threads = 1;
  if (opt_.series_stride == 0) opt_.series_stride = 1;
  drift_coef_ = p_.v0 * env_.G / p_.alpha0;
  const std::size_t n = opt_.count;
  x_.resize(n);
  u_.resize(n);
  haz_.resize(n);
  disp_.assign(n, 0.0);
  dir_.resize(n);
  const double L = env_.length();
  const double na = p_.N * p_.alpha0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t key = stream_key(opt_.seed, i, kInitCounter);
    x_[i] = env_.x_min + L * (1.0 - draw_open01(key, 0));
    if (x_[i] >= env_.x_max) x_[i] = env_.x_min;
    dir_[i] = draw_open01(key, 1) <= 0.5 ? 1 : -1;
    const double a = opt_.init_activity_lo + (opt_.init_activity_hi - opt_.init_activity_lo) * draw_open01(key, 2);
    u_[i] = std::log(a / (1.0 - a)) / na;
    haz_[i] = -std::log(draw_open01(key, 3));
  }
  stats_ = empty_stats(HistogramSpec{});
}

double Ensemble::activity(std::size_t i) const { return activity_from_offset(u_[i], p_); }

Agent Ensemble::agent(std::size_t i) const {
  Agent a;
  a.x = x_[i];
  a.dir = dir_[i];
  a.m = u_[i] + preferred_methylation(p_, env_, x_[i]);
  return a;
}

void Ensemble::set_agent(std::size_t i, const Agent& a) {
  if (a.dir != 1 && a.dir != -1) throw DomainError("agent direction must be +1 or -1");
  const Agent w = wrap(a, p_, env_);
  x_.at(i) = w.x;
  dir_[i] = static_cast<std::int8_t>(w.dir);
  u_[i] = w.m - preferred_methylation(p_, env_, w.x);
}

std::uint64_t Ensemble::count_plus() const {
  std::uint64_t c = 0;
  for (auto d : dir_) c += d > 0;
  return c;
}

double Ensemble::drift() const {
  const double np = double(count_plus());
  const double n = double(size());
  return p_.v0 * (2.0 * np - n) / n;
}

double Ensemble::mean_displacement() const {
  // Chunked sum so the result does not depend on threading.
  double total = 0.0;
  for (std::size_t b = 0; b < disp_.size(); b += kChunk) {
    double s = 0.0;
    for (std::size_t i = b; i < std::min(disp_.size(), b + kChunk); ++i) s += disp_[i];
    total += s;
  }
  return total / double(disp_.size());
}

void Ensemble::reset_displacement() { std::fill(disp_.begin(), disp_.end(), 0.0); }

void Ensemble::enable_sampling(const HistogramSpec& spec, std::size_t every) {
  stats_ = empty_stats(spec);
  sampling_ = true;
  sample_every_ = std::max<std::size_t>(1, every);
}

void Ensemble::reset_stats() { stats_ = empty_stats(stats_.spec); }

void Ensemble::accumulate(EnsembleStats& st, std::size_t i) const {
  const double a = activity(i);
  const auto& s = st.spec;
  const bool plus = dir_[i] > 0;
  if (a >= s.lo && a <= s.hi) {
    auto b = static_cast<std::size_t>((a - s.lo) / (s.hi - s.lo) * s.bins);
    b = std::min(b, static_cast<std::size_t>(s.bins - 1));
    (plus ? st.count_plus : st.count_minus)[b]++;
  } else {
    (plus ? st.outside_plus : st.outside_minus)++;
  }
  st.agent_samples++;
  auto xb = static_cast<std::size_t>((x_[i] - env_.x_min) / env_.length() * s.x_bins);
  xb = std::min(xb, static_cast<std::size_t>(s.x_bins - 1));
  st.x_sum_a[xb] += a;
  st.x_sum_a2[xb] += a * a;
  st.x_count[xb]++;
}

EnsembleStats Ensemble::snapshot(const HistogramSpec& spec) const {
  EnsembleStats st = empty_stats(spec);
  for (std::size_t b = 0; b < size(); b += kChunk) {
    EnsembleStats part = empty_stats(spec);
    for (std::size_t i = b; i < std::min(size(), b + kChunk); ++i) accumulate(part, i);
    merge(st, part);
  }
  st.snapshots = 1;
  return st;
}

void Ensemble::run_chunk_mut(std::size_t begin, std::size_t end, std::size_t nsteps, ChunkOut& out) {
  out.nplus.assign(nsteps, 0);
  out.stats = empty_stats(stats_.spec);
  const double dt = opt_.dt;
  const double v0 = p_.v0;
  const double na = p_.N * p_.alpha0;
  const double kR = p_.kR, a0 = p_.a0, z0 = p_.z0, inv_tau = 1.0 / p_.tau0, H = p_.H;
  const double xmin = env_.x_min, xmax = env_.x_max, L = env_.length();
  std::uint64_t sub_count = 0;
  for (std::size_t i = begin; i < end; ++i) {
    double x = x_[i], u = u_[i], disp = disp_[i], haz = haz_[i];
    int dir = dir_[i];
    for (std::size_t s = 0; s < nsteps; ++s) {
      const std::uint64_t gs = steps_ + s;
      const std::uint64_t key = stream_key(opt_.seed, i, gs);
      std::uint64_t k = 0;
      double t = 0.0;
      while (t < dt) {
        // Midpoint rule for the offset and for the integrated tumbling
        // hazard; a tumble happens when the hazard used up reaches `haz`.
        const double a = 1.0 / (1.0 + std::exp(-na * u));
        const double Z = z0 + hill(a / a0, H) * inv_tau;
        const double h = std::min(dt - t, kRateStep / Z);
        const double um = u + 0.5 * h * (kR * (1.0 - a / a0) - dir * drift_coef_);
        const double am = 1.0 / (1.0 + std::exp(-na * um));
        const double Zm = z0 + hill(am / a0, H) * inv_tau;
        const double du = kR * (1.0 - am / a0) - dir * drift_coef_;
        const double lam = Zm * h;
        ++sub_count;
        if (lam >= haz) {
          const double hh = h * haz / lam;
          x += dir * v0 * hh;
          disp += dir * v0 * hh;
          u += hh * du;
          t += hh;
          dir = draw_open01(key, k++) <= 0.5 ? 1 : -1;
          haz = -std::log(draw_open01(key, k++));
        } else {
          x += dir * v0 * h;
          disp += dir * v0 * h;
          u += h * du;
          haz -= lam;
          t += h;
        }
        if (x >= xmax) x -= L;
        else if (x < xmin) x += L;
      }
      if (dir > 0) out.nplus[s]++;
      if (sampling_ && (gs + 1) % sample_every_ == 0) {
        x_[i] = x;
        u_[i] = u;
        dir_[i] = static_cast<std::int8_t>(dir);
        haz_[i] = haz;
        accumulate(out.stats, i);
      }
    }
    x_[i] = x;
    u_[i] = u;
    disp_[i] = disp;
    haz_[i] = haz;
    dir_[i] = static_cast<std::int8_t>(dir);
  }
  out.substeps = sub_count;
}

void Ensemble::advance(std::size_t nsteps) {
  if (nsteps == 0) return;
  const std::size_t n = size();
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<ChunkOut> outs(nchunks);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t c = next++; c < nchunks; c = next++) {
      run_chunk_mut(c * kChunk, std::min(n, (c + 1) * kChunk), nsteps, outs[c]);
    }
  };
  const unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(opt_.threads, nchunks));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  // Reduce in chunk order.
  last_vd_.assign(nsteps, 0.0);
  for (std::size_t s = 0; s < nsteps; ++s) {
    std::uint64_t np = 0;
    for (const auto& o : outs) np += o.nplus[s];
    DriftSample ds;
    ds.t = double(steps_ + s + 1) * opt_.dt;
    ds.n_plus = np;
    ds.n_minus = n - np;
    ds.v_d = p_.v0 * (2.0 * double(np) - double(n)) / double(n);
    last_vd_[s] = ds.v_d;
    if ((steps_ + s + 1) % opt_.series_stride == 0) series_.push_back(ds);
  }
  if (sampling_) {
    std::uint64_t snaps = 0;
    for (std::size_t s = 0; s < nsteps; ++s) snaps += (steps_ + s + 1) % sample_every_ == 0;
    for (const auto& o : outs) merge(stats_, o.stats);
    stats_.snapshots += snaps;
  }
  for (const auto& o : outs) substeps_ += o.substeps;
  steps_ += nsteps;
}

void Ensemble::step() { advance(1); }

std::pair<double, double> batch_mean_stderr(const std::vector<double>& series, std::size_t batches) {
  if (series.empty()) return {0.0, std::nan("")};
  if (batches < 2 || series.size() < batches) {
    double s = 0.0;
    for (double v : series) s += v;
    return {s / double(series.size()), std::nan("")};
  }
  const std::size_t len = series.size() / batches;
  const std::size_t start = series.size() - len * batches;
  std::vector<double> means(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += series[start + b * len + i];
    means[b] = s / double(len);
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= double(batches);
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= double(batches - 1);
  return {mean, std::sqrt(var / double(batches))};
}

namespace {

std::pair<double, double> mean_var(const std::vector<double>& s) {
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= double(s.size());
  double var = 0.0;
  for (double v : s) var += (v - mean) * (v - mean);
  return {mean, var / double(s.size())};
}

}  // namespace

SteadyStateResult run_to_steady_state(Ensemble& ens, const SteadyStateOptions& opt) {
  if (opt.window < 100) throw ConfigError("steady-state window must be >= 100 steps");
  if (!(opt.tol > 0.0) || !(opt.var_tol > 0.0)) throw ConfigError("steady-state tolerances must be > 0");
  const double v0 = ens.params().v0;
  const double dt = ens.options().dt;
  SteadyStateResult res;
  double prev_mean = 0.0, prev_var = 0.0;
  while (true) {
    if (ens.time() + double(opt.window) * dt > opt.max_time * (1.0 + 1e-12)) {
      if (res.windows > 0) std::tie(res.v_d, res.stderr_v) = batch_mean_stderr(ens.last_drift(), opt.batches);
      res.stats = ens.stats();
      throw TimeoutError("run_to_steady_state: max_time reached before the drift series settled", res);
    }
    ens.advance(opt.window);
    const auto [mean, var] = mean_var(ens.last_drift());
    ++res.windows;
    if (res.windows >= 2) {
      const bool mean_ok = std::abs(mean - prev_mean) < opt.tol * v0;
      const double scale = std::max(prev_var, var);
      const bool var_ok = scale == 0.0 || std::abs(var - prev_var) <= opt.var_tol * scale;
      if (mean_ok && var_ok) break;
    }
    prev_mean = mean;
    prev_var = var;
  }
  res.converged = true;
  res.t_converged = ens.time();

  const std::size_t nsample = opt.sample_steps ? opt.sample_steps : opt.window;
  ens.enable_sampling(opt.hist, opt.sample_every);
  ens.reset_displacement();
  const double t0 = ens.time();
  ens.advance(nsample);
  ens.disable_sampling();
  std::tie(res.v_d, res.stderr_v) = batch_mean_stderr(ens.last_drift(), opt.batches);
  res.com_speed = ens.mean_displacement() / (ens.time() - t0);
  res.stats = ens.stats();
  return res;
}

}  // namespace chemokin
