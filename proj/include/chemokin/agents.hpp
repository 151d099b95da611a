#pragma once

// Agent-based run-and-tumble simulation with intracellular adaptation.
//
// Each cell carries a position, a direction of motion and a methylation
// level. Internally the methylation is stored as its offset from the local
// adapted value M(S(x)); activity depends on nothing else, so the periodic
// wrap leaves activity untouched and the reference methylation m0 never
// enters the arithmetic.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chemokin/error.hpp"
#include "chemokin/params.hpp"

namespace chemokin {

struct Agent {
  double x = 0.0;
  int dir = 1;
  double m = 0.0;
};

/// Shift an agent that left [x_min, x_max) back by one period and adjust
/// its methylation so the activity is unchanged.
Agent wrap(const Agent& agent, const PhysParams& p, const Environment& env);

struct AgentOptions {
  std::size_t count = 100000;
  double dt = 0.01;  // s
  std::uint64_t seed = 1;
  unsigned threads = 1;
  // Initial activity drawn uniformly from [lo, hi]; default adapted cells.
  double init_activity_lo = 0.5;
  double init_activity_hi = 0.5;
  // Keep every k-th step in drift_series(); the per-step values of the most
  // recent advance() are always available through last_drift().
  std::size_t series_stride = 1;
};

struct HistogramSpec {
  double lo = 0.0;
  double hi = 1.0;
  int bins = 64;
  int x_bins = 16;
};

struct EnsembleStats {
  HistogramSpec spec;
  std::vector<std::uint64_t> count_plus, count_minus;  // per activity bin
  std::uint64_t outside_plus = 0, outside_minus = 0;   // activity outside [lo, hi]
  std::uint64_t agent_samples = 0;
  std::uint64_t snapshots = 0;
  std::vector<double> x_sum_a, x_sum_a2;
  std::vector<std::uint64_t> x_count;

  /// Joint probability of (direction, activity bin); all bins of both
  /// directions plus the outside counts sum to 1.
  std::vector<double> mass_plus() const;
  std::vector<double> mass_minus() const;
  std::vector<double> bin_edges() const;
  std::vector<double> bin_centers() const;
  /// Per-direction curves on the scale of Q/(N alpha0 a(1-a)): 2 * mass / width.
  std::vector<double> density_plus() const;
  std::vector<double> density_minus() const;
  double inside_fraction() const;

  std::vector<double> x_bin_centers(const Environment& env) const;
  std::vector<double> x_mean_activity() const;
  std::vector<double> x_var_activity() const;
};

struct DriftSample {
  double t = 0.0;
  double v_d = 0.0;
  std::uint64_t n_plus = 0;
  std::uint64_t n_minus = 0;
};

class Ensemble {
 public:
  Ensemble(const PhysParams& p, const Environment& env, const AgentOptions& opt);

  /// Advance by one time step.
  void step();
  /// Advance by `steps` time steps, recording the drift series each step.
  void advance(std::size_t steps);

  double time() const { return static_cast<double>(steps_) * opt_.dt; }
  std::uint64_t steps() const { return steps_; }
  std::size_t size() const { return x_.size(); }
  const PhysParams& params() const { return p_; }
  const Environment& environment() const { return env_; }
  const AgentOptions& options() const { return opt_; }

  std::uint64_t count_plus() const;
  std::uint64_t count_minus() const { return size() - count_plus(); }
  /// v0 (N+ - N-) / (N+ + N-).
  double drift() const;

  Agent agent(std::size_t i) const;
  /// Overwrite agent i; x is wrapped into the domain first.
  void set_agent(std::size_t i, const Agent& a);
  double activity(std::size_t i) const;
  double offset(std::size_t i) const { return u_[i]; }
  /// Net displacement of agent i since the last reset_displacement().
  double displacement(std::size_t i) const { return disp_[i]; }
  double mean_displacement() const;
  void reset_displacement();

  /// Histogram sampling: when enabled, every `every`-th step contributes a
  /// snapshot of all agents to the statistics.
  void enable_sampling(const HistogramSpec& spec, std::size_t every);
  void disable_sampling() { sampling_ = false; }
  void reset_stats();
  const EnsembleStats& stats() const { return stats_; }

  /// Snapshot of the current state (not accumulated).
  EnsembleStats snapshot(const HistogramSpec& spec) const;

  const std::vector<DriftSample>& drift_series() const { return series_; }
  const std::vector<double>& last_drift() const { return last_vd_; }
  void clear_drift_series() { series_.clear(); }

  /// Count of substeps taken so far (for diagnostics and cost accounting).
  std::uint64_t substeps() const { return substeps_; }

 private:
  struct ChunkOut;
  void run_chunk_mut(std::size_t begin, std::size_t end, std::size_t nsteps, ChunkOut& out);
  void accumulate(EnsembleStats& st, std::size_t i) const;

  PhysParams p_;
  Environment env_;
  AgentOptions opt_;
  double drift_coef_;  // v0 G / alpha0
  std::vector<double> x_, u_, disp_;
  std::vector<double> haz_;  // hazard left until the next tumble
  std::vector<std::int8_t> dir_;
  std::uint64_t steps_ = 0;
  std::uint64_t substeps_ = 0;
  bool sampling_ = false;
  std::size_t sample_every_ = 1;
  EnsembleStats stats_;
  std::vector<DriftSample> series_;
  std::vector<double> last_vd_;
};

struct SteadyStateOptions {
  std::size_t window = 10000;  // steps per comparison window
  double tol = 1e-3;           // mean change, in units of v0
  double var_tol = 0.25;       // relative change of the window variance
  double max_time = 1e6;       // s
  std::size_t sample_steps = 0;  // post-convergence sampling; 0 = one window
  std::size_t sample_every = 20;
  std::size_t batches = 50;
  HistogramSpec hist;
};

struct SteadyStateResult {
  bool converged = false;
  double t_converged = 0.0;
  double v_d = 0.0;
  double stderr_v = 0.0;
  double com_speed = 0.0;  // mean displacement / sampling time
  std::size_t windows = 0;
  EnsembleStats stats;
};

class TimeoutError : public Error {
 public:
  TimeoutError(const std::string& what, SteadyStateResult partial)
      : Error(ErrorCode::Timeout, what), partial_(std::move(partial)) {}
  const SteadyStateResult& partial() const { return partial_; }

 private:
  SteadyStateResult partial_;
};

/// Mean of v_d over equal batches and its standard error.
std::pair<double, double> batch_mean_stderr(const std::vector<double>& series, std::size_t batches);

SteadyStateResult run_to_steady_state(Ensemble& ens, const SteadyStateOptions& opt);

}  // namespace chemokin
