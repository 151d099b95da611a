#pragma once

// Experiment drivers behind the CLI. Every run writes the resolved config,
// its result tables and a JSON summary into the output directory and returns
// a report listing threshold violations (used by --strict).

#include <filesystem>
#include <string>
#include <vector>

#include "chemokin/agents.hpp"
#include "chemokin/closure.hpp"
#include "chemokin/config.hpp"
#include "chemokin/kinetic.hpp"

namespace chemokin {

struct RunReport {
  std::vector<std::string> files;       // relative to the output directory
  std::vector<std::string> violations;  // failed threshold checks
  std::vector<std::string> notes;       // non-fatal events (timeouts, unconverged runs)
  std::string summary_json;
  bool ok() const { return violations.empty(); }
};

RunReport run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

RunReport cmd_closure(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
RunReport cmd_agents(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
RunReport cmd_kinetic(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
RunReport cmd_macro(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
RunReport cmd_compare(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
RunReport cmd_velocity_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
RunReport cmd_convergence(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

// Building blocks shared with the acceptance checks.

/// Histogram range covering the closure support (all of [0,1] if unbounded
/// or for the point mass).
HistogramSpec support_histogram(const ClosureProfile& prof, int bins, int x_bins = 16);

struct HistogramComparison {
  std::vector<double> edges;
  std::vector<double> mc_plus, mc_minus;          // joint masses per bin
  std::vector<double> closure_plus, closure_minus;
  double l1_plus = 0.0, l1_minus = 0.0;  // on the per-direction density scale
  double w1_plus = 0.0, w1_minus = 0.0;
};
HistogramComparison compare_histogram(const EnsembleStats& st, const ClosureProfile& prof);

/// Agent domain for one gradient: explicit bounds, domain_bounds(), or
/// [0, domain_length] for G = 0.
Environment agent_environment(const ExperimentConfig& cfg, const PhysParams& p, double G);

struct AgentRun {
  SteadyStateResult result;
  bool timed_out = false;
  double kappa = 0.0;  // closure drift at the same G
};
AgentRun run_agents(const ExperimentConfig& cfg, const PhysParams& p, double G, std::uint64_t seed,
                    unsigned threads, std::vector<DriftSample>* series = nullptr);

/// |v_d - kappa| <= max(0.05 |kappa|, 3 stderr).
bool drift_agrees(double v_d, double stderr_v, double kappa);

struct KineticRun {
  double eps = 0.0;
  double G = 0.0;       // gradient entering the activity drift
  double time = 0.0;    // scaled time reached
  bool converged = true;  // steady mode only
  double w1_to_closure = 0.0;
  double l1_to_macro = 0.0;
  double macro_kappa = 0.0, macro_D0 = 0.0;
  double mass = 0.0, min_value = 0.0;
  std::vector<double> x, rho, rho_macro;
  ActivityMarginal marginal;
};
/// One kinetic solve at `eps` with the scaling, grid and initial data of
/// cfg.kinetic, compared with the closure and with the matching macroscopic
/// equation on the same grid.
KineticRun run_kinetic(const ExperimentConfig& cfg, double eps);

/// Least-squares slope of log W against log eps; NaN with fewer than two
/// positive points.
double convergence_order(const std::vector<double>& eps, const std::vector<double>& w);

}  // namespace chemokin
