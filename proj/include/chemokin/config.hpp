#pragma once

// Declarative experiment description, read from JSON. Unknown keys are
// rejected; every field has a default, so the resolved config written next
// to the results is complete.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "chemokin/params.hpp"

namespace chemokin {

enum class Tier { Closure, Agents, Kinetic, Macro, Compare, VelocitySweep, Convergence };

std::string to_string(Tier t);
Tier tier_from_string(const std::string& s);

struct EnvSpec {
  std::vector<double> G_list = {1e-3};  // 1/um
  // Domain for agents. Unset (NaN) means domain_bounds(p, G), or
  // [0, domain_length] when G = 0.
  double x_min = std::nan("");
  double x_max = std::nan("");
  double domain_length = 1000.0;  // um
};

struct AgentNumerics {
  std::size_t count = 100000;
  double dt = 0.01;  // s
  double init_activity_lo = 0.5;
  double init_activity_hi = 0.5;
  std::size_t window = 10000;  // steps
  double tol = 1e-3;
  double var_tol = 0.25;
  double max_time = 1e6;  // s
  std::size_t sample_steps = 0;  // 0: one window
  std::size_t sample_every = 20;
  std::size_t batches = 50;
  int bins = 64;
  int x_bins = 16;
  std::size_t series_stride = 100;
};

struct KineticNumerics {
  std::string scaling = "case1";  // case1 | case2
  double eps = 0.1;
  std::vector<double> eps_list = {0.2, 0.1, 0.05, 0.025};
  double mu = 1.0;
  double G_mu = 5e-4;  // case2: drift gradient is eps^mu G_mu
  int x_cells = 256;
  int a_cells = 512;
  double u_span = 2.5;
  double stretch = 4.0;
  double margin = 0.25;
  double domain_length = 40.0;  // scaled units
  double T = 5.0;
  bool steady = false;
  double steady_tol = 1e-8;
  double max_time = 1e5;
  std::string init = "point";  // point | closure
  double init_a = 0.5;
  double bump_center = 0.3;  // fraction of the domain
  double bump_width = 0.0;   // 0: uniform in x
};

struct MacroNumerics {
  std::string equation = "transport";  // transport | keller-segel
  int cells = 512;
  double domain_length = 1000.0;
  double kappa = std::nan("");  // NaN: from the closure (transport) or kappa3 (keller-segel)
  double D0 = std::nan("");     // NaN: v0^2 / Z(1/2) for keller-segel
  double G_mu = 5e-4;           // keller-segel drift parameter
  double bump_center = 0.3;
  double bump_width = 20.0;
  std::vector<double> times = {0.0, 50.0, 100.0};
};

struct SweepSpec {
  std::vector<double> kR_list = {0.0005, 0.001, 0.005, 0.01};
  bool monte_carlo = false;
};

struct ExperimentConfig {
  Tier tier = Tier::Closure;
  PhysParams params;
  EnvSpec env;
  AgentNumerics agents;
  KineticNumerics kinetic;
  MacroNumerics macro;
  SweepSpec sweep;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string output_dir = "out";

  void validate() const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Fully resolved config as canonical JSON (sorted keys, all defaults).
std::string resolved_config_json(const ExperimentConfig& cfg);
/// FNV-1a 64 of resolved_config_json, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace chemokin
