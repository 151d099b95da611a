#pragma once

// Pathway and motility constants, the exponential chemical environment, and
// the maps from (methylation, signal) to activity and rates.
//
// Units are fixed throughout the library: micrometres, seconds, micromolar.

#include <string>
#include <utility>

namespace chemokin {

struct PhysParams {
  double v0 = 16.5 / 1.4142135623730951;  // run speed, um/s
  double kR = 0.005;                       // adaptation rate, 1/s
  double a0 = 0.5;                         // preferred activity
  double alpha0 = 1.7;                     // methylation sensitivity
  double z0 = 0.14;                        // tumbling floor, 1/s
  double tau0 = 0.8;                       // mean run time, s
  double H = 10.0;                         // motor Hill coefficient
  int N = 6;                               // receptor cluster size
  double KI = 18.2;                        // uM
  double KA = 3000.0;                      // uM
  double S0 = 4.0 * 18.2;                  // uM
  double m0 = 1.0;                         // reference methylation

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

/// Exponential environment S(x) = S0 exp(G x) on [x_min, x_max].
struct Environment {
  double G = 0.0;  // 1/um
  double x_min = 0.0;
  double x_max = 1000.0;
  bool periodic = true;

  double length() const { return x_max - x_min; }
  void validate() const;
};

enum class Regime {
  Unbiased,
  CaseII_KellerSegel,
  CaseII_Hyperbolic,
  CaseI_Subcritical,
  CaseI_Supercritical,
};

std::string to_string(Regime r);

struct GradientNumber {
  double g = 0.0;
  double a1 = 0.5;
  double a2 = 0.5;
};

double signal(const PhysParams& p, const Environment& env, double x);

/// M(S) = m0 + ln(S/KI)/alpha0.
double preferred_methylation_at_signal(const PhysParams& p, double S);
double preferred_methylation(const PhysParams& p, const Environment& env, double x);

/// Receptor activity a = 1 / (1 + exp(N E)), E = -alpha0 (m - M(S)).
double activity(double m, double S, const PhysParams& p);

/// Same map expressed through the offset u = m - M(S), which is the only
/// combination the dynamics depend on.
double activity_from_offset(double offset, const PhysParams& p);

double tumbling_rate(double a, const PhysParams& p);
double adaptation_rate(double a, const PhysParams& p);

/// dZ/da.
double tumbling_rate_slope(double a, const PhysParams& p);

GradientNumber gradient_number(const PhysParams& p, double G);

/// Thresholds on g: >=1 supercritical, (0.1,1) subcritical, (0.01,0.1]
/// hyperbolic Case II, (0,0.01] Keller-Segel, 0 unbiased.
Regime classify_regime(double g);

/// Reported only; solvers always take (eps, mu) explicitly.
double infer_mu(double g, double eps);

/// Domain on which 5 KI < S(x) <= KA/5.
std::pair<double, double> domain_bounds(const PhysParams& p, double G);

/// Environment spanning domain_bounds for G > 0; for G == 0 the caller's
/// fallback bounds are used.
Environment make_environment(const PhysParams& p, double G, double fallback_length = 1000.0);

}  // namespace chemokin
