#include "chemokin/params.hpp"

#include <cmath>
#include <limits>

#include "chemokin/error.hpp"

namespace chemokin {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string("params.") + name + " must be finite and > 0");
  }
}

}  // namespace

void PhysParams::validate() const {
  require_positive(v0, "v0");
  require_positive(kR, "kR");
  require_positive(alpha0, "alpha0");
  require_positive(z0, "z0");
  require_positive(tau0, "tau0");
  require_positive(H, "H");
  require_positive(KI, "KI");
  require_positive(KA, "KA");
  require_positive(S0, "S0");
  require_positive(m0, "m0");
  if (N <= 0) throw ConfigError("params.N must be a positive integer");
  if (!(a0 > 0.0 && a0 < 1.0)) throw ConfigError("params.a0 must lie in (0,1)");
  if (!(KI < KA)) throw ConfigError("params.KI must be smaller than params.KA");
  if (!(KI <= S0)) throw ConfigError("params.S0 must be at least params.KI");
}

void Environment::validate() const {
  if (!(G >= 0.0) || !std::isfinite(G)) throw ConfigError("env.G must be finite and >= 0");
  if (!(x_max > x_min)) throw ConfigError("env.x_max must exceed env.x_min");
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Unbiased: return "Unbiased";
    case Regime::CaseII_KellerSegel: return "CaseII_KellerSegel";
    case Regime::CaseII_Hyperbolic: return "CaseII_hyperbolic";
    case Regime::CaseI_Subcritical: return "CaseI_subcritical";
    case Regime::CaseI_Supercritical: return "CaseI_supercritical";
  }
  return "unknown";
}

double signal(const PhysParams& p, const Environment& env, double x) {
  return p.S0 * std::exp(env.G * x);
}

double preferred_methylation_at_signal(const PhysParams& p, double S) {
  if (!(S > 0.0)) throw DomainError("preferred_methylation: concentration must be positive");
  return p.m0 + std::log(S / p.KI) / p.alpha0;
}

double preferred_methylation(const PhysParams& p, const Environment& env, double x) {
  // log(S/KI) = log(S0/KI) + G x, kept exactly linear in x.
  return p.m0 + (std::log(p.S0 / p.KI) + env.G * x) / p.alpha0;
}

double activity_from_offset(double offset, const PhysParams& p) {
  const double e = -p.alpha0 * offset;
  return 1.0 / (1.0 + std::exp(p.N * e));
}

double activity(double m, double S, const PhysParams& p) {
  return activity_from_offset(m - preferred_methylation_at_signal(p, S), p);
}

double tumbling_rate(double a, const PhysParams& p) {
  return p.z0 + std::pow(a / p.a0, p.H) / p.tau0;
}

double tumbling_rate_slope(double a, const PhysParams& p) {
  return p.H / (p.tau0 * p.a0) * std::pow(a / p.a0, p.H - 1.0);
}

double adaptation_rate(double a, const PhysParams& p) { return p.kR * (1.0 - a / p.a0); }

GradientNumber gradient_number(const PhysParams& p, double G) {
  if (!(p.kR > 0.0)) throw DomainError("gradient_number: kR must be positive");
  if (!(G >= 0.0)) throw DomainError("gradient_number: G must be >= 0");
  GradientNumber out;
  out.g = p.v0 / p.kR * G / p.alpha0;
  // a1 = 1 - a2 is exact in floating point, so a1 + a2 == 1 holds exactly.
  out.a2 = 0.5 * (1.0 + out.g);
  out.a1 = 1.0 - out.a2;
  return out;
}

Regime classify_regime(double g) {
  if (!(g >= 0.0)) throw DomainError("classify_regime: g must be >= 0");
  if (g == 0.0) return Regime::Unbiased;
  if (g <= 0.01) return Regime::CaseII_KellerSegel;
  if (g <= 0.1) return Regime::CaseII_Hyperbolic;
  if (g < 1.0) return Regime::CaseI_Subcritical;
  return Regime::CaseI_Supercritical;
}

double infer_mu(double g, double eps) {
  if (!(eps > 0.0 && eps < 1.0) || !(g > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log(g) / std::log(eps);
}

std::pair<double, double> domain_bounds(const PhysParams& p, double G) {
  if (!(G > 0.0)) throw DomainError("domain_bounds: G must be > 0; supply explicit bounds for G = 0");
  const double x_min = std::log(5.0 * p.KI / p.S0) / G;
  const double x_max = std::log(p.KA / (5.0 * p.S0)) / G;
  return {x_min, x_max};
}

Environment make_environment(const PhysParams& p, double G, double fallback_length) {
  Environment env;
  env.G = G;
  if (G > 0.0) {
    auto [lo, hi] = domain_bounds(p, G);
    env.x_min = lo;
    env.x_max = hi;
  } else {
    env.x_min = 0.0;
    env.x_max = fallback_length;
  }
  env.validate();
  return env;
}

}  // namespace chemokin
