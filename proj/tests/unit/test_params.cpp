#include <cmath>

#include "chemokin/error.hpp"
#include "chemokin/params.hpp"
#include "doctest.h"

using namespace chemokin;

TEST_CASE("default parameters") {
  PhysParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.v0 == doctest::Approx(16.5 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(p.S0 == doctest::Approx(72.8));
  CHECK(p.N == 6);
}

TEST_CASE("parameter validation names the field") {
  PhysParams p;
  p.a0 = 1.2;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("a0"), ConfigError);
  p = PhysParams{};
  p.S0 = 10.0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("S0"), ConfigError);
  p = PhysParams{};
  p.N = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = PhysParams{};
  p.KA = 10.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("signal") {
  PhysParams p;
  Environment env;
  env.G = 0.0;
  CHECK(signal(p, env, 123.0) == p.S0);
  env.G = 1e-3;
  CHECK(signal(p, env, 0.0) == doctest::Approx(72.8));
  CHECK(signal(p, env, 1000.0) == doctest::Approx(72.8 * std::exp(1.0)).epsilon(1e-14));
  CHECK(signal(p, env, 1000.0) == doctest::Approx(197.9).epsilon(1e-3));
}

TEST_CASE("preferred methylation") {
  PhysParams p;
  CHECK(preferred_methylation_at_signal(p, p.KI) == p.m0);
  p.m0 = 0.0;
  Environment env;
  CHECK(preferred_methylation(p, env, 0.0) == doctest::Approx(std::log(4.0) / 1.7).epsilon(1e-14));
  CHECK(preferred_methylation(p, env, 0.0) == doctest::Approx(0.8155).epsilon(1e-4));
  CHECK_THROWS_AS(preferred_methylation_at_signal(p, 0.0), DomainError);
  CHECK_THROWS_AS(preferred_methylation_at_signal(p, -1.0), DomainError);
}

TEST_CASE("methylation target is exactly log-linear in x") {
  PhysParams p;
  for (double G : {1e-5, 5e-4, 1e-3, 2e-3}) {
    const auto [lo, hi] = domain_bounds(p, G);
    Environment env{G, lo, hi, true};
    for (double x : {lo, 0.0, 0.5 * (lo + hi)}) {
      for (double h : {1.0, 10.0, hi - x}) {
        if (!(h > 0.0)) continue;
        const double slope =
            (preferred_methylation(p, env, x + h) - preferred_methylation(p, env, x)) * p.alpha0 / h;
        CHECK(std::abs(slope - G) <= 1e-10);
      }
    }
  }
}

TEST_CASE("activity map") {
  PhysParams p;
  const double S = 100.0;
  const double M = preferred_methylation_at_signal(p, S);
  CHECK(activity(M, S, p) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(activity(M + std::log(3.0) / (p.N * p.alpha0), S, p) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(activity(M + 100.0, S, p) == doctest::Approx(1.0));
  CHECK(activity(M - 100.0, S, p) == doctest::Approx(0.0));
  // Monotone: increasing in m, decreasing in S.
  CHECK(activity(M + 0.1, S, p) > activity(M, S, p));
  CHECK(activity(M, S * 1.1, p) < activity(M, S, p));
  CHECK_THROWS_AS(activity(M, 0.0, p), DomainError);
}

TEST_CASE("activity at the target methylation is one half across the working range") {
  PhysParams p;
  for (int k = 0; k <= 200; ++k) {
    const double S = 5.0 * p.KI * std::pow(p.KA / (25.0 * p.KI), k / 200.0);
    CHECK(std::abs(activity(preferred_methylation_at_signal(p, S), S, p) - 0.5) <= 1e-12);
  }
}

TEST_CASE("rates") {
  PhysParams p;
  CHECK(tumbling_rate(0.0, p) == doctest::Approx(0.14));
  CHECK(tumbling_rate(0.5, p) == doctest::Approx(1.39).epsilon(1e-14));
  CHECK(adaptation_rate(0.5, p) == 0.0);
  CHECK(adaptation_rate(0.2, p) > 0.0);
  CHECK(adaptation_rate(0.8, p) < 0.0);
  const double h = 1e-6;
  CHECK(tumbling_rate_slope(0.4, p) ==
        doctest::Approx((tumbling_rate(0.4 + h, p) - tumbling_rate(0.4 - h, p)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("gradient number") {
  PhysParams p;
  auto gn = gradient_number(p, 0.0);
  CHECK(gn.g == 0.0);
  CHECK(gn.a1 == 0.5);
  CHECK(gn.a2 == 0.5);

  p.kR = 0.0005;
  gn = gradient_number(p, 3.7e-4);
  CHECK(gn.g == doctest::Approx(5.079).epsilon(1e-3));
  CHECK(gn.a1 == doctest::Approx(-2.039).epsilon(1e-3));
  CHECK(gn.a2 == doctest::Approx(3.039).epsilon(1e-3));

  p.kR = 0.005;
  CHECK(std::abs(gradient_number(p, 7.4e-4).g - 1.0) < 0.02);

  p.kR = 0.0;
  CHECK_THROWS_AS(gradient_number(p, 1e-3), DomainError);
  p.kR = 0.005;
  CHECK_THROWS_AS(gradient_number(p, -1e-3), DomainError);
}

TEST_CASE("a1 + a2 = 1 exactly") {
  PhysParams p;
  for (double kR : {0.0005, 0.001, 0.005, 0.01}) {
    p.kR = kR;
    for (int k = 0; k < 100; ++k) {
      const double G = 1e-6 * std::pow(1.1, k);
      const auto gn = gradient_number(p, G);
      CHECK(gn.a1 + gn.a2 == 1.0);
    }
  }
}

TEST_CASE("regime classification") {
  PhysParams p;
  CHECK(classify_regime(gradient_number(p, 1e-3).g) == Regime::CaseI_Supercritical);
  CHECK(classify_regime(gradient_number(p, 5e-4).g) == Regime::CaseI_Subcritical);
  CHECK(classify_regime(gradient_number(p, 5e-5).g) == Regime::CaseII_Hyperbolic);
  CHECK(classify_regime(gradient_number(p, 5e-6).g) == Regime::CaseII_KellerSegel);
  CHECK(classify_regime(0.0) == Regime::Unbiased);
  CHECK(classify_regime(0.01) == Regime::CaseII_KellerSegel);
  CHECK(classify_regime(0.1) == Regime::CaseII_Hyperbolic);
  CHECK(classify_regime(1.0) == Regime::CaseI_Supercritical);
  CHECK_THROWS_AS(classify_regime(-0.1), DomainError);
  CHECK(to_string(Regime::CaseI_Subcritical) == "CaseI_subcritical");
}

TEST_CASE("regime is monotone in G") {
  PhysParams p;
  for (double kR : {0.0005, 0.005, 0.01}) {
    p.kR = kR;
    int prev = static_cast<int>(classify_regime(0.0));
    for (int k = 0; k < 400; ++k) {
      const double G = 1e-8 * std::pow(1.05, k);
      const int r = static_cast<int>(classify_regime(gradient_number(p, G).g));
      CHECK(r >= prev);
      prev = r;
    }
  }
}

TEST_CASE("infer mu") {
  CHECK(infer_mu(0.01, 0.1) == doctest::Approx(2.0));
  CHECK(std::isnan(infer_mu(0.0, 0.1)));
}

TEST_CASE("domain bounds") {
  PhysParams p;
  const double G = 1e-3;
  const auto [lo, hi] = domain_bounds(p, G);
  CHECK(lo == doctest::Approx(std::log(1.25) / G));
  CHECK(hi == doctest::Approx(2.1093 / G).epsilon(1e-4));
  CHECK(hi - lo == doctest::Approx(1886.0).epsilon(1e-3));
  Environment env{G, lo, hi, true};
  CHECK(signal(p, env, lo) == doctest::Approx(5.0 * p.KI).epsilon(1e-13));
  CHECK(signal(p, env, hi) <= p.KA / 5.0 * (1.0 + 1e-13));
  CHECK_THROWS_AS(domain_bounds(p, 0.0), DomainError);

  const Environment flat = make_environment(p, 0.0, 500.0);
  CHECK(flat.length() == 500.0);
}
