#include <algorithm>
#include <cmath>
#include <vector>

#include "chemokin/closure.hpp"
#include "chemokin/error.hpp"
#include "doctest.h"
#include "oracles/closure_oracle.hpp"

using namespace chemokin;

namespace {

PhysParams with_kR(double kR) {
  PhysParams p;
  p.kR = kR;
  return p;
}

oracle::WeightInputs oracle_inputs(const PhysParams& p, double G) {
  return {p.v0, p.kR, p.a0, p.alpha0, p.z0, p.tau0, static_cast<int>(p.H), p.N, G};
}

}  // namespace

TEST_CASE("endpoint exponent at a = 0 for the slow-adaptation sweep") {
  const PhysParams p = with_kR(0.0005);
  CHECK(std::abs(boundary_exponents(p, 3.7e-4).left - 1.1072) <= 5e-4);
  CHECK(std::abs(boundary_exponents(p, 3.9e-4).left - 0.9925) <= 5e-4);
  CHECK(std::abs(boundary_exponents(p, 4.0e-4).left - 0.9419) <= 5e-4);
  CHECK(boundary_exponents(p, 3.7e-4).supercritical);
}

TEST_CASE("endpoint exponents are positive and match the pole residues") {
  const PhysParams p = with_kR(0.005);
  for (double G : {5e-5, 2e-4, 5e-4, 7e-4, 8e-4, 1e-3, 2e-3}) {
    const auto e = boundary_exponents(p, G);
    CHECK(e.left > 0.0);
    CHECK(e.right > 0.0);
    // Residue of the log-weight integrand at each endpoint.
    const auto in = oracle_inputs(p, G);
    const auto gn = gradient_number(p, G);
    const double lo = e.supercritical ? 0.0 : gn.a1;
    const double hi = e.supercritical ? 1.0 : gn.a2;
    const double d = 1e-7;
    CHECK(oracle::integrand(in, lo + d) * d == doctest::Approx(e.left).epsilon(1e-5));
    CHECK(-oracle::integrand(in, hi - d) * d == doctest::Approx(e.right).epsilon(1e-5));
  }
}

TEST_CASE("degenerate and unbiased cases are rejected by the exponents") {
  const PhysParams p = with_kR(0.005);
  const double G1 = p.kR * p.alpha0 / p.v0;
  CHECK_THROWS_AS(boundary_exponents(p, G1), SingularCaseError);
  CHECK_THROWS_AS(boundary_exponents(p, 0.0), SingularCaseError);
  CHECK_THROWS_AS(ClosureProfile::build(p, G1), SingularCaseError);
  CHECK_THROWS_AS(ClosureProfile::build(p, 0.0), SingularCaseError);
}

TEST_CASE("log weight against independent oracles") {
  struct Case {
    double kR, G;
    std::vector<double> points;
  };
  const std::vector<Case> cases = {
      {0.005, 1e-3, {0.3, 0.7, 0.05, 0.95}},
      {0.005, 2e-3, {0.3, 0.7}},
      {0.005, 5e-4, {0.3, 0.7, 0.2}},
      {0.0005, 3.9e-4, {0.3, 0.7, 0.01}},
  };
  for (const auto& c : cases) {
    const PhysParams p = with_kR(c.kR);
    const auto prof = ClosureProfile::build(p, c.G);
    CHECK(prof.log_weight(0.5) == 0.0);
    const auto in = oracle_inputs(p, c.G);
    for (double a : c.points) {
      const double w = prof.log_weight(a);
      const double exact = oracle::weight_partial_fractions(in, a);
      CHECK(std::abs(w - exact) <= 1e-8 * std::max(1.0, std::abs(exact)));
      if (a >= 0.2 && a <= 0.8) {
        CHECK(std::abs(w - oracle::weight_trapezoid(in, a)) <= 1e-8);
      }
    }
  }
}

TEST_CASE("log weight is maximal at one half and rejects endpoints") {
  const auto prof = ClosureProfile::build(with_kR(0.005), 5e-4);
  for (double a : {0.2, 0.3, 0.45, 0.55, 0.8}) CHECK(prof.log_weight(a) < 0.0);
  CHECK_THROWS_AS(prof.log_weight(prof.a1()), EndpointError);
  CHECK_THROWS_AS(prof.log_weight(prof.a2()), EndpointError);
  CHECK_THROWS_AS(prof.log_weight(0.1), EndpointError);
}

TEST_CASE("log weight minus the endpoint logarithm stays bounded") {
  const auto prof = ClosureProfile::build(with_kR(0.005), 5e-4);
  const auto th = prof.exponents();
  std::vector<double> left, right;
  for (int k = 3; k <= 10; ++k) {
    const double d = std::pow(10.0, -k);
    left.push_back(prof.log_weight(prof.a1() + d) - th.left * std::log(d));
    right.push_back(prof.log_weight(prof.a2() - d) - th.right * std::log(d));
  }
  // The remainders converge: successive changes shrink roughly tenfold.
  for (std::size_t i = 2; i < left.size(); ++i) {
    CHECK(std::abs(left[i] - left[i - 1]) <= 0.2 * std::abs(left[1] - left[0]) + 1e-9);
    CHECK(std::abs(right[i] - right[i - 1]) <= 0.2 * std::abs(right[1] - right[0]) + 1e-9);
  }
}

TEST_CASE("profile values at one half") {
  const auto prof = ClosureProfile::build(with_kR(0.005), 1e-3);
  const auto& grid = prof.grid();
  const auto it = std::find(grid.begin(), grid.end(), 0.5);
  REQUIRE(it != grid.end());
  const std::size_t i = static_cast<std::size_t>(it - grid.begin());
  CHECK(prof.qplus()[i] == doctest::Approx(prof.c0()).epsilon(1e-14));
  CHECK(prof.qminus()[i] == doctest::Approx(prof.c0()).epsilon(1e-14));
}

TEST_CASE("normalization") {
  for (double kR : {0.0005, 0.005, 0.01}) {
    for (double G : {5e-5, 5e-4, 1e-3, 2e-3}) {
      const PhysParams p = with_kR(kR);
      if (std::abs(gradient_number(p, G).g - 1.0) < 0.05) continue;
      const auto prof = ClosureProfile::build(p, G);
      CHECK(prof.c0() > 0.0);
      CHECK(std::abs(prof.normalization_integral() - 1.0) <= 1e-8);
      CHECK(prof.direction_mass(Direction::Plus) + prof.direction_mass(Direction::Minus) ==
            doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("normalization constant is stable under grid refinement") {
  for (double G : {5e-4, 1e-3}) {
    const PhysParams p = with_kR(0.005);
    ClosureOptions coarse;
    ClosureOptions fine;
    fine.nodes = 2 * coarse.nodes;
    const double c1 = ClosureProfile::build(p, G, coarse).c0();
    const double c2 = ClosureProfile::build(p, G, fine).c0();
    CHECK(std::abs(c1 - c2) <= 1e-6 * c2);
  }
}

TEST_CASE("normalization holds for a doubled cluster size") {
  PhysParams p = with_kR(0.005);
  p.N = 12;
  for (double G : {5e-4, 1e-3}) {
    const auto prof = ClosureProfile::build(p, G);
    CHECK(std::abs(prof.normalization_integral() - 1.0) <= 1e-8);
  }
}

TEST_CASE("ratio identity between the two directions") {
  for (double G : {5e-5, 5e-4, 1e-3, 2e-3}) {
    const auto prof = ClosureProfile::build(with_kR(0.005), G);
    const auto& a = prof.grid();
    double qmax = 0.0, err = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      qmax = std::max(qmax, prof.qplus()[i]);
      err = std::max(err, std::abs((a[i] - prof.a1()) * prof.qplus()[i] -
                                   (prof.a2() - a[i]) * prof.qminus()[i]));
    }
    CHECK(err / qmax <= 1e-10);
  }
}

TEST_CASE("profile satisfies the steady activity equations") {
  for (double G : {5e-4, 1e-3}) {
    const PhysParams p = with_kR(0.005);
    const auto prof = ClosureProfile::build(p, G);
    const double s = 1.0 / (4.0 * p.N * p.alpha0 * p.kR);
    const double h = 1e-3;
    auto fp = [&](double a) { return (prof.a1() - a) * prof.q(Direction::Plus, a); };
    auto fm = [&](double a) { return (prof.a2() - a) * prof.q(Direction::Minus, a); };
    auto d5 = [h](auto&& f, double a) {
      return (-f(a + 2 * h) + 8 * f(a + h) - 8 * f(a - h) + f(a - 2 * h)) / (12 * h);
    };
    double res = 0.0, scale = 0.0;
    const double lo = std::max(prof.support_lo(), 0.0) + 0.05;
    const double hi = std::min(prof.support_hi(), 1.0) - 0.05;
    for (int k = 0; k <= 200; ++k) {
      const double a = lo + (hi - lo) * k / 200.0;
      const double qp = prof.q(Direction::Plus, a), qm = prof.q(Direction::Minus, a);
      const double rhs = tumbling_rate(a, p) * s * (qm - qp);
      const double lhs_p = a * (1 - a) * d5(fp, a);
      const double lhs_m = a * (1 - a) * d5(fm, a);
      res = std::max({res, std::abs(lhs_p - rhs), std::abs(lhs_m + rhs)});
      scale = std::max(scale, std::abs(rhs));
    }
    CHECK(res / scale <= 1e-6);
  }
}

TEST_CASE("profile power laws match the endpoint exponents") {
  const auto prof = ClosureProfile::build(with_kR(0.005), 5e-4);
  const auto th = prof.exponents();
  std::vector<double> rem;
  for (int k = 3; k <= 9; ++k) {
    const double d = std::pow(10.0, -k);
    rem.push_back(std::log(prof.q(Direction::Plus, prof.a1() + d)) - (th.left - 1.0) * std::log(d));
  }
  for (std::size_t i = 2; i < rem.size(); ++i) {
    CHECK(std::abs(rem[i] - rem[i - 1]) <= 0.2 * std::abs(rem[1] - rem[0]) + 1e-9);
  }
  // The minus direction carries no 1/(a - a1) factor: exponent theta2.
  // (At a2 the exponent is in the thousands and Q underflows.)
  std::vector<double> remm;
  for (int k = 3; k <= 9; ++k) {
    const double d = std::pow(10.0, -k);
    remm.push_back(std::log(prof.q(Direction::Minus, prof.a1() + d)) - th.left * std::log(d));
  }
  for (std::size_t i = 2; i < remm.size(); ++i) {
    CHECK(std::abs(remm[i] - remm[i - 1]) <= 0.2 * std::abs(remm[1] - remm[0]) + 1e-9);
  }
}

TEST_CASE("density phase transition at a = 0") {
  const PhysParams p = with_kR(0.0005);
  const auto above = ClosureProfile::build(p, 3.7e-4);  // theta0 > 1: density -> 0
  const auto below = ClosureProfile::build(p, 4.0e-4);  // theta0 < 1: density -> infinity
  for (std::size_t i = 0; i < 10; ++i) {
    const double a = above.grid()[i], b = above.grid()[i + 1];
    CHECK(above.density(Direction::Plus, a) < above.density(Direction::Plus, b));
    const double c = below.grid()[i], d = below.grid()[i + 1];
    CHECK(below.density(Direction::Plus, c) > below.density(Direction::Plus, d));
  }
}

TEST_CASE("subcritical profile vanishes outside its support") {
  const auto prof = ClosureProfile::build(with_kR(0.005), 5e-4);
  CHECK(prof.support_lo() == doctest::Approx(0.157).epsilon(1e-2));
  CHECK(prof.density(Direction::Plus, 0.1) == 0.0);
  CHECK(prof.density(Direction::Minus, 0.9) == 0.0);
  CHECK(prof.cumulative(Direction::Plus, prof.a1() - 1e-3) == 0.0);
  CHECK(prof.cumulative(Direction::Minus, prof.a2() + 1e-3) == prof.direction_mass(Direction::Minus));
}

TEST_CASE("cumulative masses are monotone and consistent") {
  const auto prof = ClosureProfile::build(with_kR(0.005), 1e-3);
  for (Direction d : {Direction::Plus, Direction::Minus}) {
    double prev = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      const double a = k / 1000.0;
      const double c = prof.cumulative(d, a);
      CHECK(c >= prev - 1e-15);
      prev = c;
    }
    CHECK(prev == doctest::Approx(prof.direction_mass(d)).epsilon(1e-12));
  }
  // Drift speed equals v0 times the direction imbalance.
  const double imbalance = prof.direction_mass(Direction::Plus) - prof.direction_mass(Direction::Minus);
  CHECK(prof.drift_velocity() == doctest::Approx(prof.params().v0 * imbalance).epsilon(1e-7));
}

TEST_CASE("drift speed values") {
  // Reference values from adaptive quadrature of the ratio-of-integrals form
  // carried out independently (double-exponential rules, no pole subtraction).
  const PhysParams p = with_kR(0.005);
  const std::vector<std::pair<double, double>> ref = {
      {1e-5, 0.025954}, {5e-5, 0.13088}, {1e-4, 0.26902}, {3e-4, 1.07627},
      {5e-4, 2.02244},  {1e-3, 2.75209}, {1.5e-3, 2.74719}, {2e-3, 2.57341}};
  for (const auto& [G, kappa] : ref) {
    const auto prof = ClosureProfile::build(p, G);
    CHECK(prof.drift_velocity() == doctest::Approx(kappa).epsilon(2e-4));
    CHECK(prof.drift_velocity() < p.v0);
    CHECK(prof.drift_velocity() > 0.0);
  }
}

TEST_CASE("drift speed rises then falls with the gradient") {
  const PhysParams p = with_kR(0.005);
  std::vector<double> k;
  for (int i = 0; i <= 40; ++i) {
    const double G = 1e-5 * std::pow(200.0, i / 40.0);
    if (std::abs(gradient_number(p, G).g - 1.0) < 1e-3) continue;
    k.push_back(ClosureProfile::build(p, G).drift_velocity());
  }
  const auto imax = static_cast<std::size_t>(std::max_element(k.begin(), k.end()) - k.begin());
  CHECK(imax > 0);
  CHECK(imax + 1 < k.size());
  CHECK(k.back() < k[imax]);
}

TEST_CASE("point-mass closure") {
  const PhysParams p;
  const auto d = ClosureProfile::delta(p);
  CHECK(d.is_delta());
  CHECK(d.drift_velocity() == 0.0);
  CHECK(d.mean_activity() == 0.5);
  CHECK(d.activity_variance() == 0.0);
  CHECK(d.cumulative(Direction::Plus, 0.49) == 0.0);
  CHECK(d.cumulative(Direction::Plus, 0.5) == 0.5);
  CHECK_THROWS_AS(ClosureProfile::delta(p, 1e-4), DomainError);
  CHECK_THROWS_AS(d.density(Direction::Plus, 0.5), SingularCaseError);
  CHECK(ClosureProfile::make(p, 0.0).is_delta());
}

TEST_CASE("small-gradient drift and diffusion coefficients") {
  const PhysParams p;
  const auto c0 = case2_coefficients(p, 0.0);
  CHECK(c0.kappa3 == 0.0);
  CHECK(c0.D0 == doctest::Approx(136.125 / 1.39).epsilon(1e-12));
  CHECK(c0.D0 == doctest::Approx(97.93).epsilon(1e-4));
  // (N/4) v0^2 Z'(1/2)/Z(1/2)^2 with Z'(1/2) = H/(tau0 a0) = 25.
  const double per_G = 1.5 * 136.125 * 25.0 / (1.39 * 1.39);
  CHECK(case2_coefficients(p, 1e-5).kappa3 == doctest::Approx(per_G * 1e-5).epsilon(1e-12));
  CHECK(per_G == doctest::Approx(2642.04).epsilon(1e-5));
  // Agrees with the full closure drift at a small gradient.
  const double k2 = ClosureProfile::build(p, 1e-5).drift_velocity();
  CHECK(std::abs(case2_coefficients(p, 1e-5).kappa3 - k2) <= 0.03 * k2);
  CHECK_THROWS_AS(case2_coefficients(p, -1.0), DomainError);
}

TEST_CASE("closure outputs do not depend on the reference methylation") {
  PhysParams p1 = with_kR(0.005), p2 = with_kR(0.005);
  p2.m0 = 7.25;
  const auto c1 = ClosureProfile::build(p1, 5e-4), c2 = ClosureProfile::build(p2, 5e-4);
  CHECK(c1.c0() == c2.c0());
  CHECK(c1.qplus() == c2.qplus());
  CHECK(c1.qminus() == c2.qminus());
  CHECK(c1.drift_velocity() == c2.drift_velocity());
}

TEST_CASE("mean activity stays near the adapted value") {
  const auto prof = ClosureProfile::build(with_kR(0.005), 5e-5);
  CHECK(prof.mean_activity() == doctest::Approx(0.5).epsilon(5e-3));
  CHECK(prof.activity_variance() > 0.0);
  CHECK(prof.activity_variance() < std::pow(prof.a2() - prof.a1(), 2));
}
