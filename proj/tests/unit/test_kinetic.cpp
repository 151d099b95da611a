#include <cmath>
#include <random>
#include <vector>

#include "chemokin/closure.hpp"
#include "chemokin/error.hpp"
#include "chemokin/kinetic.hpp"
#include "doctest.h"

using namespace chemokin;

namespace {

Environment periodic(double G, double L) {
  Environment env;
  env.G = G;
  env.x_min = 0.0;
  env.x_max = L;
  return env;
}

void fill_random(KineticField& f, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int d : {1, -1}) {
    for (int i = 0; i < f.x_cells(); ++i) {
      for (int j = 0; j < f.a_cells(); ++j) f.set_q(d, i, j, u(rng) < 0.2 ? 0.0 : u(rng));
    }
  }
  f.normalize();
}

double mean_activity(const KineticField& f) {
  const auto m = f.marginal_activity();
  double s = 0.0;
  for (int j = 0; j < f.a_cells(); ++j) s += (m.mass_plus[j] + m.mass_minus[j]) * f.a_centers()[j];
  return s / m.total();
}

double steady_w1(double G, int cells) {
  PhysParams p;
  KineticOptions o;
  o.x_cells = 1;
  o.a_cells = cells;
  KineticField f(p, periodic(G, 1.0), KineticScaling::case1(1.0), o);
  f.fill_point(0.5, {});
  const auto r = run_kinetic_to_steady(f, 1.0, 1e-9, 1e5);
  CHECK(r.converged);
  return f.w1_to_closure(ClosureProfile::make(p, G));
}

}  // namespace

TEST_CASE("activity flux coefficient") {
  PhysParams p;
  for (double G : {0.0, 5e-4, 2e-3}) {
    for (int d : {1, -1}) {
      CHECK(a_flux_coefficient(p, G, 0.0, d) == 0.0);
      CHECK(a_flux_coefficient(p, G, 1.0, d) == 0.0);
    }
  }
  CHECK(a_flux_coefficient(p, 0.0, p.a0, 1) == 0.0);
  const auto gn = gradient_number(p, 5e-4);
  CHECK(gn.a1 == doctest::Approx(0.157).epsilon(2e-3));
  CHECK(std::abs(a_flux_coefficient(p, 5e-4, gn.a1, 1)) < 1e-15);
  CHECK(std::abs(a_flux_coefficient(p, 5e-4, gn.a2, -1)) < 1e-15);
  CHECK(a_flux_coefficient(p, 5e-4, 0.5, 1) < 0.0);
  CHECK(a_flux_coefficient(p, 5e-4, 0.5, -1) > 0.0);
}

TEST_CASE("mass and positivity on random data") {
  PhysParams p;
  KineticOptions o;
  o.x_cells = 24;
  o.a_cells = 48;
  for (double G : {0.0, 5e-5, 5e-4, 2e-3}) {
    for (double nu : {1.0, 0.6}) {
      KineticField f(p, periodic(G, 50.0), KineticScaling::case1(0.1), o);
      fill_random(f, 17);
      double prev = f.total_mass();
      double worst = 0.0;
      for (int s = 0; s < 300; ++s) {
        f.advance(nu * f.max_stable_dt());
        const double m = f.total_mass();
        worst = std::max(worst, std::abs(m - prev) / prev);
        prev = m;
      }
      CHECK(worst < 1e-12);
      CHECK(f.min_value() >= 0.0);
      double rho_sum = 0.0;
      for (double r : f.density()) rho_sum += r * f.dx();
      CHECK(rho_sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("time step above the transport bound is rejected") {
  PhysParams p;
  KineticOptions o;
  o.x_cells = 8;
  o.a_cells = 16;
  KineticField f(p, periodic(1e-3, 10.0), KineticScaling::case1(0.1), o);
  f.fill_point(0.5, {});
  CHECK_THROWS_AS(f.advance(1.01 * f.max_stable_dt()), ConfigError);
  CHECK_THROWS_AS(f.advance(0.0), ConfigError);
  CHECK_THROWS_AS(KineticField(p, periodic(0.0, 1.0), KineticScaling{0.1, 2.5, 0.0}, o), ConfigError);
  CHECK_THROWS_AS(KineticScaling::case2(0.1, 1.5), ConfigError);
}

TEST_CASE("results do not depend on the thread count") {
  PhysParams p;
  KineticOptions o;
  o.x_cells = 30;
  o.a_cells = 40;
  KineticField a(p, periodic(1e-3, 30.0), KineticScaling::case1(0.2), o);
  o.threads = 4;
  KineticField b(p, periodic(1e-3, 30.0), KineticScaling::case1(0.2), o);
  fill_random(a, 5);
  fill_random(b, 5);
  for (int s = 0; s < 50; ++s) {
    a.advance(0.7 * a.max_stable_dt());
    b.advance(0.7 * b.max_stable_dt());
  }
  CHECK(a.l1_distance(b) == 0.0);
}

TEST_CASE("support stays inside [a1, a2]") {
  PhysParams p;
  for (double G : {5e-4, 5e-5}) {
    const auto gn = gradient_number(p, G);
    KineticOptions o;
    o.x_cells = 16;
    o.a_cells = 96;
    KineticField f(p, periodic(G, 40.0), KineticScaling::case1(0.2), o);
    std::vector<double> rho(16);
    for (int i = 0; i < 16; ++i) rho[i] = 1.0 + 0.5 * std::sin(0.4 * i);
    f.fill_from_closure(ClosureProfile::make(p, G), rho);
    for (int s = 0; s < 2000; ++s) f.advance(f.max_stable_dt());
    const auto m = f.marginal_activity();
    double outside = 0.0;
    for (int j = 0; j < f.a_cells(); ++j) {
      const bool in = f.a_faces()[j] >= gn.a1 && f.a_faces()[j + 1] <= gn.a2;
      if (!in) outside += m.mass_plus[j] + m.mass_minus[j];
    }
    CHECK(outside <= 1e-10);
  }
}

TEST_CASE("unbiased activity funnels to one half") {
  PhysParams p;
  KineticOptions o;
  o.x_cells = 1;
  o.a_cells = 129;
  KineticField f(p, periodic(0.0, 1.0), KineticScaling::case1(1.0), o);
  f.fill_point(0.3, {});
  std::vector<double> means;
  for (int s = 0; s < 400; ++s) {
    f.advance(5.0);
    means.push_back(mean_activity(f));
  }
  for (std::size_t k = 10; k < means.size(); ++k) CHECK(means[k] >= means[k - 1] - 1e-15);
  CHECK(means.back() == doctest::Approx(0.5).epsilon(1e-6));
  // Symmetric data: the two directions coincide exactly.
  const auto m = f.marginal_activity();
  CHECK(m.mass_plus == m.mass_minus);
}

TEST_CASE("uniform data keeps a uniform density") {
  PhysParams p;
  KineticOptions o;
  o.x_cells = 20;
  o.a_cells = 64;
  KineticField f(p, periodic(1e-3, 20.0), KineticScaling::case1(0.1), o);
  f.fill_point(0.4, {});
  for (int s = 0; s < 200; ++s) f.advance(0.8 * f.max_stable_dt());
  const auto rho = f.density();
  for (double r : rho) CHECK(r == doctest::Approx(1.0 / 20.0).epsilon(1e-12));
}

TEST_CASE("discrete steady state converges to the closure at first order") {
  const double w256 = steady_w1(1e-3, 256);
  const double w512 = steady_w1(1e-3, 512);
  const double w1024 = steady_w1(1e-3, 1024);
  CHECK(w256 / w512 >= 1.8);
  CHECK(w512 / w1024 >= 1.8);
  CHECK(w1024 < 0.003);
}

TEST_CASE("projected closure is nearly stationary") {
  PhysParams p;
  const auto prof = ClosureProfile::make(p, 1e-3);
  auto drift = [&](int cells) {
    KineticOptions o;
    o.x_cells = 1;
    o.a_cells = cells;
    KineticField f(p, periodic(1e-3, 1.0), KineticScaling::case1(1.0), o);
    f.fill_from_closure(prof, {});
    CHECK(f.w1_to_closure(prof) < 1e-12);
    const KineticField start = f;
    for (int s = 0; s < 10; ++s) f.advance(0.1);
    return f.l1_distance(start);
  };
  const double d256 = drift(256), d512 = drift(512), d1024 = drift(1024);
  CHECK(d512 < 0.7 * d256);
  CHECK(d1024 < 0.7 * d512);
}
