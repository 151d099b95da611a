#include "chemokin/macro.hpp"

#include <algorithm>
#include <cmath>

#include "chemokin/error.hpp"

namespace chemokin {

MacroField::MacroField(double x_min, double x_max, std::vector<double> rho, double kappa, double D0)
    : x_min_(x_min), x_max_(x_max), rho_(std::move(rho)), kappa_(kappa), D0_(D0) {
  if (!(x_max > x_min)) throw ConfigError("macro domain needs x_max > x_min");
  if (rho_.size() < 2) throw ConfigError("macro grid needs at least 2 cells");
  if (!std::isfinite(kappa_) || !(D0_ >= 0.0) || !std::isfinite(D0_)) {
    throw ConfigError("macro coefficients need finite kappa and D0 >= 0");
  }
  for (double r : rho_) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("macro initial density must be finite and >= 0");
  }
  dx_ = (x_max_ - x_min_) / double(rho_.size());
  flux_.assign(rho_.size(), 0.0);
}

double MacroField::max_stable_dt() const {
  const double rate = std::abs(kappa_) / dx_ + 2.0 * D0_ / (dx_ * dx_);
  return rate > 0.0 ? 1.0 / rate : INFINITY;
}

void MacroField::advance(double dt) {
  if (!(dt > 0.0)) throw ConfigError("macro time step must be > 0");
  if (dt > max_stable_dt() * (1.0 + 1e-12)) throw ConfigError("macro time step violates the stability bound");
  const std::size_t n = rho_.size();
  const double kp = std::max(kappa_, 0.0), km = std::min(kappa_, 0.0);
  const double dcoef = D0_ / dx_;
  // flux_[i] sits on the right face of cell i.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = i + 1 == n ? 0 : i + 1;
    flux_[i] = kp * rho_[i] + km * rho_[r] - dcoef * (rho_[r] - rho_[i]);
  }
  const double c = dt / dx_;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t l = i == 0 ? n - 1 : i - 1;
    rho_[i] -= c * (flux_[i] - flux_[l]);
  }
  time_ += dt;
}

void MacroField::advance_to(double t, double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("macro cfl must be in (0, 1]");
  const double span = t - time_;
  if (span <= 0.0) return;
  const double h = cfl * max_stable_dt();
  const auto steps = static_cast<long long>(std::isfinite(h) ? std::ceil(span / h) : 1);
  const double dt = span / double(steps);
  for (long long s = 0; s < steps; ++s) advance(dt);
  time_ = t;
}

double MacroField::mass() const {
  double s = 0.0;
  for (double r : rho_) s += r;
  return s * dx_;
}

double MacroField::center_of_mass() const {
  const double L = x_max_ - x_min_;
  double c = 0.0, s = 0.0;
  for (int i = 0; i < cells(); ++i) {
    const double th = 2.0 * M_PI * (x_center(i) - x_min_) / L;
    c += rho_[i] * std::cos(th);
    s += rho_[i] * std::sin(th);
  }
  double th = std::atan2(s, c);
  if (th < 0.0) th += 2.0 * M_PI;
  return x_min_ + th / (2.0 * M_PI) * L;
}

double MacroField::variance() const {
  double m0 = 0.0, m1 = 0.0;
  for (int i = 0; i < cells(); ++i) {
    m0 += rho_[i];
    m1 += rho_[i] * x_center(i);
  }
  const double mean = m1 / m0;
  double v = 0.0;
  for (int i = 0; i < cells(); ++i) v += rho_[i] * (x_center(i) - mean) * (x_center(i) - mean);
  return v / m0;
}

std::vector<double> solve_transport(const std::vector<double>& rho0, double x_min, double x_max, double kappa,
                                    double T) {
  return solve_keller_segel(rho0, x_min, x_max, 0.0, kappa, T);
}

std::vector<double> solve_keller_segel(const std::vector<double>& rho0, double x_min, double x_max, double D0,
                                       double kappa3, double T) {
  MacroField f(x_min, x_max, rho0, kappa3, D0);
  f.advance_to(T);
  return f.rho();
}

double l1_density_distance(const std::vector<double>& a, const std::vector<double>& b, double dx) {
  if (a.size() != b.size()) throw DomainError("l1_density_distance: grids differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s * dx;
}

}  // namespace chemokin
