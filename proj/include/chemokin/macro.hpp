#pragma once

// Macroscopic limits on a periodic grid:
//   d_t rho + d_x(kappa rho) = d_x(D0 d_x rho)
// D0 = 0 gives the transport equation. The scheme is explicit: upwind
// advection plus central diffusion, guarded so that it stays positive.

#include <vector>

namespace chemokin {

class MacroField {
 public:
  MacroField(double x_min, double x_max, std::vector<double> rho, double kappa, double D0 = 0.0);

  int cells() const { return static_cast<int>(rho_.size()); }
  double dx() const { return dx_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double x_center(int i) const { return x_min_ + (i + 0.5) * dx_; }
  double kappa() const { return kappa_; }
  double D0() const { return D0_; }
  double time() const { return time_; }
  const std::vector<double>& rho() const { return rho_; }

  /// Largest step keeping every update a convex combination:
  /// dt (|kappa|/dx + 2 D0/dx^2) <= 1.
  double max_stable_dt() const;
  /// Throws ConfigError above max_stable_dt().
  void advance(double dt);
  /// Equal steps of at most cfl * max_stable_dt() up to time t.
  void advance_to(double t, double cfl = 0.9);

  double mass() const;
  /// Circular mean, mapped into [x_min, x_max).
  double center_of_mass() const;
  /// Variance about the plain (non-circular) mean; meaningful while the
  /// profile stays clear of the seam.
  double variance() const;

 private:
  double x_min_, x_max_, dx_;
  std::vector<double> rho_, flux_;
  double kappa_, D0_;
  double time_ = 0.0;
};

std::vector<double> solve_transport(const std::vector<double>& rho0, double x_min, double x_max, double kappa,
                                    double T);
std::vector<double> solve_keller_segel(const std::vector<double>& rho0, double x_min, double x_max, double D0,
                                       double kappa3, double T);

/// L1 distance sum |a - b| dx between two densities on the same grid.
double l1_density_distance(const std::vector<double>& a, const std::vector<double>& b, double dx);

}  // namespace chemokin
