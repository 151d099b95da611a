#pragma once

// Leading-order steady activity distributions Q0+ (up-gradient movers) and
// Q0- (down-gradient movers) in a uniform exponential gradient, with their
// normalization, endpoint power laws and the resulting drift coefficients.
//
// Conventions: Q0± are the "q" variables of the reformulated kinetic model.
// The probability density of (direction, a) is Q0±/(2 N alpha0 a (1-a)) and
// the per-direction curves plotted against a are Q0±/(N alpha0 a (1-a)).

#include <vector>

#include "chemokin/params.hpp"

namespace chemokin {

struct ClosureOptions {
  int nodes = 2048;
  double ratio = 1.05;
  double min_spacing_rel = 1e-9;  // first node offset, relative to support width
};

/// Power-law exponents of Q0 at the support endpoints: (theta0, theta1) on
/// (0,1) for g > 1, (theta2, theta3) on (a1,a2) for 0 < g < 1.
struct Exponents {
  double left = 0.0;
  double right = 0.0;
  bool supercritical = false;
};

Exponents boundary_exponents(const PhysParams& p, double G);

struct Case2Coefficients {
  double kappa3 = 0.0;  // um/s, up-gradient positive
  double D0 = 0.0;      // um^2/s
};

/// Drift and diffusion of the diffusive limit for small gradients.
Case2Coefficients case2_coefficients(const PhysParams& p, double G);

double diffusion_coefficient(const PhysParams& p);

enum class Direction { Plus, Minus };

class ClosureProfile {
 public:
  /// g > 0 profile; g == 0 is rejected (use delta()).
  static ClosureProfile build(const PhysParams& p, double G, const ClosureOptions& opt = {});

  /// Point mass at a = 1/2 for G = 0.
  static ClosureProfile delta(const PhysParams& p, double G = 0.0);

  /// build() for G > 0, delta() for G == 0.
  static ClosureProfile make(const PhysParams& p, double G, const ClosureOptions& opt = {});

  bool is_delta() const { return delta_; }
  const PhysParams& params() const { return p_; }
  double G() const { return G_; }
  double g() const { return gn_.g; }
  double a1() const { return gn_.a1; }
  double a2() const { return gn_.a2; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  double c0() const { return c0_; }
  const Exponents& exponents() const { return theta_; }

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& logw() const { return logw_; }
  const std::vector<double>& qplus() const { return qplus_; }
  const std::vector<double>& qminus() const { return qminus_; }

  /// W(a); throws EndpointError at or beyond a support endpoint.
  double log_weight(double a) const;

  double q(Direction d, double a) const;
  /// Q0±/(N alpha0 a(1-a)); zero outside the support.
  double density(Direction d, double a) const;

  /// Probability that a cell moves in direction d with activity <= a.
  /// The two directions together carry total mass 1.
  double cumulative(Direction d, double a) const;
  double direction_mass(Direction d) const;

  /// Normalization integral evaluated with the stored c0 (should be 1).
  double normalization_integral() const;

  /// Ratio-of-integrals drift speed, um/s.
  double drift_velocity() const;

  double mean_activity() const;
  double activity_variance() const;

 private:
  ClosureProfile() = default;

  double h(double tau) const;          // W' minus its endpoint poles
  double w_smooth(double a) const;     // integral of h from 1/2 to a
  double unnormalized(Direction d, double a) const;
  // Per-direction integral of Q/(a(1-a)) * weight(a) over the support.
  template <class Weight>
  double integrate(Direction d, Weight&& weight) const;
  std::size_t interval_of(double a) const;
  void build_quadrature_cache();

  PhysParams p_;
  double G_ = 0.0;
  GradientNumber gn_;
  bool delta_ = false;
  double lo_ = 0.5, hi_ = 0.5;
  double scale_ = 1.0;  // 1/(4 N alpha0 kR)
  Exponents theta_;
  double c0_ = 1.0;
  std::vector<double> grid_, logw_, wsmooth_, qplus_, qminus_;
  std::vector<double> cum_plus_, cum_minus_;  // normalized masses below each node
  double mass_plus_ = 0.5, mass_minus_ = 0.5;
  // Gauss-Kronrod nodes over every grid interval with Q/(a(1-a)) at c0 = 1.
  std::vector<double> qa_, qw_, qdp_, qdm_;
};

}  // namespace chemokin
