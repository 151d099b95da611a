#pragma once

// Finite-volume solver for the two-velocity kinetic equation in (x, a)
//
//   eps^beta d_t q + eps v d_x q + N alpha0 a(1-a) d_a(Phi~ q) = Z(a) (<q>_v - q)
//
// with Phi~ = -v G/alpha0 + kR (1 - a/a0). The activity axis is discretized
// in the offset u = logit(a) / (N alpha0), where the weight da/(N alpha0
// a(1-a)) becomes du. Cell values are densities with respect to dx du, so
// a cell holds q * dx * du / 2 of the probability (the 1/2 is the velocity
// average).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chemokin/closure.hpp"
#include "chemokin/params.hpp"

namespace chemokin {

struct KineticScaling {
  double eps = 1.0;
  double beta = 1.0;
  double mu = 0.0;  // reporting only

  /// g = O(1): beta = 1.
  static KineticScaling case1(double eps);
  /// g = O(eps^mu): beta = 1 + mu. The drift gradient is eps^mu G_mu.
  static KineticScaling case2(double eps, double mu);
};

/// G entering the activity drift for Case II scaling.
double case2_gradient(double eps, double mu, double G_mu);

struct KineticOptions {
  int x_cells = 256;
  int a_cells = 512;
  // Grid for g >= 1 and g = 0: u in [-u_span, u_span] with a sinh stretch,
  // so cells are finer around a = 1/2 and grow geometrically in a towards
  // 0 and 1. For g = 0 an odd a_cells puts a = 1/2 at a cell centre.
  double u_span = 2.5;
  double stretch = 4.0;
  // Grid for 0 < g < 1: faces exactly at a1 and a2, uniform in u between
  // them, plus margin_cells on each side covering margin * (u2 - u1).
  double margin = 0.25;
  int margin_cells = -1;  // -1: a_cells / 16
  double a_cfl = 0.9;
  unsigned threads = 1;
};

/// N alpha0 a(1-a) (-dir v0 G/alpha0 + kR (1 - a/a0)), in 1/s.
double a_flux_coefficient(const PhysParams& p, double G, double a, int dir);

struct ActivityMarginal {
  std::vector<double> a_faces;
  std::vector<double> mass_plus, mass_minus;  // joint probability per a-cell
  double total() const;
};

class KineticField {
 public:
  KineticField(const PhysParams& p, const Environment& env, const KineticScaling& sc, const KineticOptions& opt = {});

  const PhysParams& params() const { return p_; }
  const Environment& environment() const { return env_; }
  const KineticScaling& scaling() const { return sc_; }
  const KineticOptions& options() const { return opt_; }

  int x_cells() const { return nx_; }
  int a_cells() const { return na_; }
  double dx() const { return dx_; }
  double x_center(int i) const { return env_.x_min + (i + 0.5) * dx_; }
  const std::vector<double>& a_faces() const { return a_face_; }
  const std::vector<double>& u_faces() const { return u_face_; }
  const std::vector<double>& a_centers() const { return a_center_; }
  double du(int j) const { return du_[static_cast<std::size_t>(j)]; }

  double q(int dir, int i, int j) const { return (dir > 0 ? qp_ : qm_)[idx(i, j)]; }
  void set_q(int dir, int i, int j, double value);
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  /// Initial data helpers; both leave the field normalized.
  /// Closure profile in a (exact cell masses) times rho(x).
  void fill_from_closure(const ClosureProfile& prof, const std::vector<double>& rho);
  /// All mass in the a-cell containing `a`, equal in both directions, times rho(x).
  void fill_point(double a, const std::vector<double>& rho);
  void normalize();

  /// Largest dt with x-Courant number 1; at exactly this dt the transport
  /// step is an exact shift by one cell.
  double max_stable_dt() const;
  /// One Strang step: local (a-advection + exchange) dt/2, transport dt,
  /// local dt/2. Throws ConfigError if the x-Courant number exceeds 1.
  void advance(double dt);

  double total_mass() const;
  double min_value() const;
  ActivityMarginal marginal_activity() const;
  /// rho(x) per cell; sum rho dx = total mass.
  std::vector<double> density() const;
  /// Sum over both directions of the L1 distance between joint CDFs in a.
  double w1_to_closure(const ClosureProfile& prof) const;
  /// sum |q - other| dx du / 2 over both directions.
  double l1_distance(const KineticField& other) const;

  std::uint64_t a_substeps() const { return a_substeps_; }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(na_) + static_cast<std::size_t>(j);
  }
  void build_grid();
  void local_step(double h);
  void exchange(int i0, int i1);  // half substep, factors in decay_
  void a_advect(double h, int i0, int i1);
  void transport(double dt);
  template <class F>
  void parallel_rows(int n, F&& fn) const;

  PhysParams p_;
  Environment env_;
  KineticScaling sc_;
  KineticOptions opt_;
  int nx_ = 0, na_ = 0;
  double dx_ = 0.0;
  std::vector<double> u_face_, a_face_, a_center_, du_;
  std::vector<double> vel_plus_, vel_minus_;  // u-velocity at faces, already divided by eps^beta
  std::vector<double> zrate_;                 // Z at cell centres / eps^beta
  double a_dt_max_ = 0.0;
  std::vector<double> qp_, qm_, scratch_;
  double time_ = 0.0;
  double cached_h_ = -1.0;
  std::vector<double> decay_;
  std::uint64_t a_substeps_ = 0;
};

struct KineticSteadyResult {
  bool converged = false;
  double t = 0.0;
  double rate = 0.0;  // last ||dq/dt||_1 / ||q||_1
  std::size_t steps = 0;
};

/// Step with `dt` until ||dq/dt||_1 <= tol ||q||_1 or `max_time` elapses.
KineticSteadyResult run_kinetic_to_steady(KineticField& f, double dt, double tol, double max_time);

}  // namespace chemokin
