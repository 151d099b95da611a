#include "chemokin/closure.hpp"

#include <algorithm>
#include <cmath>

#include "chemokin/error.hpp"
#include "chemokin/quadrature.hpp"

namespace chemokin {

namespace {

constexpr double kIntervalTol = 1e-15;

bool is_degenerate(double g) { return std::abs(g - 1.0) < 1e-12; }

double scale_of(const PhysParams& p) { return 1.0 / (4.0 * p.N * p.alpha0 * p.kR); }

}  // namespace

Exponents boundary_exponents(const PhysParams& p, double G) {
  const GradientNumber gn = gradient_number(p, G);
  if (!(gn.g > 0.0)) throw SingularCaseError("boundary_exponents: g = 0, the closure is a point mass");
  if (is_degenerate(gn.g)) throw SingularCaseError("boundary_exponents: g = 1 makes a1 = 0 (degenerate)");
  const double s = scale_of(p);
  Exponents e;
  if (gn.g > 1.0) {
    e.supercritical = true;
    e.left = -p.z0 * s / (gn.a1 * gn.a2);
    e.right = tumbling_rate(1.0, p) * s / ((1.0 - gn.a1) * (gn.a2 - 1.0));
  } else {
    e.left = tumbling_rate(gn.a1, p) * s / (gn.a1 * (1.0 - gn.a1));
    e.right = tumbling_rate(gn.a2, p) * s / (gn.a2 * (1.0 - gn.a2));
  }
  if (!(e.left > 0.0) || !(e.right > 0.0)) {
    throw IntegrabilityError("boundary_exponents: non-positive endpoint exponent");
  }
  return e;
}

double diffusion_coefficient(const PhysParams& p) {
  return p.v0 * p.v0 / (p.z0 + 1.0 / p.tau0);
}

Case2Coefficients case2_coefficients(const PhysParams& p, double G) {
  if (!(G >= 0.0)) throw DomainError("case2_coefficients: G must be >= 0");
  Case2Coefficients c;
  c.D0 = diffusion_coefficient(p);
  // (1/Z)'(1/2) = -Z'(1/2)/Z(1/2)^2 < 0; the drift is oriented up the gradient.
  const double z = tumbling_rate(0.5, p);
  const double inv_slope = tumbling_rate_slope(0.5, p) / (z * z);
  c.kappa3 = 0.25 * p.N * p.v0 * p.v0 * G * inv_slope;
  return c;
}

ClosureProfile ClosureProfile::delta(const PhysParams& p, double G) {
  p.validate();
  if (G != 0.0) throw DomainError("ClosureProfile::delta: only valid for G = 0");
  ClosureProfile c;
  c.p_ = p;
  c.G_ = 0.0;
  c.gn_ = gradient_number(p, 0.0);
  c.delta_ = true;
  c.lo_ = c.hi_ = 0.5;
  c.grid_ = {0.5};
  c.logw_ = {0.0};
  c.wsmooth_ = {0.0};
  // Weight of the point mass in the q variables: N alpha0 / 4 per direction.
  c.qplus_ = {0.25 * p.N * p.alpha0};
  c.qminus_ = c.qplus_;
  c.c0_ = 0.0;
  return c;
}

ClosureProfile ClosureProfile::make(const PhysParams& p, double G, const ClosureOptions& opt) {
  if (G == 0.0) return delta(p, 0.0);
  return build(p, G, opt);
}

ClosureProfile ClosureProfile::build(const PhysParams& p, double G, const ClosureOptions& opt) {
  p.validate();
  if (!(G > 0.0)) throw SingularCaseError("ClosureProfile::build: G = 0, use ClosureProfile::delta");
  if (opt.nodes < 16) throw ConfigError("closure.nodes must be at least 16");
  if (!(opt.ratio >= 1.0)) throw ConfigError("closure.ratio must be >= 1");
  if (!(opt.min_spacing_rel > 0.0 && opt.min_spacing_rel < 1e-2)) {
    throw ConfigError("closure.min_spacing_rel must lie in (0, 1e-2)");
  }

  ClosureProfile c;
  c.p_ = p;
  c.G_ = G;
  c.gn_ = gradient_number(p, G);
  c.theta_ = boundary_exponents(p, G);
  c.scale_ = scale_of(p);
  if (c.theta_.supercritical) {
    c.lo_ = 0.0;
    c.hi_ = 1.0;
  } else {
    c.lo_ = c.gn_.a1;
    c.hi_ = c.gn_.a2;
  }
  const double width = c.hi_ - c.lo_;
  c.grid_ = clustered_grid(c.lo_, c.hi_, 0.5, opt.nodes, opt.ratio, opt.min_spacing_rel * width);

  const std::size_t n = c.grid_.size();
  const std::size_t mid =
      static_cast<std::size_t>(std::find(c.grid_.begin(), c.grid_.end(), 0.5) - c.grid_.begin());
  c.wsmooth_.assign(n, 0.0);
  auto hf = [&c](double t) { return c.h(t); };
  for (std::size_t i = mid; i + 1 < n; ++i) {
    c.wsmooth_[i + 1] = c.wsmooth_[i] + gk15_adaptive(hf, c.grid_[i], c.grid_[i + 1], kIntervalTol, 4);
  }
  for (std::size_t i = mid; i > 0; --i) {
    c.wsmooth_[i - 1] = c.wsmooth_[i] - gk15_adaptive(hf, c.grid_[i - 1], c.grid_[i], kIntervalTol, 4);
  }

  // Normalize with c0 = 1 first.
  c.c0_ = 1.0;
  c.build_quadrature_cache();
  const double two_n_alpha = 2.0 * p.N * p.alpha0;
  const double total = (c.integrate(Direction::Plus, [](double) { return 1.0; }) +
                        c.integrate(Direction::Minus, [](double) { return 1.0; })) /
                       two_n_alpha;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw IntegrabilityError("ClosureProfile::build: normalization integral is not finite");
  }
  c.c0_ = 1.0 / total;

  c.logw_.resize(n);
  c.qplus_.resize(n);
  c.qminus_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = c.grid_[i];
    c.logw_[i] = c.log_weight(a);
    c.qplus_[i] = c.c0_ * c.unnormalized(Direction::Plus, a);
    c.qminus_[i] = c.c0_ * c.unnormalized(Direction::Minus, a);
  }

  // Cumulative per-direction masses at the nodes.
  for (Direction d : {Direction::Plus, Direction::Minus}) {
    auto& cum = d == Direction::Plus ? c.cum_plus_ : c.cum_minus_;
    cum.assign(n, 0.0);
    const double left_gamma = d == Direction::Plus || c.theta_.supercritical ? c.theta_.left - 1.0
                                                                             : c.theta_.left;
    const double f0 = c.density(d, c.grid_[0]) * 0.5;
    cum[0] = f0 * (c.grid_[0] - c.lo_) / (left_gamma + 1.0);
    const auto& vals = d == Direction::Plus ? c.qdp_ : c.qdm_;
    const double factor = c.c0_ / two_n_alpha;
    constexpr std::size_t per_interval = 15;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      double s = 0.0;
      for (std::size_t k = i * per_interval; k < (i + 1) * per_interval; ++k) s += c.qw_[k] * vals[k];
      cum[i + 1] = cum[i] + factor * s;
    }
    const double right_gamma = d == Direction::Minus || c.theta_.supercritical
                                   ? c.theta_.right - 1.0
                                   : c.theta_.right;
    const double fn = c.density(d, c.grid_[n - 1]) * 0.5;
    const double mass = cum[n - 1] + fn * (c.hi_ - c.grid_[n - 1]) / (right_gamma + 1.0);
    (d == Direction::Plus ? c.mass_plus_ : c.mass_minus_) = mass;
  }
  return c;
}

double ClosureProfile::h(double tau) const {
  const double a1 = gn_.a1, a2 = gn_.a2;
  if (theta_.supercritical) {
    // W' = psi(tau) (1/tau + 1/(1-tau)), psi = scale Z (1/(tau-a1) + 1/(tau-a2)).
    auto psi = [&](double t) {
      return scale_ * tumbling_rate(t, p_) * (1.0 / (t - a1) + 1.0 / (t - a2));
    };
    const double pt = psi(tau);
    return (pt - psi(0.0)) / tau + (pt - psi(1.0)) / (1.0 - tau);
  }
  // W' = phi(tau) (1/(tau-a1) + 1/(tau-a2)), phi = scale Z / (tau (1-tau)).
  auto phi = [&](double t) { return scale_ * tumbling_rate(t, p_) / (t * (1.0 - t)); };
  const double pt = phi(tau);
  return (pt - phi(a1)) / (tau - a1) + (pt - phi(a2)) / (tau - a2);
}

std::size_t ClosureProfile::interval_of(double a) const {
  // Index i with grid[i] <= a < grid[i+1], clamped to [0, n-2].
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), a);
  std::size_t i = static_cast<std::size_t>(it - grid_.begin());
  if (i == 0) return 0;
  return std::min(i - 1, grid_.size() - 2);
}

double ClosureProfile::w_smooth(double a) const {
  const std::size_t i = interval_of(a);
  auto hf = [this](double t) { return h(t); };
  const double left = grid_[i], right = grid_[i + 1];
  if (a - left <= right - a || a > right) {
    return wsmooth_[i] + gk15(hf, left, a);
  }
  return wsmooth_[i + 1] - gk15(hf, a, right);
}

double ClosureProfile::log_weight(double a) const {
  if (delta_) {
    if (a == 0.5) return 0.0;
    throw EndpointError("log_weight: point-mass closure has no interior");
  }
  if (!(a > lo_ && a < hi_)) {
    throw EndpointError("log_weight: a must lie strictly inside the support");
  }
  if (a == 0.5) return 0.0;
  const double wl = theta_.left * std::log((a - lo_) / (0.5 - lo_));
  const double wr = theta_.right * std::log((hi_ - a) / (hi_ - 0.5));
  return wl + wr + w_smooth(a);
}

double ClosureProfile::unnormalized(Direction d, double a) const {
  const double w = log_weight(a);
  const double num = 0.5 - gn_.a1;
  const double pref = d == Direction::Plus ? num / (a - gn_.a1) : num / (gn_.a2 - a);
  return pref * std::exp(w);
}

double ClosureProfile::q(Direction d, double a) const {
  if (delta_) throw SingularCaseError("q: point-mass closure has no pointwise values");
  if (a <= lo_ || a >= hi_) {
    if (a == lo_ || a == hi_) throw EndpointError("q: a at a support endpoint");
    return 0.0;
  }
  return c0_ * unnormalized(d, a);
}

double ClosureProfile::density(Direction d, double a) const {
  if (delta_) throw SingularCaseError("density: point-mass closure has no density");
  const double val = q(d, a);
  return val / (p_.N * p_.alpha0 * a * (1.0 - a));
}

void ClosureProfile::build_quadrature_cache() {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  const auto& xs = GK::abscissa();
  const auto& ws = GK::weights();
  const std::size_t n = grid_.size();
  auto hf = [this](double t) { return h(t); };
  qa_.clear();
  qw_.clear();
  qdp_.clear();
  qdm_.clear();
  const double num = 0.5 - gn_.a1;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double left = grid_[i], right = grid_[i + 1];
    const double c = 0.5 * (left + right), hl = 0.5 * (right - left);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      for (int sgn : {-1, 1}) {
        if (k == 0 && sgn == 1) continue;  // centre node appears once
        const double a = c + sgn * hl * xs[k];
        // W by integrating h from the interval's left node; cheaper than a
        // binary search through log_weight.
        const double w = theta_.left * std::log((a - lo_) / (0.5 - lo_)) +
                         theta_.right * std::log((hi_ - a) / (hi_ - 0.5)) + wsmooth_[i] +
                         gk15(hf, left, a);
        const double e = std::exp(w) / (a * (1.0 - a));
        qa_.push_back(a);
        qw_.push_back(ws[k] * hl);
        qdp_.push_back(num / (a - gn_.a1) * e);
        qdm_.push_back(num / (gn_.a2 - a) * e);
      }
    }
  }
}

template <class Weight>
double ClosureProfile::integrate(Direction d, Weight&& weight) const {
  const auto& vals = d == Direction::Plus ? qdp_ : qdm_;
  double sum = 0.0;
  for (std::size_t k = 0; k < qa_.size(); ++k) sum += qw_[k] * vals[k] * weight(qa_[k]);
  sum *= c0_;
  // Power-law tails between the outermost nodes and the support endpoints.
  auto f = [&](double a) { return c0_ * unnormalized(d, a) / (a * (1.0 - a)) * weight(a); };
  const bool sup = theta_.supercritical;
  const double gl = (d == Direction::Plus || sup) ? theta_.left - 1.0 : theta_.left;
  const double gr = (d == Direction::Minus || sup) ? theta_.right - 1.0 : theta_.right;
  if (!(gl > -1.0) || !(gr > -1.0)) throw IntegrabilityError("closure: non-integrable endpoint");
  sum += f(grid_.front()) * (grid_.front() - lo_) / (gl + 1.0);
  sum += f(grid_.back()) * (hi_ - grid_.back()) / (gr + 1.0);
  return sum;
}

double ClosureProfile::normalization_integral() const {
  if (delta_) return 1.0;
  const double one = integrate(Direction::Plus, [](double) { return 1.0; }) +
                     integrate(Direction::Minus, [](double) { return 1.0; });
  return one / (2.0 * p_.N * p_.alpha0);
}

double ClosureProfile::drift_velocity() const {
  if (delta_) return 0.0;
  const double ip = integrate(Direction::Plus, [](double) { return 1.0; });
  const double im = integrate(Direction::Minus, [](double) { return 1.0; });
  return p_.v0 * (ip - im) / (ip + im);
}

double ClosureProfile::mean_activity() const {
  if (delta_) return 0.5;
  auto w1 = [](double a) { return a; };
  auto w0 = [](double) { return 1.0; };
  return (integrate(Direction::Plus, w1) + integrate(Direction::Minus, w1)) /
         (integrate(Direction::Plus, w0) + integrate(Direction::Minus, w0));
}

double ClosureProfile::activity_variance() const {
  if (delta_) return 0.0;
  const double m = mean_activity();
  auto w2 = [m](double a) { return (a - m) * (a - m); };
  auto w0 = [](double) { return 1.0; };
  return (integrate(Direction::Plus, w2) + integrate(Direction::Minus, w2)) /
         (integrate(Direction::Plus, w0) + integrate(Direction::Minus, w0));
}

double ClosureProfile::direction_mass(Direction d) const {
  return d == Direction::Plus ? mass_plus_ : mass_minus_;
}

double ClosureProfile::cumulative(Direction d, double a) const {
  if (delta_) return a >= 0.5 ? 0.5 : 0.0;
  const double mass = direction_mass(d);
  if (a <= lo_) return 0.0;
  if (a >= hi_) return mass;
  const auto& cum = d == Direction::Plus ? cum_plus_ : cum_minus_;
  const std::size_t n = grid_.size();
  const bool sup = theta_.supercritical;
  if (a < grid_.front()) {
    const double gl = (d == Direction::Plus || sup) ? theta_.left - 1.0 : theta_.left;
    return cum[0] * std::pow((a - lo_) / (grid_.front() - lo_), gl + 1.0);
  }
  if (a > grid_.back()) {
    const double gr = (d == Direction::Minus || sup) ? theta_.right - 1.0 : theta_.right;
    const double tail = mass - cum[n - 1];
    return mass - tail * std::pow((hi_ - a) / (hi_ - grid_.back()), gr + 1.0);
  }
  const std::size_t i = interval_of(a);
  auto f = [this, d](double x) { return 0.5 * density(d, x); };
  return cum[i] + gk15(f, grid_[i], a);
}

}  // namespace chemokin
