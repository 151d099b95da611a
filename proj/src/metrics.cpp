#include "chemokin/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "chemokin/error.hpp"

namespace chemokin {

namespace {

void check_masses(const std::vector<double>& m) {
  for (double v : m) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("distribution masses must be finite and >= 0");
  }
}

// Integral over [0, w] of |d0 + (d1 - d0) t / w|.
double abs_linear(double d0, double d1, double w) {
  if ((d0 >= 0.0 && d1 >= 0.0) || (d0 <= 0.0 && d1 <= 0.0)) return 0.5 * (std::abs(d0) + std::abs(d1)) * w;
  const double s = std::abs(d0) + std::abs(d1);
  return 0.5 * (d0 * d0 + d1 * d1) / s * w;
}

}  // namespace

Distribution1D Distribution1D::atoms(std::vector<double> points, std::vector<double> masses) {
  if (points.size() != masses.size() || points.empty()) {
    throw DomainError("Distribution1D::atoms: need equal, non-zero numbers of points and masses");
  }
  check_masses(masses);
  std::vector<std::size_t> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return points[a] < points[b]; });
  Distribution1D d;
  d.binned_ = false;
  d.x_.reserve(points.size());
  d.m_.reserve(points.size());
  for (auto i : idx) {
    if (!std::isfinite(points[i])) throw DomainError("Distribution1D::atoms: non-finite support point");
    if (!d.x_.empty() && d.x_.back() == points[i]) {
      d.m_.back() += masses[i];
    } else {
      d.x_.push_back(points[i]);
      d.m_.push_back(masses[i]);
    }
  }
  d.cum_.resize(d.m_.size());
  std::partial_sum(d.m_.begin(), d.m_.end(), d.cum_.begin());
  return d;
}

Distribution1D Distribution1D::binned(std::vector<double> edges, std::vector<double> masses) {
  if (edges.size() != masses.size() + 1 || masses.empty()) {
    throw DomainError("Distribution1D::binned: need edges.size() == masses.size() + 1");
  }
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) throw DomainError("Distribution1D::binned: edges must increase");
  }
  check_masses(masses);
  Distribution1D d;
  d.binned_ = true;
  d.x_ = std::move(edges);
  d.m_ = std::move(masses);
  d.cum_.assign(d.x_.size(), 0.0);
  for (std::size_t i = 0; i < d.m_.size(); ++i) d.cum_[i + 1] = d.cum_[i] + d.m_[i];
  return d;
}

double Distribution1D::total_mass() const { return cum_.back(); }

double Distribution1D::cdf(double x) const {
  if (!binned_) {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    if (it == x_.begin()) return 0.0;
    return cum_[static_cast<std::size_t>(it - x_.begin()) - 1];
  }
  if (x <= x_.front()) return 0.0;
  if (x >= x_.back()) return cum_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double t = (x - x_[i]) / (x_[i + 1] - x_[i]);
  return cum_[i] + t * m_[i];
}

double Distribution1D::cdf_left(double x) const {
  if (binned_) return cdf(x);
  const auto it = std::lower_bound(x_.begin(), x_.end(), x);
  if (it == x_.begin()) return 0.0;
  return cum_[static_cast<std::size_t>(it - x_.begin()) - 1];
}

double Distribution1D::moment(int k) const {
  if (k < 0) throw DomainError("moment: order must be >= 0");
  const double total = total_mass();
  if (!(total > 0.0)) throw DomainError("moment: distribution has zero mass");
  double s = 0.0;
  if (!binned_) {
    for (std::size_t i = 0; i < x_.size(); ++i) s += m_[i] * std::pow(x_[i], k);
  } else {
    // Uniform density inside each bin: mean of x^k over [l, r].
    for (std::size_t i = 0; i < m_.size(); ++i) {
      const double l = x_[i], r = x_[i + 1];
      const double avg = (std::pow(r, k + 1) - std::pow(l, k + 1)) / ((k + 1) * (r - l));
      s += m_[i] * avg;
    }
  }
  return s / total;
}

double Distribution1D::variance() const {
  const double mu = mean();
  if (!binned_) {
    double s = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) s += m_[i] * (x_[i] - mu) * (x_[i] - mu);
    return s / total_mass();
  }
  double s = 0.0;
  for (std::size_t i = 0; i < m_.size(); ++i) {
    const double l = x_[i] - mu, r = x_[i + 1] - mu;
    s += m_[i] * (r * r * r - l * l * l) / (3.0 * (r - l));
  }
  return s / total_mass();
}

void Distribution1D::require_normalized(double tol) const {
  if (std::abs(total_mass() - 1.0) > tol) {
    throw DomainError("distribution is not normalized (total mass " + std::to_string(total_mass()) + ")");
  }
}

double cdf_l1_distance(const Distribution1D& mu, const Distribution1D& nu) {
  std::vector<double> bp;
  bp.reserve(mu.points().size() + nu.points().size());
  bp.insert(bp.end(), mu.points().begin(), mu.points().end());
  bp.insert(bp.end(), nu.points().begin(), nu.points().end());
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    // Both CDFs are linear (histograms) or constant (atoms) strictly inside.
    const double d0 = mu.cdf(bp[k]) - nu.cdf(bp[k]);
    const double d1 = mu.cdf_left(bp[k + 1]) - nu.cdf_left(bp[k + 1]);
    s += abs_linear(d0, d1, bp[k + 1] - bp[k]);
  }
  return s;
}

double wasserstein1(const Distribution1D& mu, const Distribution1D& nu, double tol) {
  mu.require_normalized(tol);
  nu.require_normalized(tol);
  return cdf_l1_distance(mu, nu);
}

double integrate_abs_difference(const std::vector<double>& x, const std::vector<double>& F,
                                const std::vector<double>& G) {
  if (x.size() != F.size() || x.size() != G.size()) {
    throw DomainError("integrate_abs_difference: size mismatch");
  }
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    if (!(x[k + 1] >= x[k])) throw DomainError("integrate_abs_difference: nodes must increase");
    s += abs_linear(F[k] - G[k], F[k + 1] - G[k + 1], x[k + 1] - x[k]);
  }
  return s;
}

double l1_histogram_distance(const Distribution1D& h1, const Distribution1D& h2, double tol) {
  if (!h1.is_binned() || !h2.is_binned()) throw DomainError("l1_histogram_distance: histograms required");
  const auto& e1 = h1.points();
  const auto& e2 = h2.points();
  if (e1.size() != e2.size()) throw DomainError("l1_histogram_distance: bin counts differ");
  for (std::size_t i = 0; i < e1.size(); ++i) {
    const double scale = std::max({1.0, std::abs(e1[i]), std::abs(e2[i])});
    if (std::abs(e1[i] - e2[i]) > 1e-12 * scale) throw DomainError("l1_histogram_distance: bin edges differ");
  }
  h1.require_normalized(tol);
  h2.require_normalized(tol);
  return l1_mass_distance(h1.masses(), h2.masses());
}

double l1_mass_distance(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw DomainError("l1_mass_distance: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return s;
}

double moments(const Distribution1D& d, int k) { return d.moment(k); }

}  // namespace chemokin
