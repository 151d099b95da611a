#pragma once

#include <vector>

namespace chemokin {

/// A probability distribution on the line, either a set of atoms or a
/// histogram with mass spread uniformly inside each bin.
class Distribution1D {
 public:
  static Distribution1D atoms(std::vector<double> points, std::vector<double> masses);
  static Distribution1D binned(std::vector<double> edges, std::vector<double> masses);
  static Distribution1D point(double x) { return atoms({x}, {1.0}); }

  bool is_binned() const { return binned_; }
  const std::vector<double>& points() const { return x_; }  // atoms or bin edges
  const std::vector<double>& masses() const { return m_; }
  double total_mass() const;

  /// Right-continuous CDF and its left limit.
  double cdf(double x) const;
  double cdf_left(double x) const;

  /// Raw moment E[X^k].
  double moment(int k) const;
  double mean() const { return moment(1); }
  double variance() const;

  /// Throws DomainError unless the masses are nonnegative and sum to 1.
  void require_normalized(double tol = 1e-9) const;

 private:
  bool binned_ = false;
  std::vector<double> x_;
  std::vector<double> m_;
  std::vector<double> cum_;  // cumulative mass after each atom / at each edge
};

/// Integral of |F_mu - F_nu| over the line; exact for atoms and histograms.
double wasserstein1(const Distribution1D& mu, const Distribution1D& nu, double tol = 1e-9);

/// Same integral without the normalization requirement (sub-probability
/// pieces such as one direction of a two-direction measure).
double cdf_l1_distance(const Distribution1D& mu, const Distribution1D& nu);

/// Integral of |F - G| for two CDFs sampled at common increasing nodes and
/// linear in between (exact for that representation).
double integrate_abs_difference(const std::vector<double>& x, const std::vector<double>& F,
                                const std::vector<double>& G);

/// sum |p_i - q_i| over bins with identical edges; both normalized.
double l1_histogram_distance(const Distribution1D& h1, const Distribution1D& h2, double tol = 1e-9);

/// sum |p_i - q_i| for raw per-bin masses of equal length.
double l1_mass_distance(const std::vector<double>& p, const std::vector<double>& q);

double moments(const Distribution1D& d, int k);

}  // namespace chemokin
