#pragma once

// Reference evaluations of the closure log-weight W(a) that share no code
// with the library: an exact partial-fraction antiderivative (integer Hill
// coefficient only) and a brute-force trapezoid rule.

#include <cmath>
#include <vector>

namespace oracle {

struct WeightInputs {
  double v0, kR, a0, alpha0, z0, tau0;
  int H, N;
  double G;
};

inline double integrand(const WeightInputs& in, double t) {
  const double g = in.v0 * in.G / (in.kR * in.alpha0);
  const double a1 = 0.5 * (1.0 - g), a2 = 0.5 * (1.0 + g);
  const double z = in.z0 + std::pow(t / in.a0, in.H) / in.tau0;
  return z / (t * (1.0 - t)) * (2.0 * t - 1.0) / ((a1 - t) * (a2 - t)) /
         (4.0 * in.N * in.alpha0 * in.kR);
}

/// Composite trapezoid with `panels` panels from 1/2 to a.
inline double weight_trapezoid(const WeightInputs& in, double a, long panels = 1000000) {
  const double h = (a - 0.5) / static_cast<double>(panels);
  long double sum = 0.5L * (integrand(in, 0.5) + integrand(in, a));
  for (long k = 1; k < panels; ++k) sum += integrand(in, 0.5 + h * static_cast<double>(k));
  return static_cast<double>(sum * h);
}

/// Exact W(a) for integer H: the integrand is P(t)/D(t) with
/// P = Z(t)(2t-1), D = -C t (t-1)(t-a1)(t-a2), C = 4 N alpha0 kR.
/// Polynomial division plus simple-pole residues.
inline double weight_partial_fractions(const WeightInputs& in, double a) {
  const double g = in.v0 * in.G / (in.kR * in.alpha0);
  const double a1 = 0.5 * (1.0 - g), a2 = 0.5 * (1.0 + g);
  const double C = 4.0 * in.N * in.alpha0 * in.kR;
  const int H = in.H;

  // P coefficients, index = power.
  std::vector<long double> P(static_cast<std::size_t>(H) + 2, 0.0L);
  const long double hill = 1.0L / (std::pow(static_cast<long double>(in.a0), H) * in.tau0);
  // (z0 + hill t^H)(2t - 1)
  P[0] += -in.z0;
  P[1] += 2.0L * in.z0;
  P[static_cast<std::size_t>(H)] += -hill;
  P[static_cast<std::size_t>(H) + 1] += 2.0L * hill;

  const long double roots[4] = {0.0L, 1.0L, a1, a2};
  // D = -C * prod (t - r_i); expand.
  std::vector<long double> D = {1.0L};
  for (long double r : roots) {
    std::vector<long double> next(D.size() + 1, 0.0L);
    for (std::size_t k = 0; k < D.size(); ++k) {
      next[k + 1] += D[k];
      next[k] -= r * D[k];
    }
    D = next;
  }
  for (auto& d : D) d *= -C;

  // Quotient of P by D (deg D = 4).
  std::vector<long double> rem = P;
  const int degq = static_cast<int>(P.size()) - 1 - 4;
  std::vector<long double> Q(static_cast<std::size_t>(std::max(degq + 1, 0)), 0.0L);
  for (int k = degq; k >= 0; --k) {
    const long double coef = rem[static_cast<std::size_t>(k + 4)] / D[4];
    Q[static_cast<std::size_t>(k)] = coef;
    for (int j = 0; j <= 4; ++j) rem[static_cast<std::size_t>(k + j)] -= coef * D[static_cast<std::size_t>(j)];
  }

  auto poly = [](const std::vector<long double>& c, long double t) {
    long double s = 0.0L;
    for (std::size_t k = c.size(); k-- > 0;) s = s * t + c[k];
    return s;
  };
  auto dpoly = [](const std::vector<long double>& c, long double t) {
    long double s = 0.0L;
    for (std::size_t k = c.size(); k-- > 1;) s = s * t + c[k] * static_cast<long double>(k);
    return s;
  };

  long double w = 0.0L;
  // Polynomial part: integral of Q from 1/2 to a.
  for (std::size_t k = 0; k < Q.size(); ++k) {
    const long double e = static_cast<long double>(k + 1);
    w += Q[k] * (std::pow(static_cast<long double>(a), e) - std::pow(0.5L, e)) / e;
  }
  for (long double r : roots) {
    const long double res = poly(P, r) / dpoly(D, r);
    w += res * std::log(std::fabs((static_cast<long double>(a) - r) / (0.5L - r)));
  }
  return static_cast<double>(w);
}

}  // namespace oracle
