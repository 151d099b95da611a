#pragma once

#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace chemokin {

/// Nodes strictly inside (lo, hi) that include `center`, with spacing growing
/// geometrically by `ratio` away from each endpoint and capped in the middle.
/// The first node sits `min_spacing` away from its endpoint. `nodes` is the
/// total count including the centre node.
std::vector<double> clustered_grid(double lo, double hi, double center, int nodes, double ratio,
                                   double min_spacing);

/// One-sided version: distances from an endpoint for `count` nodes, the last
/// one landing exactly on `width`.
std::vector<double> clustered_offsets(double width, int count, double ratio, double min_spacing);

template <class F>
double gk15(F&& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0);
}

template <class F>
double gk15_adaptive(F&& f, double a, double b, double tol, unsigned max_depth = 8) {
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, tol);
}

}  // namespace chemokin
