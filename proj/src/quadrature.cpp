#include "chemokin/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "chemokin/error.hpp"

namespace chemokin {

namespace {

// Number of spacings needed to cover `width` starting from `min_spacing`
// with geometric growth capped at `cap`.
int count_for(double width, double ratio, double min_spacing, double cap) {
  double p = min_spacing;
  double s = min_spacing;
  int n = 0;
  while (p < width) {
    s = std::min(s * ratio, cap);
    p += s;
    ++n;
    if (n > 100000000) break;
  }
  return n;
}

std::vector<double> offsets_for(double width, int count, double ratio, double min_spacing,
                                double cap) {
  std::vector<double> p(static_cast<std::size_t>(count) + 1);
  p[0] = min_spacing;
  double s = min_spacing;
  for (int j = 1; j <= count; ++j) {
    s = std::min(s * ratio, cap);
    p[j] = p[j - 1] + s;
  }
  // Stretch the spacings after the first so the last node lands on width.
  const double scale = (width - p[0]) / (p[count] - p[0]);
  for (int j = 1; j <= count; ++j) p[j] = p[0] + (p[j] - p[0]) * scale;
  p[count] = width;
  return p;
}

}  // namespace

std::vector<double> clustered_offsets(double width, int count, double ratio, double min_spacing) {
  if (!(width > 0.0) || count < 1 || !(ratio >= 1.0) || !(min_spacing > 0.0) ||
      !(min_spacing < width)) {
    throw Error(ErrorCode::InvalidArgument, "clustered_offsets: invalid arguments");
  }
  if (count == 1) return {min_spacing, width};

  double dmin = min_spacing;
  const int geometric = count_for(width, ratio, dmin, width);
  if (geometric > count) {
    // Too few nodes for the requested resolution: enlarge the first spacing.
    double lo = dmin, hi = width / 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = std::sqrt(lo * hi);
      if (count_for(width, ratio, mid, width) > count) lo = mid; else hi = mid;
    }
    dmin = hi;
    return offsets_for(width, count, ratio, dmin, width);
  }
  double lo = dmin, hi = width;  // cap bracket, count decreases with cap
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (count_for(width, ratio, dmin, mid) > count) lo = mid; else hi = mid;
  }
  return offsets_for(width, count, ratio, dmin, hi);
}

std::vector<double> clustered_grid(double lo, double hi, double center, int nodes, double ratio,
                                   double min_spacing) {
  if (!(lo < center && center < hi) || nodes < 3) {
    throw Error(ErrorCode::InvalidArgument, "clustered_grid: need lo < center < hi and >= 3 nodes");
  }
  // Share one spacing cap between the two sides so the spacing is
  // continuous across the centre node.
  const double wl = center - lo, wr = hi - center;
  const int total = nodes - 1;
  int left = total / 2;
  if (count_for(wl, ratio, min_spacing, wl) + count_for(wr, ratio, min_spacing, wr) <= total) {
    double clo = min_spacing, chi = std::max(wl, wr);
    for (int it = 0; it < 200; ++it) {
      const double mid = std::sqrt(clo * chi);
      const int n = count_for(wl, ratio, min_spacing, mid) + count_for(wr, ratio, min_spacing, mid);
      if (n > total) clo = mid; else chi = mid;
    }
    left = std::clamp(count_for(wl, ratio, min_spacing, chi), 1, total - 1);
  }
  const int right = total - left;
  const auto pl = clustered_offsets(wl, left, ratio, min_spacing);
  const auto pr = clustered_offsets(wr, right, ratio, min_spacing);
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(nodes));
  for (int j = 0; j < left; ++j) grid.push_back(lo + pl[j]);
  grid.push_back(center);
  for (int j = right - 1; j >= 0; --j) grid.push_back(hi - pr[j]);
  return grid;
}

}  // namespace chemokin
