#include "chemokin/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "chemokin/error.hpp"
#include "chemokin/metrics.hpp"

namespace chemokin {

namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Weighted row sums added in row order, independent of threading.
double ordered_sum(const std::vector<double>& v, std::size_t row, const std::vector<double>& w) {
  double total = 0.0;
  for (std::size_t b = 0; b < v.size(); b += row) {
    double s = 0.0;
    for (std::size_t j = 0; j < row; ++j) s += v[b + j] * w[j];
    total += s;
  }
  return total;
}

}  // namespace

KineticScaling KineticScaling::case1(double eps) {
  if (!(eps > 0.0)) throw ConfigError("kinetic.eps must be > 0");
  return KineticScaling{eps, 1.0, 0.0};
}

KineticScaling KineticScaling::case2(double eps, double mu) {
  if (!(eps > 0.0)) throw ConfigError("kinetic.eps must be > 0");
  if (!(mu > 0.0 && mu <= 1.0)) throw ConfigError("kinetic.mu must be in (0, 1]");
  return KineticScaling{eps, 1.0 + mu, mu};
}

double case2_gradient(double eps, double mu, double G_mu) { return std::pow(eps, mu) * G_mu; }

double a_flux_coefficient(const PhysParams& p, double G, double a, int dir) {
  return p.N * p.alpha0 * a * (1.0 - a) * (-dir * p.v0 * G / p.alpha0 + p.kR * (1.0 - a / p.a0));
}

double ActivityMarginal::total() const {
  double s = 0.0;
  for (double v : mass_plus) s += v;
  for (double v : mass_minus) s += v;
  return s;
}

KineticField::KineticField(const PhysParams& p, const Environment& env, const KineticScaling& sc,
                           const KineticOptions& opt)
    : p_(p), env_(env), sc_(sc), opt_(opt) {
  p_.validate();
  env_.validate();
  if (!env_.periodic) throw ConfigError("kinetic solver needs a periodic domain");
  if (!(sc_.eps > 0.0) || !(sc_.beta >= 1.0 && sc_.beta <= 2.0)) {
    throw ConfigError("kinetic scaling needs eps > 0 and beta in [1, 2]");
  }
  if (opt_.x_cells < 1) throw ConfigError("kinetic.x_cells must be >= 1");
  if (opt_.a_cells < 8) throw ConfigError("kinetic.a_cells must be >= 8");
  if (!(opt_.a_cfl > 0.0 && opt_.a_cfl <= 1.0)) throw ConfigError("kinetic.a_cfl must be in (0, 1]");
  if (!(opt_.u_span > 0.0) || !(opt_.stretch >= 0.0) || !(opt_.margin >= 0.0)) {
    throw ConfigError("kinetic grid options must be non-negative (u_span > 0)");
  }
  if (opt_.threads == 0) opt_.threads = 1;
  nx_ = opt_.x_cells;
  na_ = opt_.a_cells;
  dx_ = env_.length() / nx_;
  build_grid();
  qp_.assign(static_cast<std::size_t>(nx_) * na_, 0.0);
  qm_ = qp_;
}

void KineticField::build_grid() {
  const double na_coef = p_.N * p_.alpha0;
  const auto gn = gradient_number(p_, env_.G);
  const std::size_t n = static_cast<std::size_t>(na_);
  u_face_.assign(n + 1, 0.0);
  a_face_.assign(n + 1, 0.0);
  std::size_t k1 = n + 1, k2 = n + 1;  // faces pinned to a1 / a2
  if (gn.g > 0.0 && gn.g < 1.0) {
    const int mc = opt_.margin_cells < 0 ? na_ / 16 : opt_.margin_cells;
    const int inner = na_ - 2 * mc;
    if (inner < 4) throw ConfigError("kinetic.a_cells too small for the margin cells");
    if (mc > 0 && !(opt_.margin > 0.0)) throw ConfigError("kinetic.margin must be > 0 with margin cells");
    const double u1 = std::log(gn.a1 / (1.0 - gn.a1)) / na_coef;
    const double u2 = -u1;  // a2 = 1 - a1
    const double w = opt_.margin * (u2 - u1);
    k1 = static_cast<std::size_t>(mc);
    k2 = static_cast<std::size_t>(mc + inner);
    for (std::size_t k = 0; k <= n; ++k) {
      if (k <= k1) u_face_[k] = u1 - w + w * double(k) / std::max(mc, 1);
      else if (k <= k2) u_face_[k] = u1 + (u2 - u1) * double(k - k1) / inner;
      else u_face_[k] = u2 + w * double(k - k2) / mc;
    }
    u_face_[k1] = u1;
    u_face_[k2] = u2;
  } else {
    const double b = opt_.stretch;
    for (std::size_t k = 0; k <= n; ++k) {
      const double xi = -1.0 + 2.0 * double(k) / double(n);
      u_face_[k] = b > 0.0 ? opt_.u_span * std::sinh(b * xi) / std::sinh(b) : opt_.u_span * xi;
    }
    if (n % 2 == 0) u_face_[n / 2] = 0.0;
  }
  for (std::size_t k = 0; k <= n; ++k) a_face_[k] = logistic(na_coef * u_face_[k]);
  if (k1 <= n) {
    a_face_[k1] = gn.a1;
    a_face_[k2] = gn.a2;
  }
  du_.resize(n);
  a_center_.resize(n);
  zrate_.resize(n);
  const double inv_eb = std::pow(sc_.eps, -sc_.beta);
  for (std::size_t j = 0; j < n; ++j) {
    du_[j] = u_face_[j + 1] - u_face_[j];
    if (!(du_[j] > 0.0)) throw ConfigError("kinetic activity grid is degenerate");
    a_center_[j] = logistic(na_coef * 0.5 * (u_face_[j] + u_face_[j + 1]));
    zrate_[j] = tumbling_rate(a_center_[j], p_) * inv_eb;
  }
  vel_plus_.assign(n + 1, 0.0);
  vel_minus_.assign(n + 1, 0.0);
  const double c = p_.v0 * env_.G / p_.alpha0;
  for (std::size_t k = 1; k < n; ++k) {
    const double f = p_.kR * (1.0 - a_face_[k] / p_.a0);
    vel_plus_[k] = (f - c) * inv_eb;
    vel_minus_[k] = (f + c) * inv_eb;
  }
  // The drift of one direction vanishes at a1 / a2; pin it so rounding
  // cannot open a leak out of the support.
  if (k1 <= n) {
    vel_plus_[k1] = 0.0;
    vel_minus_[k2] = 0.0;
  }
  double rmax = 0.0;
  for (const auto* v : {&vel_plus_, &vel_minus_}) {
    for (std::size_t j = 0; j < n; ++j) {
      const double out = std::max((*v)[j + 1], 0.0) + std::max(-(*v)[j], 0.0);
      rmax = std::max(rmax, out / du_[j]);
    }
  }
  a_dt_max_ = rmax > 0.0 ? opt_.a_cfl / rmax : std::numeric_limits<double>::infinity();
}

void KineticField::set_q(int dir, int i, int j, double value) {
  if (i < 0 || i >= nx_ || j < 0 || j >= na_) throw DomainError("KineticField::set_q: index out of range");
  if (!(value >= 0.0) || !std::isfinite(value)) throw DomainError("KineticField::set_q: value must be finite, >= 0");
  (dir > 0 ? qp_ : qm_)[idx(i, j)] = value;
}

namespace {

std::vector<double> checked_rho(const std::vector<double>& rho, int nx) {
  if (rho.empty()) return std::vector<double>(static_cast<std::size_t>(nx), 1.0);
  if (rho.size() != static_cast<std::size_t>(nx)) throw DomainError("rho must have one value per x cell");
  for (double r : rho) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("rho must be finite and >= 0");
  }
  return rho;
}

}  // namespace

void KineticField::fill_from_closure(const ClosureProfile& prof, const std::vector<double>& rho_in) {
  const auto rho = checked_rho(rho_in, nx_);
  for (int d : {1, -1}) {
    const Direction dir = d > 0 ? Direction::Plus : Direction::Minus;
    std::vector<double> m(static_cast<std::size_t>(na_));
    double below = 0.0;
    for (int j = 0; j < na_; ++j) {
      const double above = j + 1 == na_ ? prof.direction_mass(dir) : prof.cumulative(dir, a_face_[j + 1]);
      m[j] = std::max(0.0, above - below);
      below = above;
    }
    auto& q = d > 0 ? qp_ : qm_;
    for (int i = 0; i < nx_; ++i) {
      for (int j = 0; j < na_; ++j) q[idx(i, j)] = 2.0 * m[j] * rho[i] / du_[j];
    }
  }
  normalize();
}

void KineticField::fill_point(double a, const std::vector<double>& rho_in) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("fill_point: a must be in (0, 1)");
  const auto rho = checked_rho(rho_in, nx_);
  auto it = std::upper_bound(a_face_.begin(), a_face_.end(), a);
  int j = static_cast<int>(it - a_face_.begin()) - 1;
  j = std::clamp(j, 0, na_ - 1);
  std::fill(qp_.begin(), qp_.end(), 0.0);
  std::fill(qm_.begin(), qm_.end(), 0.0);
  for (int i = 0; i < nx_; ++i) {
    qp_[idx(i, j)] = rho[i] / du_[j];
    qm_[idx(i, j)] = rho[i] / du_[j];
  }
  normalize();
}

void KineticField::normalize() {
  const double m = total_mass();
  if (!(m > 0.0)) throw DomainError("kinetic field has zero mass");
  for (auto& v : qp_) v /= m;
  for (auto& v : qm_) v /= m;
}

double KineticField::max_stable_dt() const {
  return dx_ / (p_.v0 * std::pow(sc_.eps, 1.0 - sc_.beta));
}

template <class F>
void KineticField::parallel_rows(int n, F&& fn) const {
  const unsigned nt = std::min<unsigned>(opt_.threads, static_cast<unsigned>(std::max(1, n)));
  if (nt <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nt; ++t) {
    const int i0 = static_cast<int>(static_cast<long long>(n) * t / nt);
    const int i1 = static_cast<int>(static_cast<long long>(n) * (t + 1) / nt);
    pool.emplace_back([&fn, i0, i1] { fn(i0, i1); });
  }
  for (auto& th : pool) th.join();
}

void KineticField::exchange(int i0, int i1) {
  for (int i = i0; i < i1; ++i) {
    double* qp = qp_.data() + idx(i, 0);
    double* qm = qm_.data() + idx(i, 0);
    for (int j = 0; j < na_; ++j) {
      const double mean = 0.5 * (qp[j] + qm[j]);
      const double half = 0.5 * (qp[j] - qm[j]) * decay_[j];
      qp[j] = mean + half;
      qm[j] = mean - half;
    }
  }
}

void KineticField::a_advect(double h, int i0, int i1) {
  for (int d : {1, -1}) {
    const auto& v = d > 0 ? vel_plus_ : vel_minus_;
    auto& qa = d > 0 ? qp_ : qm_;
    for (int i = i0; i < i1; ++i) {
      double* q = qa.data() + idx(i, 0);
      double fl = 0.0;
      for (int j = 0; j < na_; ++j) {
        double fr = 0.0;
        if (j + 1 < na_) {
          const double vf = v[j + 1];
          fr = vf > 0.0 ? vf * q[j] : vf * q[j + 1];
        }
        q[j] -= h / du_[j] * (fr - fl);
        fl = fr;
      }
    }
  }
}

void KineticField::local_step(double h) {
  const auto nsub = static_cast<std::size_t>(std::max(1.0, std::ceil(h / a_dt_max_ * (1.0 - 1e-12))));
  const double hs = h / double(nsub);
  if (hs != cached_h_) {
    decay_.resize(zrate_.size());
    for (std::size_t j = 0; j < zrate_.size(); ++j) decay_[j] = std::exp(-zrate_[j] * 0.5 * hs);
    cached_h_ = hs;
  }
  parallel_rows(nx_, [this, hs, nsub](int i0, int i1) {
    for (std::size_t s = 0; s < nsub; ++s) {
      exchange(i0, i1);
      a_advect(hs, i0, i1);
      exchange(i0, i1);
    }
  });
  a_substeps_ += nsub;
}

void KineticField::transport(double dt) {
  if (nx_ == 1) return;
  const double nu = dt * p_.v0 * std::pow(sc_.eps, 1.0 - sc_.beta) / dx_;
  const std::size_t row = static_cast<std::size_t>(na_);
  if (std::abs(nu - 1.0) <= 1e-12) {
    std::rotate(qp_.begin(), qp_.end() - static_cast<std::ptrdiff_t>(row), qp_.end());
    std::rotate(qm_.begin(), qm_.begin() + static_cast<std::ptrdiff_t>(row), qm_.end());
    return;
  }
  for (int d : {1, -1}) {
    auto& q = d > 0 ? qp_ : qm_;
    scratch_ = q;
    parallel_rows(nx_, [&](int i0, int i1) {
      for (int i = i0; i < i1; ++i) {
        const int up = d > 0 ? (i + nx_ - 1) % nx_ : (i + 1) % nx_;
        const double* src = scratch_.data() + idx(i, 0);
        const double* usrc = scratch_.data() + idx(up, 0);
        double* dst = q.data() + idx(i, 0);
        for (std::size_t j = 0; j < row; ++j) dst[j] = src[j] - nu * (src[j] - usrc[j]);
      }
    });
  }
}

void KineticField::advance(double dt) {
  if (!(dt > 0.0)) throw ConfigError("kinetic time step must be > 0");
  const double nu = dt / max_stable_dt();
  if (nx_ > 1 && nu > 1.0 + 1e-12) throw ConfigError("kinetic time step violates the x-transport CFL bound");
  local_step(0.5 * dt);
  transport(dt);
  local_step(0.5 * dt);
  time_ += dt;
}

double KineticField::total_mass() const {
  const std::size_t row = static_cast<std::size_t>(na_);
  return 0.5 * dx_ * (ordered_sum(qp_, row, du_) + ordered_sum(qm_, row, du_));
}

double KineticField::min_value() const {
  return std::min(*std::min_element(qp_.begin(), qp_.end()), *std::min_element(qm_.begin(), qm_.end()));
}

ActivityMarginal KineticField::marginal_activity() const {
  ActivityMarginal m;
  m.a_faces = a_face_;
  m.mass_plus.assign(static_cast<std::size_t>(na_), 0.0);
  m.mass_minus.assign(static_cast<std::size_t>(na_), 0.0);
  for (int i = 0; i < nx_; ++i) {
    for (int j = 0; j < na_; ++j) {
      m.mass_plus[j] += qp_[idx(i, j)];
      m.mass_minus[j] += qm_[idx(i, j)];
    }
  }
  for (int j = 0; j < na_; ++j) {
    m.mass_plus[j] *= 0.5 * dx_ * du_[j];
    m.mass_minus[j] *= 0.5 * dx_ * du_[j];
  }
  return m;
}

std::vector<double> KineticField::density() const {
  std::vector<double> rho(static_cast<std::size_t>(nx_), 0.0);
  for (int i = 0; i < nx_; ++i) {
    double s = 0.0;
    for (int j = 0; j < na_; ++j) s += (qp_[idx(i, j)] + qm_[idx(i, j)]) * du_[j];
    rho[i] = 0.5 * s;
  }
  return rho;
}

double KineticField::w1_to_closure(const ClosureProfile& prof) const {
  const auto m = marginal_activity();
  // Joint CDFs at the cell faces, extended by the end points 0 and 1.
  std::vector<double> a(a_face_.size() + 2);
  a.front() = 0.0;
  std::copy(a_face_.begin(), a_face_.end(), a.begin() + 1);
  a.back() = 1.0;
  double total = 0.0;
  for (int d : {1, -1}) {
    const Direction dir = d > 0 ? Direction::Plus : Direction::Minus;
    const auto& mass = d > 0 ? m.mass_plus : m.mass_minus;
    std::vector<double> fk(a.size(), 0.0), fc(a.size(), 0.0);
    // Mass spread linearly over each cell, as the CDF interpolation assumes.
    for (int k = 1; k <= na_; ++k) fk[k + 1] = fk[k] + mass[k - 1];
    fk.back() = fk[na_ + 1];
    for (std::size_t k = 1; k + 1 < a.size(); ++k) fc[k] = prof.cumulative(dir, a[k]);
    fc.back() = prof.direction_mass(dir);
    total += integrate_abs_difference(a, fk, fc);
  }
  return total;
}

double KineticField::l1_distance(const KineticField& other) const {
  if (other.nx_ != nx_ || other.na_ != na_) throw DomainError("l1_distance: grids differ");
  double s = 0.0;
  for (int d : {1, -1}) {
    const auto& a = d > 0 ? qp_ : qm_;
    const auto& b = d > 0 ? other.qp_ : other.qm_;
    for (int i = 0; i < nx_; ++i) {
      double r = 0.0;
      for (int j = 0; j < na_; ++j) r += std::abs(a[idx(i, j)] - b[idx(i, j)]) * du_[j];
      s += r;
    }
  }
  return 0.5 * dx_ * s;
}

KineticSteadyResult run_kinetic_to_steady(KineticField& f, double dt, double tol, double max_time) {
  KineticSteadyResult r;
  const double t_end = f.time() + max_time;
  while (f.time() < t_end) {
    const KineticField before = f;
    f.advance(dt);
    ++r.steps;
    r.rate = f.l1_distance(before) / dt / f.total_mass();
    if (r.rate <= tol) {
      r.converged = true;
      break;
    }
  }
  r.t = f.time();
  return r;
}

}  // namespace chemokin
