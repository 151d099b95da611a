#include "chemokin/chemokin.h"

#include <cmath>
#include <memory>
#include <string>

#include "chemokin/agents.hpp"
#include "chemokin/closure.hpp"
#include "chemokin/config.hpp"
#include "chemokin/error.hpp"
#include "chemokin/harness.hpp"
#include "json.hpp"

using namespace chemokin;

struct ck_ensemble {
  std::unique_ptr<Ensemble> ens;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_report;

ck_status fail(ck_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

// Runs fn, translating exceptions into status codes.
template <class F>
ck_status guarded(F&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const Error& e) {
    return fail(static_cast<ck_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(CK_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CK_ERR_INTERNAL, e.what());
  }
}

PhysParams to_cpp(const ck_params* p) {
  if (!p) throw Error(ErrorCode::InvalidArgument, "params must not be NULL");
  PhysParams q;
  q.v0 = p->v0;
  q.kR = p->kR;
  q.a0 = p->a0;
  q.alpha0 = p->alpha0;
  q.z0 = p->z0;
  q.tau0 = p->tau0;
  q.H = p->H;
  q.N = p->N;
  q.KI = p->KI;
  q.KA = p->KA;
  q.S0 = p->S0;
  q.m0 = p->m0;
  q.validate();
  return q;
}

void require(const void* ptr, const char* name) {
  if (!ptr) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must not be NULL");
}

}  // namespace

extern "C" {

const char* ck_version(void) { return "0.1.0"; }

const char* ck_last_error(void) { return last_error.c_str(); }

const char* ck_last_report(void) { return last_report.c_str(); }

void ck_default_params(ck_params* out) {
  if (!out) return;
  const PhysParams d;
  *out = ck_params{d.v0, d.kR, d.a0, d.alpha0, d.z0, d.tau0, d.H, d.N, d.KI, d.KA, d.S0, d.m0};
}

ck_status ck_gradient_number(const ck_params* p, double G, double* g, double* a1, double* a2) {
  return guarded([&] {
    const auto gn = gradient_number(to_cpp(p), G);
    if (g) *g = gn.g;
    if (a1) *a1 = gn.a1;
    if (a2) *a2 = gn.a2;
    return CK_OK;
  });
}

ck_status ck_closure_summary_get(const ck_params* p, double G, ck_closure_summary* out) {
  return guarded([&] {
    require(out, "out");
    const PhysParams q = to_cpp(p);
    const auto prof = ClosureProfile::make(q, G);
    const auto gn = gradient_number(q, G);
    ck_closure_summary s{};
    s.g = gn.g;
    s.a1 = gn.a1;
    s.a2 = gn.a2;
    s.c0 = prof.is_delta() ? std::nan("") : prof.c0();
    s.theta_left = prof.is_delta() ? std::nan("") : prof.exponents().left;
    s.theta_right = prof.is_delta() ? std::nan("") : prof.exponents().right;
    s.kappa = prof.drift_velocity();
    const auto c2 = case2_coefficients(q, G);
    s.kappa3 = c2.kappa3;
    s.D0 = c2.D0;
    s.regime = static_cast<ck_regime>(static_cast<int>(classify_regime(gn.g)));
    *out = s;
    return CK_OK;
  });
}

ck_status ck_closure_density(const ck_params* p, double G, const double* a, size_t n, double* plus, double* minus) {
  return guarded([&] {
    if (n == 0) return CK_OK;
    require(a, "a");
    require(plus, "plus");
    require(minus, "minus");
    const auto prof = ClosureProfile::make(to_cpp(p), G);
    for (size_t i = 0; i < n; ++i) {
      plus[i] = prof.density(Direction::Plus, a[i]);
      minus[i] = prof.density(Direction::Minus, a[i]);
    }
    return CK_OK;
  });
}

ck_status ck_ensemble_new(const ck_params* p, double G, double x_min, double x_max, size_t count, double dt,
                          uint64_t seed, unsigned threads, ck_ensemble** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    Environment env;
    env.G = G;
    env.x_min = x_min;
    env.x_max = x_max;
    env.validate();
    AgentOptions o;
    o.count = count;
    o.dt = dt;
    o.seed = seed;
    o.threads = threads ? threads : 1;
    auto h = std::make_unique<ck_ensemble>();
    h->ens = std::make_unique<Ensemble>(to_cpp(p), env, o);
    *out = h.release();
    return CK_OK;
  });
}

ck_status ck_ensemble_step(ck_ensemble* e, size_t steps) {
  return guarded([&] {
    require(e, "ensemble");
    e->ens->advance(steps);
    return CK_OK;
  });
}

ck_status ck_ensemble_drift(const ck_ensemble* e, double* v_d) {
  return guarded([&] {
    require(e, "ensemble");
    require(v_d, "v_d");
    *v_d = e->ens->drift();
    return CK_OK;
  });
}

ck_status ck_ensemble_time(const ck_ensemble* e, double* t) {
  return guarded([&] {
    require(e, "ensemble");
    require(t, "t");
    *t = e->ens->time();
    return CK_OK;
  });
}

void ck_ensemble_free(ck_ensemble* e) { delete e; }

void ck_run_options_init(ck_run_options* opt) {
  if (opt) *opt = ck_run_options{nullptr, nullptr, nullptr, 0, 0, 0, 0};
}

ck_status ck_run(const char* command, const ck_run_options* opt) {
  last_report.clear();
  return guarded([&] {
    require(command, "command");
    ck_run_options o;
    ck_run_options_init(&o);
    if (opt) o = *opt;
    if (o.config_path && o.config_json) {
      throw Error(ErrorCode::InvalidArgument, "give either config_path or config_json, not both");
    }
    ExperimentConfig cfg = o.config_path   ? load_config(o.config_path)
                           : o.config_json ? parse_config(o.config_json)
                                           : parse_config("{}");
    cfg.tier = tier_from_string(command);
    if (o.has_seed) cfg.seed = o.seed;
    if (o.threads) cfg.threads = o.threads;
    if (o.out_dir) cfg.output_dir = o.out_dir;
    cfg.validate();
    const RunReport rep = run_experiment(cfg, cfg.output_dir);
    nlohmann::json j = {{"command", command},
                        {"out_dir", cfg.output_dir},
                        {"config_hash", config_hash(cfg)},
                        {"files", rep.files},
                        {"violations", rep.violations},
                        {"notes", rep.notes}};
    last_report = j.dump(2);
    if (o.strict && !rep.ok()) {
      std::string msg = "threshold check failed:";
      for (const auto& v : rep.violations) msg += "\n  " + v;
      return fail(CK_THRESHOLD_VIOLATION, msg);
    }
    return CK_OK;
  });
}

}  // extern "C"
