#include "chemokin/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "chemokin/error.hpp"
#include "json.hpp"

namespace chemokin {

using nlohmann::json;

namespace {

const char* const kTierNames[] = {"closure", "agents", "kinetic", "macro", "compare", "velocity-sweep", "convergence"};

// Reads one JSON object, remembering which keys were consumed so that any
// leftover key can be reported with its full path.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("config: " + where() + " must be an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  Section child(const char* key) {
    seen_.insert(key);
    static const json empty = json::object();
    return Section(j_.contains(key) ? j_.at(key) : empty, path_.empty() ? key : path_ + "." + key);
  }

  void get(const char* key, double& out) {
    if (const json* v = take(key)) {
      if (!v->is_number()) fail(key, "must be a number");
      out = v->get<double>();
    }
  }
  void get(const char* key, int& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer()) fail(key, "must be an integer");
      out = v->get<int>();
    }
  }
  void get(const char* key, std::size_t& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_unsigned()) fail(key, "must be a nonnegative integer");
      out = v->get<std::size_t>();
    }
  }
  void get(const char* key, std::uint64_t& out, bool) {
    if (const json* v = take(key)) {
      if (!v->is_number_unsigned()) fail(key, "must be a nonnegative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void get(const char* key, unsigned& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_unsigned()) fail(key, "must be a nonnegative integer");
      out = v->get<unsigned>();
    }
  }
  void get(const char* key, bool& out) {
    if (const json* v = take(key)) {
      if (!v->is_boolean()) fail(key, "must be true or false");
      out = v->get<bool>();
    }
  }
  void get(const char* key, std::string& out) {
    if (const json* v = take(key)) {
      if (!v->is_string()) fail(key, "must be a string");
      out = v->get<std::string>();
    }
  }
  void get(const char* key, std::vector<double>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array()) fail(key, "must be an array of numbers");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number()) fail(key, "must be an array of numbers");
        out.push_back(e.get<double>());
      }
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError("config: unknown key '" + name(it.key().c_str()) + "'");
    }
  }

  [[noreturn]] void fail(const char* key, const char* what) const {
    throw ConfigError("config: " + name(key) + " " + what);
  }

 private:
  const json* take(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) return nullptr;
    return &*it;
  }
  std::string name(const char* key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string where() const { return path_.empty() ? "top level" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_params(Section s, PhysParams& p) {
  s.get("v0", p.v0);
  s.get("kR", p.kR);
  s.get("a0", p.a0);
  s.get("alpha0", p.alpha0);
  s.get("z0", p.z0);
  s.get("tau0", p.tau0);
  s.get("H", p.H);
  s.get("N", p.N);
  s.get("KI", p.KI);
  s.get("KA", p.KA);
  s.get("S0", p.S0);
  s.get("m0", p.m0);
  s.finish();
}

void read_env(Section s, EnvSpec& e) {
  if (s.has("G") && s.has("G_list")) s.fail("G", "and env.G_list are mutually exclusive");
  double G = std::nan("");
  s.get("G", G);
  if (!std::isnan(G)) e.G_list = {G};
  s.get("G_list", e.G_list);
  s.get("x_min", e.x_min);
  s.get("x_max", e.x_max);
  s.get("domain_length", e.domain_length);
  s.finish();
}

void read_agents(Section s, AgentNumerics& a) {
  s.get("count", a.count);
  s.get("dt", a.dt);
  s.get("init_activity_lo", a.init_activity_lo);
  s.get("init_activity_hi", a.init_activity_hi);
  s.get("window", a.window);
  s.get("tol", a.tol);
  s.get("var_tol", a.var_tol);
  s.get("max_time", a.max_time);
  s.get("sample_steps", a.sample_steps);
  s.get("sample_every", a.sample_every);
  s.get("batches", a.batches);
  s.get("bins", a.bins);
  s.get("x_bins", a.x_bins);
  s.get("series_stride", a.series_stride);
  s.finish();
}

void read_kinetic(Section s, KineticNumerics& k) {
  s.get("scaling", k.scaling);
  s.get("eps", k.eps);
  s.get("eps_list", k.eps_list);
  s.get("mu", k.mu);
  s.get("G_mu", k.G_mu);
  s.get("x_cells", k.x_cells);
  s.get("a_cells", k.a_cells);
  s.get("u_span", k.u_span);
  s.get("stretch", k.stretch);
  s.get("margin", k.margin);
  s.get("domain_length", k.domain_length);
  s.get("T", k.T);
  s.get("steady", k.steady);
  s.get("steady_tol", k.steady_tol);
  s.get("max_time", k.max_time);
  s.get("init", k.init);
  s.get("init_a", k.init_a);
  s.get("bump_center", k.bump_center);
  s.get("bump_width", k.bump_width);
  s.finish();
}

void read_macro(Section s, MacroNumerics& m) {
  s.get("equation", m.equation);
  s.get("cells", m.cells);
  s.get("domain_length", m.domain_length);
  s.get("kappa", m.kappa);
  s.get("D0", m.D0);
  s.get("G_mu", m.G_mu);
  s.get("bump_center", m.bump_center);
  s.get("bump_width", m.bump_width);
  s.get("times", m.times);
  s.finish();
}

void read_sweep(Section s, SweepSpec& w) {
  s.get("kR_list", w.kR_list);
  s.get("monte_carlo", w.monte_carlo);
  s.finish();
}

// NaN is not representable in JSON; unset optional numbers become null.
json num(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

json to_json(const ExperimentConfig& c) {
  const auto& p = c.params;
  const auto& a = c.agents;
  const auto& k = c.kinetic;
  const auto& m = c.macro;
  json j;
  j["tier"] = to_string(c.tier);
  j["params"] = {{"v0", p.v0}, {"kR", p.kR},   {"a0", p.a0}, {"alpha0", p.alpha0}, {"z0", p.z0}, {"tau0", p.tau0},
                 {"H", p.H},   {"N", p.N},     {"KI", p.KI}, {"KA", p.KA},         {"S0", p.S0}, {"m0", p.m0}};
  j["env"] = {{"G_list", c.env.G_list},
              {"x_min", num(c.env.x_min)},
              {"x_max", num(c.env.x_max)},
              {"domain_length", c.env.domain_length}};
  j["numerics"]["seed"] = c.seed;
  j["numerics"]["threads"] = c.threads;
  j["numerics"]["agents"] = {{"count", a.count},
                             {"dt", a.dt},
                             {"init_activity_lo", a.init_activity_lo},
                             {"init_activity_hi", a.init_activity_hi},
                             {"window", a.window},
                             {"tol", a.tol},
                             {"var_tol", a.var_tol},
                             {"max_time", a.max_time},
                             {"sample_steps", a.sample_steps},
                             {"sample_every", a.sample_every},
                             {"batches", a.batches},
                             {"bins", a.bins},
                             {"x_bins", a.x_bins},
                             {"series_stride", a.series_stride}};
  j["numerics"]["kinetic"] = {{"scaling", k.scaling},     {"eps", k.eps},
                              {"eps_list", k.eps_list},   {"mu", k.mu},
                              {"G_mu", k.G_mu},           {"x_cells", k.x_cells},
                              {"a_cells", k.a_cells},     {"u_span", k.u_span},
                              {"stretch", k.stretch},     {"margin", k.margin},
                              {"domain_length", k.domain_length}, {"T", k.T},
                              {"steady", k.steady},       {"steady_tol", k.steady_tol},
                              {"max_time", k.max_time},   {"init", k.init},
                              {"init_a", k.init_a},       {"bump_center", k.bump_center},
                              {"bump_width", k.bump_width}};
  j["numerics"]["macro"] = {{"equation", m.equation},       {"cells", m.cells},
                            {"domain_length", m.domain_length}, {"kappa", num(m.kappa)},
                            {"D0", num(m.D0)},              {"G_mu", m.G_mu},
                            {"bump_center", m.bump_center}, {"bump_width", m.bump_width},
                            {"times", m.times}};
  j["sweep"] = {{"kR_list", c.sweep.kR_list}, {"monte_carlo", c.sweep.monte_carlo}};
  j["outputs"] = {{"dir", c.output_dir}};
  return j;
}

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw ConfigError(std::string("config: ") + field + " " + what);
}

bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

std::string to_string(Tier t) { return kTierNames[static_cast<int>(t)]; }

Tier tier_from_string(const std::string& s) {
  for (int i = 0; i < 7; ++i) {
    if (s == kTierNames[i]) return static_cast<Tier>(i);
  }
  throw ConfigError("config: tier '" + s +
                    "' is not one of closure, agents, kinetic, macro, compare, velocity-sweep, convergence");
}

void ExperimentConfig::validate() const {
  params.validate();
  require(!env.G_list.empty(), "env.G_list", "must not be empty");
  for (double G : env.G_list) require(std::isfinite(G) && G >= 0.0, "env.G_list", "entries must be finite and >= 0");
  require(std::isnan(env.x_min) == std::isnan(env.x_max), "env.x_min", "and env.x_max must be given together");
  if (!std::isnan(env.x_min)) require(env.x_max > env.x_min, "env.x_max", "must exceed env.x_min");
  require(finite_pos(env.domain_length), "env.domain_length", "must be > 0");

  require(agents.count > 0, "numerics.agents.count", "must be > 0");
  require(finite_pos(agents.dt), "numerics.agents.dt", "must be > 0");
  require(agents.init_activity_lo > 0.0 && agents.init_activity_hi < 1.0 &&
              agents.init_activity_lo <= agents.init_activity_hi,
          "numerics.agents.init_activity_lo", "and init_activity_hi must satisfy 0 < lo <= hi < 1");
  require(agents.window >= 100, "numerics.agents.window", "must be >= 100");
  require(finite_pos(agents.tol), "numerics.agents.tol", "must be > 0");
  require(finite_pos(agents.var_tol), "numerics.agents.var_tol", "must be > 0");
  require(finite_pos(agents.max_time), "numerics.agents.max_time", "must be > 0");
  require(agents.sample_every > 0, "numerics.agents.sample_every", "must be > 0");
  require(agents.batches >= 2, "numerics.agents.batches", "must be >= 2");
  require(agents.bins > 0, "numerics.agents.bins", "must be > 0");
  require(agents.x_bins > 0, "numerics.agents.x_bins", "must be > 0");
  require(agents.series_stride > 0, "numerics.agents.series_stride", "must be > 0");

  require(kinetic.scaling == "case1" || kinetic.scaling == "case2", "numerics.kinetic.scaling",
          "must be case1 or case2");
  require(kinetic.eps > 0.0 && kinetic.eps <= 1.0, "numerics.kinetic.eps", "must lie in (0, 1]");
  require(!kinetic.eps_list.empty(), "numerics.kinetic.eps_list", "must not be empty");
  for (double e : kinetic.eps_list) require(e > 0.0 && e <= 1.0, "numerics.kinetic.eps_list", "entries must lie in (0, 1]");
  require(kinetic.mu > 0.0 && kinetic.mu <= 1.0, "numerics.kinetic.mu", "must lie in (0, 1]");
  require(std::isfinite(kinetic.G_mu) && kinetic.G_mu >= 0.0, "numerics.kinetic.G_mu", "must be >= 0");
  require(kinetic.x_cells > 0, "numerics.kinetic.x_cells", "must be > 0");
  require(kinetic.a_cells >= 4, "numerics.kinetic.a_cells", "must be >= 4");
  require(finite_pos(kinetic.u_span), "numerics.kinetic.u_span", "must be > 0");
  require(finite_pos(kinetic.stretch), "numerics.kinetic.stretch", "must be > 0");
  require(kinetic.margin >= 0.0, "numerics.kinetic.margin", "must be >= 0");
  require(finite_pos(kinetic.domain_length), "numerics.kinetic.domain_length", "must be > 0");
  require(std::isfinite(kinetic.T) && kinetic.T >= 0.0, "numerics.kinetic.T", "must be >= 0");
  require(finite_pos(kinetic.steady_tol), "numerics.kinetic.steady_tol", "must be > 0");
  require(finite_pos(kinetic.max_time), "numerics.kinetic.max_time", "must be > 0");
  require(kinetic.init == "point" || kinetic.init == "closure", "numerics.kinetic.init", "must be point or closure");
  require(kinetic.init_a > 0.0 && kinetic.init_a < 1.0, "numerics.kinetic.init_a", "must lie in (0, 1)");
  require(kinetic.bump_width >= 0.0, "numerics.kinetic.bump_width", "must be >= 0");

  require(macro.equation == "transport" || macro.equation == "keller-segel", "numerics.macro.equation",
          "must be transport or keller-segel");
  require(macro.cells > 0, "numerics.macro.cells", "must be > 0");
  require(finite_pos(macro.domain_length), "numerics.macro.domain_length", "must be > 0");
  require(std::isnan(macro.kappa) || std::isfinite(macro.kappa), "numerics.macro.kappa", "must be finite");
  require(std::isnan(macro.D0) || (std::isfinite(macro.D0) && macro.D0 >= 0.0), "numerics.macro.D0", "must be >= 0");
  require(finite_pos(macro.bump_width), "numerics.macro.bump_width", "must be > 0");
  require(!macro.times.empty(), "numerics.macro.times", "must not be empty");
  for (std::size_t i = 0; i < macro.times.size(); ++i) {
    require(macro.times[i] >= 0.0 && (i == 0 || macro.times[i] >= macro.times[i - 1]), "numerics.macro.times",
            "must be nonnegative and nondecreasing");
  }
  require(!sweep.kR_list.empty(), "sweep.kR_list", "must not be empty");
  for (double kR : sweep.kR_list) require(finite_pos(kR), "sweep.kR_list", "entries must be > 0");
  require(!output_dir.empty(), "outputs.dir", "must not be empty");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig c;
  Section top(j, "");
  std::string tier = to_string(c.tier);
  top.get("tier", tier);
  c.tier = tier_from_string(tier);
  read_params(top.child("params"), c.params);
  read_env(top.child("env"), c.env);
  {
    Section n = top.child("numerics");
    n.get("seed", c.seed, true);
    n.get("threads", c.threads);
    read_agents(n.child("agents"), c.agents);
    read_kinetic(n.child("kinetic"), c.kinetic);
    read_macro(n.child("macro"), c.macro);
    n.finish();
  }
  read_sweep(top.child("sweep"), c.sweep);
  {
    Section o = top.child("outputs");
    o.get("dir", c.output_dir);
    o.finish();
  }
  top.finish();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("config: cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string resolved_config_json(const ExperimentConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

std::string config_hash(const ExperimentConfig& cfg) {
  // Output location and thread count do not change results, so they are
  // left out of the hash.
  json j = to_json(cfg);
  j.erase("outputs");
  j["numerics"].erase("threads");
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace chemokin
