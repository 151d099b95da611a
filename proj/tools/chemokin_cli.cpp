// chemokin: run one experiment tier from a JSON config.
//
//   chemokin closure --config sweep.json --out results/ --strict

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "chemokin/chemokin.h"

namespace {

unsigned threads_from_env() {
  const char* s = std::getenv("CHEMOKIN_THREADS");
  if (!s || !*s) return 0;
  char* end = nullptr;
  const unsigned long v = std::strtoul(s, &end, 10);
  if (*end != '\0' || v == 0 || v > 4096) {
    std::fprintf(stderr, "chemokin: ignoring CHEMOKIN_THREADS=%s (expected a positive integer)\n", s);
    return 0;
  }
  return static_cast<unsigned>(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiscale run-and-tumble chemotaxis toolkit"};
  app.set_version_flag("--version", std::string(ck_version()));
  app.require_subcommand(1);

  std::string config, out;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool strict = false;

  const char* commands[][2] = {
      {"closure", "Leading-order activity profiles, exponents and drift speeds per G"},
      {"agents", "Agent simulation to steady state: drift series and activity histogram"},
      {"kinetic", "Kinetic solver run: activity marginal and density"},
      {"macro", "Transport or Keller-Segel solution snapshots"},
      {"velocity-sweep", "Drift speed against G for each kR, optionally with Monte Carlo"},
      {"convergence", "Kinetic solutions over a list of eps against closure and macro limits"},
      {"compare", "Agent histogram overlaid on the closure profile"},
  };
  CLI::Option* seed_opt = nullptr;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c[0], c[1]);
    sub->add_option("--config", config, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory (overrides outputs.dir)");
    auto* so = sub->add_option("--seed", seed, "Master seed (overrides numerics.seed)");
    sub->add_option("--threads", threads, "Worker threads (default: CHEMOKIN_THREADS, then the config)")
        ->check(CLI::Range(1u, 4096u));
    sub->add_flag("--strict", strict, "Exit nonzero when an acceptance threshold is violated");
    sub->callback([&, so] { seed_opt = so; });
  }
  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  ck_run_options opt;
  ck_run_options_init(&opt);
  opt.config_path = config.empty() ? nullptr : config.c_str();
  opt.out_dir = out.empty() ? nullptr : out.c_str();
  if (seed_opt && seed_opt->count() > 0) {
    opt.has_seed = 1;
    opt.seed = seed;
  }
  opt.threads = threads ? threads : threads_from_env();
  opt.strict = strict ? 1 : 0;

  const ck_status st = ck_run(command.c_str(), &opt);
  if (*ck_last_report()) std::printf("%s\n", ck_last_report());
  if (st != CK_OK) {
    std::fprintf(stderr, "chemokin %s: %s\n", command.c_str(), ck_last_error());
    return st == CK_THRESHOLD_VIOLATION ? 2 : 1;
  }
  return 0;
}
