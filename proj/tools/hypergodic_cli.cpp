// Command-line front end. Talks to the library only through the C API.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "hypergodic/hypergodic.h"

namespace {

constexpr int kExitConfig = 2;

struct Global {
  std::string config;
  std::optional<std::uint64_t> seed;
  int workers = -1;
  std::string out;
  int cap = -1;
};

// Flags for the single experiment built when no --config is given.
struct Flags {
  std::string group = "F_2";
  std::string action = "parity";
  std::string family = "mu";
  int r_min = 0;
  int r_max = 8;
  int T = 4;
  int a = 4;
  int b = 2;
  int depth = 6;
  int bases = 10;
  long samples = 100000;
  std::optional<double> theta;
  std::optional<double> bound;
  bool domination = false;
  std::string only;
};

std::string fetch(hyg_status (*f)(const hyg_config*, char*, size_t, size_t*), const hyg_config* c) {
  size_t need = 0;
  f(c, nullptr, 0, &need);
  std::string s(need, '\0');
  if (f(c, s.data(), s.size(), nullptr) != HYG_OK) return {};
  s.pop_back();
  return s;
}

std::string experiment_yaml(const std::string& kind, const Flags& f, const Global& g) {
  std::ostringstream y;
  if (g.seed) y << "seed: " << *g.seed << "\n";
  y << "experiments:\n";
  y << "  - kind: " << kind << "\n";
  y << "    group: \"" << f.group << "\"\n";
  y << "    action: \"" << f.action << "\"\n";
  y << "    family: " << f.family << "\n";
  y << "    r_min: " << f.r_min << "\n    r_max: " << f.r_max << "\n";
  y << "    T: " << f.T << "\n    a: " << f.a << "\n    b: " << f.b << "\n";
  y << "    depth: " << f.depth << "\n    bases: " << f.bases << "\n    samples: " << f.samples << "\n";
  if (f.theta) y << "    theta: " << *f.theta << "\n";
  if (f.bound) y << "    bound: " << *f.bound << "\n";
  return y.str();
}

int config_error(const char* what) {
  std::cerr << "config error: " << what << "\n";
  return kExitConfig;
}

void print_verdicts(const hyg_report* rep) {
  for (size_t i = 0; i < hyg_report_verdict_count(rep); ++i) {
    const char* id = nullptr;
    const char* detail = nullptr;
    hyg_verdict v = HYG_PASS;
    double secs = 0;
    hyg_report_verdict(rep, i, &id, &v, &detail, &secs);
    const char* tag = v == HYG_PASS ? "PASS" : v == HYG_FAIL ? "FAIL" : "SKIP";
    std::printf("%s %s %s\n", tag, id, detail);
  }
}

int run_experiments(const std::string& kind, const Flags& f, const Global& g) {
  hyg_config* raw = nullptr;
  const hyg_status st = g.config.empty() ? hyg_config_parse(experiment_yaml(kind, f, g).c_str(), &raw)
                                         : hyg_config_load(g.config.c_str(), &raw);
  if (st != HYG_OK) return config_error(hyg_last_error());
  std::unique_ptr<hyg_config, decltype(&hyg_config_free)> cfg(raw, hyg_config_free);
  if (!g.config.empty()) hyg_config_filter_kind(cfg.get(), kind.c_str());
  const uint64_t seed = g.seed.value_or(0);
  if (hyg_config_override(cfg.get(), g.seed ? &seed : nullptr, g.workers, g.out.empty() ? nullptr : g.out.c_str(),
                          g.cap) != HYG_OK)
    return config_error(hyg_last_error());

  hyg_report* rep_raw = nullptr;
  if (const hyg_status rs = hyg_run(cfg.get(), &rep_raw); rs != HYG_OK) {
    std::cerr << "error: " << hyg_last_error() << "\n";
    return rs == HYG_ERR_CONFIG ? kExitConfig : 1;
  }
  std::unique_ptr<hyg_report, decltype(&hyg_report_free)> rep(rep_raw, hyg_report_free);
  const std::string out = fetch(hyg_config_out_dir, cfg.get());
  for (size_t i = 0; i < hyg_report_experiment_count(rep.get()); ++i) {
    const char* name = nullptr;
    const char* k = nullptr;
    const char* err = nullptr;
    hyg_report_experiment(rep.get(), i, &name, &k, &err);
    if (err) std::printf("ERROR %s (%s): %s\n", name, k, err);
    else std::printf("DONE %s (%s)\n", name, k);
  }
  print_verdicts(rep.get());
  if (hyg_report_write(rep.get(), out.c_str()) != HYG_OK) {
    std::cerr << "error: " << hyg_last_error() << "\n";
    return 1;
  }
  std::printf("wrote %s/report.json\n", out.c_str());
  return hyg_report_exit_code(rep.get());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sphere averages, boundary measures and horoshell experiments on hyperbolic groups"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  Flags f;
  app.add_option("--config", g.config, "Experiment file (YAML)")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--workers", g.workers, "Threads inside an experiment")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--cap", g.cap, "Largest radius any experiment may use")->check(CLI::NonNegativeNumber);
  app.add_flag_callback("--version", [] {
    std::printf("%s\n", hyg_version());
    throw CLI::Success();
  });

  auto common = [&](CLI::App* s) {
    s->add_option("--group", f.group, "F_k, Z_p*Z_q or F_kxZ_m");
    s->add_option("--r-min", f.r_min, "Smallest radius");
    s->add_option("--r", f.r_max, "Largest radius");
  };
  auto averaging = [&](CLI::App* s) {
    s->add_option("--action", f.action, "parity, circle or cyclic:N:i1,i2");
    s->add_option("--family", f.family, "sigma, sigma_prime, mu or beta");
  };

  auto* spheres = app.add_subcommand("spheres", "Sphere sizes from the automaton, checked against BFS");
  common(spheres);
  auto* geometry = app.add_subcommand("geometry", "Four-point delta estimate on a ball (--r is the radius)");
  common(geometry);
  auto* measure = app.add_subcommand("measure", "Quasi-conformality check of the boundary measure");
  common(measure);
  measure->add_option("--depth", f.depth, "Cylinder depth");
  auto* average = app.add_subcommand("average", "Averaging operators on a measure-preserving action");
  common(average);
  averaging(average);
  average->add_option("--theta", f.theta, "Declared convergence threshold");
  auto* maximal = app.add_subcommand("maximal", "Maximal function on a finite action");
  common(maximal);
  averaging(maximal);
  maximal->add_option("--bound", f.bound, "Declared bound on ||Mf||/||f||");
  auto* horoshell = app.add_subcommand("horoshell", "Horoshell volume, regularity and invariance tables");
  common(horoshell);
  horoshell->add_option("--T", f.T, "Window length");
  horoshell->add_option("--a", f.a, "Shell width");
  horoshell->add_option("--bases", f.bases, "Number of sampled base points");
  horoshell->add_option("--samples", f.samples, "Monte Carlo ray samples for the kappa listing");
  auto* kappa = app.add_subcommand("kappa", "Horoshell measures kappa_r on an action, or domination with --domination");
  common(kappa);
  kappa->add_option("--action", f.action, "Finite action");
  kappa->add_option("--T", f.T, "Window length");
  kappa->add_option("--a", f.a, "Shell width");
  kappa->add_option("--b", f.b, "Width of the dominated shell");
  kappa->add_option("--samples", f.samples, "Monte Carlo ray samples");
  kappa->add_flag("--domination", f.domination, "Run the domination check instead");
  auto* verify = app.add_subcommand("verify", "Run the acceptance criteria");
  verify->add_option("--only", f.only, "Comma-separated criterion ids (AC1, AC8b, ...)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (verify->parsed()) {
    hyg_report* raw = nullptr;
    const int cap = g.cap < 0 ? 40 : g.cap;
    const hyg_status vs = hyg_verify(cap, g.seed.value_or(1), g.workers < 1 ? 1 : g.workers,
                                     f.only.empty() ? nullptr : f.only.c_str(), &raw);
    if (vs != HYG_OK) {
      std::cerr << "error: " << hyg_last_error() << "\n";
      return vs == HYG_ERR_CONFIG ? kExitConfig : 1;
    }
    std::unique_ptr<hyg_report, decltype(&hyg_report_free)> rep(raw, hyg_report_free);
    print_verdicts(rep.get());
    if (!g.out.empty() && hyg_report_write(rep.get(), g.out.c_str()) != HYG_OK) {
      std::cerr << "error: " << hyg_last_error() << "\n";
      return 1;
    }
    return hyg_report_exit_code(rep.get());
  }

  for (auto* s : {spheres, geometry, measure, average, maximal, horoshell}) {
    if (s->parsed()) return run_experiments(s->get_name(), f, g);
  }
  const std::string kind = f.domination ? "domination" : "kappa-ergodic";
  return run_experiments(kind, f, g);
}
