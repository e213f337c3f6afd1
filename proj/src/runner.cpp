#include "runner.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "averages.hpp"
#include "errors.hpp"
#include "horoshell.hpp"

#ifndef HYG_VERSION
#define HYG_VERSION "0.0.0"
#endif

namespace hyg {

const char* verdict_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::kPass: return "PASS";
    case VerdictStatus::kFail: return "FAIL";
    case VerdictStatus::kSkipped: return "SKIP";
  }
  return "?";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::map<std::string, std::string> module_versions() {
  std::map<std::string, std::string> v;
  for (const char* m : {"group_model", "sphere_automaton", "hyperbolic_geometry", "boundary_measure", "pmp_actions",
                        "averages", "horoshell", "cli"})
    v[m] = HYG_VERSION;
  return v;
}

int RunReport::exit_code() const {
  for (const auto& e : experiments)
    if (e.error) return 1;
  for (const auto& v : verdicts)
    if (v.status == VerdictStatus::kFail) return 1;
  return 0;
}

std::string RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["config"] = config_echo;
  j["versions"] = versions;
  j["experiments"] = nlohmann::ordered_json::array();
  for (const auto& e : experiments) {
    nlohmann::ordered_json x;
    x["name"] = e.name;
    x["kind"] = e.kind;
    x["seconds"] = e.seconds;
    x["tables"] = nlohmann::ordered_json::array();
    for (const auto& t : e.tables) x["tables"].push_back(t.name.empty() ? e.name + ".csv" : e.name + "-" + t.name + ".csv");
    if (e.error) {
      x["error"] = *e.error;
      x["error_kind"] = e.error_kind;
    }
    j["experiments"].push_back(x);
  }
  j["verdicts"] = nlohmann::ordered_json::array();
  for (const auto& v : verdicts) {
    j["verdicts"].push_back({{"id", v.id},
                             {"experiment", v.experiment},
                             {"status", verdict_name(v.status)},
                             {"detail", v.detail},
                             {"seconds", v.seconds}});
  }
  j["exit_code"] = exit_code();
  return j.dump(2) + "\n";
}

void RunReport::write(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  for (const auto& e : experiments) {
    for (const auto& t : e.tables) {
      const std::string file = dir + "/" + (t.name.empty() ? e.name : e.name + "-" + t.name) + ".csv";
      std::ofstream out(file, std::ios::binary);
      if (!out) fail(ErrorKind::kConfig, file + ": cannot write");
      out << t.text;
    }
  }
  std::ofstream out(dir + "/report.json", std::ios::binary);
  if (!out) fail(ErrorKind::kConfig, dir + "/report.json: cannot write");
  out << to_json();
}

namespace {

class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      if (!first) os_ << ',';
      os_ << h;
      first = false;
    }
    os_ << '\n';
  }
  template <class... Ts>
  void row(const Ts&... xs) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(xs), first = false), ...);
    os_ << '\n';
  }
  std::string str() const { return os_.str(); }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  static std::string cell(const Count& v) { return v.str(); }
  static std::string cell(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string q = "\"";
    for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  static std::string cell(const char* v) { return cell(std::string(v)); }
  std::ostringstream os_;
};

struct Context {
  const ExperimentConfig& cfg;
  const ExperimentSpec& e;
  GroupSpec spec;
  std::uint64_t seed;
  ExperimentResult& result;
  std::vector<Verdict>& verdicts;

  void verdict(const std::string& property, bool pass, const std::string& detail) {
    verdicts.push_back({e.kind + "." + property, e.name, pass ? VerdictStatus::kPass : VerdictStatus::kFail, detail, 0});
  }
  void table(const std::string& name, const Csv& csv) { result.tables.push_back({name, csv.str()}); }
};

std::vector<GroupMeasure> family_of(const ExperimentSpec& e, const GroupSpec& spec) {
  std::vector<GroupMeasure> out;
  for (int n = e.r_min; n <= e.r_max; ++n) {
    if (e.family == "sigma") out.push_back(sigma(spec, n));
    else if (e.family == "sigma_prime") out.push_back(sigma_prime(spec, n));
    else if (e.family == "beta") out.push_back(beta(spec, n));
    else out.push_back(mu(spec, n));
  }
  return out;
}

std::vector<Observable> observables_of(const ExperimentSpec& e, const PmpAction& action) {
  std::vector<Observable> out;
  for (std::size_t i = 0; i < e.observables.size(); ++i) {
    const ObservableSpec& o = e.observables[i];
    if (o.trig == action.is_finite())
      fail(ErrorKind::kConfig, "observables[" + std::to_string(i) + "]: kind does not match the action");
    if (!o.trig && o.table.size() != action.finite().size())
      fail(ErrorKind::kConfig, "observables[" + std::to_string(i) + "]: table size differs from the space size");
    out.push_back(make_observable(o, "f" + std::to_string(i)));
  }
  if (out.empty()) {
    if (action.is_finite()) {
      std::vector<double> v(action.finite().size());
      for (std::size_t x = 0; x < v.size(); ++x) v[x] = x % 2 == 0 ? 1.0 : -1.0;
      out.push_back(Observable::table(v, "f0"));
    } else {
      out.push_back(Observable::trig(0, {TrigTerm{1, 1, 0}}, "f0"));
    }
  }
  return out;
}

std::vector<Point> points_of(const PmpAction& action) {
  std::vector<Point> pts;
  if (action.is_finite()) {
    for (std::size_t x = 0; x < action.finite().size(); ++x) pts.emplace_back(x);
  } else {
    for (int j = 0; j < 5; ++j) pts.emplace_back(0.1 + 0.17 * j);
  }
  return pts;
}

std::string point_label(const Point& p) {
  if (std::holds_alternative<std::size_t>(p)) return std::to_string(std::get<std::size_t>(p));
  return format_double(std::get<double>(p));
}

void run_spheres(Context& c) {
  const ConeAutomaton aut(c.spec);
  const auto sizes = aut.sphere_sizes(c.e.r_max);
  const int bfs_max = std::min(c.e.r_max, 8);
  const auto bfs = bfs_spheres(c.spec, bfs_max);
  Csv csv({"n", "sphere_size", "bfs_size", "ball_size"});
  bool agree = true, closed = true;
  Count ball = 0;
  for (int n = 0; n <= c.e.r_max; ++n) {
    ball += sizes[static_cast<std::size_t>(n)];
    if (n < c.e.r_min) continue;
    std::string b;
    if (n <= bfs_max) {
      b = std::to_string(bfs[static_cast<std::size_t>(n)].size());
      agree = agree && Count(bfs[static_cast<std::size_t>(n)].size()) == sizes[static_cast<std::size_t>(n)];
    }
    if (c.spec.kind() == GroupKind::kFree && n > 0) {
      const int k = c.spec.rank();
      Count expect = 2 * k;
      for (int i = 1; i < n; ++i) expect *= 2 * k - 1;
      closed = closed && expect == sizes[static_cast<std::size_t>(n)];
    }
    csv.row(n, sizes[static_cast<std::size_t>(n)], b, ball);
  }
  c.table("", csv);
  c.verdict("bfs-agreement", agree, "automaton counts vs breadth-first search for n <= " + std::to_string(bfs_max));
  if (c.spec.kind() == GroupKind::kFree) c.verdict("closed-form", closed, "sphere sizes equal 2k(2k-1)^(n-1)");
}

void run_geometry(Context& c) {
  const auto cert = estimate_delta(c.spec, c.e.r_max, 4'000'000'000ULL, c.seed, c.cfg.workers);
  Csv csv({"radius", "delta_hat", "quadruples", "exhaustive"});
  csv.row(cert.radius, cert.delta_hat, std::to_string(cert.count), cert.exhaustive);
  c.table("", csv);
  if (c.spec.tree_like())
    c.verdict("tree-delta-zero", cert.delta_hat == 0, "delta_hat = " + format_double(cert.delta_hat));
}

void run_measure(Context& c) {
  const CylinderMeasure m(c.spec);
  const auto rep = verify_quasiconformal(m, c.e.r_max, c.e.depth);
  Csv csv({"radius", "depth", "max_deviation", "exact_zero", "checked"});
  csv.row(c.e.r_max, c.e.depth, rep.max_deviation, rep.exact_zero, std::to_string(rep.checked));
  c.table("", csv);
  Csv cyl({"word", "nu"});
  const ConeAutomaton& aut = m.automaton();
  for (int n = 1; n <= 2; ++n)
    for_each_in_sphere(aut, n, [&](const Element& w) { cyl.row(c.spec.format(w), m.value(w)); });
  c.table("cylinders", cyl);
  const bool ok = m.exact() ? rep.exact_zero : rep.max_deviation < 1e-9;
  c.verdict("quasiconformal", ok, "max deviation " + format_double(rep.max_deviation));
}

void run_average(Context& c) {
  const PmpAction action = make_action(c.spec, c.e.action);
  const auto family = family_of(c.e, c.spec);
  const auto fs = observables_of(c.e, action);
  const auto pts = points_of(action);
  Csv csv({"observable", "n", "x", "value"});
  bool all_pass = true;
  for (const auto& f : fs) {
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (action.is_finite()) {
        const auto v = apply_finite(family[i], action.finite(), f);
        for (std::size_t x = 0; x < v.size(); ++x) csv.row(f.name(), c.e.r_min + static_cast<int>(i), x, v[x]);
      } else {
        for (const auto& p : pts)
          csv.row(f.name(), c.e.r_min + static_cast<int>(i), point_label(p), apply(family[i], action, f, p));
      }
    }
    if (c.e.theta) {
      const auto target = conditional_expectation(action, f);
      all_pass = all_pass && convergence_report(family, action, f, pts, target, *c.e.theta).pass();
    }
  }
  c.table("", csv);
  if (c.e.theta)
    c.verdict("convergence", all_pass,
              "last-third deviation <= " + format_double(*c.e.theta) + " x first-third for every observable and point");
}

void run_maximal(Context& c) {
  const PmpAction action = make_action(c.spec, c.e.action);
  if (!action.is_finite()) fail(ErrorKind::kCapability, "maximal experiments need a finite action");
  const auto family = family_of(c.e, c.spec);
  Csv csv({"observable", "x", "maximal"});
  Csv norms({"observable", "norm_ratio"});
  double worst = 0;
  for (const auto& f : observables_of(c.e, action)) {
    const auto mf = maximal_function_finite(family, action.finite(), f);
    for (std::size_t x = 0; x < mf.size(); ++x) csv.row(f.name(), x, mf[x]);
    const double ratio = maximal_norm_ratio(family, action.finite(), f);
    norms.row(f.name(), ratio);
    worst = std::max(worst, ratio);
  }
  c.table("", csv);
  c.table("norms", norms);
  if (c.e.bound)
    c.verdict("norm-bound", worst <= *c.e.bound,
              "max ||Mf||/||f|| = " + format_double(worst) + " vs bound " + format_double(*c.e.bound));
}

std::vector<MaharamPoint> sampled_bases(const GroupSpec& spec, int count, int T, int r, std::uint64_t seed) {
  const CylinderMeasure m(spec);
  std::vector<MaharamPoint> out;
  for (int i = 0; i < count; ++i)
    out.push_back(sample_base(m, T, required_horizon(spec, r, T, 8), seed * 1000003ULL + static_cast<std::uint64_t>(i)));
  return out;
}

// Serialized kappa: one row per element when the support is small, else one
// row per word length (radial measures are uniform on each sphere).
void kappa_tables(Context& c, const KappaMeasure& k) {
  const GroupMeasure& m = k.measure;
  if (m.support_size() <= 100000) {
    Csv atoms({"word", "weight"});
    m.for_each([&](const Element& g, double w) { atoms.row(c.spec.format(g), w); });
    c.table("kappa", atoms);
    return;
  }
  if (!m.is_radial()) fail(ErrorKind::kCapability, "kappa support too large to list");
  Csv lengths({"length", "sphere_mass", "element_weight"});
  const auto sizes = ConeAutomaton(c.spec).sphere_sizes(m.max_length());
  for (int n = m.min_length(); n <= m.max_length(); ++n) {
    const Rational& mass = m.sphere_mass()[static_cast<std::size_t>(n)];
    lengths.row(n, static_cast<double>(mass), static_cast<double>(Rational(mass / sizes[static_cast<std::size_t>(n)])));
  }
  c.table("kappa-lengths", lengths);
}

void run_horoshell(Context& c) {
  const auto bases = sampled_bases(c.spec, c.e.bases, c.e.T, c.e.r_max, c.seed);
  const auto vp = volume_profile(c.spec, bases, c.e.r_min, c.e.r_max, c.e.a);
  Csv vol({"base", "r", "in_range", "gamma", "b", "s", "gamma_norm", "b_norm", "s_norm"});
  bool nested = true;
  for (std::size_t i = 0; i < vp.rows.size(); ++i) {
    const auto& row = vp.rows[i];
    vol.row(row.base, row.r, row.in_range, row.gamma, row.b, row.s, row.gamma_norm, row.b_norm, row.s_norm);
    if (i > 0 && vp.rows[i - 1].base == row.base) nested = nested && vp.rows[i - 1].gamma <= row.gamma;
  }
  c.table("volume", vol);
  c.verdict("nesting", nested, "|Gamma_r| non-decreasing in r for every base");
  c.verdict("volume-band", vp.max_norm <= 10 * vp.min_norm,
            "normalised volume in [" + format_double(vp.min_norm) + ", " + format_double(vp.max_norm) + "]");

  Csv reg({"base", "r", "union", "b", "ratio", "needed_c0"});
  for (std::size_t i = 0; i < bases.size(); ++i) {
    for (int r = c.e.r_min; r <= std::min(c.e.r_max, 10); ++r) {
      const auto res = regularity_ratio(c.spec, bases[i], r);
      reg.row(i, r, res.union_size, res.b_size, res.ratio, res.needed_c0);
    }
  }
  c.table("regularity", reg);

  // invariance at r_max and half of it; the listing grows like 3^(r/2)
  Csv inv({"base", "r", "mover", "size", "kept", "leaving", "entering", "cemetery", "partial"});
  const ConeAutomaton aut(c.spec);
  std::vector<Element> movers;
  for_each_in_sphere(aut, 1, [&](const Element& g) { movers.push_back(g); });
  for (std::size_t i = 0; i < bases.size(); ++i) {
    for (int r : {c.e.r_max / 2, c.e.r_max}) {
      if (r - c.e.a < 0) continue;
      for (const auto& g : movers) {
        const auto res = asymptotic_invariance(c.spec, bases[i], r, c.e.a, g);
        inv.row(i, r, c.spec.format(g), res.size, res.kept, res.leaving, res.entering, res.cemetery, res.partial);
      }
    }
  }
  c.table("invariance", inv);

  KappaOptions o;
  o.r = c.e.r_max;
  o.a = c.e.a;
  o.T = c.e.T;
  o.samples = c.e.samples;
  o.seed = c.seed;
  o.workers = c.cfg.workers;
  kappa_tables(c, kappa(c.spec, o));
}

void run_kappa(Context& c) {
  const PmpAction action = make_action(c.spec, c.e.action);
  if (!action.is_finite()) fail(ErrorKind::kCapability, "kappa-ergodic experiments need a finite action");
  const Observable f = observables_of(c.e, action).front();
  Csv csv({"r", "kappa_value", "sigma_value", "rho", "min_length", "max_length"});
  bool support = true;
  for (int r = c.e.r_min; r <= c.e.r_max; ++r) {
    KappaOptions o;
    o.r = r;
    o.a = c.e.a;
    o.T = c.e.T;
    o.samples = c.e.samples;
    o.seed = c.seed;
    o.workers = c.cfg.workers;
    const KappaMeasure k = kappa(c.spec, o);
    const double kv = apply_finite(k.measure, action.finite(), f)[0];
    const double sv = apply_finite(sigma(c.spec, r), action.finite(), f)[0];
    support = support && k.measure.min_length() > r - k.rho && k.measure.max_length() <= r + k.rho;
    csv.row(r, kv, sv, k.rho, k.measure.min_length(), k.measure.max_length());
    if (r == c.e.r_max) kappa_tables(c, k);
  }
  c.table("", csv);
  c.verdict("support", support, "support inside r - rho < |g| <= r + rho for every r");
}

void run_domination(Context& c) {
  Csv csv({"r", "max_ratio", "ratio_low", "ratio_high", "under_sampled", "uncovered", "argmax"});
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  bool ok = true;
  for (int r = c.e.r_min; r <= c.e.r_max; ++r) {
    const auto rep = domination_check(c.spec, r, c.e.a, c.e.b, c.e.T, c.e.samples, c.seed, c.cfg.workers);
    csv.row(r, rep.max_ratio, rep.ratio_low, rep.ratio_high, rep.under_sampled, rep.uncovered, c.spec.format(rep.argmax));
    ok = ok && !rep.under_sampled && std::isfinite(rep.max_ratio);
    lo = std::min(lo, rep.max_ratio);
    hi = std::max(hi, rep.max_ratio);
  }
  c.table("", csv);
  c.verdict("bounded-variation", ok && hi < 2 * lo,
            "max ratio in [" + format_double(lo) + ", " + format_double(hi) + "] across r");
}

}  // namespace

RunReport run(const ExperimentConfig& cfg) {
  validate_config(cfg);
  RunReport report;
  report.config_echo = serialize_config(cfg);
  report.versions = module_versions();
  for (const auto& e : cfg.experiments) {
    ExperimentResult res;
    res.name = e.name;
    res.kind = e.kind;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Verdict> local;
    try {
      Context c{cfg, e, GroupSpec::from_string(e.group), e.seed ? *e.seed : cfg.seed.value_or(0), res, local};
      if (e.kind == "spheres") run_spheres(c);
      else if (e.kind == "geometry") run_geometry(c);
      else if (e.kind == "measure") run_measure(c);
      else if (e.kind == "average") run_average(c);
      else if (e.kind == "maximal") run_maximal(c);
      else if (e.kind == "horoshell") run_horoshell(c);
      else if (e.kind == "kappa-ergodic") run_kappa(c);
      else run_domination(c);
    } catch (const Error& err) {
      res.tables.clear();
      local.clear();
      res.error = err.what();
      res.error_kind = error_kind_name(err.kind());
    } catch (const std::exception& err) {
      res.tables.clear();
      local.clear();
      res.error = err.what();
      res.error_kind = "internal";
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.experiments.push_back(std::move(res));
    for (auto& v : local) report.verdicts.push_back(std::move(v));
  }
  return report;
}

}  // namespace hyg
