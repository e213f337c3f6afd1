#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include "averages.hpp"
#include "errors.hpp"
#include "horoshell.hpp"

namespace hyg {

const std::vector<CriterionInfo>& acceptance_criteria() {
  static const std::vector<CriterionInfo> c{
      {"AC1", "sphere counts: automaton = BFS, F_2 closed form to n = 40", 40, 10},
      {"AC2", "growth exponents of F_2 and F_3", 40, 1},
      {"AC3", "exhaustive four-point delta = 0 at radius 4", 4, 60},
      {"AC4", "quasi-conformality and Patterson-Sullivan cylinders", 25, 30},
      {"AC5", "cocycle integrality and cocycle law", 5, 10},
      {"AC6", "parity: sigma oscillates, sigma' and mu vanish, beta oscillates", 14, 60},
      {"AC7", "mu_n convergence trend on Z/3 and the circle pair", 14, 300},
      {"AC8a", "horoshell volume band", 20, 300},
      {"AC8b", "horoshell volume exponent at r = 20", 20, 300},
      {"AC9", "regularity containment and trend", 10, 600},
      {"AC10", "asymptotic invariance trend of S_{r,a}", 20, 600},
      {"AC11", "kappa support and parity convergence", 16, 600},
      {"AC12", "domination of zeta by kappa", 14, 600},
  };
  return c;
}

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[violated] " << what << "; ";
    }
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

template <class F>
void parallel_for(std::size_t n, int workers, F&& f) {
  const std::size_t w = std::max<std::size_t>(1, std::min<std::size_t>(n, static_cast<std::size_t>(workers)));
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errs(w);
  for (std::size_t id = 0; id < w; ++id) {
    threads.emplace_back([&, id] {
      try {
        for (std::size_t i = id; i < n; i += w) f(i);
      } catch (...) {
        errs[id] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

Element random_element(const GroupSpec& g, std::mt19937_64& rng, int maxlen) {
  const int n = static_cast<int>(rng() % static_cast<std::uint64_t>(maxlen + 1));
  std::vector<Letter> raw;
  for (int i = 0; i < n; ++i) raw.push_back(static_cast<Letter>(rng() % static_cast<std::uint64_t>(g.alphabet_size())));
  Element x = g.reduce(raw);
  while (static_cast<int>(x.size()) > maxlen) x.letters.pop_back();
  return g.reduce(x.letters);
}

std::vector<MaharamPoint> bases_for(const GroupSpec& spec, int count, int T, int r, std::uint64_t seed) {
  const CylinderMeasure m(spec);
  std::vector<MaharamPoint> out;
  for (int i = 0; i < count; ++i)
    out.push_back(sample_base(m, T, required_horizon(spec, r, T, 8), seed * 1000003ULL + static_cast<std::uint64_t>(i)));
  return out;
}

void ac1(Outcome& o, const VerifyOptions&) {
  for (const auto& spec : {GroupSpec::free_group(2), GroupSpec::free_group(3), GroupSpec::free_product(2, 3)}) {
    const ConeAutomaton aut(spec);
    const auto sizes = aut.sphere_sizes(8);
    const auto bfs = bfs_spheres(spec, 8);
    for (int n = 0; n <= 8; ++n)
      o.check(Count(bfs[static_cast<std::size_t>(n)].size()) == sizes[static_cast<std::size_t>(n)],
              spec.describe() + " n=" + std::to_string(n) + " automaton vs BFS");
  }
  const ConeAutomaton f2(GroupSpec::free_group(2));
  const auto sizes = f2.sphere_sizes(40);
  Count expect = 4;
  for (int n = 1; n <= 40; ++n) {
    o.check(sizes[static_cast<std::size_t>(n)] == expect, "F_2 n=" + std::to_string(n) + " closed form");
    expect *= 3;
  }
  o.detail << "BFS agreement n <= 8 on F_2, F_3, Z_2*Z_3; |S_40(F_2)| = " << sizes[40].str();
}

void ac2(Outcome& o, const VerifyOptions&) {
  const double v2 = growth_exponent(ConeAutomaton(GroupSpec::free_group(2))).vhat;
  const double v3 = growth_exponent(ConeAutomaton(GroupSpec::free_group(3))).vhat;
  o.check(std::abs(v2 - std::log(3.0)) < 1e-9, "vhat(F_2) = log 3");
  o.check(std::abs(v3 - std::log(5.0)) < 1e-9, "vhat(F_3) = log 5");
  o.detail << "|vhat(F_2) - log 3| = " << std::abs(v2 - std::log(3.0)) << ", |vhat(F_3) - log 5| = "
           << std::abs(v3 - std::log(5.0));
}

void ac3(Outcome& o, const VerifyOptions& opts) {
  for (const auto& spec : {GroupSpec::free_group(2), GroupSpec::free_product(2, 3)}) {
    const auto c = estimate_delta(spec, 4, 4'000'000'000ULL, opts.seed, opts.workers);
    o.check(c.exhaustive, spec.describe() + " exhaustive");
    o.check(c.delta_hat == 0, spec.describe() + " delta_hat = 0");
    o.detail << spec.describe() << ": delta_hat " << c.delta_hat << " over " << c.count << " quadruples; ";
  }
}

void ac4(Outcome& o, const VerifyOptions&) {
  const CylinderMeasure m(GroupSpec::free_group(2));
  const auto q = verify_quasiconformal(m, 4, 8);
  o.check(q.exact_zero && q.max_deviation == 0, "rational quasi-conformal deviation is exactly 0");
  const double s = std::log(3.0) + 1e-3;
  const double ca = ps_cylinder(m, m.spec().parse("a"), s, 25);
  const double cab = ps_cylinder(m, m.spec().parse("ab"), s, 25);
  o.check(std::abs(ca - 0.25) < 0.01, "PS nu(C_a) within 0.01 of 1/4");
  o.check(std::abs(cab - 1.0 / 12) < 0.01, "PS nu(C_ab) within 0.01 of 1/12");
  o.detail << q.checked << " (g, cylinder) pairs exact; PS nu(C_a) = " << fmt(ca) << ", nu(C_ab) = " << fmt(cab);
}

void ac5(Outcome& o, const VerifyOptions& opts) {
  for (const auto& spec : {GroupSpec::free_group(2), GroupSpec::free_product(2, 3)}) {
    const CylinderMeasure m(spec);
    std::mt19937_64 rng(opts.seed);
    int bad_int = 0, bad_law = 0;
    for (int i = 0; i < 10000; ++i) {
      const Element g = random_element(spec, rng, 5);
      const Element h = random_element(spec, rng, 5);
      const BoundaryRay xi = sample_ray(m, 40, rng);
      bad_int += r_lambda(m, g, xi) + horofunction(spec, xi, spec.invert(g)) != 0;
      bad_law += r_lambda(m, spec.multiply(g, h), xi) != r_lambda(m, g, xi.translate(spec, h)) + r_lambda(m, h, xi);
    }
    o.check(bad_int == 0, spec.describe() + " r_lambda + h = 0");
    o.check(bad_law == 0, spec.describe() + " cocycle law");
    o.detail << spec.describe() << ": 10000 triples, " << bad_int << " integrality and " << bad_law
             << " cocycle mismatches; ";
  }
}

void ac6(Outcome& o, const VerifyOptions&) {
  const auto spec = GroupSpec::free_group(2);
  const auto par = FiniteAction::parity(spec);
  const std::vector<Rational> f{1, -1};
  for (int n = 0; n <= 14; ++n) {
    o.check(apply_finite_exact(sigma(spec, n), par, f)[0] == (n % 2 == 0 ? 1 : -1), "sigma_" + std::to_string(n));
    o.check(apply_finite_exact(sigma_prime(spec, n), par, f)[0] == 0, "sigma'_" + std::to_string(n));
    o.check(abs(apply_finite_exact(mu(spec, n), par, f)[0]) <= Rational(2, n + 1), "mu_" + std::to_string(n));
  }
  double lo = 1, hi = 0;
  for (int n = 10; n <= 14; ++n) {
    const double v = std::abs(apply_finite(beta(spec, n), par, Observable::table({1, -1}))[0]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  o.check(lo >= 0.3 && hi <= 0.7, "|beta_n f| in [0.3, 0.7] for 10 <= n <= 14");
  o.detail << "sigma_n f = (-1)^n, sigma'_n f = 0, |mu_n f| <= 2/(n+1) exactly for n <= 14; |beta_n f| in ["
           << fmt(lo) << ", " << fmt(hi) << "]";
}

void ac7(Outcome& o, const VerifyOptions& opts) {
  const auto spec = GroupSpec::free_group(2);
  std::vector<GroupMeasure> fam;
  for (int n = 0; n <= 14; ++n) fam.push_back(mu(spec, n));
  std::mt19937_64 rng(opts.seed);
  auto u = [&] { return 2 * unit_uniform(rng) - 1; };
  const PmpAction z3(FiniteAction::cyclic(spec, 3, {1, 0}));
  const PmpAction circle(CircleAction::circle_pair(spec, true));
  double worst = 0;
  int passed = 0;
  auto one = [&](const PmpAction& act, const Observable& f, const std::vector<Point>& pts) {
    const auto rep = convergence_report(fam, act, f, pts, conditional_expectation(act, f), 0.5);
    for (const auto& p : rep.points)
      if (p.first_third_max > 0) worst = std::max(worst, p.last_third_max / p.first_third_max);
    passed += rep.pass();
  };
  for (int i = 0; i < 10; ++i)
    one(z3, Observable::table({u(), u(), u()}), {Point(std::size_t{0}), Point(std::size_t{1}), Point(std::size_t{2})});
  std::vector<Point> pts;
  for (int j = 0; j < 5; ++j) pts.emplace_back(0.1 + 0.17 * j);
  for (int i = 0; i < 10; ++i) {
    std::vector<TrigTerm> terms;
    for (int k = 1; k <= 3; ++k) terms.push_back(TrigTerm{k, u(), u() * 3.14159});
    one(circle, Observable::trig(u(), terms), pts);
  }
  o.check(passed == 20, "every observable meets the 0.5 trend");
  o.detail << passed << "/20 observables pass; worst last/first third ratio " << fmt(worst);
}

VolumeProfile ac8_profile(const VerifyOptions& opts) {
  const auto spec = GroupSpec::free_group(2);
  return volume_profile(spec, bases_for(spec, 20, 4, 20, opts.seed), 8, 20, 4);
}

void ac8a(Outcome& o, const VerifyOptions& opts) {
  const auto vp = ac8_profile(opts);
  o.check(vp.max_norm <= 10 * vp.min_norm, "max/min normalised volume <= 10");
  o.detail << "|Gamma_r| 3^(-r/2) in [" << fmt(vp.min_norm) << ", " << fmt(vp.max_norm)
           << "], ratio " << fmt(vp.max_norm / vp.min_norm) << " over r in [8, 20], 20 bases";
}

void ac8b(Outcome& o, const VerifyOptions& opts) {
  const auto vp = ac8_profile(opts);
  double lo = 1e9, hi = 0;
  for (const auto& row : vp.rows) {
    if (row.r != 20) continue;
    const double e = std::log(static_cast<double>(row.gamma)) / (20 * std::log(3.0) / 2);
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  o.check(lo >= 0.9 && hi <= 1.1, "log|Gamma_20| / (10 log 3) in [0.9, 1.1]");
  o.detail << "log|Gamma_20| / (10 log 3) in [" << fmt(lo) << ", " << fmt(hi) << "] across 20 bases";
}

void ac9(Outcome& o, const VerifyOptions& opts) {
  const auto spec = GroupSpec::free_group(2);
  const int T = 4;
  const int c0 = T - 1;
  const auto bases = bases_for(spec, 10, T, 10, opts.seed);
  std::vector<double> early(bases.size(), 0), late(bases.size(), 0);
  std::vector<int> needed(bases.size(), 0);
  parallel_for(bases.size(), opts.workers, [&](std::size_t i) {
    for (int r = 4; r <= 10; ++r) {
      const auto res = regularity_ratio(spec, bases[i], r);
      needed[i] = std::max(needed[i], res.needed_c0);
      if (r <= 6) early[i] = std::max(early[i], res.ratio);
      if (r >= 8) late[i] = std::max(late[i], res.ratio);
    }
  });
  double worst = 0;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    o.check(needed[i] <= c0, "union inside B_{r+C0} for base " + std::to_string(i));
    o.check(late[i] <= 1.5 * early[i], "trend for base " + std::to_string(i));
    worst = std::max(worst, late[i] / early[i]);
  }
  o.detail << "recorded C0 = " << c0 << " (largest needed " << *std::max_element(needed.begin(), needed.end())
           << "); worst max_{r in [8,10]} / max_{r in [4,6]} = " << fmt(worst);
}

void ac10(Outcome& o, const VerifyOptions& opts) {
  const auto spec = GroupSpec::free_group(2);
  const int T = 4, a = 4;
  const auto bases = bases_for(spec, 10, T, 20, opts.seed);
  const std::vector<std::string> movers{"a", "A", "b", "B"};
  const std::size_t jobs = bases.size() * movers.size();
  std::vector<InvarianceResult> at10(jobs), at20(jobs);
  parallel_for(jobs, opts.workers, [&](std::size_t j) {
    const auto& base = bases[j / movers.size()];
    const Element g = spec.parse(movers[j % movers.size()]);
    at10[j] = asymptotic_invariance(spec, base, 10, a, g);
    at20[j] = asymptotic_invariance(spec, base, 20, a, g);
  });
  double worst = 0, partial10 = 0, partial20 = 0;
  double lo10 = 2, hi10 = 0, lo20 = 2, hi20 = 0;
  for (std::size_t j = 0; j < jobs; ++j) {
    worst = std::max(worst, at20[j].cemetery / at10[j].cemetery);
    lo10 = std::min(lo10, at10[j].cemetery);
    hi10 = std::max(hi10, at10[j].cemetery);
    lo20 = std::min(lo20, at20[j].cemetery);
    hi20 = std::max(hi20, at20[j].cemetery);
    partial10 = std::max(partial10, at10[j].partial);
    partial20 = std::max(partial20, at20[j].partial);
  }
  o.check(worst <= 0.5, "ratio(r=20) <= ratio(r=10) / 2 for every base and generator");
  o.detail << "ratio with leaving points counted: r=10 in [" << fmt(lo10) << ", " << fmt(hi10) << "], r=20 in ["
           << fmt(lo20) << ", " << fmt(hi20) << "], worst r20/r10 " << fmt(worst)
           << "; partial-transformation ratio max " << fmt(partial10) << " (r=10), " << fmt(partial20)
           << " (r=20)";
}

void ac11(Outcome& o, const VerifyOptions& opts) {
  const auto spec = GroupSpec::free_group(2);
  const auto par = FiniteAction::parity(spec);
  const Observable f = Observable::table({1, -1});
  // values below this are rounding of an exact zero
  const double floor = 1e-9;
  KappaOptions k;
  k.a = 4;
  k.T = 4;
  k.samples = 100000;
  k.seed = opts.seed;
  k.workers = opts.workers;
  double v10 = 0, v16 = 0, vmax = 0;
  KappaMeasure last{k, sigma(spec, 0), 0, false, 0, {}};
  for (int r = 10; r <= 16; ++r) {
    k.r = r;
    KappaMeasure m = kappa(spec, k);
    o.check(m.measure.min_length() > r - m.rho && m.measure.max_length() <= r + m.rho,
            "support in shell at r=" + std::to_string(r));
    const double v = std::abs(apply_finite(m.measure, par, f)[0]);
    vmax = std::max(vmax, v);
    if (r == 10) v10 = v;
    if (r == 16) {
      v16 = v;
      last = std::move(m);
    }
    o.check(abs(apply_finite_exact(sigma(spec, r), par, {1, -1})[0]) == 1, "|sigma_r f| = 1");
  }
  o.check(v16 <= 0.25, "|kappa_16 f| <= 0.25");
  o.check(v16 <= 0.5 * v10 || std::max(v10, v16) < floor, "|kappa_16 f| <= |kappa_10 f| / 2");
  k.seed = opts.seed + 1;
  const KappaMeasure other = kappa(spec, k);
  const double v16b = std::abs(apply_finite(other.measure, par, f)[0]);
  double dmass = 0;
  for (int n = last.measure.min_length(); n <= last.measure.max_length(); ++n) {
    const double x = static_cast<double>(last.measure.sphere_mass()[static_cast<std::size_t>(n)]);
    const double y = n < static_cast<int>(other.measure.sphere_mass().size())
                         ? static_cast<double>(other.measure.sphere_mass()[static_cast<std::size_t>(n)])
                         : 0.0;
    dmass = std::max(dmass, std::abs(x - y));
  }
  o.check(std::abs(v16b - v16) <= 0.05 && dmass <= 0.01, "seed stability");
  o.detail << "rho = " << last.rho << "; |kappa_r f| max over r in [10,16] " << fmt(vmax) << " (r=10: " << fmt(v10)
           << ", r=16: " << fmt(v16) << "); |sigma_r f| = 1; seed change moves sphere masses by " << fmt(dmass);
}

void ac12(Outcome& o, const VerifyOptions& opts) {
  const auto spec = GroupSpec::free_group(2);
  const int a = 14, b = 2, T = 4;
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (int r = 10; r <= 14; ++r) {
    const auto rep = domination_check(spec, r, a, b, T, 100000, opts.seed, opts.workers);
    o.check(!rep.under_sampled && std::isfinite(rep.max_ratio), "finite ratio at r=" + std::to_string(r));
    lo = std::min(lo, rep.max_ratio);
    hi = std::max(hi, rep.max_ratio);
  }
  o.check(hi < 2 * lo, "variation < 2x across r in [10, 14]");
  const auto mc = domination_check(spec, 6, a, b, T, 100000, opts.seed, opts.workers);
  const double ex = domination_exact(spec, 6, a, b, T);
  o.check(std::abs(mc.max_ratio - ex) <= 0.2 * ex, "Monte Carlo within 20% of exact at r=6");
  o.detail << "a=" << a << " b=" << b << " T=" << T << "; max ratio in [" << fmt(lo) << ", " << fmt(hi)
           << "] for r in [10,14]; r=6 Monte Carlo " << fmt(mc.max_ratio) << " vs exact " << fmt(ex);
}

}  // namespace

RunReport verify(const VerifyOptions& opts) {
  static const std::map<std::string, std::function<void(Outcome&, const VerifyOptions&)>> impl{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3},   {"AC4", ac4},   {"AC5", ac5},   {"AC6", ac6},   {"AC7", ac7},
      {"AC8a", ac8a}, {"AC8b", ac8b}, {"AC9", ac9}, {"AC10", ac10}, {"AC11", ac11}, {"AC12", ac12}};
  for (const auto& id : opts.only)
    if (!impl.count(id)) fail(ErrorKind::kConfig, "unknown criterion id '" + id + "'");
  RunReport report;
  report.versions = module_versions();
  std::ostringstream echo;
  echo << "verify cap=" << opts.cap << " seed=" << opts.seed << " workers=" << opts.workers;
  report.config_echo = echo.str();
  for (const auto& c : acceptance_criteria()) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), c.id) == opts.only.end()) continue;
    Verdict v{c.id, "acceptance", VerdictStatus::kPass, "", 0};
    if (c.radius_needed > opts.cap) {
      v.status = VerdictStatus::kSkipped;
      v.detail = c.title + ": needs radius " + std::to_string(c.radius_needed) + " > cap " + std::to_string(opts.cap);
      report.verdicts.push_back(std::move(v));
      continue;
    }
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      impl.at(c.id)(o, opts);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[error] " << e.what();
    }
    v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (v.seconds > c.budget_seconds) {
      o.pass = false;
      o.detail << " [over budget " << fmt(v.seconds) << " s > " << c.budget_seconds << " s]";
    }
    v.status = o.pass ? VerdictStatus::kPass : VerdictStatus::kFail;
    v.detail = c.title + ": " + o.detail.str();
    report.verdicts.push_back(std::move(v));
  }
  return report;
}

}  // namespace hyg
