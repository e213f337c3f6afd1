#include <chrono>
#include <cmath>
#include <random>

#include "averages.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "gen.hpp"

using namespace hyg;

namespace {

// Reference: literal sum over the enumerated support.
std::vector<double> brute_apply(const GroupMeasure& z, const FiniteAction& a, const std::vector<double>& f) {
  std::vector<double> out(a.size(), 0.0);
  z.for_each([&](const Element& g, double w) {
    const Element gi = a.spec().invert(g);
    for (std::size_t x = 0; x < out.size(); ++x) out[x] += w * f[a.act(gi, x)];
  });
  return out;
}

const Observable kParityF = Observable::table({1, -1}, "character");

}  // namespace

TEST_CASE("measure constructors") {
  const auto g = GroupSpec::free_group(2);
  const auto b1 = beta(g, 1);
  for (const char* w : {"", "a", "A", "b", "B"}) CHECK(b1.exact_weight(g.parse(w)) == Rational(1, 5));
  CHECK(b1.exact_weight(g.parse("ab")) == 0);
  const auto s0 = sigma(g, 0);
  CHECK(s0.exact_weight(Element{}) == 1);
  CHECK(s0.support_size() == 1);
  const auto sp = sigma_prime(g, 1);
  CHECK(sp.exact_weight(g.parse("a")) == Rational(1, 8));
  CHECK(sp.exact_weight(g.parse("ab")) == Rational(1, 24));
  CHECK(sp.support_size() == 16);
  CHECK_THROWS_AS(uniform_lengths(g, 2.2, 2.7, "empty"), Error);
  try {
    uniform_lengths(g, 2.2, 2.7, "empty");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kEmptySupport);
  }
  CHECK_THROWS_AS(sigma_shell(g, 3, 0), Error);
  const auto sh = sigma_shell(g, 3, 1);  // lengths 3 and 4
  CHECK(sh.min_length() == 3);
  CHECK(sh.max_length() == 4);
  CHECK(sh.exact_weight(g.parse("abab")) == Rational(1, 108 + 36));
  CHECK_THROWS_AS(GroupMeasure::sparse(g, {}, "none"), Error);
  CHECK_THROWS_AS(GroupMeasure::sparse(g, {{g.parse("a"), 0.5}}, "half"), Error);
}

TEST_CASE("support and weight invariants of every constructor") {
  for (const auto& spec : {GroupSpec::free_group(2), GroupSpec::free_product(2, 3), GroupSpec::product_with_finite(2, 3)}) {
    for (int r = 0; r <= 8; ++r) {
      std::vector<std::pair<GroupMeasure, std::pair<int, int>>> ms = {
          {beta(spec, r), {0, r}}, {sigma(spec, r), {r, r}}, {mu(spec, r), {0, r}}, {sigma_prime(spec, r), {r, r + 1}}};
      if (r >= 1) {
        ms.push_back({sigma_shell(spec, r, 1.5), {r - 1, r + 1}});
        ms.push_back({mu_shell(spec, r, 2), {0, r + 2}});
      }
      for (const auto& [m, range] : ms) {
        Rational total = 0;
        for (const auto& q : m.sphere_mass()) total += q;
        CHECK(total == 1);
        CHECK(m.min_length() >= range.first);
        CHECK(m.max_length() <= range.second);
        double dsum = 0;
        if (r <= 5) {
          m.for_each([&](const Element& g, double w) {
            CHECK(static_cast<int>(g.size()) >= range.first);
            dsum += w;
          });
          CHECK(std::abs(dsum - 1) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("parity averages") {
  const auto g = GroupSpec::free_group(2);
  const FiniteAction par = FiniteAction::parity(g);
  const std::vector<Rational> f = {1, -1};
  CHECK(apply(beta(g, 1), par, kParityF, std::size_t{0}) == doctest::Approx(-0.6));
  CHECK(apply_finite_exact(beta(g, 1), par, f)[0] == Rational(-3, 5));
  for (int n = 0; n <= 40; ++n) {
    const auto s = apply_finite_exact(sigma(g, n), par, f);
    CHECK(s[0] == (n % 2 ? -1 : 1));
    CHECK(s[1] == (n % 2 ? 1 : -1));
    CHECK(apply_finite_exact(sigma_prime(g, n), par, f)[0] == 0);
    CHECK(abs(apply_finite_exact(mu(g, n), par, f)[0]) <= Rational(2, n + 1));
  }
  for (int n = 10; n <= 14; ++n) {
    const double v = std::abs(apply(beta(g, n), par, kParityF, std::size_t{0}));
    CHECK(v >= 0.3);
    CHECK(v <= 0.7);
  }
}

TEST_CASE("quotient bucketing equals enumeration") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  struct Case {
    GroupSpec spec;
    FiniteAction act;
  };
  const auto f2 = GroupSpec::free_group(2);
  const auto zz = GroupSpec::free_product(2, 3);
  const auto fz = GroupSpec::product_with_finite(2, 2);
  std::vector<Case> cases = {
      {f2, FiniteAction::cyclic(f2, 5, {1, 2})},
      {f2, FiniteAction(f2, {{1, 0, 2}, {1, 2, 0}}, "S3")},
      {zz, FiniteAction(zz, {{1, 0, 2}, {1, 2, 0}}, "S3")},
      {fz, FiniteAction(fz, {{1, 0, 2, 3}, {1, 0, 3, 2}, {0, 1, 3, 2}}, "mix")},
  };
  for (const auto& c : cases) {
    std::vector<double> f(c.act.size());
    for (double& v : f) v = u(rng);
    const Observable obs = Observable::table(f);
    for (int n = 0; n <= 6; ++n) {
      for (const auto& m : {sigma(c.spec, n), beta(c.spec, n), mu_shell(c.spec, n + 1, 1.5)}) {
        const auto fast = apply_finite(m, c.act, obs);
        const auto slow = brute_apply(m, c.act, f);
        for (std::size_t x = 0; x < f.size(); ++x) CHECK(std::abs(fast[x] - slow[x]) < 1e-12);
      }
    }
  }
}

TEST_CASE("averaging operator properties") {
  const auto g = GroupSpec::free_group(2);
  const FiniteAction z5 = FiniteAction::cyclic(g, 5, {1, 2});
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> d(-5, 5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> f(5), h(5);
    std::vector<double> fd(5);
    for (std::size_t i = 0; i < 5; ++i) f[i] = d(rng), h[i] = d(rng), fd[i] = static_cast<double>(f[i]);
    // identity, linearity, Cesaro convexity, contraction
    CHECK(apply_finite_exact(sigma(g, 0), z5, f) == f);
    const int n = trial % 8;
    std::vector<Rational> fh(5);
    for (std::size_t i = 0; i < 5; ++i) fh[i] = 2 * f[i] - h[i];
    const auto lf = apply_finite_exact(beta(g, n), z5, f), lh = apply_finite_exact(beta(g, n), z5, h);
    const auto lfh = apply_finite_exact(beta(g, n), z5, fh);
    for (std::size_t i = 0; i < 5; ++i) CHECK(lfh[i] == 2 * lf[i] - lh[i]);
    std::vector<Rational> cesaro(5, 0);
    for (int k = 0; k <= n; ++k) {
      const auto s = apply_finite_exact(sigma(g, k), z5, f);
      for (std::size_t i = 0; i < 5; ++i) cesaro[i] += s[i] / (n + 1);
    }
    CHECK(apply_finite_exact(mu(g, n), z5, f) == cesaro);
    const Observable obs = Observable::table(fd);
    for (double v : apply_finite(mu(g, 12), z5, obs)) CHECK(std::abs(v) <= obs.sup_bound() + 1e-12);
  }
}

TEST_CASE("circle character sums equal enumeration") {
  const auto g = GroupSpec::free_group(2);
  const PmpAction c = CircleAction::circle_pair(g, true);
  const Observable f = Observable::trig(0.2, {{1, 0.7, 0.4}, {3, -0.3, 1.1}});
  for (int n = 0; n <= 7; ++n) {
    for (const auto& m : {sigma(g, n), mu(g, n)}) {
      for (double x : {0.0, 0.37, 0.81}) {
        double slow = 0;
        m.for_each([&](const Element& e, double w) { slow += w * f.eval(c.circle().act(g.invert(e), x)); });
        CHECK(std::abs(apply(m, c, f, x) - slow) < 1e-12);
      }
    }
  }
  // |f| and intervals go through enumeration
  const double v = apply(sigma(g, 3), c, Observable::interval(0.1, 0.6), 0.25);
  CHECK(v >= 0);
  CHECK(v <= 1);
}

TEST_CASE("maximal function") {
  const auto g = GroupSpec::free_group(2);
  const PmpAction par = FiniteAction::parity(g);
  std::vector<GroupMeasure> fam;
  for (int n = 0; n <= 5; ++n) fam.push_back(sigma(g, n));
  CHECK(maximal_function(fam, par, kParityF, std::size_t{0}) == doctest::Approx(1.0));
  CHECK(maximal_function(fam, par, Observable::table({1, 1}), std::size_t{1}) == doctest::Approx(1.0));
  CHECK(maximal_function({beta(g, 2)}, par, kParityF, std::size_t{0}) ==
        doctest::Approx(apply(beta(g, 2), par, kParityF.abs(), std::size_t{0})));
  CHECK_THROWS_AS(maximal_function({}, par, kParityF, std::size_t{0}), Error);
  // monotone in the family
  const FiniteAction z5 = FiniteAction::cyclic(g, 5, {1, 2});
  const Observable h = Observable::table({0.3, -1, 0.2, 0.9, -0.4});
  double prev = 0;
  std::vector<GroupMeasure> grow;
  for (int n = 0; n <= 6; ++n) {
    grow.push_back(beta(g, n));
    const double m = maximal_function(grow, z5, h, std::size_t{2});
    CHECK(m >= prev);
    CHECK(m >= apply(beta(g, n), z5, h.abs(), std::size_t{2}) - 1e-15);
    prev = m;
  }
}

TEST_CASE("maximal norm ratio stays flat on finite quotients") {
  const auto g = GroupSpec::free_group(2);
  const FiniteAction s3(g, {{1, 0, 2}, {1, 2, 0}}, "S3");
  const FiniteAction z7 = FiniteAction::cyclic(g, 7, {1, 3});
  std::mt19937_64 rng(99);
  std::normal_distribution<double> nd;
  for (const FiniteAction* act : {&s3, &z7}) {
    std::vector<GroupMeasure> f10, f20;
    for (int n = 1; n <= 20; ++n) (n <= 10 ? f10 : f20).push_back(mu(g, n));
    f20.insert(f20.begin(), f10.begin(), f10.end());
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> f(act->size());
      for (double& v : f) v = nd(rng);
      const Observable obs = Observable::table(f);
      const double r10 = maximal_norm_ratio(f10, *act, obs);
      const double r20 = maximal_norm_ratio(f20, *act, obs);
      CHECK(r20 >= r10);
      CHECK(r20 < 1.05 * r10);
    }
  }
}

TEST_CASE("convergence reports") {
  const auto g = GroupSpec::free_group(2);
  const PmpAction par = FiniteAction::parity(g);
  const Observable target = conditional_expectation(par, kParityF);
  std::vector<GroupMeasure> mus, sigmas;
  for (int n = 0; n <= 14; ++n) mus.push_back(mu(g, n)), sigmas.push_back(sigma(g, n));
  const auto rm = convergence_report(mus, par, kParityF, {std::size_t{0}, std::size_t{1}}, target, 0.5);
  for (const auto& p : rm.points)
    for (std::size_t n = 0; n < p.deviation.size(); ++n) CHECK(p.deviation[n] <= 2.0 / static_cast<double>(n + 1) + 1e-12);
  CHECK(rm.pass());
  const auto rs = convergence_report(sigmas, par, kParityF, {std::size_t{0}}, target, 0.5);
  for (double dv : rs.points[0].deviation) CHECK(dv == doctest::Approx(1.0));
  CHECK_FALSE(rs.pass());
  const Observable inv = Observable::table({0.5, 0.5});
  const auto ri = convergence_report(mus, par, inv, {std::size_t{0}}, conditional_expectation(par, inv), 0.5);
  for (double dv : ri.points[0].deviation) CHECK(dv < 1e-15);
}

TEST_CASE("bucketed sums reach radius 40 quickly") {
  const auto g = GroupSpec::free_group(2);
  const auto t0 = std::chrono::steady_clock::now();
  const auto v = apply_finite_exact(beta(g, 40), FiniteAction::parity(g), {1, -1});
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(5));
  CHECK(abs(v[0]) < 1);
}
