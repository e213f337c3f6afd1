#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>

#include "doctest.h"
#include "errors.hpp"
#include "gen.hpp"
#include "horoshell.hpp"

using namespace hyg;

namespace {

// h via d(x_N, g) - d(x_N, e) with x_N a long head of the ray.
int brute_h(const GroupSpec& s, const BoundaryRay& xi, const Element& g) {
  const std::size_t n = g.size() + 12;
  const Element x = xi.head(n);
  return s.distance(x, g) - static_cast<int>(n);
}

std::vector<Element> brute_ball(const GroupSpec& s, int radius) {
  std::set<Element> seen{Element{}};
  std::vector<Element> frontier{Element{}}, all{Element{}};
  for (int k = 0; k < radius; ++k) {
    std::vector<Element> next;
    for (const auto& x : frontier) {
      for (int l = 0; l < s.alphabet_size(); ++l) {
        const Element y = s.multiply(x, Element{{static_cast<Letter>(l)}});
        if (seen.insert(y).second) {
          next.push_back(y);
          all.push_back(y);
        }
      }
    }
    frontier = std::move(next);
  }
  return all;
}

struct BruteSets {
  std::set<Element> gamma;
  std::set<std::pair<int, std::vector<Letter>>> landings;
};

BruteSets brute_gamma(const GroupSpec& s, const MaharamPoint& b, int r, int lo_exclusive = -1000) {
  BruteSets out;
  for (const auto& g : brute_ball(s, r + b.T)) {
    const int h = brute_h(s, b.xi, g);
    const int k = static_cast<int>(g.size()) - h - b.t;
    if (k > r || k <= lo_exclusive || b.t + h < 0 || b.t + h >= b.T) continue;
    out.gamma.insert(g);
    std::vector<Letter> raw = s.invert(g).letters;
    const Element head = b.xi.head(40);
    raw.insert(raw.end(), head.letters.begin(), head.letters.end());
    std::vector<Letter> moved = s.reduce(raw).letters;
    moved.resize(20);
    out.landings.insert({b.t + h, moved});
  }
  return out;
}

std::vector<MaharamPoint> bases(const GroupSpec& s, int count, int T, std::uint64_t seed) {
  const CylinderMeasure m(s);
  std::vector<MaharamPoint> out;
  for (int i = 0; i < count; ++i) out.push_back(sample_base(m, T, required_horizon(s, 12, T, 40), seed + i));
  return out;
}

}  // namespace

TEST_CASE("gamma_r hand examples on a^inf") {
  const auto s = GroupSpec::free_group(2);
  const auto xi = parse_ray(s, "a^inf");
  const auto b0 = make_base(xi, 0, 2);
  CHECK(in_gamma(s, b0, 0, Element{}));
  const Element a = s.parse("a");
  CHECK(horofunction(s, xi, a) == -1);
  CHECK(static_cast<int>(a.size()) - horofunction(s, xi, a) - 0 == 2);
  CHECK_FALSE(in_gamma(s, b0, 0, a));
  // the landing t + h = -1 leaves [0, 2), so a only enters once t = 1
  CHECK_FALSE(in_gamma(s, b0, 2, a));
  CHECK(in_gamma(s, make_base(xi, 1, 2), 1, a));
  CHECK(in_gamma(s, b0, 0, s.parse("A")));
  CHECK_THROWS_AS(make_base(xi, 2, 2), Error);
}

TEST_CASE("gamma_r, b_r, s_ra against brute enumeration") {
  for (const auto& s : {GroupSpec::free_group(2), GroupSpec::free_product(2, 3), GroupSpec::free_product(3, 4)}) {
    std::vector<MaharamPoint> bs = bases(s, 3, 3, 11);
    const std::string period = s.info(0).name + s.info(static_cast<Letter>(s.alphabet_size() - 1)).name;
    bs.push_back(make_base(parse_ray(s, "(" + period + ")^inf"), 1, 3));
    for (const auto& b : bs) {
      for (int r = 0; r <= 5; ++r) {
        const BruteSets ref = brute_gamma(s, b, r);
        const SubsetSample g = gamma_r(s, b, r);
        std::set<Element> got;
        for (const auto& e : g.entries) {
          got.insert(e.g);
          CHECK(in_gamma(s, b, r, e.g));
          CHECK(e.h == brute_h(s, b.xi, e.g));
          CHECK(e.landing_t == b.t + e.h);
        }
        CHECK(got == ref.gamma);
        CHECK(gamma_count(s, b, r) == Count(ref.gamma.size()));
        const SubsetSample bb = b_r(s, b, r);
        CHECK(bb.entries.size() == ref.landings.size());
        CHECK(bb.entries.size() == g.entries.size());
        if (r >= 2) {
          const BruteSets inner = brute_gamma(s, b, r - 2);
          const SubsetSample sh = s_ra(s, b, r, 2);
          std::size_t diff = 0;
          for (const auto& l : ref.landings) diff += inner.landings.count(l) == 0;
          CHECK(sh.entries.size() == diff);
          CHECK(shell_count(s, b, r, 2) == Count(diff));
          for (const auto& e : sh.entries) CHECK_FALSE(in_gamma(s, b, r - 2, e.g));
        }
      }
    }
  }
}

TEST_CASE("|B_r| = |Gamma_r| on sampled rays, and nesting") {
  const auto s = GroupSpec::free_group(2);
  for (const auto& b : bases(s, 100, 4, 500)) {
    std::size_t prev = 0;
    for (int r : {2, 6, 10}) {
      const auto g = gamma_r(s, b, r);
      const auto bb = b_r(s, b, r);
      CHECK(bb.entries.size() == g.entries.size());
      CHECK(bb.merged == 0);
      CHECK(g.entries.size() >= prev);
      prev = g.entries.size();
    }
  }
}

TEST_CASE("landing coordinate matches the Radon-Nikodym cocycle") {
  const auto s = GroupSpec::free_product(2, 3);
  const CylinderMeasure m(s);
  for (const auto& b : bases(s, 5, 4, 90)) {
    for (const auto& e : gamma_r(s, b, 6).entries) {
      CHECK(e.landing_t == b.t - r_lambda(m, s.invert(e.g), b.xi));
    }
  }
}

TEST_CASE("volume profile") {
  const auto s = GroupSpec::free_group(2);
  const auto bs = bases(s, 4, 4, 3);
  const auto vp = volume_profile(s, bs, 4, 18, 4);
  CHECK(vp.min_norm > 0);
  CHECK(vp.max_norm >= vp.min_norm);
  std::map<std::size_t, Count> last;
  for (const auto& row : vp.rows) {
    CHECK(row.in_range == (row.r >= 16));
    CHECK(row.b == row.gamma);
    CHECK(row.s <= row.gamma);
    if (last.count(row.base)) CHECK(last[row.base] <= row.gamma);
    last[row.base] = row.gamma;
    CHECK(row.gamma_norm == doctest::Approx(static_cast<double>(row.gamma) / std::pow(3.0, row.r / 2.0)));
  }
}

TEST_CASE("regularity: scan and closed count agree, ratio at least one") {
  const auto s = GroupSpec::free_group(2);
  for (const auto& b : bases(s, 3, 4, 21)) {
    for (int r = 2; r <= 6; ++r) {
      const auto scan = regularity_scan(s, b, r);
      const auto count = regularity_count(s, b, r);
      CHECK(scan.union_size == count.union_size);
      CHECK(scan.b_size == gamma_count(s, b, r));
      CHECK(scan.needed_c0 == count.needed_c0);
      CHECK(scan.ratio >= 1.0);
      CHECK(scan.needed_c0 >= 0);
      CHECK(scan.needed_c0 < b.T);
    }
  }
  const auto z = GroupSpec::free_product(2, 3);
  for (const auto& b : bases(z, 2, 3, 5)) {
    const auto res = regularity_ratio(z, b, 5);
    CHECK(res.ratio >= 1.0);
  }
}

TEST_CASE("asymptotic invariance against a direct set computation") {
  const auto s = GroupSpec::free_group(2);
  for (const auto& b : bases(s, 3, 4, 77)) {
    const int r = 7, a = 3;
    const BruteSets S = brute_gamma(s, b, r, r - a);
    for (const char* mv : {"", "a", "B", "ab"}) {
      const Element g = s.parse(mv);
      const Element gi = s.invert(g);
      std::size_t kept = 0;
      for (const auto& x : S.gamma) kept += S.gamma.count(s.multiply(x, gi));
      const double n = static_cast<double>(S.gamma.size());
      const auto res = asymptotic_invariance(s, b, r, a, g);
      CHECK(res.size == Count(S.gamma.size()));
      CHECK(res.kept == Count(kept));
      CHECK(res.cemetery == doctest::Approx(2.0 * (n - static_cast<double>(kept)) / n));
      CHECK(res.cemetery >= 0.0);
      CHECK(res.cemetery <= 2.0);
      CHECK(res.partial >= 0.0);
      CHECK(res.partial <= 2.0);
      if (g.empty()) {
        CHECK(res.cemetery == 0.0);
        CHECK(res.partial == 0.0);
      }
    }
  }
}

TEST_CASE("neighborhood beta is bounded and non-increasing") {
  const auto s = GroupSpec::free_group(2);
  for (const auto& b : bases(s, 2, 4, 8)) {
    int prev = 1 << 20;
    for (int r = 3; r <= 7; ++r) {
      const int beta = neighborhood_beta(s, b, r, 1);
      CHECK(beta >= 0);
      CHECK(beta <= 2);
      CHECK(beta <= prev);
      prev = beta;
    }
  }
}

TEST_CASE("kappa: support, mass, determinism") {
  const auto s = GroupSpec::free_group(2);
  KappaOptions o;
  o.r = 8;
  o.samples = 2000;
  o.seed = 4;
  const auto k = kappa(s, o);
  CHECK(k.radial);
  CHECK(k.rho == kappa_shell_rho(o.a, o.T));
  CHECK(k.measure.min_length() > o.r - k.rho);
  CHECK(k.measure.max_length() <= o.r + k.rho);
  double mass = 0;
  k.measure.for_each([&](const Element&, double w) { mass += w; });
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  const auto k2 = kappa(s, o);
  for (int n = k.measure.min_length(); n <= k.measure.max_length(); ++n) {
    CHECK(k.measure.sphere_mass()[n] == k2.measure.sphere_mass()[n]);
  }
  o.workers = 3;
  const auto k3 = kappa(s, o);
  const auto k4 = kappa(s, o);
  CHECK(k3.measure.sphere_mass() == k4.measure.sphere_mass());

  const auto par = FiniteAction::parity(s);
  const auto v = apply_finite(k.measure, par, Observable::table({1.0, -1.0}, "character"));
  CHECK(std::abs(v[0]) < 1e-9);
}

TEST_CASE("kappa Monte Carlo matches the exact cylinder sum") {
  const auto s = GroupSpec::free_group(2);
  const int r = 3, a = 2, T = 2;
  KappaOptions o;
  o.r = r;
  o.a = a;
  o.T = T;
  o.samples = 400;
  const auto k = kappa(s, o);
  std::vector<Element> gs;
  for (const auto& g : brute_ball(s, r + T)) gs.push_back(g);
  const auto ex = kappa_exact(s, r, a, T, gs, r + T + 1);
  double total = 0;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    CHECK(k.measure.weight(gs[i]) == doctest::Approx(ex[i]).epsilon(1e-9));
    total += ex[i];
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK_THROWS_AS(kappa_exact(s, r, a, T, gs, r + T), Error);
}

TEST_CASE("kappa on a free product is sparse and sample-limited") {
  const auto s = GroupSpec::free_product(2, 3);
  KappaOptions o;
  o.r = 6;
  o.samples = 300;
  const auto k = kappa(s, o);
  CHECK_FALSE(k.radial);
  double mass = 0;
  k.measure.for_each([&](const Element& g, double w) {
    mass += w;
    CHECK(static_cast<int>(g.size()) > o.r - k.rho);
    CHECK(static_cast<int>(g.size()) <= o.r + k.rho);
  });
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  const auto rep = domination_check(s, 16, 14, 2, 4, 1, 1);
  CHECK(rep.under_sampled);
  CHECK(rep.uncovered > 0);
}

TEST_CASE("domination: regime, exact cross-check") {
  const auto s = GroupSpec::free_group(2);
  CHECK_THROWS_AS(domination_check(s, 8, 12, 2, 4, 10, 1), Error);
  const auto rep = domination_check(s, 6, 14, 2, 4, 2000, 9);
  CHECK_FALSE(rep.under_sampled);
  CHECK(std::isfinite(rep.max_ratio));
  CHECK(rep.ratio_low <= rep.max_ratio);
  CHECK(rep.max_ratio <= rep.ratio_high);
  const double ex = domination_exact(s, 6, 14, 2, 4);
  CHECK(rep.max_ratio == doctest::Approx(ex).epsilon(0.2));
}

TEST_CASE("kappa parity vanishes exactly on F_2 with even T") {
  // On F_2 every ray has the same length profile, so kappa's sphere masses
  // are (1/T) sum_t profile_t(n) / |Gamma_{r,a}(xi,t)| in exact arithmetic.
  const auto s = GroupSpec::free_group(2);
  const ConeAutomaton aut(s);
  const auto xi = parse_ray(s, "(ab)^inf");
  for (int r : {10, 16}) {
    Rational total = 0, mass = 0;
    for (int t = 0; t < 4; ++t) {
      const auto prof = shell_length_profile(s, aut, make_base(xi, t, 4), r, 4);
      long long n = 0;
      for (double c : prof) n += static_cast<long long>(c);
      for (std::size_t len = 0; len < prof.size(); ++len) {
        const Rational w(static_cast<long long>(prof[len]), 4 * n);
        total += len % 2 == 0 ? w : -w;
        mass += w;
      }
    }
    CHECK(mass == 1);
    CHECK(total == 0);
  }
}
