#include <cmath>
#include <set>

#include "automaton.hpp"
#include "doctest.h"
#include "errors.hpp"

using namespace hyg;

TEST_CASE("automaton sizes and small spheres") {
  const ConeAutomaton f2(GroupSpec::free_group(2));
  CHECK(f2.state_count() == 5);
  CHECK(ConeAutomaton(GroupSpec::free_group(3)).state_count() == 7);
  CHECK(f2.sphere_size(0) == 1);
  CHECK(f2.sphere_size(1) == 4);
  CHECK(f2.sphere_size(2) == 12);
  const ConeAutomaton fp(GroupSpec::free_product(2, 3));
  CHECK(fp.sphere_size(1) == 3);
  CHECK(fp.sphere_size(2) == 4);
}

TEST_CASE("stream equals BFS sphere for n <= 8") {
  for (const auto& spec : {GroupSpec::free_group(2), GroupSpec::free_group(3), GroupSpec::free_product(2, 3),
                           GroupSpec::free_product(3, 4), GroupSpec::product_with_finite(2, 3)}) {
    const ConeAutomaton aut(spec);
    const int nmax = spec.kind() == GroupKind::kFree && spec.rank() == 3 ? 6 : 8;
    const auto bfs = bfs_spheres(spec, nmax);
    for (int n = 0; n <= nmax; ++n) {
      std::vector<Element> got;
      for_each_in_sphere(aut, n, [&](const Element& x) { got.push_back(x); });
      std::sort(got.begin(), got.end());
      CHECK(std::adjacent_find(got.begin(), got.end()) == got.end());
      CHECK(got == bfs[static_cast<std::size_t>(n)]);
      CHECK(aut.sphere_size(n) == Count(got.size()));
      for (const auto& x : got) CHECK(spec.word_length(x) == n);
    }
  }
}

TEST_CASE("first-letter split streams partition the sphere") {
  const ConeAutomaton aut(GroupSpec::free_group(2));
  std::size_t total = 0;
  for (int l = 0; l < 4; ++l) {
    SphereStream s(aut, 5, static_cast<Letter>(l));
    Element x;
    while (s.next(x)) {
      CHECK(x.letters[0] == l);
      ++total;
    }
  }
  CHECK(total == 4 * 81);
}

TEST_CASE("F_2 counts equal 4*3^(n-1) up to 40 and matrix powers agree") {
  const ConeAutomaton aut(GroupSpec::free_group(2));
  const auto sizes = aut.sphere_sizes(40);
  Count p = 4;
  for (int n = 1; n <= 40; ++n) {
    CHECK(sizes[static_cast<std::size_t>(n)] == p);
    CHECK(aut.sphere_size_by_matrix_power(n) == p);
    p *= 3;
  }
  const ConeAutomaton fp(GroupSpec::free_product(3, 5));
  const auto s2 = fp.sphere_sizes(40);
  for (int n = 0; n <= 40; n += 7) CHECK(fp.sphere_size_by_matrix_power(n) == s2[static_cast<std::size_t>(n)]);
}

TEST_CASE("growth exponent") {
  const auto g2 = growth_exponent(ConeAutomaton(GroupSpec::free_group(2)));
  CHECK(std::abs(g2.vhat - std::log(3.0)) < 1e-9);
  const auto g3 = growth_exponent(ConeAutomaton(GroupSpec::free_group(3)));
  CHECK(std::abs(g3.vhat - std::log(5.0)) < 1e-9);
  CHECK(g2.lower_const <= g2.upper_const);
  const auto fp = growth_exponent(ConeAutomaton(GroupSpec::free_product(2, 3)));
  CHECK(std::abs(fp.vhat - 0.5 * std::log(2.0)) < 1e-9);
  CHECK(fp.vhat > 0);
}

TEST_CASE("sphere ratio approaches exp(vhat)") {
  for (int k : {2, 3}) {
    const ConeAutomaton aut(GroupSpec::free_group(k));
    const auto sizes = aut.sphere_sizes(20);
    const double target = std::exp(growth_exponent(aut).vhat);
    for (int n = 10; n < 20; ++n) {
      const double r = sizes[static_cast<std::size_t>(n + 1)].convert_to<double>() /
                       sizes[static_cast<std::size_t>(n)].convert_to<double>();
      CHECK(std::abs(r - target) < 1e-6);
    }
  }
}
