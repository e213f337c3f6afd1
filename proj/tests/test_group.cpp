#include <random>

#include "doctest.h"
#include "errors.hpp"
#include "gen.hpp"
#include "group.hpp"

using namespace hyg;

namespace {

// Independent free-reduction oracle on signed generator indices.
std::vector<int> free_reduce_oracle(const std::vector<int>& w) {
  std::vector<int> out;
  for (int x : w) {
    if (!out.empty() && out.back() == -x) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("reduce examples") {
  const auto f2 = GroupSpec::free_group(2);
  CHECK(f2.parse("aA").empty());
  CHECK(f2.format(f2.parse("a b B a")) == "aa");
  const auto fp = GroupSpec::free_product(2, 3);
  CHECK(fp.parse("ss").empty());
  CHECK(fp.parse("t t^2").empty());
  CHECK(fp.word_length(fp.parse("t^2")) == 1);
  CHECK(fp.format(fp.invert(fp.parse("t"))) == "t^2");
}

TEST_CASE("multiply and invert examples") {
  const auto f2 = GroupSpec::free_group(2);
  CHECK(f2.format(f2.multiply(f2.parse("ab"), f2.parse("Ba"))) == "aa");
  CHECK(f2.format(f2.invert(f2.parse("ab"))) == "BA");
  CHECK(f2.invert(Element{}).empty());
  CHECK(f2.word_length(f2.parse("aa")) == 2);
  const auto x = f2.parse("abAb");
  CHECK(f2.multiply(x, Element{}) == x);
}

TEST_CASE("unknown letters are rejected") {
  const auto f2 = GroupSpec::free_group(2);
  CHECK_THROWS_AS(f2.parse("ac"), Error);
  std::vector<Letter> bad{0, 9};
  CHECK_THROWS_AS(f2.reduce(bad), Error);
  CHECK_THROWS_AS(GroupSpec::free_group(1), Error);
  CHECK_THROWS_AS(GroupSpec::free_product(2, 2), Error);
}

TEST_CASE("free reduction agrees with the stack oracle") {
  const auto f3 = GroupSpec::free_group(3);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto raw = testgen::random_raw(f3, rng, 20);
    std::vector<int> signed_word;
    for (Letter l : raw) signed_word.push_back((l / 2 + 1) * (l % 2 == 0 ? 1 : -1));
    const auto expect = free_reduce_oracle(signed_word);
    const Element got = f3.reduce(raw);
    REQUIRE(got.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
      const int l = got.letters[i];
      CHECK((l / 2 + 1) * (l % 2 == 0 ? 1 : -1) == expect[i]);
    }
  }
}

TEST_CASE("reduce is idempotent and parse/format round-trips") {
  std::mt19937_64 rng(11);
  for (const auto& g : testgen::all_specs()) {
    for (int trial = 0; trial < 300; ++trial) {
      const Element x = g.reduce(testgen::random_raw(g, rng, 16));
      CHECK(g.reduce(x.letters) == x);
      CHECK(g.parse(g.format(x)) == x);
    }
  }
}

TEST_CASE("group laws on random triples") {
  std::mt19937_64 rng(3);
  for (const auto& g : testgen::all_specs()) {
    for (int trial = 0; trial < 500; ++trial) {
      const Element x = testgen::random_element(g, rng, 8);
      const Element y = testgen::random_element(g, rng, 8);
      const Element z = testgen::random_element(g, rng, 8);
      CHECK(g.multiply(g.multiply(x, y), z) == g.multiply(x, g.multiply(y, z)));
      CHECK(g.multiply(x, g.invert(x)).empty());
      CHECK(g.invert(g.invert(x)) == x);
      CHECK(g.word_length(g.multiply(x, y)) <= g.word_length(x) + g.word_length(y));
      CHECK(g.distance(g.multiply(z, x), g.multiply(z, y)) == g.distance(x, y));
    }
  }
}

TEST_CASE("torsion relations hold") {
  const auto g = GroupSpec::free_product(3, 5);
  CHECK(g.parse("s^3").empty());
  CHECK(g.parse("t^5").empty());
  CHECK(g.word_length(g.parse("t^3")) == 2);
  const auto h = GroupSpec::product_with_finite(2, 4);
  CHECK(h.multiply(h.parse("z"), h.parse("a")) == h.multiply(h.parse("a"), h.parse("z")));
  CHECK(h.word_length(h.parse("a z^2")) == 3);
  CHECK(h.word_length(h.parse("a z^3")) == 2);
}
