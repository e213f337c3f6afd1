#pragma once
// Hand-rolled generators for property tests.

#include <random>

#include "group.hpp"

namespace testgen {

/// Uniform-ish random normal form of length <= maxlen built letter by letter.
inline hyg::Element random_element(const hyg::GroupSpec& g, std::mt19937_64& rng, int maxlen) {
  std::uniform_int_distribution<int> len(0, maxlen);
  std::uniform_int_distribution<int> let(0, g.alphabet_size() - 1);
  std::vector<hyg::Letter> raw;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) raw.push_back(static_cast<hyg::Letter>(let(rng)));
  hyg::Element x = g.reduce(raw);
  while (static_cast<int>(x.size()) > maxlen) x.letters.pop_back();
  return g.reduce(x.letters);
}

/// Random raw word (not reduced).
inline std::vector<hyg::Letter> random_raw(const hyg::GroupSpec& g, std::mt19937_64& rng, int len) {
  std::uniform_int_distribution<int> let(0, g.alphabet_size() - 1);
  std::vector<hyg::Letter> raw;
  for (int i = 0; i < len; ++i) raw.push_back(static_cast<hyg::Letter>(let(rng)));
  return raw;
}

inline std::vector<hyg::GroupSpec> all_specs() {
  return {hyg::GroupSpec::free_group(2), hyg::GroupSpec::free_group(3), hyg::GroupSpec::free_product(2, 3),
          hyg::GroupSpec::free_product(3, 5), hyg::GroupSpec::free_product(4, 6),
          hyg::GroupSpec::product_with_finite(2, 2), hyg::GroupSpec::product_with_finite(2, 5)};
}

}  // namespace testgen
