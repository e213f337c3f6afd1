#include <random>
#include <string>

#include "config.hpp"
#include "doctest.h"
#include "errors.hpp"

using namespace hyg;

namespace {

std::string config_error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kConfig);
    return e.what();
  }
  return "";
}

// Random but valid configurations for the round-trip property.
ExperimentConfig random_config(std::mt19937_64& rng) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  auto real = [&] { return static_cast<double>(static_cast<std::int64_t>(rng() % 2000001) - 1000000) / 977.0; };
  ExperimentConfig c;
  if (pick(2)) c.seed = rng();
  else c.seed = std::nullopt;
  c.workers = 1 + pick(8);
  c.out = "dir" + std::to_string(pick(100)) + (pick(2) ? "/sub dir" : "");
  c.cap = 20 + pick(30);
  const int n = pick(5);
  const std::vector<std::string> groups{"F_2", "F_3", "Z_2*Z_3", "F_2xZ_3"};
  const std::vector<std::string> fams{"sigma", "sigma_prime", "mu", "beta"};
  for (int i = 0; i < n; ++i) {
    ExperimentSpec e;
    e.kind = experiment_kinds()[static_cast<std::size_t>(pick(8))];
    e.name = e.kind + "-" + std::to_string(i);
    e.group = groups[static_cast<std::size_t>(pick(4))];
    e.action = pick(2) ? "parity" : "cyclic:5:1,2";
    e.family = fams[static_cast<std::size_t>(pick(4))];
    e.r_min = pick(5);
    e.r_max = e.r_min + pick(15);
    e.T = 1 + pick(6);
    e.a = 1 + pick(6);
    e.b = 1 + pick(3);
    e.depth = pick(9);
    e.bases = 1 + pick(20);
    e.samples = 1 + static_cast<long>(rng() % 1000000);
    if (is_monte_carlo(e.kind) || pick(2)) e.seed = rng();
    if (pick(2)) e.theta = real();
    if (pick(2)) e.bound = real();
    const int nobs = pick(3);
    for (int k = 0; k < nobs; ++k) {
      ObservableSpec o;
      if (pick(2)) {
        for (int j = 0; j < 1 + pick(5); ++j) o.table.push_back(real());
      } else {
        o.trig = true;
        o.constant = real();
        for (int j = 0; j < pick(4); ++j) o.terms.push_back(TrigTerm{1 + pick(5), real(), real()});
      }
      e.observables.push_back(o);
    }
    c.experiments.push_back(e);
  }
  return c;
}

}  // namespace

TEST_CASE("config round trip on the shipped example") {
  const auto c = load_config(std::string(HYG_SOURCE_DIR) + "/configs/example.yaml");
  CHECK(c.experiments.size() == 11);
  CHECK(c.seed == 20240601u);
  const std::string s1 = serialize_config(c);
  const auto c2 = parse_config(s1);
  CHECK(c2 == c);
  CHECK(serialize_config(c2) == s1);
}

TEST_CASE("config round trip property") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 300; ++i) {
    const ExperimentConfig c = random_config(rng);
    validate_config(c);
    const std::string s = serialize_config(c);
    const ExperimentConfig back = parse_config(s);
    CHECK(back == c);
    CHECK(serialize_config(back) == s);
  }
}

TEST_CASE("empty and minimal configs") {
  CHECK(parse_config("").experiments.empty());
  CHECK(parse_config("experiments: []").experiments.empty());
  const auto c = parse_config("experiments:\n  - kind: spheres\n");
  REQUIRE(c.experiments.size() == 1);
  CHECK(c.experiments[0].name == "spheres");
  CHECK(c.experiments[0].group == "F_2");
}

TEST_CASE("config errors name the field path") {
  CHECK(config_error_of("cap: 10\nexperiments:\n  - kind: spheres\n    r_max: 12\n").find("experiments[0].r_max") !=
        std::string::npos);
  CHECK(config_error_of("experiments:\n  - kind: spheres\n    colour: red\n").find("experiments[0].colour") !=
        std::string::npos);
  CHECK(config_error_of("experiments:\n  - kind: fourier\n").find("experiments[0].kind") != std::string::npos);
  CHECK(config_error_of("experiments:\n  - kind: spheres\n  - kind: kappa-ergodic\n    name: k\n")
            .find("experiments[1].seed") != std::string::npos);
  CHECK(config_error_of("experiments:\n  - kind: spheres\n    r_max: ten\n").find("experiments[0].r_max") !=
        std::string::npos);
  CHECK(config_error_of("experiments:\n  - kind: spheres\n    group: SL2Z\n").find("experiments[0].group") !=
        std::string::npos);
  CHECK(config_error_of("workers: 0\n").find("workers") != std::string::npos);
  CHECK(config_error_of("experiments:\n  - kind: spheres\n  - kind: spheres\n").find("duplicate") !=
        std::string::npos);
  CHECK(config_error_of("experiments:\n  - kind: average\n    observables:\n      - {constant: 1, terms: [[1, 2]]}\n")
            .find("experiments[0].observables[0].terms[0]") != std::string::npos);
  CHECK(config_error_of("experiments: [").find("syntax") != std::string::npos);
  CHECK(config_error_of("bogus: 1\n").find("bogus") != std::string::npos);
}

TEST_CASE("seed at either level satisfies Monte Carlo experiments") {
  CHECK_NOTHROW(parse_config("seed: 3\nexperiments:\n  - kind: domination\n"));
  CHECK_NOTHROW(parse_config("experiments:\n  - kind: domination\n    seed: 3\n"));
}

TEST_CASE("action strings") {
  const auto g = GroupSpec::free_group(2);
  CHECK(make_action(g, "parity").finite().size() == 2);
  CHECK(make_action(g, "cyclic:5:1,2").finite().size() == 5);
  CHECK_FALSE(make_action(g, "circle").is_finite());
  CHECK_THROWS_AS(make_action(g, "cyclic:5"), Error);
  CHECK_THROWS_AS(make_action(g, "torus"), Error);
  CHECK_THROWS_AS(make_action(g, "cyclic:x:1,2"), Error);
}

TEST_CASE("group names") {
  CHECK(GroupSpec::from_string("F2") == GroupSpec::free_group(2));
  CHECK(GroupSpec::from_string("F_3") == GroupSpec::free_group(3));
  CHECK(GroupSpec::from_string("Z_2*Z_3") == GroupSpec::free_product(2, 3));
  CHECK(GroupSpec::from_string("F_2xZ_5") == GroupSpec::product_with_finite(2, 5));
  for (const auto& s : {GroupSpec::free_group(2), GroupSpec::free_product(3, 5), GroupSpec::product_with_finite(2, 2)})
    CHECK(GroupSpec::from_string(s.describe()) == s);
  CHECK_THROWS_AS(GroupSpec::from_string("Q8"), Error);
}
