#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "actions.hpp"

namespace hyg {

/// One observable: either a table over a finite space or a trigonometric
/// polynomial on the circle.
struct ObservableSpec {
  std::vector<double> table;
  bool trig = false;
  double constant = 0;
  std::vector<TrigTerm> terms;

  bool operator==(const ObservableSpec& o) const;
};

/// Experiment kinds accepted by run().
inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> k{"spheres",   "geometry",  "measure",       "average",
                                          "maximal",   "horoshell", "kappa-ergodic", "domination"};
  return k;
}

struct ExperimentSpec {
  std::string name;
  std::string kind;
  std::string group = "F_2";
  /// "parity", "cyclic:N:i1,i2,..." or "circle".
  std::string action = "parity";
  std::vector<ObservableSpec> observables;
  /// sigma, sigma_prime, mu, beta
  std::string family = "mu";
  int r_min = 0;
  int r_max = 8;
  int T = 4;
  int a = 4;
  int b = 2;
  int depth = 6;
  int bases = 10;
  long samples = 100000;
  std::optional<std::uint64_t> seed;
  std::optional<double> theta;  // declared convergence threshold
  std::optional<double> bound;  // declared maximal-function bound

  bool operator==(const ExperimentSpec&) const = default;
};

struct ExperimentConfig {
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::string out = "out";
  int cap = 40;
  std::vector<ExperimentSpec> experiments;

  bool operator==(const ExperimentConfig&) const = default;
};

bool is_monte_carlo(const std::string& kind);

/// Parses and validates; errors are config errors naming the field path.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);
/// Range, cap and seed checks (also run by parse_config).
void validate_config(const ExperimentConfig& cfg);

PmpAction make_action(const GroupSpec& spec, const std::string& text);
Observable make_observable(const ObservableSpec& o, const std::string& name);

}  // namespace hyg
