#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <vector>

#include "group.hpp"

namespace hyg {

using Count = boost::multiprecision::cpp_int;

struct PerronResult {
  double rho = 0;
  std::vector<double> vector;  // right eigenvector, start entry 1
  int iterations = 0;
  double residual = 0;
};

/// Spectral radius and right Perron vector of a nonnegative count matrix.
PerronResult perron_iteration(const std::vector<std::vector<int>>& a, double tol, int cap);

struct StateInfo {
  int factor = -1;  // -1 for the start state
  int sign = 0;
  int count = 0;  // letters of the current syllable so far
  bool central = false;
};

/// Finite labelled graph whose paths from the start state are exactly the
/// geodesic normal forms, one path per group element.
class ConeAutomaton {
 public:
  explicit ConeAutomaton(const GroupSpec& spec);

  const GroupSpec& spec() const { return spec_; }
  int state_count() const { return static_cast<int>(states_.size()); }
  int start() const { return 0; }
  /// Next state, or -1 when the letter cannot follow.
  int next(int state, Letter l) const { return trans_[static_cast<std::size_t>(state)][l]; }
  const StateInfo& state_info(int s) const { return states_.at(static_cast<std::size_t>(s)); }
  /// State reached by reading a normal form; -1 if rejected.
  int run(const Element& x) const;
  int run_from(int state, std::span<const Letter> letters) const;

  /// A[i][j] = number of letters leading from i to j.
  std::vector<std::vector<int>> count_matrix() const;

  Count sphere_size(int n) const;
  Count ball_size(int r) const;
  std::vector<Count> sphere_sizes(int nmax) const;
  /// Same count through repeated squaring of the count matrix.
  Count sphere_size_by_matrix_power(int n) const;
  /// result[m] = number of length-m paths leaving `state`.
  std::vector<Count> continuation_counts(int state, int mmax) const;

  /// Perron data of the count matrix: spectral radius and right eigenvector
  /// normalised so that the start state has weight 1.
  double spectral_radius() const { return rho_; }
  const std::vector<double>& perron_vector() const { return perron_; }
  int power_iterations() const { return iterations_; }
  double power_residual() const { return residual_; }

 private:
  void add_state(const StateInfo& info);
  int find_state(const StateInfo& info) const;
  void compute_perron(double tol, int cap);

  GroupSpec spec_;
  std::vector<StateInfo> states_;
  std::vector<std::vector<int>> trans_;
  double rho_ = 0;
  std::vector<double> perron_;
  int iterations_ = 0;
  double residual_ = 0;
};

/// Streams the sphere of radius n without materialising it. Optionally
/// restricted to words starting with a given letter (for parallel splitting).
class SphereStream {
 public:
  SphereStream(const ConeAutomaton& aut, int n, std::optional<Letter> first = std::nullopt);
  bool next(Element& out);

 private:
  const ConeAutomaton& aut_;
  int n_;
  std::optional<Letter> first_;
  std::vector<Letter> word_;
  std::vector<int> states_;
  std::vector<int> cursor_;
  bool started_ = false;
  bool done_ = false;
};

template <class F>
void for_each_in_sphere(const ConeAutomaton& aut, int n, F&& f) {
  SphereStream s(aut, n);
  Element x;
  while (s.next(x)) {
    if constexpr (std::is_same_v<decltype(f(x)), bool>) {
      if (!f(x)) return;
    } else {
      f(x);
    }
  }
}

struct GrowthEstimate {
  double vhat = 0;
  double lower_const = 0;
  double upper_const = 0;
  int radius_min = 0;
  int radius_max = 0;
  int iterations = 0;
  double residual = 0;
};

GrowthEstimate growth_exponent(const ConeAutomaton& aut, int radius_max = 40, double tol = 1e-10,
                               int iteration_cap = 100000);

/// Breadth-first spheres in the Cayley graph, computed from group arithmetic
/// alone. Used as the reference the automaton is checked against.
std::vector<std::vector<Element>> bfs_spheres(const GroupSpec& spec, int nmax);

}  // namespace hyg
