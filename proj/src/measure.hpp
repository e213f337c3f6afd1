#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <random>

#include "automaton.hpp"
#include "geometry.hpp"

namespace hyg {

using Rational = boost::multiprecision::cpp_rational;

/// rho^(-rho_power) * v[state] / v[start]: the exact shape of a Markov
/// cylinder weight. Ratios of these are compared symbolically.
struct MarkovValue {
  int rho_power = 0;
  int state = 0;
};

/// lambda^exponent with lambda = 1/rho.
struct LambdaPower {
  int exponent = 0;
  double value(double lambda) const;
};

/// Patterson-Sullivan (Markov) measure on the boundary of a tree-like spec.
class CylinderMeasure {
 public:
  explicit CylinderMeasure(const GroupSpec& spec);

  const GroupSpec& spec() const { return aut_.spec(); }
  const ConeAutomaton& automaton() const { return aut_; }
  double rho() const { return aut_.spectral_radius(); }
  double lambda() const { return 1.0 / rho(); }
  double vhat() const;
  /// True when all cylinder weights are rational (free groups).
  bool exact() const { return spec().kind() == GroupKind::kFree; }

  MarkovValue symbolic(const Element& w) const;
  double value(const Element& w) const;
  Rational rational(const Element& w) const;
  /// Probability of the next letter given the automaton state.
  double transition_probability(int state, Letter l) const;

 private:
  ConeAutomaton aut_;
};

/// Z(s)^-1 * sum over |g| <= R starting with w of exp(-s|g|).
double ps_cylinder(const CylinderMeasure& m, const Element& w, double s, int radius);
/// Smallest R whose relative tail at exponent s is below tol.
int ps_radius_for_tail(const CylinderMeasure& m, double s, double tol);

LambdaPower rn_derivative(const CylinderMeasure& m, const Element& g, const BoundaryRay& xi);
Rational rn_derivative_rational(const CylinderMeasure& m, const Element& g, const BoundaryRay& xi);
int r_lambda(const CylinderMeasure& m, const Element& g, const BoundaryRay& xi);

struct QuasiConformalReport {
  double max_deviation = 0;
  bool exact_zero = true;
  std::uint64_t checked = 0;
  Element witness_g;
  Element witness_cylinder;
};

/// Compares nu(gC_w)/nu(C_w) against lambda^{h_xi(g^-1)} for all g in
/// B(e, radius) and all cylinders of the given depth.
QuasiConformalReport verify_quasiconformal(const CylinderMeasure& m, int radius, int depth);

/// First letter drawn with probability nu(C_x), then the Markov chain of the
/// measure. `first` pins the first letter (stratified sampling).
BoundaryRay sample_ray(const CylinderMeasure& m, std::size_t horizon, std::mt19937_64& rng,
                       std::optional<Letter> first = std::nullopt);
BoundaryRay sample_ray(const CylinderMeasure& m, std::size_t horizon, std::uint64_t seed);

/// nu{xi : |h_xi(g)| <= T}.
double shadow_decay(const CylinderMeasure& m, const Element& g, int T);
Rational shadow_decay_rational(const CylinderMeasure& m, const Element& g, int T);

/// Uniform double in [0,1) from 53 random bits; portable across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Letters continuing a path from `state`, always taking the first allowed letter.
std::vector<Letter> greedy_continuation(const ConeAutomaton& aut, int state, std::size_t len);

}  // namespace hyg
