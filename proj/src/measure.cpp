#include "measure.hpp"

#include <cmath>

#include "errors.hpp"

namespace hyg {

double LambdaPower::value(double lambda) const { return std::pow(lambda, exponent); }

CylinderMeasure::CylinderMeasure(const GroupSpec& spec) : aut_(spec) {
  if (!spec.tree_like()) fail(ErrorKind::kCapability, "cylinder measures need a tree-like spec, got " + spec.describe());
}

double CylinderMeasure::vhat() const { return std::log(rho()); }

MarkovValue CylinderMeasure::symbolic(const Element& w) const {
  const int s = aut_.run(w);
  if (s < 0) fail(ErrorKind::kMalformedInput, "cylinder word is not a normal form");
  return MarkovValue{static_cast<int>(w.size()), s};
}

double CylinderMeasure::value(const Element& w) const {
  const MarkovValue v = symbolic(w);
  return std::pow(rho(), -v.rho_power) * aut_.perron_vector()[static_cast<std::size_t>(v.state)];
}

Rational CylinderMeasure::rational(const Element& w) const {
  if (!exact()) fail(ErrorKind::kCapability, "cylinder weights are irrational for " + spec().describe());
  symbolic(w);
  if (w.empty()) return Rational(1);
  // rho = 2k-1 and every non-start state carries weight (2k-1)/(2k)
  const int k2 = 2 * spec().rank();
  Count den = k2;
  for (std::size_t i = 1; i < w.size(); ++i) den *= (k2 - 1);
  return Rational(Count(1), den);
}

double CylinderMeasure::transition_probability(int state, Letter l) const {
  const int t = aut_.next(state, l);
  if (t < 0) return 0.0;
  const auto& v = aut_.perron_vector();
  return v[static_cast<std::size_t>(t)] / (rho() * v[static_cast<std::size_t>(state)]);
}

double ps_cylinder(const CylinderMeasure& m, const Element& w, double s, int radius) {
  if (!(s > m.vhat())) fail(ErrorKind::kDivergence, "Poincare series diverges for s <= vhat");
  const ConeAutomaton& aut = m.automaton();
  const int sw = aut.run(w);
  if (sw < 0) fail(ErrorKind::kMalformedInput, "cylinder word is not a normal form");
  const auto a = aut.count_matrix();
  const std::size_t n = a.size();
  const double decay = std::exp(-s);
  // u[i] = e^{-s m} * (#paths of length m from i)
  std::vector<double> u(n, 1.0), nu(n);
  double num = 0, den = 0;
  const int wl = static_cast<int>(w.size());
  for (int len = 0; len <= radius; ++len) {
    den += u[0];
    if (len <= radius - wl) num += u[static_cast<std::size_t>(sw)];
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0;
      for (std::size_t j = 0; j < n; ++j) acc += a[i][j] * u[j];
      nu[i] = decay * acc;
    }
    std::swap(u, nu);
  }
  return num * std::pow(decay, wl) / den;
}

int ps_radius_for_tail(const CylinderMeasure& m, double s, double tol) {
  if (!(s > m.vhat())) fail(ErrorKind::kDivergence, "Poincare series diverges for s <= vhat");
  const double q = std::exp(m.vhat() - s);
  return static_cast<int>(std::ceil(std::log(tol) / std::log(q))) + 8;
}

LambdaPower rn_derivative(const CylinderMeasure& m, const Element& g, const BoundaryRay& xi) {
  return LambdaPower{horofunction(m.spec(), xi, m.spec().invert(g))};
}

Rational rn_derivative_rational(const CylinderMeasure& m, const Element& g, const BoundaryRay& xi) {
  if (!m.exact()) fail(ErrorKind::kCapability, "lambda is irrational for " + m.spec().describe());
  const int h = rn_derivative(m, g, xi).exponent;
  Count p = 1;
  for (int i = 0; i < std::abs(h); ++i) p *= (2 * m.spec().rank() - 1);
  return h >= 0 ? Rational(Count(1), p) : Rational(p);
}

int r_lambda(const CylinderMeasure& m, const Element& g, const BoundaryRay& xi) {
  return -horofunction(m.spec(), xi, m.spec().invert(g));
}

std::vector<Letter> greedy_continuation(const ConeAutomaton& aut, int state, std::size_t len) {
  std::vector<Letter> out;
  for (std::size_t i = 0; i < len; ++i) {
    int l = 0;
    while (aut.next(state, static_cast<Letter>(l)) < 0) ++l;
    out.push_back(static_cast<Letter>(l));
    state = aut.next(state, static_cast<Letter>(l));
  }
  return out;
}

QuasiConformalReport verify_quasiconformal(const CylinderMeasure& m, int radius, int depth) {
  const GroupSpec& spec = m.spec();
  const ConeAutomaton& aut = m.automaton();
  if (depth <= radius + spec.max_syllable()) {
    fail(ErrorKind::kInsufficientDepth, "cylinder depth must exceed radius + syllable length");
  }
  QuasiConformalReport rep;
  std::vector<Element> ball;
  for (int n = 0; n <= radius; ++n) for_each_in_sphere(aut, n, [&](const Element& x) { ball.push_back(x); });
  const double logrho = std::log(m.rho());
  const auto& v = aut.perron_vector();
  for_each_in_sphere(aut, depth, [&](const Element& w) {
    const int sw = aut.run(w);
    std::vector<Letter> ray = w.letters;
    const auto tail = greedy_continuation(aut, sw, static_cast<std::size_t>(radius + spec.max_syllable() + 2));
    ray.insert(ray.end(), tail.begin(), tail.end());
    const BoundaryRay xi = BoundaryRay::sampled_trusted(ray, 0);
    const Rational nu_w = m.exact() ? m.rational(w) : Rational(0);
    for (const Element& g : ball) {
      const Element gw = spec.multiply(g, w);
      const int h = horofunction(spec, xi, spec.invert(g));
      double dev = 0;
      bool exact_ok = true;
      if (m.exact()) {
        const Rational ratio = m.rational(gw) / nu_w;
        const Rational target = rn_derivative_rational(m, g, xi);
        exact_ok = ratio == target;
        if (!exact_ok) dev = std::abs(std::log(ratio.convert_to<double>()) + m.vhat() * h);
      } else {
        const MarkovValue a = m.symbolic(gw), b = m.symbolic(w);
        const int power = a.rho_power - b.rho_power;
        exact_ok = power == h && (a.state == b.state || v[static_cast<std::size_t>(a.state)] == v[static_cast<std::size_t>(b.state)]);
        if (!exact_ok) {
          dev = std::abs((h - power) * logrho +
                         std::log(v[static_cast<std::size_t>(a.state)] / v[static_cast<std::size_t>(b.state)]));
        }
      }
      ++rep.checked;
      if (!exact_ok) rep.exact_zero = false;
      if (dev > rep.max_deviation || (!exact_ok && rep.witness_cylinder.empty())) {
        rep.max_deviation = std::max(rep.max_deviation, dev);
        rep.witness_g = g;
        rep.witness_cylinder = w;
      }
    }
  });
  return rep;
}

BoundaryRay sample_ray(const CylinderMeasure& m, std::size_t horizon, std::mt19937_64& rng, std::optional<Letter> first) {
  const ConeAutomaton& aut = m.automaton();
  const int alpha = m.spec().alphabet_size();
  std::vector<Letter> letters;
  letters.reserve(horizon);
  int state = aut.start();
  for (std::size_t i = 0; i < horizon; ++i) {
    int chosen = -1;
    if (i == 0 && first) {
      chosen = *first;
      if (aut.next(state, *first) < 0) fail(ErrorKind::kMalformedInput, "invalid first letter");
    } else {
      double u = unit_uniform(rng);
      for (int l = 0; l < alpha; ++l) {
        const double p = m.transition_probability(state, static_cast<Letter>(l));
        if (p <= 0) continue;
        chosen = l;
        if (u < p) break;
        u -= p;
      }
    }
    letters.push_back(static_cast<Letter>(chosen));
    state = aut.next(state, static_cast<Letter>(chosen));
  }
  return BoundaryRay::sampled_trusted(std::move(letters), 0);
}

BoundaryRay sample_ray(const CylinderMeasure& m, std::size_t horizon, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BoundaryRay r = sample_ray(m, horizon, rng);
  return BoundaryRay::sampled_trusted(r.prefix_letters(), seed);
}

namespace {

/// Cylinders partitioning the boundary by where rays leave g, with the
/// (constant) horofunction value at g on each.
template <class F>
void for_each_shadow_cylinder(const CylinderMeasure& m, const Element& g, F&& f) {
  const GroupSpec& spec = m.spec();
  const ConeAutomaton& aut = m.automaton();
  const std::size_t slack = g.size() + static_cast<std::size_t>(spec.max_syllable()) + 2;
  int state = aut.start();
  for (std::size_t p = 0; p < g.size(); ++p) {
    for (int x = 0; x < spec.alphabet_size(); ++x) {
      if (x == g.letters[p]) continue;
      const int t = aut.next(state, static_cast<Letter>(x));
      if (t < 0) continue;
      Element cyl{std::vector<Letter>(g.letters.begin(), g.letters.begin() + static_cast<long>(p))};
      cyl.letters.push_back(static_cast<Letter>(x));
      std::vector<Letter> ray = cyl.letters;
      const auto tail = greedy_continuation(aut, t, slack);
      ray.insert(ray.end(), tail.begin(), tail.end());
      f(cyl, horofunction(spec, BoundaryRay::sampled_trusted(ray, 0), g));
    }
    state = aut.next(state, g.letters[p]);
  }
  f(g, -static_cast<int>(g.size()));
}

}  // namespace

double shadow_decay(const CylinderMeasure& m, const Element& g, int T) {
  double total = 0;
  for_each_shadow_cylinder(m, g, [&](const Element& c, int h) {
    if (std::abs(h) <= T) total += m.value(c);
  });
  return total;
}

Rational shadow_decay_rational(const CylinderMeasure& m, const Element& g, int T) {
  Rational total = 0;
  for_each_shadow_cylinder(m, g, [&](const Element& c, int h) {
    if (std::abs(h) <= T) total += m.rational(c);
  });
  return total;
}

}  // namespace hyg
