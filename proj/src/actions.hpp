#pragma once

#include <string>
#include <variant>
#include <vector>

#include "group.hpp"

namespace hyg {

/// A point of a finite space (index) or of the circle [0,1).
using Point = std::variant<std::size_t, double>;

/// G acting on a finite set {0..m-1} by permutations, uniform measure.
/// Covers finite quotients (G acting on itself) and the parity action.
class FiniteAction {
 public:
  /// perms[f] = permutation of the +1 generator of factor f.
  FiniteAction(const GroupSpec& spec, std::vector<std::vector<std::size_t>> perms, std::string name);
  /// Quotient onto Z/n: factor f acts by x -> x + images[f].
  static FiniteAction cyclic(const GroupSpec& spec, int n, const std::vector<int>& images);
  /// All generators map to 1 in Z/2.
  static FiniteAction parity(const GroupSpec& spec);

  const GroupSpec& spec() const { return spec_; }
  const std::string& name() const { return name_; }
  std::size_t size() const { return size_; }
  const std::vector<std::size_t>& letter_perm(Letter l) const { return letter_perms_.at(l); }

  std::size_t act(const Element& g, std::size_t x) const;
  /// Permutation induced by g (x -> g.x).
  std::vector<std::size_t> perm_of(const Element& g) const;
  /// Orbit component index for every point.
  std::vector<std::size_t> orbit_labels() const;

 private:
  GroupSpec spec_;
  std::string name_;
  std::size_t size_ = 0;
  std::vector<std::vector<std::size_t>> letter_perms_;
};

/// Free group acting on the circle by rotations; x -> x + sum_i e_i * angle_i.
class CircleAction {
 public:
  CircleAction(const GroupSpec& spec, std::vector<double> angles, bool ergodic);
  static CircleAction circle_pair(const GroupSpec& spec, bool ergodic);

  const GroupSpec& spec() const { return spec_; }
  const std::vector<double>& angles() const { return angles_; }
  bool declared_ergodic() const { return ergodic_; }
  /// Total rotation of g (not reduced mod 1).
  double rotation(const Element& g) const;
  double letter_rotation(Letter l) const;
  double act(const Element& g, double x) const;

 private:
  GroupSpec spec_;
  std::vector<double> angles_;
  bool ergodic_ = false;
};

class PmpAction {
 public:
  PmpAction(FiniteAction a) : impl_(std::move(a)) {}  // NOLINT
  PmpAction(CircleAction a) : impl_(std::move(a)) {}  // NOLINT

  bool is_finite() const { return std::holds_alternative<FiniteAction>(impl_); }
  const FiniteAction& finite() const { return std::get<FiniteAction>(impl_); }
  const CircleAction& circle() const { return std::get<CircleAction>(impl_); }
  const GroupSpec& spec() const;
  Point act(const Element& g, const Point& x) const;

 private:
  std::variant<FiniteAction, CircleAction> impl_;
};

struct TrigTerm {
  int k = 1;
  double amplitude = 1;
  double phase = 0;
};

/// Real observable. Finite-space observables are value tables; circle
/// observables are trigonometric polynomials or interval indicators.
class Observable {
 public:
  enum class Kind { kTable, kTrig, kInterval };

  static Observable table(std::vector<double> values, std::string name = "table");
  static Observable trig(double constant, std::vector<TrigTerm> terms, std::string name = "trig");
  static Observable interval(double lo, double hi, std::string name = "interval");

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::string& norm_class() const { return norm_class_; }
  const std::vector<double>& values() const { return values_; }
  double constant() const { return constant_; }
  const std::vector<TrigTerm>& terms() const { return terms_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool is_absolute() const { return absolute_; }
  double sup_bound() const;
  /// Lebesgue integral (circle observables).
  double integral() const;

  double eval(const Point& x) const;
  Observable abs() const;
  Observable minus_constant(double c) const;

 private:
  Kind kind_ = Kind::kTable;
  std::string name_;
  std::string norm_class_ = "Linf";
  std::vector<double> values_;
  double constant_ = 0;
  std::vector<TrigTerm> terms_;
  double lo_ = 0, hi_ = 0;
  bool absolute_ = false;
};

/// E[f | invariant sets]: orbit averages on finite spaces, the integral on
/// circle actions declared ergodic.
Observable conditional_expectation(const PmpAction& action, const Observable& f);

}  // namespace hyg
