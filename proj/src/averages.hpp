#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "actions.hpp"
#include "automaton.hpp"
#include "measure.hpp"

namespace hyg {

/// Finitely supported probability measure on the group. Radial measures are
/// stored as exact sphere masses (uniform inside each sphere); all others as
/// explicit weighted elements.
class GroupMeasure {
 public:
  /// mass[n] is the total mass on the sphere of radius n.
  static GroupMeasure radial(const GroupSpec& spec, std::vector<Rational> mass, std::string descriptor);
  static GroupMeasure sparse(const GroupSpec& spec, std::vector<std::pair<Element, double>> atoms,
                             std::string descriptor);

  const GroupSpec& spec() const { return spec_; }
  bool is_radial() const { return radial_; }
  const std::string& descriptor() const { return descriptor_; }
  const std::vector<Rational>& sphere_mass() const { return mass_; }
  const std::vector<std::pair<Element, double>>& atoms() const { return atoms_; }
  int min_length() const { return min_len_; }
  int max_length() const { return max_len_; }
  /// Number of elements with positive weight.
  Count support_size() const;

  double weight(const Element& g) const;
  /// Exact weight (radial measures only).
  Rational exact_weight(const Element& g) const;
  /// Calls f(element, weight) for every support element.
  template <class F>
  void for_each(F&& f) const;

 private:
  explicit GroupMeasure(const GroupSpec& spec) : spec_(spec) {}

  GroupSpec spec_;
  bool radial_ = true;
  std::string descriptor_;
  std::vector<Rational> mass_;
  std::vector<Count> sphere_sizes_;
  std::vector<std::pair<Element, double>> atoms_;
  std::unordered_map<Element, double, ElementHash> index_;
  int min_len_ = 0, max_len_ = 0;
};

GroupMeasure beta(const GroupSpec& spec, int r);
GroupMeasure sigma(const GroupSpec& spec, int n);
/// (n+1)^-1 (sigma_0 + ... + sigma_n)
GroupMeasure mu(const GroupSpec& spec, int n);
/// Uniform on {g : lo < |g| <= hi}.
GroupMeasure uniform_lengths(const GroupSpec& spec, double lo, double hi, std::string descriptor);
/// Uniform on the shell r - a < |g| <= r + a.
GroupMeasure sigma_shell(const GroupSpec& spec, double r, double a);
/// r^-1 (sigma_{1,a} + ... + sigma_{r,a}).
GroupMeasure mu_shell(const GroupSpec& spec, int r, double a);
/// (sigma_n + sigma_{n+1}) / 2
GroupMeasure sigma_prime(const GroupSpec& spec, int n);

/// Largest support that apply() is willing to enumerate element by element.
inline constexpr double kEnumerationCap = 6e7;

/// pi(zeta) f at every point of a finite space.
std::vector<double> apply_finite(const GroupMeasure& zeta, const FiniteAction& action, const Observable& f);
/// Same in exact arithmetic; f given as rationals.
std::vector<Rational> apply_finite_exact(const GroupMeasure& zeta, const FiniteAction& action,
                                         const std::vector<Rational>& f);
/// pi(zeta) f (x) = sum_g zeta(g) f(g^-1 x)
double apply(const GroupMeasure& zeta, const PmpAction& action, const Observable& f, const Point& x);

double maximal_function(const std::vector<GroupMeasure>& family, const PmpAction& action, const Observable& f,
                        const Point& x);
/// Maximal function at every point of a finite space.
std::vector<double> maximal_function_finite(const std::vector<GroupMeasure>& family, const FiniteAction& action,
                                            const Observable& f);
/// ||M f||_2 / ||f||_2 on a finite space with uniform measure.
double maximal_norm_ratio(const std::vector<GroupMeasure>& family, const FiniteAction& action, const Observable& f);

struct PointSeries {
  Point x;
  std::vector<double> value;
  std::vector<double> deviation;
  double first_third_max = 0;
  double last_third_max = 0;
  bool pass = false;
};

struct ConvergenceReport {
  double theta = 0.5;
  std::vector<PointSeries> points;
  bool pass() const;
};

/// Deviations |pi(zeta_i) f (x) - target(x)| along the family, with the
/// last-third vs first-third trend test.
ConvergenceReport convergence_report(const std::vector<GroupMeasure>& family, const PmpAction& action,
                                     const Observable& f, const std::vector<Point>& points, const Observable& target,
                                     double theta);

template <class F>
void GroupMeasure::for_each(F&& f) const {
  if (!radial_) {
    for (const auto& [g, w] : atoms_) f(g, w);
    return;
  }
  const ConeAutomaton aut(spec_);
  for (std::size_t n = 0; n < mass_.size(); ++n) {
    if (mass_[n] == 0) continue;
    const double w = static_cast<double>(Rational(mass_[n] / sphere_sizes_[n]));
    for_each_in_sphere(aut, static_cast<int>(n), [&](const Element& g) { f(g, w); });
  }
}

}  // namespace hyg
