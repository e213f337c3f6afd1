#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "automaton.hpp"
#include "group.hpp"

namespace hyg {

/// Half-integers stored doubled so that Gromov products stay exact.
struct HalfInt {
  long long twice = 0;
  double value() const { return static_cast<double>(twice) / 2.0; }
  bool operator==(const HalfInt&) const = default;
  auto operator<=>(const HalfInt&) const = default;
};

/// A point of the Gromov boundary given by an infinite normal form.
/// Periodic rays are prefix.period^inf; sampled rays only know `horizon` letters.
class BoundaryRay {
 public:
  static BoundaryRay periodic(const GroupSpec& spec, std::vector<Letter> prefix, std::vector<Letter> period);
  static BoundaryRay sampled(const GroupSpec& spec, std::vector<Letter> prefix, std::uint64_t seed);
  /// Skips validation; for letters produced by an automaton walk.
  static BoundaryRay sampled_trusted(std::vector<Letter> prefix, std::uint64_t seed);

  bool is_periodic() const { return periodic_; }
  /// Number of known letters; effectively unbounded for periodic rays.
  std::size_t horizon() const { return periodic_ ? std::numeric_limits<std::size_t>::max() : prefix_.size(); }
  std::uint64_t seed() const { return seed_; }
  const std::vector<Letter>& prefix_letters() const { return prefix_; }
  const std::vector<Letter>& period_letters() const { return period_; }

  Letter at(std::size_t i) const;
  /// First n letters as an element (prefixes of normal forms are normal forms).
  Element head(std::size_t n) const;
  /// The ray g.xi. Central letters act trivially on the boundary.
  BoundaryRay translate(const GroupSpec& spec, const Element& g) const;

  std::string format(const GroupSpec& spec) const;
  bool operator==(const BoundaryRay& o) const {
    return periodic_ == o.periodic_ && prefix_ == o.prefix_ && period_ == o.period_;
  }

 private:
  BoundaryRay() = default;
  void canonicalize();

  bool periodic_ = true;
  std::vector<Letter> prefix_;
  std::vector<Letter> period_;
  std::uint64_t seed_ = 0;
};

/// Parses "a^inf", "ab(ba)^inf" or "(ab)^inf" style periodic rays.
BoundaryRay parse_ray(const GroupSpec& spec, const std::string& text);

HalfInt gromov_product(const GroupSpec& spec, const Element& x, const Element& y, const Element& w);

struct DeltaCertificate {
  double delta_hat = 0;
  int radius = 0;
  std::uint64_t count = 0;
  bool exhaustive = false;
  std::vector<Element> witness;  // x, y, z, w attaining delta_hat
};

/// Four-point check over B(e, radius). Exhaustive when |B|^4 <= budget,
/// otherwise `budget` random quadruples drawn with `seed`.
DeltaCertificate estimate_delta(const GroupSpec& spec, int radius, std::uint64_t budget = 4'000'000'000ULL,
                                std::uint64_t seed = 1, int workers = 1);

/// Depth at which horofunction values along a ray are exact.
std::size_t horofunction_depth(const GroupSpec& spec, const Element& g);

/// h_xi(g) on tree-like specs.
int horofunction(const GroupSpec& spec, const BoundaryRay& xi, const Element& g);
/// (xi|g)_e on tree-like specs.
HalfInt ray_gromov_product(const GroupSpec& spec, const BoundaryRay& xi, const Element& g);

struct ApproxValue {
  double value = 0;
  double uncertainty = 0;
};

/// d(x,g) - d(x,e) at the deepest element of a sequence converging to a
/// boundary point; the uncertainty is 4*delta_hat.
ApproxValue horofunction_approx(const GroupSpec& spec, const std::vector<Element>& seq, const Element& g,
                                double delta_hat);

/// A periodic ray whose horofunction is small at g (|h| <= 1).
BoundaryRay small_horofunction_direction(const GroupSpec& spec, const Element& g);

}  // namespace hyg
