#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "averages.hpp"
#include "geometry.hpp"
#include "measure.hpp"

namespace hyg {

/// A point (xi, t) of the discrete Maharam extension restricted to the
/// window boundary x [0, T).
struct MaharamPoint {
  BoundaryRay xi;
  int t = 0;
  int T = 4;
};

MaharamPoint make_base(BoundaryRay xi, int t, int T);
/// xi ~ nu with the given horizon, t uniform in [0, T).
MaharamPoint sample_base(const CylinderMeasure& m, int T, std::size_t horizon, std::uint64_t seed);
/// Ray depth that gamma_r and friends need at radius r (with slack for movers).
std::size_t required_horizon(const GroupSpec& spec, int r, int T, int extra = 0);

/// Landing point of g: g^-1 (xi, t) = (g^-1 xi, t + h_xi(g)).
struct ShellEntry {
  Element g;
  int length = 0;
  int h = 0;
  int landing_t = 0;
};

enum class SubsetKind { kGamma, kB, kS };

struct SubsetSample {
  MaharamPoint base;
  int r = 0;
  int a = 0;
  SubsetKind kind = SubsetKind::kGamma;
  std::vector<ShellEntry> entries;
  std::size_t merged = 0;  // landing points merged as duplicates (b_r, s_ra)
};

/// d(e,g) - h_xi(g) - t <= r and t + h_xi(g) in [0, T).
bool in_gamma(const GroupSpec& spec, const MaharamPoint& base, int r, const Element& g);

SubsetSample gamma_r(const GroupSpec& spec, const MaharamPoint& base, int r);
SubsetSample b_r(const GroupSpec& spec, const MaharamPoint& base, int r);
/// B_r \ B_{r-a} as landing points.
SubsetSample s_ra(const GroupSpec& spec, const MaharamPoint& base, int r, int a);

/// Landing point identity used for merging: translated ray and new t.
std::string landing_key(const GroupSpec& spec, const MaharamPoint& base, const Element& g, std::size_t compare_len);

/// Exact cardinalities without listing. On tree-like specs the landing map
/// is injective, so |B_r| = |Gamma_r| and |S_{r,a}| = |Gamma_{r,a}|.
Count gamma_count(const GroupSpec& spec, const MaharamPoint& base, int r);
Count shell_count(const GroupSpec& spec, const MaharamPoint& base, int r, int a);
/// Number of g in Gamma_{r,a}(xi,t) of each word length.
std::vector<double> shell_length_profile(const GroupSpec& spec, const ConeAutomaton& aut, const MaharamPoint& base,
                                         int r, int a);

struct VolumeRow {
  std::size_t base = 0;
  int r = 0;
  bool in_range = false;  // r >= 2T + 2a
  Count gamma, b, s;
  double gamma_norm = 0, b_norm = 0, s_norm = 0;  // divided by exp(vhat r / 2)
};

struct VolumeProfile {
  std::vector<VolumeRow> rows;
  double min_norm = 0, max_norm = 0;  // of gamma_norm over all rows
};

VolumeProfile volume_profile(const GroupSpec& spec, const std::vector<MaharamPoint>& bases, int r_min, int r_max,
                             int a);

struct RegularityResult {
  Count union_size;
  Count b_size;
  double ratio = 0;
  /// Smallest C0 with the union inside B_{r+C0}.
  int needed_c0 = 0;
};

/// |U_{s<=r} B_s^-1 B_r(base)| / |B_r(base)| by scanning, for every landing
/// point, the bounded set of moves that can bring it back.
RegularityResult regularity_scan(const GroupSpec& spec, const MaharamPoint& base, int r);
/// Same quantity on free groups from the closed description of the union
/// (counted without listing).
RegularityResult regularity_count(const GroupSpec& spec, const MaharamPoint& base, int r);
/// Dispatches to the counting form on free groups.
RegularityResult regularity_ratio(const GroupSpec& spec, const MaharamPoint& base, int r);

enum class MoverMode {
  /// Points whose image leaves the window count in the symmetric difference.
  kCemetery,
  /// Partial transformation: |phi(S n dom) sym.diff. (S n ran)| over |S|.
  kPartial,
};

struct InvarianceResult {
  Count size;      // |S_{r,a}|
  Count kept;      // g in S with g.mover^-1 in S
  Count leaving;   // image outside the window
  Count entering;  // g in S whose preimage under the mover is outside the window
  double cemetery = 0;
  double partial = 0;
};

InvarianceResult asymptotic_invariance(const GroupSpec& spec, const MaharamPoint& base, int r, int a,
                                       const Element& mover);
double asymptotic_invariance_ratio(const GroupSpec& spec, const MaharamPoint& base, int r, int a,
                                   const Element& mover, MoverMode mode);

/// Smallest beta with N_n(B_r) inside B_{r+beta}: images of B_r under all
/// g in B(e,n) that stay in the window.
int neighborhood_beta(const GroupSpec& spec, const MaharamPoint& base, int r, int n);

struct KappaOptions {
  int r = 10;
  int a = 4;
  int T = 4;
  long samples = 100000;
  std::uint64_t seed = 1;
  int workers = 1;
  /// psi = nu(C_w)^-1 1_{C_w}; unset means psi = 1.
  std::optional<Element> psi_cylinder;
};

struct KappaMeasure {
  KappaOptions options;
  GroupMeasure measure;
  /// Shell half-width: support lies in r - rho < |g| <= r + rho.
  int rho = 0;
  /// Sampled contributions were aggregated by word length (free groups with psi = 1).
  bool radial = false;
  long samples_used = 0;
  /// Sample standard deviation of each sphere mass (radial mode).
  std::vector<double> mass_stddev;
};

KappaMeasure kappa(const GroupSpec& spec, const KappaOptions& opts);
int kappa_shell_rho(int a, int T);

/// kappa^1_{r,a}(g) for each listed g by summing over all cylinders of the
/// given depth (membership is constant on each once depth >= r + T + max syllable).
std::vector<double> kappa_exact(const GroupSpec& spec, int r, int a, int T, const std::vector<Element>& gs,
                                int depth);

struct DominationReport {
  int r = 0, a = 0, b = 0, T = 0;
  long samples = 0;
  double max_ratio = 0;
  Element argmax;
  /// max ratio with kappa-hat moved by +-2 standard errors
  double ratio_low = 0, ratio_high = 0;
  bool under_sampled = false;
  std::size_t uncovered = 0;  // zeta-support elements with kappa-hat = 0
};

/// zeta_{r,b}: uniform on r - a/2 - b/2 < |g| <= r - a/2 + b/2.
GroupMeasure zeta_shell(const GroupSpec& spec, int r, int a, int b);
DominationReport domination_check(const GroupSpec& spec, int r, int a, int b, int T, long samples,
                                  std::uint64_t seed, int workers = 1);
/// Same maximum against the exact cylinder sum.
double domination_exact(const GroupSpec& spec, int r, int a, int b, int T);

}  // namespace hyg
