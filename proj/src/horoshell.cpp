#include "horoshell.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>
#include <unordered_set>

#include "errors.hpp"

namespace hyg {

namespace {

void require_tree(const GroupSpec& spec) {
  if (!spec.tree_like()) fail(ErrorKind::kCapability, "horoshells need a tree-like spec, got " + spec.describe());
}

// Walks the elements g ordered by the tree structure relative to xi. Nodes on
// the ray and nodes inside the block where g leaves the ray are visited one
// by one; every other node is reported once as a "block": all its automaton
// continuations of length j have h = h0 + j and the same Gromov product.
// Gromov products never decrease along a normal form, so everything with
// 2(xi|g) > twice_p_max is pruned.
template <class F>
void cycle_node(const GroupSpec& spec, const ConeAutomaton& aut, const BoundaryRay& xi, Element& x, int state,
                int twice_p_max, F& emit) {
  const int h = horofunction(spec, xi, x);
  const int tp = static_cast<int>(x.size()) - h;
  if (tp > twice_p_max) return;
  const int f = spec.info(x.letters.back()).factor;
  if (spec.factor_order(f) == 0) {
    emit(x, state, h, tp, true);
    return;
  }
  emit(x, state, h, tp, false);
  for (int l = 0; l < spec.alphabet_size(); ++l) {
    const int s = aut.next(state, static_cast<Letter>(l));
    if (s < 0) continue;
    x.letters.push_back(static_cast<Letter>(l));
    if (spec.info(static_cast<Letter>(l)).factor == f) {
      cycle_node(spec, aut, xi, x, s, twice_p_max, emit);
    } else {
      emit(x, s, h + 1, tp, true);
    }
    x.letters.pop_back();
  }
}

template <class F>
void horo_walk(const GroupSpec& spec, const ConeAutomaton& aut, const BoundaryRay& xi, int twice_p_max, F&& emit) {
  require_tree(spec);
  Element v;
  int state = aut.start();
  for (int q = 0; 2 * q <= twice_p_max; ++q) {
    emit(v, state, -q, 2 * q, false);
    const Letter next = xi.at(static_cast<std::size_t>(q));
    Element c = v;
    for (int l = 0; l < spec.alphabet_size(); ++l) {
      if (l == next) continue;
      const int s = aut.next(state, static_cast<Letter>(l));
      if (s < 0) continue;
      c.letters.push_back(static_cast<Letter>(l));
      cycle_node(spec, aut, xi, c, s, twice_p_max, emit);
      c.letters.pop_back();
    }
    v.letters.push_back(next);
    state = aut.next(state, next);
    if (state < 0) fail(ErrorKind::kMalformedInput, "ray is not a normal form");
  }
}

// table[s][j] = number of automaton paths of length j from state s
template <class C>
std::vector<std::vector<C>> continuation_table(const ConeAutomaton& aut, int jmax) {
  const auto n = static_cast<std::size_t>(aut.state_count());
  std::vector<std::vector<C>> t(n, std::vector<C>(static_cast<std::size_t>(jmax) + 1, C(0)));
  for (auto& row : t) row[0] = C(1);
  for (int j = 1; j <= jmax; ++j)
    for (std::size_t s = 0; s < n; ++s) {
      C c(0);
      for (int l = 0; l < aut.spec().alphabet_size(); ++l) {
        const int u = aut.next(static_cast<int>(s), static_cast<Letter>(l));
        if (u >= 0) c += t[static_cast<std::size_t>(u)][static_cast<std::size_t>(j - 1)];
      }
      t[s][static_cast<std::size_t>(j)] = c;
    }
  return t;
}

int table_depth(const GroupSpec& spec, int twice_p_max, int T) { return twice_p_max + T + 2 * spec.max_syllable() + 4; }

// Counts of elements in the window [0, T) satisfying pred(twice_p, h);
// sink(length, count, h, twice_p).
template <class C, class Pred, class Sink>
void walk_count(const GroupSpec& spec, const ConeAutomaton& aut, const std::vector<std::vector<C>>& table,
                const MaharamPoint& base, int twice_p_max, Pred&& pred, Sink&& sink) {
  const int hmin = -base.t, hmax = base.T - 1 - base.t;
  horo_walk(spec, aut, base.xi, twice_p_max, [&](const Element& g, int state, int h, int tp, bool block) {
    const int len = static_cast<int>(g.size());
    if (!block) {
      if (h >= hmin && h <= hmax && pred(tp, h)) sink(len, C(1), h, tp);
      return;
    }
    for (int j = std::max(0, hmin - h); j <= hmax - h; ++j) {
      if (static_cast<std::size_t>(j) >= table[0].size()) fail(ErrorKind::kNumerical, "continuation table too short");
      if (pred(tp, h + j)) sink(len + j, table[static_cast<std::size_t>(state)][static_cast<std::size_t>(j)], h + j, tp);
    }
  });
}

template <class Pred, class Sink>
void walk_list(const GroupSpec& spec, const ConeAutomaton& aut, const MaharamPoint& base, int twice_p_max,
               Pred&& pred, Sink&& sink) {
  const int hmin = -base.t, hmax = base.T - 1 - base.t;
  horo_walk(spec, aut, base.xi, twice_p_max, [&](const Element& g, int state, int h, int tp, bool block) {
    if (!block) {
      if (h >= hmin && h <= hmax && pred(tp, h)) sink(g, h, tp);
      return;
    }
    Element x = g;
    // depth-first over continuations; h grows by one per letter
    auto rec = [&](auto&& self, int s, int hh) -> void {
      if (hh > hmax) return;
      if (hh >= hmin && pred(tp, hh)) sink(x, hh, tp);
      for (int l = 0; l < spec.alphabet_size(); ++l) {
        const int u = aut.next(s, static_cast<Letter>(l));
        if (u < 0) continue;
        x.letters.push_back(static_cast<Letter>(l));
        self(self, u, hh + 1);
        x.letters.pop_back();
      }
    };
    rec(rec, state, h);
  });
}

ShellEntry entry(const Element& g, int h, const MaharamPoint& base) {
  return ShellEntry{g, static_cast<int>(g.size()), h, base.t + h};
}

SubsetSample list_shell(const GroupSpec& spec, const MaharamPoint& base, int r, int a, bool shell) {
  const ConeAutomaton aut(spec);
  SubsetSample out{base, r, a, SubsetKind::kGamma, {}, 0};
  walk_list(
      spec, aut, base, r + base.t,
      [&](int tp, int) { return tp - base.t <= r && (!shell || tp - base.t > r - a); },
      [&](const Element& g, int h, int) { out.entries.push_back(entry(g, h, base)); });
  return out;
}

std::size_t compare_length(const GroupSpec& spec, const MaharamPoint& base, const std::vector<ShellEntry>& es) {
  if (base.xi.is_periodic()) return 0;
  std::size_t longest = 0;
  for (const auto& e : es) longest = std::max(longest, e.g.size());
  const std::size_t need = 2 * longest + static_cast<std::size_t>(spec.max_syllable()) + 2;
  if (base.xi.horizon() <= need) fail(ErrorKind::kHorizon, "sampled ray too short to compare landing points");
  return base.xi.horizon() - need;
}

void merge_landings(const GroupSpec& spec, SubsetSample& s) {
  const std::size_t len = compare_length(spec, s.base, s.entries);
  std::unordered_set<std::string> seen;
  std::vector<ShellEntry> kept;
  for (auto& e : s.entries) {
    if (seen.insert(landing_key(spec, s.base, e.g, len)).second) kept.push_back(std::move(e));
  }
  s.merged = s.entries.size() - kept.size();
  s.entries = std::move(kept);
}

double vhat_of(const GroupSpec& spec) { return std::log(ConeAutomaton(spec).spectral_radius()); }

}  // namespace

MaharamPoint make_base(BoundaryRay xi, int t, int T) {
  if (T < 1) fail(ErrorKind::kPrecondition, "window T must be positive");
  if (t < 0 || t >= T) fail(ErrorKind::kPrecondition, "t must lie in [0, T)");
  return MaharamPoint{std::move(xi), t, T};
}

std::size_t required_horizon(const GroupSpec& spec, int r, int T, int extra) {
  return static_cast<std::size_t>(3 * (r + 2 * T) + 4 * spec.max_syllable() + 8 + extra);
}

MaharamPoint sample_base(const CylinderMeasure& m, int T, std::size_t horizon, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BoundaryRay xi = sample_ray(m, horizon, rng);
  const int t = static_cast<int>(rng() % static_cast<std::uint64_t>(T));
  return make_base(BoundaryRay::sampled_trusted(xi.prefix_letters(), seed), t, T);
}

bool in_gamma(const GroupSpec& spec, const MaharamPoint& base, int r, const Element& g) {
  const int h = horofunction(spec, base.xi, g);
  const int landing = base.t + h;
  return static_cast<int>(g.size()) - h - base.t <= r && landing >= 0 && landing < base.T;
}

SubsetSample gamma_r(const GroupSpec& spec, const MaharamPoint& base, int r) {
  SubsetSample s = list_shell(spec, base, r, 0, false);
  s.kind = SubsetKind::kGamma;
  return s;
}

SubsetSample b_r(const GroupSpec& spec, const MaharamPoint& base, int r) {
  SubsetSample s = gamma_r(spec, base, r);
  s.kind = SubsetKind::kB;
  merge_landings(spec, s);
  return s;
}

SubsetSample s_ra(const GroupSpec& spec, const MaharamPoint& base, int r, int a) {
  if (a <= 0) fail(ErrorKind::kPrecondition, "shell width a must be positive");
  SubsetSample outer = b_r(spec, base, r);
  const SubsetSample inner = b_r(spec, base, r - a);
  const std::size_t len = compare_length(spec, base, outer.entries);
  std::unordered_set<std::string> drop;
  for (const auto& e : inner.entries) drop.insert(landing_key(spec, base, e.g, len));
  SubsetSample out{base, r, a, SubsetKind::kS, {}, outer.merged};
  for (auto& e : outer.entries) {
    if (!drop.count(landing_key(spec, base, e.g, len))) out.entries.push_back(std::move(e));
  }
  return out;
}

std::string landing_key(const GroupSpec& spec, const MaharamPoint& base, const Element& g, std::size_t compare_len) {
  const BoundaryRay moved = base.xi.translate(spec, spec.invert(g));
  const int t = base.t + horofunction(spec, base.xi, g);
  std::string key = std::to_string(t) + "|";
  if (moved.is_periodic()) return key + moved.format(spec);
  if (moved.horizon() < compare_len) fail(ErrorKind::kHorizon, "landing ray shorter than the comparison length");
  for (std::size_t i = 0; i < compare_len; ++i) key.push_back(static_cast<char>('A' + moved.at(i)));
  return key;
}

Count gamma_count(const GroupSpec& spec, const MaharamPoint& base, int r) {
  const ConeAutomaton aut(spec);
  const int tpmax = r + base.t;
  const auto table = continuation_table<Count>(aut, table_depth(spec, tpmax, base.T));
  Count total = 0;
  walk_count<Count>(
      spec, aut, table, base, tpmax, [&](int tp, int) { return tp - base.t <= r; },
      [&](int, const Count& c, int, int) { total += c; });
  return total;
}

Count shell_count(const GroupSpec& spec, const MaharamPoint& base, int r, int a) {
  const ConeAutomaton aut(spec);
  const int tpmax = r + base.t;
  const auto table = continuation_table<Count>(aut, table_depth(spec, tpmax, base.T));
  Count total = 0;
  walk_count<Count>(
      spec, aut, table, base, tpmax, [&](int tp, int) { return tp - base.t <= r && tp - base.t > r - a; },
      [&](int, const Count& c, int, int) { total += c; });
  return total;
}

std::vector<double> shell_length_profile(const GroupSpec& spec, const ConeAutomaton& aut, const MaharamPoint& base,
                                         int r, int a) {
  const int tpmax = r + base.t;
  static thread_local std::map<std::pair<const ConeAutomaton*, int>, std::vector<std::vector<double>>> cache;
  const int depth = table_depth(spec, tpmax + base.T, base.T);
  auto key = std::make_pair(&aut, depth);
  auto it = cache.find(key);
  if (it == cache.end()) {
    if (cache.size() > 64) cache.clear();
    it = cache.emplace(key, continuation_table<double>(aut, depth)).first;
  }
  std::vector<double> prof(static_cast<std::size_t>(std::max(0, r + base.T + 1)), 0.0);
  walk_count<double>(
      spec, aut, it->second, base, tpmax, [&](int tp, int) { return tp - base.t <= r && tp - base.t > r - a; },
      [&](int len, double c, int, int) {
        if (static_cast<std::size_t>(len) >= prof.size()) prof.resize(static_cast<std::size_t>(len) + 1, 0.0);
        prof[static_cast<std::size_t>(len)] += c;
      });
  return prof;
}

VolumeProfile volume_profile(const GroupSpec& spec, const std::vector<MaharamPoint>& bases, int r_min, int r_max,
                             int a) {
  require_tree(spec);
  const double v = vhat_of(spec);
  VolumeProfile out;
  out.min_norm = 1e300;
  out.max_norm = 0;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    for (int r = r_min; r <= r_max; ++r) {
      VolumeRow row;
      row.base = i;
      row.r = r;
      row.in_range = r >= 2 * bases[i].T + 2 * a;
      row.gamma = gamma_count(spec, bases[i], r);
      row.b = row.gamma;  // the landing map is injective on tree-like specs
      row.s = shell_count(spec, bases[i], r, a);
      const double scale = std::exp(v * r / 2);
      row.gamma_norm = row.gamma.convert_to<double>() / scale;
      row.b_norm = row.b.convert_to<double>() / scale;
      row.s_norm = row.s.convert_to<double>() / scale;
      out.min_norm = std::min(out.min_norm, row.gamma_norm);
      out.max_norm = std::max(out.max_norm, row.gamma_norm);
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

RegularityResult regularity_scan(const GroupSpec& spec, const MaharamPoint& base, int r) {
  const ConeAutomaton aut(spec);
  const SubsetSample b = b_r(spec, base, r);
  std::unordered_set<Element, ElementHash> un;
  for (const auto& e : b.entries) {
    // landing point y = g^-1 (xi, t); the points z with y in B_s(z), s <= r,
    // are z = delta^-1 y with |delta| <= r + t_y and t_y + h_y(delta) in [0, T)
    const MaharamPoint y{base.xi.translate(spec, spec.invert(e.g)), e.landing_t, base.T};
    walk_list(
        spec, aut, y, r + 2 * e.landing_t, [&](int tp, int h) { return tp + h <= r + e.landing_t; },
        [&](const Element& d, int, int) { un.insert(spec.multiply(e.g, d)); });
  }
  RegularityResult res;
  res.union_size = Count(un.size());
  res.b_size = Count(b.entries.size());
  res.ratio = static_cast<double>(un.size()) / static_cast<double>(b.entries.size());
  res.needed_c0 = 0;
  for (const Element& u : un) {
    const int tp = static_cast<int>(u.size()) - horofunction(spec, base.xi, u);
    res.needed_c0 = std::max(res.needed_c0, tp - base.t - r);
  }
  return res;
}

RegularityResult regularity_count(const GroupSpec& spec, const MaharamPoint& base, int r) {
  if (spec.kind() != GroupKind::kFree) fail(ErrorKind::kCapability, "closed-form regularity count needs a free group");
  // On a tree, z = u^-1 (xi,t) is in the union iff it lies in the window and
  // either u is in Gamma_r or |u| <= r + t (reached from the identity).
  const ConeAutomaton aut(spec);
  const int tpmax = r + 2 * base.t;
  const auto table = continuation_table<Count>(aut, table_depth(spec, tpmax, base.T));
  RegularityResult res;
  res.union_size = 0;
  res.needed_c0 = 0;
  walk_count<Count>(
      spec, aut, table, base, tpmax, [&](int tp, int h) { return tp <= r + base.t + std::max(0, -h); },
      [&](int, const Count& c, int, int tp) {
        res.union_size += c;
        if (c > 0) res.needed_c0 = std::max(res.needed_c0, tp - base.t - r);
      });
  res.b_size = gamma_count(spec, base, r);
  res.ratio = Rational(res.union_size, res.b_size).convert_to<double>();
  return res;
}

RegularityResult regularity_ratio(const GroupSpec& spec, const MaharamPoint& base, int r) {
  if (spec.kind() == GroupKind::kFree) return regularity_count(spec, base, r);
  return regularity_scan(spec, base, r);
}

InvarianceResult asymptotic_invariance(const GroupSpec& spec, const MaharamPoint& base, int r, int a,
                                       const Element& mover) {
  const SubsetSample s = list_shell(spec, base, r, a, true);
  if (s.entries.empty()) fail(ErrorKind::kEmptySupport, "S_{r,a} is empty");
  const Element inv = spec.invert(mover);
  InvarianceResult res;
  res.size = Count(s.entries.size());
  res.kept = res.leaving = res.entering = 0;
  std::uint64_t kept = 0, leaving = 0, entering = 0;
  for (const auto& e : s.entries) {
    // mover . y_g = (g mover^-1)^-1 (xi, t)
    const Element img = spec.multiply(e.g, inv);
    const int h = horofunction(spec, base.xi, img);
    const int lt = base.t + h;
    if (lt < 0 || lt >= base.T) {
      ++leaving;
    } else {
      const int k = static_cast<int>(img.size()) - h - base.t;
      if (k <= r && k > r - a) ++kept;
    }
    const Element pre = spec.multiply(e.g, mover);
    const int pt = base.t + horofunction(spec, base.xi, pre);
    if (pt < 0 || pt >= base.T) ++entering;
  }
  res.kept = kept;
  res.leaving = leaving;
  res.entering = entering;
  const double n = static_cast<double>(s.entries.size());
  res.cemetery = 2.0 * (n - static_cast<double>(kept)) / n;
  const double dom = n - static_cast<double>(leaving);
  res.partial = (dom - static_cast<double>(kept) + (n - static_cast<double>(entering)) - static_cast<double>(kept)) / n;
  return res;
}

double asymptotic_invariance_ratio(const GroupSpec& spec, const MaharamPoint& base, int r, int a,
                                   const Element& mover, MoverMode mode) {
  const InvarianceResult res = asymptotic_invariance(spec, base, r, a, mover);
  return mode == MoverMode::kCemetery ? res.cemetery : res.partial;
}

int neighborhood_beta(const GroupSpec& spec, const MaharamPoint& base, int r, int n) {
  const SubsetSample g = gamma_r(spec, base, r);
  std::vector<Element> ball;
  const ConeAutomaton aut(spec);
  for (int k = 0; k <= n; ++k) for_each_in_sphere(aut, k, [&](const Element& x) { ball.push_back(spec.invert(x)); });
  int beta = 0;
  for (const auto& e : g.entries) {
    for (const Element& gi : ball) {
      const Element u = spec.multiply(e.g, gi);
      const int h = horofunction(spec, base.xi, u);
      if (base.t + h < 0 || base.t + h >= base.T) continue;
      beta = std::max(beta, static_cast<int>(u.size()) - h - base.t - r);
    }
  }
  return beta;
}

int kappa_shell_rho(int a, int T) {
  // on trees R_lambda = -h exactly, so the growth rescaling is the identity
  return a + 2 * T;
}

namespace {

struct KappaAccum {
  std::vector<double> sum, sumsq;       // radial: per word length
  std::map<Element, double> atoms;      // sparse
  std::vector<std::vector<double>> stratum_sum, stratum_sumsq;
  long samples = 0;
  long empty = 0;
};

BoundaryRay sample_with_prefix(const CylinderMeasure& m, const std::vector<Letter>& prefix, std::size_t horizon,
                               std::mt19937_64& rng) {
  const ConeAutomaton& aut = m.automaton();
  std::vector<Letter> letters = prefix;
  int state = aut.run_from(aut.start(), prefix);
  if (state < 0) fail(ErrorKind::kMalformedInput, "cylinder word is not a normal form");
  while (letters.size() < horizon) {
    double u = unit_uniform(rng);
    int chosen = -1;
    for (int l = 0; l < m.spec().alphabet_size(); ++l) {
      const double p = m.transition_probability(state, static_cast<Letter>(l));
      if (p <= 0) continue;
      chosen = l;
      if (u < p) break;
      u -= p;
    }
    letters.push_back(static_cast<Letter>(chosen));
    state = aut.next(state, static_cast<Letter>(chosen));
  }
  return BoundaryRay::sampled_trusted(std::move(letters), 0);
}

}  // namespace

KappaMeasure kappa(const GroupSpec& spec, const KappaOptions& o) {
  require_tree(spec);
  if (o.samples < 1) fail(ErrorKind::kPrecondition, "kappa needs at least one sample");
  if (o.a <= 0 || o.T <= 0 || o.r < 0) fail(ErrorKind::kPrecondition, "kappa needs r >= 0, a > 0, T > 0");
  if (o.workers < 1) fail(ErrorKind::kPrecondition, "workers must be positive");
  const CylinderMeasure m(spec);
  const ConeAutomaton& aut = m.automaton();
  const bool radial = spec.kind() == GroupKind::kFree && !o.psi_cylinder;
  const std::size_t horizon = required_horizon(spec, o.r, o.T);

  // strata: first letters (psi = 1) or the single cylinder of psi
  std::vector<std::vector<Letter>> strata;
  std::vector<double> mass;
  if (o.psi_cylinder) {
    strata.push_back(o.psi_cylinder->letters);
    mass.push_back(1.0);
  } else {
    for (int l = 0; l < spec.alphabet_size(); ++l) {
      const double p = m.value(Element{{static_cast<Letter>(l)}});
      if (p > 0) strata.push_back({static_cast<Letter>(l)}), mass.push_back(p);
    }
  }
  std::vector<long> alloc(strata.size());
  long used = 0;
  for (std::size_t i = 0; i < strata.size(); ++i) {
    alloc[i] = std::max(1L, static_cast<long>(std::floor(static_cast<double>(o.samples) * mass[i])));
    used += alloc[i];
  }
  for (std::size_t i = 0; used < o.samples; i = (i + 1) % strata.size(), ++used) ++alloc[i];

  const auto lengths = static_cast<std::size_t>(o.r + o.T + 1);
  std::vector<KappaAccum> acc(static_cast<std::size_t>(o.workers));
  auto work = [&](int w) {
    KappaAccum& A = acc[static_cast<std::size_t>(w)];
    A.sum.assign(lengths, 0.0);
    A.sumsq.assign(lengths, 0.0);
    A.stratum_sum.assign(strata.size(), std::vector<double>(lengths, 0.0));
    A.stratum_sumsq.assign(strata.size(), std::vector<double>(lengths, 0.0));
    std::seed_seq ss{o.seed, static_cast<std::uint64_t>(w), std::uint64_t{0x6b617070}};
    std::mt19937_64 rng(ss);
    std::vector<double> x(lengths);
    for (std::size_t si = 0; si < strata.size(); ++si) {
      const double weight = mass[si] / static_cast<double>(alloc[si]);
      for (long i = w; i < alloc[si]; i += o.workers) {
        const BoundaryRay xi = sample_with_prefix(m, strata[si], horizon, rng);
        ++A.samples;
        std::fill(x.begin(), x.end(), 0.0);
        for (int t = 0; t < o.T; ++t) {
          const MaharamPoint base{xi, t, o.T};
          if (radial) {
            const auto prof = shell_length_profile(spec, aut, base, o.r, o.a);
            double n = 0;
            for (double c : prof) n += c;
            if (n == 0) {
              ++A.empty;
              continue;
            }
            for (std::size_t k = 0; k < prof.size() && k < lengths; ++k) x[k] += prof[k] / n / o.T;
          } else {
            const SubsetSample s = list_shell(spec, base, o.r, o.a, true);
            if (s.entries.empty()) {
              ++A.empty;
              continue;
            }
            const double c = weight / static_cast<double>(s.entries.size()) / o.T;
            for (const auto& e : s.entries) A.atoms[spec.invert(e.g)] += c;
          }
        }
        if (radial) {
          for (std::size_t k = 0; k < lengths; ++k) {
            A.sum[k] += weight * x[k];
            A.stratum_sum[si][k] += x[k];
            A.stratum_sumsq[si][k] += x[k] * x[k];
          }
        }
      }
    }
  };
  if (o.workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < o.workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  KappaMeasure km{o, GroupMeasure::sparse(spec, {{Element{}, 1.0}}, "placeholder"), kappa_shell_rho(o.a, o.T), radial,
                  0, {}};
  long empty = 0;
  for (const auto& A : acc) km.samples_used += A.samples, empty += A.empty;
  const std::string desc = "kappa r=" + std::to_string(o.r) + " a=" + std::to_string(o.a) + " T=" + std::to_string(o.T);
  if (radial) {
    std::vector<double> total(lengths, 0.0);
    std::vector<std::vector<double>> ss(strata.size(), std::vector<double>(lengths, 0.0)),
        sq(strata.size(), std::vector<double>(lengths, 0.0));
    for (const auto& A : acc)
      for (std::size_t k = 0; k < lengths; ++k) {
        total[k] += A.sum[k];
        for (std::size_t si = 0; si < strata.size(); ++si) ss[si][k] += A.stratum_sum[si][k], sq[si][k] += A.stratum_sumsq[si][k];
      }
    Rational z = 0;
    std::vector<Rational> masses;
    for (double v : total) masses.emplace_back(v), z += masses.back();
    if (z == 0) fail(ErrorKind::kUnderSampled, "kappa accumulated zero mass (" + std::to_string(empty) + " empty windows)");
    for (auto& q : masses) q /= z;
    km.measure = GroupMeasure::radial(spec, std::move(masses), desc);
    km.mass_stddev.assign(lengths, 0.0);
    const double zd = static_cast<double>(z);
    for (std::size_t k = 0; k < lengths; ++k) {
      double var = 0;
      for (std::size_t si = 0; si < strata.size(); ++si) {
        const double n = static_cast<double>(alloc[si]);
        if (n < 2) continue;
        const double mean = ss[si][k] / n;
        const double s2 = std::max(0.0, (sq[si][k] - n * mean * mean) / (n - 1));
        var += mass[si] * mass[si] * s2 / n;
      }
      km.mass_stddev[k] = std::sqrt(var) / zd;
    }
  } else {
    std::map<Element, double> merged;
    for (const auto& A : acc)
      for (const auto& [g, w] : A.atoms) merged[g] += w;
    double z = 0;
    for (const auto& [g, w] : merged) z += w;
    if (z <= 0) fail(ErrorKind::kUnderSampled, "kappa accumulated zero mass (" + std::to_string(empty) + " empty windows)");
    std::vector<std::pair<Element, double>> atoms;
    double s = 0;
    for (const auto& [g, w] : merged) atoms.emplace_back(g, w / z), s += w / z;
    atoms.back().second += 1.0 - s;  // absorb rounding so the total is 1 to the last bit
    km.measure = GroupMeasure::sparse(spec, std::move(atoms), desc);
  }
  return km;
}

std::vector<double> kappa_exact(const GroupSpec& spec, int r, int a, int T, const std::vector<Element>& gs,
                                int depth) {
  require_tree(spec);
  if (depth < r + T + spec.max_syllable()) {
    fail(ErrorKind::kInsufficientDepth, "cylinder depth must be at least r + T + max syllable");
  }
  const CylinderMeasure m(spec);
  const ConeAutomaton& aut = m.automaton();
  const std::size_t horizon = required_horizon(spec, r, T) + static_cast<std::size_t>(depth);
  std::vector<Element> inv;
  for (const auto& g : gs) inv.push_back(spec.invert(g));
  std::vector<double> out(gs.size(), 0.0);
  for_each_in_sphere(aut, depth, [&](const Element& w) {
    const double nu = m.value(w);
    std::vector<Letter> letters = w.letters;
    const auto tail = greedy_continuation(aut, aut.run(w), horizon - w.size());
    letters.insert(letters.end(), tail.begin(), tail.end());
    const BoundaryRay xi = BoundaryRay::sampled_trusted(std::move(letters), 0);
    std::vector<int> hs(inv.size());
    for (std::size_t i = 0; i < inv.size(); ++i) hs[i] = horofunction(spec, xi, inv[i]);
    for (int t = 0; t < T; ++t) {
      const MaharamPoint base{xi, t, T};
      double n = 0;
      for (double c : shell_length_profile(spec, aut, base, r, a)) n += c;
      if (n == 0) continue;
      for (std::size_t i = 0; i < inv.size(); ++i) {
        const int h = hs[i];
        const int k = static_cast<int>(inv[i].size()) - h - t;
        if (k <= r && k > r - a && t + h >= 0 && t + h < T) out[i] += nu / n / T;
      }
    }
  });
  return out;
}

GroupMeasure zeta_shell(const GroupSpec& spec, int r, int a, int b) {
  const double c = r - a / 2.0;
  return uniform_lengths(spec, c - b / 2.0, c + b / 2.0,
                         "zeta r=" + std::to_string(r) + " a=" + std::to_string(a) + " b=" + std::to_string(b));
}

namespace {

void check_regime(int a, int b, int T) {
  if (!(a > 2 * (b + T))) fail(ErrorKind::kPrecondition, "domination needs a > 2(b + T)");
}

}  // namespace

DominationReport domination_check(const GroupSpec& spec, int r, int a, int b, int T, long samples,
                                  std::uint64_t seed, int workers) {
  check_regime(a, b, T);
  KappaOptions o;
  o.r = r;
  o.a = a;
  o.T = T;
  o.samples = samples;
  o.seed = seed;
  o.workers = workers;
  const KappaMeasure k = kappa(spec, o);
  const GroupMeasure z = zeta_shell(spec, r, a, b);
  DominationReport rep;
  rep.r = r;
  rep.a = a;
  rep.b = b;
  rep.T = T;
  rep.samples = k.samples_used;
  if (k.radial) {
    const auto& zm = z.sphere_mass();
    const auto& km = k.measure.sphere_mass();
    for (std::size_t n = 0; n < zm.size(); ++n) {
      if (zm[n] == 0) continue;
      const double kv = n < km.size() ? static_cast<double>(km[n]) : 0.0;
      if (kv <= 0) {
        ++rep.uncovered;
        continue;
      }
      // both measures are uniform on the sphere, so the element ratio is the mass ratio
      const double ratio = static_cast<double>(zm[n]) / kv;
      const double sd = k.mass_stddev[n];
      if (ratio > rep.max_ratio) {
        rep.max_ratio = ratio;
        for_each_in_sphere(ConeAutomaton(spec), static_cast<int>(n), [&](const Element& g) {
          rep.argmax = g;
          return false;
        });
      }
      rep.ratio_high = std::max(rep.ratio_high, static_cast<double>(zm[n]) / std::max(kv - 2 * sd, 1e-300));
      rep.ratio_low = std::max(rep.ratio_low, static_cast<double>(zm[n]) / (kv + 2 * sd));
    }
  } else {
    z.for_each([&](const Element& g, double w) {
      const double kv = k.measure.weight(g);
      if (kv <= 0) {
        ++rep.uncovered;
        return;
      }
      if (w / kv > rep.max_ratio) rep.max_ratio = w / kv, rep.argmax = g;
    });
    rep.ratio_low = rep.ratio_high = rep.max_ratio;
  }
  rep.under_sampled = rep.uncovered > 0;
  return rep;
}

double domination_exact(const GroupSpec& spec, int r, int a, int b, int T) {
  check_regime(a, b, T);
  const GroupMeasure z = zeta_shell(spec, r, a, b);
  std::vector<Element> gs;
  std::vector<double> zw;
  z.for_each([&](const Element& g, double w) {
    gs.push_back(g);
    zw.push_back(w);
  });
  const auto kv = kappa_exact(spec, r, a, T, gs, r + T + spec.max_syllable());
  double best = 0;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (kv[i] <= 0) return std::numeric_limits<double>::infinity();
    best = std::max(best, zw[i] / kv[i]);
  }
  return best;
}

}  // namespace hyg
