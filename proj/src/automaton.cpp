#include "automaton.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "errors.hpp"

namespace hyg {

namespace {

/// Longest run of the same letter allowed in a geodesic syllable.
int max_run(int order, int sign) {
  if (order == 0) return 1;  // represented by a self loop
  return sign > 0 ? order / 2 : (order - 1) / 2;
}

}  // namespace

void ConeAutomaton::add_state(const StateInfo& info) {
  states_.push_back(info);
  trans_.emplace_back(static_cast<std::size_t>(spec_.alphabet_size()), -1);
}

int ConeAutomaton::find_state(const StateInfo& s) const {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const StateInfo& o = states_[i];
    if (o.factor == s.factor && o.sign == s.sign && o.count == s.count && o.central == s.central) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

ConeAutomaton::ConeAutomaton(const GroupSpec& spec) : spec_(spec) {
  add_state(StateInfo{});
  const int central = spec.central_factor();
  for (int f = 0; f < spec.factor_count(); ++f) {
    const int order = spec.factor_order(f);
    for (int sign : {1, -1}) {
      if (order == 2 && sign < 0) continue;
      for (int c = 1; c <= max_run(order, sign); ++c) add_state(StateInfo{f, sign, c, f == central});
    }
  }
  for (int s = 0; s < state_count(); ++s) {
    const StateInfo cur = states_[static_cast<std::size_t>(s)];
    for (int l = 0; l < spec.alphabet_size(); ++l) {
      const LetterInfo& li = spec.info(static_cast<Letter>(l));
      const bool lcentral = li.factor == central;
      int target = -1;
      if (cur.factor == li.factor) {
        if (cur.sign != li.sign) continue;
        const int order = spec.factor_order(li.factor);
        if (order == 0) {
          target = s;
        } else if (cur.count + 1 <= max_run(order, li.sign)) {
          target = find_state(StateInfo{li.factor, li.sign, cur.count + 1, lcentral});
        }
      } else {
        if (cur.central) continue;  // the central residue is written last
        if (max_run(spec.factor_order(li.factor), li.sign) < 1) continue;
        target = find_state(StateInfo{li.factor, li.sign, 1, lcentral});
      }
      trans_[static_cast<std::size_t>(s)][static_cast<std::size_t>(l)] = target;
    }
  }
  compute_perron(1e-10, 100000);
}

int ConeAutomaton::run_from(int state, std::span<const Letter> letters) const {
  for (Letter l : letters) {
    if (state < 0) return -1;
    if (l >= spec_.alphabet_size()) return -1;
    state = next(state, l);
  }
  return state;
}

int ConeAutomaton::run(const Element& x) const { return run_from(start(), x.letters); }

std::vector<std::vector<int>> ConeAutomaton::count_matrix() const {
  const auto n = static_cast<std::size_t>(state_count());
  std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
  for (std::size_t s = 0; s < n; ++s) {
    for (int t : trans_[s]) {
      if (t >= 0) ++a[s][static_cast<std::size_t>(t)];
    }
  }
  return a;
}

std::vector<Count> ConeAutomaton::sphere_sizes(int nmax) const {
  if (nmax < 0) fail(ErrorKind::kPrecondition, "negative radius");
  const auto n = static_cast<std::size_t>(state_count());
  std::vector<Count> cur(n, 0), nxt(n, 0);
  cur[0] = 1;
  std::vector<Count> out;
  out.reserve(static_cast<std::size_t>(nmax) + 1);
  for (int k = 0; k <= nmax; ++k) {
    Count total = 0;
    for (const Count& c : cur) total += c;
    out.push_back(total);
    std::fill(nxt.begin(), nxt.end(), Count(0));
    for (std::size_t s = 0; s < n; ++s) {
      if (cur[s] == 0) continue;
      for (int t : trans_[s]) {
        if (t >= 0) nxt[static_cast<std::size_t>(t)] += cur[s];
      }
    }
    std::swap(cur, nxt);
  }
  return out;
}

Count ConeAutomaton::sphere_size(int n) const { return sphere_sizes(n).back(); }

Count ConeAutomaton::ball_size(int r) const {
  Count total = 0;
  for (const Count& c : sphere_sizes(r)) total += c;
  return total;
}

Count ConeAutomaton::sphere_size_by_matrix_power(int n) const {
  if (n < 0) fail(ErrorKind::kPrecondition, "negative radius");
  using M = std::vector<std::vector<Count>>;
  const auto sz = static_cast<std::size_t>(state_count());
  auto mul = [sz](const M& x, const M& y) {
    M z(sz, std::vector<Count>(sz, 0));
    for (std::size_t i = 0; i < sz; ++i)
      for (std::size_t k = 0; k < sz; ++k) {
        if (x[i][k] == 0) continue;
        for (std::size_t j = 0; j < sz; ++j) z[i][j] += x[i][k] * y[k][j];
      }
    return z;
  };
  M base(sz, std::vector<Count>(sz, 0)), acc(sz, std::vector<Count>(sz, 0));
  const auto a = count_matrix();
  for (std::size_t i = 0; i < sz; ++i) {
    acc[i][i] = 1;
    for (std::size_t j = 0; j < sz; ++j) base[i][j] = a[i][j];
  }
  for (int e = n; e > 0; e >>= 1) {
    if (e & 1) acc = mul(acc, base);
    base = mul(base, base);
  }
  Count total = 0;
  for (std::size_t j = 0; j < sz; ++j) total += acc[0][j];
  return total;
}

std::vector<Count> ConeAutomaton::continuation_counts(int state, int mmax) const {
  const auto n = static_cast<std::size_t>(state_count());
  // paths of length m from state = sum over successors of paths of length m-1
  std::vector<std::vector<Count>> by_state(n, std::vector<Count>(static_cast<std::size_t>(mmax) + 1, 0));
  for (std::size_t s = 0; s < n; ++s) by_state[s][0] = 1;
  for (int m = 1; m <= mmax; ++m) {
    for (std::size_t s = 0; s < n; ++s) {
      Count c = 0;
      for (int t : trans_[s]) {
        if (t >= 0) c += by_state[static_cast<std::size_t>(t)][static_cast<std::size_t>(m - 1)];
      }
      by_state[s][static_cast<std::size_t>(m)] = c;
    }
  }
  return by_state.at(static_cast<std::size_t>(state));
}

PerronResult perron_iteration(const std::vector<std::vector<int>>& a, double tol, int cap) {
  // Power iteration on A + I: same Perron vector, but aperiodic, so the
  // bipartite structure of free products does not stall convergence.
  const auto n = a.size();
  std::vector<double> v(n, 1.0), w(n);
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = x[i];
      for (std::size_t j = 0; j < n; ++j) s += a[i][j] * x[j];
      y[i] = s;
    }
  };
  PerronResult r;
  double lambda = 0;
  for (int it = 1; it <= cap; ++it) {
    apply(v, w);
    double sv = 0, sw = 0, mx = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sv += v[i];
      sw += w[i];
      mx = std::max(mx, w[i]);
    }
    lambda = sw / sv;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / mx;
    apply(v, w);
    double res = 0, wm = 0;
    for (std::size_t i = 0; i < n; ++i) {
      res = std::max(res, std::abs(w[i] - lambda * v[i]));
      wm = std::max(wm, std::abs(w[i]));
    }
    r.residual = res / wm;
    r.iterations = it;
    if (r.residual < tol * 1e-3) break;
  }
  if (r.residual > tol) {
    fail(ErrorKind::kNumerical, "power iteration did not converge, residual " + std::to_string(r.residual));
  }
  r.rho = lambda - 1.0;
  r.vector = v;
  for (double& x : r.vector) x /= v[0];
  return r;
}

void ConeAutomaton::compute_perron(double tol, int cap) {
  PerronResult r = perron_iteration(count_matrix(), tol, cap);
  rho_ = r.rho;
  perron_ = std::move(r.vector);
  iterations_ = r.iterations;
  residual_ = r.residual;
}

SphereStream::SphereStream(const ConeAutomaton& aut, int n, std::optional<Letter> first)
    : aut_(aut), n_(n), first_(first) {
  if (n < 0) fail(ErrorKind::kPrecondition, "negative radius");
}

bool SphereStream::next(Element& out) {
  if (done_) return false;
  const int alpha = aut_.spec().alphabet_size();
  if (n_ == 0) {
    done_ = true;
    if (first_) return false;
    out.letters.clear();
    return true;
  }
  if (!started_) {
    started_ = true;
    states_.assign(1, aut_.start());
    cursor_.assign(1, 0);
  } else {
    // resume after the last emitted word
    word_.pop_back();
    states_.pop_back();
  }
  while (!cursor_.empty()) {
    const std::size_t depth = word_.size();
    int& c = cursor_.back();
    const int lo = (depth == 0 && first_) ? *first_ : 0;
    const int hi = (depth == 0 && first_) ? *first_ + 1 : alpha;
    if (c < lo) c = lo;
    bool advanced = false;
    while (c < hi) {
      const int l = c++;
      const int t = aut_.next(states_.back(), static_cast<Letter>(l));
      if (t < 0) continue;
      word_.push_back(static_cast<Letter>(l));
      states_.push_back(t);
      if (static_cast<int>(word_.size()) == n_) {
        out.letters = word_;
        return true;
      }
      cursor_.push_back(0);
      advanced = true;
      break;
    }
    if (advanced) continue;
    cursor_.pop_back();
    if (!word_.empty()) {
      word_.pop_back();
      states_.pop_back();
    }
  }
  done_ = true;
  return false;
}

GrowthEstimate growth_exponent(const ConeAutomaton& aut, int radius_max, double tol, int iteration_cap) {
  GrowthEstimate g;
  const PerronResult pr = perron_iteration(aut.count_matrix(), tol, iteration_cap);
  const double rho = pr.rho;
  if (!(rho > 1.0)) fail(ErrorKind::kPrecondition, "elementary growth");
  g.vhat = std::log(rho);
  g.iterations = pr.iterations;
  g.residual = pr.residual;
  g.radius_min = 1;
  g.radius_max = radius_max;
  const auto sizes = aut.sphere_sizes(radius_max);
  g.lower_const = 1e300;
  g.upper_const = 0;
  for (int n = 1; n <= radius_max; ++n) {
    const double logc = std::log(sizes[static_cast<std::size_t>(n)].convert_to<double>()) - g.vhat * n;
    g.lower_const = std::min(g.lower_const, std::exp(logc));
    g.upper_const = std::max(g.upper_const, std::exp(logc));
  }
  return g;
}

std::vector<std::vector<Element>> bfs_spheres(const GroupSpec& spec, int nmax) {
  std::vector<std::vector<Element>> spheres;
  std::unordered_set<Element, ElementHash> seen;
  spheres.push_back({Element{}});
  seen.insert(Element{});
  for (int n = 1; n <= nmax; ++n) {
    std::vector<Element> layer;
    for (const Element& x : spheres.back()) {
      for (int l = 0; l < spec.alphabet_size(); ++l) {
        Element gen{{static_cast<Letter>(l)}};
        Element y = spec.multiply(x, gen);
        if (seen.insert(y).second) layer.push_back(y);
      }
    }
    std::sort(layer.begin(), layer.end());
    spheres.push_back(std::move(layer));
  }
  return spheres;
}

}  // namespace hyg
