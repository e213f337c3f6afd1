#include "averages.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

#include "errors.hpp"

namespace hyg {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double to_double(const Rational& q) { return static_cast<double>(q); }

// Number of elements of each sphere mapping to each permutation of the
// finite space, by dynamic programming over (automaton state, image).
struct QuotientSpheres {
  std::vector<std::vector<std::size_t>> images;
  std::vector<std::vector<Count>> counts;  // counts[n][image]

  QuotientSpheres(const FiniteAction& act, int nmax) {
    const ConeAutomaton aut(act.spec());
    const auto ns = static_cast<std::size_t>(aut.state_count());
    const int alpha = act.spec().alphabet_size();
    std::map<std::vector<std::size_t>, std::size_t> id;
    std::vector<std::vector<long long>> step;  // step[image][letter], -1 unknown
    auto intern = [&](std::vector<std::size_t> p) {
      auto [it, fresh] = id.emplace(p, images.size());
      if (fresh) {
        if (images.size() >= 50000) fail(ErrorKind::kPrecondition, "finite action image too large for bucketing");
        images.push_back(std::move(p));
        step.emplace_back(static_cast<std::size_t>(alpha), -1);
      }
      return it->second;
    };
    std::vector<std::size_t> e(act.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = i;
    intern(e);
    std::vector<std::vector<Count>> cur(ns), nxt(ns);
    cur[0] = {Count(1)};
    for (int n = 0; n <= nmax; ++n) {
      std::vector<Count> total(images.size(), 0);
      for (const auto& row : cur)
        for (std::size_t i = 0; i < row.size(); ++i) total[i] += row[i];
      counts.push_back(std::move(total));
      if (n == nmax) break;
      for (auto& row : nxt) row.clear();
      for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t i = 0; i < cur[s].size(); ++i) {
          if (cur[s][i] == 0) continue;
          for (int l = 0; l < alpha; ++l) {
            const int t = aut.next(static_cast<int>(s), static_cast<Letter>(l));
            if (t < 0) continue;
            if (step[i][static_cast<std::size_t>(l)] < 0) {
              // image of g.l is image(g) o perm(l)
              const auto& pl = act.letter_perm(static_cast<Letter>(l));
              std::vector<std::size_t> q(act.size());
              for (std::size_t x = 0; x < q.size(); ++x) q[x] = images[i][pl[x]];
              const std::size_t j = intern(std::move(q));
              step[i][static_cast<std::size_t>(l)] = static_cast<long long>(j);
            }
            const auto j = static_cast<std::size_t>(step[i][static_cast<std::size_t>(l)]);
            auto& row = nxt[static_cast<std::size_t>(t)];
            if (row.size() <= j) row.resize(images.size(), 0);
            row[j] += cur[s][i];
          }
        }
      }
      std::swap(cur, nxt);
    }
    for (auto& c : counts) c.resize(images.size(), 0);
  }
};

// Normalised spherical character averages sum_{|g|=n} exp(-2 pi i k theta(g)) / |S_n|.
std::vector<std::complex<double>> spherical_characters(const CircleAction& act, int k, int nmax) {
  const ConeAutomaton aut(act.spec());
  const auto ns = static_cast<std::size_t>(aut.state_count());
  const int alpha = act.spec().alphabet_size();
  std::vector<std::complex<double>> phase(static_cast<std::size_t>(alpha));
  for (int l = 0; l < alpha; ++l) phase[static_cast<std::size_t>(l)] = std::polar(1.0, -kTwoPi * k * act.letter_rotation(static_cast<Letter>(l)));
  std::vector<std::complex<double>> u(ns, 0.0), un(ns);
  std::vector<double> c(ns, 0.0), cn(ns);
  u[0] = 1.0;
  c[0] = 1.0;
  std::vector<std::complex<double>> out;
  for (int n = 0; n <= nmax; ++n) {
    std::complex<double> su = 0;
    double sc = 0;
    for (std::size_t s = 0; s < ns; ++s) su += u[s], sc += c[s];
    out.push_back(su / sc);
    std::fill(un.begin(), un.end(), 0.0);
    std::fill(cn.begin(), cn.end(), 0.0);
    for (std::size_t s = 0; s < ns; ++s)
      for (int l = 0; l < alpha; ++l) {
        const int t = aut.next(static_cast<int>(s), static_cast<Letter>(l));
        if (t < 0) continue;
        un[static_cast<std::size_t>(t)] += u[s] * phase[static_cast<std::size_t>(l)];
        cn[static_cast<std::size_t>(t)] += c[s];
      }
    for (std::size_t s = 0; s < ns; ++s) u[s] = un[s] / sc, c[s] = cn[s] / sc;
  }
  return out;
}

void check_table(const FiniteAction& action, const Observable& f) {
  if (f.kind() != Observable::Kind::kTable || f.values().size() != action.size()) {
    fail(ErrorKind::kConfig, "observable '" + f.name() + "' does not match the finite space of size " +
                                 std::to_string(action.size()));
  }
}

void check_enumerable(const GroupMeasure& zeta) {
  if (zeta.support_size() > Count(static_cast<long long>(kEnumerationCap))) {
    fail(ErrorKind::kPrecondition, "support of " + zeta.descriptor() + " exceeds the enumeration cap");
  }
}

}  // namespace

GroupMeasure GroupMeasure::radial(const GroupSpec& spec, std::vector<Rational> mass, std::string descriptor) {
  GroupMeasure m(spec);
  m.radial_ = true;
  m.descriptor_ = std::move(descriptor);
  while (!mass.empty() && mass.back() == 0) mass.pop_back();
  if (mass.empty()) fail(ErrorKind::kEmptySupport, "measure " + m.descriptor_ + " has empty support");
  Rational total = 0;
  for (const auto& q : mass) {
    if (q < 0) fail(ErrorKind::kPrecondition, "negative sphere mass");
    total += q;
  }
  if (total != 1) fail(ErrorKind::kPrecondition, "sphere masses of " + m.descriptor_ + " do not sum to 1");
  m.mass_ = std::move(mass);
  m.sphere_sizes_ = ConeAutomaton(spec).sphere_sizes(static_cast<int>(m.mass_.size()) - 1);
  m.max_len_ = static_cast<int>(m.mass_.size()) - 1;
  m.min_len_ = 0;
  while (m.mass_[static_cast<std::size_t>(m.min_len_)] == 0) ++m.min_len_;
  return m;
}

GroupMeasure GroupMeasure::sparse(const GroupSpec& spec, std::vector<std::pair<Element, double>> atoms,
                                  std::string descriptor) {
  GroupMeasure m(spec);
  m.radial_ = false;
  m.descriptor_ = std::move(descriptor);
  std::sort(atoms.begin(), atoms.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  double total = 0;
  for (const auto& [g, w] : atoms) {
    if (w < 0) fail(ErrorKind::kPrecondition, "negative weight");
    if (w == 0) continue;
    if (!spec.is_normal_form(g)) fail(ErrorKind::kMalformedInput, "measure atom is not in normal form");
    if (!m.atoms_.empty() && m.atoms_.back().first == g) {
      m.atoms_.back().second += w;
    } else {
      m.atoms_.emplace_back(g, w);
    }
    total += w;
  }
  if (m.atoms_.empty()) fail(ErrorKind::kEmptySupport, "measure " + m.descriptor_ + " has empty support");
  if (std::abs(total - 1) > 1e-12) fail(ErrorKind::kPrecondition, "weights of " + m.descriptor_ + " do not sum to 1");
  m.min_len_ = 1 << 30;
  for (const auto& [g, w] : m.atoms_) {
    m.index_.emplace(g, w);
    m.min_len_ = std::min(m.min_len_, static_cast<int>(g.size()));
    m.max_len_ = std::max(m.max_len_, static_cast<int>(g.size()));
  }
  return m;
}

Count GroupMeasure::support_size() const {
  if (!radial_) return Count(atoms_.size());
  Count c = 0;
  for (std::size_t n = 0; n < mass_.size(); ++n)
    if (mass_[n] != 0) c += sphere_sizes_[n];
  return c;
}

double GroupMeasure::weight(const Element& g) const {
  if (!radial_) {
    auto it = index_.find(g);
    return it == index_.end() ? 0.0 : it->second;
  }
  return to_double(exact_weight(g));
}

Rational GroupMeasure::exact_weight(const Element& g) const {
  if (!radial_) fail(ErrorKind::kCapability, "exact weights are kept for radial measures only");
  const std::size_t n = g.size();
  if (n >= mass_.size()) return 0;
  return mass_[n] / sphere_sizes_[n];
}

GroupMeasure beta(const GroupSpec& spec, int r) {
  if (r < 0) fail(ErrorKind::kEmptySupport, "ball of negative radius");
  const auto sizes = ConeAutomaton(spec).sphere_sizes(r);
  Count total = 0;
  for (const auto& c : sizes) total += c;
  std::vector<Rational> mass;
  for (const auto& c : sizes) mass.emplace_back(c, total);
  return GroupMeasure::radial(spec, std::move(mass), "ball " + std::to_string(r));
}

GroupMeasure sigma(const GroupSpec& spec, int n) {
  if (n < 0) fail(ErrorKind::kEmptySupport, "sphere of negative radius");
  std::vector<Rational> mass(static_cast<std::size_t>(n) + 1, 0);
  mass.back() = 1;
  return GroupMeasure::radial(spec, std::move(mass), "sphere " + std::to_string(n));
}

GroupMeasure mu(const GroupSpec& spec, int n) {
  if (n < 0) fail(ErrorKind::kEmptySupport, "negative Cesaro index");
  std::vector<Rational> mass(static_cast<std::size_t>(n) + 1, Rational(1, n + 1));
  return GroupMeasure::radial(spec, std::move(mass), "cesaro " + std::to_string(n));
}

GroupMeasure uniform_lengths(const GroupSpec& spec, double lo, double hi, std::string descriptor) {
  const int first = std::max(0, static_cast<int>(std::floor(lo)) + 1);
  const int last = static_cast<int>(std::floor(hi));
  if (last < first) fail(ErrorKind::kEmptySupport, descriptor + " contains no integer lengths");
  const auto sizes = ConeAutomaton(spec).sphere_sizes(last);
  Count total = 0;
  for (int n = first; n <= last; ++n) total += sizes[static_cast<std::size_t>(n)];
  std::vector<Rational> mass(static_cast<std::size_t>(last) + 1, 0);
  for (int n = first; n <= last; ++n) mass[static_cast<std::size_t>(n)] = Rational(sizes[static_cast<std::size_t>(n)], total);
  return GroupMeasure::radial(spec, std::move(mass), std::move(descriptor));
}

GroupMeasure sigma_shell(const GroupSpec& spec, double r, double a) {
  if (!(a > 0)) fail(ErrorKind::kPrecondition, "shell width must be positive");
  return uniform_lengths(spec, r - a, r + a, "shell " + std::to_string(r) + "+-" + std::to_string(a));
}

GroupMeasure mu_shell(const GroupSpec& spec, int r, double a) {
  if (r < 1) fail(ErrorKind::kPrecondition, "mu_shell needs r >= 1");
  std::vector<Rational> mass;
  for (int s = 1; s <= r; ++s) {
    const auto m = sigma_shell(spec, s, a).sphere_mass();
    if (mass.size() < m.size()) mass.resize(m.size(), 0);
    for (std::size_t n = 0; n < m.size(); ++n) mass[n] += m[n] / r;
  }
  return GroupMeasure::radial(spec, std::move(mass), "shell-cesaro " + std::to_string(r) + "+-" + std::to_string(a));
}

GroupMeasure sigma_prime(const GroupSpec& spec, int n) {
  if (n < 0) fail(ErrorKind::kEmptySupport, "sphere of negative radius");
  std::vector<Rational> mass(static_cast<std::size_t>(n) + 2, 0);
  mass[static_cast<std::size_t>(n)] = Rational(1, 2);
  mass[static_cast<std::size_t>(n) + 1] = Rational(1, 2);
  return GroupMeasure::radial(spec, std::move(mass), "sphere-pair " + std::to_string(n));
}

std::vector<double> apply_finite(const GroupMeasure& zeta, const FiniteAction& action, const Observable& f) {
  check_table(action, f);
  const auto& fv = f.values();
  std::vector<double> out(action.size(), 0.0);
  if (!zeta.is_radial()) {
    for (const auto& [g, w] : zeta.atoms()) {
      const auto p = action.perm_of(g);
      for (std::size_t y = 0; y < out.size(); ++y) out[p[y]] += w * fv[y];
    }
    return out;
  }
  const QuotientSpheres q(action, zeta.max_length());
  const auto sizes = ConeAutomaton(zeta.spec()).sphere_sizes(zeta.max_length());
  for (std::size_t n = 0; n < zeta.sphere_mass().size(); ++n) {
    if (zeta.sphere_mass()[n] == 0) continue;
    const double scale = to_double(zeta.sphere_mass()[n]) / sizes[n].convert_to<double>();
    for (std::size_t i = 0; i < q.images.size(); ++i) {
      if (q.counts[n][i] == 0) continue;
      const double c = scale * q.counts[n][i].convert_to<double>();
      const auto& p = q.images[i];
      for (std::size_t y = 0; y < out.size(); ++y) out[p[y]] += c * fv[y];
    }
  }
  return out;
}

std::vector<Rational> apply_finite_exact(const GroupMeasure& zeta, const FiniteAction& action,
                                         const std::vector<Rational>& f) {
  if (f.size() != action.size()) fail(ErrorKind::kConfig, "observable does not match the finite space");
  if (!zeta.is_radial()) fail(ErrorKind::kCapability, "exact averages need a radial measure");
  const QuotientSpheres q(action, zeta.max_length());
  const auto sizes = ConeAutomaton(zeta.spec()).sphere_sizes(zeta.max_length());
  std::vector<Rational> out(action.size(), 0);
  for (std::size_t n = 0; n < zeta.sphere_mass().size(); ++n) {
    if (zeta.sphere_mass()[n] == 0) continue;
    for (std::size_t i = 0; i < q.images.size(); ++i) {
      if (q.counts[n][i] == 0) continue;
      const Rational c = zeta.sphere_mass()[n] * Rational(q.counts[n][i], sizes[n]);
      const auto& p = q.images[i];
      for (std::size_t y = 0; y < out.size(); ++y) out[p[y]] += c * f[y];
    }
  }
  return out;
}

double apply(const GroupMeasure& zeta, const PmpAction& action, const Observable& f, const Point& x) {
  if (!(zeta.spec() == action.spec())) fail(ErrorKind::kConfig, "measure and action live on different groups");
  if (action.is_finite()) {
    if (!std::holds_alternative<std::size_t>(x)) fail(ErrorKind::kConfig, "finite action needs an index point");
    const std::size_t i = std::get<std::size_t>(x);
    if (i >= action.finite().size()) fail(ErrorKind::kConfig, "point outside the finite space");
    return apply_finite(zeta, action.finite(), f)[i];
  }
  if (!std::holds_alternative<double>(x)) fail(ErrorKind::kConfig, "circle action needs a real point");
  if (f.kind() == Observable::Kind::kTable) fail(ErrorKind::kConfig, "table observable on a circle action");
  const double u = std::get<double>(x);
  const CircleAction& c = action.circle();
  if (zeta.is_radial() && f.kind() == Observable::Kind::kTrig && !f.is_absolute()) {
    // f(x - theta) = c0 + sum amp Re[exp(i(2 pi k x + phase)) exp(-2 pi i k theta)]
    double total = f.constant();
    for (const auto& t : f.terms()) {
      const auto chars = spherical_characters(c, t.k, zeta.max_length());
      std::complex<double> s = 0;
      for (std::size_t n = 0; n < zeta.sphere_mass().size(); ++n) {
        if (zeta.sphere_mass()[n] != 0) s += to_double(zeta.sphere_mass()[n]) * chars[n];
      }
      total += t.amplitude * std::real(std::polar(1.0, kTwoPi * t.k * u + t.phase) * s);
    }
    return total;
  }
  check_enumerable(zeta);
  double total = 0;
  zeta.for_each([&](const Element& g, double w) { total += w * f.eval(c.act(c.spec().invert(g), u)); });
  return total;
}

double maximal_function(const std::vector<GroupMeasure>& family, const PmpAction& action, const Observable& f,
                        const Point& x) {
  if (family.empty()) fail(ErrorKind::kConfig, "maximal function over an empty family");
  const Observable af = f.abs();
  double m = -1e300;
  for (const auto& z : family) m = std::max(m, apply(z, action, af, x));
  return m;
}

std::vector<double> maximal_function_finite(const std::vector<GroupMeasure>& family, const FiniteAction& action,
                                            const Observable& f) {
  if (family.empty()) fail(ErrorKind::kConfig, "maximal function over an empty family");
  const Observable af = f.abs();
  std::vector<double> m(action.size(), -1e300);
  for (const auto& z : family) {
    const auto v = apply_finite(z, action, af);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::max(m[i], v[i]);
  }
  return m;
}

double maximal_norm_ratio(const std::vector<GroupMeasure>& family, const FiniteAction& action, const Observable& f) {
  const auto m = maximal_function_finite(family, action, f);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < m.size(); ++i) num += m[i] * m[i], den += f.values()[i] * f.values()[i];
  if (den == 0) fail(ErrorKind::kPrecondition, "norm ratio of the zero function");
  return std::sqrt(num / den);
}

bool ConvergenceReport::pass() const {
  return std::all_of(points.begin(), points.end(), [](const PointSeries& p) { return p.pass; });
}

ConvergenceReport convergence_report(const std::vector<GroupMeasure>& family, const PmpAction& action,
                                     const Observable& f, const std::vector<Point>& points, const Observable& target,
                                     double theta) {
  ConvergenceReport rep;
  rep.theta = theta;
  for (const auto& x : points) rep.points.push_back(PointSeries{x, {}, {}, 0, 0, false});
  for (const auto& z : family) {
    std::vector<double> vals;
    if (action.is_finite()) {
      const auto all = apply_finite(z, action.finite(), f);
      for (const auto& x : points) {
        if (!std::holds_alternative<std::size_t>(x) || std::get<std::size_t>(x) >= all.size()) {
          fail(ErrorKind::kConfig, "point outside the finite space");
        }
        vals.push_back(all[std::get<std::size_t>(x)]);
      }
    } else {
      for (const auto& x : points) vals.push_back(apply(z, action, f, x));
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
      rep.points[i].value.push_back(vals[i]);
      rep.points[i].deviation.push_back(std::abs(vals[i] - target.eval(points[i])));
    }
  }
  const std::size_t len = family.size();
  const std::size_t third = std::max<std::size_t>(1, len / 3);
  for (auto& p : rep.points) {
    if (len == 0) continue;
    p.first_third_max = *std::max_element(p.deviation.begin(), p.deviation.begin() + static_cast<long>(third));
    p.last_third_max = *std::max_element(p.deviation.end() - static_cast<long>(third), p.deviation.end());
    p.pass = p.last_third_max <= theta * p.first_third_max || p.last_third_max < 1e-12;
  }
  return rep;
}

}  // namespace hyg
