#include "actions.hpp"

#include <cmath>
#include <numeric>

#include "errors.hpp"

namespace hyg {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<std::size_t> compose(const std::vector<std::size_t>& p, const std::vector<std::size_t>& q) {
  // (p o q)(x) = p(q(x))
  std::vector<std::size_t> r(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) r[i] = p[q[i]];
  return r;
}

std::vector<std::size_t> inverse(const std::vector<std::size_t>& p) {
  std::vector<std::size_t> r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = i;
  return r;
}

std::vector<std::size_t> identity(std::size_t n) {
  std::vector<std::size_t> r(n);
  std::iota(r.begin(), r.end(), 0);
  return r;
}

double wrap(double x) {
  x -= std::floor(x);
  return x >= 1.0 ? 0.0 : x;
}

}  // namespace

FiniteAction::FiniteAction(const GroupSpec& spec, std::vector<std::vector<std::size_t>> perms, std::string name)
    : spec_(spec), name_(std::move(name)) {
  if (static_cast<int>(perms.size()) != spec.factor_count()) {
    fail(ErrorKind::kConfig, "action needs one image per generator (" + std::to_string(spec.factor_count()) + ")");
  }
  size_ = perms.empty() ? 0 : perms[0].size();
  if (size_ == 0) fail(ErrorKind::kConfig, "finite action on an empty space");
  for (auto& p : perms) {
    if (p.size() != size_) fail(ErrorKind::kConfig, "permutations of different degrees");
    std::vector<bool> hit(size_, false);
    for (std::size_t v : p) {
      if (v >= size_ || hit[v]) fail(ErrorKind::kConfig, "generator image is not a bijection");
      hit[v] = true;
    }
  }
  // relations: factor orders, and the central factor commutes with everything
  for (int f = 0; f < spec.factor_count(); ++f) {
    const int order = spec.factor_order(f);
    if (order > 0) {
      auto acc = identity(size_);
      for (int i = 0; i < order; ++i) acc = compose(perms[static_cast<std::size_t>(f)], acc);
      if (acc != identity(size_)) {
        fail(ErrorKind::kConfig, "generator image violates the torsion relation of order " + std::to_string(order));
      }
    }
  }
  if (spec.central_factor() >= 0) {
    const auto& z = perms[static_cast<std::size_t>(spec.central_factor())];
    for (const auto& p : perms) {
      if (compose(z, p) != compose(p, z)) fail(ErrorKind::kConfig, "central generator image does not commute");
    }
  }
  letter_perms_.resize(static_cast<std::size_t>(spec.alphabet_size()));
  for (int l = 0; l < spec.alphabet_size(); ++l) {
    const LetterInfo& li = spec.info(static_cast<Letter>(l));
    const auto& p = perms[static_cast<std::size_t>(li.factor)];
    letter_perms_[static_cast<std::size_t>(l)] = li.sign > 0 ? p : inverse(p);
  }
}

FiniteAction FiniteAction::cyclic(const GroupSpec& spec, int n, const std::vector<int>& images) {
  if (n < 1) fail(ErrorKind::kConfig, "cyclic quotient needs n >= 1");
  if (static_cast<int>(images.size()) != spec.factor_count()) {
    fail(ErrorKind::kConfig, "cyclic quotient needs one image per generator (" + std::to_string(spec.factor_count()) + ")");
  }
  std::vector<std::vector<std::size_t>> perms;
  for (int img : images) {
    std::vector<std::size_t> p(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) p[static_cast<std::size_t>(x)] = static_cast<std::size_t>(((x + img) % n + n) % n);
    perms.push_back(std::move(p));
  }
  return FiniteAction(spec, std::move(perms), "Z/" + std::to_string(n));
}

FiniteAction FiniteAction::parity(const GroupSpec& spec) {
  FiniteAction a = cyclic(spec, 2, std::vector<int>(static_cast<std::size_t>(spec.factor_count()), 1));
  a.name_ = "parity";
  return a;
}

std::size_t FiniteAction::act(const Element& g, std::size_t x) const {
  if (x >= size_) fail(ErrorKind::kConfig, "point outside the finite space");
  for (auto it = g.letters.rbegin(); it != g.letters.rend(); ++it) x = letter_perms_[*it][x];
  return x;
}

std::vector<std::size_t> FiniteAction::perm_of(const Element& g) const {
  auto p = identity(size_);
  for (auto it = g.letters.rbegin(); it != g.letters.rend(); ++it) p = compose(letter_perms_[*it], p);
  return p;
}

std::vector<std::size_t> FiniteAction::orbit_labels() const {
  std::vector<std::size_t> parent = identity(size_);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& p : letter_perms_)
    for (std::size_t x = 0; x < size_; ++x) parent[find(x)] = find(p[x]);
  std::vector<std::size_t> out(size_);
  for (std::size_t x = 0; x < size_; ++x) out[x] = find(x);
  return out;
}

CircleAction::CircleAction(const GroupSpec& spec, std::vector<double> angles, bool ergodic)
    : spec_(spec), angles_(std::move(angles)), ergodic_(ergodic) {
  if (spec.kind() != GroupKind::kFree) fail(ErrorKind::kConfig, "circle rotations are defined for free groups");
  if (static_cast<int>(angles_.size()) != spec.rank()) {
    fail(ErrorKind::kConfig, "circle action needs one angle per generator (" + std::to_string(spec.rank()) + ")");
  }
}

CircleAction CircleAction::circle_pair(const GroupSpec& spec, bool ergodic) {
  if (spec.kind() != GroupKind::kFree || spec.rank() != 2) fail(ErrorKind::kConfig, "circle pair needs F_2");
  return CircleAction(spec, {std::sqrt(2.0) - 1.0, std::sqrt(3.0) - 1.0}, ergodic);
}

double CircleAction::letter_rotation(Letter l) const {
  const LetterInfo& li = spec_.info(l);
  return li.sign * angles_[static_cast<std::size_t>(li.factor)];
}

double CircleAction::rotation(const Element& g) const {
  // abelianization first, then one multiplication per generator
  std::vector<long long> exps(angles_.size(), 0);
  for (Letter l : g.letters) exps[static_cast<std::size_t>(spec_.info(l).factor)] += spec_.info(l).sign;
  double r = 0;
  for (std::size_t i = 0; i < exps.size(); ++i) r += static_cast<double>(exps[i]) * angles_[i];
  return r;
}

double CircleAction::act(const Element& g, double x) const { return wrap(x + rotation(g)); }

const GroupSpec& PmpAction::spec() const { return is_finite() ? finite().spec() : circle().spec(); }

Point PmpAction::act(const Element& g, const Point& x) const {
  if (is_finite()) {
    if (!std::holds_alternative<std::size_t>(x)) fail(ErrorKind::kConfig, "finite action needs an index point");
    return finite().act(g, std::get<std::size_t>(x));
  }
  if (!std::holds_alternative<double>(x)) fail(ErrorKind::kConfig, "circle action needs a real point");
  return circle().act(g, std::get<double>(x));
}

Observable Observable::table(std::vector<double> values, std::string name) {
  Observable o;
  o.kind_ = Kind::kTable;
  o.values_ = std::move(values);
  o.name_ = std::move(name);
  return o;
}

Observable Observable::trig(double constant, std::vector<TrigTerm> terms, std::string name) {
  Observable o;
  o.kind_ = Kind::kTrig;
  o.constant_ = constant;
  o.terms_ = std::move(terms);
  o.name_ = std::move(name);
  return o;
}

Observable Observable::interval(double lo, double hi, std::string name) {
  if (!(0 <= lo && lo <= hi && hi <= 1)) fail(ErrorKind::kConfig, "interval must satisfy 0 <= lo <= hi <= 1");
  Observable o;
  o.kind_ = Kind::kInterval;
  o.lo_ = lo;
  o.hi_ = hi;
  o.name_ = std::move(name);
  return o;
}

double Observable::sup_bound() const {
  switch (kind_) {
    case Kind::kTable: {
      double m = 0;
      for (double v : values_) m = std::max(m, std::abs(v));
      return m;
    }
    case Kind::kTrig: {
      double m = std::abs(constant_);
      for (const auto& t : terms_) m += std::abs(t.amplitude);
      return m;
    }
    case Kind::kInterval: return 1.0;
  }
  return 0;
}

double Observable::integral() const {
  switch (kind_) {
    case Kind::kTable: fail(ErrorKind::kConfig, "table observables live on finite spaces");
    case Kind::kTrig:
      if (absolute_) fail(ErrorKind::kCapability, "no closed-form integral for |trig|");
      return constant_;
    case Kind::kInterval:
      if (absolute_ && constant_ != 0) fail(ErrorKind::kCapability, "no closed-form integral for |interval - c|");
      return hi_ - lo_ + constant_;
  }
  return 0;
}

double Observable::eval(const Point& x) const {
  double v = 0;
  if (kind_ == Kind::kTable) {
    if (!std::holds_alternative<std::size_t>(x)) fail(ErrorKind::kConfig, "table observable needs an index point");
    const std::size_t i = std::get<std::size_t>(x);
    if (i >= values_.size()) fail(ErrorKind::kConfig, "observable table shorter than the space");
    v = values_[i];
  } else {
    if (!std::holds_alternative<double>(x)) fail(ErrorKind::kConfig, "circle observable needs a real point");
    const double u = std::get<double>(x);
    if (kind_ == Kind::kTrig) {
      v = constant_;
      for (const auto& t : terms_) v += t.amplitude * std::cos(kTwoPi * t.k * u + t.phase);
    } else {
      v = (u >= lo_ && u < hi_ ? 1.0 : 0.0) + constant_;
    }
  }
  return absolute_ ? std::abs(v) : v;
}

Observable Observable::abs() const {
  Observable o = *this;
  if (kind_ == Kind::kTable) {
    for (double& v : o.values_) v = std::abs(v);
  } else {
    o.absolute_ = true;
  }
  o.name_ = "|" + name_ + "|";
  return o;
}

Observable Observable::minus_constant(double c) const {
  Observable o = *this;
  if (absolute_) fail(ErrorKind::kCapability, "cannot shift an absolute-value observable");
  if (kind_ == Kind::kTable) {
    for (double& v : o.values_) v -= c;
  } else {
    o.constant_ -= c;
  }
  return o;
}

Observable conditional_expectation(const PmpAction& action, const Observable& f) {
  if (action.is_finite()) {
    const FiniteAction& a = action.finite();
    if (f.kind() != Observable::Kind::kTable || f.values().size() != a.size()) {
      fail(ErrorKind::kConfig, "observable does not match the finite space");
    }
    const auto labels = a.orbit_labels();
    std::vector<double> sum(a.size(), 0.0), cnt(a.size(), 0.0);
    for (std::size_t x = 0; x < a.size(); ++x) {
      sum[labels[x]] += f.values()[x];
      cnt[labels[x]] += 1;
    }
    std::vector<double> out(a.size());
    for (std::size_t x = 0; x < a.size(); ++x) out[x] = sum[labels[x]] / cnt[labels[x]];
    return Observable::table(std::move(out), "E[" + f.name() + "]");
  }
  if (!action.circle().declared_ergodic()) {
    fail(ErrorKind::kCapability, "circle action not declared ergodic; E[f|G] is not available");
  }
  if (f.kind() == Observable::Kind::kTable) fail(ErrorKind::kConfig, "table observable on a circle action");
  return Observable::trig(f.integral(), {}, "E[" + f.name() + "]");
}

}  // namespace hyg
