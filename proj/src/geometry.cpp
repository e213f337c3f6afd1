#include "geometry.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <thread>

#include "errors.hpp"

namespace hyg {

namespace {

void require_tree(const GroupSpec& spec) {
  if (!spec.tree_like()) fail(ErrorKind::kCapability, "exact horofunctions need a tree-like spec, got " + spec.describe());
}

void validate_ray(const GroupSpec& spec, const std::vector<Letter>& prefix, const std::vector<Letter>& period) {
  const ConeAutomaton aut(spec);
  int s = aut.run_from(aut.start(), prefix);
  if (s < 0) fail(ErrorKind::kMalformedInput, "ray prefix is not a normal form");
  if (period.empty()) return;
  std::vector<int> seen;
  for (int rep = 0; rep <= aut.state_count() + 1; ++rep) {
    for (Letter l : period) {
      if (aut.spec().info(l).factor == spec.central_factor()) fail(ErrorKind::kMalformedInput, "ray uses a central letter");
      s = aut.run_from(s, std::span<const Letter>(&l, 1));
      if (s < 0) fail(ErrorKind::kMalformedInput, "periodic ray is not a normal form");
    }
    if (std::find(seen.begin(), seen.end(), s) != seen.end()) return;
    seen.push_back(s);
  }
}

}  // namespace

BoundaryRay BoundaryRay::periodic(const GroupSpec& spec, std::vector<Letter> prefix, std::vector<Letter> period) {
  if (period.empty()) fail(ErrorKind::kMalformedInput, "periodic ray needs a nonempty period");
  validate_ray(spec, prefix, period);
  BoundaryRay r;
  r.periodic_ = true;
  r.prefix_ = std::move(prefix);
  r.period_ = std::move(period);
  r.canonicalize();
  return r;
}

BoundaryRay BoundaryRay::sampled(const GroupSpec& spec, std::vector<Letter> prefix, std::uint64_t seed) {
  validate_ray(spec, prefix, {});
  for (Letter l : prefix) {
    if (spec.info(l).factor == spec.central_factor()) fail(ErrorKind::kMalformedInput, "ray uses a central letter");
  }
  BoundaryRay r;
  r.periodic_ = false;
  r.prefix_ = std::move(prefix);
  r.seed_ = seed;
  return r;
}

BoundaryRay BoundaryRay::sampled_trusted(std::vector<Letter> prefix, std::uint64_t seed) {
  BoundaryRay r;
  r.periodic_ = false;
  r.prefix_ = std::move(prefix);
  r.seed_ = seed;
  return r;
}

void BoundaryRay::canonicalize() {
  // primitive root of the period
  const std::size_t n = period_.size();
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = period_[i] == period_[i - d];
    if (ok) {
      period_.resize(d);
      break;
    }
  }
  while (!prefix_.empty() && prefix_.back() == period_.back()) {
    prefix_.pop_back();
    std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
  }
}

Letter BoundaryRay::at(std::size_t i) const {
  if (i < prefix_.size()) return prefix_[i];
  if (!periodic_) {
    fail(ErrorKind::kHorizon, "query at depth " + std::to_string(i + 1) + " beyond sampled horizon " +
                                  std::to_string(prefix_.size()));
  }
  return period_[(i - prefix_.size()) % period_.size()];
}

Element BoundaryRay::head(std::size_t n) const {
  Element x;
  x.letters.reserve(n);
  for (std::size_t i = 0; i < n; ++i) x.letters.push_back(at(i));
  return x;
}

BoundaryRay BoundaryRay::translate(const GroupSpec& spec, const Element& g) const {
  Element gb;
  for (Letter l : g.letters) {
    if (spec.info(l).factor != spec.central_factor()) gb.letters.push_back(l);
  }
  gb = spec.reduce(gb.letters);
  const std::size_t slack = gb.size() + static_cast<std::size_t>(spec.max_syllable()) + 1;
  if (periodic_) {
    std::vector<Letter> u = prefix_;
    while (u.size() < slack + 2 * period_.size()) u.insert(u.end(), period_.begin(), period_.end());
    std::vector<Letter> raw = gb.letters;
    raw.insert(raw.end(), u.begin(), u.end());
    return periodic(spec, spec.reduce(raw).letters, period_);
  }
  if (prefix_.size() < slack) fail(ErrorKind::kHorizon, "sampled ray too short to translate");
  std::vector<Letter> raw = gb.letters;
  raw.insert(raw.end(), prefix_.begin(), prefix_.end());
  return sampled_trusted(spec.reduce(raw).letters, seed_);
}

std::string BoundaryRay::format(const GroupSpec& spec) const {
  std::string out = prefix_.empty() ? std::string() : spec.format(Element{prefix_});
  if (periodic_) {
    out += "(" + spec.format(Element{period_}) + ")^inf";
  } else {
    out += "...";
  }
  return out;
}

BoundaryRay parse_ray(const GroupSpec& spec, const std::string& text) {
  const auto inf = text.find("^inf");
  if (inf == std::string::npos) fail(ErrorKind::kMalformedInput, "ray must end with ^inf: " + text);
  std::string body = text.substr(0, inf);
  std::string pre, per;
  const auto open = body.rfind('(');
  if (open != std::string::npos) {
    if (body.back() != ')') fail(ErrorKind::kMalformedInput, "bad ray: " + text);
    pre = body.substr(0, open);
    per = body.substr(open + 1, body.size() - open - 2);
  } else {
    // "ab^inf" means a b^inf: the last letter token is the period
    std::size_t k = body.size();
    while (k > 0 && !std::isalpha(static_cast<unsigned char>(body[k - 1]))) --k;
    if (k == 0) fail(ErrorKind::kMalformedInput, "bad ray: " + text);
    pre = body.substr(0, k - 1);
    per = body.substr(k - 1);
  }
  const Element p = spec.parse(pre);
  // the period is a raw letter sequence; parse token by token so it stays unreduced
  std::vector<Letter> period;
  std::size_t i = 0;
  while (i < per.size()) {
    if (std::isspace(static_cast<unsigned char>(per[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (j < per.size() && per[j] == '^') {
      ++j;
      while (j < per.size() && (std::isdigit(static_cast<unsigned char>(per[j])) || per[j] == '-')) ++j;
    }
    const Element one = spec.parse(per.substr(i, j - i));
    period.insert(period.end(), one.letters.begin(), one.letters.end());
    i = j;
  }
  return BoundaryRay::periodic(spec, p.letters, period);
}

HalfInt gromov_product(const GroupSpec& spec, const Element& x, const Element& y, const Element& w) {
  return HalfInt{static_cast<long long>(spec.distance(x, w)) + spec.distance(y, w) - spec.distance(x, y)};
}

DeltaCertificate estimate_delta(const GroupSpec& spec, int radius, std::uint64_t budget, std::uint64_t seed,
                                int workers) {
  if (radius < 0) fail(ErrorKind::kPrecondition, "negative radius");
  const ConeAutomaton aut(spec);
  std::vector<Element> ball;
  for (int n = 0; n <= radius; ++n) for_each_in_sphere(aut, n, [&](const Element& x) { ball.push_back(x); });
  const std::size_t b = ball.size();
  DeltaCertificate cert;
  cert.radius = radius;
  const long double quads = static_cast<long double>(b) * b * b * b;
  if (quads <= static_cast<long double>(budget) && b <= 4096) {
    std::vector<std::int16_t> dist(b * b);
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < b; ++j) dist[i * b + j] = static_cast<std::int16_t>(spec.distance(ball[i], ball[j]));
    workers = std::max(1, workers);
    struct Best {
      int twice = -1000000;
      std::size_t x = 0, y = 0, z = 0, w = 0;
    };
    std::vector<Best> best(static_cast<std::size_t>(workers));
    auto job = [&](int id) {
      std::vector<std::int16_t> g(b * b);
      Best& bt = best[static_cast<std::size_t>(id)];
      for (std::size_t w = static_cast<std::size_t>(id); w < b; w += static_cast<std::size_t>(workers)) {
        for (std::size_t x = 0; x < b; ++x)
          for (std::size_t y = 0; y < b; ++y)
            g[x * b + y] = static_cast<std::int16_t>(dist[x * b + w] + dist[y * b + w] - dist[x * b + y]);
        for (std::size_t x = 0; x < b; ++x) {
          const std::int16_t* gx = &g[x * b];
          for (std::size_t y = x; y < b; ++y) {
            const std::int16_t* gy = &g[y * b];
            const int gxy = gx[y];
            int m = -1000000;
            for (std::size_t z = 0; z < b; ++z) m = std::max(m, static_cast<int>(std::min(gx[z], gy[z])));
            if (m - gxy > bt.twice) {
              bt.twice = m - gxy;
              bt.x = x;
              bt.y = y;
              bt.w = w;
              for (std::size_t z = 0; z < b; ++z)
                if (std::min(gx[z], gy[z]) == m) {
                  bt.z = z;
                  break;
                }
            }
          }
        }
      }
    };
    std::vector<std::thread> threads;
    for (int i = 1; i < workers; ++i) threads.emplace_back(job, i);
    job(0);
    for (auto& t : threads) t.join();
    Best top = best[0];
    for (const Best& bt : best)
      if (bt.twice > top.twice) top = bt;
    cert.delta_hat = top.twice / 2.0;
    cert.count = static_cast<std::uint64_t>(b) * b * b * b;
    cert.exhaustive = true;
    cert.witness = {ball[top.x], ball[top.y], ball[top.z], ball[top.w]};
    return cert;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, b - 1);
  long long top = -1000000;
  for (std::uint64_t i = 0; i < budget; ++i) {
    const Element& x = ball[pick(rng)];
    const Element& y = ball[pick(rng)];
    const Element& z = ball[pick(rng)];
    const Element& w = ball[pick(rng)];
    const long long v = std::min(gromov_product(spec, x, z, w).twice, gromov_product(spec, y, z, w).twice) -
                        gromov_product(spec, x, y, w).twice;
    if (v > top) {
      top = v;
      cert.witness = {x, y, z, w};
    }
  }
  cert.delta_hat = static_cast<double>(top) / 2.0;
  cert.count = budget;
  cert.exhaustive = false;
  return cert;
}

std::size_t horofunction_depth(const GroupSpec& spec, const Element& g) {
  return g.size() + static_cast<std::size_t>(spec.max_syllable()) + 1;
}

int horofunction(const GroupSpec& spec, const BoundaryRay& xi, const Element& g) {
  require_tree(spec);
  const std::size_t n = horofunction_depth(spec, g);
  const Element x = xi.head(n);
  return spec.distance(x, g) - static_cast<int>(n);
}

HalfInt ray_gromov_product(const GroupSpec& spec, const BoundaryRay& xi, const Element& g) {
  return HalfInt{static_cast<long long>(g.size()) - horofunction(spec, xi, g)};
}

ApproxValue horofunction_approx(const GroupSpec& spec, const std::vector<Element>& seq, const Element& g,
                                double delta_hat) {
  if (seq.empty()) fail(ErrorKind::kInsufficientDepth, "empty approximating sequence");
  const Element* deepest = &seq.front();
  for (const Element& x : seq)
    if (x.size() > deepest->size()) deepest = &x;
  if (deepest->size() <= g.size()) {
    fail(ErrorKind::kInsufficientDepth, "deepest sequence element is not longer than |g|");
  }
  return ApproxValue{static_cast<double>(spec.distance(*deepest, g) - spec.word_length(*deepest)), 4.0 * delta_hat};
}

BoundaryRay small_horofunction_direction(const GroupSpec& spec, const Element& g) {
  require_tree(spec);
  const ConeAutomaton aut(spec);
  const std::size_t n = g.size();
  int best_abs = 0;
  std::optional<BoundaryRay> best;
  // candidates ordered by distance of the branch point from |g|/2
  std::vector<std::size_t> cuts;
  for (std::size_t c = 0; c <= n; ++c) cuts.push_back(c);
  std::stable_sort(cuts.begin(), cuts.end(), [n](std::size_t a, std::size_t b) {
    const auto da = std::abs(2 * static_cast<long>(a) - static_cast<long>(n) - 1);
    const auto db = std::abs(2 * static_cast<long>(b) - static_cast<long>(n) - 1);
    return da < db;
  });
  for (std::size_t c : cuts) {
    std::vector<Letter> pre(g.letters.begin(), g.letters.begin() + static_cast<long>(c));
    const int s0 = aut.run_from(aut.start(), pre);
    for (int x = 0; x < spec.alphabet_size(); ++x) {
      if (c < n && x == g.letters[c]) continue;
      int s = aut.next(s0, static_cast<Letter>(x));
      if (s < 0) continue;
      std::vector<Letter> path = pre;
      path.push_back(static_cast<Letter>(x));
      std::vector<int> visited{s};
      std::vector<std::size_t> pos{path.size()};
      // greedy walk until a state repeats; the loop becomes the period
      while (true) {
        int l = 0;
        while (aut.next(s, static_cast<Letter>(l)) < 0) ++l;
        s = aut.next(s, static_cast<Letter>(l));
        path.push_back(static_cast<Letter>(l));
        const auto it = std::find(visited.begin(), visited.end(), s);
        if (it != visited.end()) {
          const std::size_t start = pos[static_cast<std::size_t>(it - visited.begin())];
          std::vector<Letter> prefix(path.begin(), path.begin() + static_cast<long>(start));
          std::vector<Letter> period(path.begin() + static_cast<long>(start), path.end());
          BoundaryRay ray = BoundaryRay::periodic(spec, prefix, period);
          const int h = std::abs(horofunction(spec, ray, g));
          if (!best || h < best_abs) {
            best_abs = h;
            best = ray;
          }
          break;
        }
        visited.push_back(s);
        pos.push_back(path.size());
      }
    }
    if (best && best_abs <= 1 && (c == (n + 1) / 2 || c == n / 2)) return *best;
  }
  if (!best) fail(ErrorKind::kNumerical, "no boundary direction found");
  return *best;
}

}  // namespace hyg
