#include "group.hpp"

#include <cctype>
#include <regex>
#include <sstream>

#include "errors.hpp"

namespace hyg {

namespace {

long long mod(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

void GroupSpec::add_factor(int order, const std::string& name, bool central) {
  const int f = static_cast<int>(factor_orders_.size());
  factor_orders_.push_back(order);
  factor_names_.push_back(name);
  if (central) central_ = f;
  std::array<int, 2> ids{-1, -1};
  ids[0] = static_cast<int>(letters_.size());
  letters_.push_back(LetterInfo{f, 1, static_cast<Letter>(ids[0]), name});
  if (order != 2) {
    ids[1] = static_cast<int>(letters_.size());
    std::string inv;
    if (order == 0) {
      inv = std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])))) + name.substr(1);
    } else {
      inv = name + "^" + std::to_string(order - 1);
    }
    letters_.push_back(LetterInfo{f, -1, static_cast<Letter>(ids[0]), inv});
    letters_[static_cast<std::size_t>(ids[0])].inverse = static_cast<Letter>(ids[1]);
  }
  factor_letters_.push_back(ids);
  if (static_cast<int>(letters_.size()) > kMaxAlphabet) fail(ErrorKind::kMalformedInput, "alphabet exceeds 64 letters");
}

GroupSpec GroupSpec::free_group(int rank) {
  if (rank < 2) fail(ErrorKind::kPrecondition, "free group of rank < 2 is elementary");
  if (rank > 25) fail(ErrorKind::kMalformedInput, "free group rank above 25 is not supported");
  GroupSpec g;
  g.kind_ = GroupKind::kFree;
  g.rank_ = rank;
  for (int i = 0; i < rank; ++i) g.add_factor(0, std::string(1, static_cast<char>('a' + i)), false);
  return g;
}

GroupSpec GroupSpec::free_product(int p, int q) {
  if (p < 2 || q < 2) fail(ErrorKind::kMalformedInput, "free product orders must be >= 2");
  if (p == 2 && q == 2) fail(ErrorKind::kPrecondition, "Z_2 * Z_2 is elementary");
  if (p > 32 || q > 32) fail(ErrorKind::kMalformedInput, "free product orders above 32 are not supported");
  GroupSpec g;
  g.kind_ = GroupKind::kFreeProduct;
  g.p_ = p;
  g.q_ = q;
  g.add_factor(p, "s", false);
  g.add_factor(q, "t", false);
  return g;
}

GroupSpec GroupSpec::product_with_finite(int rank, int m) {
  if (rank < 2) fail(ErrorKind::kPrecondition, "base free group of rank < 2 is elementary");
  if (m < 2) fail(ErrorKind::kMalformedInput, "finite order must be >= 2");
  if (m > 32) fail(ErrorKind::kMalformedInput, "finite order above 32 is not supported");
  GroupSpec g = free_group(rank);
  g.kind_ = GroupKind::kProductWithFinite;
  g.m_ = m;
  g.add_factor(m, "z", true);
  return g;
}

int GroupSpec::letter_for(int factor, int sign) const {
  const auto& ids = factor_letters_.at(static_cast<std::size_t>(factor));
  if (sign > 0) return ids[0];
  if (factor_orders_[static_cast<std::size_t>(factor)] == 2) return ids[0];
  return ids[1];
}

int GroupSpec::max_syllable() const {
  int best = 1;
  for (int f = 0; f < factor_count(); ++f) {
    if (f == central_) continue;
    const int o = factor_orders_[static_cast<std::size_t>(f)];
    if (o > 0) best = std::max(best, o / 2);
  }
  return best;
}

void GroupSpec::emit_syllable(int factor, long long e, std::vector<Letter>& out) const {
  const int order = factor_orders_[static_cast<std::size_t>(factor)];
  int sign = 1;
  long long count = 0;
  if (order == 0) {
    sign = e > 0 ? 1 : -1;
    count = e > 0 ? e : -e;
  } else {
    e = mod(e, order);
    if (e * 2 <= order) {
      count = e;
    } else {
      sign = -1;
      count = order - e;
    }
  }
  const Letter l = static_cast<Letter>(letter_for(factor, sign));
  for (long long i = 0; i < count; ++i) out.push_back(l);
}

Element GroupSpec::reduce(std::span<const Letter> raw) const {
  struct Syl {
    int factor;
    long long exp;
  };
  std::vector<Syl> stack;
  long long central_exp = 0;
  for (Letter l : raw) {
    if (l >= letters_.size()) fail(ErrorKind::kMalformedInput, "unknown letter code " + std::to_string(l));
    const LetterInfo& li = letters_[l];
    if (li.factor == central_) {
      central_exp = mod(central_exp + li.sign, m_);
      continue;
    }
    const int order = factor_orders_[static_cast<std::size_t>(li.factor)];
    if (!stack.empty() && stack.back().factor == li.factor) {
      long long e = stack.back().exp + li.sign;
      if (order > 0) e = mod(e, order);
      if (e == 0) {
        stack.pop_back();
      } else {
        stack.back().exp = e;
      }
    } else {
      long long e = li.sign;
      if (order > 0) e = mod(e, order);
      stack.push_back({li.factor, e});
    }
  }
  Element out;
  out.letters.reserve(raw.size());
  for (const Syl& s : stack) emit_syllable(s.factor, s.exp, out.letters);
  if (central_ >= 0 && central_exp != 0) emit_syllable(central_, central_exp, out.letters);
  return out;
}

Element GroupSpec::multiply(const Element& x, const Element& y) const {
  if (central_ < 0) {
    // Free products of cyclic groups: only the junction can change.
    std::vector<Letter> raw;
    raw.reserve(x.size() + y.size());
    raw.insert(raw.end(), x.letters.begin(), x.letters.end());
    raw.insert(raw.end(), y.letters.begin(), y.letters.end());
    return reduce(raw);
  }
  std::vector<Letter> raw(x.letters);
  raw.insert(raw.end(), y.letters.begin(), y.letters.end());
  return reduce(raw);
}

Element GroupSpec::invert(const Element& x) const {
  std::vector<Letter> raw(x.letters.rbegin(), x.letters.rend());
  for (Letter& l : raw) l = letters_[l].inverse;
  return reduce(raw);
}

Element GroupSpec::parse(const std::string& text) const {
  std::vector<Letter> raw;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '*' || text[i] == '.')) ++i;
  };
  skip();
  if (text.substr(i) == "e" || text.substr(i).empty()) return Element{};
  while (i < text.size()) {
    const char c = text[i];
    if (!std::isalpha(static_cast<unsigned char>(c))) fail(ErrorKind::kMalformedInput, "bad character in word: " + text);
    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    int factor = -1;
    for (int f = 0; f < factor_count(); ++f) {
      if (factor_names_[static_cast<std::size_t>(f)] == std::string(1, lower)) factor = f;
    }
    if (factor < 0) fail(ErrorKind::kMalformedInput, std::string("unknown letter '") + c + "' in " + describe());
    long long power = std::isupper(static_cast<unsigned char>(c)) ? -1 : 1;
    ++i;
    if (i < text.size() && text[i] == '^') {
      ++i;
      std::size_t used = 0;
      long long e = 0;
      try {
        e = std::stoll(text.substr(i), &used);
      } catch (const std::exception&) {
        fail(ErrorKind::kMalformedInput, "bad exponent in word: " + text);
      }
      i += used;
      power *= e;
    }
    const long long count = power < 0 ? -power : power;
    const Letter l = static_cast<Letter>(letter_for(factor, power < 0 ? -1 : 1));
    for (long long k = 0; k < count; ++k) raw.push_back(l);
    skip();
  }
  return reduce(raw);
}

std::string GroupSpec::format(const Element& x) const {
  if (x.empty()) return "e";
  std::string out;
  for (Letter l : x.letters) {
    const std::string& n = letters_[l].name;
    // Powers like "t^2" need a separator so the word parses back.
    if (!out.empty() && (n.size() > 1 || out.find('^') != std::string::npos)) out += ' ';
    out += n;
  }
  return out;
}

GroupSpec GroupSpec::from_string(const std::string& text) {
  static const std::regex free_re(R"(F_?(\d+))");
  static const std::regex product_re(R"(Z_?(\d+)\*Z_?(\d+))");
  static const std::regex finite_re(R"(F_?(\d+)[xX]Z_?(\d+))");
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  std::smatch m;
  try {
    if (std::regex_match(t, m, free_re)) return free_group(std::stoi(m[1]));
    if (std::regex_match(t, m, product_re)) return free_product(std::stoi(m[1]), std::stoi(m[2]));
    if (std::regex_match(t, m, finite_re)) return product_with_finite(std::stoi(m[1]), std::stoi(m[2]));
  } catch (const std::out_of_range&) {
  }
  fail(ErrorKind::kMalformedInput, "unrecognised group '" + text + "' (expected F_k, Z_p*Z_q or F_kxZ_m)");
}

std::string GroupSpec::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case GroupKind::kFree: os << "F_" << rank_; break;
    case GroupKind::kFreeProduct: os << "Z_" << p_ << "*Z_" << q_; break;
    case GroupKind::kProductWithFinite: os << "F_" << rank_ << "xZ_" << m_; break;
  }
  return os.str();
}

}  // namespace hyg
