#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace hyg {

using Letter = std::uint8_t;
inline constexpr int kMaxAlphabet = 64;

/// Group element in canonical normal form. Equality is letter equality.
struct Element {
  std::vector<Letter> letters;

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  bool operator==(const Element&) const = default;
  auto operator<=>(const Element&) const = default;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (Letter l : e.letters) {
      h ^= l + 1u;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

enum class GroupKind { kFree, kFreeProduct, kProductWithFinite };

struct LetterInfo {
  int factor = 0;   // cyclic factor index
  int sign = 1;     // +1 generator, -1 formal inverse (order-2 factors only have +1)
  Letter inverse = 0;
  std::string name;
};

/// A marked group: free group, free product of two finite cyclic groups, or a
/// free group times a finite cyclic group. All three are handled as a free
/// product of cyclic factors, plus an optional central cyclic factor.
class GroupSpec {
 public:
  static GroupSpec free_group(int rank);
  static GroupSpec free_product(int p, int q);
  static GroupSpec product_with_finite(int rank, int m);

  GroupKind kind() const { return kind_; }
  int rank() const { return rank_; }
  int order_p() const { return p_; }
  int order_q() const { return q_; }
  int finite_order() const { return m_; }

  int alphabet_size() const { return static_cast<int>(letters_.size()); }
  const LetterInfo& info(Letter l) const { return letters_.at(l); }
  Letter inverse(Letter l) const { return letters_.at(l).inverse; }
  /// Order of cyclic factor f; 0 means infinite.
  int factor_order(int f) const { return factor_orders_.at(static_cast<std::size_t>(f)); }
  int factor_count() const { return static_cast<int>(factor_orders_.size()); }
  /// Index of the central factor or -1.
  int central_factor() const { return central_; }
  /// Letter carrying the +1 (or -1) power of a factor, -1 if absent.
  int letter_for(int factor, int sign) const;

  /// Cayley graph metric is a tree metric (free groups and free products).
  bool tree_like() const { return kind_ != GroupKind::kProductWithFinite; }
  /// Longest geodesic syllable in a single cyclic factor.
  int max_syllable() const;

  Element reduce(std::span<const Letter> raw) const;
  Element multiply(const Element& x, const Element& y) const;
  Element invert(const Element& x) const;
  int word_length(const Element& x) const { return static_cast<int>(x.size()); }
  int distance(const Element& x, const Element& y) const { return word_length(multiply(invert(x), y)); }
  bool is_normal_form(const Element& x) const { return reduce(x.letters) == x; }

  /// Parses words such as "ab", "aB", "a^-1 b^2", "t^2". Uppercase means inverse.
  Element parse(const std::string& text) const;
  std::string format(const Element& x) const;
  std::string describe() const;

  /// Accepts the describe() form and shorthands: "F_2", "F2", "Z_2*Z_3", "Z2*Z3", "F_2xZ_3".
  static GroupSpec from_string(const std::string& text);

  bool operator==(const GroupSpec& o) const {
    return kind_ == o.kind_ && rank_ == o.rank_ && p_ == o.p_ && q_ == o.q_ && m_ == o.m_;
  }

 private:
  GroupSpec() = default;
  void add_factor(int order, const std::string& name, bool central);
  void emit_syllable(int factor, long long exponent, std::vector<Letter>& out) const;

  GroupKind kind_ = GroupKind::kFree;
  int rank_ = 0, p_ = 0, q_ = 0, m_ = 0;
  int central_ = -1;
  std::vector<int> factor_orders_;
  std::vector<std::string> factor_names_;
  std::vector<std::array<int, 2>> factor_letters_;  // [+1, -1] letter or -1
  std::vector<LetterInfo> letters_;
};

}  // namespace hyg
