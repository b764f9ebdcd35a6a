#pragma once

// Words in the letters D = ∂_x and B (multiplication by B(x,t)) with B_xx = 0,
// expanded into the normal form Σ c B^a B_x^b ∂_x^j (derivatives on the right).

#include <algorithm>
#include <compare>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace kdvh {

enum class Letter : char { D = 'D', B = 'B' };

class OpWord {
 public:
  OpWord() = default;
  explicit OpWord(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  /// Parses e.g. "BDBDBBDBB"; whitespace is ignored.
  static OpWord parse(const std::string& s) {
    std::vector<Letter> l;
    for (char c : s) {
      if (c == 'D') l.push_back(Letter::D);
      else if (c == 'B') l.push_back(Letter::B);
      else if (c != ' ') throw config_error(std::string("bad operator letter '") + c + "'");
    }
    return OpWord(std::move(l));
  }

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  int d_count() const { return static_cast<int>(std::count(letters_.begin(), letters_.end(), Letter::D)); }
  int b_count() const { return static_cast<int>(size()) - d_count(); }

  OpWord reversed() const { return OpWord({letters_.rbegin(), letters_.rend()}); }
  bool is_palindrome() const { return std::equal(letters_.begin(), letters_.end(), letters_.rbegin()); }

  std::string str() const {
    std::string s;
    for (auto c : letters_) s += static_cast<char>(c);
    return s;
  }

  friend OpWord operator+(const OpWord& a, const OpWord& b) {
    auto l = a.letters_;
    l.insert(l.end(), b.letters_.begin(), b.letters_.end());
    return OpWord(std::move(l));
  }
  friend bool operator==(const OpWord&, const OpWord&) = default;

 private:
  std::vector<Letter> letters_;
};

/// B^b_power B_x^bx_power ∂_x^d_order
struct OpSymbol {
  int b_power = 0;
  int bx_power = 0;
  int d_order = 0;
  auto operator<=>(const OpSymbol&) const = default;
};

class OpSum {
 public:
  using map_type = std::map<OpSymbol, Rational>;

  static OpSum identity() { return term({0, 0, 0}, 1); }
  static OpSum term(OpSymbol s, const Rational& c) {
    OpSum r;
    r.add(s, c);
    return r;
  }

  const map_type& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rational coefficient(OpSymbol s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add(OpSymbol s, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(s, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Terms whose derivative order equals j.
  OpSum stratum(int j) const {
    OpSum r;
    for (const auto& [s, c] : terms_)
      if (s.d_order == j) r.add(s, c);
    return r;
  }

  int max_d_order() const {
    int m = -1;
    for (const auto& [s, c] : terms_) m = std::max(m, s.d_order);
    return m;
  }

  OpSum& operator+=(const OpSum& o) {
    for (const auto& [s, c] : o.terms_) add(s, c);
    return *this;
  }
  friend OpSum operator+(OpSum a, const OpSum& b) { return a += b; }
  friend OpSum operator*(const Rational& k, OpSum a) {
    for (auto& [s, c] : a.terms_) c *= k;
    if (k == 0) a.terms_.clear();
    return a;
  }
  friend bool operator==(const OpSum&, const OpSum&) = default;

 private:
  map_type terms_;
};

namespace detail {

// D ∘ (B^a B_x^b ∂^j) = B^a B_x^b ∂^{j+1} + a B^{a-1} B_x^{b+1} ∂^j
inline OpSum left_apply(Letter letter, const OpSum& op) {
  OpSum r;
  for (const auto& [s, c] : op.terms()) {
    if (letter == Letter::B) {
      r.add({s.b_power + 1, s.bx_power, s.d_order}, c);
    } else {
      r.add({s.b_power, s.bx_power, s.d_order + 1}, c);
      if (s.b_power > 0) r.add({s.b_power - 1, s.bx_power + 1, s.d_order}, c * s.b_power);
    }
  }
  return r;
}

}  // namespace detail

/// Product-rule expansion of T_1 ... T_n into normal form.
inline OpSum expand_word(const OpWord& w) {
  OpSum op = OpSum::identity();
  const auto& l = w.letters();
  for (auto it = l.rbegin(); it != l.rend(); ++it) op = detail::left_apply(*it, op);
  return op;
}

/// Composition of two normal-form operators:
/// (f ∂^j) ∘ (g ∂^q) = f Σ_i C(j,i) (∂^i g) ∂^{j-i+q},
/// with ∂^i (B^a B_x^b) = a(a-1)...(a-i+1) B^{a-i} B_x^{b+i} since B_xx = 0.
inline OpSum compose(const OpSum& left, const OpSum& right) {
  OpSum r;
  for (const auto& [f, cf] : left.terms()) {
    for (const auto& [g, cg] : right.terms()) {
      BigInt falling = 1;
      for (int i = 0; i <= f.d_order && i <= g.b_power; ++i) {
        if (i > 0) falling *= g.b_power - i + 1;
        Rational c = cf * cg * Rational(binomial(f.d_order, i) * falling);
        r.add({f.b_power + g.b_power - i, f.bx_power + g.bx_power + i, f.d_order - i + g.d_order}, c);
      }
    }
  }
  return r;
}

/// Calls fn(word) for each of the C(m+l, l) words with m D's and l B's, in
/// lexicographic order (D < B).
template <class Fn>
void for_each_class_word(int m, int l, Fn&& fn) {
  std::vector<Letter> letters(static_cast<std::size_t>(m), Letter::D);
  letters.insert(letters.end(), static_cast<std::size_t>(l), Letter::B);
  auto less = [](Letter a, Letter b) { return a == Letter::D && b == Letter::B; };
  do {
    fn(OpWord(letters));
  } while (std::next_permutation(letters.begin(), letters.end(), less));
}

inline constexpr int class_sum_cap = 11;

/// [m, l]: sum of the expansions of all words with m D's and l B's.
inline OpSum class_sum(int m, int l) {
  if (m < 0 || l < 0) throw config_error("class_sum needs m, l >= 0");
  if (m + l > class_sum_cap) throw config_error("class_sum capped at n <= 11");
  OpSum s;
  for_each_class_word(m, l, [&](const OpWord& w) { s += expand_word(w); });
  return s;
}

namespace detail {

// Compares strata ∂^m and ∂^{m-1} of `op` against
// scale * (B^l ∂^m + lead_bx B^{l-1} B_x ∂^{m-1}).
inline bool leading_strata_match(const OpSum& op, int m, int l, const Rational& top,
                                 const Rational& second) {
  OpSum want = OpSum::term({l, 0, m}, top);
  if (m >= 1 && l >= 1) want.add({l - 1, 1, m - 1}, second);
  OpSum got = op.stratum(m);
  if (m >= 1) got += op.stratum(m - 1);
  return got == want && op.max_d_order() == m;
}

}  // namespace detail

/// T + T^(*) = 2 B^l ∂^m + m l B^{l-1} B_x ∂^{m-1} + lower derivative terms.
inline bool verify_reversal_identity(const OpWord& w) {
  const int m = w.d_count();
  const int l = w.b_count();
  auto sum = expand_word(w) + expand_word(w.reversed());
  return detail::leading_strata_match(sum, m, l, 2, Rational(m * l));
}

/// [m, l] = C(n, m) [B^l ∂^m + (ml/2) B^{l-1} B_x ∂^{m-1}] + lower derivative terms.
inline bool verify_class_leading(int m, int l) {
  const Rational count(binomial(m + l, m));
  return detail::leading_strata_match(class_sum(m, l), m, l, count,
                                      count * Rational(m * l, 2));
}

}  // namespace kdvh
