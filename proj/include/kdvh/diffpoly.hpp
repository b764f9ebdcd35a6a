#pragma once

// Differential polynomials in u, u_x, u_xx, ... with exact rational
// coefficients.
//
// A monomial is stored as the ascending multiset of derivative orders of its
// u-factors: u * u_x^2 * u_xxx  <->  {0, 1, 1, 3}. The empty multiset is the
// constant monomial. basic_diff_poly is parameterised on the jet variable so
// the same container also serves several dependent fields (see FieldVar).

#include <algorithm>
#include <compare>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace kdvh {

/// A derivative of one of several dependent fields: ∂_x^order field.
struct FieldVar {
  int field = 0;
  int order = 0;
  auto operator<=>(const FieldVar&) const = default;
};

template <class Var>
struct jet_traits;

template <>
struct jet_traits<int> {
  static int raise(int v) { return v + 1; }
  static int order(int v) { return v; }
};

template <>
struct jet_traits<FieldVar> {
  static FieldVar raise(FieldVar v) { return {v.field, v.order + 1}; }
  static int order(FieldVar v) { return v.order; }
};

template <class Var>
class basic_diff_poly {
 public:
  using var_type = Var;
  using key_type = std::vector<Var>;
  using map_type = std::map<key_type, Rational>;

  basic_diff_poly() = default;

  static basic_diff_poly constant(const Rational& c) {
    basic_diff_poly p;
    p.add_term({}, c);
    return p;
  }

  /// c * product of the listed jet variables (any order).
  static basic_diff_poly monomial(const Rational& c, key_type vars) {
    std::sort(vars.begin(), vars.end());
    basic_diff_poly p;
    p.add_term(std::move(vars), c);
    return p;
  }

  const map_type& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Rational coefficient(const key_type& sorted_key) const {
    auto it = terms_.find(sorted_key);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  Rational constant_term() const { return coefficient({}); }

  /// `key` must already be sorted.
  void add_term(key_type key, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(key), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  int max_order() const {
    int m = -1;
    for (const auto& [key, c] : terms_)
      for (const auto& v : key) m = std::max(m, jet_traits<Var>::order(v));
    return m;
  }

  basic_diff_poly& operator+=(const basic_diff_poly& o) {
    for (const auto& [key, c] : o.terms_) add_term(key, c);
    return *this;
  }
  basic_diff_poly& operator-=(const basic_diff_poly& o) {
    for (const auto& [key, c] : o.terms_) add_term(key, -c);
    return *this;
  }
  basic_diff_poly& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [key, c] : terms_) c *= s;
    return *this;
  }

  friend basic_diff_poly operator+(basic_diff_poly a, const basic_diff_poly& b) { return a += b; }
  friend basic_diff_poly operator-(basic_diff_poly a, const basic_diff_poly& b) { return a -= b; }
  friend basic_diff_poly operator-(basic_diff_poly a) { return a *= Rational(-1); }
  friend basic_diff_poly operator*(basic_diff_poly a, const Rational& s) { return a *= s; }
  friend basic_diff_poly operator*(const Rational& s, basic_diff_poly a) { return a *= s; }

  friend basic_diff_poly operator*(const basic_diff_poly& a, const basic_diff_poly& b) {
    basic_diff_poly r;
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) {
        key_type k;
        k.reserve(ka.size() + kb.size());
        std::merge(ka.begin(), ka.end(), kb.begin(), kb.end(), std::back_inserter(k));
        r.add_term(std::move(k), ca * cb);
      }
    }
    return r;
  }

  friend bool operator==(const basic_diff_poly&, const basic_diff_poly&) = default;

 private:
  map_type terms_;
};

using DiffPoly = basic_diff_poly<int>;
using FieldPoly = basic_diff_poly<FieldVar>;

/// The jet variable ∂_x^m u as a polynomial.
inline DiffPoly u_deriv(int m, const Rational& c = 1) { return DiffPoly::monomial(c, {m}); }

/// Total x-derivative (Leibniz rule per factor).
template <class Var>
basic_diff_poly<Var> total_derivative(const basic_diff_poly<Var>& a) {
  basic_diff_poly<Var> r;
  for (const auto& [key, c] : a.terms()) {
    for (std::size_t i = 0; i < key.size(); ++i) {
      // Equal factors produce identical keys; they merge through add_term.
      auto k = key;
      k[i] = jet_traits<Var>::raise(k[i]);
      std::sort(k.begin(), k.end());
      r.add_term(std::move(k), c);
    }
  }
  return r;
}

template <class Var>
basic_diff_poly<Var> total_derivative(const basic_diff_poly<Var>& a, int times) {
  auto r = a;
  for (int i = 0; i < times; ++i) r = total_derivative(r);
  return r;
}

/// ∂f/∂u_j (formal partial derivative with respect to one jet variable).
template <class Var>
basic_diff_poly<Var> partial(const basic_diff_poly<Var>& a, const Var& v) {
  basic_diff_poly<Var> r;
  for (const auto& [key, c] : a.terms()) {
    auto [lo, hi] = std::equal_range(key.begin(), key.end(), v);
    auto mult = hi - lo;
    if (mult == 0) continue;
    auto k = key;
    k.erase(k.begin() + (lo - key.begin()));
    r.add_term(std::move(k), c * Rational(static_cast<long>(mult)));
  }
  return r;
}

/// Variational derivative E(f) = Σ_j (-∂_x)^j ∂f/∂u_j.
inline DiffPoly euler_operator(const DiffPoly& a) {
  DiffPoly r;
  const int top = a.max_order();
  for (int j = 0; j <= top; ++j) {
    auto t = total_derivative(partial(a, j), j);
    if (j % 2) r -= t;
    else r += t;
  }
  return r;
}

namespace detail {

// Elimination order: (max order, degree, then the sorted multiset itself).
inline bool leading_less(const DiffPoly::key_type& a, const DiffPoly::key_type& b) {
  int ma = a.empty() ? -1 : a.back();
  int mb = b.empty() ? -1 : b.back();
  if (ma != mb) return ma < mb;
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace detail

/// Returns g with ∂_x g = a and zero constant term.
///
/// Throws not_exact if E(a) != 0 or a has a nonzero constant term (a constant
/// is annihilated by E but is not the derivative of a differential polynomial).
inline DiffPoly integrate_total_derivative(const DiffPoly& a) {
  if (!euler_operator(a).is_zero()) throw not_exact("Euler operator does not vanish");

  DiffPoly rest = a;
  DiffPoly g;
  while (!rest.is_zero()) {
    auto lead = rest.terms().begin();
    for (auto it = rest.terms().begin(); it != rest.terms().end(); ++it)
      if (detail::leading_less(lead->first, it->first)) lead = it;

    const auto& key = lead->first;
    if (key.empty()) throw not_exact("constant term " + to_fraction_string(lead->second));
    const int top = key.back();
    if (top == 0 || (key.size() > 1 && key[key.size() - 2] == top))
      throw not_exact("leading monomial is not linear in its highest derivative");

    // key = r * u_{top-1}^q * u_top  ->  antecedent r * u_{top-1}^{q+1} / (q+1)
    DiffPoly::key_type ante(key.begin(), key.end() - 1);
    const auto q = std::count(ante.begin(), ante.end(), top - 1);
    ante.push_back(top - 1);
    std::sort(ante.begin(), ante.end());
    auto step = DiffPoly::monomial(lead->second / Rational(static_cast<long>(q + 1)), ante);

    g += step;
    rest -= total_derivative(step);
  }
  return g;
}

/// Lenard operator J g = ∂_x^3 g + (2/3) u ∂_x g + (1/3) u_x g.
inline DiffPoly apply_J(const DiffPoly& g) {
  auto dg = total_derivative(g);
  auto r = total_derivative(dg, 2);
  r += Rational(2, 3) * (u_deriv(0) * dg);
  r += Rational(1, 3) * (u_deriv(1) * g);
  return r;
}

// Text form: one term per line, `num/den : m_1 m_2 ... m_d`, sorted by key.

inline void write_text(std::ostream& os, const DiffPoly& p) {
  for (const auto& [key, c] : p.terms()) {
    os << to_fraction_string(c) << " :";
    for (int m : key) os << ' ' << m;
    os << '\n';
  }
}

inline std::string to_text(const DiffPoly& p) {
  std::ostringstream os;
  write_text(os, p);
  return os.str();
}

inline DiffPoly parse_text(std::istream& is) {
  DiffPoly p;
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw config_error("diffpoly line without ':': " + line);
    std::istringstream coeff(line.substr(0, colon));
    std::string frac;
    coeff >> frac;
    std::istringstream orders(line.substr(colon + 1));
    DiffPoly::key_type key;
    for (int m; orders >> m;) {
      if (m < 0) throw config_error("negative derivative order in: " + line);
      key.push_back(m);
    }
    std::sort(key.begin(), key.end());
    p.add_term(std::move(key), parse_fraction(frac));
  }
  return p;
}

inline DiffPoly parse_text(const std::string& s) {
  std::istringstream is(s);
  return parse_text(is);
}

/// Human-readable rendering, e.g. `-10 u u_xxx + 30 u^2 u_x`.
inline std::string pretty(const DiffPoly& p) {
  if (p.is_zero()) return "0";
  auto factor = [](int m) {
    if (m == 0) return std::string("u");
    if (m <= 3) return "u_" + std::string(static_cast<std::size_t>(m), 'x');
    return "u_" + std::to_string(m) + "x";
  };
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [key, c] = *it;
    Rational mag = c < 0 ? Rational(-c) : c;
    out += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
    first = false;
    std::string body;
    for (std::size_t i = 0; i < key.size();) {
      std::size_t j = i;
      while (j < key.size() && key[j] == key[i]) ++j;
      if (!body.empty()) body += ' ';
      body += factor(key[i]);
      if (j - i > 1) body += "^" + std::to_string(j - i);
      i = j;
    }
    if (mag != 1 || body.empty()) {
      out += boost::multiprecision::denominator(mag) == 1
                 ? boost::multiprecision::numerator(mag).str()
                 : "(" + to_fraction_string(mag) + ")";
      if (!body.empty()) out += ' ';
    }
    out += body;
  }
  return out;
}

}  // namespace kdvh
