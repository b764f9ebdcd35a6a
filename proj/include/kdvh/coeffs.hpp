#pragma once

// Exact combinatorics of the lower estimate: the coefficients
//
//     A_j^n = (-1)^j Σ_{k1+k2=j, 0<=k1,k2<=k} (2k2+1-2k1) C(n,2k1) C(n,2k2+1)
//
// computed three independent ways, and the Carleman exponent γ_{n,p}.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace kdvh {

namespace detail {

inline int checked_half_order(int n, int j) {
  if (n < 3 || n % 2 == 0) throw config_error("n must be odd and >= 3, got " + std::to_string(n));
  if (j < 0 || j > n - 1) throw config_error("j must lie in [0, n-1]");
  return (n - 1) / 2;
}

}  // namespace detail

/// Direct evaluation of the signed double-binomial sum.
inline BigInt A_coeff_sum(int n, int j) {
  const int k = detail::checked_half_order(n, j);
  BigInt s = 0;
  for (int k1 = 0; k1 <= k; ++k1) {
    const int k2 = j - k1;
    if (k2 < 0 || k2 > k) continue;
    s += BigInt(2 * k2 + 1 - 2 * k1) * binomial(n, 2 * k1) * binomial(n, 2 * k2 + 1);
  }
  return j % 2 ? BigInt(-s) : s;
}

/// Closed form n * C(n-1, j).
inline BigInt A_coeff_closed(int n, int j) {
  detail::checked_half_order(n, j);
  return BigInt(n) * binomial(n - 1, j);
}

namespace detail {

/// Polynomial in β with Laurent exponents in x: (β power, x power) -> coeff.
using BiPoly = std::map<std::pair<int, int>, BigInt>;

inline BiPoly bipoly_mul(const BiPoly& a, const BiPoly& b) {
  BiPoly r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      auto& slot = r[{ea.first + eb.first, ea.second + eb.second}];
      slot += ca * cb;
    }
  std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
  return r;
}

inline BiPoly bipoly_pow(const BiPoly& base, int n) {
  BiPoly r{{{0, 0}, 1}};
  for (int i = 0; i < n; ++i) r = bipoly_mul(r, base);
  return r;
}

inline BiPoly bipoly_axpy(const BiPoly& a, int sign, const BiPoly& b) {
  BiPoly r = a;
  for (const auto& [e, c] : b) r[e] += sign * c;
  std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
  return r;
}

}  // namespace detail

/// Magnitudes A_j^n read off the generating function
///   h_β(x) = 1/4 ((1+βx)^n + (1-βx)^n) ((1+β/x)^n - (1-β/x)^n),
/// whose x-derivative at x = 1 is Σ_j (-1)^{j+1} A_j^n β^{2j+1}. The powers are
/// built by repeated multiplication, not by the binomial theorem.
inline std::vector<BigInt> gen_function_coeffs(int n) {
  detail::checked_half_order(n, 0);
  using detail::BiPoly;
  const BiPoly plus_x{{{0, 0}, 1}, {{1, 1}, 1}};     // 1 + βx
  const BiPoly minus_x{{{0, 0}, 1}, {{1, 1}, -1}};   // 1 - βx
  const BiPoly plus_ix{{{0, 0}, 1}, {{1, -1}, 1}};   // 1 + β/x
  const BiPoly minus_ix{{{0, 0}, 1}, {{1, -1}, -1}}; // 1 - β/x

  auto even = detail::bipoly_axpy(detail::bipoly_pow(plus_x, n), +1, detail::bipoly_pow(minus_x, n));
  auto odd = detail::bipoly_axpy(detail::bipoly_pow(plus_ix, n), -1, detail::bipoly_pow(minus_ix, n));
  auto h4 = detail::bipoly_mul(even, odd);  // 4 h_β

  // d/dx at x = 1: Σ (x exponent) * coeff, grouped by β power.
  std::map<int, BigInt> dh4;
  for (const auto& [e, c] : h4) dh4[e.first] += BigInt(e.second) * c;

  std::vector<BigInt> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    BigInt c = dh4[2 * j + 1];
    if (c % 4 != 0) throw symbolic_error("h'_beta(1) coefficient not divisible by 4");
    c /= 4;
    out[static_cast<std::size_t>(j)] = (j % 2 == 0) ? BigInt(-c) : c;  // undo (-1)^{j+1}
  }
  for (const auto& [p, c] : dh4)
    if (c != 0 && (p % 2 == 0 || p > 2 * n - 1))
      throw symbolic_error("unexpected beta power in h'_beta(1)");
  return out;
}

/// γ_{n,p}; the second branch is a strict family "value + ε", kept symbolic.
struct GammaExponent {
  Rational value;
  bool plus_epsilon = false;
  Rational epsilon = 0;

  double numeric() const { return to_double(value + (plus_epsilon ? epsilon : Rational(0))); }

  std::string str() const {
    auto s = to_rational_string(value);
    if (plus_epsilon) s += epsilon == 0 ? "+eps" : "+" + to_rational_string(epsilon);
    return s;
  }
};

inline GammaExponent gamma_exponent(int n, int p, const Rational& epsilon = 0) {
  if (n < 5 || n % 2 == 0) throw config_error("gamma_exponent needs odd n >= 5");
  if (p < 0 || p > n - 1) throw config_error("gamma_exponent needs 0 <= p <= n-1");
  if (epsilon < 0) throw config_error("epsilon must be nonnegative");
  const int k = (n - 1) / 2;
  if (p <= k) return {Rational(n, n - 1), false, 0};
  const int q = 2 * (n - p);
  return {Rational(q, q - 1), true, epsilon};
}

}  // namespace kdvh
