#pragma once

// Fourier multipliers of the conjugated linear operator
//
//     T_0 = [e^{λx} (∂_t + (-1)^{k+1} ∂_x^n) e^{-λx}]^{-1},   T_j = (∂_x - λ)^j T_0,
//
// with symbols m_0 = -i / (τ - (ξ + iλ)^n) and m_j = (iξ - λ)^j m_0.
//
// Fourier convention throughout: ĝ(ξ) = ∫ g(x) e^{-iξx} dx, so ∂_x <-> iξ and
// the inverse transform carries a factor 1/(2π).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "spectral.hpp"

namespace kdvh {

class MultiplierParams {
 public:
  MultiplierParams(int n, int j, double lambda) : n_(n), j_(j), lambda_(lambda) {
    if (n < 3 || n % 2 == 0) throw config_error("multiplier order n must be odd and >= 3");
    if (j < 0 || j > n - 1) throw config_error("multiplier index j must lie in [0, n-1]");
    if (!(lambda > 2.0)) throw config_error("weight rate lambda must exceed 2");
  }

  int n() const { return n_; }
  int j() const { return j_; }
  int k() const { return (n_ - 1) / 2; }
  double lambda() const { return lambda_; }

  MultiplierParams with_j(int j) const { return {n_, j, lambda_}; }
  MultiplierParams with_lambda(double lambda) const { return {n_, j_, lambda}; }

 private:
  int n_;
  int j_;
  double lambda_;
};

namespace detail {

inline cplx ipow(cplx z, int e) {
  cplx r = 1.0;
  for (int i = 0; i < e; ++i) r *= z;
  return r;
}

inline cplx i_pow(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

inline cplx pole_checked_inverse(double tau, cplx zn) {
  const cplx den = tau - zn;
  const double scale = std::max({1.0, std::abs(tau), std::abs(zn)});
  if (std::abs(den) <= 1e-14 * scale) throw pole_hit("tau lies on the multiplier pole");
  return 1.0 / den;
}

}  // namespace detail

/// τ^{1/n}; the real odd root for negative τ.
inline double real_root(double tau, int n) {
  const double r = std::pow(std::abs(tau), 1.0 / n);
  return tau < 0 ? -r : r;
}

/// m_0 = -i / (τ - (ξ + iλ)^n).
inline cplx eval_m0(double xi, double tau, const MultiplierParams& p) {
  const cplx z(xi, p.lambda());
  return cplx(0, -1) * detail::pole_checked_inverse(tau, detail::ipow(z, p.n()));
}

/// m_j = -i^{j+1} (ξ + iλ)^j / (τ - (ξ + iλ)^n).
inline cplx eval_mj(double xi, double tau, const MultiplierParams& p) {
  const cplx z(xi, p.lambda());
  return -detail::i_pow(p.j() + 1) * detail::ipow(z, p.j()) *
         detail::pole_checked_inverse(tau, detail::ipow(z, p.n()));
}

/// (iξ - λ)^j m_0, the defining route.
inline cplx eval_mj_via_m0(double xi, double tau, const MultiplierParams& p) {
  return detail::ipow(cplx(-p.lambda(), xi), p.j()) * eval_m0(xi, tau, p);
}

/// n-th roots of unity r_l = exp(2πi l / n), l = 0..n-1.
inline std::vector<cplx> roots_of_unity(int n) {
  std::vector<cplx> r(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) r[static_cast<std::size_t>(l)] = std::polar(1.0, 2.0 * std::numbers::pi * l / n);
  return r;
}

/// Residues c_l = -1 / (n r_l^{n-j-1}) of θ^j / (1 - θ^n) at θ = r_l.
inline std::vector<cplx> partial_fraction_residues(int n, int j) {
  auto r = roots_of_unity(n);
  std::vector<cplx> c(r.size());
  for (std::size_t l = 0; l < r.size(); ++l) c[l] = -1.0 / (static_cast<double>(n) * detail::ipow(r[l], n - j - 1));
  return c;
}

/// m_j via θ^j/(1-θ^n) = Σ_l c_l/(θ - r_l), θ = (ξ+iλ)/τ^{1/n}:
///   m_j = -i^{j+1} τ^{(j+1)/n - 1} Σ_l c_l / (ξ + iλ - τ^{1/n} r_l).
inline cplx eval_mj_partial_fractions(double xi, double tau, const MultiplierParams& p) {
  if (tau == 0.0) throw pole_hit("partial fractions need tau != 0");
  const int n = p.n();
  const double s = real_root(tau, n);
  const auto r = roots_of_unity(n);
  const auto c = partial_fraction_residues(n, p.j());
  const cplx z(xi, p.lambda());
  cplx sum = 0.0;
  for (std::size_t l = 0; l < r.size(); ++l) sum += c[l] / (z - s * r[l]);
  // τ^{(j+1)/n - 1} = s^{j+1} / τ for the real odd root s.
  return -detail::i_pow(p.j() + 1) * (std::pow(s, p.j() + 1) / tau) * sum;
}

/// Inverse ξ-transform of 1/(ξ - A + iB), B != 0 (one-sided exponential,
/// modulus <= 1). Midpoint value at the jump x = 0.
inline cplx one_sided_kernel(double x, double a, double b) {
  const cplx phase = std::exp(cplx(b * x, a * x));
  if (b > 0) {
    if (x > 0) return 0.0;
    return cplx(0, -1) * phase * (x == 0 ? 0.5 : 1.0);
  }
  if (x < 0) return 0.0;
  return cplx(0, 1) * phase * (x == 0 ? 0.5 : 1.0);
}

inline constexpr double degenerate_tau_threshold = 1e-8;

struct KernelEval {
  double tau = 0;
  std::vector<double> x;
  std::vector<cplx> values;

  double sup_abs() const {
    double m = 0;
    for (auto v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

/// True if some λ - τ^{1/n} b_l vanishes (relative to λ).
inline bool is_degenerate_tau(double tau, const MultiplierParams& p) {
  const double s = real_root(tau, p.n());
  for (const auto& r : roots_of_unity(p.n()))
    if (std::abs(p.lambda() - s * r.imag()) <= degenerate_tau_threshold * p.lambda()) return true;
  return false;
}

/// [m_j(·, τ)]^∨(x) in closed form: a c_l-weighted sum of one-sided
/// exponentials. τ = 0 (all poles merge at ξ = -iλ) is handled by the
/// higher-order pole formula.
inline KernelEval kernel_inverse_xi(double tau, const MultiplierParams& p, std::span<const double> x) {
  KernelEval out;
  out.tau = tau;
  out.x.assign(x.begin(), x.end());
  out.values.resize(x.size());
  const int n = p.n();
  const int j = p.j();
  const double lambda = p.lambda();

  if (tau == 0.0) {
    // m_j = i^{j+1} (ξ + iλ)^{-(n-j)};  [(ξ+iλ)^{-q}]^∨ = -i (ix)^{q-1} e^{λx} / (q-1)!  (x < 0)
    const int q = n - j;
    double fact = 1;
    for (int i = 2; i < q; ++i) fact *= i;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double xi = x[i];
      if (xi > 0 || (xi == 0 && q > 1)) continue;
      cplx v = cplx(0, -1) * detail::ipow(cplx(0, xi), q - 1) * std::exp(lambda * xi) / fact;
      if (xi == 0) v *= 0.5;
      out.values[i] = detail::i_pow(j + 1) * v;
    }
    return out;
  }

  if (is_degenerate_tau(tau, p))
    throw degenerate_tau("lambda - tau^{1/n} b_l vanishes for tau = " + format_sci(tau));

  const double s = real_root(tau, n);
  const auto r = roots_of_unity(n);
  const auto c = partial_fraction_residues(n, j);
  const cplx prefactor = -detail::i_pow(j + 1) * (std::pow(s, j + 1) / tau);
  for (std::size_t i = 0; i < x.size(); ++i) {
    cplx sum = 0.0;
    for (std::size_t l = 0; l < r.size(); ++l)
      sum += c[l] * one_sided_kernel(x[i], s * r[l].real(), lambda - s * r[l].imag());
    out.values[i] = prefactor * sum;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gridded multiplier operators.

struct GridSpec {
  std::size_t nx = 0;
  std::size_t nt = 0;
  double x_lo = 0;
  double length_x = 1;
  double t_lo = 0;
  double length_t = 1;

  double dx() const { return length_x / static_cast<double>(nx); }
  double dt() const { return length_t / static_cast<double>(nt); }
  double x(std::size_t i) const { return x_lo + dx() * static_cast<double>(i); }
  double t(std::size_t i) const { return t_lo + dt() * static_cast<double>(i); }
};

/// Complex samples on a uniform (x, t) grid, row-major with t fastest.
struct Field2D {
  GridSpec grid;
  std::vector<cplx> values;

  explicit Field2D(GridSpec g) : grid(g), values(g.nx * g.nt) {}

  cplx& at(std::size_t ix, std::size_t it) { return values[ix * grid.nt + it]; }
  const cplx& at(std::size_t ix, std::size_t it) const { return values[ix * grid.nt + it]; }
};

/// ‖f‖_{L^1_x L^2_t}, Riemann sums.
inline double norm_L1x_L2t(const Field2D& f) {
  double total = 0;
  for (std::size_t ix = 0; ix < f.grid.nx; ++ix) {
    double col = 0;
    for (std::size_t it = 0; it < f.grid.nt; ++it) col += std::norm(f.at(ix, it));
    total += std::sqrt(col * f.grid.dt());
  }
  return total * f.grid.dx();
}

/// ‖f‖_{L^∞_x L^2_t}.
inline double norm_Linfx_L2t(const Field2D& f) {
  double best = 0;
  for (std::size_t ix = 0; ix < f.grid.nx; ++ix) {
    double col = 0;
    for (std::size_t it = 0; it < f.grid.nt; ++it) col += std::norm(f.at(ix, it));
    best = std::max(best, std::sqrt(col * f.grid.dt()));
  }
  return best;
}

inline constexpr double default_coarse_factor = 1e4;

/// T_j h: 2-D DFT, multiply by m_j(ξ, τ), inverse DFT. Throws grid_too_coarse
/// if |m_j| changes by more than `coarse_factor` between neighbouring ξ samples.
inline Field2D apply_Tj_grid(const Field2D& h, const MultiplierParams& p,
                             double coarse_factor = default_coarse_factor) {
  const auto& g = h.grid;
  Field2D out = h;
  ComplexFft2d fft(g.nx, g.nt);
  fft.forward(out.values);

  std::vector<double> xi(g.nx);
  for (std::size_t ix = 0; ix < g.nx; ++ix) xi[ix] = wavenumber(ix, g.nx, g.length_x);
  std::vector<std::size_t> order(g.nx);
  for (std::size_t i = 0; i < g.nx; ++i) order[i] = (i + g.nx / 2 + 1) % g.nx;  // ascending ξ

  std::vector<double> mag(g.nx);
  for (std::size_t it = 0; it < g.nt; ++it) {
    const double tau = wavenumber(it, g.nt, g.length_t);
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const cplx m = eval_mj(xi[ix], tau, p);
      mag[ix] = std::abs(m);
      out.at(ix, it) *= m;
    }
    for (std::size_t i = 0; i + 1 < g.nx; ++i) {
      const double a = mag[order[i]];
      const double b = mag[order[i + 1]];
      if (std::max(a, b) > coarse_factor * std::min(a, b))
        throw grid_too_coarse("multiplier varies by more than " + format_sci(coarse_factor) +
                              " between adjacent frequencies at tau = " + format_sci(tau));
    }
  }
  fft.inverse(out.values);
  return out;
}

inline Field2D apply_T0_grid(const Field2D& h, const MultiplierParams& p,
                             double coarse_factor = default_coarse_factor) {
  return apply_Tj_grid(h, p.with_j(0), coarse_factor);
}

/// Operator-inverse round trip. f(x,t) = exp(-x^2) sin^2(πt) on
/// [-L/2, L/2) x [0, 1); h = (∂_t + (-1)^{k+1}(∂_x - λ)^n) f is assembled from
/// the analytic t-derivative and 1-D spectral x-derivatives (binomial
/// expansion), then T_0 h is compared with f. Returns max|T_0 h - f| / max|f|.
inline double t0_roundtrip_residual(int n, double lambda, std::size_t nx, std::size_t nt,
                                    double length_x) {
  const MultiplierParams p(n, 0, lambda);
  GridSpec g{nx, nt, -length_x / 2, length_x, 0.0, 1.0};
  Field2D f(g), h(g);
  const double pi = std::numbers::pi;

  std::vector<double> gauss(nx);
  for (std::size_t ix = 0; ix < nx; ++ix) gauss[ix] = std::exp(-g.x(ix) * g.x(ix));

  // ∂_x^r exp(-x^2) for r = 0..n, spectrally.
  RealFft fft(nx);
  std::vector<cplx> spec(fft.spectrum_size()), work(fft.spectrum_size());
  fft.forward(gauss, spec);
  std::vector<std::vector<double>> dgauss(static_cast<std::size_t>(n + 1), std::vector<double>(nx));
  for (int r = 0; r <= n; ++r) {
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const double kappa = wavenumber(i, nx, length_x);
      work[i] = (r % 2 == 1 && i == nx / 2) ? cplx(0) : spec[i] * detail::ipow(cplx(0, kappa), r);
    }
    fft.inverse(work, dgauss[static_cast<std::size_t>(r)]);
  }

  const double sign = p.k() % 2 == 0 ? -1.0 : 1.0;  // (-1)^{k+1}
  for (std::size_t ix = 0; ix < nx; ++ix) {
    // (∂_x - λ)^n exp(-x^2) = Σ_r C(n,r) (-λ)^{n-r} ∂_x^r exp(-x^2)
    double conj = 0;
    for (int r = 0; r <= n; ++r)
      conj += to_double(Rational(binomial(n, r))) * std::pow(-lambda, n - r) * dgauss[static_cast<std::size_t>(r)][ix];
    for (std::size_t it = 0; it < nt; ++it) {
      const double t = g.t(it);
      const double s = std::sin(pi * t);
      f.at(ix, it) = gauss[ix] * s * s;
      const double dt_profile = 2.0 * pi * s * std::cos(pi * t);
      h.at(ix, it) = gauss[ix] * dt_profile + sign * conj * s * s;
    }
  }

  auto back = apply_T0_grid(h, p);
  double err = 0, ref = 0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    err = std::max(err, std::abs(back.values[i] - f.values[i]));
    ref = std::max(ref, std::abs(f.values[i]));
  }
  return err / ref;
}

/// ‖T_0 h‖_{L^∞_x L^2_t} / ‖h‖_{L^1_x L^2_t} for h = exp(-(x/width)^2) sin^2(πt).
inline double t0_mixed_norm_ratio(int n, double lambda, double width, std::size_t nx,
                                  std::size_t nt, double length_x) {
  const MultiplierParams p(n, 0, lambda);
  GridSpec g{nx, nt, -length_x / 2, length_x, 0.0, 1.0};
  Field2D h(g);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    const double xr = g.x(ix) / width;
    for (std::size_t it = 0; it < nt; ++it) {
      const double s = std::sin(std::numbers::pi * g.t(it));
      h.at(ix, it) = std::exp(-xr * xr) * s * s;
    }
  }
  return norm_Linfx_L2t(apply_T0_grid(h, p)) / norm_L1x_L2t(h);
}

// ---------------------------------------------------------------------------
// Uniform-bound scan.

struct ScanRow {
  double lambda;
  double tau;
  double sup_abs_kernel;
};

struct ScanReport {
  int n = 0;
  int j = 0;
  std::vector<ScanRow> rows;
  std::map<double, double> c_emp;  ///< λ -> sup over (x, τ)
  std::size_t skipped_degenerate = 0;

  bool empty() const { return rows.empty(); }

  /// max_λ C_emp / min_λ C_emp (1 when fewer than one λ is populated).
  double slack() const {
    if (c_emp.empty()) return 1.0;
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (const auto& [lam, c] : c_emp) {
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    return hi / lo;
  }

  double max_c() const {
    double hi = 0;
    for (const auto& [lam, c] : c_emp) hi = std::max(hi, c);
    return hi;
  }
};

/// C_emp(λ) = sup over the (x, τ) grid of |[m_j(·, τ)]^∨(x)|. Degenerate τ
/// values are skipped and counted.
inline ScanReport bound_scan(int n, int j, std::span<const double> taus,
                             std::span<const double> lambdas, std::span<const double> xs) {
  ScanReport rep;
  rep.n = n;
  rep.j = j;
  for (double lambda : lambdas) {
    const MultiplierParams p(n, j, lambda);
    for (double tau : taus) {
      if (tau != 0.0 && is_degenerate_tau(tau, p)) {
        ++rep.skipped_degenerate;
        continue;
      }
      const double sup = kernel_inverse_xi(tau, p, xs).sup_abs();
      rep.rows.push_back({lambda, tau, sup});
      auto [it, inserted] = rep.c_emp.try_emplace(lambda, sup);
      if (!inserted) it->second = std::max(it->second, sup);
    }
  }
  return rep;
}

}  // namespace kdvh
