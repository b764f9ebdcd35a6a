#pragma once

// Numerical experiments built on the solver: weighted decay of the difference
// of two solutions, the lower-estimate probe, and the symbolic splitting of
// P(z_1) - P(z_2) into Σ_j F_j ∂_x^j w.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "coeffs.hpp"
#include "diffpoly.hpp"
#include "errors.hpp"
#include "hierarchy.hpp"
#include "pde.hpp"

namespace kdvh {

// ---------------------------------------------------------------------------
// Decay runs.

struct DecayRecipe {
  int k = 2;
  double beta = 0.25;
  double amplitude = 0.1;  ///< u1(0) = amplitude exp(-(x / width)^2)
  double width = 10;
  double epsilon = 0.01;   ///< u2(0) = u1(0) + epsilon sech^power((x - shift) / bump_width)
  double bump_width = 10;
  int power = 4;
  double shift = 1;
  double x_lo = -900;
  double length = 1000;
  std::size_t M = 4096;
  double dt = 0;           ///< 0: half the explicit stability limit
  double t_end = 1;
  std::size_t snapshots = 20;
  double seam_width = 10;         ///< width of each band next to the periodic seam
  double seam_tolerance = 1e-12;  ///< allowed max of e^{βx} w^2 in the bands, relative to the global max
};

struct DecayReport {
  std::vector<double> t;
  std::vector<double> W;  ///< ∫ e^{βx} w^2
  double rate = 0;        ///< Ĉ = sup_{t>0} (log W(t) - log W(0)) / t
  double max_ratio = 0;   ///< sup_t W(t) / W(0)
  double seam_level = 0;  ///< worst relative seam-band level seen
  Trajectory u1;
  Trajectory u2;

  SpectralField difference(std::size_t frame) const {
    SpectralField w = u1.frames.at(frame);
    const auto& b = u2.frames.at(frame).values;
    for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] -= b[i];
    return w;
  }

  Trajectory difference_trajectory() const {
    Trajectory w;
    w.dt_used = u1.dt_used;
    w.steps = u1.steps;
    for (std::size_t f = 0; f < u1.frames.size(); ++f) w.frames.push_back(difference(f));
    return w;
  }
};

/// max of e^{βx} w^2 within `width` of either end of the period, relative to
/// its max over the whole grid (0 when w ≡ 0).
inline double seam_level(const SpectralField& w, double beta, double width) {
  const double hi = w.x_lo + w.length;
  double global = 0, seam = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double x = w.x(i);
    const double v = std::exp(beta * x) * w.values[i] * w.values[i];
    global = std::max(global, v);
    if (x < w.x_lo + width || x >= hi - width) seam = std::max(seam, v);
  }
  return global == 0 ? 0.0 : seam / global;
}

inline SpectralField decay_initial_u1(const DecayRecipe& r) {
  return SpectralField::sample(r.x_lo, r.length, r.M, [&](double x) {
    const double y = x / r.width;
    return r.amplitude * std::exp(-y * y);
  });
}

inline SpectralField decay_initial_u2(const DecayRecipe& r) {
  auto u = decay_initial_u1(r);
  for (std::size_t i = 0; i < u.size(); ++i) u.values[i] += r.epsilon / std::pow(std::cosh((u.x(i) - r.shift) / r.bump_width), r.power);
  return u;
}

/// Evolves both initial data under `spec` and records W_β(t).
inline DecayReport run_decay(const EquationSpec& spec, const SpectralField& u1_0, const SpectralField& u2_0,
                             const DecayRecipe& r) {
  if (!(r.beta >= 0)) throw config_error("beta must be nonnegative");
  SolverConfig cfg;
  cfg.spec = spec;
  cfg.t_end = r.t_end;
  cfg.snapshots = r.snapshots;
  cfg.dt = r.dt > 0 ? r.dt : std::min(suggest_dt(u1_0, cfg), suggest_dt(u2_0, cfg));

  DecayReport rep;
  {
    SpectralField w0 = u1_0;
    for (std::size_t i = 0; i < w0.size(); ++i) w0.values[i] -= u2_0.values.at(i);
    const double lvl = seam_level(w0, r.beta, r.seam_width);
    if (lvl > r.seam_tolerance)
      throw seam_contamination("initial weighted difference already reaches the periodic seam (relative level " +
                               format_sci(lvl) + ")");
  }
  rep.u1 = evolve(u1_0, cfg);
  rep.u2 = evolve(u2_0, cfg);
  const auto weight = [b = r.beta](double x) { return std::exp(b * x); };
  for (std::size_t f = 0; f < rep.u1.frames.size(); ++f) {
    const auto w = rep.difference(f);
    const double lvl = seam_level(w, r.beta, r.seam_width);
    rep.seam_level = std::max(rep.seam_level, lvl);
    if (lvl > r.seam_tolerance)
      throw seam_contamination("weighted difference reaches the periodic seam (relative level " +
                               format_sci(lvl) + ") at t = " + format_sci(w.time));
    rep.t.push_back(w.time);
    rep.W.push_back(weighted_norm(w, weight));
  }
  const double w0 = rep.W.front();
  rep.rate = -std::numeric_limits<double>::infinity();
  rep.max_ratio = w0 > 0 ? 1.0 : 0.0;
  for (std::size_t f = 1; f < rep.W.size(); ++f) {
    if (w0 > 0) {
      rep.max_ratio = std::max(rep.max_ratio, rep.W[f] / w0);
      rep.rate = std::max(rep.rate, (std::log(rep.W[f]) - std::log(w0)) / (rep.t[f] - rep.t[0]));
    }
  }
  if (w0 == 0) rep.rate = 0;
  return rep;
}

inline DecayReport run_decay(const DecayRecipe& r) {
  return run_decay(generate_equation(r.k), decay_initial_u1(r), decay_initial_u2(r), r);
}

/// Mirrored series: for the stored difference trajectory, t' = t_end - t and
/// x' = -x, the weight e^{βx'} becomes e^{-βx}. Entry i belongs to t' = t_i'.
inline std::vector<double> mirrored_series(const Trajectory& w, double beta) {
  std::vector<double> out;
  const auto weight = [beta](double x) { return std::exp(-beta * x); };
  for (auto it = w.frames.rbegin(); it != w.frames.rend(); ++it) out.push_back(weighted_norm(*it, weight));
  return out;
}

// ---------------------------------------------------------------------------
// Lower-estimate probe.

struct ProbeRow {
  double R = 0;
  double R_gamma = 0;
  double A_R = 0;
  double log_A_R = 0;
  double implied_constant = 0;  ///< log(‖w‖_{L²(Q)} / A_R) / R^γ
  bool vacuous = false;          ///< A_R at or below the noise floor: no information
};

struct ProbeReport {
  int n = 0;
  double r = 0;
  GammaExponent gamma;
  double norm_Q = 0;  ///< ‖w‖_{L²(Q)}, Q = [0,1]_x × [r, 1-r]_t
  double noise_floor = 0;  ///< A_R values at or below this are roundoff
  std::vector<ProbeRow> rows;
  bool monotone_decreasing = true;
};

namespace detail {

// Trapezoid in t over the frames whose time lies in [a, b].
template <class F>
double time_integral(const Trajectory& w, double a, double b, F&& per_frame) {
  double s = 0;
  const SpectralField* prev = nullptr;
  double prev_v = 0;
  for (const auto& fr : w.frames) {
    if (fr.time < a - 1e-12 || fr.time > b + 1e-12) continue;
    const double v = per_frame(fr);
    if (prev) s += 0.5 * (v + prev_v) * (fr.time - prev->time);
    prev = &fr;
    prev_v = v;
  }
  return s;
}

// Trapezoid for ∫_a^b f^2 over the grid points inside [a, b], with f^2
// interpolated linearly at the ends. [a, b] is clipped to [x_0, x_{M-1}].
inline double band_integral(const SpectralField& f, double a, double b) {
  const std::size_t M = f.size();
  const double dx = f.dx();
  a = std::max(a, f.x(0));
  b = std::min(b, f.x(M - 1));
  if (!(b > a)) return 0;
  auto sq = [&](std::size_t i) { return f.values[i] * f.values[i]; };
  auto at = [&](double x) {
    const double p = (x - f.x_lo) / dx;
    const auto i = std::min(static_cast<std::size_t>(p), M - 2);
    const double s = p - static_cast<double>(i);
    return (1 - s) * sq(i) + s * sq(i + 1);
  };
  double s = 0, prev_x = a, prev_v = at(a);
  for (auto i = static_cast<std::size_t>(std::ceil((a - f.x_lo) / dx)); i < M && f.x(i) < b; ++i) {
    if (f.x(i) <= a) continue;
    s += 0.5 * (sq(i) + prev_v) * (f.x(i) - prev_x);
    prev_x = f.x(i);
    prev_v = sq(i);
  }
  return s + 0.5 * (at(b) + prev_v) * (b - prev_x);
}

}  // namespace detail

inline constexpr double probe_relative_floor = 1e-13;

/// Report-only evaluation of both sides of the lower estimate on a stored
/// difference trajectory. Throws config_error when ‖w‖_{L²(Q)} = 0.
/// Rows with A_R below Σ_j (probe_relative_floor * sup|w| * κ_max^j)^2 are
/// flagged vacuous; monotonicity is judged on the remaining rows.
inline ProbeReport run_lower_probe(const Trajectory& w, int n, double r, const std::vector<double>& Rs,
                                   const Rational& epsilon = Rational(1, 100)) {
  if (!(r > 0 && r < 0.5)) throw config_error("probe needs 0 < r < 1/2");
  if (w.frames.size() < 2) throw config_error("probe needs at least two frames");
  ProbeReport rep;
  rep.n = n;
  rep.r = r;
  rep.gamma = gamma_exponent(n, n - 2, epsilon);
  const double t0 = w.frames.front().time;
  rep.norm_Q = std::sqrt(detail::time_integral(w, t0 + r, t0 + 1 - r, [](const SpectralField& f) {
    return detail::band_integral(f, 0, 1);
  }));
  if (!(rep.norm_Q > 0)) throw config_error("w vanishes on Q; the lower estimate is void");

  std::vector<std::vector<SpectralField>> derivs;
  for (const auto& fr : w.frames) {
    std::vector<SpectralField> d{fr};
    for (int j = 1; j < n; ++j) d.push_back(spectral_derivative(fr, j));
    derivs.push_back(std::move(d));
  }
  // Roundoff in w is amplified by at most κ_max^j in ∂^j w.
  double sup_w = 0;
  for (const auto& fr : w.frames)
    for (double v : fr.values) sup_w = std::max(sup_w, std::abs(v));
  const double kappa_max = std::numbers::pi / w.frames.front().dx();
  for (int j = 0; j < n; ++j) rep.noise_floor += std::pow(probe_relative_floor * sup_w * std::pow(kappa_max, j), 2);
  const double g = rep.gamma.numeric();
  double prev = std::numeric_limits<double>::infinity();
  for (double R : Rs) {
    ProbeRow row;
    row.R = R;
    row.R_gamma = std::pow(R, g);
    double s = 0;
    const SpectralField* last = nullptr;
    double last_v = 0;
    for (std::size_t f = 0; f < w.frames.size(); ++f) {
      const auto& fr = w.frames[f];
      if (fr.time > t0 + 1 + 1e-12) break;
      double v = 0;
      for (const auto& d : derivs[f]) v += detail::band_integral(d, R, R + 1);
      if (last) s += 0.5 * (v + last_v) * (fr.time - last->time);
      last = &fr;
      last_v = v;
    }
    row.A_R = s;
    row.vacuous = !(s > rep.noise_floor);
    row.log_A_R = s > 0 ? std::log(s) : -std::numeric_limits<double>::infinity();
    row.implied_constant =
        row.vacuous ? std::numeric_limits<double>::quiet_NaN() : std::log(rep.norm_Q / s) / row.R_gamma;
    if (!row.vacuous) {
      if (s > prev) rep.monotone_decreasing = false;
      prev = s;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Difference nonlinearity.

inline constexpr int field_u1 = 0;
inline constexpr int field_u2 = 1;

struct DifferenceSplit {
  FieldPoly direct;                ///< P(u1) - P(u2)
  std::map<int, FieldPoly> F;      ///< j -> F_j
  FieldPoly reconstruction;        ///< Σ_j F_j (u1^{(j)} - u2^{(j)})

  bool exact() const { return direct == reconstruction; }

  /// Orders m such that F_j contains a factor u_1^{(m)} or u_2^{(m)}.
  bool contains_order(int j, int m) const {
    auto it = F.find(j);
    if (it == F.end()) return false;
    for (const auto& [key, c] : it->second.terms())
      for (const auto& v : key)
        if (v.order == m) return true;
    return false;
  }
};

inline FieldPoly field_deriv(int field, int m) { return FieldPoly::monomial(1, {FieldVar{field, m}}); }

/// Telescopes each monomial a Π_i ∂^{m_i}u:
///   Π a_i - Π b_i = Σ_i b_1 ... b_{i-1} (a_i - b_i) a_{i+1} ... a_d,
/// a = derivatives of u_1, b = derivatives of u_2, and collects the cofactor
/// of (a_i - b_i) = ∂^{m_i} w into F_{m_i}.
inline DifferenceSplit difference_nonlinearity(const EquationSpec& spec) {
  DifferenceSplit out;
  for (const auto& [m, coef] : spec.nonlinearity) {
    std::vector<FieldVar> a, b;
    for (int o : m) {
      a.push_back({field_u1, o});
      b.push_back({field_u2, o});
    }
    out.direct += FieldPoly::monomial(coef, a);
    out.direct -= FieldPoly::monomial(coef, b);
    for (std::size_t i = 0; i < m.size(); ++i) {
      std::vector<FieldVar> cof;
      for (std::size_t l = 0; l < i; ++l) cof.push_back(b[l]);
      for (std::size_t l = i + 1; l < m.size(); ++l) cof.push_back(a[l]);
      out.F[m[i]] += FieldPoly::monomial(coef, cof);
    }
  }
  std::erase_if(out.F, [](const auto& kv) { return kv.second.is_zero(); });
  for (const auto& [j, Fj] : out.F) out.reconstruction += Fj * (field_deriv(field_u1, j) - field_deriv(field_u2, j));
  return out;
}

/// True when F_0 carries an order-(n-2) factor of u_1 and no other F_j has
/// an order-(n-2) factor of either field.
inline bool top_order_only_in_F0(const DifferenceSplit& s, int n) {
  const int top = n - 2;
  bool f0_has_u1 = false;
  if (auto it = s.F.find(0); it != s.F.end())
    for (const auto& [key, c] : it->second.terms())
      for (const auto& v : key)
        if (v.field == field_u1 && v.order == top) f0_has_u1 = true;
  if (!f0_has_u1) return false;
  for (const auto& [j, Fj] : s.F)
    if (j != 0 && s.contains_order(j, top)) return false;
  return true;
}

}  // namespace kdvh
