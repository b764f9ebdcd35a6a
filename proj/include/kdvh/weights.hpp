#pragma once

// Weight functions for the decay argument and for the Carleman estimate.
//
//   θ(x)   = φ̃(x-N) β e^{βx} + (1 - φ̃(x-N)) β e^{βN}       (growing variant)
//   θ(x)   = φ̃(x-N) β e^{βx} + (1 - φ̃(x-N)) β e^{-β(x-2N)}  (bounded variant)
//   φ_N(x) = ∫_{-∞}^x θ
//
//   ψ(x,t) = α (x/R + φ(t))^2

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/differentiation/autodiff.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "errors.hpp"

namespace kdvh {

inline constexpr int max_weight_order = 9;

using DerivArray = std::array<double, max_weight_order + 1>;

/// Smooth cutoff: 1 on (-∞, 0], 0 on [1, ∞), nonincreasing, all derivatives
/// vanish at both ends. On (0, 1/2] it is 1/(1 + exp(1/(1-s) - 1/s)), on
/// (1/2, 1) it is 1 - φ̃(1-s).
class Bump {
 public:
  double value(double s) const { return derivatives(s)[0]; }

  /// φ̃^{(i)}(s), i = 0..max_weight_order.
  DerivArray derivatives(double s) const {
    DerivArray d{};
    // exp(-1/s) underflows long before these cutoffs; treat as flat.
    if (s <= flat_margin) {
      d[0] = 1;
      return d;
    }
    if (s >= 1 - flat_margin) return d;
    using boost::math::differentiation::make_fvar;
    auto v = make_fvar<double, max_weight_order>(s);
    auto f = s <= 0.5 ? left(v) : 1.0 - left(1.0 - v);
    for (int i = 0; i <= max_weight_order; ++i) d[static_cast<std::size_t>(i)] = f.derivative(static_cast<std::size_t>(i));
    return d;
  }

 private:
  static constexpr double flat_margin = 1e-3;

  template <class T>
  static T left(const T& s) {
    using std::exp;
    return 1.0 / (1.0 + exp(1.0 / (1.0 - s) - 1.0 / s));
  }
};

enum class WeightVariant { growing, bounded };

/// φ_N and its derivatives. Closed form off the transition band [N, N+1];
/// on the band the value comes from adaptive Gauss-Kronrod quadrature of θ and
/// the derivatives from automatic differentiation of θ.
class WeightSeq {
 public:
  WeightSeq(double beta, double N, WeightVariant variant = WeightVariant::growing)
      : beta_(beta), N_(N), variant_(variant) {
    if (!(beta > 0)) throw config_error("weight rate beta must be positive");
    if (!(N >= 1)) throw config_error("weight cutoff N must be >= 1");
    value_at_band_end_ = std::exp(beta_ * N_) + integrate_theta(N_ + 1);
  }

  double beta() const { return beta_; }
  double N() const { return N_; }
  WeightVariant variant() const { return variant_; }

  double theta(double x) const {
    if (x > N_ && x < N_ + 1) return band_theta_derivatives(x)[0];
    return derivatives(x)[1];
  }

  double value(double x) const {
    if (x <= N_) return std::exp(beta_ * x);
    if (x < N_ + 1) return std::exp(beta_ * N_) + integrate_theta(x);
    const double y = x - N_ - 1;
    if (variant_ == WeightVariant::growing) return value_at_band_end_ + beta_ * std::exp(beta_ * N_) * y;
    // ∫_{N+1}^x β e^{-β(s-2N)} ds
    return value_at_band_end_ + std::exp(beta_ * (N_ - 1)) * (1 - std::exp(-beta_ * y));
  }

  /// φ_N^{(j)}(x) for j = 0..max_weight_order.
  DerivArray derivatives(double x) const {
    DerivArray d{};
    const double b = beta_;
    if (x <= N_) {
      double p = std::exp(b * x);
      for (auto& v : d) {
        v = p;
        p *= b;
      }
      return d;
    }
    if (x >= N_ + 1) {
      d[0] = value(x);
      if (variant_ == WeightVariant::growing) {
        d[1] = b * std::exp(b * N_);
      } else {
        double p = b * std::exp(-b * (x - 2 * N_));
        for (std::size_t j = 1; j < d.size(); ++j) {
          d[j] = p;
          p *= -b;
        }
      }
      return d;
    }
    const auto th = band_theta_derivatives(x);
    d[0] = value(x);
    for (std::size_t j = 1; j < d.size(); ++j) d[j] = th[j - 1];
    return d;
  }

 private:
  // θ^{(i)} on the band: θ = c + φ̃(x-N) (β e^{βx} - c), c the tail profile.
  DerivArray band_theta_derivatives(double x) const {
    const double b = beta_;
    const auto bump = bump_.derivatives(x - N_);
    DerivArray g{};
    DerivArray c{};
    double p = b * std::exp(b * x);
    double q = variant_ == WeightVariant::growing ? b * std::exp(b * N_) : b * std::exp(-b * (x - 2 * N_));
    for (std::size_t i = 0; i < g.size(); ++i) {
      c[i] = (variant_ == WeightVariant::growing && i > 0) ? 0.0 : q;
      g[i] = p - c[i];
      p *= b;
      if (variant_ == WeightVariant::bounded) q *= -b;
    }
    DerivArray th{};
    for (int m = 0; m <= max_weight_order; ++m) {
      double s = c[static_cast<std::size_t>(m)];
      double binom = 1;
      for (int i = 0; i <= m; ++i) {
        s += binom * bump[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(m - i)];
        binom = binom * (m - i) / (i + 1);
      }
      th[static_cast<std::size_t>(m)] = s;
    }
    return th;
  }

  double integrate_theta(double x) const {
    using boost::math::quadrature::gauss_kronrod;
    auto f = [this](double y) { return theta(y); };
    return gauss_kronrod<double, 31>::integrate(f, N_, x, 15, 1e-12);
  }

  double beta_;
  double N_;
  WeightVariant variant_;
  Bump bump_;
  double value_at_band_end_ = 0;
};

struct WeightCertificate {
  double beta = 0;
  double N = 0;
  int max_order = 0;
  std::size_t samples = 0;
  /// C_j = sup |φ^{(j)}| / φ', index j = 2..max_order (entries 0, 1 unused).
  std::vector<double> C_j;
  double C_prime = 0;   ///< sup φ'/φ
  double C_growth = 0;  ///< sup φ / ((1+x_+) φ')
  double C_N = 0;       ///< sup φ / (1+x_+)^{(k+2)/4}
  double max_over_exp = 0;  ///< sup φ e^{-βx}
  double sup_value = 0;
};

/// Geometric spacing away from x = N in both directions over [-10, 4N], plus a
/// uniform band on [N, N+1].
inline std::vector<double> certificate_grid(double N, std::size_t band_points = 401) {
  std::vector<double> xs;
  const double lo = -10, hi = 4 * N;
  for (double d = 1e-3; N - d >= lo; d *= 1.05) xs.push_back(N - d);
  xs.push_back(lo);
  for (double d = 1e-3; N + d <= hi; d *= 1.05) xs.push_back(N + d);
  xs.push_back(hi);
  for (std::size_t i = 0; i < band_points; ++i)
    xs.push_back(N + static_cast<double>(i) / static_cast<double>(band_points - 1));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

/// Empirical constants of the weight properties on `xs`. Throws
/// property_violated where φ' < 0, φ < 0 or φ > e^{βx} (relative 1e-12).
inline WeightCertificate certify_phiN(const WeightSeq& w, const std::vector<double>& xs, int max_order) {
  if (max_order < 1 || max_order > max_weight_order)
    throw config_error("certificate order must lie in [1, " + std::to_string(max_weight_order) + "]");
  WeightCertificate cert;
  cert.beta = w.beta();
  cert.N = w.N();
  cert.max_order = max_order;
  cert.samples = xs.size();
  cert.C_j.assign(static_cast<std::size_t>(max_order + 1), 0.0);
  const int k = std::max(1, (max_order - 1) / 2);
  const double growth_exp = (k + 2) / 4.0;
  for (double x : xs) {
    const auto d = w.derivatives(x);
    const double e = std::exp(w.beta() * x);
    if (d[1] < 0) throw property_violated("phi_N' < 0 at x = " + std::to_string(x));
    if (d[0] < 0) throw property_violated("phi_N < 0 at x = " + std::to_string(x));
    if (d[0] > e * (1 + 1e-12)) throw property_violated("phi_N > e^{beta x} at x = " + std::to_string(x));
    const double xp = std::max(x, 0.0);
    for (int j = 2; j <= max_order; ++j)
      cert.C_j[static_cast<std::size_t>(j)] =
          std::max(cert.C_j[static_cast<std::size_t>(j)], std::abs(d[static_cast<std::size_t>(j)]) / d[1]);
    cert.C_prime = std::max(cert.C_prime, d[1] / d[0]);
    cert.C_growth = std::max(cert.C_growth, d[0] / ((1 + xp) * d[1]));
    cert.C_N = std::max(cert.C_N, d[0] / std::pow(1 + xp, growth_exp));
    cert.max_over_exp = std::max(cert.max_over_exp, d[0] / e);
    cert.sup_value = std::max(cert.sup_value, d[0]);
  }
  return cert;
}

inline WeightCertificate certify_phiN(const WeightSeq& w, int max_order) {
  return certify_phiN(w, certificate_grid(w.N()), max_order);
}

/// Largest relative change of the N-independent constants (C_j, C_prime,
/// C_growth) between two certificates.
inline double certificate_drift(const WeightCertificate& a, const WeightCertificate& b) {
  auto rel = [](double p, double q) {
    const double s = std::max(std::abs(p), std::abs(q));
    return s == 0 ? 0.0 : std::abs(p - q) / s;
  };
  double drift = std::max(rel(a.C_prime, b.C_prime), rel(a.C_growth, b.C_growth));
  const auto m = std::min(a.C_j.size(), b.C_j.size());
  for (std::size_t j = 2; j < m; ++j) drift = std::max(drift, rel(a.C_j[j], b.C_j[j]));
  return drift;
}

// ---------------------------------------------------------------------------

/// Smooth time profile φ(t) with first and second derivatives.
struct TimeProfile {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

/// φ ≡ 0 on [0, r/2] ∪ [1-r/2, 1], φ ≡ height on [r, 1-r], monotone in
/// between, built from the cutoff.
inline TimeProfile plateau_profile(double r, double height = 4) {
  if (!(r > 0 && r < 0.5)) throw config_error("plateau profile needs 0 < r < 1/2");
  auto eval = [r, height](double t, int order) {
    const double half = r / 2;
    const bool left = t < 0.5;
    const double s = left ? (r - t) / half : (t - (1 - r)) / half;
    const double ds = left ? -1 / half : 1 / half;
    return height * Bump{}.derivatives(s)[static_cast<std::size_t>(order)] * std::pow(ds, order);
  };
  return {[eval](double t) { return eval(t, 0); }, [eval](double t) { return eval(t, 1); },
          [eval](double t) { return eval(t, 2); }};
}

/// ψ = α (x/R + φ(t))^2 and the derivatives used by the conjugated operator.
class CarlemanWeight {
 public:
  CarlemanWeight(double alpha, double R, TimeProfile phi) : alpha_(alpha), R_(R), phi_(std::move(phi)) {
    if (!(alpha > 0)) throw config_error("alpha must be positive");
    if (!(R > 1)) throw config_error("R must exceed 1");
    if (std::abs(phi_.value(0)) > 1e-12 || std::abs(phi_.value(1)) > 1e-12)
      throw config_error("time profile must vanish at t = 0 and t = 1");
  }

  double alpha() const { return alpha_; }
  double R() const { return R_; }

  double arg(double x, double t) const { return x / R_ + phi_.value(t); }
  double psi(double x, double t) const { return alpha_ * arg(x, t) * arg(x, t); }
  double psi_x(double x, double t) const { return 2 * alpha_ * arg(x, t) / R_; }
  double psi_xx(double, double) const { return 2 * alpha_ / (R_ * R_); }
  double psi_xxx(double, double) const { return 0; }
  double psi_t(double x, double t) const { return 2 * alpha_ * phi_.d1(t) * arg(x, t); }
  double psi_tx(double, double t) const { return 2 * alpha_ * phi_.d1(t) / R_; }
  double B(double x, double t) const { return -psi_x(x, t); }
  double B_x(double, double) const { return -2 * alpha_ / (R_ * R_); }

 private:
  double alpha_;
  double R_;
  TimeProfile phi_;
};

}  // namespace kdvh
