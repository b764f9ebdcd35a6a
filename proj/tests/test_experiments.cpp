#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kdvh/experiments.hpp"
#include "oracles.hpp"

using namespace kdvh;

namespace {

// W(t) = ∫ e^{βx} w^2 for u_t + s ∂^n u = 0 and w(0) = ε exp(-x^2/a^2), by
// Plancherel: g = e^{βx/2} w has ĝ_t = -s (iξ - β/2)^n ĝ.
double linear_weighted_energy(int k, int sign, double beta, double eps, double a, double t) {
  const int n = 2 * k + 1;
  auto integrand = [&](double xi) {
    const double g2 = eps * eps * a * a * std::numbers::pi * std::exp(a * a * (beta * beta / 4 - xi * xi) / 2);
    const double growth = std::pow(cplx(-beta / 2, xi), n).real();
    return g2 * std::exp(-2.0 * sign * t * growth) / (2 * std::numbers::pi);
  };
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(integrand, -12.0 / a - 2, 12.0 / a + 2, 20, 1e-14);
}

Trajectory gaussian_trajectory(double centre, double x_lo, double length, std::size_t M) {
  Trajectory tr;
  for (int f = 0; f <= 10; ++f) {
    const double t = 0.1 * f;
    tr.frames.push_back(SpectralField::sample(x_lo, length, M, [&](double x) {
      const double y = x - centre;
      return std::exp(-y * y) * (1 + t);
    }, t));
  }
  return tr;
}

}  // namespace

TEST(DifferenceSplit, ExactAndTopOrderInF0) {
  for (int k = 1; k <= 5; ++k) {
    const auto split = difference_nonlinearity(generate_equation(k));
    EXPECT_TRUE(split.exact()) << k;
    EXPECT_TRUE(top_order_only_in_F0(split, 2 * k + 1)) << k;
    EXPECT_FALSE(split.F.empty());
  }
}

TEST(DifferenceSplit, KdvByHand) {
  // u1 u1_x - u2 u2_x = u1_x w + u2 w_x
  const auto split = difference_nonlinearity(generate_equation(1));
  ASSERT_EQ(split.F.size(), 2u);
  EXPECT_EQ(split.F.at(0), field_deriv(field_u1, 1));
  EXPECT_EQ(split.F.at(1), field_deriv(field_u2, 0));
}

TEST(DifferenceSplit, NumericReconstruction) {
  auto fields = [](int field, int m, double x) { return field == field_u1 ? oracle::test_u(m, x) : oracle::test_v(m, x); };
  for (int k = 1; k <= 4; ++k) {
    const auto spec = generate_equation(k);
    const auto split = difference_nonlinearity(spec);
    const auto P = spec.nonlinear_part();
    for (double x : {-0.7, 0.25, 1.9}) {
      const double direct = oracle::evaluate(P, oracle::test_u, x) - oracle::evaluate(P, oracle::test_v, x);
      double recon = 0;
      for (const auto& [j, Fj] : split.F)
        recon += oracle::evaluate_fields(Fj, fields, x) * (oracle::test_u(j, x) - oracle::test_v(j, x));
      EXPECT_NEAR(recon, direct, 1e-9 * (1 + std::abs(direct))) << k;
    }
  }
}

TEST(DifferenceSplit, TopOrderCheckRejectsMisplacedFactor) {
  auto split = difference_nonlinearity(generate_equation(2));
  split.F[1] += field_deriv(field_u2, 3);
  EXPECT_FALSE(top_order_only_in_F0(split, 5));
}

TEST(Decay, LinearFlowMatchesPlancherel) {
  DecayRecipe r;
  r.beta = 0.25;
  r.x_lo = -100;
  r.length = 200;
  r.M = 1024;
  r.snapshots = 4;
  const double eps = 0.01, a = 6;
  const auto u1 = SpectralField::sample(r.x_lo, r.length, r.M, [](double) { return 0.0; });
  const auto u2 = SpectralField::sample(r.x_lo, r.length, r.M, [&](double x) { return -eps * std::exp(-x * x / (a * a)); });
  for (int k = 1; k <= 2; ++k) {
    const auto spec = linear_spec(k);
    const auto rep = run_decay(spec, u1, u2, r);
    for (std::size_t f = 0; f < rep.t.size(); ++f) {
      const double want = linear_weighted_energy(k, spec.linear_sign, r.beta, eps, a, rep.t[f]);
      EXPECT_NEAR(rep.W[f] / want, 1, 1e-8) << "k=" << k << " t=" << rep.t[f];
    }
  }
}

TEST(Decay, DefaultRecipeStaysBounded) {
  const auto rep = run_decay(DecayRecipe{});
  ASSERT_EQ(rep.t.size(), 21u);
  EXPECT_LE(rep.max_ratio, 1e3);
  EXPECT_LE(rep.seam_level, 1e-12);
  EXPECT_TRUE(std::isfinite(rep.rate));
  const auto mirrored = mirrored_series(rep.difference_trajectory(), 0.25);
  ASSERT_EQ(mirrored.size(), rep.t.size());
  const auto last = rep.difference(rep.t.size() - 1);
  EXPECT_DOUBLE_EQ(mirrored.front(), weighted_norm(last, [](double x) { return std::exp(-0.25 * x); }));
}

TEST(Decay, SeamContaminationDetected) {
  // The perturbation sits inside the right seam band from the start.
  DecayRecipe r;
  r.x_lo = -60;
  r.length = 100;
  r.M = 1024;
  r.shift = 35;
  EXPECT_THROW(run_decay(r), seam_contamination);
}

TEST(Decay, SeamLevelMeasuresEnds) {
  const auto w = SpectralField::sample(0, 100, 1000, [](double x) { return x < 5 ? 1.0 : 0.0; });
  EXPECT_NEAR(seam_level(w, 0, 10), 1.0, 1e-15);
  const auto c = SpectralField::sample(0, 100, 1000, [](double x) { return std::exp(-(x - 50) * (x - 50)); });
  EXPECT_LT(seam_level(c, 0, 10), 1e-300);
  EXPECT_EQ(seam_level(SpectralField::sample(0, 1, 8, [](double) { return 0.0; }), 1, 0.1), 0);
}

TEST(Probe, GaussianBandEnergyByHand) {
  // w = (1+t) e^{-x^2}; ‖w‖²_{L²(Q)} = ∫_r^{1-r} (1+t)^2 dt ∫_0^1 e^{-2x^2} dx
  const auto tr = gaussian_trajectory(0, -20, 40, 1024);
  const double r = 0.3;
  const auto rep = run_lower_probe(tr, 5, r, {2, 3, 4});
  const double time = (std::pow(1.7, 3) - std::pow(1.3, 3)) / 3;
  const double space = std::sqrt(std::numbers::pi / 8) * std::erf(std::sqrt(2.0));
  // Trapezoid in t on a 0.1 grid: O(dt^2) on a smooth integrand.
  EXPECT_NEAR(rep.norm_Q * rep.norm_Q, time * space, 2e-3 * time * space);
  EXPECT_EQ(rep.gamma.str(), "4/3+1/100");
  EXPECT_TRUE(rep.monotone_decreasing);
  for (const auto& row : rep.rows) {
    EXPECT_FALSE(row.vacuous);
    EXPECT_NEAR(row.R_gamma, std::pow(row.R, 4.0 / 3 + 0.01), 1e-12 * row.R_gamma);
    EXPECT_NEAR(row.implied_constant, std::log(rep.norm_Q / row.A_R) / row.R_gamma, 1e-12);
  }
}

TEST(Probe, VacuousRightOfSupport) {
  // Smooth bump supported in [-8, 8], resolved to roundoff on the grid.
  Trajectory tr;
  for (int f = 0; f <= 4; ++f)
    tr.frames.push_back(SpectralField::sample(-32, 64, 2048, [](double x) {
      const double y = x / 8;
      return std::abs(y) < 1 ? std::exp(-1 / (1 - y * y)) : 0.0;
    }, 0.25 * f));
  const auto rep = run_lower_probe(tr, 5, 0.25, {12, 20});
  for (const auto& row : rep.rows) {
    EXPECT_TRUE(row.vacuous) << row.R;
    EXPECT_TRUE(std::isnan(row.implied_constant));
  }
}

TEST(Probe, DecayingTailGivesDecreasingSeries) {
  const auto rep = run_decay(DecayRecipe{});
  std::vector<double> Rs;
  for (double R = 2; R <= 40; R += 1) Rs.push_back(R);
  const auto probe = run_lower_probe(rep.difference_trajectory(), 5, 0.33, Rs);
  EXPECT_TRUE(probe.monotone_decreasing);
  EXPECT_GT(probe.norm_Q, 0);
  for (const auto& row : probe.rows) EXPECT_FALSE(row.vacuous);
}

TEST(Probe, RejectsVoidInput) {
  Trajectory zero;
  for (int f = 0; f <= 2; ++f) zero.frames.push_back(SpectralField::sample(-8, 16, 64, [](double) { return 0.0; }, 0.5 * f));
  EXPECT_THROW(run_lower_probe(zero, 5, 0.3, {2}), config_error);
  EXPECT_THROW(run_lower_probe(gaussian_trajectory(0, -20, 40, 256), 5, 0.7, {2}), config_error);
}
