#include <random>

#include <gtest/gtest.h>

#include "kdvh/multipliers.hpp"
#include "oracles.hpp"

using namespace kdvh;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// ∫ K(x) e^{-iξx} dx from the closed-form kernel, split at the jump x = 0.
cplx forward_transform_of_kernel(double tau, const MultiplierParams& p, double xi, double reach) {
  auto K = [&](double x) {
    const double xs[] = {x};
    return kernel_inverse_xi(tau, p, xs).values[0];
  };
  cplx s = 0;
  for (double a = -reach; a < reach; a += 2.0) s += oracle::fourier_forward(K, xi, a, a + 2.0, 1e-11);
  return s;
}

}  // namespace

TEST(Multipliers, ParamsValidated) {
  EXPECT_THROW(MultiplierParams(4, 0, 3), config_error);
  EXPECT_THROW(MultiplierParams(1, 0, 3), config_error);
  EXPECT_THROW(MultiplierParams(5, 5, 3), config_error);
  EXPECT_THROW(MultiplierParams(5, 0, 2), config_error);
  const MultiplierParams p(5, 2, 3);
  EXPECT_EQ(p.k(), 2);
  EXPECT_EQ(p.with_j(4).j(), 4);
  EXPECT_EQ(p.with_lambda(7).lambda(), 7);
}

TEST(Multipliers, RootsAndResidues) {
  for (int n : {3, 5, 7}) {
    const auto r = roots_of_unity(n);
    for (const auto& z : r) EXPECT_NEAR(std::abs(detail::ipow(z, n) - 1.0), 0, 1e-14);
    // θ^j / (1 - θ^n) = Σ_l c_l / (θ - r_l) at an arbitrary θ.
    const cplx theta(0.3, 1.7);
    for (int j = 0; j < n; ++j) {
      const auto c = partial_fraction_residues(n, j);
      cplx sum = 0;
      for (std::size_t l = 0; l < r.size(); ++l) sum += c[l] / (theta - r[l]);
      EXPECT_LT(rel(sum, detail::ipow(theta, j) / (1.0 - detail::ipow(theta, n))), 1e-13);
    }
  }
}

TEST(Multipliers, HandValueOfM0) {
  // n = 3, λ = 3, ξ = 0: (3i)^3 = -27i, m_0 = -i / (τ + 27i)
  const MultiplierParams p(3, 0, 3);
  const double tau = 2;
  EXPECT_LT(rel(eval_m0(0, tau, p), cplx(0, -1) / cplx(tau, 27)), 1e-15);
}

TEST(Multipliers, DualRouteAgreement) {
  // λ ~ U[2.5, 20], ξ ~ U[-20, 20], τ = ±(|ξ + iλ| ρ)^n with ρ ~ U[0.5, 2], so
  // |θ| = |ξ + iλ| / |τ|^{1/n} covers [0.5, 2] where the two routes are both
  // well conditioned.
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> ul(2.5, 20), ux(-20, 20), ur(0.5, 2), us(0, 1);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    const int n = 3 + 2 * static_cast<int>(rng() % 3);
    const int j = static_cast<int>(rng() % static_cast<unsigned>(n));
    const MultiplierParams p(n, j, ul(rng));
    const double xi = ux(rng);
    const double tau = (us(rng) < 0.5 ? -1 : 1) * std::pow(std::abs(cplx(xi, p.lambda())) * ur(rng), n);
    const cplx direct = eval_mj(xi, tau, p);
    worst = std::max(worst, rel(eval_mj_partial_fractions(xi, tau, p), direct));
    worst = std::max(worst, rel(eval_mj_via_m0(xi, tau, p), direct));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Multipliers, PoleDetected) {
  // n = 3, λ = 3: ξ + iλ = 2√3 e^{iπ/3}, so (ξ + iλ)^3 = -(2√3)^3 is real.
  const MultiplierParams p(3, 0, 3);
  const double xi = std::sqrt(3.0);
  const double tau = -std::pow(2 * std::sqrt(3.0), 3);
  EXPECT_THROW(eval_m0(xi, tau, p), pole_hit);
  EXPECT_THROW(eval_mj_partial_fractions(1, 0, p), pole_hit);
}

TEST(Multipliers, OneSidedKernelBranches) {
  EXPECT_EQ(one_sided_kernel(0.5, 1, 2), cplx(0));
  EXPECT_EQ(one_sided_kernel(-0.5, 1, -2), cplx(0));
  EXPECT_LT(rel(one_sided_kernel(-0.5, 1, 2), cplx(0, -1) * std::exp(cplx(-1, -0.5))), 1e-15);
  EXPECT_LT(rel(one_sided_kernel(0.5, 1, -2), cplx(0, 1) * std::exp(cplx(-1, 0.5))), 1e-15);
  EXPECT_LT(rel(one_sided_kernel(0, 1, 2), cplx(0, -0.5)), 1e-15);
}

TEST(Multipliers, KernelTransformsBackToMultiplier) {
  struct Case {
    int n, j;
    double lambda, tau, reach;
  };
  // τ = 400 with λ = 2.5 puts one pole pair on the other side, so both
  // half-lines carry kernel mass; τ = 0 exercises the merged-pole formula.
  const Case cases[] = {{5, 0, 3, 5, 30},     {5, 2, 3, -7, 30},  {5, 4, 3, 5, 30},    {5, 1, 2.5, 400, 60},
                        {5, 3, 2.5, -400, 60}, {3, 1, 4, 20, 20}, {7, 5, 3, -30, 40},  {5, 0, 3, 0, 30},
                        {5, 3, 3, 0, 30}};
  for (const auto& c : cases) {
    const MultiplierParams p(c.n, c.j, c.lambda);
    for (double xi : {-2.0, 0.0, 1.5}) {
      const cplx want = eval_mj(xi, c.tau, p);
      const cplx got = forward_transform_of_kernel(c.tau, p, xi, c.reach);
      EXPECT_LT(rel(got, want), 1e-7) << "n=" << c.n << " j=" << c.j << " tau=" << c.tau << " xi=" << xi;
    }
  }
}

TEST(Multipliers, KernelDilationLaw) {
  // m_j(ξ, τ; λ) = λ^{j-n} m_j(ξ/λ, τ/λ^n; 1), hence
  // K_λ(x; τ) = λ^{j+1-n} K_1(λx; τ/λ^n).
  const int n = 5;
  for (int j = 0; j < n; ++j) {
    for (double lambda : {2.5, 7.0, 40.0}) {
      const double tau1 = 1.7;
      const double tau = tau1 * std::pow(lambda, n);
      const std::vector<double> xs{-3.0 / lambda, -0.4 / lambda, 0.2 / lambda};
      std::vector<double> ys;
      for (double x : xs) ys.push_back(lambda * x);
      // λ = 1 is below the admissible range, so scale through λ0 = 2.5.
      const double l0 = 2.5;
      const auto base = kernel_inverse_xi(tau1 * std::pow(l0, n), MultiplierParams(n, j, l0),
                                          std::vector<double>{ys[0] / l0, ys[1] / l0, ys[2] / l0});
      const auto got = kernel_inverse_xi(tau, MultiplierParams(n, j, lambda), xs);
      const double scale = std::pow(lambda / l0, j + 1 - n);
      for (std::size_t i = 0; i < xs.size(); ++i)
        EXPECT_LT(std::abs(got.values[i] - scale * base.values[i]), 1e-12 * (1 + std::abs(got.values[i])));
    }
  }
}

TEST(Multipliers, DegenerateTauRejected) {
  const MultiplierParams p(5, 1, 3);
  const double s = 3 / std::sin(2 * std::numbers::pi / 5);
  const double tau = std::pow(s, 5);
  EXPECT_TRUE(is_degenerate_tau(tau, p));
  const double xs[] = {-1.0};
  EXPECT_THROW(kernel_inverse_xi(tau, p, xs), degenerate_tau);
  EXPECT_FALSE(is_degenerate_tau(tau * 1.1, p));
}

TEST(Multipliers, LastIndexKernelJumpsByOne) {
  // For j = n-1 the multiplier behaves like i^n / ξ at infinity, so the
  // kernel jumps by 1 in modulus across x = 0.
  const MultiplierParams p(5, 4, 10);
  const std::vector<double> xs{-1e-9, 1e-9};
  const auto k = kernel_inverse_xi(123.0, p, xs);
  EXPECT_NEAR(std::abs(k.values[0] - k.values[1]), 1.0, 1e-6);
}

TEST(Multipliers, ScanSlackForLastIndex) {
  std::vector<double> taus, xs;
  for (double e = 0.1; e <= 4; e += 0.1) {
    taus.push_back(std::pow(10.0, e));
    taus.push_back(-std::pow(10.0, e));
  }
  for (double x = -12; x <= 1; x += 5e-4) xs.push_back(x);
  const std::vector<double> lambdas{2.5, 10, 100};
  const auto rep = bound_scan(5, 4, taus, lambdas, xs);
  EXPECT_FALSE(rep.empty());
  EXPECT_LE(rep.slack(), 2.0);
  EXPECT_GE(rep.max_c(), 0.9);
}

TEST(Multipliers, ScanConstantFollowsDilationLaw) {
  std::vector<double> taus, xs;
  for (double e = 0.5; e <= 5; e += 0.25) {
    taus.push_back(std::pow(10.0, e));
    taus.push_back(-std::pow(10.0, e));
  }
  for (double x = -12; x <= 1; x += 1e-3) xs.push_back(x);
  const std::vector<double> lambdas{5, 10};
  const auto rep = bound_scan(5, 2, taus, lambdas, xs);
  // C(λ) ∝ λ^{j+1-n} = λ^{-2}: halving λ should quadruple the sup.
  EXPECT_NEAR(rep.c_emp.at(5) / rep.c_emp.at(10), 4.0, 0.2);
}

TEST(Multipliers, T0RoundTrip) {
  for (double lambda : {2.5, 5.0}) EXPECT_LE(t0_roundtrip_residual(5, lambda, 4096, 256, 40), 1e-6);
  EXPECT_LE(t0_roundtrip_residual(3, 3.0, 1024, 64, 30), 1e-6);
}

TEST(Multipliers, CoarseGridRejected) {
  GridSpec g{16, 8, -1, 2, 0, 1};
  Field2D h(g);
  h.values.assign(h.values.size(), cplx(1));
  EXPECT_THROW(apply_Tj_grid(h, MultiplierParams(7, 0, 2.5), 2.0), grid_too_coarse);
}

TEST(Multipliers, MixedNormsOfConstantProfile) {
  GridSpec g{4, 4, 0, 4, 0, 1};
  Field2D f(g);
  f.values.assign(f.values.size(), cplx(2));
  // each x slice has L^2_t norm 2
  EXPECT_NEAR(norm_L1x_L2t(f), 8, 1e-14);
  EXPECT_NEAR(norm_Linfx_L2t(f), 2, 1e-14);
}
