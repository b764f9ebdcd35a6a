#include <random>

#include <gtest/gtest.h>

#include "kdvh/diffpoly.hpp"
#include "kdvh/random.hpp"
#include "oracles.hpp"

using namespace kdvh;

namespace {

DiffPoly u(int m) { return u_deriv(m); }

double eval_at(const DiffPoly& p, double x) { return oracle::evaluate(p, oracle::test_u, x); }

}  // namespace

TEST(DiffPoly, MonomialKeysAreSorted) {
  auto p = DiffPoly::monomial(3, {2, 0, 1});
  ASSERT_EQ(p.terms().size(), 1u);
  EXPECT_EQ(p.terms().begin()->first, (DiffPoly::key_type{0, 1, 2}));
  EXPECT_EQ(p.max_order(), 2);
}

TEST(DiffPoly, ArithmeticCancels) {
  auto p = u(0) * u(1) + Rational(1, 2) * u(3);
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ(p * Rational(0), DiffPoly());
  EXPECT_EQ((u(0) + u(1)) * (u(0) - u(1)), u(0) * u(0) - u(1) * u(1));
}

TEST(DiffPoly, TotalDerivativeHandCases) {
  EXPECT_EQ(total_derivative(u(0) * u(1)), u(1) * u(1) + u(0) * u(2));
  EXPECT_EQ(total_derivative(u(0) * u(0) * u(0)), 3 * (u(0) * u(0) * u(1)));
  EXPECT_TRUE(total_derivative(DiffPoly::constant(5)).is_zero());
  EXPECT_EQ(total_derivative(u(2), 3), u(5));
}

TEST(DiffPoly, TotalDerivativeMatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_diff_poly(rng);
    const auto dp = total_derivative(p);
    for (double x : {-1.3, 0.2, 2.9}) {
      const double fd = oracle::central_diff([&](double y) { return eval_at(p, y); }, x, 1e-3);
      EXPECT_NEAR(eval_at(dp, x), fd, 1e-6 * (1 + std::abs(fd))) << to_text(p);
    }
  }
}

TEST(DiffPoly, EulerOperatorHandCases) {
  EXPECT_EQ(euler_operator(u(0) * u(0) * u(0)), 3 * (u(0) * u(0)));
  // E(u_x^2 / 2) = -u_xx
  EXPECT_EQ(euler_operator(Rational(1, 2) * (u(1) * u(1))), -u(2));
  // E(u u_xx) = 2 u_xx
  EXPECT_EQ(euler_operator(u(0) * u(2)), 2 * u(2));
  EXPECT_TRUE(euler_operator(u(0) * u(1)).is_zero());
}

TEST(DiffPoly, EulerKillsTotalDerivativesProperty) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = random_diff_poly(rng);
    EXPECT_TRUE(euler_operator(total_derivative(p)).is_zero()) << to_text(p);
  }
}

TEST(DiffPoly, IntegrationRoundTripProperty) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = random_diff_poly(rng);
    auto expect = p;
    expect.add_term({}, -p.constant_term());
    EXPECT_EQ(integrate_total_derivative(total_derivative(p)), expect) << to_text(p);
  }
}

TEST(DiffPoly, IntegrationRejectsNonExact) {
  EXPECT_THROW(integrate_total_derivative(u(0) * u(0)), not_exact);
  EXPECT_THROW(integrate_total_derivative(u(1) * u(1)), not_exact);
  EXPECT_THROW(integrate_total_derivative(DiffPoly::constant(2)), not_exact);
  EXPECT_TRUE(integrate_total_derivative(DiffPoly()).is_zero());
}

TEST(DiffPoly, LenardOperatorOnU) {
  // J u = u_xxx + (2/3) u u_x + (1/3) u_x u
  EXPECT_EQ(apply_J(u(0)), u(3) + u(0) * u(1));
  EXPECT_EQ(apply_J(DiffPoly::constant(1)), Rational(1, 3) * u(1));
}

TEST(DiffPoly, TextRoundTrip) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_diff_poly(rng);
    EXPECT_EQ(parse_text(to_text(p)), p);
  }
  EXPECT_EQ(parse_text("-10 : 0 3\n1/2 : 2 1\n"), -10 * (u(0) * u(3)) + Rational(1, 2) * (u(1) * u(2)));
  EXPECT_THROW(parse_text("3 0 1\n"), config_error);
  EXPECT_THROW(parse_text("3 : -1\n"), config_error);
}

TEST(DiffPoly, PrettyPrinting) {
  EXPECT_EQ(pretty(DiffPoly()), "0");
  EXPECT_EQ(pretty(u(0) * u(1)), "u u_x");
  EXPECT_EQ(pretty(-10 * (u(0) * u(3))), "-10 u u_xxx");
  EXPECT_EQ(pretty(u(5)), "u_5x");
  EXPECT_EQ(pretty(30 * (u(0) * u(0) * u(1))), "30 u^2 u_x");
}

TEST(DiffPoly, TwoFieldDerivativeMatchesFiniteDifferences) {
  auto f = [](int field, int order) { return FieldPoly::monomial(1, {FieldVar{field, order}}); };
  const FieldPoly p = f(0, 0) * f(1, 2) + Rational(3, 2) * (f(0, 1) * f(0, 1) * f(1, 0));
  const auto dp = total_derivative(p);
  auto fields = [](int field, int m, double x) { return field == 0 ? oracle::test_u(m, x) : oracle::test_v(m, x); };
  for (double x : {-0.4, 0.8}) {
    const double fd = oracle::central_diff([&](double y) { return oracle::evaluate_fields(p, fields, y); }, x, 1e-3);
    EXPECT_NEAR(oracle::evaluate_fields(dp, fields, x), fd, 1e-7 * (1 + std::abs(fd)));
  }
}
