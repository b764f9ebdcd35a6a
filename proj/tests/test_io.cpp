#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "kdvh/io.hpp"

using namespace kdvh;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("kdvh_test_" + name);
}

}  // namespace

TEST(Io, EquationJsonRoundTrip) {
  for (int k = 1; k <= 5; ++k) {
    for (auto c : {Convention::display, Convention::evolution}) {
      const auto spec = in_convention(generate_equation(k), c);
      const auto text = equation_to_json(spec).dump();
      EXPECT_EQ(equation_from_json(nlohmann::json::parse(text)), spec) << k;
    }
  }
}

TEST(Io, MalformedJsonRejected) {
  EXPECT_THROW(equation_from_json(nlohmann::json::parse(R"({"k": 1})")), config_error);
  EXPECT_THROW(equation_from_json(nlohmann::json::parse(
                   R"({"k":1,"parity_applied":false,"linear":{"coefficient":"1"},"nonlinearity":[{"orders":[0,1],"coefficient":"1/0"}]})")),
               std::exception);
}

TEST(Io, EquationText) {
  EXPECT_EQ(equation_text(generate_equation(1)), "u_t + u_xxx + u u_x = 0");
  const auto ev = in_convention(generate_equation(2), Convention::evolution);
  EXPECT_TRUE(ev.parity_applied);
  EXPECT_EQ(ev.linear_sign, -1);
  EXPECT_EQ(equation_text(ev).substr(0, 10), "u_t - u_5x");
}

TEST(Io, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> e(-300, 300), m(-1, 1);
  for (int i = 0; i < 10000; ++i) {
    const double v = m(rng) * std::pow(10.0, e(rng));
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.05), "0.05");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-2.5e-7), "-2.5e-07");
}

TEST(Io, CsvEchoAndCells) {
  std::ostringstream os;
  CsvWriter w(os, {{"seed", "7"}, {"beta", "0.5"}}, {"a", "b", "c", "d"});
  w.row(1, 0.1, true, std::string("x"));
  EXPECT_EQ(os.str(), "# seed=7\n# beta=0.5\na,b,c,d\n1,0.1,1,x\n");
}

TEST(Io, TrajectoryCsvRoundTrip) {
  Trajectory tr;
  for (int f = 0; f < 3; ++f)
    tr.frames.push_back(SpectralField::sample(-3.3, 7.1, 32, [&](double x) { return std::sin(x + f) / 3; }, 0.125 * f));
  const auto path = temp_file("traj.csv");
  {
    std::ofstream os(path);
    write_trajectory_csv(os, {{"command", "simulate"}}, tr);
  }
  const auto back = read_trajectory_csv(path.string());
  ASSERT_EQ(back.frames.size(), tr.frames.size());
  for (std::size_t f = 0; f < tr.frames.size(); ++f) {
    EXPECT_EQ(back.frames[f].time, tr.frames[f].time);
    EXPECT_EQ(back.frames[f].values, tr.frames[f].values);
    EXPECT_NEAR(back.frames[f].x_lo, tr.frames[f].x_lo, 1e-14);
    EXPECT_NEAR(back.frames[f].length, tr.frames[f].length, 1e-12);
  }
  std::filesystem::remove(path);
}

TEST(Io, FieldCsvRejectsBadInput) {
  const auto path = temp_file("field.csv");
  auto write = [&](const std::string& s) {
    std::ofstream os(path);
    os << s;
  };
  write("x,u\n0,1\n0.5,2\n1,3\n");
  const auto f = read_field_csv(path.string());
  EXPECT_EQ(f.size(), 3u);
  EXPECT_NEAR(f.length, 1.5, 1e-15);
  write("x,u\n0,1\n0.5,2\n1.2,3\n");
  EXPECT_THROW(read_field_csv(path.string()), config_error);
  write("x,u\n0,1\n0.5\n");
  EXPECT_THROW(read_field_csv(path.string()), config_error);
  write("x,u\n0,1\n0.5,abc\n");
  EXPECT_THROW(read_field_csv(path.string()), config_error);
  std::filesystem::remove(path);
  EXPECT_THROW(read_field_csv(path.string()), config_error);
}
