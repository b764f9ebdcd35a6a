#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(KDVH_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), p)) > 0;) out.append(buf.data(), n);
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

nlohmann::json golden(int k) {
  std::ifstream f(std::string(KDVH_GOLDEN_DIR) + "/hierarchy_k" + std::to_string(k) + ".json");
  return nlohmann::json::parse(f);
}

}  // namespace

TEST(Cli, HierarchyMatchesGolden) {
  for (int k = 1; k <= 3; ++k) {
    const auto r = run("hierarchy --k " + std::to_string(k) + " --format json");
    ASSERT_EQ(r.status, 0);
    const auto got = nlohmann::json::parse(r.out);
    const auto want = golden(k);
    for (const char* key : {"k", "n", "parity_applied", "linear", "nonlinearity"}) EXPECT_EQ(got.at(key), want.at(key)) << k << " " << key;
    EXPECT_EQ(got.at("config").at("k"), k);
  }
}

TEST(Cli, HierarchyText) {
  const auto r = run("hierarchy --k 1");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("# k=1\n"), std::string::npos);
  EXPECT_NE(r.out.find("u_t + u_xxx + u u_x = 0"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("--help").status, 0);
  EXPECT_EQ(run("hierarchy --k 1 --no-such-option").status, 2);
  EXPECT_EQ(run("hierarchy --k 9").status, 2);
  EXPECT_EQ(run("hierarchy --k 2 --format yaml").status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("identities --lemma47 --nmax 21").status, 0);
  EXPECT_EQ(run("identities --operators --nmax 5").status, 0);
  EXPECT_EQ(run("identities --lemma47 --operators").status, 2);
  EXPECT_EQ(run("weights --beta -1").status, 2);
  EXPECT_EQ(run("simulate --ic /nonexistent/file.csv").status, 2);
}

TEST(Cli, IdentitiesReportAllMatches) {
  const auto r = run("identities --lemma47 --nmax 31");
  ASSERT_EQ(r.status, 0);
  std::istringstream is(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.starts_with("n,")) continue;
    EXPECT_EQ(line.back(), '1') << line;
    ++rows;
  }
  EXPECT_GT(rows, 100);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  for (const char* args : {"hierarchy --k 4 --format json", "identities --diffpoly --count 200 --seed 11",
                           "weights --beta 0.5 --N 6 --certify", "simulate --k 1 --M 256 --L 40 --x-lo -20 --t-end 0.1 --snapshots 2"}) {
    const auto a = run(args), b = run(args);
    EXPECT_EQ(a.status, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
    EXPECT_FALSE(a.out.empty()) << args;
  }
}
