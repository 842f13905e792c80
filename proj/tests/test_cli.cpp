#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "vcc/driver.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(VCC_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> csv_row(const std::string& text, int line) {
  std::stringstream ss(text);
  std::string l;
  for (int i = 0; i <= line; ++i) std::getline(ss, l);
  std::vector<std::string> f;
  std::stringstream ls(l);
  for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
  return f;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kData = VCC_TEST_DATA_DIR;

}  // namespace

TEST(Cli, EnergyHartreeFock) {
  const auto r = run("energy --fixture " + kData + "/h2_0.74.fcidump --method hf");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(csv_row(r.out, 0).size(), 7u);
  const auto row = csv_row(r.out, 1);
  ASSERT_EQ(row.size(), 7u);
  const auto refs = vcc::read_references(kData + "/references.csv");
  EXPECT_NEAR(std::stod(row[2]), vcc::find_reference(refs, "h2", 0.74).e_hf, 1e-8);
  EXPECT_EQ(row[6], "true");
}

TEST(Cli, EnergyExactVccBracket) {
  const auto r = run("energy --fixture " + kData + "/h4_1.00.fcidump --method exact-vcc");
  EXPECT_EQ(r.code, 0);
  const auto row = csv_row(r.out, 1);
  const double e = std::stod(row[2]), hf = std::stod(row[3]), fci = std::stod(row[4]);
  EXPECT_GE(e, fci - 1e-9);
  EXPECT_LE(e, hf);
}

TEST(Cli, DataDirectoryFromEnvironment) {
  const auto r = run("energy --fixture h2_0.74.fcidump --method cvcc:1");
  EXPECT_EQ(r.code, 0);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("energy --fixture " + kData + "/h2_0.74.fcidump --method cvcc --degree -1").code, 1);
  EXPECT_EQ(run("energy --fixture " + kData + "/h2_0.74.fcidump --method cvcc").code, 1);
  EXPECT_EQ(run("energy --fixture " + kData + "/h2_0.74.fcidump --method nope").code, 1);
  EXPECT_EQ(run("energy --fixture /nonexistent.fcidump --method hf").code, 1);
  EXPECT_EQ(run("energy --fixture " + kData + "/references.csv --method hf").code, 1);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("bogus").code, 1);
  EXPECT_EQ(run("scan --fixture '" + kData + "/zz_*.fcidump' --method hf").code, 1);
  EXPECT_EQ(run("scan --fixture " + kData + "/h2_0.74.fcidump --method hf --workers 0").code, 1);
}

TEST(Cli, NonConvergenceExitCode) {
  const auto r = run("energy --fixture " + kData + "/h4_1.00.fcidump --method exact-vcc --max-iter 1");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(csv_row(r.out, 1)[6], "false");
}

TEST(Cli, ScanWritesByteStableCsv) {
  const std::string out1 = testing::TempDir() + "scan1.csv";
  const std::string out2 = testing::TempDir() + "scan2.csv";
  const std::string files = "--fixture " + kData + "/h4_0.50.fcidump --fixture " + kData + "/h4_0.70.fcidump";
  auto r1 = run("scan " + files + " --method cvcc:2,exact-vcc --workers 2 --output " + out1);
  auto r2 = run("scan " + files + " --method cvcc:2,exact-vcc --output " + out2);
  EXPECT_EQ(r1.code, 0);
  EXPECT_EQ(r2.code, 0);
  const std::string a = slurp(out1);
  EXPECT_EQ(a, slurp(out2));
  EXPECT_EQ(a.substr(0, a.find('\n')), "R,method,d,energy,e_fci,e_exact_vcc,error");
  EXPECT_NE(r1.out.find("max |E - E_exactVCC|"), std::string::npos);
}

TEST(Cli, QsvtVerify) {
  auto r = run("qsvt-verify --fixture " + kData + "/h2_0.74.fcidump --degree 3 --seed 42");
  EXPECT_EQ(r.code, 0);
  for (int line : {1, 2}) EXPECT_LE(std::stod(csv_row(r.out, line)[8]), 1e-8);
  r = run("qsvt-verify --fixture " + kData + "/h2_0.74.fcidump --degree 0");
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(std::stod(csv_row(r.out, 1)[7]), 1.0, 1e-12);
  EXPECT_EQ(run("qsvt-verify --fixture " + kData + "/h6_1.00.fcidump --degree 1").code, 1);
}

TEST(Cli, ColdStartScanMatchesIndependentRuns) {
  const std::string both = testing::TempDir() + "cold_both.csv";
  const std::string one = testing::TempDir() + "cold_one.csv";
  const std::string two = testing::TempDir() + "cold_two.csv";
  const std::string a = kData + "/h4_2.00.fcidump", b = kData + "/h4_2.10.fcidump";
  ASSERT_EQ(run("scan --fixture " + a + " --fixture " + b + " --method cvcc:2 --cold-start --output " + both).code, 0);
  ASSERT_EQ(run("scan --fixture " + a + " --method cvcc:2 --output " + one).code, 0);
  ASSERT_EQ(run("scan --fixture " + b + " --method cvcc:2 --output " + two).code, 0);
  const std::string second = slurp(two);
  EXPECT_EQ(slurp(both), slurp(one) + second.substr(second.find('\n') + 1));
  ASSERT_EQ(run("scan --fixture " + a + " --fixture " + b + " --method cvcc:2 --warm-start --output " + both).code, 0);
  EXPECT_NE(slurp(both).find("2.10,cvcc,2"), std::string::npos);
}
