#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "lowk/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = lowk::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> v;
  std::istringstream is(line);
  for (std::string f; std::getline(is, f, ',');) v.push_back(f);
  if (!line.empty() && line.back() == ',') v.emplace_back();
  return v;
}

double slope_of(const std::string& csv) {
  const auto l = lines(csv);
  const auto pos = l.at(1).find("slope=");
  return std::stod(l.at(1).substr(pos + 6));
}

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

struct EnvGuard {
  explicit EnvGuard(const char* value) { setenv("LOWK_GREEN_TOL", value, 1); }
  ~EnvGuard() { unsetenv("LOWK_GREEN_TOL"); }
};

}  // namespace

TEST(CliExpand, ParabolicCsvListsEvenCoefficients) {
  const auto r = run({"expand", "parabolic", "--x", "1.2", "--y", "1", "--order", "2", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 7u);
  EXPECT_EQ(l[0].rfind("# case=iv validity=unbounded", 0), 0u) << l[0];
  EXPECT_EQ(l[1], "n,g_n,closed_form,residual");
  const auto gm2 = fields(l[2]);
  EXPECT_EQ(gm2[0], "-2");
  EXPECT_LT(std::abs(std::stod(gm2[3])), 1e-12);
  EXPECT_EQ(fields(l[6])[0], "2");
  EXPECT_NEAR(std::stod(fields(l[6])[1]), 0.11507634291836, 1e-10);
}

TEST(CliExpand, JsonIsDefaultAndParses) {
  const auto r = run({"expand", "parabolic", "--order", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.contains("closed_form_checks"));
  EXPECT_EQ(j["closed_form_checks"].size(), 2u);
}

TEST(CliExpand, LogstepOrderAboveValidityIsUsageError) {
  const auto r = run({"expand", "logstep", "--alpha", "1.5", "--order", "2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("N=0"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("logstep"), std::string::npos) << r.err;
}

TEST(CliExpand, BarrierGenericAtDefaults) {
  const auto r = run({"expand", "barrier", "--a", "1", "--generic", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  EXPECT_NE(l[0].find("x=0.5 y=-0.5"), std::string::npos);
  const double want = -std::pow(std::cosh(0.5), 2) / std::sinh(2.0);
  EXPECT_NEAR(std::stod(fields(l[2])[1]), want, 1e-8);
}

TEST(CliExpand, ShowTermsIncludesTables) {
  const auto r = run({"expand", "exponential", "--order", "1", "--show-terms"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.contains("terms"));
  EXPECT_GT(j["terms"].size(), 0u);
  const auto c = run({"expand", "exponential", "--order", "1", "--show-terms", "--format", "csv"});
  EXPECT_NE(c.out.find("# term "), std::string::npos);
}

TEST(CliErrors, ExitCodes) {
  EXPECT_EQ(run({"expand", "nosuch"}).code, 2);
  EXPECT_EQ(run({"expand", "parabolic", "--bogus"}).code, 2);
  EXPECT_EQ(run({"expand", "parabolic", "--x", "0", "--y", "1"}).code, 2);
  EXPECT_EQ(run({"expand", "parabolic", "--order", "-3"}).code, 2);
  EXPECT_EQ(run({"compare", "parabolic", "--k-start", "-1"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"brackets", "parabolic"}).code, 2);
  // e^{+V} over an infinite range is a numerical failure
  const auto r = run({"brackets", "parabolic", "--plain", "+"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("DivergentTail"), std::string::npos);
  EXPECT_EQ(run({"scaling", "parabolic", "--k-count", "1"}).code, 3);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliBrackets, Examples) {
  auto value = [](const Result& r) { return std::stod(fields(lines(r.out).at(2)).at(3)); };
  const auto g = run({"brackets", "parabolic", "--plain", "-", "--lower", "-inf", "--upper", "inf"});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_NEAR(value(g), std::sqrt(std::numbers::pi), 1e-12);
  const auto f = run({"brackets", "free", "--plain", "+", "--lower", "0", "--upper", "1"});
  EXPECT_NEAR(value(f), 1.0, 1e-14);
  const auto l = run({"brackets", "logcosh", "--plain", "--", "--lower", "-inf", "--upper", "0"});
  ASSERT_EQ(l.code, 0) << l.err;
  const auto row = fields(lines(l.out)[2]);
  EXPECT_EQ(row[0], "[--]");
  EXPECT_GT(std::stod(row[3]), 0.0);
  EXPECT_GE(std::stod(row[4]), 0.0);
}

TEST(CliScaling, Examples) {
  const auto a = run({"scaling", "logstep", "--alpha", "1.5", "--order", "0"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NEAR(slope_of(a.out), 0.5, 0.1);
  EXPECT_NE(a.out.find("verdict=PASS"), std::string::npos);
  const auto p = run({"scaling", "parabolic", "--order", "0"});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_NEAR(slope_of(p.out), 2.0, 0.15);
  const auto b = run({"scaling", "logstep", "--alpha", "2.5", "--order", "1"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NEAR(slope_of(b.out), 1.5, 0.1);
}

TEST(CliCompare, ColumnsAndRows) {
  const auto r = run({"compare", "exponential", "--order", "1", "--k-count", "5", "--log-form"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 7u);
  EXPECT_EQ(l[0].rfind("# case=ii", 0), 0u);
  const auto h = fields(l[1]);
  EXPECT_EQ(h.front(), "k");
  EXPECT_NE(std::find(h.begin(), h.end(), "re_logform"), h.end());
  EXPECT_NE(std::find(h.begin(), h.end(), "re_trunc_m1"), h.end());
  for (std::size_t i = 2; i < l.size(); ++i) EXPECT_EQ(fields(l[i]).size(), h.size());
  const auto p = run({"compare", "parabolic", "--order", "2", "--k-count", "3", "--pole"});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_NE(lines(p.out)[1].find("resid_pole"), std::string::npos);
}

TEST(CliProperty, OutputIsDeterministicAcrossThreadCounts) {
  const std::vector<std::string> base = {"compare", "parabolic", "--order", "2", "--k-count", "16", "--log-form"};
  auto with = [&](const char* t) {
    auto a = base;
    a.insert(a.end(), {"--threads", t});
    return run(a);
  };
  const auto one = with("1");
  const auto four = with("4");
  const auto again = with("4");
  ASSERT_EQ(one.code, 0) << one.err;
  EXPECT_EQ(one.out, four.out);
  EXPECT_EQ(four.out, again.out);
}

TEST(CliProperty, EveryCsvHasCaseCommentAndHeader) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"expand", "logcosh", "--format", "csv"},
           {"compare", "sqrtwell", "--k-count", "2"},
           {"brackets", "tanhstep", "--angle-left", "-", "--upper", "0"},
           {"scaling", "parabolic"},
           {"oracle", "barrier", "--a", "1", "--k-count", "2"}}) {
    const auto r = run(args);
    ASSERT_EQ(r.code, 0) << args[0] << ": " << r.err;
    const auto l = lines(r.out);
    ASSERT_GE(l.size(), 3u);
    EXPECT_EQ(l[0].rfind("# case=", 0), 0u) << args[0];
    EXPECT_NE(l[0].find(" validity="), std::string::npos) << args[0];
    std::size_t h = 1;
    while (l[h].rfind("#", 0) == 0) ++h;
    EXPECT_FALSE(fields(l[h]).empty());
    EXPECT_TRUE(std::isalpha(static_cast<unsigned char>(l[h][0]))) << l[h];
  }
}

TEST(CliConfig, FileSuppliesOptionsAndFlagsOverride) {
  const auto path = temp_file("lowk_cli_config.json");
  {
    std::ofstream f(path);
    f << R"({"x": 1.2, "y": 1.0, "order": 2, "expand": {"format": "csv"}})";
  }
  const auto r = run({"expand", "parabolic", "--config", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 7u);  // comment, header, orders -2..2
  const auto o = run({"expand", "parabolic", "--config", path.string(), "--order", "0"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(lines(o.out).size(), 5u);
  {
    std::ofstream f(path);
    f << R"({"nonsense": 1})";
  }
  EXPECT_EQ(run({"expand", "parabolic", "--config", path.string()}).code, 2);
  EXPECT_EQ(run({"expand", "parabolic", "--config", "/nonexistent/lowk.json"}).code, 2);
  std::filesystem::remove(path);
}

TEST(CliConfig, EnvironmentToleranceIsAppliedAndFlagWins) {
  const std::vector<std::string> args = {"oracle", "parabolic", "--k-count", "2"};
  const auto plain = run(args);
  std::string loose, flagged;
  {
    EnvGuard env("1e-4");
    loose = run(args).out;
    auto a = args;
    a.insert(a.end(), {"--ode-tol", "1e-12"});
    flagged = run(a).out;
  }
  EXPECT_NE(plain.out, loose);
  EXPECT_EQ(plain.out, flagged);
  EnvGuard bad("abc");
  EXPECT_EQ(run(args).code, 2);
}

TEST(CliOutput, WritesFile) {
  const auto path = temp_file("lowk_cli_out.csv");
  const auto r = run({"oracle", "free", "--k-count", "3", "--output", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(lines(ss.str()).size(), 5u);
  std::filesystem::remove(path);
}
