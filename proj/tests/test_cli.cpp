#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sntp/cli.hpp"

using namespace sntp;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "sntp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sntp_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    rows.push_back(row);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
}

const char* kValid = R"({
  "name": "t",
  "process": "sntp",
  "households": [
    {"utility": {"family": "cobb_douglas_log", "weights": [0.5, 0.5]}, "endowment": [2, 1]},
    {"utility": {"family": "ces", "weights": [0.5, 0.5], "sigma": 0.5}, "endowment": [1, 2]}
  ],
  "prior": {"q": {"kind": "arctan_normal", "center_rate": 1, "sigma_angle": 0.1}, "speed": "max_speed"},
  "engine": {"runs": 3, "master_seed": 4}
})";

}  // namespace

TEST(Scenario, ParsesValid) {
  const cli::Scenario s = cli::parse_scenario(kValid);
  EXPECT_EQ(s.name, "t");
  EXPECT_EQ(s.config.runs, 3);
  EXPECT_EQ(s.config.master_seed, 4u);
  EXPECT_EQ(s.config.economy.size(), 2u);
  EXPECT_EQ(s.config.prior.s_prior, SpeedPrior::MaxSpeed);
  EXPECT_TRUE(std::holds_alternative<ArctanNormal>(s.config.prior.q_prior));
}

TEST(Scenario, StrictKeys) {
  std::string typo = kValid;
  typo.replace(typo.find("\"runs\""), 6, "\"rnus\"");
  EXPECT_THROW(cli::parse_scenario(typo), cli::ConfigError);
  std::string extra = kValid;
  extra.replace(extra.find("\"speed\""), 7, "\"sped\": 1, \"speed\"");
  EXPECT_THROW(cli::parse_scenario(extra), cli::ConfigError);
  EXPECT_THROW(cli::parse_scenario("{"), cli::ConfigError);
  std::string wrong_type = kValid;
  wrong_type.replace(wrong_type.find("\"runs\": 3"), 9, "\"runs\": \"3\"");
  EXPECT_THROW(cli::parse_scenario(wrong_type), cli::ConfigError);
}

TEST(Scenario, BundledLoad) {
  const auto names = cli::bundled_scenario_names();
  for (const char* want : {"example3", "example4_sticky", "example5_uniform", "example5_maxspeed"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), want), names.end()) << want;
    EXPECT_NO_THROW(cli::load_scenario(want));
  }
  const cli::Scenario sticky = cli::load_scenario("example4_sticky");
  const auto& an = std::get<ArctanNormal>(sticky.config.prior.q_prior);
  EXPECT_EQ(an.center_rate, 1.0);
  EXPECT_EQ(an.sigma_angle, 0.05);
  EXPECT_EQ(sticky.config.runs, 10000);
  EXPECT_THROW(cli::load_scenario("no_such_scenario"), cli::ConfigError);
}

TEST(Simulate, ByteIdenticalRepeats) {
  const fs::path a = scratch("sim_a");
  const fs::path b = scratch("sim_b");
  const fs::path c = scratch("sim_c");
  auto args = [](const fs::path& d, const char* threads) {
    return std::vector<std::string>{"simulate", "--scenario", "example5_uniform", "--runs", "40", "--seed", "7",
                                    "--trace",  "--threads",  threads,            "--out",  d.string()};
  };
  ASSERT_EQ(invoke(args(a, "1")).code, 0);
  ASSERT_EQ(invoke(args(b, "1")).code, 0);
  ASSERT_EQ(invoke(args(c, "4")).code, 0);
  for (const char* f : {"outcomes.csv", "summary.json", "trajectories.csv"}) {
    EXPECT_FALSE(slurp(a / f).empty()) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(c / f)) << f;
  }
  const auto rows = read_csv(a / "outcomes.csv");
  EXPECT_EQ(rows.size(), 41u);
  EXPECT_NE(slurp(a / "summary.json").find("\"schema_version\": 1"), std::string::npos);
}

TEST(Simulate, ExitCodes) {
  const fs::path dir = scratch("sim_codes");
  EXPECT_EQ(invoke({"simulate", "--scenario", "example5_uniform", "--max-steps", "0", "--out", dir.string()}).code, 2);
  EXPECT_EQ(invoke({"simulate", "--scenario", "missing.json"}).code, 2);
  EXPECT_EQ(invoke({"simulate", "--bogus"}).code, 2);

  const fs::path scen = dir / "ces_2x3.json";
  std::ofstream(scen) << R"({
    "name": "ces_2x3",
    "process": "sntp",
    "households": [
      {"utility": {"family": "ces", "weights": [0.2, 0.3, 0.5], "sigma": 0.5}, "endowment": [2, 1, 1]},
      {"utility": {"family": "ces", "weights": [0.4, 0.4, 0.2], "sigma": 0.3}, "endowment": [1, 2, 3]}
    ],
    "prior": {"q": {"kind": "uniform_arc"}, "speed": "uniform_cube"},
    "engine": {"runs": 1, "master_seed": 1}
  })";
  const Result r = invoke({"simulate", "--scenario", scen.string(), "--out", dir.string()});
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_FALSE(r.err.empty());
}

TEST(Example3, SingleRunAndValues) {
  const fs::path dir = scratch("ex3");
  const Result r = invoke({"example3", "--runs", "1", "--seed", "3", "--out", dir.string()});
  ASSERT_EQ(r.code, 0);
  const auto rows = read_csv(dir / "example3.csv");
  const std::size_t mass = column(rows[0], "empirical_mass");
  double total = 0.0;
  int nonzero = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double m = std::stod(rows[i][mass]);
    total += m;
    nonzero += m > 0.0 ? 1 : 0;
  }
  EXPECT_EQ(total, 1.0);
  EXPECT_EQ(nonzero, 1);
  EXPECT_NE(r.out.find("1.4583333333333333"), std::string::npos);
  EXPECT_EQ(invoke({"example3", "--runs", "0", "--out", dir.string()}).code, 2);
}

TEST(Manifold, Examples) {
  const fs::path dir = scratch("manifold");
  auto run_kind = [&](const char* kind, const char* rep) {
    const Result r = invoke({"manifold", "--family", "cobb_douglas_log", "--weights", "0.5,0.5", "--representation", rep,
                             "--anchor", "1,1", "--kind", kind, "--out", dir.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    return read_csv(dir / "manifold.csv");
  };
  auto rows = run_kind("indifference", "exponential");
  ASSERT_GT(rows.size(), 10u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i][column(rows[0], "u")]), 1.0, 1e-9);

  rows = run_kind("offer", "canonical");
  ASSERT_GT(rows.size(), 10u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double p1 = std::stod(rows[i][column(rows[0], "p_1")]);
    const double p2 = std::stod(rows[i][column(rows[0], "p_2")]);
    EXPECT_NEAR(p1 + p2, 1.0, 1e-9);
  }

  rows = run_kind("trade_hyperplane", "canonical");
  ASSERT_GT(rows.size(), 10u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double c1 = std::stod(rows[i][column(rows[0], "c_1")]);
    const double c2 = std::stod(rows[i][column(rows[0], "c_2")]);
    EXPECT_NEAR(0.5 * c1 + 0.5 * c2, 1.0, 1e-9);
  }

  EXPECT_EQ(invoke({"manifold", "--family", "cobb_douglas_log", "--weights", "0.5,0.5", "--anchor", "1,-1", "--out",
                    dir.string()})
                .code,
            2);
  EXPECT_EQ(invoke({"manifold", "--family", "cobb_douglas_log", "--weights", "0.5,0.5", "--anchor", "1,1,1", "--out",
                    dir.string()})
                .code,
            2);
}

TEST(Verify, FilterAndFault) {
  const Result r = invoke({"verify", "--filter", "jacobian", "--draws", "50"});
  EXPECT_EQ(r.code, 0) << r.out;
  std::istringstream lines(r.out);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    EXPECT_EQ(line.rfind("name=jacobian/", 0), 0u) << line;
    ++n;
  }
  EXPECT_EQ(n, 4);
  EXPECT_EQ(invoke({"verify", "--filter", "jacobian", "--draws", "50", "--inject-fault"}).code, 1);
  EXPECT_EQ(invoke({"verify", "--filter", "nothing_matches"}).code, 2);
}
