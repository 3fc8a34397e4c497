#include <gtest/gtest.h>

#include <sstream>

#include "ecogame/io.hpp"
#include "support.hpp"

using namespace ecogame;

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 0.053435114503816793, 1e-300, -2.5e17}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(WriteJson, FloatsKeepFullPrecisionAndStayFloats) {
  const json j{{"a", 0.1}, {"b", 3.0}, {"c", 2}, {"d", std::nan("")}, {"e", json::array()}};
  EXPECT_EQ(dump_json(j, -1), "{\"a\":0.10000000000000001,\"b\":3.0,\"c\":2,\"d\":null,\"e\":[]}\n");
}

TEST(ParseRunConfig, DefaultsToReferenceConfig) {
  const auto rc = parse_run_config(json::object());
  EXPECT_EQ(rc.system.pop1.deltas, reference_config().pop1.deltas);
  EXPECT_EQ(rc.seed, 1u);
  EXPECT_EQ(rc.validation, ValidationMode::strict);
}

TEST(ParseRunConfig, NestedKeysAndMatrices) {
  const auto rc = parse_run_config(json::parse(R"({
    "pop1": {"payoffs": {"depleted": [[3, 4], [1, 1]], "abundant": [[0, 0], [10, 6]]}, "theta": 0.5},
    "pop2": {"alpha": 1.2},
    "epsilon": 0.5,
    "integrator": {"method": "rk45_adaptive", "t_max": 50, "record_stride": 3},
    "seed": 42,
    "validation": "warn"
  })"));
  EXPECT_EQ(rc.system.pop1.deltas, (PolicyDeltas{3, 2, 10, 6}));
  EXPECT_EQ(rc.system.pop1.theta, 0.5);
  EXPECT_EQ(rc.system.pop2.alpha, 1.2);
  EXPECT_EQ(rc.system.epsilon, 0.5);
  EXPECT_EQ(rc.integrator.method, IntegratorMethod::rk45_adaptive);
  EXPECT_EQ(rc.integrator.t_max, 50.0);
  EXPECT_EQ(rc.integrator.record_stride, 3u);
  EXPECT_EQ(rc.seed, 42u);
  EXPECT_EQ(rc.validation, ValidationMode::warn);
}

TEST(ParseRunConfig, RejectsUnknownAndMalformed) {
  EXPECT_THROW(parse_run_config(json::parse(R"({"pop3": {}})")), ConfigError);
  EXPECT_THROW(parse_run_config(json::parse(R"({"pop1": {"d_sp": 1}})")), ConfigError);
  EXPECT_THROW(parse_run_config(json::parse(R"({"epsilon": "x"})")), ConfigError);
  EXPECT_THROW(parse_run_config(json::parse(R"({"seed": -1})")), ConfigError);
  EXPECT_THROW(parse_run_config(json::parse(R"({"validation": "loose"})")), ConfigError);
  EXPECT_THROW(parse_run_config(json::parse(R"({"integrator": {"method": "euler"}})")), ConfigError);
  EXPECT_THROW(parse_run_config(json::parse("[1, 2]")), ConfigError);
  EXPECT_THROW(load_run_config("/nonexistent/config.json"), ConfigError);
}

TEST(ParseRunConfig, RoundTripThroughJson) {
  RunConfig rc;
  rc.system = reference_config(0.4);
  rc.system.pop1.deltas.d_rt0 = 0.1;
  rc.seed = 99;
  const auto back = parse_run_config(json::parse(dump_json(to_json(rc))));
  EXPECT_EQ(back.system.pop1.deltas, rc.system.pop1.deltas);
  EXPECT_EQ(back.system.pop2.alpha, 0.4);
  EXPECT_EQ(back.seed, 99u);
}

TEST(ParseRange, Specs) {
  const auto v = parse_range("0:1.2:121");
  ASSERT_EQ(v.size(), 121u);
  EXPECT_EQ(v.back(), 1.2);
  EXPECT_EQ(parse_range("0:0:1"), std::vector<double>{0.0});
  EXPECT_THROW(parse_range("0:1"), ConfigError);
  EXPECT_THROW(parse_range("0:1:0"), ConfigError);
  EXPECT_THROW(parse_range("0:1:x"), ConfigError);
  EXPECT_THROW(parse_range("1:0:5"), ConfigError);
  EXPECT_THROW(parse_range("a:1:5"), ConfigError);
  EXPECT_THROW(parse_range("0:1:5:6"), ConfigError);
}

TEST(Csv, Headers) {
  std::ostringstream traj, sens, curve;
  Trajectory t;
  t.times = {0.0};
  t.states = {{0.5, 0.0, 0.5}};
  write_trajectory_csv(traj, t);
  EXPECT_EQ(traj.str(), "t,x1,x2,n\n0,0.5,0,0.5\n");

  const std::vector<SensitivityCell> cells{{-1.0, 0.0, std::nullopt}};
  write_sensitivity_csv(sens, cells);
  EXPECT_EQ(sens.str(), "d_sp0,d_rt0,region,dR_dsp0,dR_drt0,rho\n-1,0,,,,\n");

  write_utility_curve_csv(curve, fixtures::paper_pop1(3, -0.5));
  std::istringstream lines(curve.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "alpha2,R,U");
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    const double a = std::stod(line.substr(0, line.find(',')));
    if (a > 0.5) {
      EXPECT_EQ(line.substr(line.rfind(',') + 1), "0");
    }
  }
  EXPECT_EQ(rows, 1001u);
}

TEST(ToJson, FixedPointRecords) {
  const auto j = to_json(enumerate_fixed_points(reference_config(0.25)));
  ASSERT_EQ(j.size(), 8u);
  EXPECT_EQ(j[0]["table_row"], "zA");
  EXPECT_EQ(j[0]["stability"], "stable");
  EXPECT_EQ(j[0]["eigenvalues"].size(), 3u);
  EXPECT_TRUE(j[7]["eigenvalues"].is_null());
}
