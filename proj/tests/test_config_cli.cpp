#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "tsselect/tsselect.hpp"

using namespace tsselect;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

std::string error_of(const std::string& text) {
  try {
    RunConfig c = parse(text);
    c.validate();
  } catch (const config_error& e) {
    return e.what();
  }
  return "";
}

const char* kSweep = R"({"mode": "sweep", "name": "t", "strategies": ["AIC", "SIC", "Jo-5%"], "reps": 6,
  "sweep": {"base": {"b1": 1, "b3": -1, "m1": 1, "m3": 0.5}, "parameter": "b6", "values": [0.2, 0.8]}})";

}  // namespace

TEST(Config, ParsesSweep) {
  const RunConfig c = parse(kSweep);
  EXPECT_EQ(c.mode, Mode::sweep);
  EXPECT_TRUE(c.mode_given);
  EXPECT_EQ(c.strategies.size(), 3u);
  EXPECT_EQ(c.sweep.parameter, "b6");
  EXPECT_EQ(c.sweep.base.m3, 0.5);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_NE(error_of(R"({"mode": "regret", "strategies": []})").find("strategies"), std::string::npos);
  EXPECT_NE(error_of(R"({"mode": "regret", "strategies": ["SIC", "SIC"]})").find("strategies[1]"), std::string::npos);
  EXPECT_NE(error_of(R"({"mode": "regret", "strategies": ["SIC", "BIC"]})").find("strategies[1]"), std::string::npos);
  EXPECT_NE(error_of(R"({"mode": "regret", "reps": 0})").find("reps"), std::string::npos);
  EXPECT_NE(error_of(R"({"mode": "regret", "reps": "many"})").find("reps"), std::string::npos);
  EXPECT_NE(error_of(R"({"mode": "regret", "colour": 1})").find("colour"), std::string::npos);
  EXPECT_NE(error_of(R"({"mode": "fly"})").find("mode"), std::string::npos);
  EXPECT_NE(error_of(R"({"scenario": "sometimes"})").find("scenario"), std::string::npos);
  EXPECT_NE(error_of(R"({"mode": "sweep", "sweep": {"parameter": "b6", "values": []}})").find("sweep.values"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"mode": "sweep", "sweep": {"parameter": "b99", "values": [1]}})").find("sweep.parameter"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"mode": "sweep", "sweep": {"base": {"q": 1}, "parameter": "b6", "values": [1]}})")
                .find("sweep.base.q"),
            std::string::npos);
  // b10 without a cointegrating slope is not a valid process
  EXPECT_NE(error_of(R"({"mode": "sweep", "sweep": {"parameter": "b10", "values": [-0.5]}})").find("sweep.values[0]"),
            std::string::npos);
  EXPECT_NE(error_of("{ not json").find("JSON"), std::string::npos);
  EXPECT_NE(error_of(R"({"mode": "select", "select": {"input": "x.csv", "tests": ["SIC"]}})").find("select.tests[0]"),
            std::string::npos);
}

TEST(Config, ShippedPresetsValidate) {
  for (const char* name : {"figure3a", "figure3b", "figure3c", "figure3d", "figure3e", "figure3f", "figure5",
                           "tables3_4_no_trend", "table6_trend", "table7_all", "recalibrate"}) {
    const std::string path = std::string(TSSELECT_PRESET_DIR) + "/" + name + ".json";
    RunConfig c;
    ASSERT_NO_THROW(c = load_config(path)) << path;
    EXPECT_NO_THROW(c.validate()) << path;
  }
}

TEST(Sweep, SameSeedGivesIdenticalCsv) {
  const RunConfig c = parse(kSweep);
  auto run = [&] {
    const auto cells = run_cells(sweep_cells(c), parse_strategies(c.strategies), run_options(c));
    std::ostringstream os;
    write_sweep_csv(os, c, cells);
    return os.str();
  };
  const std::string a = run(), b = run();
  EXPECT_EQ(a, b);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 2 + 2 * 3);
  RunConfig other = c;
  other.master_seed += 1;
  std::ostringstream os;
  write_sweep_csv(os, other, run_cells(sweep_cells(other), parse_strategies(other.strategies), run_options(other)));
  EXPECT_NE(os.str(), a);
}

TEST(Select, WeightsSumToOneAndFollowTheCriterion) {
  DgpParams p;
  p.b4 = 0.5;
  p.b8 = 1;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const SeriesPair d = simulate(p, seed, 50, 3);
    const SelectReport rep = build_select_report(d, SelectSpec{});
    ASSERT_FALSE(rep.rankings.empty());
    for (const auto& r : rep.rankings) {
      if (!r.weights) continue;
      double sum = 0, best_w = -1;
      ModelId best = ModelId::of(1, 0);
      for (const auto& e : r.weights->entries) {
        sum += e.weight;
        if (e.weight > best_w) best_w = e.weight, best = e.id;
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
      EXPECT_EQ(best, r.ranked.front().first);
    }
    EXPECT_EQ(rep.tests.size(), 6u);
  }
}

TEST(Select, ConstantZIsDiagnosed) {
  DgpParams p;
  p.b1 = 0.3;
  SeriesPair d = simulate(p, 5, 40, 3);
  for (auto& z : d.z) z = 2.0;
  SelectSpec spec;
  spec.tests.clear();
  const SelectReport rep = build_select_report(d, spec);
  bool named = false;
  for (const auto& m : rep.diagnostics) named = named || m.find("Z(t)") != std::string::npos;
  EXPECT_TRUE(named);
}

TEST(Select, ShortInputIsRejected) {
  SeriesPair d = simulate(DgpParams{}, 5, 10, 3);
  EXPECT_THROW(build_select_report(d, SelectSpec{}), config_error);
}

TEST(SeriesCsv, RoundTrips) {
  const SeriesPair d = simulate(DgpParams{}, 8, 30, 3);
  std::stringstream ss;
  write_series_csv(ss, d);
  const SeriesPair r = read_series_csv(ss);
  ASSERT_EQ(r.sample_len, d.sample_len);
  for (int t = -2; t <= d.sample_len; ++t) {
    EXPECT_NEAR(r.Y(t), d.Y(t), 1e-9 * (1 + std::abs(d.Y(t))));
    EXPECT_NEAR(r.Z(t), d.Z(t), 1e-9 * (1 + std::abs(d.Z(t))));
  }
}
