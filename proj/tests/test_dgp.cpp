#include <gtest/gtest.h>

#include <chrono>
#include <map>
#include <sstream>

#include "tsselect/dgp.hpp"

using namespace tsselect;

namespace {

// The two generating equations iterated as written, independent of the VAR matrices.
void direct_recursion(const DgpParams& p, const std::vector<double>& u, const std::vector<double>& e,
                      int presample, std::vector<double>& y, std::vector<double>& z) {
  const int n = static_cast<int>(u.size());
  y.assign(static_cast<std::size_t>(n) + 3, 0.0);
  z.assign(static_cast<std::size_t>(n) + 3, 0.0);
  for (int i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i) + 3;
    const double t = i - presample + 1;
    z[k] = p.m1 + p.m2 * t + p.m3 * z[k - 1] + e[static_cast<std::size_t>(i)];
    const double dy1 = y[k - 1] - y[k - 2], dy2 = y[k - 2] - y[k - 3];
    const double dz0 = z[k] - z[k - 1], dz1 = z[k - 1] - z[k - 2], dz2 = z[k - 2] - z[k - 3];
    const double dy = p.b1 + p.b2 * t + p.b3 * y[k - 1] + p.b4 * dy1 + p.b5 * dy2 + p.b6 * z[k] +
                      p.b7 * dz0 + p.b8 * dz1 + p.b9 * dz2 +
                      p.b10 * (y[k - 1] - (p.c1 + p.c2 * z[k - 1])) + u[static_cast<std::size_t>(i)];
    y[k] = y[k - 1] + dy;
  }
  y.erase(y.begin(), y.begin() + 3);
  z.erase(z.begin(), z.begin() + 3);
}

double max_scaled_gap(const SeriesPair& s, const std::vector<double>& y, const std::vector<double>& z) {
  double worst = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    worst = std::max(worst, std::abs(s.y[i] - y[i]) / std::max(1.0, std::abs(y[i])));
    worst = std::max(worst, std::abs(s.z[i] - z[i]) / std::max(1.0, std::abs(z[i])));
  }
  return worst;
}

}  // namespace

TEST(ToVar, IndependentRandomWalks) {
  const VarCoefficients v = to_var(DgpParams{});
  EXPECT_TRUE(v.M1.isApprox(Eigen::Matrix2d::Identity()));
  EXPECT_TRUE(v.M2.isZero());
  EXPECT_TRUE(v.M3.isZero());
  EXPECT_TRUE(v.psi.isZero());
}

TEST(ToVar, StationaryPair) {
  DgpParams p;
  p.b3 = -0.5;
  p.m1 = 1;
  p.m3 = 0.5;
  const VarCoefficients v = to_var(p);
  EXPECT_DOUBLE_EQ(v.M1(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(v.M1(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(v.M1(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(v.M1(1, 1), 0.5);
  EXPECT_DOUBLE_EQ(v.psi(1, 0), 1.0);
}

TEST(ToVar, RoutesAgreeOnCointegratedFamilies) {
  for (const auto& perm : enumerate_permutations(Scenario::all)) {
    const int f = perm.model.family();
    if (f != 13 && f != 14) continue;
    const auto a = to_var_structural(perm.theta), b = to_var_ecm(perm.theta);
    EXPECT_LT((a.psi - b.psi).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((a.M1 - b.M1).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((a.M2 - b.M2).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((a.M3 - b.M3).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((a.shock_transform - b.shock_transform).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ToVar, RejectsInvalid) {
  DgpParams p;
  p.b3 = 0.5;
  EXPECT_THROW(to_var(p), std::invalid_argument);
  p = DgpParams{};
  p.b4 = 0.6;
  p.b5 = 0.5;
  EXPECT_THROW(to_var(p), std::invalid_argument);
  p = DgpParams{};
  p.c1 = 1;
  EXPECT_THROW(to_var(p), std::invalid_argument);
  p = DgpParams{};
  p.b10 = -0.5;
  EXPECT_THROW(to_var(p), std::invalid_argument);
  p = DgpParams{};
  p.m3 = 0;
  EXPECT_THROW(to_var(p), std::invalid_argument);
}

TEST(Simulate, MatchesDirectRecursionOnGrid) {
  const auto perms = enumerate_permutations(Scenario::all);
  double worst = 0;
  for (std::size_t k = 0; k < perms.size(); ++k) {
    const auto s = simulate(perms[k].theta, StreamKey{77, static_cast<std::uint32_t>(k), 0});
    std::vector<double> y, z;
    direct_recursion(perms[k].theta, s.u, s.e, s.presample_len, y, z);
    worst = std::max(worst, max_scaled_gap(s, y, z));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Simulate, ZeroShocksGiveZeros) {
  std::vector<double> zeros(150, 0.0);
  const auto s = simulate_with_shocks(DgpParams{}, zeros, zeros, 100);
  for (double v : s.y) EXPECT_EQ(v, 0.0);
  for (double v : s.z) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(s.sample_len, 50);
}

TEST(Simulate, BitIdenticalRegeneration) {
  DgpParams p;
  p.b1 = 1;
  p.b3 = -0.5;
  p.b4 = 0.5;
  p.m1 = 1;
  p.m3 = 0.5;
  const auto a = simulate(p, StreamKey{5, 1, 2}), b = simulate(p, StreamKey{5, 1, 2});
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.z, b.z);
  const auto c = simulate(p, StreamKey{5, 1, 3});
  EXPECT_NE(a.y, c.y);
}

TEST(Simulate, TimeIndexAndLengths) {
  const auto s = simulate(DgpParams{}, 1, 50, 100);
  EXPECT_EQ(s.size(), 150);
  EXPECT_EQ(s.idx(1), 100);
  EXPECT_EQ(s.idx(-2), 97);
  EXPECT_THROW(simulate(DgpParams{}, 1, 5, 100), std::invalid_argument);
  EXPECT_THROW(simulate(DgpParams{}, 1, 50, 2), std::invalid_argument);
}

// A deterministic trend enters through t = i - presample + 1.
TEST(Simulate, TrendUsesSampleClock) {
  DgpParams p;
  p.b1 = 1;
  p.b2 = 1;
  p.b3 = -1;
  std::vector<double> zeros(13, 0.0);
  const auto s = simulate_with_shocks(p, zeros, zeros, 3);
  for (int t = -2; t <= 10; ++t) EXPECT_DOUBLE_EQ(s.Y(t), 1.0 + t);
}

TEST(Simulate, WhiteNoiseMean) {
  DgpParams p;
  p.b1 = 1;
  p.b3 = -1;
  const auto s = simulate(p, 11, 10000, 100);
  double m = 0;
  for (int t = 1; t <= s.sample_len; ++t) m += s.Y(t);
  EXPECT_NEAR(m / s.sample_len, 1.0, 0.05);
}

TEST(Simulate, DriftLawOfLargeNumbers) {
  DgpParams p;
  p.m1 = 1;
  const auto s = simulate(p, 12, 10000, 100);
  double m = 0;
  for (int t = 1; t <= s.sample_len; ++t) m += s.dZ(t);
  EXPECT_NEAR(m / s.sample_len, 1.0, 0.05);
}

TEST(Simulate, CsvRoundTrip) {
  const auto s = simulate(DgpParams{}, 3, 20, 5);
  std::stringstream ss;
  write_series_csv(ss, s);
  const auto r = read_series_csv(ss);
  EXPECT_EQ(r.presample_len, 5);
  EXPECT_EQ(r.sample_len, 20);
  EXPECT_EQ(r.y, s.y);
  EXPECT_EQ(r.z, s.z);
  std::stringstream bad("y,z\n1,2\nx,3\n");
  EXPECT_THROW(read_series_csv(bad), std::runtime_error);
}

TEST(Permutations, PublishedCounts) {
  const auto t0 = std::chrono::steady_clock::now();
  EXPECT_EQ(enumerate_permutations(Scenario::all).size(), 1090u);
  EXPECT_EQ(enumerate_permutations(Scenario::no_trend).size(), 259u);
  EXPECT_EQ(enumerate_permutations(Scenario::trend).size(), 286u);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 3.0);
}

// The literal value sets overshoot; the whole difference sits in the cointegrated families.
TEST(Permutations, LiteralRulesDiff) {
  const auto lit = enumerate_permutations(Scenario::all, GridRules::literal());
  const auto pub = enumerate_permutations(Scenario::all);
  EXPECT_EQ(lit.size(), 1330u);
  EXPECT_EQ(enumerate_permutations(Scenario::no_trend, GridRules::literal()).size(), 319u);
  EXPECT_EQ(enumerate_permutations(Scenario::trend, GridRules::literal()).size(), 346u);
  std::map<int, int> diff;
  for (const auto& p : lit) ++diff[p.model.family()];
  for (const auto& p : pub) --diff[p.model.family()];
  for (const auto& [fam, d] : diff) {
    if (fam == 13 || fam == 14) EXPECT_EQ(d, 120) << fam;  // 2 Z processes x 60
    else EXPECT_EQ(d, 0) << fam;
  }
}

TEST(Permutations, EveryPermutationClassifies) {
  for (Scenario sc : {Scenario::all, Scenario::no_trend, Scenario::trend}) {
    for (const auto& p : enumerate_permutations(sc)) {
      const auto m = classify_params(p.theta);
      ASSERT_TRUE(m.has_value()) << p.theta.to_string();
      EXPECT_EQ(*m, p.model);
      EXPECT_NE(m->family(), 15);
      EXPECT_NE(m->family(), 16);
      EXPECT_EQ(classify_z(p.theta.m1, p.theta.m2, p.theta.m3), p.z_kind);
      EXPECT_NO_THROW(p.theta.validate());
      if (sc == Scenario::no_trend) {
        EXPECT_EQ(p.model.family() % 2, 1);
        EXPECT_FALSE(z_has_trend(p.z_kind));
      }
      if (sc == Scenario::trend) {
        EXPECT_EQ(p.model.family() % 2, 0);
        EXPECT_TRUE(z_has_trend(p.z_kind));
      }
    }
  }
}

TEST(Permutations, SentinelsApplied) {
  int unit = 0, tiny = 0;
  for (const auto& p : enumerate_permutations(Scenario::all)) {
    EXPECT_NE(p.theta.b10, -1.0);
    if (p.theta.sentinel.b10_unit) {
      ++unit;
      EXPECT_EQ(p.theta.b10, DgpParams::unit_speed_value);
    }
    if (p.model.family() == 13) {
      EXPECT_TRUE(p.theta.sentinel.b1_tiny);
      EXPECT_EQ(p.theta.b1, DgpParams::tiny_value);
      ++tiny;
    }
  }
  EXPECT_GT(unit, 0);
  EXPECT_EQ(tiny, 360);
}
