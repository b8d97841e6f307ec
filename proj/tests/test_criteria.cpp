#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tsselect/criteria.hpp"

using namespace tsselect;

namespace {

// Written out term by term in long double, separately from the library.
long double oracle(CriterionKind k, long double rss, long double T, long double C) {
  const long double fit = T * std::log(rss / T);
  switch (k) {
    case CriterionKind::AIC: return fit + 2 * C + 2;
    case CriterionKind::AICc: return fit + (2 * T * C + 2 * T) / (T - C - 2);
    case CriterionKind::AICu: return T * (std::log(rss) - std::log(T - C)) + (2 * T * C + 2 * T) / (T - C - 2);
    case CriterionKind::SIC: return fit + std::log(T) * C;
    case CriterionKind::FPEu: return rss * (T + C + 1) / ((T - C) * (T - C - 1));
    default: return 0;
  }
}

}  // namespace

TEST(Criteria, PrintedExamples) {
  EXPECT_NEAR(information_criterion(CriterionKind::AIC, 50, 50, 0), 2.0, 1e-12);
  EXPECT_NEAR(information_criterion(CriterionKind::AICc, 50, 50, 1), 200.0 / 47.0, 1e-12);
  EXPECT_NEAR(information_criterion(CriterionKind::SIC, 50, 50, 2), 2 * std::log(50.0), 1e-12);
  EXPECT_NEAR(information_criterion(CriterionKind::AICu, 48, 50, 2), 300.0 / 46.0, 1e-12);
  EXPECT_NEAR(information_criterion(CriterionKind::FPEu, 48, 50, 2), 53.0 / 47.0, 1e-12);
}

TEST(Criteria, IndependentOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> R(1e-3, 1e3);
  std::uniform_int_distribution<int> Tt(10, 500);
  for (int i = 0; i < 1000; ++i) {
    const int T = Tt(rng);
    const int C = std::uniform_int_distribution<int>(0, T - 3)(rng);
    const double rss = R(rng);
    for (auto k : {CriterionKind::AIC, CriterionKind::AICc, CriterionKind::AICu, CriterionKind::SIC,
                   CriterionKind::FPEu}) {
      const double got = information_criterion(k, rss, T, C);
      const double want = static_cast<double>(oracle(k, rss, T, C));
      EXPECT_NEAR(got, want, 1e-10 * std::max(1.0, std::abs(want))) << to_string(k);
    }
  }
}

TEST(Criteria, DomainErrors) {
  EXPECT_THROW(information_criterion(CriterionKind::AIC, 0, 50, 1), criterion_domain_error);
  EXPECT_THROW(information_criterion(CriterionKind::AICc, 1, 5, 3), criterion_domain_error);
  EXPECT_THROW(information_criterion(CriterionKind::AICu, 1, 5, 3), criterion_domain_error);
  EXPECT_THROW(information_criterion(CriterionKind::FPEu, 1, 5, 4), criterion_domain_error);
  EXPECT_THROW(information_criterion(CriterionKind::CV, 1, 50, 1), std::invalid_argument);
}

TEST(Criteria, AiccApproachesAic) {
  const double a = information_criterion(CriterionKind::AIC, 1e6, 1000000, 5);
  const double c = information_criterion(CriterionKind::AICc, 1e6, 1000000, 5);
  EXPECT_LT(std::abs(a - c), 1e-3);
}

namespace {

ModelFits fits_for(const SeriesPair& d, TrendKnowledge k) {
  ModelFits out;
  for (const auto& s : list_models())
    if (is_choosable(s.id, k)) out.emplace_back(s.id, fit_model(s, d));
  return out;
}

}  // namespace

TEST(Select, TieGoesToSmallerModel) {
  RegressionFit f;
  f.rss = 10;
  f.t_obs = 50;
  f.c_count = 2;
  ModelFits fits = {{ModelId::of(3, 1), f}, {ModelId::of(3, 0), f}};
  EXPECT_EQ(select_by_criterion(CriterionKind::AIC, fits, TrendKnowledge::unknown), ModelId::of(3, 0));
  EXPECT_THROW(select_by_criterion(CriterionKind::AIC, fits, TrendKnowledge::known_present),
               std::invalid_argument);
}

TEST(Select, ParityFilter) {
  DgpParams p;
  p.b1 = 1;
  p.b2 = 0.5;
  p.b3 = -0.5;
  p.m1 = 1;
  p.m2 = 1;
  p.m3 = 0.5;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto d = simulate(p, s);
    const auto fits = fits_for(d, TrendKnowledge::unknown);
    for (auto k : {CriterionKind::AIC, CriterionKind::SIC, CriterionKind::CV})
      EXPECT_EQ(select_by_criterion(k, fits, TrendKnowledge::none_known_absent).family() % 2, 1);
  }
}

// Strong stationary level relation: SIC picks 11.00 nearly always.
TEST(Select, StrongLevelRelationUnderSic) {
  DgpParams p;
  p.b1 = 1;
  p.b3 = -1;
  p.b6 = 10;
  p.m1 = 1;
  p.m3 = 0.5;
  int hits = 0;
  for (std::uint32_t r = 0; r < 1000; ++r) {
    const auto d = simulate(p, StreamKey{31, 0, r});
    hits += select_by_criterion(CriterionKind::SIC, fits_for(d, TrendKnowledge::none_known_absent),
                                TrendKnowledge::none_known_absent) == ModelId::of(11, 0);
  }
  EXPECT_GT(hits, 950);
}

// Scaling the response by s shifts every AIC by the same amount; the argmin stays.
TEST(Select, ArgminScaleInvariant) {
  DgpParams p;
  p.b1 = 1;
  p.b3 = -0.5;
  p.m1 = 1;
  p.m3 = 0.5;
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto d = simulate(p, s);
    const auto a = select_by_criterion(CriterionKind::AIC, fits_for(d, TrendKnowledge::unknown),
                                       TrendKnowledge::unknown);
    for (double& v : d.y) v *= 7.5;
    const auto b = select_by_criterion(CriterionKind::AIC, fits_for(d, TrendKnowledge::unknown),
                                       TrendKnowledge::unknown);
    EXPECT_EQ(a, b);
  }
}

TEST(Weights, Examples) {
  const auto one = evidence_weights({{ModelId::of(1, 0), 3.0}});
  EXPECT_DOUBLE_EQ(one.entries[0].weight, 1.0);
  const auto two = evidence_weights({{ModelId::of(1, 0), 5.0}, {ModelId::of(2, 0), 7.0}});
  EXPECT_NEAR(two.weight_of(ModelId::of(1, 0)), 0.7310585786300049, 1e-12);
  EXPECT_NEAR(two.weight_of(ModelId::of(2, 0)), 0.2689414213699951, 1e-12);
  const auto inf = evidence_weights({{ModelId::of(1, 0), 0.0}, {ModelId::of(2, 0), 1e6}});
  EXPECT_DOUBLE_EQ(inf.weight_of(ModelId::of(1, 0)), 1.0);
}

TEST(Weights, NormalizedAndOrdered) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> N(0, 5);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<std::pair<ModelId, double>> v;
    for (const auto& s : list_models()) v.emplace_back(s.id, N(rng));
    const auto w = evidence_weights(v);
    double sum = 0;
    for (std::size_t i = 0; i < w.entries.size(); ++i) {
      sum += w.entries[i].weight;
      EXPECT_GE(w.entries[i].delta, 0.0);
      if (i) EXPECT_LE(w.entries[i].weight, w.entries[i - 1].weight);
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_EQ(w.entries.front().delta, 0.0);
    auto best = std::min_element(v.begin(), v.end(), [](auto& a, auto& b) { return a.second < b.second; });
    EXPECT_EQ(w.entries.front().id, best->first);
  }
}

TEST(Weights, RejectsCrossValidation) {
  const auto d = simulate(DgpParams{}, 1);
  const auto fits = fits_for(d, TrendKnowledge::none_known_absent);
  EXPECT_THROW(evidence_weights(CriterionKind::CV, fits), std::invalid_argument);
  EXPECT_NO_THROW(evidence_weights(CriterionKind::SIC, fits));
}

TEST(Average, AbsentRoleCountsAsZero) {
  RegressionFit a, b;
  a.coefficients = Eigen::VectorXd::Constant(1, 2.0);   // 2.00: intercept
  b.coefficients = Eigen::VectorXd::Zero(0);            // 1.00: nothing
  ModelFits fits = {{ModelId::of(2, 0), a}, {ModelId::of(1, 0), b}};
  WeightTable w;
  w.entries = {{ModelId::of(2, 0), 0, 0, 0.5}, {ModelId::of(1, 0), 0, 0, 0.5}};
  const auto avg = model_average(fits, w);
  EXPECT_DOUBLE_EQ(avg.at(Role::Intercept).value, 1.0);
  EXPECT_DOUBLE_EQ(avg.at(Role::Intercept).inclusion_weight, 0.5);
  EXPECT_DOUBLE_EQ(avg.at(Role::ZLevel).value, 0.0);
}

TEST(Average, SingleModelReproducesCoefficients) {
  const auto d = simulate(DgpParams{}, 9);
  const ModelSpec& s = model_spec(ModelId::of(11, 0));
  ModelFits fits = {{s.id, fit_model(s, d)}, {ModelId::of(1, 0), fit_model(model_spec(ModelId::of(1, 0)), d)}};
  const auto w = evidence_weights({{s.id, 0.0}, {ModelId::of(1, 0), 1e9}});
  const auto avg = model_average(fits, w);
  EXPECT_DOUBLE_EQ(avg.at(Role::Intercept).value, fits[0].second.coefficients[0]);
  EXPECT_DOUBLE_EQ(avg.at(Role::ZLevel).value, fits[0].second.coefficients[1]);
  EXPECT_DOUBLE_EQ(avg.at(Role::YLag).value, -1.0);
}
