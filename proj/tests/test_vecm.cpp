#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "tsselect/hyptest.hpp"
#include "tsselect/vecm.hpp"

using namespace tsselect;

namespace {

DgpParams cointegrated(double b10, double c2) {
  DgpParams p;
  p.b10 = b10;
  p.c1 = 0.5;
  p.c2 = c2;
  p.b4 = 0.3;
  p.b8 = 0.4;
  return p;
}

}  // namespace

// Eigenvalues from Eigen's generalized symmetric solver on S10 S00^{-1} S01 v = lambda S11 v,
// a route that shares nothing with the Cholesky reduction beyond the moment matrices.
TEST(Vecm, EigenvaluesMatchGeneralizedSolver) {
  for (bool drift : {false, true}) {
    for (std::uint32_t r = 0; r < 20; ++r) {
      const auto d = simulate(cointegrated(-0.5, 1.0), StreamKey{4, drift, r});
      const VecmFit f = reduced_rank_vecm(d, 1, drift);
      Eigen::MatrixXd Z0, Z1, Z2;
      detail::vecm_blocks(d, 1, drift, Z0, Z1, Z2);
      const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(d.sample_len, d.sample_len) -
                                Z2 * (Z2.transpose() * Z2).inverse() * Z2.transpose();
      const Eigen::MatrixXd R0 = P * Z0, R1 = P * Z1;
      const Eigen::MatrixXd S00 = R0.transpose() * R0, S01 = R0.transpose() * R1, S11 = R1.transpose() * R1;
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(S01.transpose() * S00.inverse() * S01, S11);
      const auto& ev = ges.eigenvalues();
      const Eigen::Index m = ev.size();
      EXPECT_NEAR(f.eigenvalues[0], ev[m - 1], 1e-9);
      EXPECT_NEAR(f.eigenvalues[1], ev[m - 2], 1e-9);
      const double trace = -d.sample_len * (std::log(1 - ev[m - 1]) + std::log(1 - ev[m - 2]));
      EXPECT_NEAR(f.trace_statistic, trace, 1e-7 * trace);
    }
  }
}

TEST(Vecm, NormalizedOnY) {
  const auto d = simulate(cointegrated(-0.8, 2.0), 12);
  for (bool drift : {false, true}) {
    const VecmFit f = reduced_rank_vecm(d, 2, drift);
    EXPECT_EQ(f.beta_rho[0], 1.0);
    EXPECT_EQ(f.beta_rho.size(), drift ? 2 : 3);
    EXPECT_EQ(f.gammas.size(), 2u);
    EXPECT_EQ(f.phi.has_value(), drift);
  }
}

// The reduced-rank fitted values equal the VECM written out with its own parameters.
TEST(Vecm, FittedValuesMatchParameterForm) {
  for (bool drift : {false, true}) {
    for (int k = 0; k <= 2; ++k) {
      const auto d = simulate(cointegrated(-0.5, 1.0), StreamKey{5, static_cast<std::uint32_t>(k), drift});
      const VecmFit f = reduced_rank_vecm(d, k, drift);
      const Predictor p = VecmPredictor{f};
      const Eigen::VectorXd y = p.predict(d);
      EXPECT_LT((y - f.fitted_dx.col(0)).cwiseAbs().maxCoeff(), 1e-9) << "k=" << k << " drift=" << drift;
    }
  }
}

// Large-sample recovery of the cointegrating vector and adjustment speed.
TEST(Vecm, RecoversTrueParameters) {
  const DgpParams p = cointegrated(-0.5, 2.0);
  const auto d = simulate(p, StreamKey{6, 0, 0}, 20000);
  const VecmFit f = reduced_rank_vecm(d, 1, false);
  EXPECT_NEAR(f.c2, 2.0, 0.01);
  EXPECT_NEAR(f.c1, 0.5, 0.1);
  EXPECT_NEAR(f.alpha[0], -0.5, 0.03);
  EXPECT_NEAR(f.alpha[1], 0.0, 0.03);
  EXPECT_NEAR(f.gammas[0](0, 0), 0.3, 0.03);
  EXPECT_NEAR(f.gammas[0](0, 1), 0.4, 0.03);
}

TEST(Vecm, RejectsBadLagOrder) {
  const auto d = simulate(DgpParams{}, 1);
  EXPECT_THROW(reduced_rank_vecm(d, 3, false), std::invalid_argument);
}
