#pragma once

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tsselect/criteria.hpp"
#include "tsselect/critical_values.hpp"
#include "tsselect/dgp.hpp"
#include "tsselect/errors.hpp"
#include "tsselect/regress.hpp"
#include "tsselect/taxonomy.hpp"
#include "tsselect/vecm.hpp"

namespace tsselect {

struct AlphaProfile {
  double general_alpha = 0.05;
  double unit_root_alpha = 0.05;

  /// "-10%", "-5%" or "-10/5" (everything at 5% except the unit-root test at 10%).
  static AlphaProfile named(const std::string& suffix) {
    if (suffix == "-10%") return {0.10, 0.10};
    if (suffix == "-5%") return {0.05, 0.05};
    if (suffix == "-10/5") return {0.05, 0.10};
    throw std::invalid_argument("unknown alpha profile '" + suffix + "'");
  }
};

// ---------------------------------------------------------------------------
// Reference distributions

inline double t_critical(double alpha, int df) {
  return boost::math::quantile(boost::math::students_t(df), 1.0 - alpha / 2.0);
}

inline double f_critical(double alpha, int df1, int df2) {
  return boost::math::quantile(boost::math::fisher_f(df1, df2), 1.0 - alpha);
}

inline double chi2_critical(double alpha, int df) {
  return boost::math::quantile(boost::math::chi_squared(df), 1.0 - alpha);
}

// ---------------------------------------------------------------------------
// Audit trail

struct TraceStep {
  std::string test;
  double statistic;
  std::string decision;
};

using Trace = std::vector<TraceStep>;

inline void note(Trace* tr, std::string test, double stat, std::string decision) {
  if (tr) tr->push_back({std::move(test), stat, std::move(decision)});
}

inline void note(Trace& tr, std::string test, double stat, std::string decision) {
  note(&tr, std::move(test), stat, std::move(decision));
}

// ---------------------------------------------------------------------------
// Univariate tests

/// One variable of a SeriesPair, indexed by sample time like SeriesPair itself.
struct SeriesView {
  const std::vector<double>* values;
  int presample_len;
  int sample_len;
  std::string name;

  double operator()(int t) const { return (*values)[static_cast<std::size_t>(presample_len + t - 1)]; }
  double diff(int t) const { return (*this)(t) - (*this)(t - 1); }
};

inline SeriesView y_view(const SeriesPair& d) { return {&d.y, d.presample_len, d.sample_len, "Y"}; }
inline SeriesView z_view(const SeriesPair& d) { return {&d.z, d.presample_len, d.sample_len, "Z"}; }

enum class AdfCase { constant, constant_trend };

inline const char* to_string(AdfCase c) { return c == AdfCase::constant ? "constant" : "constant_trend"; }

/// dx_t on (1, [t], x_{t-1}, dx_{t-1..k}) over t = 1..T.
inline void adf_design(const SeriesView& x, AdfCase det, int k, Eigen::MatrixXd& X, Eigen::VectorXd& y) {
  if (k < 0 || k > 2) throw std::invalid_argument("adf: augmentation lags must be 0, 1 or 2");
  if (x.presample_len < k + 1) throw std::invalid_argument("adf: series too short for the lag order");
  const int T = x.sample_len;
  const int nd = det == AdfCase::constant ? 1 : 2;
  X.resize(T, nd + 1 + k);
  y.resize(T);
  for (int t = 1; t <= T; ++t) {
    const int r = t - 1;
    y[r] = x.diff(t);
    X(r, 0) = 1.0;
    if (nd == 2) X(r, 1) = t;
    X(r, nd) = x(t - 1);
    for (int j = 1; j <= k; ++j) X(r, nd + j) = x.diff(t - j);
  }
}

struct AdfResult {
  double t_statistic = 0;
  double critical_value = 0;
  bool reject_unit_root = false;
  RegressionFit fit;
};

inline AdfResult adf_test(const SeriesView& x, AdfCase det, int k, double alpha) {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  adf_design(x, det, k, X, y);
  AdfResult r;
  r.fit = least_squares(X, y);
  const int lag_col = det == AdfCase::constant ? 1 : 2;
  r.t_statistic = r.fit.t_ratio(lag_col);
  r.critical_value = CriticalValueTable::builtin().lookup(
      CvTest::adf, det == AdfCase::constant ? DetCase::constant : DetCase::constant_trend, x.sample_len, alpha);
  r.reject_unit_root = r.t_statistic < r.critical_value;
  return r;
}

/// Index of the smallest value; ties go to the earliest (fewest lags).
inline int first_argmin(const std::vector<double>& v) {
  int best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  return best;
}

/// k in {0, 1, 2} minimising FPE_u of the ADF regression; all candidates share the window t = 1..T.
inline int select_aug_lag(const SeriesView& x, AdfCase det) {
  std::vector<double> v;
  for (int k = 0; k <= 2; ++k) {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    adf_design(x, det, k, X, y);
    const RegressionFit f = least_squares(X, y);
    v.push_back(information_criterion(CriterionKind::FPEu, f.rss, f.t_obs, f.n_regressors()));
  }
  return first_argmin(v);
}

/// T ln det(Sigma) + ln T * (parameters) for the unrestricted VAR in error-correction form
/// dX_t on (X_{t-1}, 1, dX_{t-1..k}), t = 1..T.
inline double multivariate_sic(const SeriesPair& d, int k) {
  Eigen::MatrixXd Z0, Z1, Z2;
  detail::vecm_blocks(d, k, false, Z0, Z1, Z2);
  Eigen::MatrixXd W(Z1.rows(), Z1.cols() + Z2.cols());
  W << Z1, Z2;
  const Eigen::MatrixXd B = detail::ls_coefficients(W, Z0);
  const Eigen::MatrixXd R = Z0 - W * B;
  const double T = static_cast<double>(Z0.rows());
  const Eigen::Matrix2d S = R.transpose() * R / T;
  return T * std::log(S.determinant()) + std::log(T) * static_cast<double>(B.size());
}

/// K* for the bivariate steps; lag 0 has no model in the error-correction families, so the
/// search runs over k_min..2.
inline int select_aug_lag_multivariate(const SeriesPair& d, int k_min = 1) {
  std::vector<double> v;
  for (int k = k_min; k <= 2; ++k) v.push_back(multivariate_sic(d, k));
  return k_min + first_argmin(v);
}

enum class UnivariateKind { RandomWalk, RandomWalkDrift, StationaryConstant, TrendStationary, WhiteNoise, WhiteNoiseTrend };

inline const char* to_string(UnivariateKind k) {
  switch (k) {
    case UnivariateKind::RandomWalk: return "random walk";
    case UnivariateKind::RandomWalkDrift: return "random walk with drift";
    case UnivariateKind::StationaryConstant: return "stationary around constant";
    case UnivariateKind::TrendStationary: return "trend stationary";
    case UnivariateKind::WhiteNoise: return "white noise";
    case UnivariateKind::WhiteNoiseTrend: return "white noise around trend";
  }
  return "?";
}

struct UnivariateStatus {
  UnivariateKind kind;
  int aug_lags;

  bool is_random_walk() const {
    return kind == UnivariateKind::RandomWalk || kind == UnivariateKind::RandomWalkDrift;
  }
  bool is_stationary() const { return !is_random_walk(); }
  bool has_trend() const {
    return kind == UnivariateKind::RandomWalkDrift || kind == UnivariateKind::TrendStationary ||
           kind == UnivariateKind::WhiteNoiseTrend;
  }
  ModelId model() const { return ModelId::of(static_cast<int>(kind) + 1, aug_lags); }
};

/// Unit-root and trend determination for one variable.
inline UnivariateStatus univariate_status(const SeriesView& x, TrendKnowledge tk, const AlphaProfile& prof,
                                          Trace* tr = nullptr) {
  using K = UnivariateKind;
  const AdfCase det = tk == TrendKnowledge::none_known_absent ? AdfCase::constant : AdfCase::constant_trend;
  const int k = select_aug_lag(x, det);
  const AdfResult adf = adf_test(x, det, k, prof.unit_root_alpha);
  note(tr, "ADF " + x.name + " (" + to_string(det) + ", k=" + std::to_string(k) + ")", adf.t_statistic,
       adf.reject_unit_root ? "stationary" : "unit root");

  switch (tk) {
    case TrendKnowledge::none_known_absent:
      return {adf.reject_unit_root ? K::StationaryConstant : K::RandomWalk, k};
    case TrendKnowledge::known_present:
      return {adf.reject_unit_root ? K::TrendStationary : K::RandomWalkDrift, k};
    case TrendKnowledge::unknown: break;
  }

  if (adf.reject_unit_root) {
    // Stationary case: the trend t-ratio is asymptotically normal, standard tables apply.
    const double tt = adf.fit.t_ratio(1);
    const bool trend = std::abs(tt) > t_critical(prof.general_alpha, adf.fit.t_obs - adf.fit.n_regressors());
    note(tr, "trend t-test " + x.name, tt, trend ? "trend" : "no trend");
    return {trend ? K::TrendStationary : K::StationaryConstant, k};
  }
  Eigen::MatrixXd X = Eigen::MatrixXd::Ones(x.sample_len, 1);
  Eigen::VectorXd y(x.sample_len);
  for (int t = 1; t <= x.sample_len; ++t) y[t - 1] = x.diff(t);
  const RegressionFit f = least_squares(X, y);
  const double td = f.t_ratio(0);
  const bool drift = std::abs(td) > t_critical(prof.general_alpha, f.t_obs - 1);
  note(tr, "drift t-test " + x.name, td, drift ? "drift" : "no drift");
  return {drift ? K::RandomWalkDrift : K::RandomWalk, k};
}

// ---------------------------------------------------------------------------
// Cointegration

struct EgResult {
  bool cointegrated = false;
  bool trivial = false;  // stage-1 fit is exact, residuals are all zero
  double t_statistic = 0;
  double critical_value = 0;
  CointVector cv;
  Eigen::VectorXd stage1_residuals;
};

/// Stage 1: Y on (1, Z) over t = -2..T. Stage 2: de_t on (1, e_{t-1}), no augmentation.
inline EgResult eg_cointegration_test(const SeriesPair& d, double alpha) {
  EgResult r;
  RegressionFit s1;
  r.cv = cointegrating_vector(d, CointSource::engle_granger_stage1, &s1);
  r.stage1_residuals = s1.residuals;
  const Eigen::VectorXd& e = s1.residuals;
  const Eigen::Index n = e.size() - 1;
  r.critical_value = CriticalValueTable::builtin().lookup(CvTest::eg, DetCase::constant, static_cast<double>(n), alpha);

  Eigen::VectorXd ylev(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) ylev[i] = d.Y(static_cast<int>(i) - 2);
  if (s1.rss <= 1e-24 * std::max(1.0, ylev.squaredNorm())) {
    r.cointegrated = r.trivial = true;
    r.t_statistic = -std::numeric_limits<double>::infinity();
    return r;
  }
  Eigen::MatrixXd X(n, 2);
  X.col(0).setOnes();
  X.col(1) = e.head(n);
  const Eigen::VectorXd de = e.tail(n) - e.head(n);
  try {
    const RegressionFit s2 = least_squares(X, de);
    r.t_statistic = s2.t_ratio(1);
  } catch (const rank_deficient_error&) {
    r.cointegrated = r.trivial = true;
    r.t_statistic = -std::numeric_limits<double>::infinity();
    return r;
  }
  r.cointegrated = r.t_statistic < r.critical_value;
  return r;
}

struct JoResult {
  bool cointegrated = false;
  double critical_value = 0;
  VecmFit fit;
};

/// Trace test of rank 0 against the asymptotic value for the deterministic case: constant
/// restricted to the cointegrating space without drift, unrestricted with drift.
inline JoResult johansen_cointegration_test(const SeriesPair& d, bool drift, double alpha,
                                            std::optional<int> k_star = std::nullopt) {
  JoResult r;
  const int k = k_star ? *k_star : select_aug_lag_multivariate(d);
  r.fit = reduced_rank_vecm(d, k, drift);
  r.critical_value = CriticalValueTable::builtin().lookup(
      CvTest::johansen_trace, drift ? DetCase::unrestricted_constant : DetCase::restricted_constant,
      d.sample_len, alpha);
  r.cointegrated = r.fit.trace_statistic > r.critical_value;
  return r;
}

// ---------------------------------------------------------------------------
// Autocorrelation

enum class Autocorrelation { weak, strong, explosive };

inline const char* to_string(Autocorrelation a) {
  switch (a) {
    case Autocorrelation::weak: return "weak";
    case Autocorrelation::strong: return "strong";
    case Autocorrelation::explosive: return "explosive";
  }
  return "?";
}

struct AutocorrResult {
  Autocorrelation kind = Autocorrelation::weak;
  double durbin_watson = 0;
  double r_squared = 0;
  double bg_coefficient = 0;
  double bg_lm = 0;
  bool bg_significant = false;
};

/// DW and R^2 of the original regression, and the Breusch-Godfrey auxiliary regression
/// e_t on (X_t, e_{t-1}) over t = 2..T with LM = n R^2 against chi^2(1).
inline AutocorrResult autocorrelation_check(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                            const RegressionFit& fit, double alpha) {
  const Eigen::VectorXd& e = fit.residuals;
  const Eigen::Index T = e.size();
  if (T < 3) throw std::invalid_argument("autocorrelation_check: need at least three residuals");
  AutocorrResult r;
  const double ee = e.squaredNorm();
  r.durbin_watson = ee > 0 ? (e.tail(T - 1) - e.head(T - 1)).squaredNorm() / ee : 2.0;
  const double tss = (y.array() - y.mean()).matrix().squaredNorm();
  r.r_squared = tss > 0 ? 1.0 - fit.rss / tss : 0.0;

  Eigen::MatrixXd A(T - 1, X.cols() + 1);
  A << X.bottomRows(T - 1), e.head(T - 1);
  const Eigen::VectorXd b = e.tail(T - 1);
  try {
    const RegressionFit aux = least_squares(A, b);
    r.bg_coefficient = aux.coefficients[X.cols()];
    const double btss = (b.array() - b.mean()).matrix().squaredNorm();
    const double r2 = btss > 0 ? std::max(0.0, 1.0 - aux.rss / btss) : 0.0;
    r.bg_lm = static_cast<double>(T - 1) * r2;
  } catch (const rank_deficient_error&) {
    r.bg_coefficient = 0;
    r.bg_lm = 0;
  }
  r.bg_significant = r.bg_lm > chi2_critical(alpha, 1);
  if (r.bg_coefficient >= 1.0)
    r.kind = Autocorrelation::explosive;
  else
    r.kind = r.durbin_watson >= r.r_squared ? Autocorrelation::weak : Autocorrelation::strong;
  return r;
}

// ---------------------------------------------------------------------------
// Accepted model and its predictions

/// Fitted dY_t from a single-equation model: free coefficients on the model's roles plus
/// its fixed terms.
struct LinearPredictor {
  ModelId model;
  Eigen::VectorXd coefficients;
  CointVector cv;
};

/// First row of the reduced-rank VECM.
struct VecmPredictor {
  VecmFit fit;
};

class Predictor {
 public:
  Predictor() : p_(LinearPredictor{ModelId::of(1, 0), Eigen::VectorXd(), {}}) {}
  Predictor(LinearPredictor p) : p_(std::move(p)) {}
  Predictor(VecmPredictor p) : p_(std::move(p)) {}

  double at(const SeriesPair& d, int t) const {
    if (const auto* lp = std::get_if<LinearPredictor>(&p_)) {
      const ModelSpec& s = model_spec(lp->model);
      double v = 0;
      for (std::size_t j = 0; j < s.free_coeffs.size(); ++j)
        v += lp->coefficients[static_cast<Eigen::Index>(j)] * role_value(s.free_coeffs[j], d, t, lp->cv);
      for (const auto& f : s.fixed_terms) v += f.coefficient * role_value(f.role, d, t, lp->cv);
      return v;
    }
    const VecmFit& f = std::get<VecmPredictor>(p_).fit;
    double ec = f.beta_rho[0] * d.Y(t - 1) + f.beta_rho[1] * d.Z(t - 1);
    if (!f.drift) ec += f.beta_rho[2];
    double v = f.alpha[0] * ec;
    if (f.phi) v += (*f.phi)[0];
    for (int k = 1; k <= f.k_star; ++k) {
      const auto& G = f.gammas[static_cast<std::size_t>(k - 1)];
      v += G(0, 0) * d.dY(t - k) + G(0, 1) * d.dZ(t - k);
    }
    return v;
  }

  /// Predictions for t = 1..T.
  Eigen::VectorXd predict(const SeriesPair& d) const {
    Eigen::VectorXd out(d.sample_len);
    for (int t = 1; t <= d.sample_len; ++t) out[t - 1] = at(d, t);
    return out;
  }

  bool is_vecm() const { return std::holds_alternative<VecmPredictor>(p_); }

 private:
  std::variant<LinearPredictor, VecmPredictor> p_;
};

inline Predictor linear_predictor(ModelId id, const RegressionFit& f, const CointVector& cv = {}) {
  return LinearPredictor{id, f.coefficients, cv};
}

// ---------------------------------------------------------------------------
// Strategy tree

enum class TestVariant { EG, Jo };

inline const char* to_string(TestVariant v) { return v == TestVariant::EG ? "EG" : "Jo"; }

struct StrategyResult {
  ModelId chosen = ModelId::of(1, 0);
  RelationType relation = RelationType::D;
  Predictor predictor;
  Trace trace;
  bool fell_back = false;
};

namespace detail {

inline int role_column(const ModelSpec& s, Role r) {
  for (std::size_t j = 0; j < s.free_coeffs.size(); ++j)
    if (s.free_coeffs[j] == r) return static_cast<int>(j);
  throw std::logic_error("model " + s.id.to_string() + " has no " + role_name(r) + " term");
}

inline StrategyResult accept(ModelId id, Predictor p, Trace& tr) {
  StrategyResult r;
  r.chosen = id;
  r.relation = model_spec(id).relation;
  r.predictor = std::move(p);
  r.trace = std::move(tr);
  return r;
}

/// Univariate process for Y; a stationary status goes through the b3 = -1 test that
/// separates white noise from a persistent stationary process.
inline StrategyResult univariate_model(const SeriesPair& d, const UnivariateStatus& s, const AlphaProfile& prof,
                                       Trace& tr) {
  ModelId id = s.model();
  RegressionFit f = fit_model(model_spec(id), d);
  if (s.is_stationary()) {
    const int c = role_column(model_spec(id), Role::YLag);
    const double t = (f.coefficients[c] + 1.0) / f.std_error(c);
    const bool white = std::abs(t) <= t_critical(prof.general_alpha, f.t_obs - f.n_regressors());
    note(tr, "b3 = -1 t-test", t, white ? "white noise" : "persistent");
    if (white) {
      id = ModelId::of(id.family() + 2, id.aug_lags());
      f = fit_model(model_spec(id), d);
    }
  }
  note(tr, "accept", 0, id.to_string());
  return accept(id, linear_predictor(id, f), tr);
}

}  // namespace detail

/// The stylised hypothesis-testing strategy: univariate statuses, then cointegration, current
/// difference and Granger steps for random-walk pairs, or the level relation for stationary
/// pairs, falling back to Y's univariate model.
inline StrategyResult strategy_run(const SeriesPair& d, TestVariant variant, const AlphaProfile& prof,
                                   TrendKnowledge tk) {
  Trace tr;
  std::optional<UnivariateStatus> sy;
  try {
    sy = univariate_status(y_view(d), tk, prof, &tr);
    const UnivariateStatus sz = univariate_status(z_view(d), tk, prof, &tr);
    note(tr, "status Y", sy->aug_lags, to_string(sy->kind));
    note(tr, "status Z", sz.aug_lags, to_string(sz.kind));
    const double a = prof.general_alpha;

    if (sy->is_random_walk() && sz.is_random_walk() && sy->kind == sz.kind) {
      const bool drift = sy->kind == UnivariateKind::RandomWalkDrift;
      const int ecm_family = drift ? 14 : 13;

      if (variant == TestVariant::EG) {
        const EgResult eg = eg_cointegration_test(d, a);
        note(tr, "Engle-Granger", eg.t_statistic,
             eg.trivial ? "trivially cointegrated" : eg.cointegrated ? "cointegrated" : "not cointegrated");
        if (eg.cointegrated) {
          std::optional<std::pair<ModelId, RegressionFit>> best;
          double best_v = 0;
          for (int k = 1; k <= 2; ++k) {
            const ModelId id = ModelId::of(ecm_family, k);
            RegressionFit f = fit_model(model_spec(id), d, eg.cv);
            const double v = information_criterion(CriterionKind::SIC, f.rss, f.t_obs, f.c_count);
            if (!best || v < best_v) {
              best.emplace(id, std::move(f));
              best_v = v;
            }
          }
          note(tr, "accept", best_v, best->first.to_string());
          return detail::accept(best->first, linear_predictor(best->first, best->second, eg.cv), tr);
        }
      } else {
        const JoResult jo = johansen_cointegration_test(d, drift, a);
        note(tr, "Johansen trace (K*=" + std::to_string(jo.fit.k_star) + ")", jo.fit.trace_statistic,
             jo.cointegrated ? "cointegrated" : "not cointegrated");
        if (jo.cointegrated) {
          const ModelId id = ModelId::of(ecm_family, jo.fit.k_star);
          note(tr, "accept", 0, id.to_string());
          return detail::accept(id, VecmPredictor{jo.fit}, tr);
        }
      }

      // Current first-difference relation.
      {
        const ModelId id = ModelId::of(drift ? 8 : 7, 0);
        const ModelSpec& s = model_spec(id);
        const RegressionFit f = fit_model(s, d);
        const double t = f.t_ratio(detail::role_column(s, Role::DZ));
        const bool rel = std::abs(t) > t_critical(a, f.t_obs - f.n_regressors());
        note(tr, "b7 t-test", t, rel ? "relation" : "no relation");
        if (rel) {
          note(tr, "accept", 0, id.to_string());
          return detail::accept(id, linear_predictor(id, f), tr);
        }
      }

      // Granger causality in differences, lag order by FPE_u.
      {
        const int fam = drift ? 10 : 9;
        std::optional<std::pair<ModelId, RegressionFit>> best;
        double best_v = 0;
        for (int k = 1; k <= 2; ++k) {
          const ModelId id = ModelId::of(fam, k);
          RegressionFit f = fit_model(model_spec(id), d);
          const double v = information_criterion(CriterionKind::FPEu, f.rss, f.t_obs, f.c_count);
          if (!best || v < best_v) {
            best.emplace(id, std::move(f));
            best_v = v;
          }
        }
        const ModelId id = best->first;
        const ModelSpec& s = model_spec(id);
        const RegressionFit& f = best->second;
        const int df = f.t_obs - f.n_regressors();
        bool rel = false;
        if (id.aug_lags() == 1) {
          const double t = f.t_ratio(detail::role_column(s, Role::DZ1));
          rel = std::abs(t) > t_critical(a, df);
          note(tr, "Granger t-test b8", t, rel ? "relation" : "no relation");
        } else {
          std::vector<Role> keep;
          for (Role r : s.free_coeffs)
            if (r != Role::DZ1 && r != Role::DZ2) keep.push_back(r);
          const RegressionFit restricted = least_squares(design_matrix(keep, d), model_response(s, d));
          const double F = ((restricted.rss - f.rss) / 2.0) / (f.rss / df);
          rel = F > f_critical(a, 2, df);
          note(tr, "Granger F-test b8=b9=0", F, rel ? "relation" : "no relation");
        }
        if (rel) {
          note(tr, "accept", 0, id.to_string());
          return detail::accept(id, linear_predictor(id, f), tr);
        }
      }
    } else if (sy->is_stationary() && sz.is_stationary() && sy->has_trend() == sz.has_trend()) {
      const ModelId id = ModelId::of(sy->has_trend() ? 12 : 11, 0);
      const ModelSpec& s = model_spec(id);
      const Eigen::MatrixXd X = design_matrix(s.free_coeffs, d);
      const Eigen::VectorXd y = model_response(s, d);
      const RegressionFit ols = least_squares(X, y);
      const AutocorrResult ac = autocorrelation_check(X, y, ols, a);
      note(tr, "Breusch-Godfrey LM", ac.bg_lm, ac.bg_significant ? "autocorrelation" : "no autocorrelation");
      note(tr, "autocorrelation strength (DW vs R2, BG rho)", ac.bg_coefficient, to_string(ac.kind));
      if (ac.kind != Autocorrelation::explosive) {
        const int c = detail::role_column(s, Role::ZLevel);
        RegressionFit f = ols;
        if (ac.bg_significant && ac.kind == Autocorrelation::strong) {
          f = cochrane_orcutt(s, d, {});
          note(tr, "Cochrane-Orcutt", 0, "applied");
        }
        const double t = f.t_ratio(c);
        const bool rel = std::abs(t) > t_critical(a, f.t_obs - f.n_regressors());
        note(tr, "b6 t-test", t, rel ? "relation" : "no relation");
        if (rel) {
          note(tr, "accept", 0, id.to_string());
          return detail::accept(id, linear_predictor(id, f), tr);
        }
      }
    } else {
      note(tr, "mixed statuses", 0, "univariate Y");
    }
    return detail::univariate_model(d, *sy, prof, tr);
  } catch (const numerical_error& e) {
    const bool drift = tk == TrendKnowledge::known_present || (tk == TrendKnowledge::unknown && sy && sy->has_trend());
    const ModelId id = ModelId::of(drift ? 2 : 1, 0);
    note(tr, std::string("fallback: ") + e.what(), 0, id.to_string());
    StrategyResult r;
    r.chosen = id;
    r.relation = RelationType::D;
    if (drift) {
      try {
        r.predictor = linear_predictor(id, fit_model(model_spec(id), d));
      } catch (const numerical_error&) {
      }
    }
    r.trace = std::move(tr);
    r.fell_back = true;
    return r;
  }
}

}  // namespace tsselect
