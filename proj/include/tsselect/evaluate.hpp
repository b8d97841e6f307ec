#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tsselect/criteria.hpp"
#include "tsselect/dgp.hpp"
#include "tsselect/hyptest.hpp"
#include "tsselect/regress.hpp"
#include "tsselect/taxonomy.hpp"

namespace tsselect {

struct Strategy {
  enum class Kind { Criterion, HypothesisTest };
  std::string name;
  Kind kind = Kind::Criterion;
  CriterionKind criterion = CriterionKind::SIC;
  TestVariant variant = TestVariant::EG;
  AlphaProfile profile;
};

/// "AIC", "AICc", "AICu", "SIC", "CV", or "EG"/"Jo" followed by "-10%", "-5%" or "-10/5".
inline Strategy parse_strategy(const std::string& name) {
  Strategy s;
  s.name = name;
  for (auto k : {CriterionKind::AIC, CriterionKind::AICc, CriterionKind::AICu, CriterionKind::SIC, CriterionKind::CV}) {
    if (name == to_string(k)) {
      s.criterion = k;
      return s;
    }
  }
  s.kind = Strategy::Kind::HypothesisTest;
  if (name.rfind("EG", 0) == 0) {
    s.variant = TestVariant::EG;
  } else if (name.rfind("Jo", 0) == 0) {
    s.variant = TestVariant::Jo;
  } else {
    throw std::invalid_argument("unknown strategy '" + name + "'");
  }
  try {
    s.profile = AlphaProfile::named(name.substr(2));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("unknown strategy '" + name + "'");
  }
  return s;
}

inline const std::vector<std::string>& all_strategy_names() {
  static const std::vector<std::string> names = {"AIC",   "AICc",     "AICu",   "SIC",   "CV",    "EG-10%",
                                                 "EG-5%", "EG-10/5", "Jo-10%", "Jo-5%", "Jo-10/5"};
  return names;
}

inline std::vector<Strategy> parse_strategies(const std::vector<std::string>& names) {
  std::vector<Strategy> out;
  for (const auto& n : names) out.push_back(parse_strategy(n));
  return out;
}

/// E[dY_t | regressors] under theta, i.e. the deterministic part of the generating equation.
inline double true_expectation(const DgpParams& p, const SeriesPair& d, int t) {
  return p.b1 + p.b2 * t + p.b3 * d.Y(t - 1) + p.b4 * d.dY(t - 1) + p.b5 * d.dY(t - 2) + p.b6 * d.Z(t) +
         p.b7 * d.dZ(t) + p.b8 * d.dZ(t - 1) + p.b9 * d.dZ(t - 2) +
         p.b10 * (d.Y(t - 1) - (p.c1 + p.c2 * d.Z(t - 1)));
}

/// Mean over t = 1..T of (E[dY_t] - predicted dY_t)^2.
inline double l2_distance(const DgpParams& theta, const Predictor& pred, const SeriesPair& d) {
  double s = 0;
  for (int t = 1; t <= d.sample_len; ++t) {
    const double g = true_expectation(theta, d, t) - pred.at(d, t);
    s += g * g;
  }
  return s / d.sample_len;
}

struct StrategyOutcome {
  ModelId chosen = ModelId::of(1, 0);
  RelationType relation = RelationType::D;
  double l2 = 0;
  bool degenerate = false;
};

/// Everything the criterion strategies need from one dataset: a fit of every choosable model
/// (cointegrating vector from model 11.00) and the coefficients for prediction.
struct CandidateFits {
  ModelFits fits;
  CointVector cv;
};

inline CandidateFits fit_candidates(const SeriesPair& d, TrendKnowledge tk) {
  CandidateFits c;
  try {
    c.cv = cointegrating_vector(d, CointSource::model_11_00);
  } catch (const numerical_error&) {
    c.cv = {};
  }
  for (const auto& s : list_models()) {
    if (!is_choosable(s.id, tk)) continue;
    try {
      c.fits.emplace_back(s.id, fit_model(s, d, c.cv));
    } catch (const numerical_error&) {
      // the model cannot be estimated on this sample and drops out of the candidate set
    }
  }
  return c;
}

/// Argmin over candidate fits, skipping models where the criterion is undefined.
inline std::optional<std::size_t> select_index(CriterionKind kind, const ModelFits& fits) {
  std::optional<std::size_t> best;
  double best_v = 0;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    double v;
    try {
      v = criterion_value(kind, fits[i].second);
    } catch (const numerical_error&) {
      continue;
    } catch (const criterion_domain_error&) {
      continue;
    }
    if (!best || v < best_v || (v == best_v && fits[i].first < fits[*best].first)) {
      best = i;
      best_v = v;
    }
  }
  return best;
}

inline StrategyOutcome score(const DgpParams& theta, const SeriesPair& d, ModelId chosen, const Predictor& pred) {
  StrategyOutcome o;
  o.chosen = chosen;
  o.relation = model_spec(chosen).relation;
  o.l2 = l2_distance(theta, pred, d);
  o.degenerate = !std::isfinite(o.l2);
  return o;
}

/// Every strategy applied to the same dataset.
inline std::vector<StrategyOutcome> evaluate_replication(const DgpParams& theta, const SeriesPair& d,
                                                         const std::vector<Strategy>& strategies, TrendKnowledge tk) {
  std::vector<StrategyOutcome> out(strategies.size());
  std::optional<CandidateFits> cand;
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    const Strategy& s = strategies[i];
    if (s.kind == Strategy::Kind::Criterion) {
      if (!cand) cand = fit_candidates(d, tk);
      const auto idx = select_index(s.criterion, cand->fits);
      if (!idx) {
        out[i].degenerate = true;
        out[i].l2 = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      const auto& [id, fit] = cand->fits[*idx];
      out[i] = score(theta, d, id, linear_predictor(id, fit, model_spec(id).has_cointegration ? cand->cv : CointVector{}));
    } else {
      const StrategyResult r = strategy_run(d, s.variant, s.profile, tk);
      out[i] = score(theta, d, r.chosen, r.predictor);
    }
  }
  return out;
}

struct StrategyTally {
  long correct_model = 0;
  long correct_relation = 0;
  double l2_sum = 0;
  long l2_count = 0;
  long degenerate = 0;
  long l2_zero = 0;
};

struct CellResult {
  DgpParams theta;
  ModelId true_model = ModelId::of(1, 0);
  std::vector<std::string> strategies;
  std::vector<StrategyTally> tallies;
  long replications = 0;

  double freq_correct_model(std::size_t k) const {
    return static_cast<double>(tallies[k].correct_model) / static_cast<double>(replications);
  }
  double freq_correct_relation(std::size_t k) const {
    return static_cast<double>(tallies[k].correct_relation) / static_cast<double>(replications);
  }
  /// Mean over non-degenerate replications.
  double mean_l2(std::size_t k) const {
    return tallies[k].l2_count ? tallies[k].l2_sum / static_cast<double>(tallies[k].l2_count)
                               : std::numeric_limits<double>::quiet_NaN();
  }
};

inline CellResult empty_cell(const DgpParams& theta, const std::vector<Strategy>& strategies) {
  const auto m = classify_params(theta);
  if (!m) throw std::invalid_argument("run_cell: parameters do not define a model: " + theta.to_string());
  CellResult c;
  c.theta = theta;
  c.true_model = *m;
  for (const auto& s : strategies) c.strategies.push_back(s.name);
  c.tallies.resize(strategies.size());
  return c;
}

/// Replications [first, first + count) of a cell, keyed (master, cell, replication).
inline void accumulate(CellResult& c, const std::vector<Strategy>& strategies, std::uint64_t master,
                       std::uint32_t cell, std::uint32_t first, std::uint32_t count, TrendKnowledge tk, int T,
                       int presample) {
  const RelationType true_rel = model_spec(c.true_model).relation;
  for (std::uint32_t r = first; r < first + count; ++r) {
    const SeriesPair d = simulate(c.theta, StreamKey{master, cell, r}, T, presample);
    const auto out = evaluate_replication(c.theta, d, strategies, tk);
    for (std::size_t k = 0; k < out.size(); ++k) {
      auto& t = c.tallies[k];
      t.correct_model += out[k].chosen == c.true_model;
      t.correct_relation += out[k].relation == true_rel;
      if (out[k].degenerate) {
        ++t.degenerate;
      } else {
        t.l2_sum += out[k].l2;
        ++t.l2_count;
        t.l2_zero += out[k].l2 == 0.0;
      }
    }
    ++c.replications;
  }
}

/// Adds b's tallies to a (same theta and strategies), in that order.
inline void merge(CellResult& a, const CellResult& b) {
  for (std::size_t k = 0; k < a.tallies.size(); ++k) {
    auto& x = a.tallies[k];
    const auto& y = b.tallies[k];
    x.correct_model += y.correct_model;
    x.correct_relation += y.correct_relation;
    x.l2_sum += y.l2_sum;
    x.l2_count += y.l2_count;
    x.degenerate += y.degenerate;
    x.l2_zero += y.l2_zero;
  }
  a.replications += b.replications;
}

inline CellResult run_cell(const DgpParams& theta, const std::vector<Strategy>& strategies, int reps,
                           std::uint64_t master, std::uint32_t cell, TrendKnowledge tk, int T = 50,
                           int presample = 100) {
  if (reps <= 0) throw std::invalid_argument("run_cell: reps must be positive");
  if (strategies.empty()) throw std::invalid_argument("run_cell: no strategies");
  CellResult c = empty_cell(theta, strategies);
  accumulate(c, strategies, master, cell, 0, static_cast<std::uint32_t>(reps), tk, T, presample);
  return c;
}

// ---------------------------------------------------------------------------
// Regret

enum class Metric { model_freq, relation_freq, neg_ln_l2 };

inline const char* to_string(Metric m) {
  switch (m) {
    case Metric::model_freq: return "model_freq";
    case Metric::relation_freq: return "relation_freq";
    case Metric::neg_ln_l2: return "neg_ln_l2";
  }
  return "?";
}

inline double metric_value(const CellResult& c, std::size_t k, Metric m) {
  switch (m) {
    case Metric::model_freq: return c.freq_correct_model(k);
    case Metric::relation_freq: return c.freq_correct_relation(k);
    case Metric::neg_ln_l2: return -std::log(c.mean_l2(k));
  }
  return 0;
}

struct RegretTable {
  Metric metric = Metric::model_freq;
  std::vector<std::string> strategies;
  Eigen::MatrixXd G;           // cells x strategies, larger is better
  Eigen::MatrixXd max_regret;  // [k][k'] = max over cells of G[., k'] - G[., k]
  Eigen::MatrixXi excluded;    // cells skipped per pair because G was not finite
  std::vector<std::string> log;
};

inline RegretTable regret_matrix(const std::vector<CellResult>& cells, Metric metric) {
  if (cells.empty()) throw std::invalid_argument("regret_matrix: no cells");
  RegretTable r;
  r.metric = metric;
  r.strategies = cells.front().strategies;
  const auto n = static_cast<Eigen::Index>(r.strategies.size());
  const auto m = static_cast<Eigen::Index>(cells.size());
  r.G.resize(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (cells[static_cast<std::size_t>(i)].strategies != r.strategies)
      throw std::invalid_argument("regret_matrix: cells cover different strategy lists");
    for (Eigen::Index k = 0; k < n; ++k)
      r.G(i, k) = metric_value(cells[static_cast<std::size_t>(i)], static_cast<std::size_t>(k), metric);
  }
  r.max_regret = Eigen::MatrixXd::Zero(n, n);
  r.excluded = Eigen::MatrixXi::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index k2 = 0; k2 < n; ++k2) {
      if (k == k2) continue;
      double mx = -std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        const double a = r.G(i, k), b = r.G(i, k2);
        if (!std::isfinite(a) || !std::isfinite(b)) {
          ++r.excluded(k, k2);
          if (k < k2) {
            const auto& c = cells[static_cast<std::size_t>(i)];
            r.log.push_back(std::string(to_string(metric)) + ": cell " + std::to_string(i) + " (true model " +
                            c.true_model.to_string() + ") excluded for " + r.strategies[static_cast<std::size_t>(k)] +
                            " vs " + r.strategies[static_cast<std::size_t>(k2)] + ", mean L2 " +
                            std::to_string(c.mean_l2(static_cast<std::size_t>(k))) + " / " +
                            std::to_string(c.mean_l2(static_cast<std::size_t>(k2))));
          }
          continue;
        }
        mx = std::max(mx, b - a);
      }
      r.max_regret(k, k2) = mx;
    }
  }
  return r;
}

/// k beats every rival pairwise: max_regret[k][j] < max_regret[j][k] for all j != k.
inline bool is_pairwise_minimax(const RegretTable& t, std::size_t k) {
  const auto kk = static_cast<Eigen::Index>(k);
  for (Eigen::Index j = 0; j < t.max_regret.rows(); ++j)
    if (j != kk && !(t.max_regret(kk, j) < t.max_regret(j, kk))) return false;
  return true;
}

inline std::optional<std::size_t> pairwise_minimax(const RegretTable& t) {
  for (std::size_t k = 0; k < t.strategies.size(); ++k)
    if (is_pairwise_minimax(t, k)) return k;
  return std::nullopt;
}

inline std::size_t strategy_index(const RegretTable& t, const std::string& name) {
  for (std::size_t k = 0; k < t.strategies.size(); ++k)
    if (t.strategies[k] == name) return k;
  throw std::invalid_argument("strategy '" + name + "' not in table");
}

}  // namespace tsselect
