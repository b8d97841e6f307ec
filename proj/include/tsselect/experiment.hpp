#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tsselect/config.hpp"
#include "tsselect/critical_values.hpp"
#include "tsselect/criteria.hpp"
#include "tsselect/dgp.hpp"
#include "tsselect/evaluate.hpp"
#include "tsselect/hyptest.hpp"
#include "tsselect/version.hpp"

namespace tsselect {

struct CellSpec {
  DgpParams theta;
  std::uint32_t cell_key;  // second component of every replication's StreamKey
};

struct RunOptions {
  int reps = 1;
  std::uint64_t master_seed = 0;
  int workers = 1;
  int sample_len = 50;
  int presample_len = 100;
  TrendKnowledge trend_knowledge = TrendKnowledge::none_known_absent;
  int block_reps = 250;
  std::function<void(std::size_t done, std::size_t total, const CellResult&)> on_cell_done;
  const std::atomic<bool>* cancel = nullptr;
};

/// Runs every cell, splitting replications into fixed blocks. Blocks are merged per cell in
/// block order, so the result does not depend on the worker count or on scheduling. With a
/// cancel flag set, only cells whose blocks all finished are returned.
inline std::vector<CellResult> run_cells(const std::vector<CellSpec>& cells, const std::vector<Strategy>& strategies,
                                         const RunOptions& opt) {
  if (opt.reps < 1) throw std::invalid_argument("run_cells: reps must be positive");
  const int nb = (opt.reps + opt.block_reps - 1) / opt.block_reps;
  struct Item {
    std::size_t cell;
    int block;
  };
  std::vector<Item> items;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (int b = 0; b < nb; ++b) items.push_back({c, b});

  std::vector<std::vector<CellResult>> partial(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c)
    partial[c].assign(static_cast<std::size_t>(nb), empty_cell(cells[c].theta, strategies));
  std::vector<std::atomic<int>> remaining(cells.size());
  for (auto& r : remaining) r = nb;
  std::vector<char> complete(cells.size(), 0);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done_cells{0};
  std::mutex mu;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      if (opt.cancel && opt.cancel->load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      const Item it = items[i];
      try {
        const auto first = static_cast<std::uint32_t>(it.block * opt.block_reps);
        const auto count = static_cast<std::uint32_t>(std::min(opt.block_reps, opt.reps - it.block * opt.block_reps));
        accumulate(partial[it.cell][static_cast<std::size_t>(it.block)], strategies, opt.master_seed,
                   cells[it.cell].cell_key, first, count, opt.trend_knowledge, opt.sample_len, opt.presample_len);
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
      if (--remaining[it.cell] == 0) {
        CellResult merged = partial[it.cell][0];
        for (int b = 1; b < nb; ++b) merge(merged, partial[it.cell][static_cast<std::size_t>(b)]);
        std::lock_guard<std::mutex> lk(mu);
        partial[it.cell] = {std::move(merged)};
        complete[it.cell] = 1;
        const std::size_t d = ++done_cells;
        if (opt.on_cell_done) opt.on_cell_done(d, cells.size(), partial[it.cell][0]);
      }
    }
  };

  std::vector<std::thread> pool;
  for (int w = 1; w < opt.workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<CellResult> out;
  for (std::size_t c = 0; c < cells.size(); ++c)
    if (complete[c]) out.push_back(std::move(partial[c][0]));
  return out;
}

// ---------------------------------------------------------------------------
// CSV output

inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

inline void write_csv_banner(std::ostream& os, const RunConfig& cfg, const std::string& what) {
  os << "# tsselect " << version << " schema=" << csv_schema << " seed=" << cfg.master_seed << " reps=" << cfg.reps
     << " mode=" << to_string(cfg.mode) << " scenario=" << to_string(cfg.scenario) << " T=" << cfg.sample_len
     << " presample=" << cfg.presample_len << " content=" << what << (cfg.name.empty() ? "" : " name=" + cfg.name)
     << "\n";
}

inline void write_sweep_csv(std::ostream& os, const RunConfig& cfg, const std::vector<CellResult>& cells) {
  write_csv_banner(os, cfg, "sweep");
  os << "param,value,true_model,strategy,freq_model,freq_relation,ln_mean_l2,replications,degenerate\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const CellResult& c = cells[i];
    DgpParams p = c.theta;
    const double v = param_ref(p, cfg.sweep.parameter);
    for (std::size_t k = 0; k < c.strategies.size(); ++k) {
      os << cfg.sweep.parameter << ',' << fmt(v) << ',' << c.true_model.to_string() << ',' << c.strategies[k] << ','
         << fmt(c.freq_correct_model(k)) << ',' << fmt(c.freq_correct_relation(k)) << ',' << fmt(std::log(c.mean_l2(k)))
         << ',' << c.replications << ',' << c.tallies[k].degenerate << '\n';
    }
  }
}

/// One row per cell, one column per strategy.
inline void write_grid_csv(std::ostream& os, const RunConfig& cfg, const std::vector<CellResult>& cells,
                           const RegretTable& t) {
  write_csv_banner(os, cfg, std::string("G_") + to_string(t.metric));
  os << "cell,true_model,b1,b2,b3,b4,b5,b6,b7,b8,b9,b10,c1,c2,m1,m2,m3";
  for (const auto& s : t.strategies) os << ',' << s;
  os << '\n';
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const DgpParams& p = cells[i].theta;
    os << i << ',' << cells[i].true_model.to_string();
    for (double v : {p.b1, p.b2, p.b3, p.b4, p.b5, p.b6, p.b7, p.b8, p.b9, p.b10, p.c1, p.c2, p.m1, p.m2, p.m3})
      os << ',' << fmt(v);
    for (Eigen::Index k = 0; k < t.G.cols(); ++k) os << ',' << fmt(t.G(static_cast<Eigen::Index>(i), k));
    os << '\n';
  }
}

/// Row strategy against column strategy, as in the published regret tables.
inline void write_regret_csv(std::ostream& os, const RunConfig& cfg, const RegretTable& t) {
  write_csv_banner(os, cfg, std::string("max_regret_") + to_string(t.metric));
  os << "strategy";
  for (const auto& s : t.strategies) os << ',' << s;
  os << ",pairwise_minimax\n";
  for (std::size_t k = 0; k < t.strategies.size(); ++k) {
    os << t.strategies[k];
    for (std::size_t j = 0; j < t.strategies.size(); ++j)
      os << ',' << fmt(t.max_regret(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)));
    os << ',' << (is_pairwise_minimax(t, k) ? 1 : 0) << '\n';
  }
}

inline std::vector<CellSpec> permutation_cells(const RunConfig& cfg) {
  const auto perms = enumerate_permutations(cfg.scenario, cfg.literal_grid ? GridRules::literal() : GridRules::standard());
  std::vector<CellSpec> cells;
  for (std::size_t i = 0; i < perms.size(); ++i) cells.push_back({perms[i].theta, static_cast<std::uint32_t>(i)});
  return cells;
}

inline std::vector<CellSpec> sweep_cells(const RunConfig& cfg) {
  std::vector<CellSpec> cells;
  for (std::size_t i = 0; i < cfg.sweep.values.size(); ++i) {
    DgpParams p = cfg.sweep.base;
    param_ref(p, cfg.sweep.parameter) = cfg.sweep.values[i];
    cells.push_back({p, static_cast<std::uint32_t>(i)});
  }
  return cells;
}

inline RunOptions run_options(const RunConfig& cfg) {
  RunOptions o;
  o.reps = cfg.reps;
  o.master_seed = cfg.master_seed;
  o.workers = cfg.workers;
  o.sample_len = cfg.sample_len;
  o.presample_len = cfg.presample_len;
  o.trend_knowledge = trend_knowledge_of(cfg.scenario);
  return o;
}

// ---------------------------------------------------------------------------
// Single-dataset report

struct CriterionRanking {
  CriterionKind kind;
  std::vector<std::pair<ModelId, double>> ranked;  // ascending criterion value
  std::optional<WeightTable> weights;              // information criteria only
  std::map<Role, AveragedCoefficient> averaged;
};

struct TestOutcome {
  std::string strategy;
  StrategyResult result;
};

struct SelectReport {
  int sample_len = 0;
  TrendKnowledge trend_knowledge = TrendKnowledge::unknown;
  ModelFits fits;
  std::vector<std::string> diagnostics;
  std::vector<CriterionRanking> rankings;
  std::vector<TestOutcome> tests;
};

inline SelectReport build_select_report(const SeriesPair& d, const SelectSpec& spec) {
  if (d.sample_len < 20)
    throw config_error("input: need at least 20 observations after the " + std::to_string(d.presample_len) +
                       " reserved for lags, got " + std::to_string(d.sample_len));
  SelectReport rep;
  rep.sample_len = d.sample_len;
  rep.trend_knowledge = spec.trend_knowledge;
  std::optional<CointVector> cv;
  try {
    cv = cointegrating_vector(d, CointSource::model_11_00);
  } catch (const rank_deficient_error& e) {
    rep.diagnostics.push_back(std::string("cointegrating vector (Y on 1, Z(t)): regressor ") +
                              (e.column() == 1 ? "Z(t)" : "intercept") + " is linearly dependent on the others");
  }
  for (const auto& s : list_models()) {
    if (!is_choosable(s.id, spec.trend_knowledge)) continue;
    if (s.has_cointegration && !cv) {
      rep.diagnostics.push_back("model " + s.id.to_string() + ": skipped, no cointegrating vector");
      continue;
    }
    try {
      rep.fits.emplace_back(s.id, fit_model(s, d, cv.value_or(CointVector{})));
    } catch (const numerical_error& e) {
      rep.diagnostics.push_back(e.what());
    }
  }
  if (rep.fits.empty()) throw numerical_error("no candidate model could be estimated");
  for (const auto& name : spec.criteria) {
    CriterionRanking r;
    r.kind = parse_criterion(name);
    ModelFits usable;
    for (const auto& [id, f] : rep.fits) {
      try {
        r.ranked.emplace_back(id, criterion_value(r.kind, f));
        usable.emplace_back(id, f);
      } catch (const numerical_error& e) {
        rep.diagnostics.push_back(std::string(to_string(r.kind)) + " for model " + id.to_string() + ": " + e.what());
      } catch (const criterion_domain_error& e) {
        rep.diagnostics.push_back(std::string(to_string(r.kind)) + " for model " + id.to_string() + ": " + e.what());
      }
    }
    std::stable_sort(r.ranked.begin(), r.ranked.end(), [](const auto& a, const auto& b) {
      return a.second < b.second || (a.second == b.second && a.first < b.first);
    });
    if (is_information_criterion(r.kind) && !r.ranked.empty()) {
      r.weights = evidence_weights(r.ranked);
      r.averaged = model_average(usable, *r.weights);
    }
    rep.rankings.push_back(std::move(r));
  }
  for (const auto& name : spec.tests) {
    const Strategy s = parse_strategy(name);
    rep.tests.push_back({name, strategy_run(d, s.variant, s.profile, spec.trend_knowledge)});
  }
  return rep;
}

inline void write_select_report(std::ostream& os, const SelectReport& rep) {
  os << "# tsselect " << version << " select, T=" << rep.sample_len << ", trend knowledge "
     << to_string(rep.trend_knowledge) << "\n";
  if (!rep.diagnostics.empty()) {
    os << "\n[diagnostics]\n";
    for (const auto& m : rep.diagnostics) os << "  " << m << "\n";
  }
  for (const auto& r : rep.rankings) {
    os << "\n[" << to_string(r.kind) << "]\n";
    os << "  rank  model   value";
    if (r.weights) os << "            delta        weight";
    os << "\n";
    for (std::size_t i = 0; i < r.ranked.size(); ++i) {
      const auto& [id, v] = r.ranked[i];
      os << "  " << std::setw(4) << i + 1 << "  " << id.to_string() << "  " << std::setw(14) << fmt(v);
      if (r.weights) {
        for (const auto& e : r.weights->entries)
          if (e.id == id) os << "  " << std::setw(14) << fmt(e.delta) << "  " << std::setw(12) << fmt(e.weight);
      }
      os << "\n";
    }
    if (!r.averaged.empty()) {
      os << "  model-averaged coefficients:\n";
      for (const auto& [role, a] : r.averaged)
        os << "    " << std::setw(8) << role_name(role) << "  " << std::setw(14) << fmt(a.value) << "  (inclusion "
           << fmt(a.inclusion_weight) << ")\n";
    }
  }
  for (const auto& t : rep.tests) {
    os << "\n[" << t.strategy << "] accepts " << t.result.chosen.to_string() << " (relation "
       << to_char(t.result.relation) << ")\n";
    for (const auto& s : t.result.trace)
      os << "    " << s.test << ": " << fmt(s.statistic) << " -> " << s.decision << "\n";
  }
}

inline void write_weights_csv(std::ostream& os, const SelectReport& rep) {
  os << "# tsselect " << version << " weights, T=" << rep.sample_len << "\n";
  os << "criterion,model,value,delta,weight\n";
  for (const auto& r : rep.rankings) {
    if (!r.weights) continue;
    for (const auto& e : r.weights->entries)
      os << to_string(r.kind) << ',' << e.id.to_string() << ',' << fmt(e.ic_value) << ',' << fmt(e.delta) << ','
         << fmt(e.weight) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Critical-value recalibration by direct simulation

namespace detail {

inline double empirical_quantile(std::vector<double>& v, double p) {
  const auto i = static_cast<std::size_t>(std::floor(p * static_cast<double>(v.size() - 1)));
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(i), v.end());
  return v[i];
}

}  // namespace detail

/// Regenerates every table entry under its null: DF t-ratios for pure random walks, EG
/// stage-2 t-ratios for independent random walks, Johansen trace for independent random
/// walks (with drift for the unrestricted case) at a long sample.
inline CriticalValueTable recalibrate_critical_values(const RecalibrateSpec& spec, int reps, std::uint64_t seed,
                                                      int workers = 1) {
  CriticalValueTable out;
  const std::string src = "simulated (" + std::to_string(reps) + " reps)";
  struct Job {
    CvTest test;
    DetCase det;
    int bracket;  // 0 = asymptotic
  };
  std::vector<Job> jobs;
  for (int T : spec.sample_sizes) {
    jobs.push_back({CvTest::adf, DetCase::constant, T});
    jobs.push_back({CvTest::adf, DetCase::constant_trend, T});
    jobs.push_back({CvTest::eg, DetCase::constant, T});
  }
  jobs.push_back({CvTest::adf, DetCase::constant, 0});
  jobs.push_back({CvTest::adf, DetCase::constant_trend, 0});
  jobs.push_back({CvTest::eg, DetCase::constant, 0});
  jobs.push_back({CvTest::johansen_trace, DetCase::restricted_constant, 0});
  jobs.push_back({CvTest::johansen_trace, DetCase::unrestricted_constant, 0});

  std::vector<std::vector<double>> stats(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      const Job& job = jobs[j];
      auto& s = stats[j];
      s.reserve(static_cast<std::size_t>(reps));
      for (int r = 0; r < reps; ++r) {
        DgpParams p;
        if (job.det == DetCase::unrestricted_constant) p.b1 = p.m1 = 1.0;
        const StreamKey key{seed, static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(r)};
        const int n = job.bracket ? job.bracket : spec.asymptotic_T;
        switch (job.test) {
          case CvTest::adf: {
            const auto d = simulate(p, key, n, 3);
            s.push_back(adf_test(y_view(d), job.det == DetCase::constant ? AdfCase::constant : AdfCase::constant_trend,
                                 0, 0.05)
                            .t_statistic);
            break;
          }
          case CvTest::eg: {
            // stage 2 runs on T + 2 observations; size the sample so it matches the bracket
            const auto d = simulate(p, key, n - 2, 3);
            s.push_back(eg_cointegration_test(d, 0.05).t_statistic);
            break;
          }
          case CvTest::johansen_trace: {
            const auto d = simulate(p, key, n, 3);
            s.push_back(reduced_rank_vecm(d, 0, job.det == DetCase::unrestricted_constant).trace_statistic);
            break;
          }
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const Job& job = jobs[j];
    const bool upper = job.test == CvTest::johansen_trace;
    for (double a : {0.01, 0.05, 0.10}) {
      CvEntry e;
      e.test = job.test;
      e.det_case = job.det;
      e.t_bracket = job.bracket ? job.bracket : std::numeric_limits<double>::infinity();
      e.alpha = a;
      e.value = detail::empirical_quantile(stats[j], upper ? 1.0 - a : a);
      e.source = job.bracket ? src : src + " at T=" + std::to_string(spec.asymptotic_T);
      out.entries.push_back(std::move(e));
    }
  }
  return out;
}

inline void write_critical_values_csv(std::ostream& os, const CriticalValueTable& t) {
  os << "test,det_case,T_bracket,alpha,value,source\n";
  for (const auto& e : t.entries) {
    os << to_string(e.test) << ',' << to_string(e.det_case) << ','
       << (std::isinf(e.t_bracket) ? std::string("inf") : std::to_string(static_cast<int>(e.t_bracket))) << ','
       << std::fixed << std::setprecision(2) << e.alpha << ',' << std::setprecision(6) << e.value << ','
       << e.source << '\n';
    os.unsetf(std::ios::fixed);
  }
}

}  // namespace tsselect
