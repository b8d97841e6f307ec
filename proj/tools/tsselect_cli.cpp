#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "tsselect/tsselect.hpp"

namespace fs = std::filesystem;
using namespace tsselect;

namespace {

std::atomic<bool> g_cancel{false};

void on_sigint(int) { g_cancel = true; }

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<int> workers;
  std::optional<std::string> out;
  // select / weights
  std::string input;
  std::string trend;
  std::vector<std::string> criteria;
};

RunConfig resolve(Mode mode, const Overrides& o) {
  RunConfig c;
  if (!o.config.empty()) {
    c = load_config(o.config);
    if (c.mode_given && c.mode != mode)
      throw config_error("mode: config is for '" + std::string(to_string(c.mode)) + "' but the subcommand is '" +
                         to_string(mode) + "'");
  } else if (mode == Mode::sweep || mode == Mode::regret) {
    throw config_error("--config is required for " + std::string(to_string(mode)));
  }
  c.mode = mode;
  if (o.seed) c.master_seed = *o.seed;
  if (o.reps) c.reps = *o.reps;
  if (o.workers) c.workers = *o.workers;
  if (o.out) c.out = *o.out;
  if (!o.input.empty()) c.select.input = o.input;
  if (!o.trend.empty()) {
    try {
      c.select.trend_knowledge = parse_trend_knowledge(o.trend);
    } catch (const std::invalid_argument& e) {
      throw config_error(std::string("--trend: ") + e.what());
    }
  }
  if (!o.criteria.empty()) c.select.criteria = o.criteria;
  c.validate();
  return c;
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

std::string run_label(const RunConfig& c) { return c.name.empty() ? to_string(c.scenario) : c.name; }

void report_progress(const char* what, std::size_t done, std::size_t total, const CellResult& c) {
  std::cerr << "[" << what << "] " << done << "/" << total << " cells (true model " << c.true_model.to_string()
            << ")\n";
}

int cmd_sweep(const RunConfig& cfg) {
  RunOptions opt = run_options(cfg);
  opt.cancel = &g_cancel;
  opt.on_cell_done = [](std::size_t d, std::size_t n, const CellResult& c) { report_progress("sweep", d, n, c); };
  const auto cells = run_cells(sweep_cells(cfg), parse_strategies(cfg.strategies), opt);
  const fs::path path = fs::path(cfg.out) / (run_label(cfg) + ".csv");
  auto os = open_out(path);
  write_sweep_csv(os, cfg, cells);
  std::cerr << "wrote " << path.string() << "\n";
  return g_cancel ? 1 : 0;
}

int cmd_regret(const RunConfig& cfg) {
  RunOptions opt = run_options(cfg);
  opt.cancel = &g_cancel;
  opt.on_cell_done = [](std::size_t d, std::size_t n, const CellResult& c) { report_progress("regret", d, n, c); };
  const auto specs = permutation_cells(cfg);
  std::cerr << "[regret] " << specs.size() << " permutations, " << cfg.reps << " reps, " << cfg.strategies.size()
            << " strategies\n";
  const auto cells = run_cells(specs, parse_strategies(cfg.strategies), opt);
  if (cells.empty()) throw std::runtime_error("no cell completed");
  const fs::path dir = fs::path(cfg.out) / run_label(cfg);
  auto summary = open_out(dir / "summary.txt");
  auto exclusions = open_out(dir / "exclusions.log");
  summary << "# tsselect " << version << " seed=" << cfg.master_seed << " reps=" << cfg.reps << " scenario "
          << to_string(cfg.scenario) << ", " << cells.size() << " of " << specs.size() << " permutations\n";
  for (auto m : {Metric::model_freq, Metric::relation_freq, Metric::neg_ln_l2}) {
    const RegretTable t = regret_matrix(cells, m);
    auto g = open_out(dir / (std::string("G_") + to_string(m) + ".csv"));
    write_grid_csv(g, cfg, cells, t);
    auto r = open_out(dir / (std::string("regret_") + to_string(m) + ".csv"));
    write_regret_csv(r, cfg, t);
    for (const auto& line : t.log) exclusions << line << "\n";
    const auto w = pairwise_minimax(t);
    summary << to_string(m) << ": pairwise minimax " << (w ? t.strategies[*w] : std::string("none")) << "\n";
  }
  std::cerr << "wrote " << dir.string() << "\n";
  return g_cancel ? 1 : 0;
}

SeriesPair read_input(const RunConfig& cfg) {
  std::ifstream in(cfg.select.input);
  if (!in) throw config_error("select.input: cannot open '" + cfg.select.input + "'");
  try {
    return read_series_csv(in);
  } catch (const std::exception& e) {
    throw config_error("select.input '" + cfg.select.input + "': " + e.what());
  }
}

int cmd_select(const RunConfig& cfg, bool weights_only) {
  const SeriesPair d = read_input(cfg);
  SelectSpec spec = cfg.select;
  if (weights_only) spec.tests.clear();
  const SelectReport rep = build_select_report(d, spec);
  if (weights_only)
    write_weights_csv(std::cout, rep);
  else
    write_select_report(std::cout, rep);
  return 0;
}

int cmd_recalibrate(const RunConfig& cfg) {
  std::cerr << "[recalibrate] " << cfg.reps << " reps per entry\n";
  const CriticalValueTable t = recalibrate_critical_values(cfg.recalibrate, cfg.reps, cfg.master_seed, cfg.workers);
  const fs::path path = fs::path(cfg.out) / "critical_values.csv";
  auto os = open_out(path);
  write_critical_values_csv(os, t);
  std::cerr << "wrote " << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model selection for bivariate time series: information criteria against hypothesis testing"};
  app.require_subcommand(1);
  Overrides o;
  std::uint64_t seed = 0;
  int reps = 0, workers = 0;
  std::string out;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run configuration");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--reps", reps, "replications per cell")->check(CLI::PositiveNumber);
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "output directory");
  };
  auto* sweep = app.add_subcommand("sweep", "response surface over one parameter");
  auto* regret = app.add_subcommand("regret", "maximum-regret tables over the permutation grid");
  auto* select = app.add_subcommand("select", "rank models for one dataset (CSV with y,z columns)");
  auto* weights = app.add_subcommand("weights", "evidence weights for one dataset");
  auto* recal = app.add_subcommand("recalibrate", "regenerate critical values by simulation");
  for (auto* s : {sweep, regret, select, weights, recal}) add_common(s);
  for (auto* s : {select, weights}) {
    s->add_option("--input", o.input, "CSV file with y and z columns");
    s->add_option("--trend", o.trend, "trend knowledge: no_trend, trend or unknown");
    s->add_option("--criteria", o.criteria, "criteria to report")->delimiter(',');
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (sweep->count("--seed") + regret->count("--seed") + select->count("--seed") + weights->count("--seed") +
      recal->count("--seed"))
    o.seed = seed;
  for (auto* s : {sweep, regret, select, weights, recal}) {
    if (s->count("--reps")) o.reps = reps;
    if (s->count("--workers")) o.workers = workers;
    if (s->count("--out")) o.out = out;
  }

  std::signal(SIGINT, on_sigint);
  try {
    if (*sweep) return cmd_sweep(resolve(Mode::sweep, o));
    if (*regret) return cmd_regret(resolve(Mode::regret, o));
    if (*select) return cmd_select(resolve(Mode::select, o), false);
    if (*weights) return cmd_select(resolve(Mode::weights, o), true);
    if (*recal) {
      RunConfig c = resolve(Mode::recalibrate, o);
      if (o.config.empty() && !o.reps) c.reps = 500000;
      return cmd_recalibrate(c);
    }
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
