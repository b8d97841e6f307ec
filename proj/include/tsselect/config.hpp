#pragma once

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tsselect/dgp.hpp"
#include "tsselect/errors.hpp"
#include "tsselect/evaluate.hpp"
#include "tsselect/params.hpp"

namespace tsselect {

enum class Mode { sweep, regret, select, weights, recalibrate };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::sweep: return "sweep";
    case Mode::regret: return "regret";
    case Mode::select: return "select";
    case Mode::weights: return "weights";
    case Mode::recalibrate: return "recalibrate";
  }
  return "?";
}

inline Mode parse_mode(const std::string& s) {
  for (auto m : {Mode::sweep, Mode::regret, Mode::select, Mode::weights, Mode::recalibrate})
    if (s == to_string(m)) return m;
  throw config_error("mode: unknown value '" + s + "'");
}

struct SweepSpec {
  DgpParams base;
  std::string parameter;
  std::vector<double> values;
};

struct SelectSpec {
  std::string input;
  std::vector<std::string> criteria = {"AIC", "AICc", "AICu", "SIC", "CV"};
  std::vector<std::string> tests = {"EG-10%", "EG-5%", "EG-10/5", "Jo-10%", "Jo-5%", "Jo-10/5"};
  TrendKnowledge trend_knowledge = TrendKnowledge::unknown;
};

struct RecalibrateSpec {
  std::vector<int> sample_sizes = {25, 50, 100, 250, 500};
  int asymptotic_T = 1000;
};

struct RunConfig {
  Mode mode = Mode::regret;
  bool mode_given = false;  // the file named a mode
  std::string name;
  Scenario scenario = Scenario::no_trend;
  std::vector<std::string> strategies = all_strategy_names();
  int reps = 2000;
  std::uint64_t master_seed = 20110101;
  int workers = 1;
  int sample_len = 50;
  int presample_len = 100;
  bool literal_grid = false;
  std::string out = "out";
  SweepSpec sweep;
  SelectSpec select;
  RecalibrateSpec recalibrate;

  void validate() const {
    if (reps < 1) throw config_error("reps: must be at least 1");
    if (workers < 1) throw config_error("workers: must be at least 1");
    if (sample_len < 10) throw config_error("sample_len: must be at least 10");
    if (presample_len < 3) throw config_error("presample_len: must be at least 3");
    if (mode == Mode::sweep || mode == Mode::regret) {
      if (strategies.empty()) throw config_error("strategies: list is empty");
      std::set<std::string> seen;
      for (std::size_t i = 0; i < strategies.size(); ++i) {
        try {
          parse_strategy(strategies[i]);
        } catch (const std::invalid_argument& e) {
          throw config_error("strategies[" + std::to_string(i) + "]: " + e.what());
        }
        if (!seen.insert(strategies[i]).second)
          throw config_error("strategies[" + std::to_string(i) + "]: duplicate '" + strategies[i] + "'");
      }
    }
    if (mode == Mode::sweep) {
      if (sweep.values.empty()) throw config_error("sweep.values: grid is empty");
      DgpParams p = sweep.base;
      try {
        param_ref(p, sweep.parameter);
      } catch (const std::invalid_argument& e) {
        throw config_error(std::string("sweep.parameter: ") + e.what());
      }
      for (std::size_t i = 0; i < sweep.values.size(); ++i) {
        param_ref(p, sweep.parameter) = sweep.values[i];
        try {
          p.validate();
        } catch (const std::exception& e) {
          throw config_error("sweep.values[" + std::to_string(i) + "]: " + e.what());
        }
        if (!classify_params(p))
          throw config_error("sweep.values[" + std::to_string(i) + "]: parameters do not define a candidate model (" +
                             p.to_string() + ")");
      }
    }
    if (mode == Mode::select || mode == Mode::weights) {
      if (select.input.empty()) throw config_error("select.input: no input file");
      for (std::size_t i = 0; i < select.criteria.size(); ++i) {
        try {
          parse_criterion(select.criteria[i]);
        } catch (const std::invalid_argument& e) {
          throw config_error("select.criteria[" + std::to_string(i) + "]: " + e.what());
        }
      }
      for (std::size_t i = 0; i < select.tests.size(); ++i) {
        try {
          if (parse_strategy(select.tests[i]).kind != Strategy::Kind::HypothesisTest)
            throw std::invalid_argument("'" + select.tests[i] + "' is not a hypothesis-testing strategy");
        } catch (const std::invalid_argument& e) {
          throw config_error("select.tests[" + std::to_string(i) + "]: " + e.what());
        }
      }
    }
    if (mode == Mode::recalibrate) {
      if (recalibrate.sample_sizes.empty()) throw config_error("recalibrate.sample_sizes: list is empty");
      for (int t : recalibrate.sample_sizes)
        if (t < 10) throw config_error("recalibrate.sample_sizes: every size must be at least 10");
      if (recalibrate.asymptotic_T < 100) throw config_error("recalibrate.asymptotic_T: must be at least 100");
    }
  }
};

inline TrendKnowledge parse_trend_knowledge(const std::string& s) {
  if (s == "none_known_absent" || s == "no_trend") return TrendKnowledge::none_known_absent;
  if (s == "known_present" || s == "trend") return TrendKnowledge::known_present;
  if (s == "unknown" || s == "all") return TrendKnowledge::unknown;
  throw std::invalid_argument("unknown trend knowledge '" + s + "'");
}

namespace detail {

using json = nlohmann::json;

inline void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw config_error((where.empty() ? "config" : where) + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw config_error((where.empty() ? "" : where + ".") + k + ": unknown field");
  }
}

template <class T>
T get(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw config_error(path + ": wrong type (" + std::string(j.type_name()) + ")");
  }
}

inline DgpParams parse_params(const json& j, const std::string& path) {
  DgpParams p;
  if (!j.is_object()) throw config_error(path + ": expected an object of parameter values");
  for (const auto& [k, v] : j.items()) {
    try {
      param_ref(p, k) = get<double>(v, path + "." + k);
    } catch (const std::invalid_argument&) {
      throw config_error(path + "." + k + ": unknown parameter");
    }
  }
  return p;
}

}  // namespace detail

inline RunConfig parse_config(std::istream& is) {
  using detail::get;
  detail::json j;
  try {
    j = detail::json::parse(is);
  } catch (const detail::json::parse_error& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  detail::check_keys(j, "", {"mode", "name", "scenario", "strategies", "reps", "master_seed", "workers",
                             "sample_len", "presample_len", "grid_rules", "out", "sweep", "select", "recalibrate",
                             "comment"});
  RunConfig c;
  try {
    if (j.contains("mode")) {
      c.mode = parse_mode(get<std::string>(j["mode"], "mode"));
      c.mode_given = true;
    }
    if (j.contains("name")) c.name = get<std::string>(j["name"], "name");
    if (j.contains("scenario")) {
      try {
        c.scenario = parse_scenario(get<std::string>(j["scenario"], "scenario"));
      } catch (const std::invalid_argument& e) {
        throw config_error(std::string("scenario: ") + e.what());
      }
    }
    if (j.contains("strategies")) c.strategies = get<std::vector<std::string>>(j["strategies"], "strategies");
    if (j.contains("reps")) c.reps = get<int>(j["reps"], "reps");
    if (j.contains("master_seed")) c.master_seed = get<std::uint64_t>(j["master_seed"], "master_seed");
    if (j.contains("workers")) c.workers = get<int>(j["workers"], "workers");
    if (j.contains("sample_len")) c.sample_len = get<int>(j["sample_len"], "sample_len");
    if (j.contains("presample_len")) c.presample_len = get<int>(j["presample_len"], "presample_len");
    if (j.contains("grid_rules")) {
      const auto g = get<std::string>(j["grid_rules"], "grid_rules");
      if (g != "standard" && g != "literal") throw config_error("grid_rules: expected standard or literal");
      c.literal_grid = g == "literal";
    }
    if (j.contains("out")) c.out = get<std::string>(j["out"], "out");
    if (j.contains("sweep")) {
      const auto& s = j["sweep"];
      detail::check_keys(s, "sweep", {"base", "parameter", "values"});
      if (s.contains("base")) c.sweep.base = detail::parse_params(s["base"], "sweep.base");
      if (s.contains("parameter")) c.sweep.parameter = get<std::string>(s["parameter"], "sweep.parameter");
      if (s.contains("values")) c.sweep.values = get<std::vector<double>>(s["values"], "sweep.values");
    }
    if (j.contains("select")) {
      const auto& s = j["select"];
      detail::check_keys(s, "select", {"input", "criteria", "tests", "trend_knowledge"});
      if (s.contains("input")) c.select.input = get<std::string>(s["input"], "select.input");
      if (s.contains("criteria")) c.select.criteria = get<std::vector<std::string>>(s["criteria"], "select.criteria");
      if (s.contains("tests")) c.select.tests = get<std::vector<std::string>>(s["tests"], "select.tests");
      if (s.contains("trend_knowledge")) {
        try {
          c.select.trend_knowledge =
              parse_trend_knowledge(get<std::string>(s["trend_knowledge"], "select.trend_knowledge"));
        } catch (const std::invalid_argument& e) {
          throw config_error(std::string("select.trend_knowledge: ") + e.what());
        }
      }
    }
    if (j.contains("recalibrate")) {
      const auto& s = j["recalibrate"];
      detail::check_keys(s, "recalibrate", {"sample_sizes", "asymptotic_T"});
      if (s.contains("sample_sizes"))
        c.recalibrate.sample_sizes = get<std::vector<int>>(s["sample_sizes"], "recalibrate.sample_sizes");
      if (s.contains("asymptotic_T")) c.recalibrate.asymptotic_T = get<int>(s["asymptotic_T"], "recalibrate.asymptotic_T");
    }
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace tsselect
