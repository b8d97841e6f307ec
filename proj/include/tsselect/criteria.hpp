#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tsselect/errors.hpp"
#include "tsselect/regress.hpp"
#include "tsselect/taxonomy.hpp"

namespace tsselect {

enum class CriterionKind { AIC, AICc, AICu, SIC, CV, FPEu };

inline const char* to_string(CriterionKind k) {
  switch (k) {
    case CriterionKind::AIC: return "AIC";
    case CriterionKind::AICc: return "AICc";
    case CriterionKind::AICu: return "AICu";
    case CriterionKind::SIC: return "SIC";
    case CriterionKind::CV: return "CV";
    case CriterionKind::FPEu: return "FPEu";
  }
  return "?";
}

inline CriterionKind parse_criterion(const std::string& s) {
  for (auto k : {CriterionKind::AIC, CriterionKind::AICc, CriterionKind::AICu, CriterionKind::SIC,
                 CriterionKind::CV, CriterionKind::FPEu})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown criterion '" + s + "'");
}

inline bool is_information_criterion(CriterionKind k) {
  return k != CriterionKind::CV && k != CriterionKind::FPEu;
}

/// AIC   = T ln(RSS/T) + 2(C+1)
/// AICc  = T ln(RSS/T) + 2T(C+1)/(T-C-2)
/// AICu  = T ln(RSS/(T-C)) + 2T(C+1)/(T-C-2)
/// SIC   = T ln(RSS/T) + C ln T
/// FPEu  = [RSS/(T-C)] [(T+C+1)/(T-C-1)]
inline double information_criterion(CriterionKind kind, double rss, int t, int c) {
  if (!(rss > 0.0) || !std::isfinite(rss)) throw criterion_domain_error("criterion: RSS must be positive");
  if (t <= 0 || c < 0) throw criterion_domain_error("criterion: need T > 0 and C >= 0");
  const double T = t, C = c;
  switch (kind) {
    case CriterionKind::AIC:
      return T * std::log(rss / T) + 2.0 * (C + 1.0);
    case CriterionKind::AICc:
      if (t <= c + 2) throw criterion_domain_error("AICc: needs T > C + 2");
      return T * std::log(rss / T) + 2.0 * T * (C + 1.0) / (T - C - 2.0);
    case CriterionKind::AICu:
      if (t <= c + 2) throw criterion_domain_error("AICu: needs T > C + 2");
      return T * std::log(rss / (T - C)) + 2.0 * T * (C + 1.0) / (T - C - 2.0);
    case CriterionKind::SIC:
      return T * std::log(rss / T) + C * std::log(T);
    case CriterionKind::FPEu:
      if (t <= c + 1) throw criterion_domain_error("FPEu: needs T > C + 1");
      return rss / (T - C) * ((T + C + 1.0) / (T - C - 1.0));
    case CriterionKind::CV:
      break;
  }
  throw std::invalid_argument("information_criterion: CV needs a fit, use cross_validation");
}

/// (1/T) sum (e_t / (1 - h_t))^2
inline double cross_validation(const RegressionFit& fit) {
  double s = 0;
  for (Eigen::Index i = 0; i < fit.residuals.size(); ++i) {
    const double h = fit.hat_diagonals[i];
    if (!(1.0 - h > 1e-12)) throw degenerate_leverage_error("observation with leverage one");
    const double r = fit.residuals[i] / (1.0 - h);
    s += r * r;
  }
  return s / static_cast<double>(fit.t_obs);
}

inline double criterion_value(CriterionKind kind, const RegressionFit& fit) {
  if (kind == CriterionKind::CV) return cross_validation(fit);
  return information_criterion(kind, fit.rss, fit.t_obs, fit.c_count);
}

using ModelFits = std::vector<std::pair<ModelId, RegressionFit>>;

/// Argmin of the criterion over the choosable fits; ties go to the smaller model id.
inline ModelId select_by_criterion(CriterionKind kind, const ModelFits& fits, TrendKnowledge k) {
  const ModelId* best = nullptr;
  double best_v = 0;
  for (const auto& [id, fit] : fits) {
    if (!is_choosable(id, k)) continue;
    const double v = criterion_value(kind, fit);
    if (!best || v < best_v || (v == best_v && id < *best)) {
      best = &id;
      best_v = v;
    }
  }
  if (!best) throw std::invalid_argument("select_by_criterion: no choosable candidate");
  return *best;
}

struct WeightEntry {
  ModelId id;
  double ic_value;
  double delta;
  double weight;
};

struct WeightTable {
  std::vector<WeightEntry> entries;

  double weight_of(ModelId id) const {
    for (const auto& e : entries)
      if (e.id == id) return e.weight;
    return 0.0;
  }
};

/// w_i = exp(-delta_i / 2) / sum_r exp(-delta_r / 2), delta_i = IC_i - min IC.
/// Entries come back sorted by delta, ties by model id.
inline WeightTable evidence_weights(const std::vector<std::pair<ModelId, double>>& ic_values) {
  if (ic_values.empty()) throw std::invalid_argument("evidence_weights: no models");
  double lo = ic_values.front().second;
  for (const auto& [id, v] : ic_values) {
    if (!std::isfinite(v)) throw std::invalid_argument("evidence_weights: non-finite IC for " + id.to_string());
    lo = std::min(lo, v);
  }
  WeightTable w;
  double total = 0;
  for (const auto& [id, v] : ic_values) {
    const double d = v - lo;
    const double x = std::exp(-0.5 * d);
    w.entries.push_back({id, v, d, x});
    total += x;
  }
  for (auto& e : w.entries) e.weight /= total;
  std::sort(w.entries.begin(), w.entries.end(), [](const WeightEntry& a, const WeightEntry& b) {
    return a.delta < b.delta || (a.delta == b.delta && a.id < b.id);
  });
  return w;
}

/// Weights of the given information criterion over the fits. CV and FPEu are rejected:
/// the weights are defined for information criteria only.
inline WeightTable evidence_weights(CriterionKind kind, const ModelFits& fits) {
  if (!is_information_criterion(kind))
    throw std::invalid_argument(std::string("evidence weights are not defined for ") + to_string(kind));
  std::vector<std::pair<ModelId, double>> v;
  v.reserve(fits.size());
  for (const auto& [id, fit] : fits) v.emplace_back(id, criterion_value(kind, fit));
  return evidence_weights(v);
}

struct AveragedCoefficient {
  double value = 0;
  double inclusion_weight = 0;  // total weight of models carrying the role
};

/// Weighted mean of each role's coefficient in the dY_t form; a model without the role
/// contributes zero. Fixed coefficients (the -1 on Y(t-1)) count as that model's coefficient.
inline std::map<Role, AveragedCoefficient> model_average(const ModelFits& fits, const WeightTable& w) {
  std::map<Role, AveragedCoefficient> out;
  for (Role r : all_roles) out[r];
  for (const auto& [id, fit] : fits) {
    const double wi = w.weight_of(id);
    const ModelSpec& s = model_spec(id);
    for (std::size_t j = 0; j < s.free_coeffs.size(); ++j) {
      auto& a = out[s.free_coeffs[j]];
      a.value += wi * fit.coefficients[static_cast<Eigen::Index>(j)];
      a.inclusion_weight += wi;
    }
    for (const auto& f : s.fixed_terms) {
      auto& a = out[f.role];
      a.value += wi * f.coefficient;
      a.inclusion_weight += wi;
    }
  }
  return out;
}

}  // namespace tsselect
