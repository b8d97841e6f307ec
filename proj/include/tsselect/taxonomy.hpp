#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdio>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsselect/params.hpp"

namespace tsselect {

/// Candidate model identifier: family 1-16 and the number of augmentation lags,
/// printed as "family.0lags" (e.g. 14.02).
class ModelId {
public:
  /// Throws std::invalid_argument for pairs outside the 34-model taxonomy.
  static ModelId of(int family, int aug_lags) {
    if (!is_valid(family, aug_lags)) {
      throw std::invalid_argument("no model " + std::to_string(family) + ".0" +
                                  std::to_string(aug_lags) + " in the taxonomy");
    }
    return ModelId(family, aug_lags);
  }

  static constexpr bool is_valid(int family, int aug_lags) {
    if (family < 1 || family > 16 || aug_lags < 0 || aug_lags > 2) return false;
    if (family <= 6) return true;
    if (family == 7 || family == 8 || family == 11 || family == 12) return aug_lags == 0;
    return aug_lags >= 1;  // 9, 10, 13-16
  }

  /// Parses "11.00", "9.01", "14.2"; throws std::invalid_argument.
  static ModelId parse(const std::string& text) {
    const auto dot = text.find('.');
    try {
      if (dot == std::string::npos) return of(std::stoi(text), 0);
      return of(std::stoi(text.substr(0, dot)), std::stoi(text.substr(dot + 1)));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("cannot parse model id '" + text + "'");
    }
  }

  constexpr int family() const noexcept { return family_; }
  constexpr int aug_lags() const noexcept { return aug_lags_; }

  std::string to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%d.%02d", family_, aug_lags_);
    return buf;
  }

  friend constexpr auto operator<=>(const ModelId&, const ModelId&) = default;

private:
  constexpr ModelId(int f, int l) : family_(f), aug_lags_(l) {}
  int family_;
  int aug_lags_;
};

/// A: levels relation, B: first differences only, C: mixed, D: none.
enum class RelationType { A, B, C, D };

inline char to_char(RelationType r) { return "ABCD"[static_cast<int>(r)]; }

constexpr RelationType relation_of_family(int family) {
  if (family <= 6) return RelationType::D;
  if (family <= 10) return RelationType::B;
  if (family <= 14) return RelationType::A;
  return RelationType::C;
}

/// Regressor roles of the general equation for dY_t.
enum class Role { Intercept, Trend, YLag, DY1, DY2, ZLevel, DZ, DZ1, DZ2, EC };

inline constexpr std::array<Role, 10> all_roles = {Role::Intercept, Role::Trend, Role::YLag,
                                                   Role::DY1,       Role::DY2,   Role::ZLevel,
                                                   Role::DZ,        Role::DZ1,   Role::DZ2,
                                                   Role::EC};

inline const char* role_name(Role r) {
  switch (r) {
    case Role::Intercept: return "intercept";
    case Role::Trend: return "trend";
    case Role::YLag: return "Y(t-1)";
    case Role::DY1: return "dY(t-1)";
    case Role::DY2: return "dY(t-2)";
    case Role::ZLevel: return "Z(t)";
    case Role::DZ: return "dZ(t)";
    case Role::DZ1: return "dZ(t-1)";
    case Role::DZ2: return "dZ(t-2)";
    case Role::EC: return "EC(t-1)";
  }
  return "?";
}

/// How many observations before t a role reaches back.
constexpr int lag_depth(Role r) {
  switch (r) {
    case Role::YLag: case Role::DZ: case Role::EC: return 1;
    case Role::DY1: case Role::DZ1: return 2;
    case Role::DY2: case Role::DZ2: return 3;
    default: return 0;
  }
}

struct FixedTerm {
  Role role;
  double coefficient;
};

struct ModelSpec {
  ModelId id;
  std::string title;
  std::vector<Role> free_coeffs;
  std::vector<FixedTerm> fixed_terms;
  RelationType relation;
  bool has_cointegration;
  int max_lag_needed;

  bool has_role(Role r) const {
    return std::find(free_coeffs.begin(), free_coeffs.end(), r) != free_coeffs.end();
  }
  bool has_trend() const { return id.family() % 2 == 0; }
};

namespace detail {

inline ModelSpec make_spec(int family, int lags, std::string title, std::vector<Role> free,
                           std::vector<FixedTerm> fixed = {}) {
  ModelSpec s{ModelId::of(family, lags), std::move(title), std::move(free), std::move(fixed),
              relation_of_family(family), family == 13 || family == 14, 0};
  for (Role r : s.free_coeffs) s.max_lag_needed = std::max(s.max_lag_needed, lag_depth(r));
  for (const auto& f : s.fixed_terms) s.max_lag_needed = std::max(s.max_lag_needed, lag_depth(f.role));
  return s;
}

inline std::vector<ModelSpec> build_models() {
  using R = Role;
  const std::vector<R> none;
  const std::array<std::vector<R>, 3> y_lags = {none, std::vector<R>{R::DY1},
                                                std::vector<R>{R::DY1, R::DY2}};
  const std::array<const char*, 3> al = {"", ", AL(1)", ", AL(2)"};
  auto cat = [](std::vector<R> a, const std::vector<R>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  const FixedTerm minus_y{R::YLag, -1.0};

  std::vector<ModelSpec> m;
  for (int l = 0; l <= 2; ++l)
    m.push_back(make_spec(1, l, std::string("Random walk") + al[l], y_lags[l]));
  for (int l = 0; l <= 2; ++l)
    m.push_back(make_spec(2, l, std::string("Random walk with drift") + al[l],
                          cat({R::Intercept}, y_lags[l])));
  for (int l = 0; l <= 2; ++l)
    m.push_back(make_spec(3, l, std::string("Stationary around nonzero constant") + al[l],
                          cat({R::Intercept, R::YLag}, y_lags[l])));
  for (int l = 0; l <= 2; ++l)
    m.push_back(make_spec(4, l, std::string("Trend stationary") + al[l],
                          cat({R::Intercept, R::Trend, R::YLag}, y_lags[l])));
  for (int l = 0; l <= 2; ++l)
    m.push_back(make_spec(5, l, std::string("White noise") + al[l], cat({R::Intercept}, y_lags[l]),
                          {minus_y}));
  for (int l = 0; l <= 2; ++l)
    m.push_back(make_spec(6, l, std::string("White noise around trend") + al[l],
                          cat({R::Intercept, R::Trend}, y_lags[l]), {minus_y}));
  m.push_back(make_spec(7, 0, "Difference relation, no intercept", {R::DZ}));
  m.push_back(make_spec(8, 0, "Difference relation with intercept", {R::Intercept, R::DZ}));
  const std::array<std::vector<R>, 3> xy_lags = {
      none, std::vector<R>{R::DY1, R::DZ1}, std::vector<R>{R::DY1, R::DY2, R::DZ1, R::DZ2}};
  for (int l = 1; l <= 2; ++l)
    m.push_back(make_spec(9, l, std::string("Difference Granger-causal, no intercept") + al[l],
                          xy_lags[l]));
  for (int l = 1; l <= 2; ++l)
    m.push_back(make_spec(10, l, std::string("Difference Granger-causal, with intercept") + al[l],
                          cat({R::Intercept}, xy_lags[l])));
  m.push_back(make_spec(11, 0, "Current level relation", {R::Intercept, R::ZLevel}, {minus_y}));
  m.push_back(make_spec(12, 0, "Trend current-level relation",
                        {R::Intercept, R::Trend, R::ZLevel}, {minus_y}));
  for (int l = 1; l <= 2; ++l)
    m.push_back(make_spec(13, l, std::string("Error correction, no intercept") + al[l],
                          cat(xy_lags[l], {R::EC})));
  for (int l = 1; l <= 2; ++l)
    m.push_back(make_spec(14, l, std::string("Error correction, with intercept") + al[l],
                          cat(cat({R::Intercept}, xy_lags[l]), {R::EC})));
  for (int l = 1; l <= 2; ++l)
    m.push_back(make_spec(15, l, std::string("Stationary around lagged dZ, no intercept") + al[l],
                          cat({R::YLag}, xy_lags[l])));
  for (int l = 1; l <= 2; ++l)
    m.push_back(make_spec(16, l, std::string("Stationary around lagged dZ, with intercept") + al[l],
                          cat({R::Intercept, R::YLag}, xy_lags[l])));
  std::sort(m.begin(), m.end(), [](const ModelSpec& a, const ModelSpec& b) { return a.id < b.id; });
  return m;
}

}  // namespace detail

/// All 34 candidate models in ascending (family, aug_lags) order.
inline const std::vector<ModelSpec>& list_models() {
  static const std::vector<ModelSpec> models = detail::build_models();
  return models;
}

inline const ModelSpec& model_spec(ModelId id) {
  const auto& all = list_models();
  auto it = std::lower_bound(all.begin(), all.end(), id,
                             [](const ModelSpec& s, ModelId v) { return s.id < v; });
  return *it;  // every constructible ModelId is in the table
}

/// Position of a model in list_models(); handy for dense per-model arrays.
inline std::size_t model_index(ModelId id) {
  const auto& all = list_models();
  return static_cast<std::size_t>(
      std::lower_bound(all.begin(), all.end(), id,
                       [](const ModelSpec& s, ModelId v) { return s.id < v; }) -
      all.begin());
}

enum class ZProcessKind { RandomWalk, RandomWalkDrift, StationaryConstant, TrendStationary };

inline const char* to_string(ZProcessKind k) {
  switch (k) {
    case ZProcessKind::RandomWalk: return "random walk";
    case ZProcessKind::RandomWalkDrift: return "random walk with drift";
    case ZProcessKind::StationaryConstant: return "stationary around nonzero constant";
    case ZProcessKind::TrendStationary: return "trend stationary";
  }
  return "?";
}

inline constexpr double zero_tolerance = 1e-7;

/// Z process named by (m1, m2, m3), or nullopt when the triple is not one of the four kinds.
inline std::optional<ZProcessKind> classify_z(double m1, double m2, double m3) {
  const bool c = std::abs(m1) > zero_tolerance;
  const bool tr = std::abs(m2) > zero_tolerance;
  if (m3 == 1.0) {
    if (tr) return std::nullopt;
    return c ? ZProcessKind::RandomWalkDrift : ZProcessKind::RandomWalk;
  }
  if (m3 > 0.0 && m3 < 1.0 && c) {
    return tr ? ZProcessKind::TrendStationary : ZProcessKind::StationaryConstant;
  }
  return std::nullopt;
}

inline bool z_has_trend(ZProcessKind k) {
  return k == ZProcessKind::RandomWalkDrift || k == ZProcessKind::TrendStationary;
}
inline bool z_is_random_walk(ZProcessKind k) {
  return k == ZProcessKind::RandomWalk || k == ZProcessKind::RandomWalkDrift;
}

/// The taxonomy model whose nonzero-coefficient pattern matches theta, if any.
///
/// Coefficients with magnitude <= 1e-7 count as zero. The flagged sentinels are
/// read by their listed value: a tiny b1 is zero, a tiny c1 is nonzero. The Y(t-1)
/// coefficient b3 has three classes: 0 (unit root), -1 (white-noise / level forms,
/// within 1e-7) and otherwise stationary (-2 < b3 < 0).
inline std::optional<ModelId> classify_params(const DgpParams& theta) {
  auto nz = [](double v) { return std::abs(v) > zero_tolerance; };
  const bool b1 = theta.sentinel.b1_tiny ? false : nz(theta.b1);
  const bool c1 = theta.sentinel.c1_tiny ? true : nz(theta.c1);

  enum class B3 { Zero, MinusOne, Stationary, Invalid };
  B3 b3 = B3::Invalid;
  if (!nz(theta.b3)) b3 = B3::Zero;
  else if (std::abs(theta.b3 + 1.0) <= zero_tolerance) b3 = B3::MinusOne;
  else if (theta.b3 < 0.0 && theta.b3 > -2.0) b3 = B3::Stationary;
  if (b3 == B3::Invalid) return std::nullopt;

  // Nonzero mask over {b1, b2, b4, b5, b6, b7, b8, b9, b10, c1, c2}.
  const std::array<bool, 11> have = {b1,           nz(theta.b2), nz(theta.b4), nz(theta.b5),
                                     nz(theta.b6), nz(theta.b7), nz(theta.b8), nz(theta.b9),
                                     nz(theta.b10), c1,          nz(theta.c2)};
  if (have[8] && theta.b10 >= 0.0) return std::nullopt;

  for (const ModelSpec& s : list_models()) {
    std::array<bool, 11> want{};
    B3 want_b3 = B3::Zero;
    for (Role r : s.free_coeffs) {
      switch (r) {
        case Role::Intercept: want[0] = true; break;
        case Role::Trend: want[1] = true; break;
        case Role::YLag: want_b3 = B3::Stationary; break;
        case Role::DY1: want[2] = true; break;
        case Role::DY2: want[3] = true; break;
        case Role::ZLevel: want[4] = true; break;
        case Role::DZ: want[5] = true; break;
        case Role::DZ1: want[6] = true; break;
        case Role::DZ2: want[7] = true; break;
        case Role::EC: want[8] = want[9] = want[10] = true; break;
      }
    }
    for (const auto& f : s.fixed_terms) {
      if (f.role == Role::YLag) want_b3 = B3::MinusOne;
    }
    if (want == have && want_b3 == b3) return s.id;
  }
  return std::nullopt;
}

enum class TrendKnowledge { none_known_absent, known_present, unknown };

inline const char* to_string(TrendKnowledge k) {
  switch (k) {
    case TrendKnowledge::none_known_absent: return "none_known_absent";
    case TrendKnowledge::known_present: return "known_present";
    case TrendKnowledge::unknown: return "unknown";
  }
  return "?";
}

inline bool is_choosable(ModelId id, TrendKnowledge k) {
  switch (k) {
    case TrendKnowledge::none_known_absent: return id.family() % 2 == 1;
    case TrendKnowledge::known_present: return id.family() % 2 == 0;
    case TrendKnowledge::unknown: return true;
  }
  return false;
}

/// Models a selection strategy may return under the given prior trend knowledge.
inline std::vector<ModelId> choosable_set(TrendKnowledge k) {
  std::vector<ModelId> out;
  for (const auto& s : list_models()) {
    if (is_choosable(s.id, k)) out.push_back(s.id);
  }
  return out;
}

}  // namespace tsselect
