#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsselect/params.hpp"
#include "tsselect/rng.hpp"
#include "tsselect/taxonomy.hpp"

namespace tsselect {

/// X_t = psi D_t + M1 X_{t-1} + M2 X_{t-2} + M3 X_{t-3} + S (u_t, e_t)', X = (Y, Z)', D_t = (1, t)'.
struct VarCoefficients {
  Eigen::Matrix2d psi = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d M1 = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d M2 = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d M3 = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d shock_transform = Eigen::Matrix2d::Identity();
};

/// Structural route: N0 X_t + N_D D_t + N1..N3 lags, premultiplied by (I - N0)^{-1}.
/// Valid for every parameter vector.
inline VarCoefficients to_var_structural(const DgpParams& p) {
  p.validate();
  // Y_t = (b1 - b10 c1) + b2 t + (1 + b3 + b4 + b10) Y_{t-1} + (b5 - b4) Y_{t-2} - b5 Y_{t-3}
  //       + (b6 + b7) Z_t + (b8 - b7 - b10 c2) Z_{t-1} + (b9 - b8) Z_{t-2} - b9 Z_{t-3} + u_t
  Eigen::Matrix2d n0, nd, n1, n2, n3;
  n0 << 0, p.b6 + p.b7, 0, 0;
  nd << p.b1 - p.b10 * p.c1, p.b2, p.m1, p.m2;
  n1 << 1 + p.b3 + p.b4 + p.b10, p.b8 - p.b7 - p.b10 * p.c2, 0, p.m3;
  n2 << p.b5 - p.b4, p.b9 - p.b8, 0, 0;
  n3 << -p.b5, -p.b9, 0, 0;
  Eigen::Matrix2d s;  // (I - N0)^{-1}; N0 is nilpotent
  s << 1, p.b6 + p.b7, 0, 1;
  return {s * nd, s * n1, s * n2, s * n3, s};
}

/// Error-correction route: psi = Phi + alpha rho', M1 = I + alpha beta' + G1, M2 = G2 - G1,
/// M3 = -G2. Requires b10 != 0 and b3 = b6 = b7 = 0 (the cointegrated families).
inline VarCoefficients to_var_ecm(const DgpParams& p) {
  p.validate();
  if (p.b10 == 0.0 || p.b3 != 0.0 || p.b6 != 0.0 || p.b7 != 0.0) {
    throw std::invalid_argument("to_var_ecm: needs b10 != 0 and b3 = b6 = b7 = 0");
  }
  Eigen::Matrix2d phi, alpha, rho_t, beta_t, g1, g2;
  phi << p.b1, p.b2, p.m1, p.m2;
  alpha << p.b10, 0, 0, 1;
  rho_t << -p.c1, 0, 0, 0;
  beta_t << 1, -p.c2, 0, p.m3 - 1;
  g1 << p.b4, p.b8, 0, 0;
  g2 << p.b5, p.b9, 0, 0;
  VarCoefficients v;
  v.psi = phi + alpha * rho_t;
  v.M1 = Eigen::Matrix2d::Identity() + alpha * beta_t + g1;
  v.M2 = g2 - g1;
  v.M3 = -g2;
  return v;
}

inline VarCoefficients to_var(const DgpParams& p) {
  if (p.b10 != 0.0 && p.b3 == 0.0 && p.b6 == 0.0 && p.b7 == 0.0) return to_var_ecm(p);
  return to_var_structural(p);
}

/// Generated or loaded (Y, Z) with presample. Index i covers time t = i - presample_len + 1,
/// so the sample is t = 1..sample_len. u and e are empty for loaded data.
struct SeriesPair {
  std::vector<double> y, z;
  std::vector<double> u, e;
  int presample_len = 0;
  int sample_len = 0;
  StreamKey key{};

  int size() const { return presample_len + sample_len; }
  /// Storage index of sample time t (t may be <= 0 to reach into the presample).
  int idx(int t) const { return presample_len + t - 1; }
  double Y(int t) const { return y[static_cast<std::size_t>(idx(t))]; }
  double Z(int t) const { return z[static_cast<std::size_t>(idx(t))]; }
  double dY(int t) const { return Y(t) - Y(t - 1); }
  double dZ(int t) const { return Z(t) - Z(t - 1); }
};

/// Runs the VAR recursion over the given shocks from zero start values.
inline SeriesPair simulate_with_shocks(const DgpParams& theta, std::vector<double> u,
                                       std::vector<double> e, int presample) {
  if (u.size() != e.size()) throw std::invalid_argument("simulate: shock vectors differ in length");
  if (presample < 3) throw std::invalid_argument("simulate: presample must be >= 3");
  const int n = static_cast<int>(u.size());
  if (n - presample < 1) throw std::invalid_argument("simulate: no sample observations");
  const VarCoefficients v = to_var(theta);

  SeriesPair s;
  s.presample_len = presample;
  s.sample_len = n - presample;
  s.y.assign(static_cast<std::size_t>(n), 0.0);
  s.z.assign(static_cast<std::size_t>(n), 0.0);
  Eigen::Vector2d x1 = Eigen::Vector2d::Zero(), x2 = x1, x3 = x1;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i - presample + 1);
    const Eigen::Vector2d shock(u[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(i)]);
    const Eigen::Vector2d x = v.psi * Eigen::Vector2d(1.0, t) + v.M1 * x1 + v.M2 * x2 +
                              v.M3 * x3 + v.shock_transform * shock;
    s.y[static_cast<std::size_t>(i)] = x[0];
    s.z[static_cast<std::size_t>(i)] = x[1];
    x3 = x2;
    x2 = x1;
    x1 = x;
  }
  s.u = std::move(u);
  s.e = std::move(e);
  return s;
}

/// Draws (u_i, e_i) from block i of the substream and runs the recursion.
inline SeriesPair simulate(const DgpParams& theta, StreamKey key, int T = 50, int presample = 100) {
  if (T < 10) throw std::invalid_argument("simulate: T must be >= 10");
  const int n = T + presample;
  std::vector<double> u(static_cast<std::size_t>(n)), e(static_cast<std::size_t>(n));
  const Substream stream(key);
  for (int i = 0; i < n; ++i) {
    const auto d = stream.normal_pair(static_cast<std::uint64_t>(i));
    u[static_cast<std::size_t>(i)] = d[0];
    e[static_cast<std::size_t>(i)] = d[1];
  }
  SeriesPair s = simulate_with_shocks(theta, std::move(u), std::move(e), presample);
  s.key = key;
  return s;
}

inline SeriesPair simulate(const DgpParams& theta, std::uint64_t seed, int T = 50,
                           int presample = 100) {
  return simulate(theta, StreamKey{seed, 0, 0}, T, presample);
}

/// CSV with header `y,z,presample`; presample rows carry flag 1.
inline void write_series_csv(std::ostream& os, const SeriesPair& s) {
  os << "y,z,presample\n" << std::setprecision(17);
  for (int i = 0; i < s.size(); ++i) {
    os << s.y[static_cast<std::size_t>(i)] << ',' << s.z[static_cast<std::size_t>(i)] << ','
       << (i < s.presample_len ? 1 : 0) << '\n';
  }
}

/// Reads `y,z[,presample]`. Without a presample column the first `default_presample`
/// rows become lags. Throws std::runtime_error with the offending line number.
inline SeriesPair read_series_csv(std::istream& is, int default_presample = 3) {
  SeriesPair s;
  std::string line;
  int lineno = 0;
  bool header_seen = false, has_flag = false;
  int flagged = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("y,z", 0) == 0) {
        has_flag = line.find("presample") != std::string::npos;
        continue;
      }
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
        if (used != cell.size() && cell.find_first_not_of(" \t", used) != std::string::npos)
          throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw std::runtime_error("line " + std::to_string(lineno) + ": cannot parse '" + cell + "'");
      }
    }
    if (vals.size() < 2 || vals.size() > 3)
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected 2 or 3 columns");
    if (!std::isfinite(vals[0]) || !std::isfinite(vals[1]))
      throw std::runtime_error("line " + std::to_string(lineno) + ": non-finite value");
    s.y.push_back(vals[0]);
    s.z.push_back(vals[1]);
    if (has_flag && vals.size() == 3 && vals[2] != 0.0) ++flagged;
  }
  const int n = static_cast<int>(s.y.size());
  s.presample_len = has_flag ? flagged : default_presample;
  if (s.presample_len < 3) s.presample_len = 3;
  s.sample_len = n - s.presample_len;
  if (s.sample_len < 1) throw std::runtime_error("series has no sample observations");
  return s;
}

enum class Scenario { all, no_trend, trend };

inline const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::all: return "all";
    case Scenario::no_trend: return "no_trend";
    case Scenario::trend: return "trend";
  }
  return "?";
}

inline Scenario parse_scenario(const std::string& s) {
  if (s == "all") return Scenario::all;
  if (s == "no_trend") return Scenario::no_trend;
  if (s == "trend") return Scenario::trend;
  throw std::invalid_argument("unknown scenario '" + s + "'");
}

inline TrendKnowledge trend_knowledge_of(Scenario s) {
  switch (s) {
    case Scenario::no_trend: return TrendKnowledge::none_known_absent;
    case Scenario::trend: return TrendKnowledge::known_present;
    case Scenario::all: return TrendKnowledge::unknown;
  }
  return TrendKnowledge::unknown;
}

/// Value sets of the permutation grid.
///
/// literal() lists four nonzero speeds of adjustment and yields 1330/319/346 valid
/// permutations; standard() drops b10 = -0.8 and yields 1090/259/286.
/// Removing any one nonzero b10 value gives the same counts; no other single-value
/// change does.
struct GridRules {
  std::array<std::vector<double>, 15> values;  // b1..b10, c1, c2, m1, m2, m3

  static GridRules literal() {
    return {{{{0, 1},
              {0, 0.5, 1},
              {-1, -0.9, -0.5, -0.1, 0},
              {0, 0.5},
              {0, 0.3},
              {0, 0.1, 1, 10},
              {0, 0.1, 1, 10},
              {-0.5, 0, 0.1, 0.5, 1, 10},
              {0, 0.1, 1, 10},
              {0, -0.1, -0.5, -0.8, -1},
              {0, 1},
              {0, 0.1, 1, 10},
              {0, 1},
              {0, 1},
              {1, 0.5}}}};
  }

  static GridRules standard() {
    GridRules g = literal();
    g.values[9] = {0, -0.1, -0.5, -1};
    return g;
  }
};

struct Permutation {
  DgpParams theta;
  ModelId model;
  ZProcessKind z_kind;
};

/// Valid permutations of the grid in a fixed order (Y-side values vary slowest in
/// parameter order b1..c2, then the Z process RW, RWD, SC, TS).
///
/// Kept: the Y side matches a taxonomy model other than 15/16, (m1, m2, m3) is one of
/// the four Z processes, Z random walks never pair with 11/12, stationary Z never pairs
/// with 13/14. no_trend keeps odd families with Z in {RW, SC}; trend keeps even families
/// with Z in {RWD, TS}. b10 = -1 is stored as -0.99999, and in family 13 b1 = 0 is
/// stored as 0.00001; both are flagged in DgpParams::sentinel.
inline std::vector<Permutation> enumerate_permutations(Scenario scenario,
                                                       const GridRules& rules = GridRules::standard()) {
  const auto& V = rules.values;

  // Z processes first: few of them, and the Y loop below pairs with each.
  struct ZChoice {
    double m1, m2, m3;
    ZProcessKind kind;
  };
  std::vector<ZChoice> zs;
  for (double m1 : V[12])
    for (double m2 : V[13])
      for (double m3 : V[14])
        if (auto k = classify_z(m1, m2, m3)) zs.push_back({m1, m2, m3, *k});
  std::stable_sort(zs.begin(), zs.end(),
                   [](const ZChoice& a, const ZChoice& b) { return a.kind < b.kind; });

  // Nonzero pattern -> model, using the same bit order as classify_params.
  // bit 0..10: b1 b2 b4 b5 b6 b7 b8 b9 b10 c1 c2; b3 class 0 = zero, 1 = -1, 2 = stationary.
  std::vector<int> table(3 << 11, -1);
  const auto& models = list_models();
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const ModelSpec& s = models[mi];
    unsigned mask = 0;
    int b3c = 0;
    for (Role r : s.free_coeffs) {
      switch (r) {
        case Role::Intercept: mask |= 1u << 0; break;
        case Role::Trend: mask |= 1u << 1; break;
        case Role::YLag: b3c = 2; break;
        case Role::DY1: mask |= 1u << 2; break;
        case Role::DY2: mask |= 1u << 3; break;
        case Role::ZLevel: mask |= 1u << 4; break;
        case Role::DZ: mask |= 1u << 5; break;
        case Role::DZ1: mask |= 1u << 6; break;
        case Role::DZ2: mask |= 1u << 7; break;
        case Role::EC: mask |= 7u << 8; break;
      }
    }
    for (const auto& f : s.fixed_terms)
      if (f.role == Role::YLag) b3c = 1;
    table[static_cast<std::size_t>((b3c << 11) | static_cast<int>(mask))] = static_cast<int>(mi);
  }

  std::vector<Permutation> out;
  std::array<std::size_t, 12> ix{};
  const std::array<int, 11> bit_of = {0, 1, -1, 2, 3, 4, 5, 6, 7, 8, 9};  // b1..b10, c1; c2 = 10
  while (true) {
    double b[12];
    unsigned mask = 0;
    for (int j = 0; j < 12; ++j) {
      b[j] = V[static_cast<std::size_t>(j)][ix[static_cast<std::size_t>(j)]];
      if (b[j] != 0.0) {
        if (j < 11 && bit_of[static_cast<std::size_t>(j)] >= 0) mask |= 1u << bit_of[static_cast<std::size_t>(j)];
        if (j == 11) mask |= 1u << 10;
      }
    }
    const int b3c = b[2] == 0.0 ? 0 : (b[2] == -1.0 ? 1 : 2);
    const int mi = (b[9] > 0.0) ? -1 : table[static_cast<std::size_t>((b3c << 11) | static_cast<int>(mask))];
    if (mi >= 0) {
      const ModelSpec& spec = models[static_cast<std::size_t>(mi)];
      const int fam = spec.id.family();
      if (fam != 15 && fam != 16) {
        for (const ZChoice& zc : zs) {
          const bool z_rw = z_is_random_walk(zc.kind);
          if (z_rw && (fam == 11 || fam == 12)) continue;
          if (!z_rw && (fam == 13 || fam == 14)) continue;
          if (scenario == Scenario::no_trend && (fam % 2 == 0 || z_has_trend(zc.kind))) continue;
          if (scenario == Scenario::trend && (fam % 2 == 1 || !z_has_trend(zc.kind))) continue;
          DgpParams p;
          p.b1 = b[0]; p.b2 = b[1]; p.b3 = b[2]; p.b4 = b[3]; p.b5 = b[4]; p.b6 = b[5];
          p.b7 = b[6]; p.b8 = b[7]; p.b9 = b[8]; p.b10 = b[9]; p.c1 = b[10]; p.c2 = b[11];
          p.m1 = zc.m1; p.m2 = zc.m2; p.m3 = zc.m3;
          if (p.b10 == -1.0) {
            p.b10 = DgpParams::unit_speed_value;
            p.sentinel.b10_unit = true;
          }
          if (fam == 13 && p.b1 == 0.0) {
            p.b1 = DgpParams::tiny_value;
            p.sentinel.b1_tiny = true;
          }
          out.push_back({p, spec.id, zc.kind});
        }
      }
    }
    int j = 11;
    while (j >= 0 && ++ix[static_cast<std::size_t>(j)] == V[static_cast<std::size_t>(j)].size()) {
      ix[static_cast<std::size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
  }
  return out;
}

}  // namespace tsselect
