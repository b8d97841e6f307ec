#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tsselect/errors.hpp"

namespace tsselect {

enum class CvTest { adf, eg, johansen_trace };
enum class DetCase { constant, constant_trend, restricted_constant, unrestricted_constant };

inline std::string to_string(CvTest t) {
  switch (t) {
    case CvTest::adf: return "adf";
    case CvTest::eg: return "eg";
    case CvTest::johansen_trace: return "johansen_trace";
  }
  return "?";
}

inline std::string to_string(DetCase c) {
  switch (c) {
    case DetCase::constant: return "constant";
    case DetCase::constant_trend: return "constant_trend";
    case DetCase::restricted_constant: return "restricted_constant";
    case DetCase::unrestricted_constant: return "unrestricted_constant";
  }
  return "?";
}

/// Shipped table; resources/critical_values.csv is a byte-identical copy.
inline std::string_view embedded_critical_values_csv() {
  static constexpr std::string_view csv = R"CSV(test,det_case,T_bracket,alpha,value,source
adf,constant,25,0.01,-3.720260,MacKinnon (1991) response surface
adf,constant,25,0.05,-2.984996,MacKinnon (1991) response surface
adf,constant,25,0.10,-2.631788,MacKinnon (1991) response surface
adf,constant,50,0.01,-3.565180,MacKinnon (1991) response surface
adf,constant,50,0.05,-2.920204,MacKinnon (1991) response surface
adf,constant,50,0.10,-2.597652,MacKinnon (1991) response surface
adf,constant,100,0.01,-3.496415,MacKinnon (1991) response surface
adf,constant,100,0.05,-2.890316,MacKinnon (1991) response surface
adf,constant,100,0.10,-2.581928,MacKinnon (1991) response surface
adf,constant,250,0.01,-3.457964,MacKinnon (1991) response surface
adf,constant,250,0.05,-2.873186,MacKinnon (1991) response surface
adf,constant,250,0.10,-2.572924,MacKinnon (1991) response surface
adf,constant,500,0.01,-3.445615,MacKinnon (1991) response surface
adf,constant,500,0.05,-2.867609,MacKinnon (1991) response surface
adf,constant,500,0.10,-2.569994,MacKinnon (1991) response surface
adf,constant,inf,0.01,-3.433500,MacKinnon (1991) response surface
adf,constant,inf,0.05,-2.862100,MacKinnon (1991) response surface
adf,constant,inf,0.10,-2.567100,MacKinnon (1991) response surface
adf,constant_trend,25,0.01,-4.373824,MacKinnon (1991) response surface
adf,constant_trend,25,0.05,-3.602688,MacKinnon (1991) response surface
adf,constant_trend,25,0.10,-3.236748,MacKinnon (1991) response surface
adf,constant_trend,50,0.01,-4.149836,MacKinnon (1991) response surface
adf,constant_trend,50,0.05,-3.500512,MacKinnon (1991) response surface
adf,constant_trend,50,0.10,-3.179292,MacKinnon (1991) response surface
adf,constant_trend,100,0.01,-4.052074,MacKinnon (1991) response surface
adf,constant_trend,100,0.05,-3.454773,MacKinnon (1991) response surface
adf,constant_trend,100,0.10,-3.152838,MacKinnon (1991) response surface
adf,constant_trend,250,0.01,-3.997971,MacKinnon (1991) response surface
adf,constant_trend,250,0.05,-3.429041,MacKinnon (1991) response surface
adf,constant_trend,250,0.10,-3.137693,MacKinnon (1991) response surface
adf,constant_trend,500,0.01,-3.980696,MacKinnon (1991) response surface
adf,constant_trend,500,0.05,-3.420749,MacKinnon (1991) response surface
adf,constant_trend,500,0.10,-3.132766,MacKinnon (1991) response surface
adf,constant_trend,inf,0.01,-3.963800,MacKinnon (1991) response surface
adf,constant_trend,inf,0.05,-3.412600,MacKinnon (1991) response surface
adf,constant_trend,inf,0.10,-3.127900,MacKinnon (1991) response surface
eg,constant,25,0.01,-4.369508,MacKinnon (1991) response surface
eg,constant,25,0.05,-3.590748,MacKinnon (1991) response surface
eg,constant,25,0.10,-3.218128,MacKinnon (1991) response surface
eg,constant,50,0.01,-4.122792,MacKinnon (1991) response surface
eg,constant,50,0.05,-3.460632,MacKinnon (1991) response surface
eg,constant,50,0.10,-3.129872,MacKinnon (1991) response surface
eg,constant,100,0.01,-4.008443,MacKinnon (1991) response surface
eg,constant,100,0.05,-3.398268,MacKinnon (1991) response surface
eg,constant,100,0.10,-3.087463,MacKinnon (1991) response surface
eg,constant,250,0.01,-3.942716,MacKinnon (1991) response surface
eg,constant,250,0.05,-3.361712,MacKinnon (1991) response surface
eg,constant,250,0.10,-3.062568,MacKinnon (1991) response surface
eg,constant,500,0.01,-3.921288,MacKinnon (1991) response surface
eg,constant,500,0.05,-3.349670,MacKinnon (1991) response surface
eg,constant,500,0.10,-3.054361,MacKinnon (1991) response surface
eg,constant,inf,0.01,-3.900100,MacKinnon (1991) response surface
eg,constant,inf,0.05,-3.337700,MacKinnon (1991) response surface
eg,constant,inf,0.10,-3.046200,MacKinnon (1991) response surface
johansen_trace,unrestricted_constant,inf,0.01,19.937110,MacKinnon-Haug-Michelis (1999)
johansen_trace,unrestricted_constant,inf,0.05,15.494710,MacKinnon-Haug-Michelis (1999)
johansen_trace,unrestricted_constant,inf,0.10,13.428780,MacKinnon-Haug-Michelis (1999)
johansen_trace,restricted_constant,inf,0.01,25.056800,simulated (200000 reps of T=1000 random walks)
johansen_trace,restricted_constant,inf,0.05,20.261840,MacKinnon-Haug-Michelis (1999)
johansen_trace,restricted_constant,inf,0.10,18.019400,simulated (200000 reps of T=1000 random walks)
)CSV";
  return csv;
}

struct CvEntry {
  CvTest test;
  DetCase det_case;
  double t_bracket;  // +inf for asymptotic values
  double alpha;
  double value;
  std::string source;
};

class CriticalValueTable {
 public:
  std::vector<CvEntry> entries;

  static CriticalValueTable parse(std::istream& is) {
    CriticalValueTable tab;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (line.empty() || lineno == 1) continue;
      std::vector<std::string> f;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) f.push_back(cell);
      if (f.size() != 6) throw config_error("critical values line " + std::to_string(lineno) + ": expected 6 fields");
      CvEntry e;
      e.test = parse_test(f[0], lineno);
      e.det_case = parse_det(f[1], lineno);
      e.t_bracket = f[2] == "inf" ? std::numeric_limits<double>::infinity() : std::stod(f[2]);
      e.alpha = std::stod(f[3]);
      e.value = std::stod(f[4]);
      e.source = f[5];
      tab.entries.push_back(std::move(e));
    }
    return tab;
  }

  static const CriticalValueTable& builtin() {
    static const CriticalValueTable tab = [] {
      std::istringstream is{std::string(embedded_critical_values_csv())};
      return parse(is);
    }();
    return tab;
  }

  /// Critical value for sample size T, linear in 1/T between brackets (asymptotic bracket at
  /// 1/T = 0). Below the smallest bracket the two smallest are extrapolated. Tables with only
  /// an asymptotic entry return it for every T.
  double lookup(CvTest test, DetCase det, double T, double alpha) const {
    std::vector<const CvEntry*> pts;
    for (const auto& e : entries)
      if (e.test == test && e.det_case == det && std::abs(e.alpha - alpha) < 1e-9) pts.push_back(&e);
    if (pts.empty())
      throw std::invalid_argument("no critical value for " + to_string(test) + "/" + to_string(det) +
                                  " at alpha " + std::to_string(alpha));
    if (pts.size() == 1) return pts[0]->value;
    // inverse sample size, ascending
    auto inv = [](const CvEntry* e) { return std::isinf(e->t_bracket) ? 0.0 : 1.0 / e->t_bracket; };
    std::sort(pts.begin(), pts.end(), [&](auto a, auto b) { return inv(a) < inv(b); });
    const double x = 1.0 / T;
    std::size_t i = 1;
    while (i + 1 < pts.size() && inv(pts[i]) < x) ++i;
    const double x0 = inv(pts[i - 1]), x1 = inv(pts[i]);
    const double w = (x - x0) / (x1 - x0);
    return pts[i - 1]->value + w * (pts[i]->value - pts[i - 1]->value);
  }

 private:
  static CvTest parse_test(const std::string& s, int line) {
    if (s == "adf") return CvTest::adf;
    if (s == "eg") return CvTest::eg;
    if (s == "johansen_trace") return CvTest::johansen_trace;
    throw config_error("critical values line " + std::to_string(line) + ": unknown test '" + s + "'");
  }
  static DetCase parse_det(const std::string& s, int line) {
    if (s == "constant") return DetCase::constant;
    if (s == "constant_trend") return DetCase::constant_trend;
    if (s == "restricted_constant") return DetCase::restricted_constant;
    if (s == "unrestricted_constant") return DetCase::unrestricted_constant;
    throw config_error("critical values line " + std::to_string(line) + ": unknown case '" + s + "'");
  }
};

}  // namespace tsselect
