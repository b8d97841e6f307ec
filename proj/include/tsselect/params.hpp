#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tsselect {

/// True-process parameters.
///
/// Y follows
///   dY_t = b1 + b2 t + b3 Y_{t-1} + b4 dY_{t-1} + b5 dY_{t-2} + b6 Z_t + b7 dZ_t
///          + b8 dZ_{t-1} + b9 dZ_{t-2} + b10 (Y_{t-1} - (c1 + c2 Z_{t-1})) + u_t
/// and Z follows
///   Z_t = m1 + m2 t + m3 Z_{t-1} + e_t
/// with u, e independent standard normal.
struct DgpParams {
  double b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0, b7 = 0, b8 = 0, b9 = 0, b10 = 0;
  double c1 = 0, c2 = 0;
  double m1 = 0, m2 = 0, m3 = 1;

  /// Grid substitutions. The value stored in the field is the substituted one;
  /// the flag records what the grid listed so classification can see through it.
  struct Sentinels {
    bool b1_tiny = false;   // listed 0, stored 0.00001; classifies as zero
    bool c1_tiny = false;   // listed 0, stored 0.00001; classifies as nonzero
    bool b10_unit = false;  // listed -1, stored -0.99999
  } sentinel;

  static constexpr double tiny_value = 0.00001;
  static constexpr double unit_speed_value = -0.99999;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("DgpParams: " + msg); };
    const double vals[] = {b1, b2, b3, b4, b5, b6, b7, b8, b9, b10, c1, c2, m1, m2, m3};
    for (double v : vals) {
      if (!std::isfinite(v)) fail("non-finite parameter");
    }
    if (b3 < -1.0 || b3 > 0.0) fail("b3 must lie in [-1, 0]");
    if (b10 < -1.0 || b10 > 0.0) fail("b10 must lie in [-1, 0]");
    if (!(m3 > 0.0 && m3 <= 1.0)) fail("m3 must satisfy 0 < m3 <= 1");
    if (!(b4 + b5 < 1.0)) fail("b4 + b5 must be < 1");
    if (b10 == 0.0 && (c1 != 0.0 || c2 != 0.0)) fail("c1 and c2 must be zero when b10 = 0");
    if (b10 != 0.0 && c2 == 0.0) fail("c2 must be nonzero when b10 != 0");
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "b=(" << b1 << ',' << b2 << ',' << b3 << ',' << b4 << ',' << b5 << ',' << b6 << ','
       << b7 << ',' << b8 << ',' << b9 << ',' << b10 << ") c=(" << c1 << ',' << c2 << ") m=("
       << m1 << ',' << m2 << ',' << m3 << ')';
    return os.str();
  }

  friend bool operator==(const DgpParams& a, const DgpParams& b) {
    return a.b1 == b.b1 && a.b2 == b.b2 && a.b3 == b.b3 && a.b4 == b.b4 && a.b5 == b.b5 &&
           a.b6 == b.b6 && a.b7 == b.b7 && a.b8 == b.b8 && a.b9 == b.b9 && a.b10 == b.b10 &&
           a.c1 == b.c1 && a.c2 == b.c2 && a.m1 == b.m1 && a.m2 == b.m2 && a.m3 == b.m3;
  }
};

/// Names accepted by `param_ref` (sweep configs vary one of these).
inline double& param_ref(DgpParams& p, const std::string& name) {
  if (name == "b1") return p.b1;
  if (name == "b2") return p.b2;
  if (name == "b3") return p.b3;
  if (name == "b4") return p.b4;
  if (name == "b5") return p.b5;
  if (name == "b6") return p.b6;
  if (name == "b7") return p.b7;
  if (name == "b8") return p.b8;
  if (name == "b9") return p.b9;
  if (name == "b10") return p.b10;
  if (name == "c1") return p.c1;
  if (name == "c2") return p.c2;
  if (name == "m1") return p.m1;
  if (name == "m2") return p.m2;
  if (name == "m3") return p.m3;
  throw std::invalid_argument("unknown parameter name '" + name + "'");
}

}  // namespace tsselect
