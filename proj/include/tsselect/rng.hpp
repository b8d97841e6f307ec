#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace tsselect {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// A block is a pure function of (counter, key), so any draw of any substream
/// can be produced without touching the others.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept {
    constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += w0;
        key[1] += w1;
      }
      const std::uint64_t p0 = std::uint64_t{m0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{m1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }
};

/// Inverse standard normal CDF, Wichura's AS 241 (PPND16), ~1e-16 relative accuracy.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw std::domain_error("normal_quantile: p outside [0, 1]");
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

/// Identifies one independent substream: (master seed, cell index, replication index).
struct StreamKey {
  std::uint64_t master = 0;
  std::uint32_t cell = 0;
  std::uint32_t replication = 0;

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// Draws of one substream, addressed by a 64-bit index.
///
/// Block i of the substream is Philox(counter = (lo(i), hi(i), cell, replication),
/// key = (lo(master), hi(master))). Each block yields two uniforms on (0, 1) built
/// from 53 bits each, u = (k + 0.5) / 2^53, and normals are normal_quantile(u).
/// This mapping is part of the reproducibility contract.
class Substream {
public:
  explicit Substream(StreamKey key) noexcept : key_(key) {}

  std::array<double, 2> uniform_pair(std::uint64_t index) const noexcept {
    const auto out = Philox4x32::block(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), key_.cell,
         key_.replication},
        {static_cast<std::uint32_t>(key_.master), static_cast<std::uint32_t>(key_.master >> 32)});
    return {to_unit((std::uint64_t{out[0]} << 32) | out[1]),
            to_unit((std::uint64_t{out[2]} << 32) | out[3])};
  }

  std::array<double, 2> normal_pair(std::uint64_t index) const {
    const auto u = uniform_pair(index);
    return {normal_quantile(u[0]), normal_quantile(u[1])};
  }

  const StreamKey& key() const noexcept { return key_; }

private:
  static double to_unit(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }
  StreamKey key_;
};

/// Sequential normal draws from one substream; for simulations that need an
/// open-ended supply of shocks (critical-value recalibration, tests).
class NormalSequence {
public:
  explicit NormalSequence(StreamKey key) noexcept : stream_(key) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const auto pair = stream_.normal_pair(next_++);
    spare_ = pair[1];
    have_spare_ = true;
    return pair[0];
  }

private:
  Substream stream_;
  std::uint64_t next_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace tsselect
