#ifndef SOPMON_RNG_HPP
#define SOPMON_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace sopmon {

// SplitMix64, used to expand seeds into engine state.
struct SplitMix64 {
  std::uint64_t s;
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

namespace detail {

inline std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

// Ziggurat layer tables for the standard normal (128 layers).
struct ZigguratNormal {
  std::uint32_t kn[128];
  double wn[128];
  double fn[128];
  ZigguratNormal() {
    const double m1 = 2147483648.0;
    double dn = 3.442619855899, tn = dn;
    const double vn = 9.91256303526217e-3;
    double q = vn / std::exp(-0.5 * dn * dn);
    kn[0] = static_cast<std::uint32_t>((dn / q) * m1);
    kn[1] = 0;
    wn[0] = q / m1;
    wn[127] = dn / m1;
    fn[0] = 1.0;
    fn[127] = std::exp(-0.5 * dn * dn);
    for (int i = 126; i >= 1; --i) {
      dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
      kn[i + 1] = static_cast<std::uint32_t>((dn / tn) * m1);
      tn = dn;
      fn[i] = std::exp(-0.5 * dn * dn);
      wn[i] = dn / m1;
    }
  }
};

inline const ZigguratNormal kZigNormal{};

}  // namespace detail

// xoshiro256++ engine. Parallel replications use one engine per stream id,
// seeded so that the estimate is independent of how work is scheduled.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    SplitMix64 sm{seed};
    for (auto& w : s_) w = sm.next();
  }

  // Independent stream `stream` derived from a master seed.
  Rng(std::uint64_t master_seed, std::uint64_t stream)
      : Rng(master_seed ^ (0x9E3779B97F4A7C15ULL * (stream + 0x632BE59BD9B4E019ULL))) {}

  std::uint64_t next_u64() {
    std::uint64_t result = detail::rotl64(s_[0] + s_[3], 23) + s_[0];
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = detail::rotl64(s_[3], 45);
    return result;
  }

  std::uint32_t next_u32() { return static_cast<std::uint32_t>(next_u64() >> 32); }

  // Uniform on [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on the open interval (0,1); exact zeros are redrawn.
  double uniform01_open() {
    double u;
    do {
      u = uniform01();
    } while (u == 0.0);
    return u;
  }

  // Unbiased integer in [0,n), Lemire's multiply-shift rejection.
  std::uint64_t below(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t t = (0 - n) % n;
      while (lo < t) {
        m = static_cast<unsigned __int128>(next_u64()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Standard normal via 128-layer ziggurat.
  double normal() {
    const auto& z = detail::kZigNormal;
    const double r = 3.442619855899;
    for (;;) {
      auto hz = static_cast<std::int32_t>(next_u32());
      std::uint32_t iz = static_cast<std::uint32_t>(hz) & 127u;
      std::uint32_t ahz =
          hz >= 0 ? static_cast<std::uint32_t>(hz)
                  : static_cast<std::uint32_t>(-static_cast<std::int64_t>(hz));
      if (ahz < z.kn[iz]) return hz * z.wn[iz];
      if (iz == 0) {
        // tail beyond r, Marsaglia's exponential wrap
        double x, y;
        do {
          x = -std::log(uniform01_open()) / r;
          y = -std::log(uniform01_open());
        } while (y + y < x * x);
        return hz > 0 ? r + x : -(r + x);
      }
      double x = hz * z.wn[iz];
      if (z.fn[iz] + uniform01() * (z.fn[iz - 1] - z.fn[iz]) < std::exp(-0.5 * x * x))
        return x;
    }
  }

  // Exponential with mean 1.
  double exponential() { return -std::log(uniform01_open()); }

 private:
  std::array<std::uint64_t, 4> s_;
};

// Scalar samplers built on the engine.
long long sample_poisson(Rng& rng, double mean);
long long sample_binomial(Rng& rng, long long n, double p);
double sample_gamma(Rng& rng, double shape);      // scale 1
double sample_student_t(Rng& rng, double nu);

}  // namespace sopmon

#endif
