#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace stackmfg {

/// Counter-based random streams: every variate is a pure function of
/// (seed, path, agent, step, slot). Streams are random-access and
/// reproducible independent of evaluation order or worker count.
namespace rng {

/// 64-bit avalanche finalizer (murmur3 style).
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

constexpr std::uint64_t combine(std::uint64_t seed, std::uint64_t path, std::uint64_t agent,
                                std::uint64_t step, std::uint64_t slot) {
  std::uint64_t k = mix64(seed + 0x9e3779b97f4a7c15ULL);
  k = mix64(k ^ (path * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL));
  k = mix64(k ^ (agent * 0xd6e8feb86659fd93ULL + 0xa0761d6478bd642fULL));
  k = mix64(k ^ (step * 0xe7037ed1a0b428dbULL + 0x8ebc6af09c88c6e3ULL));
  k = mix64(k ^ (slot * 0x589965cc75374cc3ULL + 0x1d8e4e27c47d124fULL));
  return k;
}

/// Uniform in the open interval (0, 1): top 53 bits plus half an ulp.
constexpr double to_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Inverse of the standard normal CDF. Acklam's rational approximation
/// refined by one Halley step against erfc, giving ~full double accuracy.
inline double inverse_normal_cdf(double p) {
  constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                          1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                          6.680131188771972e+01,  -1.328068155288572e+01};
  constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                          -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                          3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // Halley refinement
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

inline double uniform(std::uint64_t seed, std::uint64_t path, std::uint64_t agent,
                      std::uint64_t step, std::uint64_t slot) {
  return to_unit(combine(seed, path, agent, step, slot));
}

inline double normal(std::uint64_t seed, std::uint64_t path, std::uint64_t agent,
                     std::uint64_t step, std::uint64_t slot) {
  return inverse_normal_cdf(uniform(seed, path, agent, step, slot));
}

}  // namespace rng
}  // namespace stackmfg
