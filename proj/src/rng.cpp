#include "sopmon/rng.hpp"

#include "sopmon/errors.hpp"

namespace sopmon {

long long sample_poisson(Rng& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw ParamError("poisson mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  // Knuth's product method; exact for any mean, O(mean) uniforms.
  const double limit = std::exp(-mean);
  long long k = 0;
  double prod = rng.uniform01_open();
  while (prod > limit) {
    ++k;
    prod *= rng.uniform01_open();
  }
  return k;
}

long long sample_binomial(Rng& rng, long long n, double p) {
  if (n < 0) throw ParamError("binomial n must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw ParamError("binomial p must lie in [0,1]");
  long long k = 0;
  for (long long i = 0; i < n; ++i) k += rng.uniform01() < p;
  return k;
}

double sample_gamma(Rng& rng, double shape) {
  if (!(shape > 0.0)) throw ParamError("gamma shape must be > 0");
  if (shape < 1.0) {
    // boost a < 1 through the a+1 case
    double u = rng.uniform01_open();
    return sample_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = rng.uniform01_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_student_t(Rng& rng, double nu) {
  if (!(nu > 0.0)) throw ParamError("student t degrees of freedom must be > 0");
  double z = rng.normal();
  double chi2 = 2.0 * sample_gamma(rng, nu / 2.0);
  return z / std::sqrt(chi2 / nu);
}

}  // namespace sopmon
