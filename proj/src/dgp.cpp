#include "sopmon/dgp.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "sopmon/errors.hpp"

namespace sopmon {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw ParamError(msg);
}

void require_finite(double v, const char* msg) {
  if (!std::isfinite(v)) throw ParamError(msg);
}

inline double pw(double v, int p) { return p == 1 ? v : v * v; }
inline long long pwc(long long v, int p) { return p == 1 ? v : v * v; }

void check_powers(const int* p, std::size_t k) {
  for (std::size_t i = 0; i < k; ++i)
    require(p[i] == 1 || p[i] == 2, "moving-average powers must be 1 or 2");
}

}  // namespace

void validate_marginal(const MarginalSpec& spec) {
  std::visit(
      [](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, marg::Normal>) {
          require_finite(m.mu, "normal mean must be finite");
          require(std::isfinite(m.sigma) && m.sigma > 0, "normal sigma must be positive");
        } else if constexpr (std::is_same_v<M, marg::StudentT>) {
          require(std::isfinite(m.nu) && m.nu > 0, "t degrees of freedom must be positive");
        } else if constexpr (std::is_same_v<M, marg::Exponential>) {
          require(std::isfinite(m.rate) && m.rate > 0, "exponential rate must be positive");
        } else if constexpr (std::is_same_v<M, marg::Uniform>) {
          require_finite(m.a, "uniform bounds must be finite");
          require_finite(m.b, "uniform bounds must be finite");
          require(m.a < m.b, "uniform needs a < b");
        } else if constexpr (std::is_same_v<M, marg::Poisson>) {
          require(std::isfinite(m.mean) && m.mean >= 0, "Poisson mean must be nonnegative");
        } else if constexpr (std::is_same_v<M, marg::Zip>) {
          require(std::isfinite(m.omega) && m.omega >= 0 && m.omega < 1,
                  "zero-inflation weight must lie in [0,1)");
          require(std::isfinite(m.mean) && m.mean >= 0, "ZIP mean must be nonnegative");
        } else if constexpr (std::is_same_v<M, marg::Bernoulli>) {
          require(std::isfinite(m.p) && m.p >= 0 && m.p <= 1,
                  "Bernoulli probability must lie in [0,1]");
        } else if constexpr (std::is_same_v<M, marg::Laplace>) {
          require_finite(m.mu, "Laplace location must be finite");
          require(std::isfinite(m.b) && m.b > 0, "Laplace scale must be positive");
        } else if constexpr (std::is_same_v<M, marg::SkewNormal>) {
          require_finite(m.xi, "skew-normal location must be finite");
          require(std::isfinite(m.omega) && m.omega > 0, "skew-normal scale must be positive");
          require_finite(m.alpha, "skew-normal slant must be finite");
        } else if constexpr (std::is_same_v<M, marg::Weibull>) {
          require(std::isfinite(m.shape) && m.shape > 0, "Weibull shape must be positive");
          require(std::isfinite(m.scale) && m.scale > 0, "Weibull scale must be positive");
        } else if constexpr (std::is_same_v<M, marg::NormalMixture>) {
          require(!m.weights.empty(), "mixture needs at least one component");
          require(m.weights.size() == m.means.size() && m.weights.size() == m.sigmas.size(),
                  "mixture component lists must have equal length");
          double sum = 0;
          for (std::size_t i = 0; i < m.weights.size(); ++i) {
            require(std::isfinite(m.weights[i]) && m.weights[i] >= 0,
                    "mixture weights must be nonnegative");
            require_finite(m.means[i], "mixture means must be finite");
            require(std::isfinite(m.sigmas[i]) && m.sigmas[i] > 0,
                    "mixture sigmas must be positive");
            sum += m.weights[i];
          }
          require(std::abs(sum - 1.0) <= 1e-9, "mixture weights must sum to 1");
        } else if constexpr (std::is_same_v<M, marg::ScaledPoissonProduct>) {
          require(std::isfinite(m.p) && m.p >= 0 && m.p <= 1,
                  "Bernoulli factor probability must lie in [0,1]");
          require(std::isfinite(m.mean) && m.mean >= 0,
                  "Poisson factor mean must be nonnegative");
        }
      },
      spec);
}

bool is_integer_marginal(const MarginalSpec& spec) {
  return std::holds_alternative<marg::Poisson>(spec) || std::holds_alternative<marg::Zip>(spec) ||
         std::holds_alternative<marg::Bernoulli>(spec) ||
         std::holds_alternative<marg::ScaledPoissonProduct>(spec);
}

long long sample_count(const MarginalSpec& spec, Rng& rng) {
  if (const auto* p = std::get_if<marg::Poisson>(&spec)) return sample_poisson(rng, p->mean);
  if (const auto* z = std::get_if<marg::Zip>(&spec)) {
    if (rng.uniform01() < z->omega) return 0;
    return sample_poisson(rng, z->mean / (1.0 - z->omega));
  }
  if (const auto* b = std::get_if<marg::Bernoulli>(&spec))
    return rng.uniform01() < b->p ? 1 : 0;
  if (const auto* s = std::get_if<marg::ScaledPoissonProduct>(&spec)) {
    long long bern = rng.uniform01() < s->p ? 1 : 0;
    long long poi = sample_poisson(rng, s->mean);
    return bern * poi;
  }
  throw ParamError("count samples require an integer-valued marginal");
}

double sample_real(const MarginalSpec& spec, Rng& rng) {
  if (is_integer_marginal(spec)) return static_cast<double>(sample_count(spec, rng));
  return std::visit(
      [&rng](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, marg::Normal>) {
          return m.mu + m.sigma * rng.normal();
        } else if constexpr (std::is_same_v<M, marg::StudentT>) {
          return sample_student_t(rng, m.nu);
        } else if constexpr (std::is_same_v<M, marg::Exponential>) {
          return rng.exponential() / m.rate;
        } else if constexpr (std::is_same_v<M, marg::Uniform>) {
          return m.a + (m.b - m.a) * rng.uniform01();
        } else if constexpr (std::is_same_v<M, marg::Laplace>) {
          double u = rng.uniform01_open();
          return u < 0.5 ? m.mu + m.b * std::log(2.0 * u) : m.mu - m.b * std::log(2.0 * (1.0 - u));
        } else if constexpr (std::is_same_v<M, marg::SkewNormal>) {
          double delta = m.alpha / std::sqrt(1.0 + m.alpha * m.alpha);
          double z1 = rng.normal(), z2 = rng.normal();
          double x = delta * std::abs(z1) + std::sqrt(1.0 - delta * delta) * z2;
          return m.xi + m.omega * x;
        } else if constexpr (std::is_same_v<M, marg::Weibull>) {
          return m.scale * std::pow(rng.exponential(), 1.0 / m.shape);
        } else if constexpr (std::is_same_v<M, marg::NormalMixture>) {
          double u = rng.uniform01();
          std::size_t k = 0;
          double acc = 0;
          for (; k + 1 < m.weights.size(); ++k) {
            acc += m.weights[k];
            if (u < acc) break;
          }
          return m.means[k] + m.sigmas[k] * rng.normal();
        } else {
          throw ParamError("marginal cannot be sampled as a real value");
        }
      },
      spec);
}

long long binom_thin(long long x, double alpha, Rng& rng) {
  if (x < 0) throw ParamError("thinning requires a nonnegative count");
  require(std::isfinite(alpha) && alpha >= 0 && alpha <= 1,
          "thinning probability must lie in [0,1]");
  return sample_binomial(rng, x, alpha);
}

namespace {

void validate_model(const DgpModel& model) {
  std::visit(
      [](const auto& d) {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, dgp::Iid>) {
          validate_marginal(d.marginal);
        } else if constexpr (std::is_same_v<D, dgp::Sar>) {
          require_finite(d.a1, "autoregressive coefficients must be finite");
          require_finite(d.a2, "autoregressive coefficients must be finite");
          require_finite(d.a3, "autoregressive coefficients must be finite");
          if (std::abs(d.a1) + std::abs(d.a2) + std::abs(d.a3) >= 1.0)
            throw StationarityError("autoregressive coefficients must satisfy sum(|a|) < 1");
          require(d.lag >= 1, "stencil lag must be at least 1");
          require(d.burn >= 0, "burn-in must be nonnegative");
          validate_marginal(d.innovation);
        } else if constexpr (std::is_same_v<D, dgp::Sinar>) {
          for (double a : {d.a1, d.a2, d.a3})
            require(std::isfinite(a) && a >= 0 && a < 1,
                    "thinning coefficients must lie in [0,1)");
          if (d.a1 + d.a2 + d.a3 >= 1.0)
            throw StationarityError("thinning coefficients must satisfy sum(a) < 1");
          require(d.lag >= 1, "stencil lag must be at least 1");
          require(d.burn >= 0, "burn-in must be nonnegative");
          validate_marginal(d.innovation);
          require(is_integer_marginal(d.innovation),
                  "count autoregression needs an integer-valued innovation");
        } else if constexpr (std::is_same_v<D, dgp::Sqma>) {
          require_finite(d.b1, "moving-average coefficients must be finite");
          require_finite(d.b2, "moving-average coefficients must be finite");
          require_finite(d.b3, "moving-average coefficients must be finite");
          check_powers(d.powers.data(), 3);
          require(d.lag >= 1, "stencil lag must be at least 1");
          validate_marginal(d.innovation);
        } else if constexpr (std::is_same_v<D, dgp::Sqinma>) {
          for (double b : {d.b1, d.b2, d.b3})
            require(std::isfinite(b) && b >= 0 && b <= 1,
                    "thinning coefficients must lie in [0,1]");
          check_powers(d.powers.data(), 3);
          require(d.lag >= 1, "stencil lag must be at least 1");
          validate_marginal(d.innovation);
          require(is_integer_marginal(d.innovation),
                  "count moving average needs an integer-valued innovation");
        } else if constexpr (std::is_same_v<D, dgp::BilateralSar>) {
          for (double a : {d.a1, d.a2, d.a3, d.a4})
            require_finite(a, "autoregressive coefficients must be finite");
          if (std::abs(d.a1) + std::abs(d.a2) + std::abs(d.a3) + std::abs(d.a4) >= 1.0)
            throw StationarityError("autoregressive coefficients must satisfy sum(|a|) < 1");
          require(d.buffer >= 0, "boundary buffer must be nonnegative");
          require(std::isfinite(d.tol) && d.tol > 0, "solver tolerance must be positive");
          validate_marginal(d.innovation);
        } else if constexpr (std::is_same_v<D, dgp::BilateralSqma>) {
          for (double b : {d.b1, d.b2, d.b3, d.b4})
            require_finite(b, "moving-average coefficients must be finite");
          check_powers(d.powers.data(), 4);
          validate_marginal(d.innovation);
        }
      },
      model);
}

void validate_contamination(const ContaminationSpec& c, bool integer_frame) {
  require(std::isfinite(c.fraction) && c.fraction >= 0 && c.fraction <= 1,
          "contaminated fraction must lie in [0,1]");
  if (const auto* f = std::get_if<FixedAdd>(&c.model)) {
    require_finite(f->c, "outlier shift must be finite");
    if (integer_frame && (f->c < 0 || f->c != std::floor(f->c)))
      throw ModelError("fixed outlier shift on a count frame must be a nonnegative integer");
  } else if (const auto* s = std::get_if<SymmetricAdd>(&c.model)) {
    require_finite(s->c, "outlier shift must be finite");
    if (integer_frame)
      throw ModelError("signed outlier shifts would produce negative counts");
  } else if (const auto* p = std::get_if<PoissonAdd>(&c.model)) {
    require(std::isfinite(p->nu) && p->nu > 0, "outlier Poisson mean must be positive");
    if (!integer_frame) throw ModelError("Poisson outliers require a count-valued frame");
  }
}

bool model_integer_output(const DgpModel& model) {
  if (const auto* iid = std::get_if<dgp::Iid>(&model)) return is_integer_marginal(iid->marginal);
  return std::holds_alternative<dgp::Sinar>(model) || std::holds_alternative<dgp::Sqinma>(model);
}

}  // namespace

RealGrid solve_bilateral_sar(const RealGrid& eps, std::array<double, 4> a, double tol) {
  require(std::isfinite(tol) && tol > 0, "solver tolerance must be positive");
  const int rows = static_cast<int>(eps.rows()), cols = static_cast<int>(eps.cols());
  RealGrid cur(rows, cols, 0.0), nxt(rows, cols, 0.0);
  const double a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3];
  constexpr int kMaxIter = 10000;
  for (int it = 0; it < kMaxIter; ++it) {
    double diff = 0.0, scale = 1.0;
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        double v = eps(i, j);
        if (i > 0) v += a1 * cur(i - 1, j);
        if (j > 0) v += a2 * cur(i, j - 1);
        if (j + 1 < cols) v += a3 * cur(i, j + 1);
        if (i + 1 < rows) v += a4 * cur(i + 1, j);
        nxt(i, j) = v;
        diff = std::max(diff, std::abs(v - cur(i, j)));
        scale = std::max(scale, std::abs(v));
      }
    }
    cur.swap(nxt);
    if (diff <= tol * scale) return cur;
  }
  throw ConvergenceError("simultaneous autoregression solve did not reach tolerance");
}

RealGrid build_bilateral_sqma(const RealGrid& eps, std::array<double, 4> b,
                              std::array<int, 4> powers) {
  check_powers(powers.data(), 4);
  if (eps.rows() < 3 || eps.cols() < 3)
    throw DimensionError("innovation field must exceed the output by one cell on each side");
  const int rows = static_cast<int>(eps.rows()) - 2, cols = static_cast<int>(eps.cols()) - 2;
  RealGrid out(rows, cols, 0.0);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      out(i, j) = b[0] * pw(eps(i, j), powers[0]) + b[1] * pw(eps(i + 2, j), powers[1]) +
                  b[2] * pw(eps(i + 2, j + 2), powers[2]) + b[3] * pw(eps(i, j + 2), powers[3]) +
                  eps(i + 1, j + 1);
    }
  }
  return out;
}

FrameGenerator::FrameGenerator(const DgpSpec& spec) : spec_(spec) {
  require(spec_.m >= 1 && spec_.n >= 1, "frame shape parameters m and n must be at least 1");
  validate_model(spec_.model);
  integer_ = model_integer_output(spec_.model);
  if (spec_.contamination) validate_contamination(*spec_.contamination, integer_);
}

void FrameGenerator::apply_contamination(Rng& rng, RealGrid& g) {
  const auto& c = *spec_.contamination;
  const std::uint64_t total = g.size();
  const auto k = static_cast<std::uint64_t>(std::llround(c.fraction * static_cast<double>(total)));
  if (k == 0) return;
  pick_.resize(total);
  std::iota(pick_.begin(), pick_.end(), 0u);
  for (std::uint64_t i = 0; i < k; ++i)
    std::swap(pick_[i], pick_[i + rng.below(total - i)]);
  double* v = g.data();
  if (const auto* f = std::get_if<FixedAdd>(&c.model)) {
    for (std::uint64_t i = 0; i < k; ++i) v[pick_[i]] += f->c;
  } else if (const auto* s = std::get_if<SymmetricAdd>(&c.model)) {
    for (std::uint64_t i = 0; i < k; ++i) v[pick_[i]] += rng.below(2) ? s->c : -s->c;
  } else {
    throw ModelError("Poisson outliers require a count-valued frame");
  }
}

void FrameGenerator::apply_contamination(Rng& rng, CountGrid& g) {
  const auto& c = *spec_.contamination;
  const std::uint64_t total = g.size();
  const auto k = static_cast<std::uint64_t>(std::llround(c.fraction * static_cast<double>(total)));
  if (k == 0) return;
  pick_.resize(total);
  std::iota(pick_.begin(), pick_.end(), 0u);
  for (std::uint64_t i = 0; i < k; ++i)
    std::swap(pick_[i], pick_[i + rng.below(total - i)]);
  long long* v = g.data();
  if (const auto* f = std::get_if<FixedAdd>(&c.model)) {
    const auto add = static_cast<long long>(f->c);
    for (std::uint64_t i = 0; i < k; ++i) v[pick_[i]] += add;
  } else if (const auto* p = std::get_if<PoissonAdd>(&c.model)) {
    for (std::uint64_t i = 0; i < k; ++i) v[pick_[i]] += sample_poisson(rng, p->nu);
  } else {
    throw ModelError("signed outlier shifts would produce negative counts");
  }
}

void FrameGenerator::generate(Rng& rng, RealGrid& out_real, CountGrid& out_count) {
  const int m = spec_.m, n = spec_.n;
  std::visit(
      [&](const auto& d) {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, dgp::Iid>) {
          if (integer_) {
            out_count.resize(m + 1, n + 1);
            for (long long& v : out_count) v = sample_count(d.marginal, rng);
          } else {
            out_real.resize(m + 1, n + 1);
            for (double& v : out_real) v = sample_real(d.marginal, rng);
          }
        } else if constexpr (std::is_same_v<D, dgp::Sar>) {
          const int L = d.lag, pad = d.burn * L;
          const int rows = m + 1 + pad, cols = n + 1 + pad;
          ext_a_.resize(rows, cols);
          for (int i = 0; i < rows; ++i) {
            double* row = ext_a_.data() + static_cast<std::size_t>(i) * cols;
            const double* up = row - static_cast<std::ptrdiff_t>(L) * cols;
            for (int j = 0; j < cols; ++j) {
              double v = sample_real(d.innovation, rng);
              if (i >= L) v += d.a1 * up[j];
              if (j >= L) v += d.a2 * row[j - L];
              if (i >= L && j >= L) v += d.a3 * up[j - L];
              row[j] = v;
            }
          }
          out_real.resize(m + 1, n + 1);
          for (int i = 0; i <= m; ++i)
            for (int j = 0; j <= n; ++j) out_real(i, j) = ext_a_(i + pad, j + pad);
        } else if constexpr (std::is_same_v<D, dgp::Sinar>) {
          const int L = d.lag, pad = d.burn * L;
          const int rows = m + 1 + pad, cols = n + 1 + pad;
          ext_c_.resize(rows, cols);
          for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
              long long v = sample_count(d.innovation, rng);
              if (i >= L) v += sample_binomial(rng, ext_c_(i - L, j), d.a1);
              if (j >= L) v += sample_binomial(rng, ext_c_(i, j - L), d.a2);
              if (i >= L && j >= L) v += sample_binomial(rng, ext_c_(i - L, j - L), d.a3);
              ext_c_(i, j) = v;
            }
          }
          out_count.resize(m + 1, n + 1);
          for (int i = 0; i <= m; ++i)
            for (int j = 0; j <= n; ++j) out_count(i, j) = ext_c_(i + pad, j + pad);
        } else if constexpr (std::is_same_v<D, dgp::Sqma>) {
          const int L = d.lag;
          ext_a_.resize(m + 1 + L, n + 1 + L);
          for (double& v : ext_a_) v = sample_real(d.innovation, rng);
          out_real.resize(m + 1, n + 1);
          for (int i = 0; i <= m; ++i) {
            for (int j = 0; j <= n; ++j) {
              out_real(i, j) = d.b1 * pw(ext_a_(i, j + L), d.powers[0]) +
                               d.b2 * pw(ext_a_(i + L, j), d.powers[1]) +
                               d.b3 * pw(ext_a_(i, j), d.powers[2]) + ext_a_(i + L, j + L);
            }
          }
        } else if constexpr (std::is_same_v<D, dgp::Sqinma>) {
          const int L = d.lag;
          ext_c_.resize(m + 1 + L, n + 1 + L);
          for (long long& v : ext_c_) v = sample_count(d.innovation, rng);
          out_count.resize(m + 1, n + 1);
          for (int i = 0; i <= m; ++i) {
            for (int j = 0; j <= n; ++j) {
              long long v = sample_binomial(rng, pwc(ext_c_(i, j + L), d.powers[0]), d.b1);
              v += sample_binomial(rng, pwc(ext_c_(i + L, j), d.powers[1]), d.b2);
              v += sample_binomial(rng, pwc(ext_c_(i, j), d.powers[2]), d.b3);
              out_count(i, j) = v + ext_c_(i + L, j + L);
            }
          }
        } else if constexpr (std::is_same_v<D, dgp::BilateralSar>) {
          const int rows = m + 1 + 2 * d.buffer, cols = n + 1 + 2 * d.buffer;
          ext_a_.resize(rows, cols);
          for (double& v : ext_a_) v = sample_real(d.innovation, rng);
          ext_b_ = solve_bilateral_sar(ext_a_, {d.a1, d.a2, d.a3, d.a4}, d.tol);
          out_real.resize(m + 1, n + 1);
          for (int i = 0; i <= m; ++i)
            for (int j = 0; j <= n; ++j) out_real(i, j) = ext_b_(i + d.buffer, j + d.buffer);
        } else if constexpr (std::is_same_v<D, dgp::BilateralSqma>) {
          ext_a_.resize(m + 3, n + 3);
          for (double& v : ext_a_) v = sample_real(d.innovation, rng);
          out_real.resize(m + 1, n + 1);
          for (int i = 0; i <= m; ++i) {
            for (int j = 0; j <= n; ++j) {
              out_real(i, j) = d.b1 * pw(ext_a_(i, j), d.powers[0]) +
                               d.b2 * pw(ext_a_(i + 2, j), d.powers[1]) +
                               d.b3 * pw(ext_a_(i + 2, j + 2), d.powers[2]) +
                               d.b4 * pw(ext_a_(i, j + 2), d.powers[3]) + ext_a_(i + 1, j + 1);
            }
          }
        }
      },
      spec_.model);
  if (spec_.contamination) {
    if (integer_)
      apply_contamination(rng, out_count);
    else
      apply_contamination(rng, out_real);
  }
}

Frame generate_frame(const DgpSpec& spec, Rng& rng) {
  FrameGenerator gen(spec);
  RealGrid r;
  CountGrid c;
  gen.generate(rng, r, c);
  if (gen.integer_output()) return Frame{std::move(c)};
  return Frame{std::move(r)};
}

Frame gen_iid(const MarginalSpec& marginal, int m, int n, Rng& rng) {
  return generate_frame(DgpSpec{dgp::Iid{marginal}, std::nullopt, m, n}, rng);
}

RealGrid gen_sar(std::array<double, 3> alpha, int m, int n, int burn, Rng& rng, int lag) {
  DgpSpec spec{dgp::Sar{alpha[0], alpha[1], alpha[2], lag, burn}, std::nullopt, m, n};
  return std::get<RealGrid>(generate_frame(spec, rng));
}

CountGrid gen_sinar(std::array<double, 3> alpha, const MarginalSpec& innovation, int m, int n,
                    int burn, Rng& rng, int lag) {
  DgpSpec spec{dgp::Sinar{alpha[0], alpha[1], alpha[2], lag, burn, innovation}, std::nullopt, m,
               n};
  return std::get<CountGrid>(generate_frame(spec, rng));
}

RealGrid gen_sqma(std::array<double, 3> beta, std::array<int, 3> powers, int m, int n, Rng& rng,
                  int lag) {
  DgpSpec spec{dgp::Sqma{beta[0], beta[1], beta[2], powers, lag}, std::nullopt, m, n};
  return std::get<RealGrid>(generate_frame(spec, rng));
}

CountGrid gen_sqinma(std::array<double, 3> beta, std::array<int, 3> powers, int m, int n,
                     Rng& rng, int lag) {
  DgpSpec spec{dgp::Sqinma{beta[0], beta[1], beta[2], powers, lag}, std::nullopt, m, n};
  return std::get<CountGrid>(generate_frame(spec, rng));
}

RealGrid gen_bilateral_sar(std::array<double, 4> a, int m, int n, int buffer, double tol,
                           Rng& rng) {
  DgpSpec spec{dgp::BilateralSar{a[0], a[1], a[2], a[3], buffer, tol}, std::nullopt, m, n};
  return std::get<RealGrid>(generate_frame(spec, rng));
}

RealGrid gen_bilateral_sqma(std::array<double, 4> b, std::array<int, 4> powers, int m, int n,
                            Rng& rng) {
  DgpSpec spec{dgp::BilateralSqma{b[0], b[1], b[2], b[3], powers}, std::nullopt, m, n};
  return std::get<RealGrid>(generate_frame(spec, rng));
}

RealGrid contaminate(const RealGrid& g, const ContaminationSpec& spec, Rng& rng) {
  validate_contamination(spec, false);
  DgpSpec ds{dgp::Iid{}, spec, static_cast<int>(g.m()), static_cast<int>(g.n())};
  FrameGenerator gen(ds);
  RealGrid out = g;
  gen.apply_contamination(rng, out);
  return out;
}

CountGrid contaminate(const CountGrid& g, const ContaminationSpec& spec, Rng& rng) {
  validate_contamination(spec, true);
  DgpSpec ds{dgp::Iid{marg::Poisson{1.0}}, spec,
             static_cast<int>(g.m()), static_cast<int>(g.n())};
  FrameGenerator gen(ds);
  CountGrid out = g;
  gen.apply_contamination(rng, out);
  return out;
}

}  // namespace sopmon
