#ifndef SOPMON_DGP_HPP
#define SOPMON_DGP_HPP

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "sopmon/grid.hpp"
#include "sopmon/rng.hpp"

namespace sopmon {

namespace marg {

struct Normal {
  double mu = 0.0, sigma = 1.0;
};
struct StudentT {
  double nu = 1.0;
};
struct Exponential {
  double rate = 1.0;
};
struct Uniform {
  double a = 0.0, b = 1.0;
};
struct Poisson {
  double mean = 1.0;
};
// Zero-inflated Poisson parameterised by the inflation weight and the overall
// mean: value 0 with probability omega, else Poisson(mean / (1 - omega)).
struct Zip {
  double omega = 0.0, mean = 1.0;
};
struct Bernoulli {
  double p = 0.5;
};
struct Laplace {
  double mu = 0.0, b = 1.0;
};
struct SkewNormal {
  double xi = 0.0, omega = 1.0, alpha = 0.0;
};
struct Weibull {
  double shape = 1.0, scale = 1.0;
};
struct NormalMixture {
  std::vector<double> weights;
  std::vector<double> means;
  std::vector<double> sigmas;
};
// Product of an independent Bernoulli(p) and Poisson(mean) draw per cell.
struct ScaledPoissonProduct {
  double p = 0.2, mean = 5.0;
};

}  // namespace marg

using MarginalSpec =
    std::variant<marg::Normal, marg::StudentT, marg::Exponential, marg::Uniform, marg::Poisson,
                 marg::Zip, marg::Bernoulli, marg::Laplace, marg::SkewNormal, marg::Weibull,
                 marg::NormalMixture, marg::ScaledPoissonProduct>;

void validate_marginal(const MarginalSpec& spec);
bool is_integer_marginal(const MarginalSpec& spec);
double sample_real(const MarginalSpec& spec, Rng& rng);
long long sample_count(const MarginalSpec& spec, Rng& rng);

namespace dgp {

struct Iid {
  MarginalSpec marginal = marg::Normal{};
};

// Unilateral autoregression over row-major sweeps; `lag` shifts the whole
// stencil so the same coefficients act at distance lag instead of 1. `burn`
// counts recursion steps: the working grid is extended by burn*lag rows and
// columns (zero-initialised) which are cropped away.
struct Sar {
  double a1 = 0.0, a2 = 0.0, a3 = 0.0;
  int lag = 1;
  int burn = 50;
  MarginalSpec innovation = marg::Normal{};
};

// Integer counterpart: coefficients act through binomial thinning.
struct Sinar {
  double a1 = 0.0, a2 = 0.0, a3 = 0.0;
  int lag = 1;
  int burn = 50;
  MarginalSpec innovation = marg::Poisson{5.0};
};

// Moving average whose three neighbour terms enter linearly or squared.
struct Sqma {
  double b1 = 0.0, b2 = 0.0, b3 = 0.0;
  std::array<int, 3> powers{1, 1, 1};
  int lag = 1;
  MarginalSpec innovation = marg::Normal{};
};

struct Sqinma {
  double b1 = 0.0, b2 = 0.0, b3 = 0.0;
  std::array<int, 3> powers{1, 1, 1};
  int lag = 1;
  MarginalSpec innovation = marg::Poisson{5.0};
};

// Simultaneous autoregression on all four axis neighbours; the implicit
// linear system is solved by fixed-point iteration on a grid enlarged by
// `buffer` on each side with zero exterior.
struct BilateralSar {
  double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
  int buffer = 25;
  double tol = 1e-8;
  MarginalSpec innovation = marg::Normal{};
};

// Moving average over the four diagonal neighbours' innovations.
struct BilateralSqma {
  double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0;
  std::array<int, 4> powers{1, 1, 1, 1};
  MarginalSpec innovation = marg::Normal{};
};

}  // namespace dgp

using DgpModel = std::variant<dgp::Iid, dgp::Sar, dgp::Sinar, dgp::Sqma, dgp::Sqinma,
                              dgp::BilateralSar, dgp::BilateralSqma>;

struct FixedAdd {
  double c = 0.0;
};
struct SymmetricAdd {
  double c = 0.0;
};
struct PoissonAdd {
  double nu = 1.0;
};
using ContaminationModel = std::variant<FixedAdd, SymmetricAdd, PoissonAdd>;

// Additive outliers: round(fraction * cells) distinct cells drawn without
// replacement get the extra summand.
struct ContaminationSpec {
  double fraction = 0.0;
  ContaminationModel model = FixedAdd{};
};

struct DgpSpec {
  DgpModel model;
  std::optional<ContaminationSpec> contamination;
  int m = -1, n = -1;
};

using Frame = std::variant<RealGrid, CountGrid>;

// Reusable generator: validates the spec once and keeps the extended-grid
// workspaces alive across frames so the simulation loop does not allocate.
class FrameGenerator {
 public:
  explicit FrameGenerator(const DgpSpec& spec);

  bool integer_output() const { return integer_; }
  const DgpSpec& spec() const { return spec_; }

  // Fills out_real or out_count according to integer_output().
  void generate(Rng& rng, RealGrid& out_real, CountGrid& out_count);

  // In-place outlier pass on an already generated frame.
  void apply_contamination(Rng& rng, RealGrid& g);
  void apply_contamination(Rng& rng, CountGrid& g);

 private:
  DgpSpec spec_;
  bool integer_ = false;
  RealGrid ext_a_, ext_b_;
  CountGrid ext_c_;
  std::vector<std::uint32_t> pick_;
};

// One-shot convenience wrappers.
Frame generate_frame(const DgpSpec& spec, Rng& rng);
Frame gen_iid(const MarginalSpec& marginal, int m, int n, Rng& rng);
RealGrid gen_sar(std::array<double, 3> alpha, int m, int n, int burn, Rng& rng, int lag = 1);
CountGrid gen_sinar(std::array<double, 3> alpha, const MarginalSpec& innovation, int m, int n,
                    int burn, Rng& rng, int lag = 1);
RealGrid gen_sqma(std::array<double, 3> beta, std::array<int, 3> powers, int m, int n, Rng& rng,
                  int lag = 1);
CountGrid gen_sqinma(std::array<double, 3> beta, std::array<int, 3> powers, int m, int n,
                     Rng& rng, int lag = 1);
RealGrid gen_bilateral_sar(std::array<double, 4> a, int m, int n, int buffer, double tol,
                           Rng& rng);
RealGrid gen_bilateral_sqma(std::array<double, 4> b, std::array<int, 4> powers, int m, int n,
                            Rng& rng);

// Binomial thinning: conditional Binomial(x, alpha) draw.
long long binom_thin(long long x, double alpha, Rng& rng);

// Applies additive outliers to a copy of the frame.
RealGrid contaminate(const RealGrid& g, const ContaminationSpec& spec, Rng& rng);
CountGrid contaminate(const CountGrid& g, const ContaminationSpec& spec, Rng& rng);

// Exposed for oracle tests: solve Y = a1 Y_up + a2 Y_left + a3 Y_right +
// a4 Y_down + eps on the full grid of eps with zero exterior.
RealGrid solve_bilateral_sar(const RealGrid& eps, std::array<double, 4> a, double tol);

// Exposed for stencil tests: combine a given innovation field (two larger on
// each axis, offset one) into the diagonal-neighbour moving average.
RealGrid build_bilateral_sqma(const RealGrid& eps, std::array<double, 4> b,
                              std::array<int, 4> powers);

}  // namespace sopmon

#endif
