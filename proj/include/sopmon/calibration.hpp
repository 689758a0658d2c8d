#ifndef SOPMON_CALIBRATION_HPP
#define SOPMON_CALIBRATION_HPP

#include <cstdint>
#include <vector>

#include "sopmon/charts.hpp"
#include "sopmon/dgp.hpp"
#include "sopmon/rng.hpp"

namespace sopmon {

// Frame-level knobs shared by run-length simulation entry points.
struct RunSettings {
  std::uint64_t cap = 100000;  // truncate a run after this many frames
  double jitter_scale = 0.0;   // >0: add scale*U(0,1) to count frames to break ties
};

struct RunResult {
  std::uint64_t length = 0;
  bool capped = false;
};

struct ArlEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t replications = 0;
  std::uint64_t cap_hits = 0;  // truncated runs; a nonzero value biases the mean low
};

struct CalibrationEval {
  double limit = 0.0;
  double arl = 0.0;
  std::uint64_t replications = 0;
};

struct CalibrationResult {
  double limit = 0.0;
  double achieved_arl = 0.0;
  std::vector<CalibrationEval> trace;  // every evaluation in the order performed
};

struct CalibrateOptions {
  double target_arl = 0.0;
  std::uint64_t replications = 10000;  // full-resolution replications per evaluation
  double rel_tol = 0.02;               // accept when |arl - target| <= rel_tol * target
  std::uint64_t master_seed = 0;
  std::uint64_t cap = 100000;
  double jitter_scale = 0.0;
  double init_limit = 0.05;  // starting point for the bracket search
  int workers = 0;           // 0: use all available threads
};

// Zero-state run length: frames stream from the generator until the first
// alarm; truncated at settings.cap.
RunResult run_length(const ChartConfig& chart, const DgpSpec& dgp, Rng& rng,
                     const RunSettings& settings = {});

// Monte-Carlo ARL over independent replications. Replication i consumes the
// derived stream Rng(master_seed, i), so the estimate is bit-identical for
// any worker count; run-length sums are accumulated in exact integer
// arithmetic to keep the reduction order irrelevant.
ArlEstimate estimate_arl(const ChartConfig& chart, const DgpSpec& dgp,
                         std::uint64_t replications, std::uint64_t master_seed,
                         const RunSettings& settings = {}, int workers = 0);

// Plain single-threaded reference used by the benchmark and equivalence tests.
ArlEstimate estimate_arl_serial(const ChartConfig& chart, const DgpSpec& dgp,
                                std::uint64_t replications, std::uint64_t master_seed,
                                const RunSettings& settings = {});

// Finds the alarm limit whose in-control ARL matches opt.target_arl by
// monotone bisection. All evaluations at one resolution reuse the same
// replication streams, which makes the estimated ARL exactly nondecreasing in
// the limit; coarse resolutions bracket and narrow, the full resolution
// decides. Throws BracketError when no bracket exists (degenerate chart) and
// NonConvergence when the evaluation budget runs out first.
CalibrationResult calibrate_limit(const ChartConfig& chart, const DgpSpec& dgp,
                                  const CalibrateOptions& opt);

// Run length of a scalar EWMA fed by i.i.d. resamples of a recorded
// statistic pool, centred at the pool mean.
ArlEstimate bootstrap_arl(const std::vector<double>& pool, double lambda, double limit,
                          std::uint64_t replications, std::uint64_t master_seed,
                          std::uint64_t cap = 100000, int workers = 0);

// Limit calibration against the resampling scheme above.
CalibrationResult bootstrap_calibrate(const std::vector<double>& pool, double lambda,
                                      const CalibrateOptions& opt);

}  // namespace sopmon

#endif
