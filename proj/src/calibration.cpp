#include "sopmon/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "sopmon/errors.hpp"

#ifdef SOPMON_HAVE_OPENMP
#include <omp.h>
#endif

namespace sopmon {

namespace {

void check_run_settings(std::uint64_t cap, double jitter_scale, bool integer_frames) {
  if (cap < 1) throw ParamError("run-length cap must be at least 1");
  if (jitter_scale != 0.0) {
    if (!(std::isfinite(jitter_scale) && jitter_scale > 0.0))
      throw ScaleError("tie-breaking noise scale must be positive");
    if (!integer_frames)
      throw ParamError("tie-breaking noise applies only to count-valued generators");
  }
}

// One replication worker: owns the generator and frame scratch so the
// per-frame loop is allocation-free.
class DgpRunner {
 public:
  DgpRunner(const ChartConfig& chart, const DgpSpec& dgp, double jitter_scale)
      : chart_(chart), gen_(dgp), jitter_(jitter_scale) {
    check_run_settings(1, jitter_scale, gen_.integer_output());
  }

  std::uint64_t run(Rng& rng, double limit, std::uint64_t cap, bool& capped) {
    ChartConfig cfg = chart_;
    cfg.limit = limit;
    ChartState st(cfg);
    const bool ints = gen_.integer_output();
    for (std::uint64_t t = 1; t <= cap; ++t) {
      gen_.generate(rng, real_, count_);
      const RealGrid* frame = &real_;
      if (ints) {
        if (jitter_ > 0.0)
          jitter_into(count_, jitter_, rng, conv_);
        else
          to_real_into(count_, conv_);
        frame = &conv_;
      }
      if (st.update(*frame).alarm) {
        capped = false;
        return t;
      }
    }
    capped = true;
    return cap;
  }

 private:
  ChartConfig chart_;
  FrameGenerator gen_;
  double jitter_;
  RealGrid real_, conv_;
  CountGrid count_;
};

// Scalar EWMA on i.i.d. resamples of a recorded pool, centred at the pool mean.
class BootstrapRunner {
 public:
  BootstrapRunner(const std::vector<double>* pool, double lambda)
      : pool_(pool), lambda_(lambda) {
    center_ = std::accumulate(pool->begin(), pool->end(), 0.0) /
              static_cast<double>(pool->size());
  }

  double center() const { return center_; }

  std::uint64_t run(Rng& rng, double limit, std::uint64_t cap, bool& capped) {
    const double* v = pool_->data();
    const std::uint64_t p = pool_->size();
    double z = center_;
    for (std::uint64_t t = 1; t <= cap; ++t) {
      z = lambda_ * v[rng.below(p)] + (1.0 - lambda_) * z;
      if (std::abs(z - center_) > limit) {
        capped = false;
        return t;
      }
    }
    capped = true;
    return cap;
  }

 private:
  const std::vector<double>* pool_;
  double lambda_;
  double center_ = 0.0;
};

// Shared Monte-Carlo core. MakeRunner is invoked once per worker thread; the
// replication index alone determines the random stream, so results do not
// depend on the schedule or thread count.
template <class MakeRunner>
ArlEstimate arl_core(MakeRunner make, double limit, std::uint64_t replications,
                     std::uint64_t master_seed, std::uint64_t cap, int workers) {
  if (replications < 1) throw ParamError("need at least one replication");
  std::vector<std::uint64_t> rl(replications);
  std::vector<unsigned char> capped(replications, 0);
  const auto total = static_cast<long long>(replications);

#ifdef SOPMON_HAVE_OPENMP
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  if (threads > 1) {
#pragma omp parallel num_threads(threads)
    {
      auto runner = make();
#pragma omp for schedule(dynamic, 32)
      for (long long i = 0; i < total; ++i) {
        Rng rng(master_seed, static_cast<std::uint64_t>(i));
        bool c = false;
        rl[i] = runner.run(rng, limit, cap, c);
        capped[i] = c ? 1 : 0;
      }
    }
  } else
#else
  (void)workers;
#endif
  {
    auto runner = make();
    for (long long i = 0; i < total; ++i) {
      Rng rng(master_seed, static_cast<std::uint64_t>(i));
      bool c = false;
      rl[i] = runner.run(rng, limit, cap, c);
      capped[i] = c ? 1 : 0;
    }
  }

  // Exact integer accumulation: identical result for any evaluation order.
  unsigned long long sum = 0;
  unsigned __int128 sumsq = 0;
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < replications; ++i) {
    sum += rl[i];
    sumsq += static_cast<unsigned __int128>(rl[i]) * rl[i];
    hits += capped[i];
  }
  const double r = static_cast<double>(replications);
  const double mean = static_cast<double>(sum) / r;
  double se = 0.0;
  if (replications > 1) {
    const double meansq = static_cast<double>(sumsq) / r;
    double var = (meansq - mean * mean) * (r / (r - 1.0));
    if (var < 0) var = 0;
    se = std::sqrt(var / r);
  }
  return ArlEstimate{mean, se, replications, hits};
}

std::uint64_t clamp_u64(std::uint64_t v, std::uint64_t lo, std::uint64_t hi) {
  return std::min(std::max(v, lo), hi);
}

// Monotone-bisection calibration over an arbitrary ARL evaluator.
template <class Evaluate>
CalibrationResult calibrate_core(const CalibrateOptions& opt, Evaluate evaluate) {
  if (!(std::isfinite(opt.target_arl) && opt.target_arl >= 1.0))
    throw ParamError("target run length must be at least 1");
  if (!(std::isfinite(opt.rel_tol) && opt.rel_tol >= 0.0))
    throw ParamError("relative tolerance must be nonnegative");
  if (opt.replications < 2) throw ParamError("calibration needs at least two replications");
  if (static_cast<double>(opt.cap) <= opt.target_arl)
    throw ParamError("run-length cap must exceed the target run length");
  if (!(std::isfinite(opt.init_limit) && opt.init_limit > 0.0))
    throw ParamError("initial limit guess must be positive");

  const double target = opt.target_arl;
  const std::uint64_t full_r = opt.replications;

  // Coarse resolutions: fewer replications and a tighter cap, enough to place
  // and narrow the bracket cheaply. The final resolution decides.
  struct Stage {
    std::uint64_t reps;
    std::uint64_t cap;
    double stop_ratio;  // bisect until hi/lo falls below this (0: run to tolerance)
  };
  const auto coarse_cap = [&](double mult) {
    const auto c = static_cast<std::uint64_t>(std::ceil(mult * target)) + 50;
    return std::min(opt.cap, c);
  };
  std::vector<Stage> stages;
  stages.push_back({clamp_u64(full_r / 32, std::min<std::uint64_t>(full_r, 500), 4000),
                    coarse_cap(4.0), 1.25});
  stages.push_back({clamp_u64(full_r / 8, std::min<std::uint64_t>(full_r, 2000), 20000),
                    coarse_cap(8.0), 1.05});
  stages.push_back({full_r, opt.cap, 0.0});
  // Drop coarse stages that would not be cheaper than the one after them.
  for (std::size_t i = 0; i + 1 < stages.size();) {
    if (stages[i].reps >= stages[i + 1].reps)
      stages.erase(stages.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }

  CalibrationResult result;
  int final_evals = 0;
  constexpr int kFinalBudget = 40;
  constexpr int kBracketMoves = 80;

  std::map<double, double> memo;  // per-stage cache, cleared between stages
  std::size_t stage_idx = 0;
  bool bracketing = false;  // bracket moves are bounded separately, below
  const auto eval = [&](double l) {
    auto it = memo.find(l);
    if (it != memo.end()) return it->second;
    const Stage& s = stages[stage_idx];
    if (s.stop_ratio == 0.0 && !bracketing && ++final_evals > kFinalBudget) {
      std::string msg = "calibration budget exhausted; best limit " +
                        std::to_string(result.trace.back().limit);
      throw NonConvergence(msg);
    }
    const double a = evaluate(l, s.reps, s.cap);
    memo.emplace(l, a);
    result.trace.push_back({l, a, s.reps});
    return a;
  };

  double lo = opt.init_limit, hi = opt.init_limit;
  for (stage_idx = 0; stage_idx < stages.size(); ++stage_idx) {
    memo.clear();
    const Stage& s = stages[stage_idx];
    // Re-establish the bracket at this resolution.
    bracketing = true;
    int moves = 0;
    while (eval(lo) >= target) {
      hi = lo;
      lo *= 0.5;
      if (++moves > kBracketMoves)
        throw BracketError("no limit small enough to reach the target run length");
    }
    moves = 0;
    while (eval(hi) <= target) {
      lo = std::max(lo, hi);
      hi *= 2.0;
      if (++moves > kBracketMoves)
        throw BracketError("no limit large enough to reach the target run length");
    }
    bracketing = false;
    // Narrow geometrically. The full-resolution stage stops on tolerance.
    while (true) {
      if (s.stop_ratio > 0.0) {
        if (hi / lo <= s.stop_ratio) break;
      } else {
        double best_gap = std::numeric_limits<double>::infinity();
        double best_l = 0.0, best_a = 0.0;
        for (const auto& [l, a] : memo) {
          const double gap = std::abs(a - target);
          if (gap < best_gap) {
            best_gap = gap;
            best_l = l;
            best_a = a;
          }
        }
        if (best_gap <= opt.rel_tol * target) {
          result.limit = best_l;
          result.achieved_arl = best_a;
          return result;
        }
        if (hi / lo <= 1.0 + 1e-12) {
          std::string msg = "run length jumps over the target between limits " +
                            std::to_string(lo) + " and " + std::to_string(hi);
          throw NonConvergence(msg);
        }
      }
      const double mid = std::sqrt(lo * hi);
      if (!(mid > lo && mid < hi)) break;  // interval exhausted at this precision
      const double a = eval(mid);
      if (a < target)
        lo = mid;
      else if (a > target)
        hi = mid;
      else {
        lo = hi = mid;
        if (s.stop_ratio > 0.0) break;
      }
    }
  }
  throw NonConvergence("calibration ended without reaching the tolerance");
}

}  // namespace

RunResult run_length(const ChartConfig& chart, const DgpSpec& dgp, Rng& rng,
                     const RunSettings& settings) {
  check_run_settings(settings.cap, settings.jitter_scale, true);
  DgpRunner runner(chart, dgp, settings.jitter_scale);
  RunResult out;
  out.length = runner.run(rng, chart.limit, settings.cap, out.capped);
  return out;
}

ArlEstimate estimate_arl(const ChartConfig& chart, const DgpSpec& dgp,
                         std::uint64_t replications, std::uint64_t master_seed,
                         const RunSettings& settings, int workers) {
  ChartState probe_chart(chart);  // reject bad chart configs before spawning workers
  (void)probe_chart;
  FrameGenerator probe(dgp);
  check_run_settings(settings.cap, settings.jitter_scale, probe.integer_output());
  const auto make = [&]() { return DgpRunner(chart, dgp, settings.jitter_scale); };
  return arl_core(make, chart.limit, replications, master_seed, settings.cap, workers);
}

ArlEstimate estimate_arl_serial(const ChartConfig& chart, const DgpSpec& dgp,
                                std::uint64_t replications, std::uint64_t master_seed,
                                const RunSettings& settings) {
  ChartState probe_chart(chart);
  (void)probe_chart;
  FrameGenerator probe(dgp);
  check_run_settings(settings.cap, settings.jitter_scale, probe.integer_output());
  DgpRunner runner(chart, dgp, settings.jitter_scale);
  std::vector<std::uint64_t> rl(replications);
  unsigned long long sum = 0;
  unsigned __int128 sumsq = 0;
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < replications; ++i) {
    Rng rng(master_seed, i);
    bool c = false;
    rl[i] = runner.run(rng, chart.limit, settings.cap, c);
    sum += rl[i];
    sumsq += static_cast<unsigned __int128>(rl[i]) * rl[i];
    hits += c ? 1 : 0;
  }
  const double r = static_cast<double>(replications);
  const double mean = static_cast<double>(sum) / r;
  double se = 0.0;
  if (replications > 1) {
    const double meansq = static_cast<double>(sumsq) / r;
    double var = (meansq - mean * mean) * (r / (r - 1.0));
    if (var < 0) var = 0;
    se = std::sqrt(var / r);
  }
  return ArlEstimate{mean, se, replications, hits};
}

CalibrationResult calibrate_limit(const ChartConfig& chart, const DgpSpec& dgp,
                                  const CalibrateOptions& opt) {
  ChartState probe_chart(chart);
  (void)probe_chart;
  FrameGenerator probe(dgp);
  check_run_settings(opt.cap, opt.jitter_scale, probe.integer_output());
  return calibrate_core(opt, [&](double limit, std::uint64_t reps, std::uint64_t cap) {
    const auto make = [&]() { return DgpRunner(chart, dgp, opt.jitter_scale); };
    return arl_core(make, limit, reps, opt.master_seed, cap, opt.workers).mean;
  });
}

ArlEstimate bootstrap_arl(const std::vector<double>& pool, double lambda, double limit,
                          std::uint64_t replications, std::uint64_t master_seed,
                          std::uint64_t cap, int workers) {
  if (pool.empty()) throw ParamError("bootstrap pool must not be empty");
  for (double v : pool)
    if (!std::isfinite(v)) throw NonFiniteError("bootstrap pool contains a non-finite value");
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw ConfigError("smoothing weight must lie in (0,1]");
  const auto make = [&]() { return BootstrapRunner(&pool, lambda); };
  return arl_core(make, limit, replications, master_seed, cap, workers);
}

CalibrationResult bootstrap_calibrate(const std::vector<double>& pool, double lambda,
                                      const CalibrateOptions& opt) {
  if (pool.empty()) throw ParamError("bootstrap pool must not be empty");
  for (double v : pool)
    if (!std::isfinite(v)) throw NonFiniteError("bootstrap pool contains a non-finite value");
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw ConfigError("smoothing weight must lie in (0,1]");
  return calibrate_core(opt, [&](double limit, std::uint64_t reps, std::uint64_t cap) {
    const auto make = [&]() { return BootstrapRunner(&pool, lambda); };
    return arl_core(make, limit, reps, opt.master_seed, cap, opt.workers).mean;
  });
}

}  // namespace sopmon
