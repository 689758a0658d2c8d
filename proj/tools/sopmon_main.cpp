// Command-line front end: monitor a frame stream, estimate in-control or
// out-of-control ARLs, calibrate alarm limits, and simulate frame streams.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sopmon/calibration.hpp"
#include "sopmon/charts.hpp"
#include "sopmon/config.hpp"
#include "sopmon/dgp.hpp"
#include "sopmon/errors.hpp"
#include "sopmon/io.hpp"

namespace {

using nlohmann::json;
using namespace sopmon;

const char* family_name(ChartFamily f) {
  switch (f) {
    case ChartFamily::TauHat: return "tau_hat";
    case ChartFamily::KappaHat: return "kappa_hat";
    case ChartFamily::TauTilde: return "tau_tilde";
    case ChartFamily::KappaTilde: return "kappa_tilde";
    case ChartFamily::Acf: return "acf";
    case ChartFamily::TauTildeDelayed: return "tau_tilde_delayed";
    case ChartFamily::AcfLagged: return "acf_lagged";
    case ChartFamily::TauTildeBP: return "tau_tilde_bp";
    case ChartFamily::AcfBP: return "acf_bp";
  }
  return "?";
}

json chart_json(const ChartConfig& c) {
  json j{{"family", family_name(c.kind.family)},
         {"lambda", c.lambda},
         {"limit", c.limit},
         {"center", c.center}};
  if (c.kind.family == ChartFamily::TauTildeDelayed)
    j["delay"] = {c.kind.delay.d1, c.kind.delay.d2};
  if (c.kind.family == ChartFamily::AcfLagged) j["lag"] = {c.kind.lag.h1, c.kind.lag.h2};
  if (c.kind.family == ChartFamily::TauTildeBP || c.kind.family == ChartFamily::AcfBP)
    j["window"] = c.kind.window;
  return j;
}

void emit_record(const json& j, const std::string& output) {
  if (output.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(output, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + output + "' for writing");
  f << j.dump(2) << '\n';
}

// Options shared by every subcommand.
struct Cli {
  std::string config_path;
  std::string output;
  std::uint64_t seed = 0;
  bool has_seed = false;
  int workers = 0;
  std::vector<std::pair<std::string, std::string>> overrides;  // key, raw value
};

RunConfig load_config(const Cli& cli) {
  ConfigTable table;
  if (!cli.config_path.empty()) table = parse_config_file(cli.config_path);
  for (const auto& [key, value] : cli.overrides) apply_override(table, key, value);
  return build_run_config(table);
}

std::uint64_t require_seed(const Cli& cli, const char* why) {
  if (!cli.has_seed) throw ConfigError(std::string("--seed is required ") + why);
  return cli.seed;
}

// Frames for monitoring or simulation, either recorded or freshly generated.
struct Stream {
  std::vector<RealGrid> reals;
  std::vector<CountGrid> counts;
  bool integer_valued = false;
  std::size_t size() const { return integer_valued ? counts.size() : reals.size(); }
};

Stream generate_stream(const DgpSpec& spec, std::uint64_t frames, std::uint64_t seed) {
  Stream s;
  FrameGenerator gen(spec);
  s.integer_valued = gen.integer_output();
  Rng rng(seed, 0);
  RealGrid r;
  CountGrid c;
  for (std::uint64_t t = 0; t < frames; ++t) {
    gen.generate(rng, r, c);
    if (s.integer_valued)
      s.counts.push_back(c);
    else
      s.reals.push_back(r);
  }
  return s;
}

Stream load_stream(const std::string& path) {
  LoadedFrames lf = read_frames(path);
  Stream s;
  s.integer_valued = lf.integer_valued;
  if (lf.integer_valued) {
    for (const RealGrid& g : lf.frames) {
      CountGrid c(g.rows(), g.cols());
      for (std::size_t i = 0; i < g.size(); ++i) c.data()[i] = std::llround(g.data()[i]);
      s.counts.push_back(std::move(c));
    }
  } else {
    s.reals = lf.frames;
  }
  return s;
}

int cmd_monitor(const Cli& cli) {
  RunConfig cfg = load_config(cli);
  if (!cfg.has_chart) throw ConfigError("monitor needs a [chart] section");
  if (!cfg.dgp && !cfg.input)
    throw ConfigError("monitor needs either a generator or run.input");
  if (cli.output.empty()) throw ConfigError("--output is required for monitor");

  Stream stream;
  if (cfg.dgp) {
    if (cfg.frames < 1) throw ConfigError("run.frames is required when generating frames");
    stream = generate_stream(*cfg.dgp, cfg.frames,
                             require_seed(cli, "when frames are generated"));
  } else {
    stream = load_stream(*cfg.input);
  }

  const bool jittered = cfg.jitter_scale > 0.0;
  if (jittered && !stream.integer_valued)
    throw ConfigError("tie-breaking noise applies only to integer-valued frames");
  if (cfg.noise_runs > 1 && !jittered)
    throw ConfigError("run.noise_runs above 1 requires run.jitter");
  const std::uint64_t seed =
      jittered ? require_seed(cli, "when tie-breaking noise is drawn") : cli.seed;

  const auto runs = static_cast<std::uint64_t>(cfg.noise_runs);
  const std::size_t frames = stream.size();
  std::vector<ChartRow> rows;
  rows.reserve((runs + (runs > 1 ? 1 : 0)) * frames);
  std::vector<double> mean_raw(frames, 0.0), mean_smooth(frames, 0.0);

  RealGrid buf;
  for (std::uint64_t j = 1; j <= runs; ++j) {
    ChartState st(cfg.chart);
    Rng rng(seed, j);
    for (std::size_t t = 0; t < frames; ++t) {
      const RealGrid* frame;
      if (stream.integer_valued) {
        if (jittered)
          jitter_into(stream.counts[t], cfg.jitter_scale, rng, buf);
        else
          to_real_into(stream.counts[t], buf);
        frame = &buf;
      } else {
        frame = &stream.reals[t];
      }
      const ChartPoint pt = st.update(*frame);
      rows.push_back({static_cast<long long>(j), pt});
      mean_raw[t] += pt.raw;
      mean_smooth[t] += pt.smoothed;
    }
  }

  std::vector<ChartRow> out;
  if (runs > 1) {
    for (std::size_t t = 0; t < frames; ++t) {
      ChartPoint pt;
      pt.t = t + 1;
      pt.raw = mean_raw[t] / static_cast<double>(runs);
      pt.smoothed = mean_smooth[t] / static_cast<double>(runs);
      pt.center = cfg.chart.center;
      pt.limit = cfg.chart.limit;
      pt.alarm = std::abs(pt.smoothed - pt.center) > pt.limit;
      out.push_back({0, pt});
    }
  }
  out.insert(out.end(), rows.begin(), rows.end());
  write_chart_csv(cli.output, out);
  return 0;
}

int cmd_simulate(const Cli& cli) {
  RunConfig cfg = load_config(cli);
  if (!cfg.dgp) throw ConfigError("simulate needs a [dgp] section");
  if (cfg.frames < 1) throw ConfigError("run.frames is required for simulate");
  if (cli.output.empty()) throw ConfigError("--output is required for simulate");
  Stream s = generate_stream(*cfg.dgp, cfg.frames, require_seed(cli, "for simulate"));
  if (s.integer_valued)
    write_frames(cli.output, s.counts);
  else
    write_frames(cli.output, s.reals);
  return 0;
}

int cmd_arl(const Cli& cli) {
  RunConfig cfg = load_config(cli);
  if (!cfg.has_chart) throw ConfigError("arl needs a [chart] section");
  if (!cfg.dgp) throw ConfigError("arl needs a [dgp] section");
  RunSettings settings;
  settings.cap = cfg.cap;
  settings.jitter_scale = cfg.jitter_scale;
  const ArlEstimate est = estimate_arl(cfg.chart, *cfg.dgp, cfg.replications,
                                       require_seed(cli, "for arl"), settings, cli.workers);
  if (est.cap_hits > 0)
    std::cerr << "note: " << est.cap_hits << " of " << est.replications
              << " runs hit the cap of " << settings.cap
              << " frames; the estimate is biased low\n";
  json j{{"mode", "arl"},
         {"chart", chart_json(cfg.chart)},
         {"arl", est.mean},
         {"stderr", est.stderr_},
         {"replications", est.replications},
         {"cap", settings.cap},
         {"cap_hits", est.cap_hits}};
  emit_record(j, cli.output);
  return 0;
}

int cmd_calibrate(const Cli& cli) {
  RunConfig cfg = load_config(cli);
  if (!cfg.has_chart) throw ConfigError("calibrate needs a [chart] section");
  if (!cfg.has_target) throw ConfigError("run.target_arl is required for calibrate");
  if (cfg.pool_file && cfg.dgp)
    throw ConfigError("specify either a generator or run.pool, not both");
  if (!cfg.pool_file && !cfg.dgp)
    throw ConfigError("calibrate needs either a generator or run.pool");

  CalibrateOptions opt;
  opt.target_arl = cfg.target_arl;
  opt.replications = cfg.replications;
  opt.rel_tol = cfg.rel_tol;
  opt.master_seed = require_seed(cli, "for calibrate");
  opt.cap = cfg.cap;
  opt.jitter_scale = cfg.jitter_scale;
  opt.workers = cli.workers;

  CalibrationResult res;
  if (cfg.pool_file) {
    const std::vector<double> pool = read_value_pool(*cfg.pool_file);
    res = bootstrap_calibrate(pool, cfg.chart.lambda, opt);
  } else {
    res = calibrate_limit(cfg.chart, *cfg.dgp, opt);
  }
  json trace = json::array();
  for (const CalibrationEval& e : res.trace)
    trace.push_back({{"limit", e.limit}, {"arl", e.arl}, {"replications", e.replications}});
  json j{{"mode", "calibrate"},
         {"chart", chart_json(cfg.chart)},
         {"limit", res.limit},
         {"achieved_arl", res.achieved_arl},
         {"target_arl", cfg.target_arl},
         {"evaluations", res.trace.size()},
         {"trace", trace}};
  emit_record(j, cli.output);
  return 0;
}

const char* const kOverrideKeys[] = {
    "chart.family", "chart.lambda", "chart.limit", "chart.center", "chart.delay", "chart.lag",
    "chart.window", "dgp.model", "dgp.m", "dgp.n", "dgp.coef", "dgp.powers", "dgp.lag",
    "dgp.burn", "dgp.buffer", "dgp.tol", "dgp.marginal.dist", "dgp.marginal.mu",
    "dgp.marginal.sigma", "dgp.marginal.nu", "dgp.marginal.rate", "dgp.marginal.a",
    "dgp.marginal.b", "dgp.marginal.mean", "dgp.marginal.omega", "dgp.marginal.p",
    "dgp.marginal.xi", "dgp.marginal.alpha", "dgp.marginal.shape", "dgp.marginal.scale",
    "dgp.marginal.weights", "dgp.marginal.means", "dgp.marginal.sigmas", "dgp.innovation.dist",
    "dgp.innovation.mu", "dgp.innovation.sigma", "dgp.innovation.nu", "dgp.innovation.rate",
    "dgp.innovation.a", "dgp.innovation.b", "dgp.innovation.mean", "dgp.innovation.omega",
    "dgp.innovation.p", "dgp.innovation.xi", "dgp.innovation.alpha", "dgp.innovation.shape",
    "dgp.innovation.scale", "dgp.innovation.weights", "dgp.innovation.means",
    "dgp.innovation.sigmas", "dgp.contamination.fraction", "dgp.contamination.model",
    "dgp.contamination.c", "dgp.contamination.nu", "run.frames", "run.replications",
    "run.target_arl", "run.rel_tol", "run.cap", "run.jitter", "run.noise_runs", "run.input",
    "run.pool"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonparametric monitoring of lattice image streams"};
  app.require_subcommand(1);

  Cli cli;
  std::vector<std::string> raw_overrides(std::size(kOverrideKeys));

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", cli.config_path, "config file (TOML subset)");
    sub->add_option("--output", cli.output, "output path");
    sub->add_option("--seed", cli.seed, "master seed for all random draws");
    sub->add_option("--workers", cli.workers, "worker threads (0: all available)");
    for (std::size_t i = 0; i < std::size(kOverrideKeys); ++i)
      sub->add_option(std::string("--") + kOverrideKeys[i], raw_overrides[i],
                      "override config key " + std::string(kOverrideKeys[i]))
          ->group("Config overrides");
  };

  CLI::App* monitor =
      app.add_subcommand("monitor", "run a control chart over a frame stream");
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "find the limit matching a target in-control ARL");
  CLI::App* arl = app.add_subcommand("arl", "estimate the ARL of a configured chart");
  CLI::App* simulate = app.add_subcommand("simulate", "write a generated frame stream");
  for (CLI::App* sub : {monitor, calibrate, arl, simulate}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    cli.has_seed = sub->get_option("--seed")->count() > 0;
    for (std::size_t i = 0; i < std::size(kOverrideKeys); ++i) {
      const auto* opt = sub->get_option(std::string("--") + kOverrideKeys[i]);
      if (opt->count() > 0) cli.overrides.emplace_back(kOverrideKeys[i], raw_overrides[i]);
    }
    if (sub == monitor) return cmd_monitor(cli);
    if (sub == calibrate) return cmd_calibrate(cli);
    if (sub == arl) return cmd_arl(cli);
    return cmd_simulate(cli);
  } catch (const BracketError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 1;
  }
}
