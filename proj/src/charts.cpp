#include "sopmon/charts.hpp"

#include <cmath>

namespace sopmon {

bool is_type_family(ChartFamily f) {
  switch (f) {
    case ChartFamily::TauHat:
    case ChartFamily::KappaHat:
    case ChartFamily::TauTilde:
    case ChartFamily::KappaTilde:
    case ChartFamily::TauTildeDelayed:
    case ChartFamily::TauTildeBP:
      return true;
    default:
      return false;
  }
}

std::array<double, 3> ewma_step(const std::array<double, 3>& prev,
                                const std::array<double, 3>& obs, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in (0,1]");
  return {lambda * obs[0] + (1.0 - lambda) * prev[0],
          lambda * obs[1] + (1.0 - lambda) * prev[1],
          lambda * obs[2] + (1.0 - lambda) * prev[2]};
}

double ewma_step(double prev, double obs, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in (0,1]");
  return lambda * obs + (1.0 - lambda) * prev;
}

namespace {

void check_simplex(const std::array<double, 3>& p) {
  double sum = p[0] + p[1] + p[2];
  if (!(p[0] >= 0.0 && p[1] >= 0.0 && p[2] >= 0.0) || std::fabs(sum - 1.0) > 1e-9)
    throw ConfigError("type-chart start vector must lie in the probability simplex");
}

}  // namespace

ChartState::ChartState(const ChartConfig& cfg) : cfg_(cfg) {
  if (!(cfg.lambda > 0.0 && cfg.lambda <= 1.0)) throw ConfigError("lambda must lie in (0,1]");
  if (!(cfg.limit >= 0.0) || !std::isfinite(cfg.limit))
    throw ConfigError("control limit must be finite and >= 0");
  if (!std::isfinite(cfg.center)) throw ConfigError("center must be finite");

  const ChartKind& k = cfg.kind;
  if (is_type_family(k.family)) {
    switch (k.family) {
      case ChartFamily::TauTildeDelayed:
        if (k.delay.d1 < 1 || k.delay.d2 < 1) throw ConfigError("delay components must be >= 1");
        delays_ = {k.delay};
        break;
      case ChartFamily::TauTildeBP:
        if (k.window < 1) throw ConfigError("window must be >= 1");
        for (int d1 = 1; d1 <= k.window; ++d1)
          for (int d2 = 1; d2 <= k.window; ++d2) delays_.push_back({d1, d2});
        break;
      default:
        delays_ = {Delay{1, 1}};
        break;
    }
    std::array<double, 3> init = cfg.init_type.value_or(
        std::array<double, 3>{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    check_simplex(init);
    type_channels_.assign(delays_.size(), init);
    raw_type_.resize(delays_.size());
  } else {
    switch (k.family) {
      case ChartFamily::Acf:
        lags_ = {SpatialLag{1, 1}};
        lag_weights_ = {1};
        break;
      case ChartFamily::AcfLagged:
        if (k.lag.h1 == 0 && k.lag.h2 == 0) throw ConfigError("lag (0,0) is not a valid lag");
        lags_ = {k.lag};
        lag_weights_ = {1};
        break;
      case ChartFamily::AcfBP: {
        if (k.window < 1) throw ConfigError("window must be >= 1");
        // one representative per sign-flipped pair: h1 > 0, or h1 == 0 and h2 > 0
        for (int h2 = 1; h2 <= k.window; ++h2) {
          lags_.push_back({0, h2});
          lag_weights_.push_back(2);
        }
        for (int h1 = 1; h1 <= k.window; ++h1)
          for (int h2 = -k.window; h2 <= k.window; ++h2) {
            lags_.push_back({h1, h2});
            lag_weights_.push_back(2);
          }
        break;
      }
      default:
        throw ConfigError("unknown chart kind");
    }
    double init = cfg.init_acf.value_or(0.0);
    if (!(init >= -1.0 && init <= 1.0))
      throw ConfigError("autocorrelation start value must lie in [-1,1]");
    acf_channels_.assign(lags_.size(), init);
    raw_acf_.resize(lags_.size());
  }
}

double ChartState::plotted_from_type(const std::vector<std::array<double, 3>>& ch) const {
  switch (cfg_.kind.family) {
    case ChartFamily::TauHat:
      return ch[0][0] - 1.0 / 3.0;
    case ChartFamily::KappaHat:
      return ch[0][1] - ch[0][2];
    case ChartFamily::TauTilde:
    case ChartFamily::TauTildeDelayed:
      return ch[0][2] - 1.0 / 3.0;
    case ChartFamily::KappaTilde:
      return ch[0][0] - ch[0][1];
    case ChartFamily::TauTildeBP: {
      double sum = 0.0;
      for (const auto& p : ch) {
        double dev = p[2] - 1.0 / 3.0;  // in-control value of each channel is 0
        sum += dev * dev;
      }
      return sum;
    }
    default:
      throw ConfigError("not a type chart");
  }
}

double ChartState::plotted_from_acf(const std::vector<double>& ch) const {
  switch (cfg_.kind.family) {
    case ChartFamily::Acf:
    case ChartFamily::AcfLagged:
      return ch[0];
    case ChartFamily::AcfBP: {
      double sum = 0.0;
      for (std::size_t i = 0; i < ch.size(); ++i) sum += lag_weights_[i] * ch[i] * ch[i];
      return sum;
    }
    default:
      throw ConfigError("not an autocorrelation chart");
  }
}

ChartPoint ChartState::update(const RealGrid& frame) {
  if (m_ < 0) {
    for (const Delay& d : delays_)
      if (d.d1 > frame.m() || d.d2 > frame.n()) throw DelayError("delay exceeds grid extent");
    for (const SpatialLag& h : lags_)
      if (std::abs(h.h1) > frame.m() || std::abs(h.h2) > frame.n())
        throw OverlapError("lag exceeds grid extent");
    m_ = frame.m();
    n_ = frame.n();
  } else if (frame.m() != m_ || frame.n() != n_) {
    throw DimensionError("frame shape changed mid-stream");
  }

  double raw, smoothed;
  if (is_type_family(cfg_.kind.family)) {
    for (std::size_t i = 0; i < delays_.size(); ++i) {
      raw_type_[i] = type_frequencies(frame, delays_[i]).p;
      type_channels_[i] = ewma_step(type_channels_[i], raw_type_[i], cfg_.lambda);
    }
    raw = plotted_from_type(raw_type_);
    smoothed = plotted_from_type(type_channels_);
  } else {
    for (std::size_t i = 0; i < lags_.size(); ++i) {
      raw_acf_[i] = spatial_acf(frame, lags_[i]);
      acf_channels_[i] = ewma_step(acf_channels_[i], raw_acf_[i], cfg_.lambda);
    }
    raw = plotted_from_acf(raw_acf_);
    smoothed = plotted_from_acf(acf_channels_);
  }

  ++t_;
  ChartPoint pt;
  pt.t = t_;
  pt.raw = raw;
  pt.smoothed = smoothed;
  pt.center = cfg_.center;
  pt.limit = cfg_.limit;
  pt.alarm = std::fabs(smoothed - cfg_.center) > cfg_.limit;
  return pt;
}

double bp_sop_stat(const std::vector<double>& tau_values, const std::vector<double>& ic_values) {
  if (tau_values.size() != ic_values.size()) throw ParamError("channel count mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < tau_values.size(); ++i) {
    double dev = tau_values[i] - ic_values[i];
    sum += dev * dev;
  }
  return sum;
}

double bp_acf_stat(const std::vector<double>& unique_acf_values, const std::vector<int>& weights,
                   const std::vector<double>& ic_values) {
  if (unique_acf_values.size() != weights.size() || unique_acf_values.size() != ic_values.size())
    throw ParamError("channel count mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < unique_acf_values.size(); ++i) {
    double dev = unique_acf_values[i] - ic_values[i];
    sum += weights[i] * dev * dev;
  }
  return sum;
}

double bp_sop_stat(const ChartState& state) {
  if (state.config().kind.family != ChartFamily::TauTildeBP)
    throw ConfigError("state does not hold a windowed type chart");
  return state.plotted_from_type(state.type_channels());
}

double bp_acf_stat(const ChartState& state) {
  if (state.config().kind.family != ChartFamily::AcfBP)
    throw ConfigError("state does not hold a windowed autocorrelation chart");
  return state.plotted_from_acf(state.acf_channels());
}

}  // namespace sopmon
