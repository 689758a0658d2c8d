#ifndef SOPMON_CHARTS_HPP
#define SOPMON_CHARTS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "sopmon/grid.hpp"
#include "sopmon/sop.hpp"

namespace sopmon {

enum class ChartFamily {
  TauHat,
  KappaHat,
  TauTilde,
  KappaTilde,
  Acf,
  TauTildeDelayed,
  AcfLagged,
  TauTildeBP,
  AcfBP,
};

struct ChartKind {
  ChartFamily family = ChartFamily::TauTilde;
  Delay delay{1, 1};      // TauTildeDelayed
  SpatialLag lag{1, 1};   // Acf always uses (1,1); AcfLagged is free
  int window = 1;         // TauTildeBP / AcfBP

  static ChartKind tau_hat() { return {ChartFamily::TauHat}; }
  static ChartKind kappa_hat() { return {ChartFamily::KappaHat}; }
  static ChartKind tau_tilde() { return {ChartFamily::TauTilde}; }
  static ChartKind kappa_tilde() { return {ChartFamily::KappaTilde}; }
  static ChartKind acf() { return {ChartFamily::Acf}; }
  static ChartKind tau_tilde_delayed(Delay d) { return {ChartFamily::TauTildeDelayed, d}; }
  static ChartKind acf_lagged(SpatialLag h) { return {ChartFamily::AcfLagged, Delay{}, h}; }
  static ChartKind tau_tilde_bp(int w) { return {ChartFamily::TauTildeBP, Delay{}, SpatialLag{1, 1}, w}; }
  static ChartKind acf_bp(int w) { return {ChartFamily::AcfBP, Delay{}, SpatialLag{1, 1}, w}; }
};

bool is_type_family(ChartFamily f);

// Full specification of one control chart. `center` is the in-control target
// of the plotted statistic (zero for the i.i.d. case; the Phase-I mean when a
// chart is calibrated from historical data). The smoothing start defaults to
// the uniform type vector / zero autocorrelation and can be overridden.
struct ChartConfig {
  ChartKind kind;
  double lambda = 0.1;
  double limit = 0.0;
  double center = 0.0;
  std::optional<std::array<double, 3>> init_type;
  std::optional<double> init_acf;
};

struct ChartPoint {
  std::uint64_t t = 0;
  double raw = 0.0;
  double smoothed = 0.0;
  double center = 0.0;
  double limit = 0.0;
  bool alarm = false;
};

// One smoothing step: lambda * obs + (1 - lambda) * prev.
std::array<double, 3> ewma_step(const std::array<double, 3>& prev,
                                const std::array<double, 3>& obs, double lambda);
double ewma_step(double prev, double obs, double lambda);

// Evolving chart state: one smoothed frequency vector per delay channel for
// the type charts (one channel normally, w^2 for the windowed sum), or one
// smoothed autocorrelation per unique lag (sign-flipped pairs coincide, so
// each unique lag carries weight 2 in the windowed sum).
class ChartState {
 public:
  explicit ChartState(const ChartConfig& cfg);

  ChartPoint update(const RealGrid& frame);

  const ChartConfig& config() const { return cfg_; }
  std::uint64_t t() const { return t_; }
  const std::vector<Delay>& delays() const { return delays_; }
  const std::vector<std::array<double, 3>>& type_channels() const { return type_channels_; }
  const std::vector<SpatialLag>& lags() const { return lags_; }
  const std::vector<int>& lag_weights() const { return lag_weights_; }
  const std::vector<double>& acf_channels() const { return acf_channels_; }

 private:
  friend double bp_sop_stat(const ChartState&);
  friend double bp_acf_stat(const ChartState&);

  double plotted_from_type(const std::vector<std::array<double, 3>>& channels) const;
  double plotted_from_acf(const std::vector<double>& channels) const;

  ChartConfig cfg_;
  std::uint64_t t_ = 0;
  long long m_ = -1, n_ = -1;
  std::vector<Delay> delays_;
  std::vector<std::array<double, 3>> type_channels_;
  std::vector<SpatialLag> lags_;
  std::vector<int> lag_weights_;
  std::vector<double> acf_channels_;
  // per-update scratch, kept to avoid reallocation in long simulations
  std::vector<std::array<double, 3>> raw_type_;
  std::vector<double> raw_acf_;
};

inline ChartState init_chart(const ChartConfig& cfg) { return ChartState(cfg); }

// Windowed sums of squared deviations from the in-control values.
double bp_sop_stat(const std::vector<double>& tau_values,
                   const std::vector<double>& ic_values);
double bp_acf_stat(const std::vector<double>& unique_acf_values,
                   const std::vector<int>& weights,
                   const std::vector<double>& ic_values);
double bp_sop_stat(const ChartState& state);
double bp_acf_stat(const ChartState& state);

}  // namespace sopmon

#endif
