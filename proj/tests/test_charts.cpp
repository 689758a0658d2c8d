#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "sopmon/charts.hpp"
#include "sopmon/errors.hpp"
#include "sopmon/rng.hpp"
#include "sopmon/sop.hpp"

using namespace sopmon;

namespace {

RealGrid random_frame(Rng& rng, std::size_t rows, std::size_t cols) {
  RealGrid g(rows, cols);
  for (double& v : g) v = rng.normal();
  return g;
}

}  // namespace

TEST_CASE("one smoothing step") {
  const std::array<double, 3> prev{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  const std::array<double, 3> obs{0.0, 0.0, 1.0};
  const auto out = ewma_step(prev, obs, 0.1);
  CHECK(out[0] == doctest::Approx(0.300).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(0.300).epsilon(1e-12));
  CHECK(out[2] == doctest::Approx(0.400).epsilon(1e-12));

  CHECK(ewma_step(0.0, 0.5, 0.2) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(ewma_step(0.25, 0.75, 1.0) == 0.75);  // no memory at lambda = 1

  CHECK_THROWS_AS(ewma_step(0.0, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(ewma_step(0.0, 1.0, 1.5), ConfigError);
  CHECK_THROWS_AS(ewma_step(prev, obs, -0.1), ConfigError);
}

TEST_CASE("smoothed type frequencies over the clay sequence") {
  const auto frames = fixtures::clay_frames();
  const auto types = fixtures::clay_types();
  const auto table = fixtures::clay_ewma();

  ChartConfig cfg;
  cfg.kind = ChartKind::tau_tilde();
  cfg.lambda = 0.1;
  cfg.limit = 1.0;
  ChartState st(cfg);
  REQUIRE(st.type_channels().size() == 1);
  CHECK(st.type_channels()[0][0] == 1.0 / 3.0);

  for (std::size_t t = 0; t < frames.size(); ++t) {
    const ChartPoint pt = st.update(frames[t]);
    CHECK(pt.t == t + 1);
    CHECK(st.t() == t + 1);
    // One 2x2 block per frame, so the raw frequency vector is an indicator.
    const double expected_raw = (types[t] == 3 ? 1.0 : 0.0) - 1.0 / 3.0;
    CHECK(pt.raw == expected_raw);
    for (int k = 0; k < 3; ++k)
      CHECK(st.type_channels()[0][static_cast<std::size_t>(k)] ==
            doctest::Approx(table[t][static_cast<std::size_t>(k)]).epsilon(5e-4));
    CHECK(pt.smoothed ==
          doctest::Approx(table[t][2] - 1.0 / 3.0).epsilon(5e-4).scale(1.0));
  }
}

TEST_CASE("smoothed channels stay in the probability simplex") {
  Rng rng(7171);
  ChartConfig cfg;
  cfg.kind = ChartKind::kappa_hat();
  cfg.lambda = 0.23;
  cfg.limit = 10.0;
  ChartState st(cfg);
  for (int t = 0; t < 50; ++t) {
    st.update(random_frame(rng, 5, 7));
    const auto& p = st.type_channels()[0];
    CHECK(p[0] >= 0.0);
    CHECK(p[1] >= 0.0);
    CHECK(p[2] >= 0.0);
    CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("raw chart values match the frame statistics") {
  Rng rng(555);
  const RealGrid g = random_frame(rng, 6, 6);
  const DependenceStats ds = dependence_stats(type_frequencies(g, Delay{1, 1}));

  const auto raw_of = [&](ChartKind kind) {
    ChartConfig cfg;
    cfg.kind = kind;
    cfg.lambda = 0.37;
    cfg.limit = 10.0;
    ChartState st(cfg);
    return st.update(g).raw;
  };

  CHECK(raw_of(ChartKind::tau_hat()) == ds.tau_hat);
  CHECK(raw_of(ChartKind::kappa_hat()) == ds.kappa_hat);
  CHECK(raw_of(ChartKind::tau_tilde()) == ds.tau_tilde);
  CHECK(raw_of(ChartKind::kappa_tilde()) == ds.kappa_tilde);
  CHECK(raw_of(ChartKind::acf()) == spatial_acf(g, SpatialLag{1, 1}));
  CHECK(raw_of(ChartKind::acf_lagged(SpatialLag{2, -1})) ==
        spatial_acf(g, SpatialLag{2, -1}));

  const DependenceStats ds22 = dependence_stats(type_frequencies(g, Delay{2, 2}));
  CHECK(raw_of(ChartKind::tau_tilde_delayed(Delay{2, 2})) == ds22.tau_tilde);
}

TEST_CASE("a chart with lambda 1 plots the raw statistic") {
  Rng rng(808);
  ChartConfig cfg;
  cfg.kind = ChartKind::tau_tilde();
  cfg.lambda = 1.0;
  cfg.limit = 10.0;
  ChartState st(cfg);
  for (int t = 0; t < 20; ++t) {
    const ChartPoint pt = st.update(random_frame(rng, 5, 5));
    CHECK(pt.smoothed == pt.raw);
  }
}

TEST_CASE("start overrides") {
  ChartConfig cfg;
  cfg.kind = ChartKind::tau_tilde();
  cfg.init_type = {{0.5, 0.25, 0.25}};
  ChartState st(cfg);
  CHECK(st.type_channels()[0][0] == 0.5);
  CHECK(st.type_channels()[0][2] == 0.25);

  ChartConfig acfg;
  acfg.kind = ChartKind::acf();
  acfg.init_acf = 0.2;
  ChartState ast(acfg);
  CHECK(ast.acf_channels()[0] == 0.2);

  cfg.init_type = {{0.5, 0.6, -0.1}};
  CHECK_THROWS_AS(ChartState{cfg}, ConfigError);
  cfg.init_type = {{0.5, 0.2, 0.2}};  // sums to 0.9
  CHECK_THROWS_AS(ChartState{cfg}, ConfigError);
  acfg.init_acf = 1.5;
  CHECK_THROWS_AS(ChartState{acfg}, ConfigError);
}

TEST_CASE("configuration validation") {
  ChartConfig cfg;
  cfg.kind = ChartKind::tau_tilde();
  cfg.lambda = 0.0;
  CHECK_THROWS_AS(ChartState{cfg}, ConfigError);
  cfg.lambda = 1.2;
  CHECK_THROWS_AS(ChartState{cfg}, ConfigError);
  cfg.lambda = 0.1;
  cfg.limit = -0.5;
  CHECK_THROWS_AS(ChartState{cfg}, ConfigError);
  cfg.limit = 0.1;
  cfg.center = NAN;
  CHECK_THROWS_AS(ChartState{cfg}, ConfigError);
  cfg.center = 0.0;
  cfg.kind = ChartKind::tau_tilde_delayed(Delay{0, 1});
  CHECK_THROWS_AS(ChartState{cfg}, ConfigError);
  cfg.kind = ChartKind::acf_lagged(SpatialLag{0, 0});
  CHECK_THROWS_AS(ChartState{cfg}, ConfigError);
  cfg.kind = ChartKind::tau_tilde_bp(0);
  CHECK_THROWS_AS(ChartState{cfg}, ConfigError);
  cfg.kind = ChartKind::acf_bp(-1);
  CHECK_THROWS_AS(ChartState{cfg}, ConfigError);
}

TEST_CASE("frame shape is fixed after the first update") {
  Rng rng(4242);
  ChartConfig cfg;
  cfg.kind = ChartKind::tau_tilde();
  cfg.limit = 10.0;
  ChartState st(cfg);
  st.update(random_frame(rng, 5, 5));
  CHECK_THROWS_AS(st.update(random_frame(rng, 5, 6)), DimensionError);

  ChartState st2(cfg);
  RealGrid tiny(2, 2, 0.0);
  tiny(0, 0) = 1.0;
  st2.update(tiny);  // 2x2 is the smallest chartable frame
  CHECK(st2.t() == 1);

  ChartConfig dcfg;
  dcfg.kind = ChartKind::tau_tilde_delayed(Delay{3, 3});
  dcfg.limit = 10.0;
  ChartState st3(dcfg);
  CHECK_THROWS_AS(st3.update(tiny), DelayError);

  ChartConfig lcfg;
  lcfg.kind = ChartKind::acf_lagged(SpatialLag{0, 4});
  lcfg.limit = 10.0;
  ChartState st4(lcfg);
  CHECK_THROWS_AS(st4.update(tiny), OverlapError);
}

TEST_CASE("alarm requires strict exceedance of the limit") {
  Rng rng(91);
  const RealGrid g = random_frame(rng, 5, 5);

  ChartConfig probe;
  probe.kind = ChartKind::kappa_hat();
  probe.lambda = 1.0;
  probe.limit = 10.0;
  const double v = std::fabs(ChartState(probe).update(g).smoothed);
  REQUIRE(v > 0.0);

  ChartConfig on_limit = probe;
  on_limit.limit = v;
  CHECK_FALSE(ChartState(on_limit).update(g).alarm);

  ChartConfig below = probe;
  below.limit = std::nextafter(v, 0.0);
  CHECK(ChartState(below).update(g).alarm);

  ChartConfig offset = probe;
  offset.center = 5.0;
  offset.limit = 4.0;  // |v - 5| > 4 since |v| <= 1
  CHECK(ChartState(offset).update(g).alarm);
}

TEST_CASE("windowed type chart tracks one channel per delay pair") {
  ChartConfig cfg;
  cfg.kind = ChartKind::tau_tilde_bp(2);
  cfg.limit = 10.0;
  ChartState st(cfg);
  REQUIRE(st.delays().size() == 4);
  CHECK(st.delays()[0] == Delay{1, 1});
  CHECK(st.delays()[1] == Delay{1, 2});
  CHECK(st.delays()[2] == Delay{2, 1});
  CHECK(st.delays()[3] == Delay{2, 2});

  ChartConfig cfg3;
  cfg3.kind = ChartKind::tau_tilde_bp(3);
  CHECK(ChartState(cfg3).delays().size() == 9);

  // Window 1 reduces to the squared plain chart.
  Rng rng(313);
  ChartConfig w1 = cfg;
  w1.kind = ChartKind::tau_tilde_bp(1);
  w1.lambda = 0.2;
  ChartConfig plain = w1;
  plain.kind = ChartKind::tau_tilde();
  ChartState bp(w1), tt(plain);
  for (int t = 0; t < 10; ++t) {
    const RealGrid g = random_frame(rng, 6, 6);
    const ChartPoint a = bp.update(g);
    const ChartPoint b = tt.update(g);
    CHECK(a.smoothed == b.smoothed * b.smoothed);
    CHECK(bp_sop_stat(bp) == a.smoothed);
  }
}

TEST_CASE("windowed autocorrelation chart lags cover a half plane once") {
  const auto canonical = [](SpatialLag h) {
    return h.h1 > 0 || (h.h1 == 0 && h.h2 > 0);
  };
  for (int w : {1, 2, 3}) {
    ChartConfig cfg;
    cfg.kind = ChartKind::acf_bp(w);
    cfg.limit = 10.0;
    ChartState st(cfg);
    const auto& lags = st.lags();
    const std::size_t expected = static_cast<std::size_t>(w + w * (2 * w + 1));
    CHECK(lags.size() == expected);  // 4, 12, 24
    for (std::size_t i = 0; i < lags.size(); ++i) {
      CHECK(canonical(lags[i]));
      CHECK(std::abs(lags[i].h1) <= w);
      CHECK(std::abs(lags[i].h2) <= w);
      CHECK(st.lag_weights()[i] == 2);
      for (std::size_t j = i + 1; j < lags.size(); ++j) CHECK_FALSE(lags[i] == lags[j]);
    }
  }
  CHECK(ChartState(ChartConfig{ChartKind::acf_bp(1)}).lags().size() == 4);
  CHECK(ChartState(ChartConfig{ChartKind::acf_bp(2)}).lags().size() == 12);
  CHECK(ChartState(ChartConfig{ChartKind::acf_bp(3)}).lags().size() == 24);
}

TEST_CASE("windowed statistics from plain vectors") {
  CHECK(bp_sop_stat({0.1, -0.2, 0.05, 0.0}, {0.0, 0.0, 0.0, 0.0}) ==
        doctest::Approx(0.0525).epsilon(1e-12));
  CHECK(bp_acf_stat({0.2, 0.1, 0.05, 0.0}, {2, 2, 2, 2}, {0.0, 0.0, 0.0, 0.0}) ==
        doctest::Approx(0.105).epsilon(1e-12));
  CHECK(bp_sop_stat({0.1, 0.1}, {0.1, 0.1}) == 0.0);
  CHECK_THROWS_AS(bp_sop_stat({0.1}, {0.0, 0.0}), ParamError);
  CHECK_THROWS_AS(bp_acf_stat({0.1}, {2, 2}, {0.0}), ParamError);

  // Non-zero in-control values shift the deviations.
  CHECK(bp_sop_stat({0.3, 0.1}, {0.1, 0.1}) == doctest::Approx(0.04).epsilon(1e-12));

  ChartConfig cfg;
  cfg.kind = ChartKind::tau_tilde();
  CHECK_THROWS_AS(bp_sop_stat(ChartState{cfg}), ConfigError);
  CHECK_THROWS_AS(bp_acf_stat(ChartState{cfg}), ConfigError);
}

TEST_CASE("windowed autocorrelation statistic matches a hand sum") {
  Rng rng(626);
  const RealGrid g = random_frame(rng, 8, 8);
  ChartConfig cfg;
  cfg.kind = ChartKind::acf_bp(2);
  cfg.lambda = 1.0;
  cfg.limit = 100.0;
  ChartState st(cfg);
  const ChartPoint pt = st.update(g);
  double expect = 0.0;
  for (std::size_t i = 0; i < st.lags().size(); ++i) {
    const double r = spatial_acf(g, st.lags()[i]);
    expect += 2.0 * r * r;
  }
  CHECK(pt.smoothed == doctest::Approx(expect).epsilon(1e-14));
  CHECK(bp_acf_stat(st) == pt.smoothed);
}

TEST_CASE("family classification") {
  CHECK(is_type_family(ChartFamily::TauHat));
  CHECK(is_type_family(ChartFamily::TauTildeBP));
  CHECK_FALSE(is_type_family(ChartFamily::Acf));
  CHECK_FALSE(is_type_family(ChartFamily::AcfBP));
}
