#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "doctest.h"
#include "sopmon/config.hpp"
#include "sopmon/errors.hpp"
#include "sopmon/io.hpp"
#include "sopmon/rng.hpp"

using namespace sopmon;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("sopmon_test_" + name)).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::string out((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return out;
}

}  // namespace

TEST_CASE("frame CSV round trip is value-exact") {
  Rng rng(1);
  std::vector<RealGrid> frames;
  for (int t = 0; t < 2; ++t) {
    RealGrid g(3, 4);
    for (double& v : g) v = rng.normal();
    frames.push_back(g);
  }
  frames[0](0, 0) = 0.1;
  frames[0](0, 1) = 1.0 / 3.0;
  frames[0](0, 2) = -1234.5678901234567;
  frames[0](0, 3) = 1e300;
  frames[1](2, 3) = 5e-324;

  const std::string path = tmp_path("frames.csv");
  write_frames_csv(path, frames);
  const LoadedFrames in = read_frames_csv(path);
  CHECK_FALSE(in.integer_valued);
  REQUIRE(in.frames.size() == 2);
  for (std::size_t t = 0; t < 2; ++t) {
    REQUIRE(in.frames[t].rows() == 3);
    REQUIRE(in.frames[t].cols() == 4);
    for (std::size_t i = 0; i < frames[t].size(); ++i)
      CHECK(in.frames[t].data()[i] == frames[t].data()[i]);
  }
  CHECK(read_text(path).rfind("t,s1,s2,y\n", 0) == 0);
  std::remove(path.c_str());
}

TEST_CASE("count frames are written as plain integers") {
  CountGrid g(2, 2, 0);
  g(0, 0) = 7;
  g(0, 1) = -3;
  g(1, 0) = 1099511627776;  // 2^40
  const std::string path = tmp_path("counts.csv");
  write_frames_csv(path, std::vector<CountGrid>{g});
  const std::string text = read_text(path);
  CHECK(text.find('.') == std::string::npos);
  CHECK(text.find("1099511627776") != std::string::npos);

  const LoadedFrames in = read_frames_csv(path);
  CHECK(in.integer_valued);
  CHECK(in.frames[0](1, 0) == 1099511627776.0);
  CHECK(in.frames[0](0, 1) == -3.0);
  std::remove(path.c_str());
}

TEST_CASE("integral doubles count as integer-valued until they outgrow exactness") {
  const std::string path = tmp_path("intdetect.csv");

  RealGrid g(2, 2, 3.0);
  write_frames_csv(path, std::vector<RealGrid>{g});
  CHECK(read_frames_csv(path).integer_valued);

  g(0, 0) = 0.5;
  write_frames_csv(path, std::vector<RealGrid>{g});
  CHECK_FALSE(read_frames_csv(path).integer_valued);

  g(0, 0) = 9007199254740992.0;  // 2^53: integral but beyond exact range
  write_frames_csv(path, std::vector<RealGrid>{g});
  CHECK_FALSE(read_frames_csv(path).integer_valued);
  std::remove(path.c_str());
}

TEST_CASE("frame CSV rejects malformed input") {
  const std::string path = tmp_path("bad.csv");

  write_text(path, "t,s1,s2,z\n1,0,0,1\n");
  CHECK_THROWS_AS(read_frames_csv(path), SchemaError);

  write_text(path, "t,s1,s2,y\n1,0,0\n");
  CHECK_THROWS_AS(read_frames_csv(path), SchemaError);

  write_text(path, "t,s1,s2,y\n1,0,0,abc\n");
  CHECK_THROWS_AS(read_frames_csv(path), SchemaError);

  write_text(path, "t,s1,s2,y\n0,0,0,1.5\n");
  CHECK_THROWS_AS(read_frames_csv(path), SchemaError);

  write_text(path, "t,s1,s2,y\n1,0,-1,1.5\n");
  CHECK_THROWS_AS(read_frames_csv(path), SchemaError);

  write_text(path, "t,s1,s2,y\n1,0,0,nan\n");
  CHECK_THROWS_AS(read_frames_csv(path), NonFiniteError);

  write_text(path, "t,s1,s2,y\n1,1.5,0,2.0\n");
  CHECK_THROWS_AS(read_frames_csv(path), SchemaError);

  write_text(path, "t,s1,s2,y\n");
  CHECK_THROWS_AS(read_frames_csv(path), ShapeError);

  CHECK_THROWS_AS(read_frames_csv(tmp_path("no_such_file.csv")), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("frame CSV rejects inconsistent grids") {
  const std::string path = tmp_path("shape.csv");
  const std::string full22 = "1,0,0,1\n1,0,1,2\n1,1,0,3\n1,1,1,4\n";

  // missing one cell of a 2x2
  write_text(path, "t,s1,s2,y\n1,0,0,1\n1,0,1,2\n1,1,0,3\n");
  CHECK_THROWS_AS(read_frames_csv(path), ShapeError);

  // duplicate cell
  write_text(path, "t,s1,s2,y\n" + full22 + "1,1,1,9\n");
  CHECK_THROWS_AS(read_frames_csv(path), ShapeError);

  // second frame has a different shape
  write_text(path, "t,s1,s2,y\n" + full22 +
                       "2,0,0,1\n2,0,1,2\n2,0,2,9\n2,1,0,3\n2,1,1,4\n2,1,2,9\n");
  CHECK_THROWS_AS(read_frames_csv(path), ShapeError);

  // a single cell is below the 2x2 minimum
  write_text(path, "t,s1,s2,y\n1,0,0,1\n");
  CHECK_THROWS_AS(read_frames_csv(path), ShapeError);

  // rows may arrive in any order within and across frames
  write_text(path, "t,s1,s2,y\n2,1,1,8\n1,0,0,1\n2,0,0,5\n1,1,1,4\n1,0,1,2\n"
                   "2,0,1,6\n2,1,0,7\n1,1,0,3\n");
  const LoadedFrames in = read_frames_csv(path);
  REQUIRE(in.frames.size() == 2);
  CHECK(in.frames[0](1, 1) == 4.0);
  CHECK(in.frames[1](0, 0) == 5.0);
  std::remove(path.c_str());
}

TEST_CASE("frame NDJSON round trip and extension dispatch") {
  Rng rng(4);
  std::vector<RealGrid> frames;
  for (int t = 0; t < 3; ++t) {
    RealGrid g(2, 5);
    for (double& v : g) v = rng.normal();
    frames.push_back(g);
  }
  const std::string path = tmp_path("frames.ndjson");
  write_frames(path, frames);  // picks the JSON writer from the extension
  const std::string text = read_text(path);
  CHECK(text.rfind("{\"t\":1,", 0) == 0);

  const LoadedFrames in = read_frames(path);
  CHECK_FALSE(in.integer_valued);
  REQUIRE(in.frames.size() == 3);
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t i = 0; i < frames[t].size(); ++i)
      CHECK(in.frames[t].data()[i] == frames[t].data()[i]);

  CountGrid counts(3, 3, 2);
  counts(2, 2) = 123456789;
  const std::string jpath = tmp_path("counts.jsonl");
  write_frames(jpath, std::vector<CountGrid>{counts});
  const LoadedFrames jin = read_frames(jpath);
  CHECK(jin.integer_valued);
  CHECK(jin.frames[0](2, 2) == 123456789.0);
  std::remove(path.c_str());
  std::remove(jpath.c_str());
}

TEST_CASE("frame NDJSON rejects malformed input") {
  const std::string path = tmp_path("bad.ndjson");

  write_text(path, "{\"t\":1,\"y\":[[1,2],[3,4]]}\n{\"t\":1,\"y\":[[1,2],[3,4]]}\n");
  CHECK_THROWS_AS(read_frames_ndjson(path), ShapeError);

  write_text(path, "{\"t\":1,\"y\":[[1,2],[3]]}\n");
  CHECK_THROWS_AS(read_frames_ndjson(path), ShapeError);

  write_text(path, "{\"t\":1.5,\"y\":[[1,2],[3,4]]}\n");
  CHECK_THROWS_AS(read_frames_ndjson(path), SchemaError);

  write_text(path, "{\"y\":[[1,2],[3,4]]}\n");
  CHECK_THROWS_AS(read_frames_ndjson(path), SchemaError);

  write_text(path, "{\"t\":1}\n");
  CHECK_THROWS_AS(read_frames_ndjson(path), SchemaError);

  write_text(path, "{\"t\":1,\"y\":[[1,\"x\"],[3,4]]}\n");
  CHECK_THROWS_AS(read_frames_ndjson(path), SchemaError);

  write_text(path, "not json\n");
  CHECK_THROWS_AS(read_frames_ndjson(path), SchemaError);
  std::remove(path.c_str());
}

TEST_CASE("chart CSV format") {
  std::vector<ChartRow> rows;
  ChartRow mean;
  mean.run = 0;
  mean.point = {1, 0.25, 0.125, 0.0, 0.0625, false};
  ChartRow one;
  one.run = 1;
  one.point = {1, 0.1 + 0.2, 0.1 + 0.2, 0.0, 0.0625, true};
  rows.push_back(mean);
  rows.push_back(one);

  const std::string path = tmp_path("chart.csv");
  write_chart_csv(path, rows);
  const std::string text = read_text(path);
  CHECK(text.rfind("run,t,raw,smoothed,center,limit,alarm\n", 0) == 0);
  CHECK(text.find("\n0,1,0.25,0.125,0,0.0625,0\n") != std::string::npos);
  // 0.1 + 0.2 shows its full binary value, so a reader can reproduce it exactly
  CHECK(text.find("\n1,1,0.30000000000000004,0.30000000000000004,0,0.0625,1\n") !=
        std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("value pool files") {
  const std::string path = tmp_path("pool.txt");
  const std::vector<double> values{0.5, -1.25, 3e-4, 1.0 / 3.0};
  write_value_pool(path, values);
  const std::vector<double> in = read_value_pool(path);
  REQUIRE(in.size() == values.size());
  for (std::size_t i = 0; i < values.size(); ++i) CHECK(in[i] == values[i]);

  write_text(path, "# leading comment\n\n 0.5 \n-2\n# done\n");
  const std::vector<double> hand = read_value_pool(path);
  REQUIRE(hand.size() == 2);
  CHECK(hand[0] == 0.5);
  CHECK(hand[1] == -2.0);

  write_text(path, "# only a comment\n\n");
  CHECK_THROWS_AS(read_value_pool(path), SchemaError);

  write_text(path, "0.5\nabc\n");
  CHECK_THROWS_AS(read_value_pool(path), SchemaError);

  write_text(path, "0.5\ninf\n");
  CHECK_THROWS_AS(read_value_pool(path), NonFiniteError);

  CHECK_THROWS_AS(read_value_pool(tmp_path("no_such_pool.txt")), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("config parsing") {
  const std::string text =
      "# top comment\n"
      "title = \"demo # not a comment\"  # trailing\n"
      "\r\n"
      "[chart]\n"
      "family = \"tau_tilde\"\n"
      "lambda = 0.1\n"
      "limit = 2.5e-2\n"
      "\n"
      "[dgp]\n"
      "model = \"sar\"\n"
      "coef = [0.2, 0.1, 0.05]\n"
      "burn = 50\n"
      "\n"
      "[dgp.contamination]\n"
      "fraction = 0.1\n"
      "model = \"fixed_add\"\n"
      "c = 4\n"
      "\n"
      "[run]\n"
      "jitter = 0.001\n"
      "verbose = true\n";
  const ConfigTable t = parse_config(text);
  CHECK(std::get<std::string>(t.at("title")) == "demo # not a comment");
  CHECK(std::get<std::string>(t.at("chart.family")) == "tau_tilde");
  CHECK(std::get<double>(t.at("chart.lambda")) == 0.1);
  CHECK(std::get<double>(t.at("chart.limit")) == 0.025);
  CHECK(std::get<std::vector<double>>(t.at("dgp.coef")) ==
        std::vector<double>{0.2, 0.1, 0.05});
  CHECK(std::get<double>(t.at("dgp.contamination.fraction")) == 0.1);
  CHECK(std::get<std::string>(t.at("dgp.contamination.model")) == "fixed_add");
  CHECK(std::get<bool>(t.at("run.verbose")) == true);

  CHECK_THROWS_AS(parse_config("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("just a line\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sec\nk = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("k = \"abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("k = [1, 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("k = [1, x]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("k =\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("a.b = 1\n"), ConfigError);  // dotted keys come from sections
  CHECK_THROWS_AS(parse_config("bad key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("k = 1e999\n"), ConfigError);
}

TEST_CASE("command-line overrides parse bare words as strings") {
  ConfigTable t;
  apply_override(t, "chart.lambda", "0.2");
  CHECK(std::get<double>(t.at("chart.lambda")) == 0.2);
  apply_override(t, "chart.family", "tau_tilde");
  CHECK(std::get<std::string>(t.at("chart.family")) == "tau_tilde");
  apply_override(t, "run.input", "\"frames.csv\"");
  CHECK(std::get<std::string>(t.at("run.input")) == "frames.csv");
  apply_override(t, "run.verbose", "true");
  CHECK(std::get<bool>(t.at("run.verbose")) == true);
  apply_override(t, "dgp.coef", "[0.1, 0.2, 0.3]");
  CHECK(std::get<std::vector<double>>(t.at("dgp.coef")) ==
        std::vector<double>{0.1, 0.2, 0.3});
  apply_override(t, "run.cap", "1e4");
  CHECK(std::get<double>(t.at("run.cap")) == 10000.0);
  apply_override(t, "chart.lambda", "0.3");  // overrides may replace file values
  CHECK(std::get<double>(t.at("chart.lambda")) == 0.3);
  CHECK_THROWS_AS(apply_override(t, "bad key", "1"), ConfigError);
  CHECK_THROWS_AS(apply_override(t, "k..l", "1"), ConfigError);
}

TEST_CASE("run configuration from a full table") {
  const std::string text =
      "[chart]\n"
      "family = \"tau_tilde_delayed\"\n"
      "delay = [2, 3]\n"
      "lambda = 0.05\n"
      "limit = 0.02\n"
      "center = -0.01\n"
      "[dgp]\n"
      "model = \"sar\"\n"
      "m = 10\n"
      "n = 12\n"
      "coef = [0.2, 0.1, 0.05]\n"
      "burn = 30\n"
      "lag = 2\n"
      "[dgp.innovation]\n"
      "dist = \"t\"\n"
      "nu = 4\n"
      "[dgp.contamination]\n"
      "fraction = 0.05\n"
      "model = \"fixed_add\"\n"
      "c = 4\n"
      "[run]\n"
      "frames = 200\n"
      "replications = 5000\n"
      "target_arl = 370\n"
      "rel_tol = 0.01\n"
      "cap = 20000\n"
      "jitter = 0.001\n"
      "noise_runs = 5\n";
  const RunConfig cfg = build_run_config(parse_config(text));

  CHECK(cfg.has_chart);
  CHECK(cfg.chart.kind.family == ChartFamily::TauTildeDelayed);
  CHECK(cfg.chart.kind.delay == Delay{2, 3});
  CHECK(cfg.chart.lambda == 0.05);
  CHECK(cfg.chart.limit == 0.02);
  CHECK(cfg.chart.center == -0.01);

  REQUIRE(cfg.dgp.has_value());
  CHECK(cfg.dgp->m == 10);
  CHECK(cfg.dgp->n == 12);
  const auto& sar = std::get<dgp::Sar>(cfg.dgp->model);
  CHECK(sar.a1 == 0.2);
  CHECK(sar.a3 == 0.05);
  CHECK(sar.burn == 30);
  CHECK(sar.lag == 2);
  CHECK(std::get<marg::StudentT>(sar.innovation).nu == 4.0);
  REQUIRE(cfg.dgp->contamination.has_value());
  CHECK(cfg.dgp->contamination->fraction == 0.05);
  CHECK(std::get<FixedAdd>(cfg.dgp->contamination->model).c == 4.0);

  CHECK(cfg.frames == 200);
  CHECK(cfg.replications == 5000);
  CHECK(cfg.has_target);
  CHECK(cfg.target_arl == 370.0);
  CHECK(cfg.rel_tol == 0.01);
  CHECK(cfg.cap == 20000);
  CHECK(cfg.jitter_scale == 0.001);
  CHECK(cfg.noise_runs == 5);
}

TEST_CASE("run configuration defaults and windowed kinds") {
  const RunConfig minimal = build_run_config(parse_config(
      "[chart]\nfamily = \"acf\"\n[dgp]\nmodel = \"iid\"\nm = 10\nn = 10\n"));
  CHECK(minimal.chart.kind.family == ChartFamily::Acf);
  CHECK(minimal.chart.lambda == 0.1);
  CHECK(minimal.replications == 10000);
  CHECK(minimal.cap == 100000);
  CHECK(minimal.noise_runs == 1);
  CHECK_FALSE(minimal.has_target);
  CHECK(std::holds_alternative<marg::Normal>(
      std::get<dgp::Iid>(minimal.dgp->model).marginal));

  const RunConfig bp = build_run_config(parse_config(
      "[chart]\nfamily = \"acf_bp\"\nwindow = 2\n"));
  CHECK(bp.chart.kind.family == ChartFamily::AcfBP);
  CHECK(bp.chart.kind.window == 2);

  const RunConfig lagged = build_run_config(parse_config(
      "[chart]\nfamily = \"acf_lagged\"\nlag = [0, 2]\n"));
  CHECK(lagged.chart.kind.lag == SpatialLag{0, 2});

  // The count models default to unit-mean-5 Poisson innovations.
  const RunConfig sinar = build_run_config(parse_config(
      "[dgp]\nmodel = \"sinar\"\nm = 5\nn = 5\ncoef = [0.2, 0.2, 0.1]\n"));
  CHECK(std::get<marg::Poisson>(std::get<dgp::Sinar>(sinar.dgp->model).innovation).mean ==
        5.0);
}

TEST_CASE("run configuration rejects unknown or misplaced keys") {
  CHECK_THROWS_AS(build_run_config(parse_config("[chart]\nfamily = \"tau_tilde\"\nwobble = 1\n")),
                  ConfigError);
  // stencil keys belong to the families that use them
  CHECK_THROWS_AS(
      build_run_config(parse_config("[chart]\nfamily = \"tau_tilde\"\ndelay = [2, 2]\n")),
      ConfigError);
  CHECK_THROWS_AS(build_run_config(parse_config("[chart]\nlambda = 0.1\n")), ConfigError);
  CHECK_THROWS_AS(build_run_config(parse_config("[chart]\nfamily = \"waves\"\n")), ConfigError);
  CHECK_THROWS_AS(build_run_config(parse_config("[chart]\nfamily = 3\n")), ConfigError);
  CHECK_THROWS_AS(build_run_config(parse_config("[dgp]\nm = 10\n")), ConfigError);
  CHECK_THROWS_AS(build_run_config(parse_config("[dgp]\nmodel = \"fog\"\nm = 5\nn = 5\n")),
                  ConfigError);
  CHECK_THROWS_AS(
      build_run_config(parse_config("[dgp]\nmodel = \"sar\"\nm = 5\nn = 5\ncoef = [0.1, 0.1]\n")),
      ConfigError);
  CHECK_THROWS_AS(build_run_config(parse_config(
                      "[dgp]\nmodel = \"iid\"\nm = 5\nn = 5\n[dgp.innovation]\ndist = \"t\"\n")),
                  ConfigError);  // i.i.d. fields take a marginal, not an innovation
  CHECK_THROWS_AS(build_run_config(parse_config(
                      "[dgp]\nmodel = \"iid\"\nm = 5\nn = 5\n[dgp.marginal]\nmu = 0.5\n")),
                  ConfigError);  // dist is required once the table appears
  CHECK_THROWS_AS(build_run_config(parse_config(
                      "[dgp]\nmodel = \"iid\"\nm = 5\nn = 5\n"
                      "[dgp.contamination]\nfraction = 0.1\nmodel = \"fixed_add\"\n")),
                  ConfigError);  // missing shift c
  CHECK_THROWS_AS(build_run_config(parse_config(
                      "[dgp]\nmodel = \"iid\"\nm = 5\nn = 5\n"
                      "[run]\ninput = \"frames.csv\"\n")),
                  ConfigError);  // generator and recorded stream conflict
  CHECK_THROWS_AS(build_run_config(parse_config("[run]\nframes = 0\n")), ConfigError);
  CHECK_THROWS_AS(build_run_config(parse_config("[run]\nframes = 2.5\n")), ConfigError);
  CHECK_THROWS_AS(build_run_config(parse_config("[run]\nnoise_runs = 0\n")), ConfigError);
  CHECK_THROWS_AS(build_run_config(parse_config("[run]\ncap = 0\n")), ConfigError);
  CHECK_THROWS_AS(
      build_run_config(parse_config("[chart]\nfamily = \"tau_tilde_bp\"\nwindow = 2.5\n")),
      ConfigError);
}
