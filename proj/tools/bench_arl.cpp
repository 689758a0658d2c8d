// Times the threaded ARL estimator against the single-threaded reference on
// the same workload and verifies the two produce bit-identical results.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>

#include "sopmon/calibration.hpp"

using namespace sopmon;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t replications = 2000;
  int workers = 0;
  if (argc > 1) replications = std::strtoull(argv[1], nullptr, 10);
  if (argc > 2) workers = std::atoi(argv[2]);

  ChartConfig chart;
  chart.kind = ChartKind::tau_tilde();
  chart.lambda = 0.1;
  chart.limit = 0.03174;

  DgpSpec dgp;
  dgp.model = dgp::Iid{marg::Normal{}};
  dgp.m = 10;
  dgp.n = 10;

  RunSettings settings;
  settings.cap = 5000;
  const std::uint64_t seed = 20240815;

  std::cout << "workload: tau-tilde EWMA (lambda 0.1, limit " << chart.limit
            << ") on 11x11 i.i.d. N(0,1) frames, " << replications << " replications\n";

  auto t0 = std::chrono::steady_clock::now();
  const ArlEstimate serial = estimate_arl_serial(chart, dgp, replications, seed, settings);
  const double serial_s = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const ArlEstimate parallel = estimate_arl(chart, dgp, replications, seed, settings, workers);
  const double parallel_s = seconds_since(t0);

  std::cout << "serial   : " << serial_s << " s, ARL " << serial.mean << " +/- "
            << serial.stderr_ << '\n';
  std::cout << "parallel : " << parallel_s << " s, ARL " << parallel.mean << " +/- "
            << parallel.stderr_ << '\n';
  std::cout << "speedup  : " << serial_s / parallel_s << "x\n";

  const bool same = serial.mean == parallel.mean && serial.stderr_ == parallel.stderr_ &&
                    serial.cap_hits == parallel.cap_hits;
  std::cout << (same ? "results identical\n" : "RESULTS DIFFER\n");
  return same ? 0 : 1;
}
