// Serial reference kernels against their OpenMP counterparts.

#include <chrono>
#include <cstdio>
#include <functional>

#include <omp.h>

#include "rbm32/arrangement.hpp"
#include "rbm32/sampling.hpp"

using namespace rbm32;

namespace {

double seconds(const std::function<void()>& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, bool agree) {
  std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %5.2fx   %s\n", name, serial, parallel,
              serial / parallel, agree ? "results agree" : "RESULTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  long count = argc > 1 ? std::atol(argv[1]) : 1000000;
  int workers = omp_get_max_threads();
  std::printf("threads: %d, samples: %ld\n", workers, count);

  SamplerConfig cfg{2024, count, workers};
  VolumeEstimate vs, vp;
  double ts = seconds([&] { vs = estimate_volume_serial(Model::M33, cfg); });
  double tp = seconds([&] { vp = estimate_volume(Model::M33, cfg); });
  report("volume estimate (M33)", ts, tp, vs.inside == vp.inside);

  auto tensors = sample_rbm_parametric(cfg);
  long ms = 0, mp = 0;
  ts = seconds([&] { ms = count_members_serial(Model::RBM32, tensors); });
  tp = seconds([&] { mp = count_members(Model::RBM32, tensors, workers); });
  report("membership batch (RBM32)", ts, tp, ms == mp);

  std::vector<SignRegion> rs, rp;
  ts = seconds([&] { rs = census_regions_serial(); });
  tp = seconds([&] { rp = census_regions(workers); });
  CensusCounts cs = count_regions(rs), cp = count_regions(rp);
  report("region census (64 LPs)", ts, tp, cs.feasible == cp.feasible && cs.in_model == cp.in_model);
  return 0;
}
