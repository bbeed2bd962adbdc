// Benchmark: serial vs OpenMP enumeration of the idx 0 / -2 classifications.
#include <chrono>
#include <cstdio>

#include "spectra/enumerate.hpp"

using namespace spectra;

namespace {

double run(long long idx, const SearchBounds& b, bool parallel, size_t* n_types) {
  auto t0 = std::chrono::steady_clock::now();
  auto res = enumerate_fundamental(idx, b, parallel);
  auto t1 = std::chrono::steady_clock::now();
  *n_types = res.types.size();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
  SearchBounds bounds;
  std::printf("%-8s %-10s %-10s %-10s %-8s\n", "idx", "serial_s", "omp_s", "speedup", "types");
  for (long long idx : {0LL, -2LL}) {
    size_t n_serial = 0, n_par = 0;
    double ts = run(idx, bounds, false, &n_serial);
    double tp = run(idx, bounds, true, &n_par);
    if (n_serial != n_par) {
      std::printf("MISMATCH at idx %lld: serial %zu vs parallel %zu types\n", idx, n_serial, n_par);
      return 1;
    }
    std::printf("%-8lld %-10.3f %-10.3f %-10.2f %-8zu\n", idx, ts, tp, ts / tp, n_serial);
  }
  return 0;
}
