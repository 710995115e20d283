// Stress run: full extreme-ray enumeration for the 2^6 table. Expected
// count 707264; takes a while and plenty of memory, so it lives outside
// the test suite. Run manually: ./stress_d6
#include <chrono>
#include <cstdio>

#include "unimargin/polytope.hpp"

int main() {
  using clock = std::chrono::steady_clock;
  unimargin::Shape shape{2, 2, 2, 2, 2, 2};
  auto t0 = clock::now();
  auto rays = unimargin::extreme_pmfs(shape);
  auto dt = std::chrono::duration<double>(clock::now() - t0).count();
  std::printf("2^6 extreme pmfs: %zu (%.1f s)\n", rays.size(), dt);
  bool ok = rays.size() == 707264;
  std::printf("%s\n", ok ? "PASS expected 707264" : "FAIL expected 707264");
  return ok ? 0 : 1;
}
