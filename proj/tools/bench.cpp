// Compares the OpenMP kernels against their serial references.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "ca/caisl.hpp"
#include "ca/logic4.hpp"
#include "ca/relalg.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace ca;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

relalg::RelationMatrix random_relation(int n, double density, std::mt19937_64& rng) {
  relalg::RelationMatrix m(n);
  std::bernoulli_distribution bit(density);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (bit(rng)) m.set(i, j);
  return m;
}

template <class F>
double timed(F&& f, int reps = 3) {
  double best = 1e100;
  for (int r = 0; r < reps; ++r) {
    auto t0 = Clock::now();
    f();
    best = std::min(best, ms_since(t0));
  }
  return best;
}

void bench_relalg(int n) {
  std::mt19937_64 rng(7);
  auto r = random_relation(n, 0.02, rng);
  auto s = random_relation(n, 0.02, rng);

  relalg::RelationMatrix out_par, out_ser;
  double par, ser;

  par = timed([&] { out_par = relalg::compose(r, s); });
  ser = timed([&] { out_ser = relalg::reference::compose(r, s); });
  std::printf("compose        n=%-5d omp %8.2f ms   serial %8.2f ms   %s\n", n, par, ser,
              out_par == out_ser ? "match" : "MISMATCH");

  par = timed([&] { out_par = relalg::kleene_star(r); });
  ser = timed([&] { out_ser = relalg::reference::kleene_star(r); });
  std::printf("kleene_star    n=%-5d omp %8.2f ms   serial %8.2f ms   %s\n", n, par, ser,
              out_par == out_ser ? "match" : "MISMATCH");

  par = timed([&] { out_par = relalg::right_residual(r, s); });
  ser = timed([&] { out_ser = relalg::reference::right_residual(r, s); });
  std::printf("right_residual n=%-5d omp %8.2f ms   serial %8.2f ms   %s\n", n, par, ser,
              out_par == out_ser ? "match" : "MISMATCH");

  par = timed([&] { out_par = relalg::left_residual(s, r); });
  ser = timed([&] { out_ser = relalg::reference::left_residual(s, r); });
  std::printf("left_residual  n=%-5d omp %8.2f ms   serial %8.2f ms   %s\n", n, par, ser,
              out_par == out_ser ? "match" : "MISMATCH");
}

void bench_caisl() {
  caisl::Universe u;
  for (const char* a : {"a", "b", "c", "d", "e"}) u.add_attr(a);
  for (const char* c : {"c1", "c2", "c3"}) u.add_cond(c);
  std::vector<caisl::Statement> sigma = {
      {0b00011, 0b001, 0b00100},
      {0b00100, 0b011, 0b11000},
      {0b00001, 0b100, 0b00010},
  };
  caisl::Config cfg;
  cfg.bound = 2'000'000;

  std::vector<caisl::Statement> par_out, ser_out;
  double ser = timed([&] { ser_out = caisl::saturate(sigma, u, cfg).sorted(); }, 2);
  double par = timed([&] { par_out = caisl::saturate_parallel(sigma, u, cfg); }, 2);
  std::printf("caisl_saturate |O|=5   omp %8.2f ms   serial %8.2f ms   %s (%zu statements)\n",
              par, ser, par_out == ser_out ? "match" : "MISMATCH", ser_out.size());
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP on, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP off (serial build)\n");
#endif
  for (int n : {256, 512, 1024}) bench_relalg(n);
  bench_caisl();
  return 0;
}
