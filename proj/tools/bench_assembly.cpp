// Times the operator assembly with the OpenMP path against the serial
// reference and checks that both produce identical matrices.
#include <chrono>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "emscat/assembly.hpp"

#include <omp.h>

using namespace emscat;

int main(int argc, char** argv) {
  CLI::App app{"Assembly benchmark: serial reference vs OpenMP"};
  int n = 12;
  int repeat = 3;
  std::string shape = "peanut";
  app.add_option("--n", n, "discretization order");
  app.add_option("--repeat", repeat, "timed repetitions");
  app.add_option("--shape", shape, "sphere | peanut | rounded_tetrahedron");
  CLI11_PARSE(app, argc, argv);

  auto param = make_shape(shape);
  DielectricConfig cfg{pi / 2, pi, 1.0, 2.0};
  int nprime = default_inner_order(n);

  using clock = std::chrono::steady_clock;
  auto time_policy = [&](ExecPolicy policy) {
    double best = 1e100;
    TransmissionBlocks blocks;
    for (int r = 0; r < repeat; ++r) {
      auto t0 = clock::now();
      blocks = assemble_transmission_blocks(*param, cfg, n, nprime, policy);
      best = std::min(best, std::chrono::duration<double>(clock::now() - t0).count());
    }
    return std::pair(best, std::move(blocks));
  };

  std::printf("shape=%s n=%d nprime=%d threads=%d\n", shape.c_str(), n, nprime,
              omp_get_max_threads());
  auto [t_ser, b_ser] = time_policy(ExecPolicy::serial);
  auto [t_par, b_par] = time_policy(ExecPolicy::parallel);
  std::printf("serial   : %8.3f s\n", t_ser);
  std::printf("parallel : %8.3f s   speedup %.2fx\n", t_par, t_ser / t_par);

  auto identical = [](const ZMatrix& a, const ZMatrix& b) {
    for (std::size_t i = 0; i < a.a.size(); ++i)
      if (a.a[i] != b.a[i]) return false;
    return true;
  };
  bool same = identical(b_ser.M_ext.mat, b_par.M_ext.mat) &&
              identical(b_ser.M_int.mat, b_par.M_int.mat) &&
              identical(b_ser.Cdiff.mat, b_par.Cdiff.mat);
  std::printf("matrices bitwise identical: %s\n", same ? "yes" : "NO");
  return same ? 0 : 1;
}
