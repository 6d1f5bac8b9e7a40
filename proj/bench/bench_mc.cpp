// Throughput comparison of the OpenMP Monte Carlo kernels against the serial
// reference implementations, plus plain vs conditional estimator efficiency.

#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
#endif

#include "vgrd/probability.hpp"

namespace {

double now() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

template <typename F>
void run(const char* name, long long trials, F&& f) {
    const double t0 = now();
    const vgrd::McEstimate est = f();
    const double dt = now() - t0;
    std::printf("%-28s p_hat=%.6f  ci=%.2e  %8.3f s  %10.0f trials/s\n", name,
                est.p_hat, est.ci95_half_width, dt, trials / dt);
}

} // namespace

int main(int argc, char** argv) {
    long long trials = 200000;
    if (argc > 1) trials = std::stoll(argv[1]);
    const std::uint64_t seed = 42;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (compiled without OpenMP)\n");
#endif

    for (int n : {6, 16, 24}) {
        std::printf("-- n = %d, rho0 = 0.3, rho1 = 0.45, trials = %lld --\n", n,
                    trials);
        run("plain serial", trials, [&] {
            return vgrd::sdc_probability_mc_serial(n, 0.3, 0.45, trials, seed);
        });
        run("plain OpenMP", trials, [&] {
            return vgrd::sdc_probability_mc(n, 0.3, 0.45, trials, seed);
        });
        run("conditional serial", trials / 10, [&] {
            return vgrd::sdc_probability_cmc_serial(n, 0.3, 0.45, trials / 10, seed);
        });
        run("conditional OpenMP", trials / 10, [&] {
            return vgrd::sdc_probability_cmc(n, 0.3, 0.45, trials / 10, seed);
        });
    }
    return 0;
}
