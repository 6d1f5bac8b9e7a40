#ifndef VGRD_FIGURES_HPP
#define VGRD_FIGURES_HPP

#include <cstdint>
#include <string>

namespace vgrd {

struct FigureOptions {
    std::string outdir = ".";
    std::uint64_t seed = 1;
    long long fig2_trials = 1000000; // Monte Carlo trials per (rho0, N) point
    int fig3_draws = 10000;          // random constraint draws per N
};

// fig1: average rate per component vs N, isotropic rho in {0, 0.2, 0.4, 0.6},
// identical constraints e = 0.25; exact value and large-N asymptote.
// Writes fig1.csv + fig1.svg, returns the CSV path.
std::string write_figure1(const FigureOptions& opts);

// fig2: SDC probability vs N at rho1 = 0.45 for several rho0, with 95% CIs.
std::string write_figure2(const FigureOptions& opts);

// fig3: rho0_max vs N at fixed e2 = 0.1 with e_3..e_N resampled per draw;
// emits the mean, 10%/90% quantiles and the Theorem-5 bounds.
std::string write_figure3(const FigureOptions& opts);

} // namespace vgrd

#endif // VGRD_FIGURES_HPP
