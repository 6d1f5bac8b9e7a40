#include "vgrd/region.hpp"

#include <cmath>

#include "vgrd/errors.hpp"
#include "vgrd/sdc.hpp"

namespace vgrd {

namespace {

// f decreasing, g increasing on (1 - e2, 1 - e3); rho0^m solves f = g
double h_root_fn(double rho0, double e2, const DistortionConstraints& e) {
    const double f = rho0 / (rho0 + e2 - 1.0);
    double g = 1.0;
    for (int i = 2; i < e.n(); ++i) g += rho0 / (1.0 - rho0 - e.sorted(i));
    return f - g;
}

} // namespace

Rho0Bounds rho0_bounds(const DistortionConstraints& e) {
    const int n = e.n();
    if (n < 3) throw InvalidInput("rho0_bounds: need N >= 3");
    const double e2 = e.sorted(1);
    const double e3 = e.sorted(2);
    Rho0Bounds b;
    double sum = 0.0;
    for (int i = 2; i < n; ++i) sum += e.sorted(i);
    b.e3_bar = sum / (n - 2);

    b.c_l = 2.0 * (e2 - e3) / (std::sqrt((1.0 - e3) / (1.0 - e2)) + 1.0);
    b.c_u = e2 - b.e3_bar;
    b.lower_concise = 1.0 - e2 + b.c_l / n;
    b.upper_concise = 1.0 - e2 + b.c_u / (n - 1);

    b.lower_sharp =
        (1.0 - e2) *
        ((n - 2) + std::sqrt(static_cast<double>(n - 2) * (n - 2) +
                             4.0 * (n - 1) * (1.0 - e3) / (1.0 - e2))) /
        (2.0 * (n - 1));
    b.upper_sharp =
        (1.0 - e2) *
        ((n - 3) + std::sqrt(static_cast<double>(n - 3) * (n - 3) +
                             4.0 * (n - 2) * (1.0 - b.e3_bar) / (1.0 - e2))) /
        (2.0 * (n - 2));
    return b;
}

Rho0Result rho0_max(const DistortionConstraints& e) {
    const int n = e.n();
    if (n < 3) throw InvalidInput("rho0_max: need N >= 3");
    const double e2 = e.sorted(1);
    const double e3 = e.sorted(2);

    Rho0Result r;
    r.bounds = rho0_bounds(e);

    if (e2 - e3 <= 1e-12) {
        // largest peripheral constraint not unique: E3 pins rho0^m = 1 - e2
        r.rho0_m = 1.0 - e2;
        r.iterations = 0;
        return r;
    }

    constexpr double kEndOffset = 1e-13;
    double lo = 1.0 - e2 + kEndOffset;
    double hi = 1.0 - e3 - kEndOffset;
    if (h_root_fn(lo, e2, e) <= 0.0) {
        r.rho0_m = lo; // interval too thin to resolve; h > 0 holds in exact arithmetic
        return r;
    }
    // bisect essentially to machine precision so that rho1_max(rho0_m)
    // lands within 1e-6 of zero (the radicand is ~70x as sensitive)
    int it = 0;
    while (hi - lo > 1e-15 && it < 200) {
        const double mid = 0.5 * (lo + hi);
        if (h_root_fn(mid, e2, e) > 0.0)
            lo = mid;
        else
            hi = mid;
        ++it;
    }
    r.rho0_m = 0.5 * (lo + hi);
    r.iterations = it;
    return r;
}

double rho1_max(const DistortionConstraints& e, double rho0) {
    const int n = e.n();
    const double e1 = e.e[0];
    if (n < 2) throw InvalidInput("rho1_max: need N >= 2");
    if (n == 2) {
        // E1 degenerates to (1 - e1)(1 - e2) >= rho1^2
        return std::sqrt((1.0 - e1) * (1.0 - e.e[1]));
    }
    if (!(rho0 >= 0.0)) throw InvalidInput("rho1_max: rho0 must be non-negative");

    double radicand;
    try {
        const double chi2 = chi(2, rho0, e);
        radicand = (1.0 / chi2 + rho0) * (1.0 - e1);
    } catch (const PoleError&) {
        // chi2 -> +-inf at a pole; the 1/chi2 term vanishes in the limit
        radicand = rho0 * (1.0 - e1);
    }
    if (radicand < -1e-12)
        throw InvalidInput("rho1_max: negative radicand, rho0 exceeds rho0_max");
    return std::sqrt(std::max(0.0, radicand));
}

std::vector<std::pair<double, double>> region_boundary(const DistortionConstraints& e,
                                                       int samples) {
    if (samples < 2) throw InvalidInput("region_boundary: need samples >= 2");
    const double rho0_m = rho0_max(e).rho0_m;
    std::vector<std::pair<double, double>> out(static_cast<std::size_t>(samples));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < samples; ++i) {
        const double rho0 = rho0_m * i / (samples - 1);
        out[static_cast<std::size_t>(i)] = {rho0, rho1_max(e, rho0)};
    }
    return out;
}

} // namespace vgrd
