#include "vgrd/probability.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

#include "vgrd/errors.hpp"
#include "vgrd/rng.hpp"
#include "vgrd/sdc.hpp"

namespace vgrd {

namespace {

// fixed block decomposition: partial results are accumulated per block and
// combined in block order, so the float reduction is independent of the
// thread count and schedule
constexpr long long kBlock = 4096;
constexpr double kSdcTol = 1e-9;

void validate_mc_params(int n, double rho0, double rho1, long long trials) {
    TwoTypeCorrelation{n, rho0, rho1}.validate();
    if (trials < 1) throw InvalidInput("sdc_probability: trials must be >= 1");
}

bool plain_trial(const Matrix& k, std::uint64_t seed, long long t, Matrix& gap,
                 Vector& e) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    const int n = static_cast<int>(k.rows());
    for (int i = 0; i < n; ++i) e[i] = rng.uniform();
    gap = k;
    gap.diagonal() -= e;
    gap.diagonal().array() += kSdcTol;
    return Eigen::LLT<Matrix>(gap).info() == Eigen::Success;
}

template <bool Parallel>
McEstimate run_plain(int n, double rho0, double rho1, long long trials,
                     std::uint64_t seed) {
    validate_mc_params(n, rho0, rho1, trials);
    const Matrix k = build_2tc({n, rho0, rho1});
    const long long nblocks = (trials + kBlock - 1) / kBlock;
    std::vector<long long> hits(static_cast<std::size_t>(nblocks), 0);

#pragma omp parallel for schedule(static) if (Parallel)
    for (long long b = 0; b < nblocks; ++b) {
        Matrix gap(n, n);
        Vector e(n);
        long long h = 0;
        const long long t_end = std::min(trials, (b + 1) * kBlock);
        for (long long t = b * kBlock; t < t_end; ++t)
            if (plain_trial(k, seed, t, gap, e)) ++h;
        hits[static_cast<std::size_t>(b)] = h;
    }

    long long total = 0;
    for (long long h : hits) total += h;

    McEstimate est;
    est.p_hat = static_cast<double>(total) / static_cast<double>(trials);
    est.trials = trials;
    est.ci95_half_width =
        1.96 * std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(trials));
    est.seed = seed;
    est.method = McMethod::plain;
    return est;
}

// -- conditional (Rao-Blackwellized) estimator ------------------------------

struct CmcKernel {
    int n;
    double rho0, rho1;

    // length of the admissible e_1 interval given e_2 and chi_3, in [0, 1]
    double len1(double e2, double chi3) const {
        const double den = 1.0 - rho0 - e2;
        double v;
        if (std::abs(den) < 1e-14) {
            // removable pole of chi_2: chi2/(1 + rho0*chi2) -> 1/rho0
            if (rho0 <= 1e-14) return rho1 > 0.0 ? 0.0 : 1.0;
            v = 1.0 - rho1 * rho1 / rho0;
        } else {
            const double chi2 = chi3 + 1.0 / den;
            const double den2 = 1.0 + chi2 * rho0;
            if (std::abs(den2) < 1e-14) return 0.0; // E2-tight limit, len -> -inf
            v = 1.0 - chi2 * rho1 * rho1 / den2;
        }
        return std::clamp(v, 0.0, 1.0);
    }

    double simpson(double a, double b, double fa, double fm, double fb, double chi3,
                   double whole, int depth) const {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = len1(lm, chi3);
        const double frm = len1(rm, chi3);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if (depth <= 0 || std::abs(left + right - whole) < 1e-11)
            return left + right;
        return simpson(a, m, fa, flm, fm, chi3, left, depth - 1) +
               simpson(m, b, fm, frm, fb, chi3, right, depth - 1);
    }

    double integrate(double a, double b, double chi3) const {
        if (b - a < 1e-300) return 0.0;
        const double fa = len1(a, chi3);
        const double fb = len1(b, chi3);
        const double fm = len1(0.5 * (a + b), chi3);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return simpson(a, b, fa, fm, fb, chi3, whole, 32);
    }

    // conditional contribution of one draw of e_3..e_N
    double trial(std::uint64_t seed, long long t) const {
        CounterRng rng(seed, static_cast<std::uint64_t>(t));
        const int m = n - 2;
        double lo = 0.0;
        double chi3 = 0.0;
        for (int i = 0; i < m; ++i) {
            const double u = rng.uniform();
            if (u > 1.0 - rho0) return 0.0; // E3 must hold for the non-max peripherals
            lo = std::max(lo, u);
            chi3 += 1.0 / (1.0 - rho0 - u);
        }
        double hi = 1.0;
        if (rho0 > 0.0)
            hi = std::min(1.0, 1.0 - chi3 * rho0 * rho0 / (1.0 + chi3 * rho0));
        if (hi <= lo) return 0.0;

        // split at the chi_2 pole and at the inner-bound zero crossing so each
        // Simpson piece is smooth
        double cuts[4];
        int ncuts = 0;
        cuts[ncuts++] = lo;
        const double pole = 1.0 - rho0;
        if (pole > lo && pole < hi) cuts[ncuts++] = pole;
        const double s = rho1 * rho1 - rho0;
        const double den = 1.0 - s * chi3;
        if (std::abs(s) > 1e-15 && std::abs(den) > 1e-15) {
            const double ub_imp = 1.0 - rho0 - s / den;
            if (ub_imp > lo && ub_imp < hi) cuts[ncuts++] = ub_imp;
        }
        cuts[ncuts++] = hi;
        std::sort(cuts, cuts + ncuts);

        double acc = 0.0;
        for (int i = 0; i + 1 < ncuts; ++i)
            acc += integrate(cuts[i], cuts[i + 1], chi3);
        return (n - 1) * acc;
    }
};

template <bool Parallel>
McEstimate run_cmc(int n, double rho0, double rho1, long long trials,
                   std::uint64_t seed) {
    validate_mc_params(n, rho0, rho1, trials);
    if (n < 3) throw InvalidInput("sdc_probability_cmc: need n >= 3");
    const CmcKernel kernel{n, rho0, rho1};
    const long long nblocks = (trials + kBlock - 1) / kBlock;
    std::vector<double> sums(static_cast<std::size_t>(nblocks), 0.0);
    std::vector<double> sq_sums(static_cast<std::size_t>(nblocks), 0.0);

#pragma omp parallel for schedule(static) if (Parallel)
    for (long long b = 0; b < nblocks; ++b) {
        double s = 0.0, s2 = 0.0;
        const long long t_end = std::min(trials, (b + 1) * kBlock);
        for (long long t = b * kBlock; t < t_end; ++t) {
            const double v = kernel.trial(seed, t);
            s += v;
            s2 += v * v;
        }
        sums[static_cast<std::size_t>(b)] = s;
        sq_sums[static_cast<std::size_t>(b)] = s2;
    }

    double sum = 0.0, sq = 0.0;
    for (long long b = 0; b < nblocks; ++b) {
        sum += sums[static_cast<std::size_t>(b)];
        sq += sq_sums[static_cast<std::size_t>(b)];
    }

    McEstimate est;
    est.p_hat = sum / static_cast<double>(trials);
    est.trials = trials;
    const double var =
        std::max(0.0, sq / static_cast<double>(trials) - est.p_hat * est.p_hat);
    est.ci95_half_width = 1.96 * std::sqrt(var / static_cast<double>(trials));
    est.seed = seed;
    est.method = McMethod::conditional;
    est.mixed_sign_regime = rho1 * rho1 < rho0;
    return est;
}

} // namespace

McEstimate sdc_probability_mc(int n, double rho0, double rho1, long long trials,
                              std::uint64_t seed) {
    return run_plain<true>(n, rho0, rho1, trials, seed);
}

McEstimate sdc_probability_mc_serial(int n, double rho0, double rho1,
                                     long long trials, std::uint64_t seed) {
    return run_plain<false>(n, rho0, rho1, trials, seed);
}

McEstimate sdc_probability_cmc(int n, double rho0, double rho1, long long trials,
                               std::uint64_t seed) {
    return run_cmc<true>(n, rho0, rho1, trials, seed);
}

// straight-line reference: one pass in trial order, no block reduction
McEstimate sdc_probability_cmc_serial(int n, double rho0, double rho1,
                                      long long trials, std::uint64_t seed) {
    validate_mc_params(n, rho0, rho1, trials);
    if (n < 3) throw InvalidInput("sdc_probability_cmc: need n >= 3");
    const CmcKernel kernel{n, rho0, rho1};
    double sum = 0.0, sq = 0.0;
    for (long long t = 0; t < trials; ++t) {
        const double v = kernel.trial(seed, t);
        sum += v;
        sq += v * v;
    }
    McEstimate est;
    est.p_hat = sum / static_cast<double>(trials);
    est.trials = trials;
    const double var =
        std::max(0.0, sq / static_cast<double>(trials) - est.p_hat * est.p_hat);
    est.ci95_half_width = 1.96 * std::sqrt(var / static_cast<double>(trials));
    est.seed = seed;
    est.method = McMethod::conditional;
    est.mixed_sign_regime = rho1 * rho1 < rho0;
    return est;
}

DecayFit decay_rate_fit(const std::vector<std::pair<int, double>>& points) {
    if (points.size() < 3)
        throw InvalidInput("decay_rate_fit: need at least 3 points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [n, p] : points) {
        if (!(p > 0.0))
            throw InvalidInput("decay_rate_fit: p_hat must be positive");
        const double x = n;
        const double y = std::log(p);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(points.size());
    const double denom = m * sxx - sx * sx;
    if (std::abs(denom) < 1e-12)
        throw InvalidInput("decay_rate_fit: degenerate abscissae");
    DecayFit f;
    f.slope = (m * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / m;
    return f;
}

Matrix test_channel_sim(const Matrix& k, const Matrix& d_star, long long samples,
                        std::uint64_t seed) {
    const int n = static_cast<int>(k.rows());
    if (d_star.rows() != n || d_star.cols() != n)
        throw InvalidInput("test_channel_sim: dimension mismatch");
    if (samples < 1) throw InvalidInput("test_channel_sim: samples must be >= 1");
    if (Eigen::LLT<Matrix>(d_star).info() != Eigen::Success)
        throw InvalidInput("test_channel_sim: D* must be positive definite");
    const Matrix recon = 0.5 * ((k - d_star) + (k - d_star).transpose());
    const Matrix f_recon = psd_factor(recon, 1e-10); // rejects indefinite input
    const Matrix f_noise = psd_factor(0.5 * (d_star + d_star.transpose()), 1e-10);

    constexpr long long block = 8192;
    const long long nblocks = (samples + block - 1) / block;
    std::vector<Matrix> acc(static_cast<std::size_t>(nblocks));

#pragma omp parallel for schedule(static)
    for (long long b = 0; b < nblocks; ++b) {
        Matrix local = Matrix::Zero(n, n);
        Vector g1(n), g2(n);
        const long long t_end = std::min(samples, (b + 1) * block);
        for (long long t = b * block; t < t_end; ++t) {
            CounterRng rng(seed, static_cast<std::uint64_t>(t));
            for (int i = 0; i < n; ++i) g1[i] = rng.normal();
            for (int i = 0; i < n; ++i) g2[i] = rng.normal();
            const Vector xhat = f_recon * g1;
            const Vector z = f_noise * g2;
            const Vector x = xhat + z;
            const Vector w = x - xhat;
            local.noalias() += w * w.transpose();
        }
        acc[static_cast<std::size_t>(b)] = local;
    }

    Matrix total = Matrix::Zero(n, n);
    for (long long b = 0; b < nblocks; ++b) total += acc[static_cast<std::size_t>(b)];
    total /= static_cast<double>(samples);
    return 0.5 * (total + total.transpose());
}

} // namespace vgrd
