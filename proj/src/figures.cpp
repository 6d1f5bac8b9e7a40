#include "vgrd/figures.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "vgrd/format.hpp"
#include "vgrd/probability.hpp"
#include "vgrd/rdf.hpp"
#include "vgrd/region.hpp"
#include "vgrd/rng.hpp"
#include "vgrd/svg.hpp"

namespace vgrd {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

} // namespace

std::string write_figure1(const FigureOptions& opts) {
    const double e_val = 0.25;
    const std::vector<double> rhos{0.0, 0.2, 0.4, 0.6};
    std::vector<int> ns;
    for (int n = 2; n <= 200; n += 2) ns.push_back(n);

    const std::string csv_path = opts.outdir + "/fig1.csv";
    auto out = open_out(csv_path);
    out << "n,rho,rbar_exact_bits,rbar_asymptote_bits\n";

    LinePlot plot("Average rate per component, e = 0.25", "source length N",
                  "rate (bits/component)");
    for (double rho : rhos) {
        std::vector<double> xs, exact, asym;
        for (int n : ns) {
            const auto e = DistortionConstraints::from_vector(
                Vector::Constant(n, e_val));
            const AvgRate r = avg_rate_per_component(n, rho, e);
            out << n << ',' << num10(rho) << ',' << num10(nats_to_bits(r.exact))
                << ',' << num10(nats_to_bits(r.leading_term)) << '\n';
            xs.push_back(n);
            exact.push_back(nats_to_bits(r.exact));
            asym.push_back(nats_to_bits(r.leading_term));
        }
        plot.add_series("rho = " + num10(rho), xs, exact);
        plot.add_series("asymptote rho = " + num10(rho), xs, asym);
    }
    plot.write(opts.outdir + "/fig1.svg");
    return csv_path;
}

std::string write_figure2(const FigureOptions& opts) {
    const double rho1 = 0.45;
    const std::vector<double> rho0s{0.1, 0.3, 0.5};
    std::vector<int> ns;
    for (int n = 2; n <= 24; n += 2) ns.push_back(n);

    const std::string csv_path = opts.outdir + "/fig2.csv";
    auto out = open_out(csv_path);
    out << "n,rho0,rho1,p_hat,ci95,trials,method\n";

    LinePlot plot("SDC probability, rho1 = 0.45, e_i ~ U[0,1]", "source length N",
                  "P(SDC)");
    plot.set_log_y(true);
    for (std::size_t c = 0; c < rho0s.size(); ++c) {
        std::vector<double> xs, ps;
        for (int n : ns) {
            // decorrelated per-point stream
            const std::uint64_t point_seed =
                mix64(opts.seed ^ mix64((static_cast<std::uint64_t>(c) << 32) |
                                        static_cast<std::uint64_t>(n)));
            const McEstimate est =
                sdc_probability_mc(n, rho0s[c], rho1, opts.fig2_trials, point_seed);
            out << n << ',' << num10(rho0s[c]) << ',' << num10(rho1) << ','
                << num10(est.p_hat) << ',' << num10(est.ci95_half_width) << ','
                << est.trials << ",plain\n";
            xs.push_back(n);
            ps.push_back(est.p_hat);
        }
        plot.add_series("rho0 = " + num10(rho0s[c]), xs, ps);
    }
    plot.write(opts.outdir + "/fig2.svg");
    return csv_path;
}

std::string write_figure3(const FigureOptions& opts) {
    const double e2 = 0.1;
    const std::vector<int> ns{3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 100};
    const int draws = opts.fig3_draws;

    const std::string csv_path = opts.outdir + "/fig3.csv";
    auto out = open_out(csv_path);
    out << "n,e2,e3bar_mean,rho0m_mean,rho0m_q10,rho0m_q90,lower_concise_mean,"
           "lower_sharp_mean,upper_concise_mean,upper_sharp_mean,cl_mean,cu_mean\n";

    LinePlot plot("Max peripheral correlation, e2 = 0.1", "source length N",
                  "rho0_max");
    std::vector<double> xs, mean_curve, lo_curve, hi_curve;

    for (int n : ns) {
        std::vector<double> roots(static_cast<std::size_t>(draws));
        double e3bar = 0.0, lc = 0.0, ls = 0.0, uc = 0.0, us = 0.0, cl = 0.0, cu = 0.0;

#pragma omp parallel for schedule(static) reduction(+ : e3bar, lc, ls, uc, us, cl, cu)
        for (int d = 0; d < draws; ++d) {
            CounterRng rng(opts.seed,
                           (static_cast<std::uint64_t>(n) << 32) |
                               static_cast<std::uint64_t>(d));
            Vector e(n);
            e[0] = 0.5; // central constraint, irrelevant to rho0_max
            e[1] = e2;
            for (int i = 2; i < n; ++i)
                e[i] = e2 * (1e-12 + (1.0 - 1e-12) * rng.uniform());
            const auto dc = DistortionConstraints::from_vector(e);
            const Rho0Result r = rho0_max(dc);
            roots[static_cast<std::size_t>(d)] = r.rho0_m;
            e3bar += r.bounds.e3_bar;
            lc += r.bounds.lower_concise;
            ls += r.bounds.lower_sharp;
            uc += r.bounds.upper_concise;
            us += r.bounds.upper_sharp;
            cl += r.bounds.c_l;
            cu += r.bounds.c_u;
        }

        std::sort(roots.begin(), roots.end());
        const double inv = 1.0 / draws;
        const double mean =
            std::accumulate(roots.begin(), roots.end(), 0.0) * inv;
        const double q10 = roots[static_cast<std::size_t>(0.10 * (draws - 1))];
        const double q90 = roots[static_cast<std::size_t>(0.90 * (draws - 1))];

        out << n << ',' << num10(e2) << ',' << num10(e3bar * inv) << ','
            << num10(mean) << ',' << num10(q10) << ',' << num10(q90) << ','
            << num10(lc * inv) << ',' << num10(ls * inv) << ',' << num10(uc * inv)
            << ',' << num10(us * inv) << ',' << num10(cl * inv) << ','
            << num10(cu * inv) << '\n';

        xs.push_back(n);
        mean_curve.push_back(mean);
        lo_curve.push_back(lc * inv);
        hi_curve.push_back(uc * inv);
    }

    plot.add_series("rho0_max (mean)", xs, mean_curve);
    plot.add_series("concise lower bound", xs, lo_curve);
    plot.add_series("concise upper bound", xs, hi_curve);
    plot.write(opts.outdir + "/fig3.svg");
    return csv_path;
}

} // namespace vgrd
