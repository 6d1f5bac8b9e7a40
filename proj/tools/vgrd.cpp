// vgrd: rate-distortion quantities for vector Gaussian sources under
// per-component distortion constraints.
//
// Subcommands: rdf, sdc, rho0m, mc-sdc, figures. Exit codes: 0 success,
// 1 malformed input or I/O failure, 2 solver hit the iteration limit.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vgrd/errors.hpp"
#include "vgrd/figures.hpp"
#include "vgrd/format.hpp"
#include "vgrd/instance.hpp"
#include "vgrd/probability.hpp"
#include "vgrd/rdf.hpp"
#include "vgrd/region.hpp"

namespace {

using namespace vgrd;

struct GlobalFlags {
    bool nats = false;
    std::uint64_t seed = 1;
    double tol = -1.0; // < 0: scale-aware default
    std::string out;
};

double display_rate(double nats, const GlobalFlags& g) {
    return g.nats ? nats : nats_to_bits(nats);
}

const char* rate_key(const GlobalFlags& g) { return g.nats ? "rate_nats" : "rate_bits"; }

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

void print_sdc_report(const Instance& inst, const SdcReport& rep) {
    std::cout << "sdc=" << (rep.satisfied ? "satisfied" : "violated")
              << " active=" << (rep.active ? "yes" : "no");
    switch (rep.route) {
    case SdcRoute::eigen: std::cout << " route=eigen"; break;
    case SdcRoute::scalar_2tc: std::cout << " route=scalar"; break;
    case SdcRoute::scalar_fallback_eigen: std::cout << " route=eigen-fallback"; break;
    }
    if (rep.failed != SdcCondition::none) {
        const char* name = rep.failed == SdcCondition::e3   ? "E3"
                           : rep.failed == SdcCondition::e2 ? "E2"
                                                            : "E1";
        std::cout << " failed_condition=" << name;
    }
    if (rep.route == SdcRoute::scalar_2tc)
        std::cout << " chi2=" << num10(rep.chi2) << " chi3=" << num10(rep.chi3);
    if (rep.inertia_of_gap) {
        std::cout << " inertia=(" << rep.inertia_of_gap->n_plus << ","
                  << rep.inertia_of_gap->n_minus << "," << rep.inertia_of_gap->n_zero
                  << ")";
    }
    if (!inst.e.clamped.empty()) {
        std::cout << " clamped=";
        for (std::size_t i = 0; i < inst.e.clamped.size(); ++i)
            std::cout << (i ? ";" : "") << inst.e.clamped[i];
    }
    std::cout << "\n";
}

int cmd_rdf(const std::string& path, const GlobalFlags& g, const SolverOptions& sopts,
            const std::string& dstar_path) {
    const Instance inst = load_instance(path);
    RdfSolution sol;
    int exit_code = 0;
    try {
        sol = solve_maxdet(inst.k, inst.e, sopts);
    } catch (const MaxIterationsError& err) {
        std::cerr << "warning: solver iteration limit reached, reporting best iterate\n";
        sol = err.best;
        exit_code = 2;
    }

    std::cout << rate_key(g) << "=" << num10(display_rate(sol.rate_nats, g)) << " "
              << (g.nats ? "hadamard_nats=" : "hadamard_bits=")
              << num10(display_rate(sol.hadamard_rate_nats, g))
              << " gap=" << num10(sol.gap_nats)
              << " sdc=" << (sol.sdc.satisfied ? "satisfied" : "violated")
              << " fast_path=" << (sol.fast_path ? "yes" : "no") << "\n";
    std::cout << "kkt stationarity=" << num10(sol.kkt.stationarity_residual)
              << " slack1=" << num10(sol.kkt.slack1_residual)
              << " slack2=" << num10(sol.kkt.slack2_residual) << "\n";
    std::cout << "recon_rank=" << sol.recon.recon_rank
              << " bound_active=" << sol.recon.bound_active
              << " bound_inertia=" << sol.recon.bound_inertia
              << " det_gap=" << num10(sol.recon.det_gap)
              << " thm1_ok=" << (sol.recon.det_dichotomy_ok ? "yes" : "no")
              << " thm2_ok=" << (sol.recon.rank_bound_ok ? "yes" : "no") << "\n";

    if (!dstar_path.empty()) {
        auto out = open_out(dstar_path);
        const int n = static_cast<int>(sol.d_star.rows());
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j)
                out << (j ? "," : "") << num10(sol.d_star(i, j));
            out << "\n";
        }
    }
    return exit_code;
}

int cmd_sdc(const std::string& path, const GlobalFlags& g) {
    const Instance inst = load_instance(path);
    SdcReport rep;
    if (inst.tc && inst.tc->n >= 3) {
        rep = g.tol > 0.0 ? sdc_2tc(*inst.tc, inst.e, g.tol) : sdc_2tc(*inst.tc, inst.e);
        // spectral cross-check is what fills the inertia on the scalar route
        if (!rep.inertia_of_gap) {
            Matrix gap = inst.k;
            gap.diagonal() -= inst.e.e;
            rep.inertia_of_gap = inertia(gap);
        }
    } else {
        rep = g.tol > 0.0 ? sdc_eigen(inst.k, inst.e, g.tol) : sdc_eigen(inst.k, inst.e);
    }
    print_sdc_report(inst, rep);
    return 0;
}

int cmd_rho0m(const std::string& path, const GlobalFlags& g) {
    const Instance inst = load_instance(path);
    const Rho0Result r = rho0_max(inst.e);
    const Rho0Bounds& b = r.bounds;

    std::string csv = "n,e2,e3bar,rho0m,lower_concise,lower_sharp,upper_concise\n";
    csv += std::to_string(inst.e.n()) + "," + num10(inst.e.sorted(1)) + "," +
           num10(b.e3_bar) + "," + num10(r.rho0_m) + "," + num10(b.lower_concise) +
           "," + num10(b.lower_sharp) + "," + num10(b.upper_concise) + "\n";
    if (!g.out.empty()) {
        auto out = open_out(g.out);
        out << csv;
    }
    std::cout << csv;
    std::cout << "rho1m_at_0=" << num10(rho1_max(inst.e, 0.0))
              << " rho1m_at_rho0m=" << num10(rho1_max(inst.e, r.rho0_m))
              << " iterations=" << r.iterations << "\n";
    return 0;
}

int cmd_mc_sdc(const std::vector<int>& n_list, double rho0, double rho1,
               long long trials, const std::string& method, const GlobalFlags& g) {
    std::string csv = "n,p_hat,ci,method\n";
    std::vector<std::pair<int, double>> points;
    for (int n : n_list) {
        McEstimate est;
        if (method == "cmc")
            est = sdc_probability_cmc(n, rho0, rho1, trials, g.seed);
        else
            est = sdc_probability_mc(n, rho0, rho1, trials, g.seed);
        csv += std::to_string(n) + "," + num10(est.p_hat) + "," +
               num10(est.ci95_half_width) + "," + method + "\n";
        if (est.p_hat > 0.0) points.emplace_back(n, est.p_hat);
        if (est.mixed_sign_regime)
            std::cerr << "note: n=" << n
                      << " runs in the rho1^2 < rho0 regime; the conditional "
                         "integrand was clipped to its admissible interval\n";
    }
    if (!g.out.empty()) {
        auto out = open_out(g.out);
        out << csv;
    }
    std::cout << csv;
    if (points.size() >= 3) {
        const DecayFit fit = decay_rate_fit(points);
        std::cout << "fit: slope=" << num10(fit.slope)
                  << " intercept=" << num10(fit.intercept)
                  << " theory_slope=" << num10(std::log(1.0 - rho0)) << "\n";
    }
    return 0;
}

int cmd_figures(int which, const FigureOptions& fopts) {
    std::string csv;
    switch (which) {
    case 1: csv = write_figure1(fopts); break;
    case 2: csv = write_figure2(fopts); break;
    case 3: csv = write_figure3(fopts); break;
    default: throw InvalidInput("figures: which must be 1, 2 or 3");
    }
    std::cout << "wrote " << csv << " and the matching .svg\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rate-distortion quantities for vector Gaussian sources under "
                 "individual distortion constraints"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    GlobalFlags g;
    app.add_flag("--nats", g.nats, "report rates in nats (default: bits)");
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--tol", g.tol, "semidefinite boundary tolerance");
    app.add_option("--out", g.out, "output file for CSV-producing commands");

    // rdf
    auto* rdf_cmd = app.add_subcommand("rdf", "solve the Max-Det program for an instance");
    std::string rdf_instance, dstar_path;
    SolverOptions sopts;
    rdf_cmd->add_option("instance", rdf_instance, "instance JSON file")->required();
    rdf_cmd->add_option("--dstar", dstar_path, "write the optimal D* as CSV");
    rdf_cmd->add_option("--mu0", sopts.mu0, "initial barrier weight");
    rdf_cmd->add_option("--mu-factor", sopts.mu_factor, "barrier reduction factor");
    rdf_cmd->add_option("--kkt-tol", sopts.kkt_tol, "KKT residual tolerance");
    rdf_cmd->add_option("--max-newton", sopts.max_newton, "Newton iterations per stage");

    // sdc
    auto* sdc_cmd = app.add_subcommand("sdc", "check the semidefinite condition");
    std::string sdc_instance;
    sdc_cmd->add_option("instance", sdc_instance, "instance JSON file")->required();

    // rho0m
    auto* rho_cmd = app.add_subcommand("rho0m", "maximum peripheral correlation and bounds");
    std::string rho_instance;
    rho_cmd->add_option("instance", rho_instance, "instance JSON file (e is used)")
        ->required();

    // mc-sdc
    auto* mc_cmd = app.add_subcommand("mc-sdc", "Monte Carlo SDC probability sweep");
    std::vector<int> n_list;
    double mc_rho0 = 0.3, mc_rho1 = 0.45;
    long long mc_trials = 100000;
    std::string mc_method = "plain";
    mc_cmd->add_option("--n-list", n_list, "source lengths")->required()->delimiter(',');
    mc_cmd->add_option("--rho0", mc_rho0, "peripheral correlation");
    mc_cmd->add_option("--rho1", mc_rho1, "central correlation");
    mc_cmd->add_option("--trials", mc_trials, "Monte Carlo trials per n");
    mc_cmd->add_option("--method", mc_method, "plain or cmc")
        ->check(CLI::IsMember({"plain", "cmc"}));

    // figures
    auto* fig_cmd = app.add_subcommand("figures", "reproduce a figure as CSV + SVG");
    int fig_which = 1;
    FigureOptions fopts;
    fig_cmd->add_option("which", fig_which, "figure number (1, 2 or 3)")->required();
    fig_cmd->add_option("--outdir", fopts.outdir, "output directory");
    fig_cmd->add_option("--trials", fopts.fig2_trials, "trials per point (figure 2)");
    fig_cmd->add_option("--draws", fopts.fig3_draws, "constraint draws per N (figure 3)");

    CLI11_PARSE(app, argc, argv);

    try {
        fopts.seed = g.seed;
        if (rdf_cmd->parsed()) {
            if (g.tol > 0.0) sopts.sdc_tol = g.tol;
            return cmd_rdf(rdf_instance, g, sopts, dstar_path);
        }
        if (sdc_cmd->parsed()) return cmd_sdc(sdc_instance, g);
        if (rho_cmd->parsed()) return cmd_rho0m(rho_instance, g);
        if (mc_cmd->parsed())
            return cmd_mc_sdc(n_list, mc_rho0, mc_rho1, mc_trials, mc_method, g);
        if (fig_cmd->parsed()) return cmd_figures(fig_which, fopts);
    } catch (const MaxIterationsError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
