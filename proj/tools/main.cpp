// Command-line front end. One subcommand per invocation, config-file driven,
// deterministic artifacts: identical config and build produce byte-identical
// CSV/JSON. Errors surface as machine-readable JSON on stdout with a nonzero
// exit status.

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fannowave/config.hpp"
#include "fannowave/io.hpp"

namespace fw = fannowave;

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw fw::UsageError("cannot open output file '" + path + "'");
    return f;
}

struct Setup {
    fw::SimConfig cfg;
    fw::GasModel gas;
    fw::DampingProfile damping;
    fw::SteadyProfile profile;
    fw::BoundarySignals bc;
};

Setup make_setup(const std::string& config_path) {
    Setup s;
    s.cfg = fw::load_config(config_path, &std::cerr);
    s.gas = fw::make_gas(s.cfg);
    s.damping = fw::make_damping(s.cfg);
    s.profile = fw::solve_fanno(s.gas, s.damping, fw::make_inflow(s.cfg), s.cfg.L, s.cfg.n_x);
    s.bc = fw::resolve_boundary(fw::make_boundary(s.cfg), s.profile);
    return s;
}

fw::PeriodicField build_field(const Setup& s, fw::BuildReport* rep = nullptr) {
    return fw::build_periodic(s.profile, s.bc, fw::make_grid(s.cfg), fw::make_build_options(s.cfg),
                              rep);
}

int run(int argc, char** argv) {
    CLI::App app{"time-periodic subsonic duct flow: steady background, periodic orbit builder, "
                 "nonlinear time stepper, stability experiments"};
    app.require_subcommand(1);

    std::string config_path, out_path, report_path;
    double tfinal = 0.0;
    int refine = 1;

    auto add_common = [&](CLI::App* sc, bool with_out) {
        sc->add_option("--config", config_path, "config file (key = value lines)")->required();
        if (with_out) sc->add_option("--out", out_path, "CSV output path");
        sc->add_option("--report", report_path, "JSON report path");
    };

    CLI::App* steady = app.add_subcommand("steady", "solve the steady background profile");
    add_common(steady, true);
    CLI::App* lmax = app.add_subcommand("lmax", "maximal subsonic duct length for the inflow");
    add_common(lmax, false);
    CLI::App* build = app.add_subcommand("build-periodic", "construct the time-periodic solution");
    add_common(build, true);
    CLI::App* simulate = app.add_subcommand("simulate", "replay the periodic orbit through the time stepper");
    add_common(simulate, true);
    simulate->add_option("--tfinal", tfinal, "final time (default 3 P)");
    CLI::App* stability = app.add_subcommand("stability", "bump-perturbation decay experiment");
    add_common(stability, false);
    CLI::App* xvalidate = app.add_subcommand("xvalidate", "builder vs time-domain cross-validation");
    add_common(xvalidate, false);
    xvalidate->add_option("--refine", refine, "also run at this grid refinement factor")
        ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    if (steady->parsed()) {
        const Setup s = make_setup(config_path);
        if (!out_path.empty()) {
            auto f = open_out(out_path);
            fw::write_profile_csv(f, s.profile);
        }
        if (!report_path.empty()) {
            auto f = open_out(report_path);
            fw::write_steady_json(f, s.cfg, s.profile);
        }
        std::cout << "STEADY u_L=" << fw::format_num(s.profile.u[s.profile.n() - 1])
                  << " c_L=" << fw::format_num(s.profile.c[s.profile.n() - 1]) << "\n";
        return 0;
    }

    if (lmax->parsed()) {
        const fw::SimConfig cfg = fw::load_config(config_path, &std::cerr);
        const double lm = fw::max_duct_length(fw::make_gas(cfg), fw::make_damping(cfg),
                                              fw::make_inflow(cfg));
        std::cout << "LMAX=" << (std::isfinite(lm) ? fw::format_num(lm) : "inf") << "\n";
        if (!report_path.empty()) {
            auto f = open_out(report_path);
            fw::write_lmax_json(f, cfg, lm);
        }
        return 0;
    }

    if (build->parsed()) {
        const Setup s = make_setup(config_path);
        fw::BuildReport rep;
        const fw::PeriodicField field = build_field(s, &rep);
        if (!out_path.empty()) {
            auto f = open_out(out_path);
            fw::write_field_csv(f, field);
        }
        if (!report_path.empty()) {
            auto f = open_out(report_path);
            fw::write_build_report_json(f, s.cfg, rep);
        }
        std::cout << "BUILD iterations=" << rep.iterations
                  << " residual=" << fw::format_num(rep.final_residual) << "\n";
        return 0;
    }

    if (simulate->parsed()) {
        const Setup s = make_setup(config_path);
        const fw::PeriodicField field = build_field(s);
        const double t_end = tfinal > 0.0 ? tfinal : 3.0 * s.cfg.P;
        const fw::InitialData init = fw::slice_initial(field, 0.0, s.profile);
        const fw::SimResult res =
            fw::simulate(init, s.profile, s.bc, 0.0, t_end, fw::make_sim_options(s.cfg));
        if (!out_path.empty()) {
            auto f = open_out(out_path);
            fw::write_traj_csv(f, res.traj, s.profile);
        }
        if (!report_path.empty()) {
            auto f = open_out(report_path);
            fw::write_simulate_json(f, s.cfg, res.cert, t_end);
        }
        std::cout << "SIMULATE steps=" << res.cert.steps
                  << " cfl=" << fw::format_num(res.cert.cfl_observed) << "\n";
        return 0;
    }

    if (stability->parsed()) {
        const Setup s = make_setup(config_path);
        const fw::PeriodicField field = build_field(s);
        const fw::StabilityReport rep =
            fw::stability_experiment(s.profile, s.bc, field, fw::make_stability_options(s.cfg));
        if (!report_path.empty()) {
            auto f = open_out(report_path);
            fw::write_stability_json(f, s.cfg, rep);
        }
        std::cout << "STABILITY xi_hat=" << fw::format_num(rep.fit_c0.xi_hat)
                  << " floor=" << fw::format_num(rep.floor_c0) << "\n";
        return 0;
    }

    if (xvalidate->parsed()) {
        const Setup s = make_setup(config_path);
        const fw::PeriodicField field = build_field(s);
        const fw::CrossValidation cv =
            fw::cross_validate(s.profile, field, s.bc, fw::make_sim_options(s.cfg));
        fw::CrossValidation cvr;
        const bool with_refined = refine > 1;
        if (with_refined) {
            Setup r;
            r.cfg = fw::refined(s.cfg, refine);
            r.gas = fw::make_gas(r.cfg);
            r.damping = fw::make_damping(r.cfg);
            r.profile = fw::solve_fanno(r.gas, r.damping, fw::make_inflow(r.cfg), r.cfg.L, r.cfg.n_x);
            r.bc = fw::resolve_boundary(fw::make_boundary(r.cfg), r.profile);
            const fw::PeriodicField rfield = build_field(r);
            cvr = fw::cross_validate(r.profile, rfield, r.bc, fw::make_sim_options(r.cfg));
        }
        if (!report_path.empty()) {
            auto f = open_out(report_path);
            fw::write_xvalidate_json(f, s.cfg, cv, with_refined ? &cvr : nullptr, refine);
        }
        std::cout << "XVALIDATE distance=" << fw::format_num(cv.distance)
                  << " floor=" << fw::format_num(cv.floor) << " pass=" << (cv.pass ? 1 : 0) << "\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const fw::ConfigError& e) {
        fw::write_error_json(std::cout, "ConfigError", e.what());
    } catch (const fw::ChokingError& e) {
        fw::write_error_json(std::cout, "ChokingError", e.what());
    } catch (const fw::InstabilityError& e) {
        fw::write_error_json(std::cout, "InstabilityError", e.what());
    } catch (const fw::ConvergenceError& e) {
        fw::write_error_json(std::cout, "ConvergenceError", e.what());
    } catch (const fw::DomainError& e) {
        fw::write_error_json(std::cout, "DomainError", e.what());
    } catch (const fw::UsageError& e) {
        fw::write_error_json(std::cout, "UsageError", e.what());
    } catch (const std::exception& e) {
        fw::write_error_json(std::cout, "InternalError", e.what());
    }
    return 1;
}
