// Command-line front end: one subcommand per experiment, flat key=value
// config file, deterministic seeding, JSON-lines + CSV reports.
//
// Exit codes: 0 success, 2 hypothesis-violation parameter errors,
// 3 estimation or simulation failures, 64 usage errors.

#include <cstdio>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "glsim/harness.hpp"

int main(int argc, char** argv) {
    glsim::ExperimentSpec spec;

    CLI::App app{
        "glsim: spectral simulator and statistical probes for a stochastic "
        "Ginzburg-Landau equation on the torus driven by heavy-tailed stable noise"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key = value config file (CLI flags win)");

    app.add_option("--seed", spec.master_seed, "master seed; all streams derive from it");
    app.add_option("--out", spec.out_path, "report path (verify-all: report directory)");
    app.add_option("--workers", spec.workers, "worker thread count")
        ->envname("GLSIM_WORKERS")
        ->check(CLI::PositiveNumber);

    app.add_option("--K", spec.cfg.K, "retained Fourier modes per trig family");
    app.add_option("--dt", spec.cfg.dt, "time step");
    app.add_option("--T", spec.cfg.T, "horizon (simulate, moment-probe)");
    app.add_option("--alpha", spec.cfg.alpha, "stable index in (1, 2]");
    app.add_option("--beta", spec.cfg.beta, "spectral decay exponent of the noise");
    app.add_option("--delta", spec.cfg.delta, "recorded Sobolev exponent in (0, 1/2)");
    app.add_option("--p", spec.cfg.p, "moment order in (0, alpha/4)");
    app.add_option("--record-stride", spec.cfg.record_stride, "record every N steps");
    app.add_option("--noise-scale", spec.cfg.noise_scale, "multiplies all noise kicks; 0 = off");

    app.add_option("--noise-n", spec.noise_n, "noise-test: draws per alpha");
    app.add_option("--noise-alphas", spec.noise_alphas, "noise-test: alpha grid")
        ->delimiter(',');
    app.add_option("--cf-points", spec.cf_points, "noise-test: characteristic-function points")
        ->delimiter(',');

    app.add_option("--theta", spec.theta, "ou-probe: fractional exponent of the sup norm");
    app.add_option("--probe-p", spec.probe_p, "ou-probe: moment order in (0, alpha)");
    app.add_option("--probe-horizons", spec.probe_horizons, "ou-probe: horizon grid")
        ->delimiter(',');
    app.add_option("--probe-n", spec.probe_n_traj, "ou-probe: trajectories");
    app.add_option("--probe-h", spec.probe_h, "ou-probe: observation grid step");

    app.add_option("--M-grid", spec.m_grid, "recurrence: ball radii, increasing")->delimiter(',');
    app.add_option("--lambda-grid", spec.lambda_grid, "recurrence: exponential rates")
        ->delimiter(',');
    app.add_option("--horizon", spec.horizon_n, "recurrence: censoring horizon (integer times)");
    app.add_option("--recurrence-n", spec.recurrence_n_traj, "recurrence: trajectories");
    app.add_option("--calibration-n", spec.calibration_n_traj,
                   "recurrence: trajectories behind the threshold calibration");

    app.add_option("--start-norms", spec.start_norms, "occupation: initial H norms")
        ->delimiter(',');
    app.add_option("--functional", spec.functional,
                   "occupation/ldp-probe: one, norm_h, norm_h_delta, exp_neg_h2, tanh_h2");
    app.add_option("--occupation-T", spec.occupation_t, "occupation: averaging horizon");

    app.add_option("--initial-norms", spec.initial_norms, "moment-probe: initial H norms")
        ->delimiter(',');
    app.add_option("--moment-n", spec.moment_n_traj, "moment-probe: trajectories per norm");

    app.add_option("--ldp-horizons", spec.ldp_horizons, "ldp-probe: averaging horizons")
        ->delimiter(',');
    app.add_option("--ldp-n", spec.ldp_n_traj, "ldp-probe: trajectories");
    app.add_option("--level", spec.level_r,
                   "ldp-probe: deviation level r (default: q90 of unit windows minus pi_hat)");
    app.add_option("--pi-T", spec.pi_t, "ldp-probe: long-run horizon behind pi_hat");
    app.add_option("--burn-fraction", spec.burn_fraction, "ldp-probe: burn-in fraction");

    app.add_option("--x0-norm", spec.x0_norm, "simulate: H norm of the random initial state");
    app.add_option("--scale", spec.scale, "verify-all: multiplies sample counts");

    for (const char* name : {"noise-test", "ou-probe", "simulate", "riccati-verify", "recurrence",
                             "occupation", "moment-probe", "ldp-probe", "verify-all"}) {
        app.add_subcommand(name)->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : glsim::kExitUsage;
    }
    spec.name = app.get_subcommands().front()->get_name();

    try {
        if (spec.name == "verify-all") {
            if (spec.out_path.empty()) throw glsim::usage_error("missing output directory (--out)");
            glsim::AcceptanceOptions opts;
            opts.master_seed = spec.master_seed;
            opts.workers = spec.workers;
            opts.scale = spec.scale;
            opts.out_dir = spec.out_path;
            bool all_pass = true;
            for (const glsim::CriterionResult& c : glsim::run_acceptance(opts)) {
                std::printf("criterion %2d %-30s %s  %s  (%.1f s)\n", c.id, c.name.c_str(),
                            c.pass ? "PASS" : "FAIL", c.detail.c_str(), c.seconds);
                std::fflush(stdout);
                all_pass = all_pass && c.pass;
            }
            return all_pass ? glsim::kExitOk : glsim::kExitEstimation;
        }
        return glsim::run_experiment(spec);
    } catch (const glsim::usage_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return glsim::kExitUsage;
    } catch (const glsim::hypothesis_error& e) {
        std::fprintf(stderr, "hypothesis violation: %s\n", e.what());
        return glsim::kExitHypothesis;
    } catch (const glsim::estimation_error& e) {
        std::fprintf(stderr, "estimation failure: %s\n", e.what());
        return glsim::kExitEstimation;
    } catch (const glsim::TrajectoryAbort& e) {
        std::fprintf(stderr, "trajectory abort at t = %g: %s\n", e.time, e.what());
        return glsim::kExitEstimation;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "parameter error: %s\n", e.what());
        return glsim::kExitHypothesis;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return glsim::kExitEstimation;
    }
}
