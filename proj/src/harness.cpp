#include "glsim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "glsim/parallel.hpp"

namespace glsim {

namespace {

std::string fmtg(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.5g", v);
    return buf;
}

SpectralField add_fields(const SpectralField& y, const SpectralField& z) {
    SpectralField x = y;
    for (int k = 0; k < x.K(); ++k) {
        x.a[k] += z.a[k];
        x.b[k] += z.b[k];
    }
    return x;
}

// Direction stream ids inside a cell; trajectory ids count from 0.
constexpr std::uint32_t kDirectionStream = 0xFFFFFFFFu;

// Stream cell layout (documented in docs/FORMATS.md).
constexpr std::uint32_t kCellSimulate = 0;
constexpr std::uint32_t kCellNoise = 1;
constexpr std::uint32_t kCellOuProbe = 2;
constexpr std::uint32_t kCellRecurrence = 3;
constexpr std::uint32_t kCellOccupation = 4;   // + start index
constexpr std::uint32_t kCellComparisonZero = 6;
constexpr std::uint32_t kCellComparisonNoisy = 7;
constexpr std::uint32_t kCellMoment = 8;       // + initial-norm index
constexpr std::uint32_t kCellYBound = 13;      // shared noise family
constexpr std::uint32_t kCellCalibration = 14; // + norm index (recurrence c_hat)
constexpr std::uint32_t kCellLdpPi = 16;
constexpr std::uint32_t kCellLdpProbe = 17;

}  // namespace

void require_admissible(const SimConfig& cfg) {
    cfg.validate();
    if (!(cfg.alpha > 1.5) || !(cfg.alpha < 2.0)) {
        throw hypothesis_error("alpha = " + fmtg(cfg.alpha) + " violates alpha in (3/2, 2)");
    }
    const double lo = 0.5 + 0.5 / cfg.alpha;
    const double hi = 1.5 - 1.0 / cfg.alpha;
    if (!(cfg.beta > lo)) {
        throw hypothesis_error("beta = " + fmtg(cfg.beta) +
                               " violates 1/2 + 1/(2 alpha) = " + fmtg(lo) + " < beta (alpha = " +
                               fmtg(cfg.alpha) + ")");
    }
    if (!(cfg.beta < hi)) {
        throw hypothesis_error("beta = " + fmtg(cfg.beta) + " violates beta < 3/2 - 1/alpha = " +
                               fmtg(hi) + " (alpha = " + fmtg(cfg.alpha) + ")");
    }
}

NamedFunctional functional_by_name(const std::string& name, const SimConfig& cfg) {
    const double inf = std::numeric_limits<double>::infinity();
    if (name == "one") {
        return {name, [](const SpectralField&) { return 1.0; }, 1.0};
    }
    if (name == "norm_h") {
        return {name, [](const SpectralField& x) { return norm_h(x); }, inf};
    }
    if (name == "norm_h_delta") {
        const double d = cfg.delta;
        return {name, [d](const SpectralField& x) { return norm_sobolev(x, d); }, inf};
    }
    if (name == "exp_neg_h2") {
        return {name,
                [](const SpectralField& x) {
                    const double h = norm_h(x);
                    return std::exp(-h * h);
                },
                1.0};
    }
    if (name == "tanh_h2") {
        return {name,
                [](const SpectralField& x) {
                    const double h = norm_h(x);
                    return std::tanh(h * h);
                },
                1.0};
    }
    throw usage_error("unknown functional '" + name +
                      "' (known: one, norm_h, norm_h_delta, exp_neg_h2, tanh_h2)");
}

// --- drivers ---

NoiseTestReport noise_test(const ExperimentSpec& spec) {
    if (spec.noise_n < 2) throw usage_error("noise-test: need at least 2 draws");
    if (spec.noise_alphas.empty()) throw usage_error("noise-test: empty alpha grid");
    NoiseTestReport rep;
    rep.n = spec.noise_n;
    for (std::size_t ai = 0; ai < spec.noise_alphas.size(); ++ai) {
        const double alpha = spec.noise_alphas[ai];
        RngStream rng(spec.master_seed, stream_index_for(kCellNoise, static_cast<std::uint32_t>(ai)));
        std::vector<double> sum(spec.cf_points.size(), 0.0), sumsq(spec.cf_points.size(), 0.0);
        double var_sum = 0.0, var_sumsq = 0.0;
        for (std::size_t i = 0; i < spec.noise_n; ++i) {
            const double s = sample_standard_stable(alpha, rng);
            for (std::size_t t = 0; t < spec.cf_points.size(); ++t) {
                const double c = std::cos(spec.cf_points[t] * s);
                sum[t] += c;
                sumsq[t] += c * c;
            }
            var_sum += s;
            var_sumsq += s * s;
        }
        const double n = static_cast<double>(spec.noise_n);
        for (std::size_t t = 0; t < spec.cf_points.size(); ++t) {
            NoiseTestReport::EcfCell cell;
            cell.alpha = alpha;
            cell.t = spec.cf_points[t];
            cell.ecf = sum[t] / n;
            cell.target = std::exp(-std::pow(cell.t, alpha));
            cell.abs_err = std::abs(cell.ecf - cell.target);
            cell.se = std::sqrt(std::max(0.0, sumsq[t] / n - cell.ecf * cell.ecf) / n);
            cell.n = spec.noise_n;
            rep.max_abs_err = std::max(rep.max_abs_err, cell.abs_err);
            rep.cells.push_back(cell);
        }
        if (alpha == 2.0) {
            rep.has_gaussian = true;
            const double mean = var_sum / n;
            rep.gaussian_variance = var_sumsq / n - mean * mean;
        }
    }
    return rep;
}

MomentProbeResult ou_probe(const ExperimentSpec& spec) {
    require_admissible(spec.cfg);
    const SimConfig& cfg = spec.cfg;
    const double theta_max = cfg.beta - 1.0 / (2.0 * cfg.alpha);
    if (!(spec.theta >= 0.0) || !(spec.theta < theta_max)) {
        throw hypothesis_error("theta = " + fmtg(spec.theta) +
                               " violates 0 <= theta < beta - 1/(2 alpha) = " + fmtg(theta_max));
    }
    if (!(spec.probe_p > 0.0) || !(spec.probe_p < cfg.alpha)) {
        throw hypothesis_error("p = " + fmtg(spec.probe_p) + " violates 0 < p < alpha = " +
                               fmtg(cfg.alpha));
    }
    if (spec.probe_horizons.empty()) throw usage_error("ou-probe: empty horizon grid");
    return maximal_moment_probe(cfg.spectrum(), spec.theta, spec.probe_p, spec.probe_horizons,
                                spec.probe_n_traj, spec.probe_h, spec.master_seed, kCellOuProbe);
}

RiccatiVerifyReport riccati_verify(const ExperimentSpec& spec) {
    (void)spec;
    RiccatiVerifyReport rep;
    const std::vector<double> g0s = {0.0, 0.5, 1.0, 2.0, 10.0};
    const std::vector<double> kcs = {1.0, 2.0, 5.0};
    const double h = 1e-4, t_max = 2.0;
    const int n = static_cast<int>(std::lround(t_max / h));
    std::vector<double> grid(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) grid[i] = h * i;
    for (double g0 : g0s) {
        for (double kc : kcs) {
            const RiccatiInput in{g0, kc};
            const std::vector<double> num = riccati_numeric(in, grid);
            for (int i = 0; i <= n; ++i) {
                const double err = std::abs(riccati_explicit(in, grid[i]) - num[i]);
                rep.max_abs_err = std::max(rep.max_abs_err, err);
            }
            ++rep.grid_cells;
        }
    }

    rep.bound_kc = 1.0;
    rep.bound_t = 1.0;
    const double bound = halfinterval_bound(rep.bound_kc, rep.bound_t);
    bool all_dominated = true;
    for (double g0 : {0.0, 1.0, 10.0, 1e6}) {
        RiccatiVerifyReport::BoundCell cell;
        cell.g0 = g0;
        cell.bound = bound;
        const RiccatiInput in{g0, rep.bound_kc};
        for (double t = 0.5; t <= 1.0 + 1e-12; t += 1e-4) {
            cell.sup_g = std::max(cell.sup_g, riccati_explicit(in, t));
        }
        cell.dominated = cell.sup_g <= bound + 1e-9;
        all_dominated = all_dominated && cell.dominated;
        rep.bounds.push_back(cell);
    }
    rep.pass = rep.max_abs_err < 1e-8 && all_dominated;
    return rep;
}

namespace {

// x0 norms cycled through the comparison families: spread over four decades.
double comparison_norm(std::size_t j) {
    static const double norms[8] = {0.1, 0.31622776601683794, 1.0, 3.1622776601683795,
                                    10.0, 31.622776601683793, 100.0, 316.22776601683796};
    return norms[j % 8];
}

ComparisonExperimentReport::Family comparison_family(const ExperimentSpec& spec,
                                                     std::uint32_t cell, double noise_scale,
                                                     const std::string& label) {
    SimConfig cfg = spec.cfg;
    cfg.noise_scale = noise_scale;
    cfg.validate();
    const int n = spec.comparison_n_traj;
    std::vector<char> ok(n, 0);
    std::vector<double> viol(n, 0.0);
    parallel_for(n, spec.workers, [&](std::size_t j) {
        // Starts beyond what the halving cap absorbs at the base step get a
        // refined one; trajectories are independent, so the step may differ
        // per start.
        SimConfig run = cfg;
        run.dt = startup_limited_dt(run.dt, run.T, comparison_norm(j));
        RngStream rng(spec.master_seed, stream_index_for(cell, static_cast<std::uint32_t>(j)));
        const SpectralField x0 = random_direction(run.K, comparison_norm(j), rng);
        const Trajectory traj = simulate_trajectory(run, x0, rng);
        std::vector<double> h2(traj.norm_y_h.size());
        for (std::size_t i = 0; i < h2.size(); ++i) h2[i] = traj.norm_y_h[i] * traj.norm_y_h[i];
        const YBoundReport yb = ybound_check(traj, run.T);
        const ComparisonReport cmp = comparison_verify(traj.times, h2, yb.k_hat, 1e-6);
        ok[j] = cmp.pass ? 1 : 0;
        viol[j] = cmp.max_rel_violation;
    });
    ComparisonExperimentReport::Family fam;
    fam.label = label;
    fam.n = n;
    for (int j = 0; j < n; ++j) {
        fam.n_pass += ok[j];
        fam.max_rel_violation = std::max(fam.max_rel_violation, viol[j]);
    }
    return fam;
}

}  // namespace

ComparisonExperimentReport comparison_experiment(const ExperimentSpec& spec) {
    require_admissible(spec.cfg);
    if (spec.comparison_n_traj < 1) throw usage_error("comparison: n_traj must be positive");
    ComparisonExperimentReport rep;
    rep.zero_noise = comparison_family(spec, kCellComparisonZero, 0.0, "zero-noise");
    rep.noisy = comparison_family(spec, kCellComparisonNoisy, spec.cfg.noise_scale, "noisy");
    const int total = rep.zero_noise.n + rep.noisy.n;
    rep.pass_fraction = static_cast<double>(rep.zero_noise.n_pass + rep.noisy.n_pass) / total;
    rep.pass = rep.pass_fraction >= 0.99;
    return rep;
}

MomentProbeExperiment moment_probe(const ExperimentSpec& spec) {
    require_admissible(spec.cfg);
    MomentProbeExperiment rep;
    rep.moment = uniform_moment_probe(spec.cfg, spec.initial_norms, spec.moment_n_traj,
                                      spec.master_seed, kCellMoment, spec.workers);

    // Shared-noise family: identical stream per initial norm, so every run sees
    // the same Z path and the bound's right-hand side is common. The coupling
    // needs one draw sequence, hence one dt fine enough for the largest start.
    SimConfig cfg = spec.cfg;
    for (double norm : spec.initial_norms) {
        cfg.dt = startup_limited_dt(cfg.dt, cfg.T, norm);
    }
    cfg.record_stride = 1;
    std::vector<Trajectory> trajs;
    trajs.reserve(spec.initial_norms.size());
    for (std::size_t i = 0; i < spec.initial_norms.size(); ++i) {
        RngStream dir(spec.master_seed,
                      stream_index_for(kCellYBound, 0xFFFFFF00u + static_cast<std::uint32_t>(i)));
        const SpectralField x0 = random_direction(cfg.K, spec.initial_norms[i], dir);
        RngStream rng(spec.master_seed, stream_index_for(kCellYBound, 0));
        trajs.push_back(simulate_trajectory(cfg, x0, rng));
    }
    for (const Trajectory& traj : trajs) {
        rep.common_c_star = std::max(rep.common_c_star, dissipation_check(traj).c_star);
    }
    rep.ybound_all_pass = true;
    for (std::size_t i = 0; i < trajs.size(); ++i) {
        MomentProbeExperiment::YBoundCell cell;
        cell.x0_norm = spec.initial_norms[i];
        cell.report = ybound_check(trajs[i], cfg.T, rep.common_c_star);
        rep.ybound_all_pass = rep.ybound_all_pass && cell.report.pass;
        rep.ybound.push_back(cell);
    }
    return rep;
}

RecurrenceReport recurrence_experiment(const ExperimentSpec& spec) {
    require_admissible(spec.cfg);
    const SimConfig& cfg = spec.cfg;
    if (spec.m_grid.empty()) throw usage_error("recurrence: empty M grid");
    if (spec.lambda_grid.empty()) throw usage_error("recurrence: empty lambda grid");
    for (std::size_t i = 1; i < spec.m_grid.size(); ++i) {
        if (!(spec.m_grid[i] > spec.m_grid[i - 1])) {
            throw usage_error("recurrence: M grid must be increasing");
        }
    }
    if (spec.horizon_n < 1) throw usage_error("recurrence: horizon must be >= 1");
    if (spec.recurrence_n_traj < 1) throw usage_error("recurrence: n_traj must be positive");
    const double spu = 1.0 / cfg.dt;
    if (std::abs(spu - std::lround(spu)) > 1e-9) {
        throw usage_error("recurrence: 1/dt must be integral so integer times lie on the grid");
    }
    const long steps_per_unit = std::lround(spu);

    // Calibrated bound on E_x ||X_1||^p_{H_delta} behind the threshold check.
    SimConfig cal_cfg = cfg;
    cal_cfg.T = 1.0;
    RecurrenceReport rep;
    rep.c_hat = uniform_moment_probe(cal_cfg, {0.0, 10.0, 1000.0},
                                     std::max(2, spec.calibration_n_traj), spec.master_seed,
                                     kCellCalibration, spec.workers)
                    .c_hat;

    const int n_traj = spec.recurrence_n_traj;
    const std::size_t n_m = spec.m_grid.size();
    // tau[j*n_m + m] = hitting time; 0 means censored at the horizon.
    std::vector<int> tau(static_cast<std::size_t>(n_traj) * n_m, 0);
    const NoiseSpectrum sp = cfg.spectrum();
    parallel_for(n_traj, spec.workers, [&](std::size_t j) {
        RngStream rng(spec.master_seed,
                      stream_index_for(kCellRecurrence, static_cast<std::uint32_t>(j)));
        const YStepper stepper(cfg.K, cfg.dt);
        const OuTransition tr(sp, cfg.dt, cfg.noise_scale);
        SpectralField y = SpectralField::zero(cfg.K);
        SpectralField z = SpectralField::zero(cfg.K);
        std::size_t unresolved = n_m;
        for (int k = 1; k <= spec.horizon_n && unresolved > 0; ++k) {
            for (long s = 0; s < steps_per_unit; ++s) {
                const double t_now = (k - 1) + s * cfg.dt;
                stepper.advance(y, z, t_now);
                ou_step(z, tr, rng);
            }
            const double nrm = norm_sobolev(add_fields(y, z), cfg.delta);
            for (std::size_t m = 0; m < n_m; ++m) {
                int& slot = tau[j * n_m + m];
                if (slot == 0 && nrm <= spec.m_grid[m]) {
                    slot = k;
                    --unresolved;
                }
            }
        }
    });

    bool any_estimate = false;
    for (std::size_t m = 0; m < n_m; ++m) {
        RecurrenceCell cell;
        cell.M = spec.m_grid[m];
        cell.n = static_cast<std::size_t>(n_traj);
        std::vector<HittingSample> samples(n_traj);
        std::size_t censored = 0;
        double tau_sum = 0.0;
        for (int j = 0; j < n_traj; ++j) {
            const int t = tau[static_cast<std::size_t>(j) * n_m + m];
            if (t == 0) {
                samples[j] = HittingSample{spec.horizon_n, true, cell.M};
                ++censored;
            } else {
                samples[j] = HittingSample{t, false, cell.M};
                tau_sum += t;
            }
        }
        cell.censored_fraction = static_cast<double>(censored) / n_traj;
        cell.tau_mean = censored < static_cast<std::size_t>(n_traj)
                            ? tau_sum / (n_traj - static_cast<int>(censored))
                            : std::numeric_limits<double>::quiet_NaN();
        cell.survival = survival_curve(samples);
        cell.fit = geometric_tail_fit(samples);
        for (double lambda : spec.lambda_grid) {
            const ExpMomentEstimate est = exp_moment_estimate(samples, lambda);
            if (!est.failed && !est.divergence_risk) any_estimate = true;
            cell.moments.push_back(est);
            cell.threshold_ok.push_back(exp_moment_threshold(cell.M, lambda, rep.c_hat, cfg.p));
        }
        rep.cells.push_back(std::move(cell));
    }
    rep.fits_all_ok = true;
    rep.rho_strictly_decreasing = true;
    for (std::size_t m = 0; m < rep.cells.size(); ++m) {
        rep.fits_all_ok = rep.fits_all_ok && rep.cells[m].fit.ok;
        if (m > 0 && !(rep.cells[m].fit.rho < rep.cells[m - 1].fit.rho)) {
            rep.rho_strictly_decreasing = false;
        }
    }
    rep.rho_strictly_decreasing = rep.rho_strictly_decreasing && rep.fits_all_ok;
    if (!any_estimate) {
        throw estimation_error("recurrence: no exponential-moment estimate could be produced "
                               "(every cell censored or divergent)");
    }
    return rep;
}

TwoStartReport occupation_experiment(const ExperimentSpec& spec) {
    require_admissible(spec.cfg);
    if (spec.start_norms.size() < 2) throw usage_error("occupation: need at least 2 start norms");
    const NamedFunctional nf =
        functional_by_name(spec.functional.empty() ? "exp_neg_h2" : spec.functional, spec.cfg);
    SimOptions opts;
    opts.functionals.emplace_back(nf.name, nf.f);

    TwoStartReport rep;
    std::vector<MeanSe> stats(spec.start_norms.size());
    std::vector<Trajectory> trajs(spec.start_norms.size());
    parallel_for(spec.start_norms.size(), spec.workers, [&](std::size_t i) {
        const std::uint32_t cell = kCellOccupation + static_cast<std::uint32_t>(i);
        RngStream dir(spec.master_seed, stream_index_for(cell, kDirectionStream));
        const SpectralField x0 = random_direction(spec.cfg.K, spec.start_norms[i], dir);
        RngStream rng(spec.master_seed, stream_index_for(cell, 0));
        trajs[i] = simulate_trajectory(spec.cfg, x0, rng, opts);
        stats[i] = occupation_average_se(trajs[i], nf.name);
    });
    for (std::size_t i = 0; i < spec.start_norms.size(); ++i) {
        rep.starts.push_back({spec.start_norms[i], stats[i].mean, stats[i].se});
    }
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < rep.starts.size(); ++i) {
        if (rep.starts[i].average < rep.starts[lo].average) lo = i;
        if (rep.starts[i].average > rep.starts[hi].average) hi = i;
    }
    rep.max_diff = rep.starts[hi].average - rep.starts[lo].average;
    rep.combinedse = std::sqrt(rep.starts[hi].se * rep.starts[hi].se +
                               rep.starts[lo].se * rep.starts[lo].se);
    rep.agree_3se = rep.max_diff <= 3.0 * rep.combinedse;
    return rep;
}

LdpExperiment ldp_experiment(const ExperimentSpec& spec) {
    require_admissible(spec.cfg);
    const NamedFunctional nf =
        functional_by_name(spec.functional.empty() ? "tanh_h2" : spec.functional, spec.cfg);
    LdpExperiment rep;
    rep.functional = nf.name;

    SimConfig pi_cfg = spec.cfg;
    pi_cfg.T = spec.pi_t;
    pi_cfg.record_stride = std::max(spec.cfg.record_stride, 10);
    RngStream pi_rng(spec.master_seed, stream_index_for(kCellLdpPi, 0));
    const LongRunAverage base = long_run_average(pi_cfg, nf.f, spec.burn_fraction, pi_rng);
    rep.pi_hat = base.pi_hat;
    if (base.unit_window_averages.size() < 10) {
        throw estimation_error("ldp-probe: too few unit windows behind the deviation level");
    }
    rep.q90 = percentile(base.unit_window_averages, 0.9);
    rep.r = spec.level_r > 0.0 ? spec.level_r : rep.q90 - rep.pi_hat;
    if (!(rep.r > 0.0)) {
        throw estimation_error(
            "ldp-probe: empirical 90th percentile does not exceed the long-run average "
            "(q90 = " + fmtg(rep.q90) + ", pi_hat = " + fmtg(rep.pi_hat) +
            "); pass an explicit --level");
    }
    rep.report = ldp_decay_probe(spec.cfg, nf.f, rep.r, rep.pi_hat, spec.ldp_horizons,
                                 spec.ldp_n_traj, spec.master_seed, kCellLdpProbe, spec.workers,
                                 nf.sup);
    return rep;
}

SimulateResult simulate_experiment(const ExperimentSpec& spec) {
    require_admissible(spec.cfg);
    SimulateResult res;
    RngStream dir(spec.master_seed, stream_index_for(kCellSimulate, kDirectionStream));
    const SpectralField x0 = random_direction(spec.cfg.K, spec.x0_norm, dir);
    RngStream rng(spec.master_seed, stream_index_for(kCellSimulate, 0));
    res.traj = simulate_trajectory(spec.cfg, x0, rng);
    res.dissipation = dissipation_check(res.traj);
    res.ybound = ybound_check(res.traj, spec.cfg.T);
    return res;
}

// --- report rows ---

namespace {

Json row_base(const char* experiment, const ExperimentSpec& spec) {
    Json j = Json::object();
    j.set("experiment", Json::str(experiment));
    j.set("seed", Json::integer(static_cast<std::int64_t>(spec.master_seed)));
    j.set("config", config_json(spec.cfg));
    return j;
}

}  // namespace

std::vector<Json> rows_for(const NoiseTestReport& r, const ExperimentSpec& spec) {
    std::vector<Json> rows;
    for (const auto& c : r.cells) {
        Json j = row_base("noise-test", spec);
        j.set("alpha", Json::real(c.alpha));
        j.set("t", Json::real(c.t));
        j.set("ecf", Json::real(c.ecf));
        j.set("target", Json::real(c.target));
        j.set("abs_err", Json::real(c.abs_err));
        j.set("stderr", Json::real(c.se));
        j.set("n", Json::integer(static_cast<std::int64_t>(c.n)));
        rows.push_back(std::move(j));
    }
    if (r.has_gaussian) {
        Json j = row_base("noise-test", spec);
        j.set("alpha", Json::real(2.0));
        j.set("statistic", Json::str("variance"));
        j.set("value", Json::real(r.gaussian_variance));
        j.set("target", Json::real(2.0));
        j.set("n", Json::integer(static_cast<std::int64_t>(r.n)));
        rows.push_back(std::move(j));
    }
    Json j = row_base("noise-test", spec);
    j.set("statistic", Json::str("max_abs_err"));
    j.set("value", Json::real(r.max_abs_err));
    rows.push_back(std::move(j));
    return rows;
}

std::vector<Json> rows_for(const MomentProbeResult& r, const ExperimentSpec& spec) {
    std::vector<Json> rows;
    for (const auto& pt : r.points) {
        Json j = row_base("ou-probe", spec);
        j.set("theta", Json::real(r.theta));
        j.set("p", Json::real(r.p));
        j.set("T", Json::real(pt.T));
        j.set("estimate", Json::real(pt.estimate));
        j.set("stderr", Json::real(pt.stderr_));
        j.set("n_traj", Json::integer(r.n_traj));
        j.set("slope", r.slope_defined ? Json::real(r.slope) : Json::null());
        rows.push_back(std::move(j));
    }
    return rows;
}

std::vector<Json> rows_for(const RiccatiVerifyReport& r, const ExperimentSpec& spec) {
    std::vector<Json> rows;
    Json head = row_base("riccati-verify", spec);
    head.set("statistic", Json::str("explicit_vs_rk4_max_abs_err"));
    head.set("value", Json::real(r.max_abs_err));
    head.set("grid_cells", Json::integer(static_cast<std::int64_t>(r.grid_cells)));
    rows.push_back(std::move(head));
    for (const auto& c : r.bounds) {
        Json j = row_base("riccati-verify", spec);
        j.set("g0", Json::real(c.g0));
        j.set("Kc", Json::real(r.bound_kc));
        j.set("T", Json::real(r.bound_t));
        j.set("sup_g_halfinterval", Json::real(c.sup_g));
        j.set("bound", Json::real(c.bound));
        j.set("dominated", Json::boolean(c.dominated));
        rows.push_back(std::move(j));
    }
    Json tail = row_base("riccati-verify", spec);
    tail.set("statistic", Json::str("pass"));
    tail.set("value", Json::boolean(r.pass));
    rows.push_back(std::move(tail));
    return rows;
}

std::vector<Json> rows_for(const ComparisonExperimentReport& r, const ExperimentSpec& spec) {
    std::vector<Json> rows;
    for (const auto* fam : {&r.zero_noise, &r.noisy}) {
        Json j = row_base("comparison", spec);
        j.set("family", Json::str(fam->label));
        j.set("n", Json::integer(fam->n));
        j.set("n_pass", Json::integer(fam->n_pass));
        j.set("max_rel_violation", Json::real(fam->max_rel_violation));
        rows.push_back(std::move(j));
    }
    Json j = row_base("comparison", spec);
    j.set("pass_fraction", Json::real(r.pass_fraction));
    j.set("pass", Json::boolean(r.pass));
    rows.push_back(std::move(j));
    return rows;
}

std::vector<Json> rows_for(const MomentProbeExperiment& r, const ExperimentSpec& spec) {
    std::vector<Json> rows;
    for (const auto& c : r.moment.cells) {
        Json j = row_base("moment-probe", spec);
        j.set("x0_norm", Json::real(c.x0_norm));
        j.set("p", Json::real(r.moment.p));
        j.set("delta", Json::real(r.moment.delta));
        j.set("estimate", Json::real(c.x_estimate.mean));
        j.set("stderr", Json::real(c.x_estimate.se));
        j.set("y_estimate", Json::real(c.y_estimate.mean));
        j.set("y_stderr", Json::real(c.y_estimate.se));
        j.set("n", Json::integer(static_cast<std::int64_t>(c.x_estimate.n)));
        rows.push_back(std::move(j));
    }
    {
        Json j = row_base("moment-probe", spec);
        j.set("statistic", Json::str("ratio_max_min"));
        j.set("value", Json::real(r.moment.ratio_max_min));
        j.set("c_hat", Json::real(r.moment.c_hat));
        rows.push_back(std::move(j));
    }
    for (const auto& c : r.ybound) {
        Json j = row_base("moment-probe", spec);
        j.set("x0_norm", Json::real(c.x0_norm));
        j.set("statistic", Json::str("ybound"));
        j.set("pass", Json::boolean(c.report.pass));
        j.set("k_hat", Json::real(c.report.k_hat));
        j.set("bound", Json::real(c.report.bound));
        j.set("max_h", Json::real(c.report.max_h));
        j.set("slack", Json::real(c.report.slack));
        j.set("common_c_star", Json::real(r.common_c_star));
        rows.push_back(std::move(j));
    }
    Json j = row_base("moment-probe", spec);
    j.set("statistic", Json::str("ybound_all_pass"));
    j.set("value", Json::boolean(r.ybound_all_pass));
    rows.push_back(std::move(j));
    return rows;
}

std::vector<Json> rows_for(const RecurrenceReport& r, const ExperimentSpec& spec) {
    std::vector<Json> rows;
    for (const auto& c : r.cells) {
        Json j = row_base("recurrence", spec);
        j.set("M", Json::real(c.M));
        j.set("n", Json::integer(static_cast<std::int64_t>(c.n)));
        j.set("horizon", Json::integer(spec.horizon_n));
        j.set("censored_fraction", Json::real(c.censored_fraction));
        j.set("tau_mean", Json::real(c.tau_mean));
        j.set("rho", c.fit.ok ? Json::real(c.fit.rho) : Json::null());
        j.set("r2", c.fit.ok ? Json::real(c.fit.r2) : Json::null());
        j.set("fit_ok", Json::boolean(c.fit.ok));
        j.set("fit_points", Json::integer(c.fit.n_points));
        j.set("fit_note", Json::str(c.fit.note));
        rows.push_back(std::move(j));
        for (std::size_t li = 0; li < c.moments.size(); ++li) {
            const ExpMomentEstimate& est = c.moments[li];
            Json m = row_base("recurrence", spec);
            m.set("M", Json::real(c.M));
            m.set("lambda", Json::real(est.lambda));
            m.set("raw", est.failed ? Json::null() : Json::real(est.raw));
            m.set("completed", Json::real(est.completed));  // null when unavailable
            m.set("censored_fraction", Json::real(est.censored_fraction));
            m.set("rho_used", Json::real(est.rho_used));
            m.set("divergence_risk", Json::boolean(est.divergence_risk));
            m.set("failed", Json::boolean(est.failed));
            m.set("threshold_ok", Json::boolean(c.threshold_ok[li]));
            m.set("note", Json::str(est.note));
            rows.push_back(std::move(m));
        }
    }
    Json j = row_base("recurrence", spec);
    j.set("statistic", Json::str("summary"));
    j.set("c_hat", Json::real(r.c_hat));
    j.set("rho_strictly_decreasing", Json::boolean(r.rho_strictly_decreasing));
    j.set("fits_all_ok", Json::boolean(r.fits_all_ok));
    rows.push_back(std::move(j));
    return rows;
}

std::vector<Json> rows_for(const TwoStartReport& r, const ExperimentSpec& spec) {
    std::vector<Json> rows;
    const std::string fname = spec.functional.empty() ? "exp_neg_h2" : spec.functional;
    for (const auto& s : r.starts) {
        Json j = row_base("occupation", spec);
        j.set("functional", Json::str(fname));
        j.set("x0_norm", Json::real(s.x0_norm));
        j.set("average", Json::real(s.average));
        j.set("stderr", Json::real(s.se));
        rows.push_back(std::move(j));
    }
    Json j = row_base("occupation", spec);
    j.set("functional", Json::str(fname));
    j.set("max_diff", Json::real(r.max_diff));
    j.set("combined_se", Json::real(r.combinedse));
    j.set("agree_3se", Json::boolean(r.agree_3se));
    rows.push_back(std::move(j));
    return rows;
}

std::vector<Json> rows_for(const LdpExperiment& r, const ExperimentSpec& spec) {
    std::vector<Json> rows;
    {
        Json j = row_base("ldp-probe", spec);
        j.set("functional", Json::str(r.functional));
        j.set("pi_hat", Json::real(r.pi_hat));
        j.set("q90", Json::real(r.q90));
        j.set("r", Json::real(r.r));
        j.set("impossible_level", Json::boolean(r.report.impossible));
        rows.push_back(std::move(j));
    }
    for (const auto& c : r.report.cells) {
        Json j = row_base("ldp-probe", spec);
        j.set("functional", Json::str(r.functional));
        j.set("r", Json::real(r.r));
        j.set("T", Json::real(c.T));
        j.set("n_traj", Json::integer(static_cast<std::int64_t>(c.n_traj)));
        j.set("events", Json::integer(static_cast<std::int64_t>(c.events)));
        j.set("p_hat", Json::real(c.prob.p_hat));
        j.set("p_lo", Json::real(c.prob.lo));
        j.set("p_hi", Json::real(c.prob.hi));
        j.set("rate", Json::real(c.rate));        // null when zero events
        j.set("rate_lo", Json::real(c.rate_lo));  // one-sided bound, always finite
        j.set("rate_hi", Json::real(c.rate_hi));  // null (infinite) when zero events
        j.set("zero_events", Json::boolean(c.zero_events));
        rows.push_back(std::move(j));
    }
    Json j = row_base("ldp-probe", spec);
    j.set("statistic", Json::str("stabilization"));
    j.set("value", r.report.stabilization_defined ? Json::real(r.report.stabilization)
                                                  : Json::null());
    j.set("defined", Json::boolean(r.report.stabilization_defined));
    rows.push_back(std::move(j));
    return rows;
}

}  // namespace glsim
