#include "glsim/ergodic_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "glsim/parallel.hpp"

namespace glsim {

namespace {

const std::vector<double>& tracked(const Trajectory& traj, const std::string& name) {
    auto it = traj.functional_track.find(name);
    if (it == traj.functional_track.end()) {
        throw std::invalid_argument("trajectory does not track functional '" + name + "'");
    }
    return it->second;
}

}  // namespace

double occupation_average(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size() || times.size() < 2) {
        throw std::invalid_argument("occupation_average: need at least two records");
    }
    double acc = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        acc += (times[i] - times[i - 1]) * 0.5 * (values[i] + values[i - 1]);
    }
    return acc / (times.back() - times.front());
}

double occupation_average(const Trajectory& traj, const std::string& functional_name) {
    return occupation_average(traj.times, tracked(traj, functional_name));
}

MeanSe occupation_average_se(const Trajectory& traj, const std::string& functional_name,
                             int n_batches) {
    // Records are (near) uniformly spaced, so the plain batch mean of values
    // matches the trapezoid average up to boundary terms.
    MeanSe out = batch_means_se(tracked(traj, functional_name), n_batches);
    out.mean = occupation_average(traj, functional_name);
    return out;
}

Histogram occupation_histogram(const std::vector<const Trajectory*>& trajs,
                               const std::string& functional_name,
                               const std::vector<double>& edges) {
    if (trajs.empty()) throw std::invalid_argument("occupation_histogram: no trajectories");
    if (edges.size() < 2) throw std::invalid_argument("occupation_histogram: need at least 2 edges");
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (!(edges[i] > edges[i - 1])) {
            throw std::invalid_argument("occupation_histogram: edges must be strictly increasing");
        }
    }
    const double spacing = trajs[0]->times.size() > 1
                               ? trajs[0]->times[1] - trajs[0]->times[0]
                               : 0.0;
    Histogram hist;
    hist.edges = edges;
    hist.masses.assign(edges.size() - 1, 0.0);

    for (const Trajectory* traj : trajs) {
        if (traj->times.size() < 2) throw std::invalid_argument("occupation_histogram: short trajectory");
        const double sp = traj->times[1] - traj->times[0];
        if (std::abs(sp - spacing) > 1e-9) {
            throw std::invalid_argument("occupation_histogram: record grids differ across trajectories");
        }
        const std::vector<double>& vals = tracked(*traj, functional_name);
        for (std::size_t i = 0; i < traj->times.size(); ++i) {
            // Trapezoid weights: half intervals at the ends, full inside.
            double w = 0.0;
            if (i > 0) w += 0.5 * (traj->times[i] - traj->times[i - 1]);
            if (i + 1 < traj->times.size()) w += 0.5 * (traj->times[i + 1] - traj->times[i]);
            const double v = vals[i];
            if (v < edges.front() || v >= edges.back()) {
                hist.total_time += w;  // out-of-range mass still normalizes
                continue;
            }
            const auto it = std::upper_bound(hist.edges.begin(), hist.edges.end(), v);
            const std::size_t bin = static_cast<std::size_t>(it - hist.edges.begin()) - 1;
            hist.masses[bin] += w;
            hist.total_time += w;
        }
    }
    if (hist.total_time > 0.0) {
        for (double& m : hist.masses) m /= hist.total_time;
    }
    return hist;
}

HittingSample hitting_time(const Trajectory& traj, double M, double delta) {
    if (!(M > 0.0)) throw std::invalid_argument("hitting_time: M must be positive");
    if (std::abs(delta - traj.config.delta) > 1e-12) {
        throw std::invalid_argument("hitting_time: delta does not match the recorded norm exponent");
    }
    int expected = 1;
    int last_integer = 0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const long k = std::lround(t);
        if (k < 1 || std::abs(t - static_cast<double>(k)) > 1e-9) continue;
        if (k != expected) {
            throw std::invalid_argument("hitting_time: integer-time records are missing");
        }
        last_integer = static_cast<int>(k);
        ++expected;
        if (traj.norm_x_h_delta[i] <= M) return HittingSample{last_integer, false, M};
    }
    if (last_integer == 0) {
        throw std::invalid_argument("hitting_time: trajectory has no integer-time records");
    }
    return HittingSample{last_integer, true, M};
}

std::vector<SurvivalPoint> survival_curve(const std::vector<HittingSample>& samples) {
    if (samples.empty()) throw std::invalid_argument("survival_curve: no samples");
    int n_max = 0;
    for (const auto& s : samples) n_max = std::max(n_max, s.tau);
    std::vector<SurvivalPoint> curve(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        std::size_t count = 0;
        for (const auto& s : samples) {
            if (s.censored || s.tau > n) ++count;
        }
        curve[n] = SurvivalPoint{n, count, static_cast<double>(count) / samples.size()};
    }
    return curve;
}

GeometricTailFit geometric_tail_fit(const std::vector<HittingSample>& samples) {
    GeometricTailFit fit;
    if (samples.size() < 100) {
        fit.note = "need at least 100 samples";
        return fit;
    }
    const auto curve = survival_curve(samples);
    const double floor_p = 10.0 / static_cast<double>(samples.size());
    std::vector<double> xs, ys;
    for (const auto& pt : curve) {
        if (pt.survival < floor_p) break;
        xs.push_back(static_cast<double>(pt.n));
        ys.push_back(std::log(pt.survival));
    }
    fit.n_points = static_cast<int>(xs.size());
    if (fit.n_points < 3) {
        fit.note = "insufficient tail data (survival above 10/N at fewer than 3 points)";
        return fit;
    }
    const LinearFit lf = linear_fit(xs, ys);
    fit.rho = std::exp(lf.slope);
    fit.r2 = lf.r2;
    if (!(fit.rho > 0.0) || !(fit.rho < 1.0)) {
        fit.note = "fitted ratio outside (0,1)";
        return fit;
    }
    fit.ok = true;
    return fit;
}

ExpMomentEstimate exp_moment_estimate(const std::vector<HittingSample>& samples, double lambda) {
    if (samples.empty()) throw std::invalid_argument("exp_moment_estimate: no samples");
    if (!(lambda > 0.0)) throw std::invalid_argument("exp_moment_estimate: lambda must be positive");

    ExpMomentEstimate est;
    est.lambda = lambda;
    est.completed = std::numeric_limits<double>::quiet_NaN();

    double sum_unc = 0.0;
    std::size_t n_unc = 0, n_cens = 0;
    double sum_cens_bound = 0.0;
    GeometricTailFit fit;
    bool fit_ready = false;
    for (const auto& s : samples) {
        if (!s.censored) {
            sum_unc += std::exp(lambda * s.tau);
            ++n_unc;
        } else {
            ++n_cens;
        }
    }
    est.censored_fraction = static_cast<double>(n_cens) / samples.size();

    if (n_unc == 0) {
        est.failed = true;
        est.note = "all samples censored";
        return est;
    }
    est.raw = sum_unc / n_unc;

    if (n_cens == 0) {
        est.completed = est.raw;
        return est;
    }

    fit = geometric_tail_fit(samples);
    fit_ready = fit.ok;
    if (!fit_ready) {
        est.note = "tail fit failed (" + fit.note + "); completion unavailable";
        return est;
    }
    est.rho_used = fit.rho;
    if (fit.rho * std::exp(lambda) >= 1.0) {
        est.divergence_risk = true;
        est.note = "rho * e^lambda >= 1 under the fitted tail; bound diverges";
        return est;
    }
    for (const auto& s : samples) {
        if (s.censored) {
            // E[e^{lambda tau} | tau > n] <= e^{lambda (n+1)} (1-rho)/(1-rho e^lambda)
            sum_cens_bound += std::exp(lambda * (s.tau + 1)) * (1.0 - fit.rho) /
                              (1.0 - fit.rho * std::exp(lambda));
        }
    }
    est.completed = (sum_unc + sum_cens_bound) / samples.size();
    return est;
}

bool exp_moment_threshold(double M, double lambda, double c_hat, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("exp_moment_threshold: p must be positive");
    if (!(c_hat > 0.0)) throw std::invalid_argument("exp_moment_threshold: c_hat must be positive");
    return M > std::pow(c_hat * std::exp(lambda), 1.0 / p);
}

SpectralField random_direction(int K, double norm, RngStream& rng) {
    SpectralField x = SpectralField::zero(K);
    if (norm == 0.0) return x;
    for (int i = 0; i < K; ++i) x.a[i] = sample_standard_stable(2.0, rng);
    for (int i = 0; i < K; ++i) x.b[i] = sample_standard_stable(2.0, rng);
    const double h = norm_h(x);
    if (!(h > 0.0)) throw std::runtime_error("random_direction: degenerate draw");
    const double c = norm / h;
    for (int i = 0; i < K; ++i) {
        x.a[i] *= c;
        x.b[i] *= c;
    }
    return x;
}

UniformMomentReport uniform_moment_probe(const SimConfig& cfg,
                                         const std::vector<double>& initial_norms,
                                         int n_traj,
                                         std::uint64_t master_seed,
                                         std::uint32_t cell_base,
                                         int workers) {
    cfg.validate();
    if (initial_norms.empty()) throw std::invalid_argument("uniform_moment_probe: no initial norms");
    if (n_traj < 2) throw std::invalid_argument("uniform_moment_probe: need at least 2 trajectories");

    UniformMomentReport rep;
    rep.p = cfg.p;
    rep.delta = cfg.delta;
    rep.cells.resize(initial_norms.size());

    for (std::size_t c = 0; c < initial_norms.size(); ++c) {
        const std::uint32_t cell = cell_base + static_cast<std::uint32_t>(c);
        RngStream dir_rng(master_seed, stream_index_for(cell, 0xFFFFFFFFu));
        const SpectralField x0 = random_direction(cfg.K, initial_norms[c], dir_rng);

        SimConfig run = cfg;
        // Large starts collapse on a 1/norm^2 time scale; without this the
        // first step exhausts the halving cap and the trajectory aborts.
        run.dt = startup_limited_dt(run.dt, run.T, initial_norms[c]);
        run.record_stride = std::max(1, static_cast<int>(std::lround(run.T / run.dt)));
        std::vector<double> xs(n_traj), ys(n_traj);
        parallel_for(n_traj, workers, [&](std::size_t j) {
            RngStream rng(master_seed, stream_index_for(cell, static_cast<std::uint32_t>(j)));
            const Trajectory traj = simulate_trajectory(run, x0, rng);
            xs[j] = std::pow(traj.norm_x_h_delta.back(), cfg.p);
            ys[j] = std::pow(traj.norm_y_h.back(), cfg.p);
        });
        rep.cells[c].x0_norm = initial_norms[c];
        rep.cells[c].x_estimate = mean_se(xs);
        rep.cells[c].y_estimate = mean_se(ys);
    }

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& cell : rep.cells) {
        lo = std::min(lo, cell.x_estimate.mean);
        hi = std::max(hi, cell.x_estimate.mean);
    }
    rep.c_hat = hi;
    rep.ratio_max_min = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    return rep;
}

LdpReport ldp_decay_probe(const SimConfig& cfg,
                          const FieldFunctional& f,
                          double r,
                          double pi_hat,
                          const std::vector<double>& horizons,
                          int n_traj,
                          std::uint64_t master_seed,
                          std::uint32_t cell_base,
                          int workers,
                          double f_sup) {
    cfg.validate();
    if (!(r > 0.0)) throw std::invalid_argument("ldp_decay_probe: deviation level r must be positive");
    if (horizons.empty()) throw std::invalid_argument("ldp_decay_probe: no horizons");
    for (std::size_t i = 1; i < horizons.size(); ++i) {
        if (!(horizons[i] > horizons[i - 1])) {
            throw std::invalid_argument("ldp_decay_probe: horizons must be increasing");
        }
    }
    if (n_traj < 1) throw std::invalid_argument("ldp_decay_probe: n_traj must be positive");

    SimConfig run = cfg;
    run.T = horizons.back();
    run.validate();

    // Map each horizon onto the record grid of the shared path.
    const double spacing = run.dt * run.record_stride;
    std::vector<std::size_t> horizon_record(horizons.size());
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        const double idx = horizons[i] / spacing;
        const double rounded = std::round(idx);
        if (std::abs(idx - rounded) > 1e-9) {
            throw std::invalid_argument("ldp_decay_probe: horizons must lie on the record grid");
        }
        horizon_record[i] = static_cast<std::size_t>(rounded);
    }

    LdpReport rep;
    rep.r = r;
    rep.pi_hat = pi_hat;
    rep.impossible = pi_hat + r >= f_sup;

    const SpectralField x0 = SpectralField::zero(run.K);
    std::vector<std::vector<char>> hit(n_traj, std::vector<char>(horizons.size(), 0));
    parallel_for(n_traj, workers, [&](std::size_t j) {
        RngStream rng(master_seed, stream_index_for(cell_base, static_cast<std::uint32_t>(j)));
        SimOptions opts;
        opts.functionals.emplace_back("f", f);
        const Trajectory traj = simulate_trajectory(run, x0, rng, opts);
        const std::vector<double>& vals = traj.functional_track.at("f");
        double acc = 0.0;
        std::size_t next = 0;
        for (std::size_t i = 1; i < traj.times.size() && next < horizons.size(); ++i) {
            acc += (traj.times[i] - traj.times[i - 1]) * 0.5 * (vals[i] + vals[i - 1]);
            while (next < horizons.size() && i == horizon_record[next]) {
                const double avg = acc / horizons[next];
                hit[j][next] = (avg - pi_hat > r) ? 1 : 0;
                ++next;
            }
        }
    });

    rep.cells.resize(horizons.size());
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        LdpCell& cell = rep.cells[h];
        cell.T = horizons[h];
        cell.n_traj = static_cast<std::size_t>(n_traj);
        for (int j = 0; j < n_traj; ++j) cell.events += hit[j][h];
        cell.prob = wilson_interval(cell.events, cell.n_traj);
        cell.zero_events = cell.events == 0;
        cell.rate_lo = -std::log(cell.prob.hi) / cell.T;
        if (!cell.zero_events) {
            cell.rate = -std::log(cell.prob.p_hat) / cell.T;
            cell.rate_hi = cell.prob.lo > 0.0 ? -std::log(cell.prob.lo) / cell.T
                                              : std::numeric_limits<double>::infinity();
        } else {
            cell.rate = std::numeric_limits<double>::quiet_NaN();
            cell.rate_hi = std::numeric_limits<double>::infinity();
        }
    }

    const std::size_t m = rep.cells.size();
    if (m >= 2 && !rep.cells[m - 1].zero_events && !rep.cells[m - 2].zero_events &&
        rep.cells[m - 2].rate > 0.0) {
        rep.stabilization =
            std::abs(rep.cells[m - 1].rate - rep.cells[m - 2].rate) / rep.cells[m - 2].rate;
        rep.stabilization_defined = true;
    }
    return rep;
}

LongRunAverage long_run_average(const SimConfig& cfg,
                                const FieldFunctional& f,
                                double burn_fraction,
                                RngStream& rng) {
    cfg.validate();
    if (!(burn_fraction >= 0.0) || !(burn_fraction < 1.0)) {
        throw std::invalid_argument("long_run_average: burn_fraction must lie in [0,1)");
    }
    SimOptions opts;
    opts.functionals.emplace_back("f", f);
    const Trajectory traj = simulate_trajectory(cfg, SpectralField::zero(cfg.K), rng, opts);
    const std::vector<double>& vals = traj.functional_track.at("f");

    const double t_burn = burn_fraction * cfg.T;
    std::size_t start = 0;
    while (start < traj.times.size() && traj.times[start] < t_burn - 1e-9) ++start;
    if (traj.times.size() - start < 2) {
        throw std::invalid_argument("long_run_average: nothing left after burn-in");
    }

    LongRunAverage out;
    out.pi_hat = occupation_average(
        std::vector<double>(traj.times.begin() + start, traj.times.end()),
        std::vector<double>(vals.begin() + start, vals.end()));

    // Unit windows [t0 + w, t0 + w + 1] on the retained stretch.
    double window_start = traj.times[start];
    double acc = 0.0;
    for (std::size_t i = start + 1; i < traj.times.size(); ++i) {
        acc += (traj.times[i] - traj.times[i - 1]) * 0.5 * (vals[i] + vals[i - 1]);
        if (traj.times[i] - window_start >= 1.0 - 1e-9) {
            out.unit_window_averages.push_back(acc / (traj.times[i] - window_start));
            window_start = traj.times[i];
            acc = 0.0;
        }
    }
    return out;
}

}  // namespace glsim
