#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "glsim/harness.hpp"
#include "glsim/parallel.hpp"

namespace glsim {

namespace {

namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

std::string fmtg(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.5g", v);
    return buf;
}

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int scaled(int n, double scale, int floor_n) {
    return std::max(floor_n, static_cast<int>(std::lround(n * scale)));
}

std::size_t scaled_n(std::size_t n, double scale, std::size_t floor_n) {
    const double v = std::round(static_cast<double>(n) * scale);
    return std::max(floor_n, static_cast<std::size_t>(v));
}

std::string rows_to_text(const std::vector<Json>& rows) {
    std::string s;
    for (const Json& row : rows) {
        s += row.dump();
        s += '\n';
    }
    return s;
}

const std::vector<std::string>& known_experiments() {
    static const std::vector<std::string> names = {
        "noise-test", "ou-probe",     "simulate",  "riccati-verify", "recurrence",
        "occupation", "moment-probe", "ldp-probe", "verify-all"};
    return names;
}

// --- ou exactness (criterion 2) ---

struct OuExactness {
    std::size_t n = 0;
    double ks_semigroup = 0.0, thresh_semigroup = 0.0;
    double ks_oracle = 0.0, thresh_oracle = 0.0;
    bool pass_semigroup = false, pass_oracle = false;
};

constexpr std::uint32_t kCellOuSemigroup = 20;
constexpr std::uint32_t kCellOuExact = 21;
constexpr std::uint32_t kCellOuOracle = 22;

OuExactness ou_exactness(std::uint64_t seed, std::size_t n, int workers) {
    OuExactness r;
    r.n = n;
    const double alpha = 1.8;
    const NoiseSpectrum sp = mode_scales(alpha, 0.8, 1);

    // Semigroup property: two h = 0.5 steps from 0 vs one h = 1 step, mode 1.
    {
        const OuTransition half(sp, 0.5), full(sp, 1.0);
        std::vector<double> a(n), b(n);
        RngStream ra(seed, stream_index_for(kCellOuSemigroup, 0));
        RngStream rb(seed, stream_index_for(kCellOuSemigroup, 1));
        for (std::size_t i = 0; i < n; ++i) {
            double z = half.kick[0] * sample_standard_stable(alpha, ra);
            z = half.decay[0] * z + half.kick[0] * sample_standard_stable(alpha, ra);
            a[i] = z;
        }
        for (std::size_t i = 0; i < n; ++i) {
            b[i] = full.kick[0] * sample_standard_stable(alpha, rb);
        }
        r.ks_semigroup = ks_statistic(a, b);
        r.thresh_semigroup = ks_threshold(n, n, 0.01);
        r.pass_semigroup = r.ks_semigroup < r.thresh_semigroup;
    }

    // Marginal at t = 1 vs a Riemann-Stieltjes oracle with 10^4 sub-steps.
    {
        const OuTransition full(sp, 1.0);
        const std::size_t m = 10000;
        const double g1 = gamma_k(1);
        std::vector<double> w(m);
        const double sub_scale = sp.mode_scales[0] * std::pow(1.0 / m, 1.0 / alpha);
        for (std::size_t i = 0; i < m; ++i) {
            w[i] = std::exp(-g1 * (1.0 - static_cast<double>(i) / m)) * sub_scale;
        }
        std::vector<double> exact(n), oracle(n);
        RngStream re(seed, stream_index_for(kCellOuExact, 0));
        for (std::size_t i = 0; i < n; ++i) {
            exact[i] = full.kick[0] * sample_standard_stable(alpha, re);
        }
        parallel_for(n, workers, [&](std::size_t j) {
            RngStream rj(seed, stream_index_for(kCellOuOracle, static_cast<std::uint32_t>(j)));
            double z = 0.0;
            for (std::size_t i = 0; i < m; ++i) z += w[i] * sample_standard_stable(alpha, rj);
            oracle[j] = z;
        });
        r.ks_oracle = ks_statistic(exact, oracle);
        r.thresh_oracle = ks_threshold(n, n, 0.01);
        r.pass_oracle = r.ks_oracle < r.thresh_oracle;
    }
    return r;
}

std::vector<Json> rows_for_ou_exactness(const OuExactness& r, std::uint64_t seed) {
    std::vector<Json> rows;
    const auto row = [&](const char* test, double ks, double thr, bool pass) {
        Json j = Json::object();
        j.set("experiment", Json::str("ou-exactness"));
        j.set("seed", Json::integer(static_cast<std::int64_t>(seed)));
        j.set("alpha", Json::real(1.8));
        j.set("beta", Json::real(0.8));
        j.set("mode", Json::integer(1));
        j.set("test", Json::str(test));
        j.set("ks", Json::real(ks));
        j.set("threshold_1pct", Json::real(thr));
        j.set("n", Json::integer(static_cast<std::int64_t>(r.n)));
        j.set("pass", Json::boolean(pass));
        rows.push_back(std::move(j));
    };
    row("semigroup", r.ks_semigroup, r.thresh_semigroup, r.pass_semigroup);
    row("fine_discretization_oracle", r.ks_oracle, r.thresh_oracle, r.pass_oracle);
    return rows;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o) {
    const auto suite_t0 = clock_type::now();
    if (!o.out_dir.empty()) fs::create_directories(o.out_dir);
    const auto write_rows = [&](const std::string& file, const std::vector<Json>& rows) {
        if (o.out_dir.empty()) return;
        write_text_file((fs::path(o.out_dir) / file).string(), rows_to_text(rows));
    };

    ExperimentSpec base;
    base.master_seed = o.master_seed;
    base.workers = o.workers;

    std::vector<CriterionResult> out;
    const auto timed = [&](int id, const std::string& name, auto&& fn) {
        CriterionResult c;
        c.id = id;
        c.name = name;
        const auto t0 = clock_type::now();
        try {
            fn(c);
        } catch (const std::exception& e) {
            c.pass = false;
            c.detail = std::string("error: ") + e.what();
        }
        c.seconds = seconds_since(t0);
        out.push_back(std::move(c));
    };

    timed(1, "stable-sampler-law", [&](CriterionResult& c) {
        ExperimentSpec s = base;
        s.name = "noise-test";
        s.noise_n = scaled_n(1000000, o.scale, 10000);
        const NoiseTestReport r = noise_test(s);
        write_rows("c01_noise.jsonl", rows_for(r, s));
        const double var_rel = std::abs(r.gaussian_variance - 2.0) / 2.0;
        c.pass = r.max_abs_err <= 0.005 && r.has_gaussian && var_rel <= 0.01;
        c.detail = "max ECF deviation " + fmtg(r.max_abs_err) + " (tol 0.005); alpha=2 variance " +
                   fmtg(r.gaussian_variance) + " (target 2, tol 1%)";
    });

    timed(2, "ou-exactness", [&](CriterionResult& c) {
        const std::size_t n = scaled_n(100000, o.scale, 2000);
        const OuExactness r = ou_exactness(o.master_seed, n, o.workers);
        write_rows("c02_ou.jsonl", rows_for_ou_exactness(r, o.master_seed));
        c.pass = r.pass_semigroup && r.pass_oracle;
        c.detail = "semigroup KS " + fmtg(r.ks_semigroup) + " (1% threshold " +
                   fmtg(r.thresh_semigroup) + "); oracle KS " + fmtg(r.ks_oracle) +
                   " (threshold " + fmtg(r.thresh_oracle) + ")";
    });

    timed(3, "ou-growth-exponent", [&](CriterionResult& c) {
        ExperimentSpec s = base;
        s.name = "ou-probe";
        s.probe_n_traj = scaled(2000, o.scale, 50);
        const MomentProbeResult r = ou_probe(s);
        write_rows("c03_growth.jsonl", rows_for(r, s));
        const double limit = s.probe_p / s.cfg.alpha + 0.15;
        c.pass = r.slope_defined && r.slope <= limit;
        c.detail = "log-log slope " + (r.slope_defined ? fmtg(r.slope) : std::string("undefined")) +
                   " (limit p/alpha + 0.15 = " + fmtg(limit) + ")";
    });

    timed(4, "riccati-exactness", [&](CriterionResult& c) {
        ExperimentSpec s = base;
        s.name = "riccati-verify";
        const RiccatiVerifyReport r = riccati_verify(s);
        write_rows("c04_riccati.jsonl", rows_for(r, s));
        c.pass = r.pass;
        c.detail = "explicit vs RK4 max abs err " + fmtg(r.max_abs_err) +
                   " (tol 1e-8); half-interval bound dominates all of g0 in {0, 1, 10, 1e6}: " +
                   (r.pass ? "yes" : "no");
    });

    timed(5, "comparison-principle", [&](CriterionResult& c) {
        ExperimentSpec s = base;
        s.name = "comparison";
        s.comparison_n_traj = scaled(100, o.scale, 3);
        const ComparisonExperimentReport r = comparison_experiment(s);
        write_rows("c05_comparison.jsonl", rows_for(r, s));
        c.pass = r.pass;
        c.detail = "pass fraction " + fmtg(r.pass_fraction) + " (need >= 0.99); max rel violation " +
                   fmtg(std::max(r.zero_noise.max_rel_violation, r.noisy.max_rel_violation));
    });

    timed(6, "initial-condition-uniformity", [&](CriterionResult& c) {
        ExperimentSpec s = base;
        s.name = "moment-probe";
        s.moment_n_traj = scaled(2000, o.scale, 10);
        const MomentProbeExperiment r = moment_probe(s);
        write_rows("c06_moment.jsonl", rows_for(r, s));
        c.pass = r.moment.ratio_max_min <= 2.0 && r.ybound_all_pass;
        c.detail = "max/min estimate ratio " + fmtg(r.moment.ratio_max_min) +
                   " (need <= 2); shared-path energy bound " +
                   (r.ybound_all_pass ? "holds" : "violated") + " across all initial norms";
    });

    timed(7, "hyper-exponential-recurrence", [&](CriterionResult& c) {
        ExperimentSpec s = base;
        s.name = "recurrence";
        s.recurrence_n_traj = scaled(10000, o.scale, 200);
        s.calibration_n_traj = scaled(500, o.scale, 2);
        const RecurrenceReport r = recurrence_experiment(s);
        write_rows("c07_recurrence.jsonl", rows_for(r, s));
        if (!o.out_dir.empty()) {
            for (const auto& cell : r.cells) {
                std::ostringstream os;
                write_survival_csv(os, cell.survival);
                write_text_file((fs::path(o.out_dir) / ("c07_survival_M" + fmtg(cell.M) + ".csv"))
                                    .string(),
                                os.str());
            }
        }
        bool fits_sharp = r.fits_all_ok && r.rho_strictly_decreasing;
        for (const auto& cell : r.cells) fits_sharp = fits_sharp && cell.fit.r2 > 0.9;
        const ExpMomentEstimate& last = r.cells.back().moments.front();
        const bool moment_ok = !last.failed && !last.divergence_risk;
        c.pass = fits_sharp && moment_ok;
        std::string fit_note;
        if (!r.fits_all_ok) {
            fit_note = " (" + r.cells.front().fit.note + "; censored fraction at M=" +
                       fmtg(r.cells.front().M) + " is " +
                       fmtg(r.cells.front().censored_fraction) + ")";
        }
        c.detail = std::string("tail fits ") + (fits_sharp ? "ok, rho strictly decreasing" : "failed") +
                   fit_note + "; exp moment at largest M, lambda=" + fmtg(last.lambda) + ": " +
                   (moment_ok ? fmtg(last.completed) + " finite" : "unavailable");
    });

    timed(8, "ergodic-uniqueness", [&](CriterionResult& c) {
        ExperimentSpec s = base;
        s.name = "occupation";
        s.occupation_t = std::max(20.0, 200.0 * o.scale);
        s.cfg.T = s.occupation_t;
        const TwoStartReport r = occupation_experiment(s);
        write_rows("c08_occupation.jsonl", rows_for(r, s));
        c.pass = r.agree_3se;
        c.detail = "two-start averages differ by " + fmtg(r.max_diff) + " vs 3x combined SE " +
                   fmtg(3.0 * r.combinedse);
    });

    timed(9, "ldp-decay", [&](CriterionResult& c) {
        ExperimentSpec s = base;
        s.name = "ldp-probe";
        s.ldp_n_traj = scaled(1000, o.scale, 20);
        s.pi_t = std::max(50.0, 2000.0 * o.scale);
        const LdpExperiment r = ldp_experiment(s);
        write_rows("c09_ldp.jsonl", rows_for(r, s));
        const bool defined = r.report.stabilization_defined;
        c.pass = !r.report.impossible && defined && r.report.stabilization <= 0.3;
        if (defined) {
            c.detail = "rates " + fmtg(r.report.cells[r.report.cells.size() - 2].rate) + " (T=" +
                       fmtg(r.report.cells[r.report.cells.size() - 2].T) + ") vs " +
                       fmtg(r.report.cells.back().rate) + " (T=" +
                       fmtg(r.report.cells.back().T) + "), relative change " +
                       fmtg(r.report.stabilization) + " (need <= 0.3)";
        } else {
            std::string lows;
            for (const auto& cell : r.report.cells) {
                lows += " rate_lo(T=" + fmtg(cell.T) + ")=" + fmtg(cell.rate_lo);
            }
            c.detail = "zero-event cells: one-sided lower bounds only;" + lows;
        }
    });

    if (!o.out_dir.empty()) {
        std::vector<Json> summary;
        for (const CriterionResult& c : out) {
            Json j = Json::object();
            j.set("criterion", Json::integer(c.id));
            j.set("name", Json::str(c.name));
            j.set("pass", Json::boolean(c.pass));
            j.set("detail", Json::str(c.detail));
            summary.push_back(std::move(j));
        }
        write_text_file((fs::path(o.out_dir) / "summary.jsonl").string(), rows_to_text(summary));
        Json cfg = config_json(ExperimentSpec{}.cfg);
        cfg.set("master_seed", Json::integer(static_cast<std::int64_t>(o.master_seed)));
        cfg.set("workers", Json::integer(o.workers));
        cfg.set("scale", Json::real(o.scale));
        write_manifest((fs::path(o.out_dir) / "manifest.json").string(), "verify-all", cfg,
                       seconds_since(suite_t0));
    }
    return out;
}

CriterionResult determinism_criterion(std::uint64_t master_seed, double scale,
                                      const std::string& work_dir) {
    CriterionResult c;
    c.id = 10;
    c.name = "determinism";
    const auto t0 = clock_type::now();
    try {
        const fs::path d1 = fs::path(work_dir) / "run_w1";
        const fs::path d2 = fs::path(work_dir) / "run_w8";
        fs::remove_all(d1);
        fs::remove_all(d2);
        AcceptanceOptions a;
        a.master_seed = master_seed;
        a.scale = scale;
        a.workers = 1;
        a.out_dir = d1.string();
        run_acceptance(a);
        a.workers = 8;
        a.out_dir = d2.string();
        run_acceptance(a);

        const auto report_files = [](const fs::path& dir) {
            std::map<std::string, std::string> files;
            for (const auto& entry : fs::directory_iterator(dir)) {
                const std::string ext = entry.path().extension().string();
                if (ext != ".jsonl" && ext != ".csv") continue;  // manifests excluded
                std::ifstream is(entry.path(), std::ios::binary);
                std::ostringstream os;
                os << is.rdbuf();
                files[entry.path().filename().string()] = os.str();
            }
            return files;
        };
        const auto f1 = report_files(d1);
        const auto f2 = report_files(d2);
        c.pass = true;
        std::string mismatch;
        if (f1.size() != f2.size()) {
            c.pass = false;
            mismatch = "file sets differ";
        } else {
            for (const auto& [name, bytes] : f1) {
                const auto it = f2.find(name);
                if (it == f2.end() || it->second != bytes) {
                    c.pass = false;
                    mismatch = name;
                    break;
                }
            }
        }
        c.detail = c.pass ? fmtg(static_cast<double>(f1.size())) +
                                " report files byte-identical across worker counts 1 and 8"
                          : "mismatch: " + mismatch;
    } catch (const std::exception& e) {
        c.pass = false;
        c.detail = std::string("error: ") + e.what();
    }
    c.seconds = seconds_since(t0);
    return c;
}

int run_experiment(const ExperimentSpec& spec_in) {
    ExperimentSpec spec = spec_in;
    if (spec.name.empty()) throw usage_error("missing experiment name");
    const auto& names = known_experiments();
    if (std::find(names.begin(), names.end(), spec.name) == names.end()) {
        throw usage_error("unknown experiment '" + spec.name + "'");
    }
    if (spec.out_path.empty()) throw usage_error("missing output path (--out)");
    if (spec.workers < 1) throw usage_error("worker count must be >= 1");

    const auto t0 = clock_type::now();

    if (spec.name == "verify-all") {
        AcceptanceOptions a;
        a.master_seed = spec.master_seed;
        a.workers = spec.workers;
        a.scale = spec.scale;
        a.out_dir = spec.out_path;
        const std::vector<CriterionResult> results = run_acceptance(a);
        bool all = true;
        for (const auto& c : results) all = all && c.pass;
        return all ? kExitOk : kExitEstimation;
    }

    std::vector<Json> rows;
    std::vector<std::pair<std::string, std::string>> extra_files;

    if (spec.name == "noise-test") {
        rows = rows_for(noise_test(spec), spec);
    } else if (spec.name == "ou-probe") {
        rows = rows_for(ou_probe(spec), spec);
    } else if (spec.name == "riccati-verify") {
        rows = rows_for(riccati_verify(spec), spec);
    } else if (spec.name == "moment-probe") {
        rows = rows_for(moment_probe(spec), spec);
    } else if (spec.name == "recurrence") {
        const RecurrenceReport r = recurrence_experiment(spec);
        rows = rows_for(r, spec);
        for (const auto& cell : r.cells) {
            std::ostringstream os;
            write_survival_csv(os, cell.survival);
            extra_files.emplace_back(spec.out_path + ".survival_M" + fmtg(cell.M) + ".csv",
                                     os.str());
        }
    } else if (spec.name == "occupation") {
        spec.cfg.T = spec.occupation_t;
        rows = rows_for(occupation_experiment(spec), spec);
    } else if (spec.name == "ldp-probe") {
        rows = rows_for(ldp_experiment(spec), spec);
    } else if (spec.name == "simulate") {
        const SimulateResult r = simulate_experiment(spec);
        std::ostringstream os;
        write_trajectory_csv(os, r.traj);
        write_text_file(spec.out_path, os.str());
        Json j = Json::object();
        j.set("experiment", Json::str("simulate"));
        j.set("seed", Json::integer(static_cast<std::int64_t>(spec.master_seed)));
        j.set("config", config_json(spec.cfg));
        j.set("x0_norm", Json::real(spec.x0_norm));
        j.set("rejected_steps", Json::integer(r.traj.rejected_steps));
        j.set("c_star", Json::real(r.dissipation.c_star));
        j.set("sup_z_v4", Json::real(r.dissipation.sup_z_v4));
        j.set("ybound_pass", Json::boolean(r.ybound.pass));
        j.set("k_hat", Json::real(r.ybound.k_hat));
        j.set("ybound", Json::real(r.ybound.bound));
        j.set("max_y_h2", Json::real(r.ybound.max_h));
        extra_files.emplace_back(spec.out_path + ".summary.jsonl", j.dump() + "\n");
    }

    if (spec.name != "simulate") {
        write_text_file(spec.out_path, rows_to_text(rows));
    }
    for (const auto& [path, content] : extra_files) write_text_file(path, content);

    Json cfg = config_json(spec.cfg);
    cfg.set("master_seed", Json::integer(static_cast<std::int64_t>(spec.master_seed)));
    cfg.set("workers", Json::integer(spec.workers));
    write_manifest(spec.out_path + ".manifest.json", spec.name, cfg, seconds_since(t0));
    return kExitOk;
}

}  // namespace glsim
