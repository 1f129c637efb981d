#pragma once
// Experiment drivers shared by the command-line tool, the verify-all
// subcommand, and the acceptance suite. Every driver is a deterministic
// function of (spec, master_seed): trajectory work is keyed by stream index
// and reduced in index order, so reports are byte-identical across worker
// counts and across runs.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "glsim/ergodic_stats.hpp"
#include "glsim/gl_integrator.hpp"
#include "glsim/ou_process.hpp"
#include "glsim/report.hpp"
#include "glsim/riccati.hpp"

namespace glsim {

// Parameters outside the standing hypotheses (exit code 2).
class hypothesis_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
// The requested estimate cannot be produced from the data (exit code 3).
class estimation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
// Bad invocation (exit code 64).
class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitHypothesis = 2;
inline constexpr int kExitEstimation = 3;
inline constexpr int kExitUsage = 64;

// Throws hypothesis_error naming the violated inequality when (alpha, beta)
// or the moment exponents sit outside the standing assumptions.
void require_admissible(const SimConfig& cfg);

struct NamedFunctional {
    std::string name;
    FieldFunctional f;
    double sup = 0.0;  // essential sup; +inf when unbounded
};
// Known names: one, norm_h, norm_h_delta, exp_neg_h2, tanh_h2.
// norm_h_delta reads cfg.delta. Unknown name -> usage_error.
NamedFunctional functional_by_name(const std::string& name, const SimConfig& cfg);

// All knobs for every subcommand; dispatch reads the ones it needs. Counts
// left at their defaults match the acceptance pins.
struct ExperimentSpec {
    std::string name;
    SimConfig cfg;  // K=32, dt=1e-3, alpha=1.8, beta=0.8, delta=0.25, p=0.3
    std::uint64_t master_seed = 1;
    int workers = 1;
    std::string out_path;  // report file; verify-all treats it as a directory

    // noise-test
    std::vector<double> noise_alphas = {1.6, 1.8, 2.0};
    std::size_t noise_n = 1000000;
    std::vector<double> cf_points = {0.25, 0.5, 1.0, 2.0};

    // ou-probe
    double theta = 0.5;
    double probe_p = 0.5;
    std::vector<double> probe_horizons = {1, 2, 4, 8, 16};
    int probe_n_traj = 2000;
    double probe_h = 0.01;  // observation grid of the running sup

    // recurrence
    std::vector<double> m_grid = {1, 2, 4, 8};
    std::vector<double> lambda_grid = {1.0};
    int horizon_n = 200;
    int recurrence_n_traj = 10000;
    int calibration_n_traj = 500;  // trajectories behind the c_hat threshold check

    // occupation (two-start ergodic agreement; cfg.T is the horizon)
    std::vector<double> start_norms = {0.0, 50.0};
    std::string functional;  // empty -> per-experiment default
    double occupation_t = 200.0;

    // moment-probe
    std::vector<double> initial_norms = {0, 1, 10, 100, 1000};
    int moment_n_traj = 2000;

    // ldp-probe
    std::vector<double> ldp_horizons = {25, 50};
    int ldp_n_traj = 1000;
    double level_r = -1.0;  // <= 0: empirical q90 of unit-window averages minus pi_hat
    double pi_t = 2000.0;   // long-run horizon behind pi_hat
    double burn_fraction = 0.1;

    // comparison (criterion driver; part of verify-all)
    int comparison_n_traj = 100;  // per family (zero-noise and noisy)

    // simulate
    double x0_norm = 0.0;

    // verify-all
    double scale = 1.0;  // multiplies sample counts, floored at small minima
};

// --- typed experiment results ---

struct NoiseTestReport {
    struct EcfCell {
        double alpha = 0.0;
        double t = 0.0;
        double ecf = 0.0;     // empirical mean of cos(t S)
        double target = 0.0;  // exp(-|t|^alpha)
        double abs_err = 0.0;
        double se = 0.0;
        std::size_t n = 0;
    };
    std::vector<EcfCell> cells;
    double max_abs_err = 0.0;
    bool has_gaussian = false;
    double gaussian_variance = 0.0;  // alpha = 2 sample variance; target 2
    std::size_t n = 0;
};
NoiseTestReport noise_test(const ExperimentSpec& spec);

MomentProbeResult ou_probe(const ExperimentSpec& spec);

struct RiccatiVerifyReport {
    double max_abs_err = 0.0;  // explicit vs RK4 over the (g0, Kc, t) grid
    std::size_t grid_cells = 0;
    struct BoundCell {
        double g0 = 0.0;
        double sup_g = 0.0;  // max of g over [T/2, T]
        double bound = 0.0;  // halfinterval_bound(Kc, T)
        bool dominated = false;
    };
    double bound_kc = 1.0, bound_t = 1.0;
    std::vector<BoundCell> bounds;
    bool pass = false;
};
RiccatiVerifyReport riccati_verify(const ExperimentSpec& spec);

struct ComparisonExperimentReport {
    struct Family {
        std::string label;
        int n = 0;
        int n_pass = 0;
        double max_rel_violation = 0.0;
    };
    Family zero_noise, noisy;
    double pass_fraction = 0.0;
    bool pass = false;  // >= 99% of all trajectories
};
// h(t) = ||Y_t||_H^2 against the Riccati solution with Kc = K_hat_T per
// trajectory; one zero-noise and one noisy family.
ComparisonExperimentReport comparison_experiment(const ExperimentSpec& spec);

struct MomentProbeExperiment {
    UniformMomentReport moment;
    struct YBoundCell {
        double x0_norm = 0.0;
        YBoundReport report;
    };
    std::vector<YBoundCell> ybound;  // shared noise path, common right-hand side
    double common_c_star = 0.0;
    bool ybound_all_pass = false;
};
MomentProbeExperiment moment_probe(const ExperimentSpec& spec);

struct RecurrenceCell {
    double M = 0.0;
    std::size_t n = 0;
    double censored_fraction = 0.0;
    double tau_mean = 0.0;  // over uncensored samples
    GeometricTailFit fit;
    std::vector<SurvivalPoint> survival;
    std::vector<ExpMomentEstimate> moments;  // one per lambda
    std::vector<bool> threshold_ok;          // M > (c_hat e^lambda)^{1/p}
};
struct RecurrenceReport {
    std::vector<RecurrenceCell> cells;  // one per M, ascending
    double c_hat = 0.0;                 // calibrated bound on E||X_1||^p_{H_delta}
    bool rho_strictly_decreasing = false;
    bool fits_all_ok = false;
};
RecurrenceReport recurrence_experiment(const ExperimentSpec& spec);

struct TwoStartReport {
    struct Start {
        double x0_norm = 0.0;
        double average = 0.0;
        double se = 0.0;
    };
    std::vector<Start> starts;
    double max_diff = 0.0;
    double combinedse = 0.0;  // sqrt of summed squared SEs of the extreme pair
    bool agree_3se = false;
};
TwoStartReport occupation_experiment(const ExperimentSpec& spec);

struct LdpExperiment {
    double pi_hat = 0.0;
    double q90 = 0.0;  // 90th percentile of unit-window averages
    double r = 0.0;
    std::string functional;
    LdpReport report;
};
LdpExperiment ldp_experiment(const ExperimentSpec& spec);

struct SimulateResult {
    Trajectory traj;
    DissipationReport dissipation;
    YBoundReport ybound;
};
SimulateResult simulate_experiment(const ExperimentSpec& spec);

// --- report rows (JSON-lines payloads; schemas in docs/FORMATS.md) ---

std::vector<Json> rows_for(const NoiseTestReport& r, const ExperimentSpec& spec);
std::vector<Json> rows_for(const MomentProbeResult& r, const ExperimentSpec& spec);
std::vector<Json> rows_for(const RiccatiVerifyReport& r, const ExperimentSpec& spec);
std::vector<Json> rows_for(const ComparisonExperimentReport& r, const ExperimentSpec& spec);
std::vector<Json> rows_for(const MomentProbeExperiment& r, const ExperimentSpec& spec);
std::vector<Json> rows_for(const RecurrenceReport& r, const ExperimentSpec& spec);
std::vector<Json> rows_for(const TwoStartReport& r, const ExperimentSpec& spec);
std::vector<Json> rows_for(const LdpExperiment& r, const ExperimentSpec& spec);

// Runs one subcommand, writes the report (and any side CSVs) next to
// spec.out_path plus a manifest at out_path + ".manifest.json". Returns the
// exit code; hypothesis/estimation/usage failures are thrown, not returned.
int run_experiment(const ExperimentSpec& spec);

// --- acceptance suite ---

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t master_seed = 1;
    int workers = 1;
    double scale = 1.0;     // multiplies sample counts (verify-all --scale)
    std::string out_dir;    // report directory; empty runs without files
};

// Criteria 1..9 in order. With out_dir set, writes one JSON-lines report per
// criterion, a summary.jsonl, and manifest.json (the only file carrying wall
// time).
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

// Criterion 10: runs the reduced-scale suite twice (worker counts 1 and 8)
// into fresh subdirectories of work_dir and byte-compares every report file;
// manifests are excluded.
CriterionResult determinism_criterion(std::uint64_t master_seed, double scale,
                                      const std::string& work_dir);

}  // namespace glsim
