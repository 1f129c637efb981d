#pragma once
// Ergodic and recurrence statistics over simulated trajectories: occupation
// averages and histograms, return times to H_delta balls sampled at integer
// times, exponential moments of those return times with censoring-aware
// completion, geometric tail fits, and the two regime probes (uniform moment
// bound over initial data, occupation large-deviation decay).

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "glsim/gl_integrator.hpp"
#include "glsim/stats.hpp"

namespace glsim {

// --- occupation statistics ---

// Trapezoid time average of a tracked functional over the full record grid.
double occupation_average(const Trajectory& traj, const std::string& functional_name);
double occupation_average(const std::vector<double>& times, const std::vector<double>& values);

// Batch-means standard error for the same average (time-correlated data).
MeanSe occupation_average_se(const Trajectory& traj, const std::string& functional_name,
                             int n_batches = 20);

struct Histogram {
    std::vector<double> edges;   // size m+1, strictly increasing
    std::vector<double> masses;  // size m, sums to 1
    double total_time = 0.0;
};
// Pooled time-weighted histogram of a tracked functional. All trajectories
// must share the same record spacing.
Histogram occupation_histogram(const std::vector<const Trajectory*>& trajs,
                               const std::string& functional_name,
                               const std::vector<double>& edges);

struct OccupationRecord {
    double total_time = 0.0;
    std::map<std::string, double> functional_averages;
    Histogram histogram;
};

// --- return times ---

struct HittingSample {
    int tau = 0;            // first integer k >= 1 with ||X_k||_{H_delta} <= M
    bool censored = false;  // no hit by the horizon; tau then holds the horizon
    double M = 0.0;
};

// Scans the trajectory's integer-time records. delta must match the exponent
// the trajectory recorded. Throws when integer-time records are missing.
HittingSample hitting_time(const Trajectory& traj, double M, double delta);

struct SurvivalPoint {
    int n = 0;
    std::size_t count = 0;  // #{tau > n}
    double survival = 0.0;
};
std::vector<SurvivalPoint> survival_curve(const std::vector<HittingSample>& samples);

struct GeometricTailFit {
    bool ok = false;
    double rho = 0.0;  // exp(slope) of log survival vs n
    double r2 = 0.0;
    int n_points = 0;  // points entering the fit
    std::string note;  // reason when !ok
};
// Least squares on log survival over the range where survival >= 10/N;
// requires at least 3 usable points and at least 100 samples.
GeometricTailFit geometric_tail_fit(const std::vector<HittingSample>& samples);

struct ExpMomentEstimate {
    double lambda = 0.0;
    double raw = 0.0;        // mean of e^{lambda tau} over uncensored samples
    double completed = 0.0;  // adds the geometric upper-bound completion for
                             // censored mass; equals raw when nothing censored
    double censored_fraction = 0.0;
    double rho_used = 0.0;
    bool divergence_risk = false;  // rho e^lambda >= 1 under the fit
    bool failed = false;           // no number can be reported
    std::string note;
};
ExpMomentEstimate exp_moment_estimate(const std::vector<HittingSample>& samples, double lambda);

// The moment condition making E[e^{lambda tau_M}] provably finite:
// M > (c_hat e^lambda)^{1/p} where c_hat bounds E_x ||X_1||^p_{H_delta}.
bool exp_moment_threshold(double M, double lambda, double c_hat, double p);

// --- regime probes ---

struct MomentCell {
    double x0_norm = 0.0;
    MeanSe x_estimate;  // E[||X_T||^p_{H_delta}]
    MeanSe y_estimate;  // same for the Y component alone
};
struct UniformMomentReport {
    std::vector<MomentCell> cells;
    double ratio_max_min = 0.0;  // over X estimates
    double c_hat = 0.0;          // max over cells of the X estimate
    double p = 0.0;
    double delta = 0.0;
};
// E_x[||X_T||^p_{H_delta}] across initial norms (random fixed direction per
// cell). Requires cfg.p in (0, alpha/4) and cfg.delta in (0, 1/2).
UniformMomentReport uniform_moment_probe(const SimConfig& cfg,
                                         const std::vector<double>& initial_norms,
                                         int n_traj,
                                         std::uint64_t master_seed,
                                         std::uint32_t cell_base,
                                         int workers);

struct LdpCell {
    double T = 0.0;
    std::size_t n_traj = 0;
    std::size_t events = 0;
    WilsonInterval prob;     // P(L_T(f) - pi_hat > r)
    double rate = 0.0;       // -log(p_hat)/T, only when events > 0
    double rate_lo = 0.0;    // from the Wilson upper bound; always defined
    double rate_hi = 0.0;    // from the Wilson lower bound; inf when events = 0
    bool zero_events = false;
};
struct LdpReport {
    double r = 0.0;
    double pi_hat = 0.0;
    bool impossible = false;  // pi_hat + r outside the functional's range
    std::vector<LdpCell> cells;
    double stabilization = 0.0;  // |rate change| / rate between last two horizons
    bool stabilization_defined = false;
};
// Empirical decay of P(L_T(f) - pi_hat > r) where L_T(f) is the trapezoid
// occupation average over [0, T], started from x0 = 0. Horizons share paths:
// each trajectory is run to max(horizons) and prefix-averaged. f_sup is the
// functional's essential sup (+inf if unknown), used only to flag levels no
// trajectory could ever reach.
LdpReport ldp_decay_probe(const SimConfig& cfg,
                          const FieldFunctional& f,
                          double r,
                          double pi_hat,
                          const std::vector<double>& horizons,
                          int n_traj,
                          std::uint64_t master_seed,
                          std::uint32_t cell_base,
                          int workers,
                          double f_sup);

// Long-run occupation average of f from x0 = 0 over cfg.T with the leading
// burn_fraction discarded; also returns the per-unit-window averages of the
// retained part (for picking deviation levels).
struct LongRunAverage {
    double pi_hat = 0.0;
    std::vector<double> unit_window_averages;
};
LongRunAverage long_run_average(const SimConfig& cfg,
                                const FieldFunctional& f,
                                double burn_fraction,
                                RngStream& rng);

// Direction helper shared by the probes: a field with the given H norm and a
// stream-determined direction (zero field when norm = 0).
SpectralField random_direction(int K, double norm, RngStream& rng);

}  // namespace glsim
