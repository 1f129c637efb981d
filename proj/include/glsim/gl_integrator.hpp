#pragma once
// Splitting integrator for the stochastic Ginzburg-Landau equation
//
//   dX + A X dt = (X - X^3) dt + dL_t,   A = -Laplacian on zero-mean fields,
//
// via X = Y + Z: Z is the stochastic convolution, advanced exactly in law by
// the OU module, and Y solves the random PDE  dY/dt = -A Y + N(Y + Z) with
// N(u) = u - u^3, advanced by a first-order exponential integrator
//
//   Y <- e^{-Ah} Y + phi1(h) N(Y + Z),   phi1 = (1 - e^{-gamma_k h})/gamma_k,
//
// with Z frozen at the left endpoint within a step. A step is rejected when
// the nonlinearity overflows or the energy increment violates the dissipation
// budget d||Y||_H^2/dt <= -||Y||_H^4 + C (1 + ||Z||_V^4) by a wide factor;
// the step is then retried at half the size, up to 10 halvings, after which
// the trajectory aborts.

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "glsim/ou_process.hpp"
#include "glsim/spectral_field.hpp"
#include "glsim/stable_noise.hpp"

namespace glsim {

struct SimConfig {
    int K = 32;
    double dt = 1e-3;
    double T = 1.0;
    double alpha = 1.8;
    double beta = 0.8;
    double delta = 0.25;      // exponent of the recorded H_delta norm
    double p = 0.3;           // moment order used by the probes
    int record_stride = 1;    // record every this many steps
    double noise_scale = 1.0; // multiplies the noise kicks; 0 = deterministic

    void validate() const;    // throws std::invalid_argument on bad fields
    NoiseSpectrum spectrum() const { return mode_scales(alpha, beta, K); }
};

class TrajectoryAbort : public std::runtime_error {
public:
    TrajectoryAbort(double time, const std::string& what)
        : std::runtime_error(what), time(time) {}
    double time;
};

struct Trajectory {
    SimConfig config;
    std::vector<double> times;
    std::vector<double> norm_x_h;        // ||X||_H
    std::vector<double> norm_x_h_delta;  // ||X||_{H_delta}
    std::vector<double> norm_y_h;        // ||Y||_H
    std::vector<double> norm_z_v;        // ||Z||_V
    std::map<std::string, std::vector<double>> functional_track;
    // Populated only when SimOptions::record_states is set.
    std::vector<SpectralField> x_states, y_states, z_states;
    long rejected_steps = 0;  // count of halvings across the run
};

using FieldFunctional = std::function<double(const SpectralField&)>;

struct SimOptions {
    bool record_states = false;
    std::vector<std::pair<std::string, FieldFunctional>> functionals;
};

// Advances Y through intervals of length dt. step_y is one attempted
// exponential-integrator step at size h <= dt; advance runs the
// halve-on-rejection driver for a full dt with Z frozen.
class YStepper {
public:
    YStepper(int K, double dt);

    void step_y(SpectralField& y, const SpectralField& z, int level) const;
    // Returns the number of halvings used (0 when the plain step is accepted).
    int advance(SpectralField& y, const SpectralField& z, double t_now) const;

    double dt() const { return dt_; }

    static constexpr int max_halvings = 10;
    static constexpr double energy_guard_c = 100.0;

private:
    struct Tables {
        std::vector<double> decay;  // e^{-gamma_k h}
        std::vector<double> phi1;   // (1 - e^{-gamma_k h}) / gamma_k
    };
    const Tables& tables(int level) const;
    bool accept(const SpectralField& y_old, const SpectralField& y_new,
                const SpectralField& z, double h) const;

    int K_;
    double dt_;
    mutable std::vector<Tables> levels_;  // level j holds step size dt / 2^j
};

// Runs the full splitting scheme from X_0 = x0 (Y_0 = x0, Z_0 = 0), recording
// every record_stride steps including t = 0 and t = T.
Trajectory simulate_trajectory(const SimConfig& cfg,
                               const SpectralField& x0,
                               RngStream& rng,
                               const SimOptions& opts = {});

struct DissipationReport {
    double c_star = 0.0;        // smallest C with
                                // d||Y||^2/dt <= -||Y||^4 + C (1 + ||Z||_V^4)
                                // at every recorded increment
    double sup_z_v4 = 0.0;      // sup over records of ||Z||_V^4
    std::size_t argmax = 0;     // increment index attaining c_star
};
DissipationReport dissipation_check(const Trajectory& traj);

struct YBoundReport {
    bool pass = false;
    double k_hat = 0.0;     // sqrt(C* (1 + sup ||Z||_V^4)), floored at 1
    double bound = 0.0;     // k_hat (1 + 2/(e^T - 1))
    double max_h = 0.0;     // max of ||Y||_H^2 over [T/2, T]
    double slack = 0.0;     // bound - max_h
};
// Checks sup_{t in [T/2, T]} ||Y_t||_H^2 <= K_hat (1 + 2/(e^T - 1)).
// c_star_override replaces the trajectory's own dissipation constant, so a
// family of runs can be tested against one common right-hand side.
YBoundReport ybound_check(const Trajectory& traj, double T, double c_star_override = -1.0);

// Largest step size from which the halve-on-rejection driver still resolves
// the initial cubic collapse of a start with the given H norm: the first
// sub-step needs h ~ 1/(36 norm^2) and halving only covers 2^max_halvings.
// Returns dt unchanged when it is already safe, otherwise the refinement
// rounded so it divides T exactly.
double startup_limited_dt(double dt, double T, double x0_norm);

}  // namespace glsim
