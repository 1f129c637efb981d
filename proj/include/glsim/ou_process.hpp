#pragma once
// Spectral Ornstein-Uhlenbeck process driven by independent symmetric
// alpha-stable noise per mode coefficient:
//
//   dz = -gamma_k z dt + beta_k dl(t),   one driver each for a_k and b_k.
//
// The one-step update is exact in law: the stochastic convolution
// int_0^h e^{-gamma (h-s)} dl(s) is again alpha-stable with scale
// sigma_k(h) = ((1 - e^{-alpha gamma h}) / (alpha gamma))^{1/alpha}, so
//   z <- e^{-gamma h} z + beta_k sigma_k(h) S.
// There is no time-discretization error; h only sets the observation grid.

#include <cstdint>
#include <vector>

#include "glsim/spectral_field.hpp"
#include "glsim/stable_noise.hpp"

namespace glsim {

struct OuState {
    SpectralField field;
    const NoiseSpectrum* spectrum = nullptr;
};

// Decay and kick factors for one step size, so the hot loop is table lookups
// plus one stable draw per coefficient. noise_scale multiplies every kick
// (0 turns the noise off; used by deterministic runs and sensitivity tests).
struct OuTransition {
    double h = 0.0;
    double alpha = 0.0;
    std::vector<double> decay;  // e^{-gamma_k h}
    std::vector<double> kick;   // noise_scale * beta_k * sigma_k(h)

    OuTransition(const NoiseSpectrum& sp, double h, double noise_scale = 1.0);
};

// Draw order is fixed (a_1..a_K, then b_1..b_K), so shared-seed runs see
// identical noise regardless of what the caller does between steps.
void ou_step(SpectralField& z, const OuTransition& tr, RngStream& rng);
void ou_step(OuState& state, double h, RngStream& rng);

// One path on the grid {0, h, 2h, ...} covering [0, T]; returns
// sup over grid points of ||A^theta Z_t||_H with Z_0 = 0. Requires
// 0 <= theta < beta - 1/(2 alpha), the regime where the sup has moments.
double ou_sup_norm(const NoiseSpectrum& sp, double theta, double T, double h, RngStream& rng);

struct MomentProbePoint {
    double T = 0.0;
    double estimate = 0.0;  // mean of sup^p over trajectories
    double stderr_ = 0.0;
};

struct MomentProbeResult {
    double theta = 0.0;
    double p = 0.0;
    std::vector<MomentProbePoint> points;
    double slope = 0.0;  // least-squares slope of log estimate vs log T
    bool slope_defined = false;
    int n_traj = 0;
};

// Growth of E[sup_{t<=T} ||A^theta Z_t||^p] across horizons. Requires
// 0 < p < alpha. Each trajectory runs once to max(horizons) and records the
// running sup at every horizon, so estimates are nondecreasing pathwise.
MomentProbeResult maximal_moment_probe(const NoiseSpectrum& sp,
                                       double theta,
                                       double p,
                                       const std::vector<double>& horizons,
                                       int n_traj,
                                       double h,
                                       std::uint64_t master_seed,
                                       std::uint32_t cell = 0);

}  // namespace glsim
