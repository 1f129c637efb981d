#pragma once
// Symmetric alpha-stable increments and the spectral weights of the driving
// noise.
//
// Convention: a standard draw S has characteristic function
//   E[exp(i t S)] = exp(-|t|^alpha),
// so alpha = 2 is Gaussian with variance 2, not 1. Scaled draws multiply by
// sigma, giving exp(-sigma^alpha |t|^alpha).

#include <vector>

#include "glsim/rng.hpp"

namespace glsim {

struct StableParams {
    double alpha = 1.8;  // stability index, restricted to (1, 2]
    double scale = 1.0;  // sigma
};

// Per-mode noise weights beta_k = gamma_k^{-beta} with gamma_k = 4 pi^2 k^2.
// admissible records whether (alpha, beta) lies in the regime
//   alpha in (3/2, 2),  1/2 + 1/(2 alpha) < beta < 3/2 - 1/alpha.
struct NoiseSpectrum {
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> mode_scales;  // index k-1 holds beta_k, k = 1..K
    bool admissible = false;

    int K() const { return static_cast<int>(mode_scales.size()); }
};

// One standard draw via the Chambers-Mallows-Stuck transform, from one
// uniform angle on (-pi/2, pi/2) and one unit exponential. Requires
// alpha in (1, 2]; branch-free over that range (alpha = 2 reduces to
// 2 sin(V) sqrt(W)).
double sample_standard_stable(double alpha, RngStream& rng);

// Increment of the scaled process over a window dt: scale * dt^{1/alpha} * S.
double stable_increment(const StableParams& params, double dt, RngStream& rng);

NoiseSpectrum mode_scales(double alpha, double beta, int K);

}  // namespace glsim
