#include "glsim/stable_noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace glsim {

double sample_standard_stable(double alpha, RngStream& rng) {
    if (!(alpha > 1.0) || !(alpha <= 2.0)) {
        throw std::invalid_argument("sample_standard_stable: alpha must lie in (1, 2]");
    }
    const double v = std::numbers::pi * (rng.uniform_open() - 0.5);  // (-pi/2, pi/2)
    const double w = rng.exponential();

    // S = sin(alpha v) / cos(v)^{1/alpha} * (cos((1-alpha) v) / w)^{(1-alpha)/alpha}
    const double inv_alpha = 1.0 / alpha;
    const double frac = (1.0 - alpha) * inv_alpha;
    const double cos_v = std::cos(v);
    const double num = std::cos((1.0 - alpha) * v) / w;
    return std::sin(alpha * v) * std::exp(frac * std::log(num) - inv_alpha * std::log(cos_v));
}

double stable_increment(const StableParams& params, double dt, RngStream& rng) {
    if (!(dt > 0.0)) throw std::invalid_argument("stable_increment: dt must be positive");
    if (!(params.scale >= 0.0)) throw std::invalid_argument("stable_increment: scale must be nonnegative");
    return params.scale * std::pow(dt, 1.0 / params.alpha) * sample_standard_stable(params.alpha, rng);
}

NoiseSpectrum mode_scales(double alpha, double beta, int K) {
    if (K < 1) throw std::invalid_argument("mode_scales: K must be at least 1");
    if (!(alpha > 1.0) || !(alpha <= 2.0)) {
        throw std::invalid_argument("mode_scales: alpha must lie in (1, 2]");
    }
    NoiseSpectrum sp;
    sp.alpha = alpha;
    sp.beta = beta;
    sp.mode_scales.resize(K);
    for (int k = 1; k <= K; ++k) {
        const double gamma = 4.0 * std::numbers::pi * std::numbers::pi * k * k;
        sp.mode_scales[k - 1] = std::pow(gamma, -beta);
    }
    const double lower = 0.5 + 0.5 / alpha;
    const double upper = 1.5 - 1.0 / alpha;
    sp.admissible = alpha > 1.5 && alpha < 2.0 && beta > lower && beta < upper;
    return sp;
}

}  // namespace glsim
