#include "glsim/ou_process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace glsim {

OuTransition::OuTransition(const NoiseSpectrum& sp, double h_, double noise_scale)
    : h(h_), alpha(sp.alpha) {
    if (!(h > 0.0)) throw std::invalid_argument("OuTransition: h must be positive");
    if (!(noise_scale >= 0.0)) throw std::invalid_argument("OuTransition: noise_scale must be nonnegative");
    const int K = sp.K();
    decay.resize(K);
    kick.resize(K);
    for (int k = 1; k <= K; ++k) {
        const double g = gamma_k(k);
        decay[k - 1] = std::exp(-g * h);
        const double sigma = std::pow(-std::expm1(-alpha * g * h) / (alpha * g), 1.0 / alpha);
        kick[k - 1] = noise_scale * sp.mode_scales[k - 1] * sigma;
    }
}

void ou_step(SpectralField& z, const OuTransition& tr, RngStream& rng) {
    const int K = z.K();
    if (K != static_cast<int>(tr.decay.size())) {
        throw std::invalid_argument("ou_step: field and transition have different K");
    }
    for (int i = 0; i < K; ++i) {
        z.a[i] = tr.decay[i] * z.a[i] + tr.kick[i] * sample_standard_stable(tr.alpha, rng);
    }
    for (int i = 0; i < K; ++i) {
        z.b[i] = tr.decay[i] * z.b[i] + tr.kick[i] * sample_standard_stable(tr.alpha, rng);
    }
}

void ou_step(OuState& state, double h, RngStream& rng) {
    if (state.spectrum == nullptr) throw std::invalid_argument("ou_step: state has no spectrum");
    if (state.field.K() != state.spectrum->K()) {
        throw std::invalid_argument("ou_step: field and spectrum have different K");
    }
    OuTransition tr(*state.spectrum, h);
    ou_step(state.field, tr, rng);
}

namespace {

void check_theta(const NoiseSpectrum& sp, double theta) {
    const double limit = sp.beta - 0.5 / sp.alpha;
    if (!(theta >= 0.0) || !(theta < limit)) {
        throw std::invalid_argument("ou_sup_norm: theta must satisfy 0 <= theta < beta - 1/(2 alpha)");
    }
}

}  // namespace

double ou_sup_norm(const NoiseSpectrum& sp, double theta, double T, double h, RngStream& rng) {
    check_theta(sp, theta);
    if (!(T > 0.0) || !(h > 0.0)) throw std::invalid_argument("ou_sup_norm: T and h must be positive");
    const int n_steps = std::max(1, static_cast<int>(std::ceil(T / h - 1e-12)));
    OuTransition tr(sp, h);
    SpectralField z = SpectralField::zero(sp.K());
    double sup = 0.0;  // grid includes t = 0 where the norm vanishes
    for (int s = 0; s < n_steps; ++s) {
        ou_step(z, tr, rng);
        sup = std::max(sup, norm_sobolev(z, theta));
    }
    return sup;
}

MomentProbeResult maximal_moment_probe(const NoiseSpectrum& sp,
                                       double theta,
                                       double p,
                                       const std::vector<double>& horizons,
                                       int n_traj,
                                       double h,
                                       std::uint64_t master_seed,
                                       std::uint32_t cell) {
    check_theta(sp, theta);
    if (!(p > 0.0) || !(p < sp.alpha)) {
        throw std::invalid_argument("maximal_moment_probe: p must satisfy 0 < p < alpha");
    }
    if (horizons.empty()) throw std::invalid_argument("maximal_moment_probe: empty horizons");
    for (std::size_t i = 1; i < horizons.size(); ++i) {
        if (!(horizons[i] > horizons[i - 1])) {
            throw std::invalid_argument("maximal_moment_probe: horizons must be increasing");
        }
    }
    if (n_traj < 1) throw std::invalid_argument("maximal_moment_probe: n_traj must be positive");

    MomentProbeResult res;
    res.theta = theta;
    res.p = p;
    res.n_traj = n_traj;

    const std::size_t n_h = horizons.size();
    std::vector<int> horizon_step(n_h);
    for (std::size_t i = 0; i < n_h; ++i) {
        horizon_step[i] = std::max(1, static_cast<int>(std::ceil(horizons[i] / h - 1e-12)));
    }
    const int total_steps = horizon_step.back();

    OuTransition tr(sp, h);
    std::vector<double> sum(n_h, 0.0), sumsq(n_h, 0.0);
    for (int j = 0; j < n_traj; ++j) {
        RngStream rng(master_seed, stream_index_for(cell, static_cast<std::uint32_t>(j)));
        SpectralField z = SpectralField::zero(sp.K());
        double running = 0.0;
        std::size_t next = 0;
        for (int s = 1; s <= total_steps; ++s) {
            ou_step(z, tr, rng);
            running = std::max(running, norm_sobolev(z, theta));
            while (next < n_h && s == horizon_step[next]) {
                const double v = std::pow(running, p);
                sum[next] += v;
                sumsq[next] += v * v;
                ++next;
            }
        }
    }

    res.points.resize(n_h);
    for (std::size_t i = 0; i < n_h; ++i) {
        const double mean = sum[i] / n_traj;
        res.points[i].T = horizons[i];
        res.points[i].estimate = mean;
        if (n_traj > 1) {
            const double var = std::max(0.0, (sumsq[i] - n_traj * mean * mean) / (n_traj - 1));
            res.points[i].stderr_ = std::sqrt(var / n_traj);
        }
    }

    res.slope_defined = n_h >= 2 && n_traj >= 2;
    if (res.slope_defined) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (const auto& pt : res.points) {
            const double lx = std::log(pt.T);
            const double ly = std::log(pt.estimate);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double n = static_cast<double>(n_h);
        res.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return res;
}

}  // namespace glsim
