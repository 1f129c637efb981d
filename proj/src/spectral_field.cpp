#include "glsim/spectral_field.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace glsim {

namespace {

void check_same_size(const SpectralField& x) {
    if (x.a.size() != x.b.size()) {
        throw std::invalid_argument("SpectralField: a and b must have equal length");
    }
}

}  // namespace

double gamma_k(int k) {
    return 4.0 * std::numbers::pi * std::numbers::pi * static_cast<double>(k) * k;
}

double norm_h(const SpectralField& x) {
    check_same_size(x);
    double s = 0.0;
    for (int i = 0; i < x.K(); ++i) s += x.a[i] * x.a[i] + x.b[i] * x.b[i];
    return std::sqrt(s);
}

double norm_sobolev(const SpectralField& x, double sigma) {
    check_same_size(x);
    double s = 0.0;
    for (int i = 0; i < x.K(); ++i) {
        const double w = std::pow(gamma_k(i + 1), 2.0 * sigma);
        s += w * (x.a[i] * x.a[i] + x.b[i] * x.b[i]);
    }
    return std::sqrt(s);
}

SpectralField apply_semigroup(const SpectralField& x, double t) {
    check_same_size(x);
    if (!(t >= 0.0)) throw std::invalid_argument("apply_semigroup: t must be nonnegative");
    SpectralField y = x;
    for (int i = 0; i < x.K(); ++i) {
        const double d = std::exp(-gamma_k(i + 1) * t);
        y.a[i] *= d;
        y.b[i] *= d;
    }
    return y;
}

SpectralField apply_fractional(const SpectralField& x, double sigma) {
    check_same_size(x);
    SpectralField y = x;
    for (int i = 0; i < x.K(); ++i) {
        const double w = std::pow(gamma_k(i + 1), sigma);
        y.a[i] *= w;
        y.b[i] *= w;
    }
    return y;
}

TrigTransform::TrigTransform(int K, int n_points) : K_(K), n_(n_points) {
    if (K < 1) throw std::invalid_argument("TrigTransform: K must be at least 1");
    if (n_points < 4 * K + 1) {
        throw std::invalid_argument("TrigTransform: need n_points >= 4K+1 for alias-free cubics");
    }
    cos_table_.resize(static_cast<std::size_t>(K) * n_);
    sin_table_.resize(static_cast<std::size_t>(K) * n_);
    const double sqrt2 = std::numbers::sqrt2;
    for (int k = 1; k <= K; ++k) {
        for (int j = 0; j < n_; ++j) {
            const double theta = 2.0 * std::numbers::pi * k * j / n_;
            cos_table_[(k - 1) * static_cast<std::size_t>(n_) + j] = sqrt2 * std::cos(theta);
            sin_table_[(k - 1) * static_cast<std::size_t>(n_) + j] = sqrt2 * std::sin(theta);
        }
    }
}

void TrigTransform::synthesize(const SpectralField& x, std::vector<double>& grid) const {
    check_same_size(x);
    if (x.K() != K_) throw std::invalid_argument("TrigTransform: field has wrong K");
    grid.assign(n_, 0.0);
    for (int k = 0; k < K_; ++k) {
        const double ak = x.a[k];
        const double bk = x.b[k];
        if (ak == 0.0 && bk == 0.0) continue;
        const double* ct = &cos_table_[k * static_cast<std::size_t>(n_)];
        const double* st = &sin_table_[k * static_cast<std::size_t>(n_)];
        for (int j = 0; j < n_; ++j) grid[j] += ak * ct[j] + bk * st[j];
    }
}

SpectralField TrigTransform::analyze(const std::vector<double>& grid) const {
    if (static_cast<int>(grid.size()) != n_) {
        throw std::invalid_argument("TrigTransform: grid has wrong length");
    }
    SpectralField x = SpectralField::zero(K_);
    const double inv_n = 1.0 / n_;
    for (int k = 0; k < K_; ++k) {
        const double* ct = &cos_table_[k * static_cast<std::size_t>(n_)];
        const double* st = &sin_table_[k * static_cast<std::size_t>(n_)];
        double sa = 0.0, sb = 0.0;
        for (int j = 0; j < n_; ++j) {
            sa += grid[j] * ct[j];
            sb += grid[j] * st[j];
        }
        x.a[k] = sa * inv_n;
        x.b[k] = sb * inv_n;
    }
    return x;
}

const TrigTransform& dealiased_transform(int K) {
    thread_local std::map<int, TrigTransform> cache;
    auto it = cache.find(K);
    if (it == cache.end()) {
        it = cache.emplace(K, TrigTransform(K, TrigTransform::dealias_points(K))).first;
    }
    return it->second;
}

double norm_l4(const SpectralField& x) {
    const TrigTransform& tr = dealiased_transform(x.K());
    thread_local std::vector<double> grid;
    tr.synthesize(x, grid);
    double s = 0.0;
    for (double u : grid) {
        const double u2 = u * u;
        s += u2 * u2;
    }
    return std::pow(s / tr.n_points(), 0.25);
}

SpectralField nonlinearity(const SpectralField& x) {
    const TrigTransform& tr = dealiased_transform(x.K());
    thread_local std::vector<double> grid;
    tr.synthesize(x, grid);
    bool finite = true;
    for (double& u : grid) {
        u = u - u * u * u;
        finite = finite && std::isfinite(u);
    }
    if (!finite) throw std::overflow_error("nonlinearity: grid values are not finite");
    return tr.analyze(grid);
}

EmbeddingReport verify_embedding_inequalities(const SpectralField& x) {
    EmbeddingReport rep;
    const double h2 = norm_h(x) * norm_h(x);
    const double v = norm_sobolev(x, 0.5);
    const double v2 = v * v;
    const double l4 = norm_l4(x);
    const double l4_4 = l4 * l4 * l4 * l4;

    rep.slack_l4_vh = v2 * h2 - l4_4;
    rep.slack_vh_v4 = v2 * v2 - v2 * h2;
    // Quadrature eps: both sides of each inequality are O(norm^4).
    const double tol = 1e-12 * (1.0 + v2 * v2);
    rep.l4_le_vh = rep.slack_l4_vh >= -tol;
    rep.vh_le_v4 = rep.slack_vh_v4 >= -tol;

    // ||x^3||_{L^2} needs a finer grid: x^3 has trig degree 3K, so its square
    // integrates exactly on 6K+1 points.
    const int K = x.K();
    TrigTransform fine(K, 6 * K + 1);
    std::vector<double> grid;
    fine.synthesize(x, grid);
    double s6 = 0.0;
    for (double u : grid) {
        const double u3 = u * u * u;
        s6 += u3 * u3;
    }
    const double cube_l2 = std::sqrt(s6 / fine.n_points());
    const double denom = norm_sobolev(x, 0.25) * norm_sobolev(x, 0.25) * norm_h(x);
    rep.cubic_ratio = denom > 0.0 ? cube_l2 / denom : 0.0;
    rep.cubic_ratio_finite = std::isfinite(rep.cubic_ratio);
    return rep;
}

}  // namespace glsim
