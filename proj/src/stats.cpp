#include "glsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace glsim {

MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe out;
    out.n = xs.size();
    if (xs.empty()) return out;
    double s = 0.0;
    for (double x : xs) s += x;
    out.mean = s / xs.size();
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.se = std::sqrt(ss / (xs.size() - 1) / xs.size());
    }
    return out;
}

MeanSe batch_means_se(const std::vector<double>& xs, int n_batches) {
    if (n_batches < 2) throw std::invalid_argument("batch_means_se: need at least 2 batches");
    if (xs.size() < static_cast<std::size_t>(2 * n_batches)) {
        throw std::invalid_argument("batch_means_se: too few samples for the batch count");
    }
    const std::size_t len = xs.size() / n_batches;
    std::vector<double> batch(n_batches);
    for (int b = 0; b < n_batches; ++b) {
        double s = 0.0;
        for (std::size_t i = b * len; i < (b + 1) * len; ++i) s += xs[i];
        batch[b] = s / len;
    }
    MeanSe out = mean_se(batch);
    out.n = xs.size();
    return out;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("linear_fit: need matching vectors with at least 2 points");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double vxx = sxx - sx * sx / n;
    const double vxy = sxy - sx * sy / n;
    const double vyy = syy - sy * sy / n;
    if (vxx <= 0.0) throw std::invalid_argument("linear_fit: x values are degenerate");
    LinearFit fit;
    fit.slope = vxy / vxx;
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.r2 = vyy > 0.0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
    return fit;
}

WilsonInterval wilson_interval(std::size_t k, std::size_t n) {
    if (n == 0) throw std::invalid_argument("wilson_interval: n must be positive");
    if (k > n) throw std::invalid_argument("wilson_interval: k must not exceed n");
    constexpr double z = 1.959963984540054;  // 97.5% normal quantile
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2n = z * z / nn;
    const double denom = 1.0 + z2n;
    const double center = (p + 0.5 * z2n) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + 0.25 * z2n / nn) / denom;
    WilsonInterval w;
    w.p_hat = p;
    // The score interval always contains the MLE; clamping enforces that
    // against rounding at k = 0 and k = n, where center - half is exactly 0
    // (resp. 1) only in exact arithmetic.
    w.lo = std::clamp(center - half, 0.0, p);
    w.hi = std::clamp(center + half, p, 1.0);
    return w;
}

double percentile(std::vector<double> xs, double q) {
    if (xs.empty()) throw std::invalid_argument("percentile: empty sample");
    if (!(q >= 0.0) || !(q <= 1.0)) throw std::invalid_argument("percentile: q must lie in [0,1]");
    std::sort(xs.begin(), xs.end());
    const double pos = q * (xs.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= xs.size()) return xs.back();
    const double frac = pos - lo;
    return xs[lo] * (1.0 - frac) + xs[lo + 1] * frac;
}

double hill_estimate(const std::vector<double>& xs, double tail_fraction) {
    if (!(tail_fraction > 0.0) || !(tail_fraction < 1.0)) {
        throw std::invalid_argument("hill_estimate: tail_fraction must lie in (0,1)");
    }
    std::vector<double> mags;
    mags.reserve(xs.size());
    for (double x : xs) mags.push_back(std::abs(x));
    std::sort(mags.begin(), mags.end(), std::greater<>());
    const std::size_t m = static_cast<std::size_t>(tail_fraction * mags.size());
    if (m < 2 || m + 1 > mags.size()) throw std::invalid_argument("hill_estimate: too few tail samples");
    const double ref = mags[m];
    if (!(ref > 0.0)) throw std::invalid_argument("hill_estimate: tail contains zeros");
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += std::log(mags[i] / ref);
    return static_cast<double>(m) / s;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) {
            ++i;
        } else {
            ++j;
        }
        const double fa = static_cast<double>(i) / a.size();
        const double fb = static_cast<double>(j) / b.size();
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

double ks_threshold(std::size_t n, std::size_t m, double level) {
    if (!(level > 0.0) || !(level < 1.0)) throw std::invalid_argument("ks_threshold: bad level");
    const double c = std::sqrt(-0.5 * std::log(level / 2.0));
    return c * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * m));
}

double chi2_uniform(const std::vector<std::size_t>& counts) {
    if (counts.size() < 2) throw std::invalid_argument("chi2_uniform: need at least 2 bins");
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    if (total == 0) throw std::invalid_argument("chi2_uniform: empty counts");
    const double expected = static_cast<double>(total) / counts.size();
    double stat = 0.0;
    for (std::size_t c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

}  // namespace glsim
