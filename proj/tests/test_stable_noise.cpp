#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "glsim/rng.hpp"
#include "glsim/stable_noise.hpp"
#include "glsim/stats.hpp"

using glsim::mode_scales;
using glsim::NoiseSpectrum;
using glsim::RngStream;
using glsim::sample_standard_stable;
using glsim::StableParams;

namespace {

std::vector<double> draw_standard(double alpha, std::uint64_t stream, std::size_t n) {
    RngStream rng(123, stream);
    std::vector<double> xs(n);
    for (double& x : xs) x = sample_standard_stable(alpha, rng);
    return xs;
}

}  // namespace

// The law is pinned by its characteristic function E cos(tS) = exp(-|t|^alpha).
TEST_CASE("empirical characteristic function matches the target law") {
    const double ts[] = {0.25, 0.5, 1.0, 2.0};
    int stream = 0;
    for (double alpha : {1.6, 1.8, 2.0}) {
        const auto xs = draw_standard(alpha, static_cast<std::uint64_t>(stream++), 200000);
        for (double t : ts) {
            std::vector<double> cs(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) cs[i] = std::cos(t * xs[i]);
            const glsim::MeanSe m = glsim::mean_se(cs);
            const double target = std::exp(-std::pow(t, alpha));
            INFO("alpha " << alpha << " t " << t);
            CHECK(std::abs(m.mean - target) < std::max(0.004, 4.0 * m.se));
        }
    }
}

TEST_CASE("alpha = 2 draws are Gaussian with variance 2") {
    const auto xs = draw_standard(2.0, 10, 1000000);
    double s2 = 0.0, s4 = 0.0;
    for (double x : xs) {
        s2 += x * x;
        s4 += x * x * x * x;
    }
    const double var = s2 / xs.size();
    const double kurt = (s4 / xs.size()) / (var * var);
    // se(var) = var * sqrt(2/n) ~ 0.0028
    CHECK(std::abs(var - 2.0) < 0.01);
    CHECK(std::abs(kurt - 3.0) < 0.05);
}

TEST_CASE("tail index recovered by the Hill estimator") {
    const auto xs = draw_standard(1.6, 11, 200000);
    const double a_hat = glsim::hill_estimate(xs, 0.01);
    CHECK(a_hat > 1.5);
    CHECK(a_hat < 1.7);
}

// Aggregating over a window of length 4 must match a single draw scaled by
// 4^{1/alpha}; this is the self-similarity that the exact transition update
// of the linear equation relies on.
TEST_CASE("increment self-similarity across window lengths") {
    const double alpha = 1.8;
    const StableParams params{alpha, 1.0};
    const std::size_t n = 50000;
    RngStream ra(7, 0), rb(7, 1);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = glsim::stable_increment(params, 4.0, ra);
        double sum = 0.0;
        for (int j = 0; j < 4; ++j) sum += glsim::stable_increment(params, 1.0, rb);
        b[i] = sum;
    }
    const double d = glsim::ks_statistic(a, b);
    CHECK(d < glsim::ks_threshold(n, n, 0.01));
}

TEST_CASE("increment is scale * dt^{1/alpha} * standard draw") {
    RngStream r1(5, 3), r2(5, 3);
    const StableParams params{1.7, 2.5};
    const double inc = glsim::stable_increment(params, 0.01, r1);
    const double s = sample_standard_stable(1.7, r2);
    CHECK(inc == Catch::Approx(2.5 * std::pow(0.01, 1.0 / 1.7) * s).epsilon(1e-14));
}

TEST_CASE("mode scales follow the quadratic spectrum") {
    const NoiseSpectrum sp1 = mode_scales(1.8, 1.0, 8);
    CHECK(sp1.mode_scales[0] == Catch::Approx(0.025330295910584444).epsilon(1e-13));
    const NoiseSpectrum sp = mode_scales(1.8, 0.8, 8);
    CHECK(sp.K() == 8);
    CHECK(sp.mode_scales[0] == Catch::Approx(0.052833844132588029).epsilon(1e-13));
    // beta_{2k} / beta_k = 2^{-2 beta}
    for (int k = 1; 2 * k <= sp.K(); ++k) {
        CHECK(sp.mode_scales[2 * k - 1] / sp.mode_scales[k - 1] ==
              Catch::Approx(0.32987697769322355).epsilon(1e-12));
    }
    for (int k = 1; k <= sp.K(); ++k) {
        const double gamma = 4.0 * M_PI * M_PI * k * k;
        CHECK(sp.mode_scales[k - 1] == Catch::Approx(std::pow(gamma, -0.8)).epsilon(1e-14));
    }
}

TEST_CASE("admissibility window") {
    CHECK(mode_scales(1.8, 0.8, 4).admissible);
    CHECK(mode_scales(1.8, 0.9, 4).admissible);
    // boundary and outside cases
    CHECK_FALSE(mode_scales(1.8, 0.7, 4).admissible);        // below 1/2 + 1/(2 alpha)
    CHECK_FALSE(mode_scales(1.8, 1.0, 4).admissible);        // above 3/2 - 1/alpha
    CHECK_FALSE(mode_scales(1.8, 0.5 + 1.0 / 3.6, 4).admissible);
    CHECK_FALSE(mode_scales(1.5, 0.85, 4).admissible);       // alpha at the edge
    CHECK_FALSE(mode_scales(2.0, 0.8, 4).admissible);        // Gaussian endpoint excluded
    CHECK(mode_scales(1.9, 0.8, 4).admissible);
}

TEST_CASE("parameter validation") {
    RngStream rng(1, 0);
    CHECK_THROWS_AS(sample_standard_stable(1.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_standard_stable(0.5, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_standard_stable(2.1, rng), std::invalid_argument);
    CHECK_THROWS_AS(glsim::stable_increment(StableParams{1.8, 1.0}, 0.0, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(glsim::stable_increment(StableParams{1.8, -1.0}, 1.0, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(mode_scales(1.8, 0.8, 0), std::invalid_argument);
    CHECK_THROWS_AS(mode_scales(1.0, 0.8, 4), std::invalid_argument);
}

TEST_CASE("draws are symmetric") {
    const auto xs = draw_standard(1.8, 12, 200000);
    double s = 0.0;
    std::size_t pos = 0;
    for (double x : xs) {
        s += (x > 0) - (x < 0);
        pos += x > 0;
    }
    // sign balance: se ~ sqrt(n)
    CHECK(std::abs(s) < 4.0 * std::sqrt(static_cast<double>(xs.size())));
    CHECK(pos > xs.size() / 2 - 2000);
    CHECK(pos < xs.size() / 2 + 2000);
}
