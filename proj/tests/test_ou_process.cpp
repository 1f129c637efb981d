#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "glsim/ou_process.hpp"
#include "glsim/rng.hpp"
#include "glsim/stats.hpp"

using glsim::mode_scales;
using glsim::NoiseSpectrum;
using glsim::OuTransition;
using glsim::RngStream;
using glsim::SpectralField;

TEST_CASE("transition tables match the closed-form factors") {
    const NoiseSpectrum sp = mode_scales(1.8, 0.8, 4);
    const OuTransition tr(sp, 0.01);
    CHECK(tr.decay[0] == Catch::Approx(0.67382545123143356).epsilon(1e-13));
    // sigma_1(0.01) = ((1 - e^{-alpha gamma_1 h}) / (alpha gamma_1))^{1/alpha}
    CHECK(tr.kick[0] ==
          Catch::Approx(sp.mode_scales[0] * 0.064301026979573753).epsilon(1e-12));

    // At h = 1 the exponential is spent and the kick has reached the
    // stationary scale (1 / (alpha gamma_1))^{1/alpha}.
    const OuTransition stat(sp, 1.0);
    CHECK(stat.kick[0] ==
          Catch::Approx(sp.mode_scales[0] * 0.093608529125762716).epsilon(1e-12));
    CHECK(stat.kick[0] == Catch::Approx(0.0049456984373113739).epsilon(1e-12));
}

TEST_CASE("kick grows with h and decays with k") {
    const NoiseSpectrum sp = mode_scales(1.8, 0.8, 8);
    const OuTransition t1(sp, 0.001), t2(sp, 0.01), t3(sp, 0.1);
    // High modes saturate at the stationary scale, so growth in h is strict
    // only while the exponential is still alive.
    CHECK(t1.kick[0] < t2.kick[0]);
    CHECK(t2.kick[0] < t3.kick[0]);
    for (int i = 0; i < sp.K(); ++i) {
        CHECK(t1.kick[i] <= t2.kick[i]);
        CHECK(t2.kick[i] <= t3.kick[i]);
        CHECK(t1.decay[i] > t2.decay[i]);
    }
    for (int i = 1; i < sp.K(); ++i) {
        CHECK(t2.kick[i] < t2.kick[i - 1]);
        CHECK(t2.decay[i] < t2.decay[i - 1]);
    }
}

TEST_CASE("noise scale zero reduces the step to pure decay") {
    const NoiseSpectrum sp = mode_scales(1.8, 0.8, 4);
    const OuTransition tr(sp, 0.02, 0.0);
    SpectralField z = SpectralField::zero(4);
    z.a[1] = 2.0;
    z.b[3] = -1.0;
    RngStream rng(1, 0);
    ou_step(z, tr, rng);
    CHECK(z.a[1] == Catch::Approx(2.0 * std::exp(-glsim::gamma_k(2) * 0.02)).epsilon(1e-14));
    CHECK(z.b[3] == Catch::Approx(-std::exp(-glsim::gamma_k(4) * 0.02)).epsilon(1e-14));
    CHECK(z.a[0] == 0.0);
}

TEST_CASE("draw order is fixed across step sizes") {
    // With the same stream, two different step sizes must consume the same
    // number of draws and assign them to the same coefficients.
    const NoiseSpectrum sp = mode_scales(1.8, 0.8, 3);
    RngStream r1(9, 5), r2(9, 5);
    SpectralField za = SpectralField::zero(3), zb = SpectralField::zero(3);
    ou_step(za, OuTransition(sp, 0.5), r1);
    ou_step(zb, OuTransition(sp, 0.25), r2);
    const OuTransition ta(sp, 0.5), tb(sp, 0.25);
    for (int i = 0; i < 3; ++i) {
        CHECK(za.a[i] / ta.kick[i] == Catch::Approx(zb.a[i] / tb.kick[i]).epsilon(1e-12));
        CHECK(za.b[i] / ta.kick[i] == Catch::Approx(zb.b[i] / tb.kick[i]).epsilon(1e-12));
    }
}

// The one-step law is exact, so stepping twice with h/2 and once with h from
// the same start must give the same distribution.
TEST_CASE("two half steps match one full step in law") {
    const NoiseSpectrum sp = mode_scales(1.8, 0.8, 1);
    const std::size_t n = 20000;
    const OuTransition half(sp, 0.5), full(sp, 1.0);
    std::vector<double> a(n), b(n);
    for (std::size_t j = 0; j < n; ++j) {
        RngStream r1(31, 2 * j), r2(31, 2 * j + 1);
        SpectralField za = SpectralField::zero(1), zb = SpectralField::zero(1);
        ou_step(za, half, r1);
        ou_step(za, half, r1);
        ou_step(zb, full, r2);
        a[j] = za.a[0];
        b[j] = zb.a[0];
    }
    CHECK(glsim::ks_statistic(a, b) < glsim::ks_threshold(n, n, 0.01));
}

// Independent check of the one-step law: a midpoint Riemann-Stieltjes sum of
// the stochastic convolution integral with 500 sub-steps.
TEST_CASE("one-step law matches a fine-discretization oracle") {
    const NoiseSpectrum sp = mode_scales(1.8, 0.8, 1);
    const double alpha = sp.alpha;
    const double gamma = glsim::gamma_k(1);
    const std::size_t n = 20000;
    const int m = 500;
    std::vector<double> w(m);
    for (int i = 0; i < m; ++i) {
        const double s = (i + 0.5) / m;
        w[i] = std::exp(-gamma * (1.0 - s)) * sp.mode_scales[0] * std::pow(1.0 / m, 1.0 / alpha);
    }
    const OuTransition full(sp, 1.0);
    std::vector<double> exact(n), oracle(n);
    for (std::size_t j = 0; j < n; ++j) {
        RngStream r1(77, 2 * j), r2(77, 2 * j + 1);
        SpectralField z = SpectralField::zero(1);
        ou_step(z, full, r1);
        exact[j] = z.a[0];
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += w[i] * glsim::sample_standard_stable(alpha, r2);
        oracle[j] = s;
    }
    CHECK(glsim::ks_statistic(exact, oracle) < glsim::ks_threshold(n, n, 0.01));
}

TEST_CASE("sup norm path accepts only the regime with moments") {
    const NoiseSpectrum sp = mode_scales(1.8, 0.8, 8);
    RngStream rng(3, 0);
    // beta - 1/(2 alpha) = 0.8 - 0.2777... = 0.5222...
    CHECK_THROWS_AS(glsim::ou_sup_norm(sp, 0.53, 1.0, 0.1, rng), std::invalid_argument);
    CHECK_THROWS_AS(glsim::ou_sup_norm(sp, -0.1, 1.0, 0.1, rng), std::invalid_argument);
    CHECK_THROWS_AS(glsim::ou_sup_norm(sp, 0.5, 0.0, 0.1, rng), std::invalid_argument);
    CHECK_THROWS_AS(glsim::ou_sup_norm(sp, 0.5, 1.0, 0.0, rng), std::invalid_argument);
    const double sup = glsim::ou_sup_norm(sp, 0.5, 1.0, 0.05, rng);
    CHECK(sup > 0.0);
    CHECK(std::isfinite(sup));
}

TEST_CASE("moment probe estimates are nondecreasing in the horizon") {
    const NoiseSpectrum sp = mode_scales(1.8, 0.8, 8);
    const auto res =
        glsim::maximal_moment_probe(sp, 0.5, 0.5, {1.0, 2.0, 4.0, 8.0}, 200, 0.05, 5, 0);
    REQUIRE(res.points.size() == 4);
    for (std::size_t i = 1; i < res.points.size(); ++i) {
        CHECK(res.points[i].estimate >= res.points[i - 1].estimate);
    }
    CHECK(res.slope_defined);
    // sup over a grid of horizons grows no faster than T^{p/alpha} up to
    // slowly varying corrections; p/alpha = 0.2777...
    CHECK(res.slope > 0.0);
    CHECK(res.slope < 0.55);
    for (const auto& pt : res.points) CHECK(pt.stderr_ > 0.0);
}

TEST_CASE("moment probe is deterministic in the seed") {
    const NoiseSpectrum sp = mode_scales(1.8, 0.8, 4);
    const auto r1 = glsim::maximal_moment_probe(sp, 0.5, 0.5, {1.0, 2.0}, 50, 0.05, 5, 3);
    const auto r2 = glsim::maximal_moment_probe(sp, 0.5, 0.5, {1.0, 2.0}, 50, 0.05, 5, 3);
    for (std::size_t i = 0; i < r1.points.size(); ++i) {
        CHECK(r1.points[i].estimate == r2.points[i].estimate);
    }
    CHECK(r1.slope == r2.slope);
}

TEST_CASE("moment probe input validation") {
    const NoiseSpectrum sp = mode_scales(1.8, 0.8, 4);
    CHECK_THROWS_AS(glsim::maximal_moment_probe(sp, 0.5, 1.9, {1.0, 2.0}, 10, 0.1, 1),
                    std::invalid_argument);  // p >= alpha
    CHECK_THROWS_AS(glsim::maximal_moment_probe(sp, 0.5, 0.0, {1.0, 2.0}, 10, 0.1, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(glsim::maximal_moment_probe(sp, 0.5, 0.5, {2.0, 1.0}, 10, 0.1, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(glsim::maximal_moment_probe(sp, 0.5, 0.5, {}, 10, 0.1, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(glsim::maximal_moment_probe(sp, 0.5, 0.5, {1.0, 2.0}, 0, 0.1, 1),
                    std::invalid_argument);
    // single trajectory: estimates exist but no slope is reported
    const auto res = glsim::maximal_moment_probe(sp, 0.5, 0.5, {1.0, 2.0}, 1, 0.1, 1);
    CHECK_FALSE(res.slope_defined);
}

TEST_CASE("state wrapper validation") {
    const NoiseSpectrum sp = mode_scales(1.8, 0.8, 4);
    glsim::OuState state;
    state.field = SpectralField::zero(4);
    RngStream rng(1, 0);
    CHECK_THROWS_AS(ou_step(state, 0.1, rng), std::invalid_argument);  // no spectrum
    state.spectrum = &sp;
    state.field = SpectralField::zero(3);
    CHECK_THROWS_AS(ou_step(state, 0.1, rng), std::invalid_argument);  // K mismatch
    state.field = SpectralField::zero(4);
    ou_step(state, 0.1, rng);
    CHECK(glsim::norm_h(state.field) > 0.0);
}
