#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "glsim/rng.hpp"
#include "glsim/spectral_field.hpp"

using glsim::apply_fractional;
using glsim::apply_semigroup;
using glsim::nonlinearity;
using glsim::norm_h;
using glsim::norm_l4;
using glsim::norm_sobolev;
using glsim::SpectralField;
using glsim::TrigTransform;

namespace {

SpectralField random_field(int K, std::uint64_t stream, double scale = 1.0) {
    glsim::RngStream rng(77, stream);
    SpectralField x = SpectralField::zero(K);
    for (int i = 0; i < K; ++i) {
        x.a[i] = scale * (2.0 * rng.uniform01() - 1.0) / (1.0 + i);
        x.b[i] = scale * (2.0 * rng.uniform01() - 1.0) / (1.0 + i);
    }
    return x;
}

// Independent projected-cube oracle: expand the field in complex exponentials
// and form the triple convolution term by term, O(K^3).
SpectralField cube_by_convolution(const SpectralField& x) {
    const int K = x.K();
    const std::complex<double> I(0.0, 1.0);
    // c[m + 3K] holds the coefficient of exp(2 pi i m xi), |m| <= 3K.
    std::vector<std::complex<double>> c(6 * K + 1, 0.0);
    const double r = std::sqrt(0.5);
    for (int k = 1; k <= K; ++k) {
        const std::complex<double> ck = r * (x.a[k - 1] - I * x.b[k - 1]);
        c[3 * K + k] = ck;
        c[3 * K - k] = std::conj(ck);
    }
    std::vector<std::complex<double>> cube(6 * K + 1, 0.0);
    for (int p = -K; p <= K; ++p)
        for (int q = -K; q <= K; ++q)
            for (int s = -K; s <= K; ++s) {
                const int m = p + q + s;
                cube[3 * K + m] += c[3 * K + p] * c[3 * K + q] * c[3 * K + s];
            }
    SpectralField out = SpectralField::zero(K);
    for (int k = 1; k <= K; ++k) {
        out.a[k - 1] = std::sqrt(2.0) * cube[3 * K + k].real();
        out.b[k - 1] = -std::sqrt(2.0) * cube[3 * K + k].imag();
    }
    return out;
}

SpectralField shift_field(const SpectralField& x, double s) {
    SpectralField y = x;
    for (int k = 1; k <= x.K(); ++k) {
        const double c = std::cos(2.0 * M_PI * k * s);
        const double sn = std::sin(2.0 * M_PI * k * s);
        y.a[k - 1] = x.a[k - 1] * c + x.b[k - 1] * sn;
        y.b[k - 1] = -x.a[k - 1] * sn + x.b[k - 1] * c;
    }
    return y;
}

double max_coef_diff(const SpectralField& x, const SpectralField& y) {
    double d = 0.0;
    for (int i = 0; i < x.K(); ++i) {
        d = std::max(d, std::abs(x.a[i] - y.a[i]));
        d = std::max(d, std::abs(x.b[i] - y.b[i]));
    }
    return d;
}

}  // namespace

TEST_CASE("norms of simple fields") {
    SpectralField e1 = SpectralField::zero(4);
    e1.a[0] = 1.0;
    CHECK(norm_h(e1) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(norm_sobolev(e1, 0.5) == Catch::Approx(6.2831853071795862).epsilon(1e-13));
    CHECK(norm_l4(e1) == Catch::Approx(1.1066819197003215).epsilon(1e-13));

    SpectralField x = SpectralField::zero(4);
    x.a[0] = 1.0;
    x.b[1] = 1.0;
    CHECK(norm_h(x) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(norm_sobolev(x, 0.25) == Catch::Approx(4.3416075273496055).epsilon(1e-13));

    CHECK(glsim::gamma_k(1) == Catch::Approx(39.478417604357432).epsilon(1e-15));
    CHECK(glsim::gamma_k(3) == Catch::Approx(9.0 * 39.478417604357432).epsilon(1e-15));
}

TEST_CASE("transform round trip and Parseval identity") {
    for (int K : {1, 4, 32, 128}) {
        const SpectralField x = random_field(K, static_cast<std::uint64_t>(K));
        const TrigTransform tr(K, TrigTransform::dealias_points(K));
        std::vector<double> grid;
        tr.synthesize(x, grid);
        const SpectralField back = tr.analyze(grid);
        INFO("K " << K);
        CHECK(max_coef_diff(x, back) < 1e-12);

        double ms = 0.0;
        for (double u : grid) ms += u * u;
        ms /= grid.size();
        const double h2 = norm_h(x) * norm_h(x);
        CHECK(ms == Catch::Approx(h2).epsilon(1e-10));
    }
}

TEST_CASE("projected cubic on a single cosine mode") {
    // x = a cos(2 pi xi): x - x^3 = (a - 3a^3/4) cos(2 pi xi) - (a^3/4) cos(6 pi xi).
    for (double amp : {0.5, 1.0, 2.0}) {
        SpectralField x = SpectralField::zero(4);
        x.a[0] = amp / std::sqrt(2.0);  // basis is sqrt(2) cos
        const SpectralField n = nonlinearity(x);
        INFO("amplitude " << amp);
        CHECK(n.a[0] == Catch::Approx((amp - 0.75 * amp * amp * amp) / std::sqrt(2.0))
                            .margin(1e-12));
        CHECK(n.a[1] == Catch::Approx(0.0).margin(1e-12));
        CHECK(n.a[2] == Catch::Approx(-0.25 * amp * amp * amp / std::sqrt(2.0)).margin(1e-12));
        CHECK(n.b[0] == Catch::Approx(0.0).margin(1e-12));
        CHECK(n.b[2] == Catch::Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("projected cubic matches the convolution oracle") {
    for (int K : {2, 8, 32}) {
        const SpectralField x = random_field(K, 100 + static_cast<std::uint64_t>(K));
        const SpectralField cube = cube_by_convolution(x);
        const SpectralField n = nonlinearity(x);
        SpectralField expected = x;
        for (int i = 0; i < K; ++i) {
            expected.a[i] -= cube.a[i];
            expected.b[i] -= cube.b[i];
        }
        INFO("K " << K);
        CHECK(max_coef_diff(n, expected) < 1e-10);
    }
}

TEST_CASE("projected cubic commutes with torus shifts") {
    const int K = 16;
    const SpectralField x = random_field(K, 7);
    for (double s : {0.1, 0.37, 0.5}) {
        const SpectralField lhs = nonlinearity(shift_field(x, s));
        const SpectralField rhs = shift_field(nonlinearity(x), s);
        INFO("shift " << s);
        CHECK(max_coef_diff(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("semigroup decay, contraction, and smoothing") {
    SpectralField e1 = SpectralField::zero(8);
    e1.a[0] = 1.0;
    const SpectralField d = apply_semigroup(e1, 0.01);
    CHECK(d.a[0] == Catch::Approx(0.67382545123143356).epsilon(1e-13));

    const SpectralField x = random_field(8, 3);
    for (double t : {1e-4, 1e-2, 0.5, 2.0}) {
        const SpectralField y = apply_semigroup(x, t);
        INFO("t " << t);
        CHECK(norm_h(y) <= std::exp(-glsim::gamma_k(1) * t) * norm_h(x) + 1e-14);
        for (double sigma : {0.25, 0.5, 1.0}) {
            // sup_l l^sigma e^{-l t} = (sigma / (e t))^sigma
            const double bound = std::pow(sigma / (M_E * t), sigma) * norm_h(x);
            CHECK(norm_sobolev(y, sigma) <= bound * (1.0 + 1e-12));
        }
    }
    // semigroup property
    const SpectralField two_steps = apply_semigroup(apply_semigroup(x, 0.3), 0.7);
    CHECK(max_coef_diff(two_steps, apply_semigroup(x, 1.0)) < 1e-14);
    CHECK(max_coef_diff(apply_semigroup(x, 0.0), x) == 0.0);
}

TEST_CASE("fractional powers compose") {
    const SpectralField x = random_field(6, 4);
    const SpectralField ab = apply_fractional(apply_fractional(x, 0.25), 0.25);
    CHECK(max_coef_diff(ab, apply_fractional(x, 0.5)) < 1e-12);
    CHECK(max_coef_diff(apply_fractional(x, 0.0), x) < 1e-15);
    for (double sigma : {0.25, 0.5}) {
        CHECK(norm_sobolev(x, sigma) ==
              Catch::Approx(norm_h(apply_fractional(x, sigma))).epsilon(1e-13));
    }
}

TEST_CASE("interpolation inequalities hold on random fields") {
    for (int i = 0; i < 50; ++i) {
        const SpectralField x = random_field(16, 200 + static_cast<std::uint64_t>(i),
                                             i % 5 == 0 ? 10.0 : 1.0);
        const glsim::EmbeddingReport rep = glsim::verify_embedding_inequalities(x);
        INFO("case " << i);
        CHECK(rep.l4_le_vh);
        CHECK(rep.vh_le_v4);
        CHECK(rep.cubic_ratio_finite);
        CHECK(rep.cubic_ratio >= 0.0);
    }
}

TEST_CASE("transform input validation") {
    CHECK_THROWS_AS(TrigTransform(0, 5), std::invalid_argument);
    CHECK_THROWS_AS(TrigTransform(4, 16), std::invalid_argument);  // needs 17
    const TrigTransform tr(4, 17);
    std::vector<double> wrong(16, 0.0);
    CHECK_THROWS_AS(tr.analyze(wrong), std::invalid_argument);
    std::vector<double> grid;
    CHECK_THROWS_AS(tr.synthesize(SpectralField::zero(3), grid), std::invalid_argument);
    CHECK(TrigTransform::dealias_points(32) == 129);
}

TEST_CASE("nonlinearity rejects non-finite grids") {
    SpectralField x = SpectralField::zero(4);
    x.a[0] = 1e200;
    CHECK_THROWS_AS(nonlinearity(x), std::overflow_error);
}
