#pragma once
// Real spectral representation of zero-mean fields on the unit torus:
//
//   x(xi) = sum_{k=1..K} a_k sqrt(2) cos(2 pi k xi) + b_k sqrt(2) sin(2 pi k xi)
//
// The basis is orthonormal in L^2(0,1), so ||x||_H^2 = sum_k (a_k^2 + b_k^2),
// and the Laplacian acts diagonally with eigenvalues gamma_k = 4 pi^2 k^2.
// Products are evaluated pseudospectrally on a grid of N >= 4K+1 points, which
// makes the projected cubic alias-free and the L^4 quadrature exact.

#include <vector>

namespace glsim {

struct SpectralField {
    std::vector<double> a;
    std::vector<double> b;

    int K() const { return static_cast<int>(a.size()); }

    static SpectralField zero(int K) {
        SpectralField x;
        x.a.assign(K, 0.0);
        x.b.assign(K, 0.0);
        return x;
    }
};

double gamma_k(int k);  // 4 pi^2 k^2

double norm_h(const SpectralField& x);
double norm_sobolev(const SpectralField& x, double sigma);  // ||A^sigma x||_H
double norm_l4(const SpectralField& x);

SpectralField apply_semigroup(const SpectralField& x, double t);      // e^{-At}, t >= 0
SpectralField apply_fractional(const SpectralField& x, double sigma); // A^sigma

// Galerkin projection of x - x^3 onto modes 1..K (the mean mode is dropped by
// the projection). Throws overflow_error when grid values stop being finite.
SpectralField nonlinearity(const SpectralField& x);

// Checks of the two constant-free interpolation inequalities
//   ||x||_{L4}^4 <= ||x||_V^2 ||x||_H^2 <= ||x||_V^4
// plus the empirical ratio ||x^3||_H / (||A^{1/4} x||_H^2 ||x||_H), whose
// uniform bound carries an unspecified constant.
struct EmbeddingReport {
    bool l4_le_vh = false;
    bool vh_le_v4 = false;
    bool cubic_ratio_finite = false;
    double slack_l4_vh = 0.0;   // ||x||_V^2 ||x||_H^2 - ||x||_{L4}^4
    double slack_vh_v4 = 0.0;   // ||x||_V^4 - ||x||_V^2 ||x||_H^2
    double cubic_ratio = 0.0;
};
EmbeddingReport verify_embedding_inequalities(const SpectralField& x);

// Tabulated evaluation between coefficients and an equispaced grid of
// n_points >= 4K+1 points. synthesize/analyze are exact inverses on the span
// of modes 1..K; analyze of a product of up to three fields is alias-free.
class TrigTransform {
public:
    TrigTransform(int K, int n_points);

    static int dealias_points(int K) { return 4 * K + 1; }

    int K() const { return K_; }
    int n_points() const { return n_; }

    void synthesize(const SpectralField& x, std::vector<double>& grid) const;
    SpectralField analyze(const std::vector<double>& grid) const;

private:
    int K_;
    int n_;
    std::vector<double> cos_table_;  // [K][n], sqrt(2) cos(2 pi k j / n)
    std::vector<double> sin_table_;
};

// Shared per-thread transform for the free functions above.
const TrigTransform& dealiased_transform(int K);

}  // namespace glsim
