#include "glsim/riccati.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace glsim {

namespace {

void check_input(const RiccatiInput& in) {
    if (!(in.Kc > 0.0)) throw std::invalid_argument("riccati: Kc must be positive");
    if (!(in.g0 >= 0.0)) throw std::invalid_argument("riccati: g0 must be nonnegative");
}

}  // namespace

double riccati_explicit(const RiccatiInput& in, double t) {
    check_input(in);
    if (!(t >= 0.0)) throw std::invalid_argument("riccati_explicit: t must be nonnegative");
    const double K = in.Kc;
    const double diff = in.g0 - K;
    if (diff == 0.0) return K;
    if (std::abs(diff) < 1e-8 * K) {
        // Linearization about the equilibrium; the exact form loses digits here.
        return K + diff * std::exp(-2.0 * K * t);
    }
    // g = K + 2K e^{-2Kt} / (2K/diff - expm1(-2Kt)). Only decaying
    // exponentials appear, so the form survives arbitrarily stiff K t; for
    // g0 > K both denominator terms are positive, and for g0 < K the
    // denominator stays below -1, so neither side cancels.
    const double q_minus_1 = 2.0 * K / diff;
    const double em = std::exp(-2.0 * K * t);
    const double denom = q_minus_1 - std::expm1(-2.0 * K * t);
    return K + 2.0 * K * em / denom;
}

std::vector<double> riccati_numeric(const RiccatiInput& in, const std::vector<double>& grid) {
    check_input(in);
    if (grid.empty()) throw std::invalid_argument("riccati_numeric: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("riccati_numeric: grid must be strictly increasing");
        }
    }
    const double K2 = in.Kc * in.Kc;
    auto f = [K2](double g) { return -g * g + K2; };

    std::vector<double> out(grid.size());
    double g = in.g0;
    out[0] = g;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double dt = grid[i] - grid[i - 1];
        const double k1 = f(g);
        const double k2 = f(g + 0.5 * dt * k1);
        const double k3 = f(g + 0.5 * dt * k2);
        const double k4 = f(g + dt * k3);
        g += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out[i] = g;
    }
    return out;
}

double halfinterval_bound(double Kc, double T) {
    if (!(Kc > 0.0)) throw std::invalid_argument("halfinterval_bound: Kc must be positive");
    if (!(T > 0.0)) throw std::invalid_argument("halfinterval_bound: T must be positive");
    return Kc * (1.0 + 2.0 / std::expm1(T));
}

ComparisonReport comparison_verify(const std::vector<double>& times,
                                   const std::vector<double>& h,
                                   double Kc,
                                   double rel_tol) {
    if (times.size() != h.size() || times.empty()) {
        throw std::invalid_argument("comparison_verify: times and h must match and be nonempty");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(h[i] >= 0.0)) throw std::invalid_argument("comparison_verify: trace must be nonnegative");
        if (i > 0 && !(times[i] > times[i - 1])) {
            throw std::invalid_argument("comparison_verify: times must be increasing");
        }
    }
    RiccatiInput in{h[0], Kc};

    ComparisonReport rep;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double g = riccati_explicit(in, times[i] - times[0]);
        const double rel = g > 0.0 ? h[i] / g - 1.0
                                   : (h[i] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        if (rel > rel_tol && rep.pass) {
            rep.pass = false;
            rep.first_violation = i;
        }
        if (rel > rep.max_rel_violation) rep.max_rel_violation = rel;
    }
    return rep;
}

}  // namespace glsim
