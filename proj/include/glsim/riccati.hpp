#pragma once
// The scalar comparison ODE  g' = -g^2 + Kc^2,  g(0) = g0 >= 0, Kc > 0,
// which dominates the energy h(t) = ||Y_t||_H^2 of the integrator's Y
// component. Closed form, an independent RK4 solver, the half-interval
// bound sup_{t in [T/2, T]} g(t) <= Kc (1 + 2/(e^T - 1)) valid for every
// g0 >= 0 when Kc >= 1 (callers floor Kc at 1), and a trace checker
// h(t_i) <= g(t_i) (1 + tol).

#include <cstddef>
#include <vector>

namespace glsim {

struct RiccatiInput {
    double g0 = 0.0;
    double Kc = 1.0;
};

double riccati_explicit(const RiccatiInput& in, double t);

// Classic RK4 on the given strictly increasing grid (grid[0] is the initial
// time, where g = g0). Returns g at every grid point.
std::vector<double> riccati_numeric(const RiccatiInput& in, const std::vector<double>& grid);

double halfinterval_bound(double Kc, double T);

struct ComparisonReport {
    bool pass = true;
    double max_rel_violation = 0.0;    // max over grid of h/g - 1, clamped at 0
    std::size_t first_violation = 0;   // grid index, valid when !pass
};

// Verifies h(t_i) <= g(t_i) (1 + rel_tol) where g solves the ODE with the
// given Kc, started from g = h[0] at times[0].
ComparisonReport comparison_verify(const std::vector<double>& times,
                                   const std::vector<double>& h,
                                   double Kc,
                                   double rel_tol = 1e-6);

}  // namespace glsim
