#pragma once

#include "formred/forms.hpp"

#include <array>
#include <span>
#include <vector>

namespace formred {

struct UpperHalfPoint {
    double t = 0;
    double u = 1;

    Complex as_complex() const { return {t, u}; }
    static UpperHalfPoint from_complex(Complex z) { return {z.real(), z.imag()}; }
};

// fractional linear action on the covariant point
UpperHalfPoint mobius(const UnimodularMatrix& g, UpperHalfPoint z);

struct Residuals {
    double mass = 0;     // sum u^2/(|t-a|^2+u^2) - n/2
    Complex balance = 0; // sum (t-a)/(|t-a|^2+u^2)
};

Residuals residuals(std::span<const Complex> roots, double t, double u);

// dimensionless residual norm: |mass| + u*|Re balance|
double scaled_residual(std::span<const Complex> roots, UpperHalfPoint z);

struct SolverOptions {
    double tolerance = 1e-11; // on the scaled residual, per root
    int max_newton = 100;
    int max_bisection = 200;
};

struct CovariantSolution {
    UpperHalfPoint z;
    Residuals residuals;
    double scaled_residual = 0;
    int newton_iterations = 0;
    bool used_fallback = false;
    // hyperbolic radius around z that the equations cannot resolve: residual
    // floor over the smallest curvature of the potential
    double uncertainty = 0;
};

// hyperbolic distance in the upper half plane
double hyperbolic_distance(UpperHalfPoint a, UpperHalfPoint b);

CovariantSolution solve_covariant(std::span<const Complex> roots, const SolverOptions& opts = {});
// also handles roots at infinity
CovariantSolution solve_covariant(const BinaryForm& form, const SolverOptions& opts = {});

inline UpperHalfPoint covariant_point(std::span<const Complex> roots, const SolverOptions& opts = {}) {
    return solve_covariant(roots, opts).z;
}

// throws DegenerateCluster when a real point carries >= n/2 of the roots
void check_multiplicity(std::span<const Complex> roots);

struct SpherePoint {
    double m = 0, n = 0, p = -1;
};

struct NormalizedForm {
    std::vector<Complex> betas; // (t - alpha_i)/u
};

NormalizedForm normalize(std::span<const Complex> roots, UpperHalfPoint z);

SpherePoint lift_to_sphere(Complex beta);

std::array<double, 3> tangent_sum(std::span<const Complex> roots, UpperHalfPoint z);

} // namespace formred
