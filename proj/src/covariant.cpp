#include "formred/covariant.hpp"
#include "formred/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace formred {

namespace {

constexpr double kMachEps = std::numeric_limits<double>::epsilon();

// mass and balance equations of the normalized form, plus their Jacobian
// in (tau, s) where dt = u*tau and s = log u
struct System {
    double f1 = 0, g2 = 0;
    double j11 = 0, j12 = 0, j21 = 0, j22 = 0;
    double norm() const { return std::hypot(f1, g2); }
};

System evaluate(std::span<const Complex> roots, double t, double u, bool jacobian) {
    System s;
    // w - 1/2 is split as +-1/2 plus a small part so a tiny cluster
    // balanced against far roots keeps its digits
    int halves = 0;
    double small = 0;
    for (const auto& a : roots) {
        const double x = (t - a.real()) / u;
        const double y = a.imag() / u;
        const double b2 = x * x + y * y;
        const double w = 1.0 / (1.0 + b2);
        if (b2 < 1) {
            ++halves;
            small -= b2 * w;
        } else {
            --halves;
            small += w;
        }
        s.g2 += x * w;
        if (jacobian) {
            const double w2 = w * w;
            s.j11 += -2 * x * w2;
            s.j12 += 2 * b2 * w2;
            s.j21 += w * (1 - 2 * x * x * w);
            s.j22 += x * w * (2 * b2 * w - 1);
        }
    }
    s.f1 = 0.5 * halves + small;
    return s;
}

// rounding floor of the scaled residual at (t,u): each term moves by about
// eps*(|t|+|a|)/u times its weight
double noise_floor(std::span<const Complex> roots, double t, double u) {
    double sum = static_cast<double>(roots.size());
    for (const auto& a : roots) {
        const double x = (t - a.real()) / u;
        const double y = a.imag() / u;
        sum += (std::abs(t) + std::abs(a)) / u / (1 + x * x + y * y);
    }
    return 64 * kMachEps * sum;
}

struct NewtonResult {
    double t, u, res;
    int iterations;
    bool converged;
};

// the equations are half the gradient of phi(t,u) = sum log((|t-a|^2+u^2)/u)
// in (tau, s), which is geodesically convex; phi is the merit function
double potential(std::span<const Complex> roots, double t, double u) {
    double p = static_cast<double>(roots.size()) * std::log(u);
    for (const auto& a : roots) {
        const double x = (t - a.real()) / u;
        const double y = a.imag() / u;
        p += std::log1p(x * x + y * y);
    }
    return p;
}

// follow the geodesic from (t,u) with initial velocity tau*u d/dt + ds*u d/du
std::pair<double, double> geodesic_step(double t, double u, double tau, double ds) {
    const double len = std::hypot(tau, ds);
    if (len == 0) return {t, u};
    // rotate about i so the vertical geodesic e^len i leaves along (tau, ds)
    const double phi = 0.5 * (std::atan2(ds, tau) - std::numbers::pi / 2);
    const double c = std::cos(phi), sn = std::sin(phi);
    const Complex up(0.0, std::exp(len));
    const Complex g = (c * up + sn) / (-sn * up + c);
    return {t + u * g.real(), u * g.imag()};
}

NewtonResult newton(std::span<const Complex> roots, double t, double u, const SolverOptions& opts) {
    const double target = opts.tolerance * static_cast<double>(roots.size());
    System sys = evaluate(roots, t, u, true);
    double res = sys.norm();
    double phi = potential(roots, t, u);
    int it = 0;
    int extra = 0;
    double last_step = INFINITY;
    for (; it < opts.max_newton; ++it) {
        if (!std::isfinite(res)) break;
        // past the target keep going until the step itself is negligible,
        // ill-conditioned splits need it to pin down u
        if (res <= target && (res == 0 || last_step <= 1e-13 || ++extra > 12)) break;
        // riemannian hessian of phi/2 in the frame (u d/dt, u d/du); the
        // off-diagonal entries agree, averaged to keep it symmetric
        const double h11 = sys.j21 - sys.f1;
        const double h12 = 0.5 * (sys.j22 + sys.j11 + sys.g2);
        const double h22 = sys.j12;
        const double det = h11 * h22 - h12 * h12;
        double tau = 0, ds = 0;
        if (det > 0 && h11 > 0 && std::isfinite(det)) {
            tau = (-sys.g2 * h22 + sys.f1 * h12) / det;
            ds = (-sys.f1 * h11 + sys.g2 * h12) / det;
        }
        // slope of phi along the step; steepest descent when newton goes uphill
        double slope = 2 * (sys.g2 * tau + sys.f1 * ds);
        if (!(slope < 0) || !std::isfinite(slope)) {
            tau = -sys.g2;
            ds = -sys.f1;
            slope = -2 * (sys.g2 * sys.g2 + sys.f1 * sys.f1);
        }
        double lam = 1;
        if (std::abs(ds) > 3) lam = 3 / std::abs(ds);
        if (std::abs(tau) > 4) lam = std::min(lam, 4 / std::abs(tau));
        const double phi_noise = 64 * kMachEps * (std::abs(phi) + static_cast<double>(roots.size()));
        bool accepted = false;
        for (int k = 0; k < 60; ++k, lam *= 0.5) {
            const auto [tt, uu] = geodesic_step(t, u, lam * tau, lam * ds);
            if (!(uu > 0) || !std::isfinite(uu) || !std::isfinite(tt)) continue;
            const double trial_phi = potential(roots, tt, uu);
            const bool armijo = trial_phi <= phi + 1e-4 * lam * slope;
            System trial = evaluate(roots, tt, uu, true);
            // near the minimum phi changes below rounding, the residual decides
            const bool flat = std::abs(trial_phi - phi) <= phi_noise && trial.norm() < res;
            if (armijo || flat) {
                t = tt;
                u = uu;
                sys = trial;
                res = trial.norm();
                phi = trial_phi;
                last_step = lam * std::hypot(tau, ds);
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    const bool converged = res <= target || res <= noise_floor(roots, t, u);
    return {t, u, res, it, converged};
}

// floor of the residual over the smallest eigenvalue of the riemannian hessian
double uncertainty_at(std::span<const Complex> roots, double t, double u, double res) {
    const System sys = evaluate(roots, t, u, true);
    const double h11 = sys.j21 - sys.f1;
    const double h12 = 0.5 * (sys.j22 + sys.j11 + sys.g2);
    const double h22 = sys.j12;
    const double tr = h11 + h22;
    const double det = h11 * h22 - h12 * h12;
    const double big = 0.5 * (tr + std::sqrt(std::max(0.0, tr * tr - 4 * det)));
    const double small = big > 0 ? det / big : 0.0;
    // noise_floor carries a 64x margin for the stopping test; a quarter of it here
    const double floor = std::max(res, noise_floor(roots, t, u) / 16);
    if (!(small > 0) || !std::isfinite(small)) return INFINITY;
    return floor / small;
}

// solve the mass equation for u at fixed t; it is increasing in u
double bisect_u(std::span<const Complex> roots, double t, double u) {
    auto f = [&](double uu) { return evaluate(roots, t, uu, false).f1; };
    double lo = u, hi = u;
    for (int k = 0; k < 600 && f(lo) > 0; ++k) lo /= 4;
    for (int k = 0; k < 600 && f(hi) < 0; ++k) hi *= 4;
    for (int k = 0; k < 200 && hi / lo > 1 + 4 * kMachEps; ++k) {
        const double mid = std::sqrt(lo * hi);
        if (f(mid) < 0) lo = mid;
        else hi = mid;
    }
    return std::sqrt(lo * hi);
}

// solve the balance equation for t at fixed u by bisection on a sign change
double bisect_t(std::span<const Complex> roots, double lo, double hi, double u) {
    auto g = [&](double tt) { return evaluate(roots, tt, u, false).g2; };
    if (g(lo) > 0 || g(hi) < 0) return 0.5 * (lo + hi);
    for (int k = 0; k < 200 && hi - lo > 4 * kMachEps * std::max(std::abs(lo), std::abs(hi)); ++k) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double hyperbolic_distance(UpperHalfPoint a, UpperHalfPoint b) {
    return 2 * std::asinh(std::abs(a.as_complex() - b.as_complex()) / (2 * std::sqrt(a.u * b.u)));
}

UpperHalfPoint mobius(const UnimodularMatrix& g, UpperHalfPoint z) {
    return UpperHalfPoint::from_complex(g.apply(z.as_complex()));
}

Residuals residuals(std::span<const Complex> roots, double t, double u) {
    if (!(u > 0)) throw Error(ErrorCode::NonPositiveU, "u must be positive");
    Residuals r;
    const double u2 = u * u;
    for (const auto& a : roots) {
        const Complex diff = t - a;
        const double denom = std::norm(diff) + u2;
        r.mass += u2 / denom;
        r.balance += diff / denom;
    }
    r.mass -= static_cast<double>(roots.size()) / 2;
    return r;
}

double scaled_residual(std::span<const Complex> roots, UpperHalfPoint z) {
    if (!(z.u > 0)) throw Error(ErrorCode::NonPositiveU, "u must be positive");
    return evaluate(roots, z.t, z.u, false).norm();
}

void check_multiplicity(std::span<const Complex> roots) {
    const std::size_t n = roots.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double tol = 1e-12 * std::max(1.0, std::abs(roots[i]));
        std::size_t count = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(roots[j] - roots[i]) <= tol) ++count;
        // n/2 copies of a non-real point is a power of a definite quadratic,
        // whose covariant is that point
        if (2 * count > n || (2 * count == n && roots[i].imag() == 0))
            throw Error(ErrorCode::DegenerateCluster,
                        std::to_string(count) + " of " + std::to_string(n) + " roots coincide");
    }
}

CovariantSolution solve_covariant(std::span<const Complex> roots, const SolverOptions& opts) {
    const std::size_t n = roots.size();
    if (n < 3) throw Error(ErrorCode::DegreeTooLow, "need at least 3 roots");
    if (!(opts.tolerance > 0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
    for (const auto& a : roots)
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw Error(ErrorCode::InvalidArgument, "non-finite root");
    if (pair_conjugates(roots).worst_mismatch > 1e-9)
        throw Error(ErrorCode::ConjugacyViolation, "roots are not closed under conjugation");
    check_multiplicity(roots);

    double t = 0;
    double lo = roots[0].real(), hi = roots[0].real();
    for (const auto& a : roots) {
        t += a.real();
        lo = std::min(lo, a.real());
        hi = std::max(hi, a.real());
    }
    t /= static_cast<double>(n);
    double spread = 0;
    for (const auto& a : roots) spread += std::norm(a - t);
    double u = std::max(std::sqrt(spread / static_cast<double>(n)), 1e-6);

    CovariantSolution sol;
    NewtonResult nr = newton(roots, t, u, opts);
    sol.newton_iterations = nr.iterations;
    if (!nr.converged) {
        sol.used_fallback = true;
        if (nr.res < evaluate(roots, t, u, false).norm()) {
            t = nr.t;
            u = nr.u;
        }
        const double target = opts.tolerance * static_cast<double>(n);
        for (int round = 0; round < opts.max_bisection; ++round) {
            const double u_new = bisect_u(roots, t, u);
            const double t_new = lo < hi ? bisect_t(roots, lo, hi, u_new) : lo;
            const bool still = std::abs(t_new - t) <= 4 * kMachEps * (std::abs(t) + u_new) &&
                               std::abs(std::log(u_new / u)) <= 4 * kMachEps;
            t = t_new;
            u = u_new;
            if (still || evaluate(roots, t, u, false).norm() <= target) break;
        }
        nr = newton(roots, t, u, opts);
        sol.newton_iterations += nr.iterations;
    }
    if (!nr.converged)
        throw Error(ErrorCode::NoConvergence, "covariant solver stalled at scaled residual " + std::to_string(nr.res));

    sol.z = {nr.t, nr.u};
    sol.scaled_residual = nr.res;
    sol.uncertainty = uncertainty_at(roots, nr.t, nr.u, nr.res);
    sol.residuals = residuals(roots, nr.t, nr.u);
    return sol;
}

CovariantSolution solve_covariant(const BinaryForm& form, const SolverOptions& opts) {
    const int m = form.infinite_roots();
    if (m == 0) return solve_covariant(form.roots(), opts);
    // move every root into the finite plane with g = [[a, -1], [1, 0]], a an
    // integer clear of the real roots, then carry the answer back by g
    auto finite = form.roots();
    double centre = 0;
    for (const auto& r : finite) centre += r.real();
    if (!finite.empty()) centre /= static_cast<double>(finite.size());
    std::int64_t a = static_cast<std::int64_t>(std::llround(centre));
    for (std::int64_t k = 0;; ++k) {
        const std::int64_t cand = a + (k % 2 ? (k + 1) / 2 : -(k / 2));
        bool clear = true;
        for (const auto& r : finite)
            if (r.imag() == 0 && std::abs(r.real() - double(cand)) < 0.25) clear = false;
        if (clear) {
            a = cand;
            break;
        }
    }
    const UnimodularMatrix g{a, -1, 1, 0};
    const BinaryForm moved = act(form, g);
    CovariantSolution sol = solve_covariant(moved.roots(), opts);
    sol.z = mobius(g, sol.z);
    sol.residuals = residuals(finite, sol.z.t, sol.z.u);
    sol.residuals.mass -= 0.5 * m;
    return sol;
}

NormalizedForm normalize(std::span<const Complex> roots, UpperHalfPoint z) {
    if (!(z.u > 0)) throw Error(ErrorCode::NonPositiveU, "u must be positive");
    const double n = static_cast<double>(roots.size());
    if (scaled_residual(roots, z) > 1e-8 * n)
        throw Error(ErrorCode::BadCovariant, "point does not satisfy the covariant equations");
    NormalizedForm g;
    g.betas.reserve(roots.size());
    for (const auto& a : roots) g.betas.push_back((z.t - a) / z.u);
    return g;
}

SpherePoint lift_to_sphere(Complex beta) {
    const double r = std::abs(beta);
    if (r <= 1) {
        const double r2 = r * r;
        return {2 * beta.real() / (r2 + 1), 2 * beta.imag() / (r2 + 1), (r2 - 1) / (r2 + 1)};
    }
    // divide through by r^2 so large betas stay finite
    const double q = 1 / r;
    const double q2 = q * q;
    const double denom = 1 + q2;
    return {2 * (beta.real() * q) * q / denom, 2 * (beta.imag() * q) * q / denom, (1 - q2) / denom};
}

std::array<double, 3> tangent_sum(std::span<const Complex> roots, UpperHalfPoint z) {
    if (!(z.u > 0)) throw Error(ErrorCode::NonPositiveU, "u must be positive");
    std::array<double, 3> s{0, 0, 0};
    for (const auto& a : roots) {
        auto m = lift_to_sphere((z.t - a) / z.u);
        s[0] += m.m;
        s[1] += m.n;
        s[2] += m.p;
    }
    return s;
}

} // namespace formred
