#include "formred/forms.hpp"
#include "formred/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace formred {

namespace {

std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_mul_overflow(x, y, &r)) throw Error(ErrorCode::MatrixOverflow, "matrix entry overflow");
    return r;
}

std::int64_t checked_add(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_add_overflow(x, y, &r)) throw Error(ErrorCode::MatrixOverflow, "matrix entry overflow");
    return r;
}

std::int64_t checked_sub(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_sub_overflow(x, y, &r)) throw Error(ErrorCode::MatrixOverflow, "determinant overflow");
    return r;
}

bool all_finite(std::span<const double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

std::int64_t UnimodularMatrix::determinant() const {
    return checked_sub(checked_mul(a, d), checked_mul(b, c));
}

Complex UnimodularMatrix::apply(Complex z) const {
    return (static_cast<double>(a) * z + static_cast<double>(b)) /
           (static_cast<double>(c) * z + static_cast<double>(d));
}

UnimodularMatrix operator*(const UnimodularMatrix& x, const UnimodularMatrix& y) {
    return {checked_add(checked_mul(x.a, y.a), checked_mul(x.b, y.c)),
            checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.d)),
            checked_add(checked_mul(x.c, y.a), checked_mul(x.d, y.c)),
            checked_add(checked_mul(x.c, y.b), checked_mul(x.d, y.d))};
}

std::vector<Complex> aberth_roots(std::span<const double> coeffs, const RootFinderOptions& opts) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    if (n < 1) throw Error(ErrorCode::DegreeTooLow, "need at least one root");
    if (coeffs[0] == 0.0) throw Error(ErrorCode::ZeroLeadingCoefficient, "leading coefficient is zero");

    std::vector<double> b(coeffs.size());
    std::vector<double> babs(coeffs.size());
    double bound = 0;
    for (int k = 0; k <= n; ++k) {
        b[k] = coeffs[k] / coeffs[0];
        babs[k] = std::abs(b[k]);
        if (k > 0) bound = std::max(bound, babs[k]);
    }
    const double radius = 1.0 + bound;

    std::vector<Complex> z(n);
    for (int k = 0; k < n; ++k)
        z[k] = std::polar(radius, 2 * std::numbers::pi * k / n + 0.4);

    auto eval = [&](Complex x, Complex& p, Complex& dp, double& scale) {
        p = 1.0;
        dp = 0.0;
        scale = 1.0;
        const double ax = std::abs(x);
        for (int k = 1; k <= n; ++k) {
            dp = dp * x + p;
            p = p * x + b[k];
            scale = scale * ax + babs[k];
        }
    };

    auto residual_ok = [&](Complex x) {
        Complex p, dp;
        double scale;
        eval(x, p, dp, scale);
        return std::abs(p) <= opts.tolerance * scale;
    };

    int polish = 0;
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        for (int i = 0; i < n; ++i) {
            Complex p, dp;
            double scale;
            eval(z[i], p, dp, scale);
            if (p == 0.0) continue;
            Complex sum = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                Complex diff = z[i] - z[j];
                if (diff == 0.0) diff = Complex(1e-300, 1e-300);
                sum += 1.0 / diff;
            }
            Complex ratio = dp == 0.0 ? Complex(1e-8 * (1 + std::abs(z[i])), 0) : p / dp;
            Complex denom = 1.0 - ratio * sum;
            Complex w = denom == 0.0 ? ratio : ratio / denom;
            if (std::isfinite(w.real()) && std::isfinite(w.imag())) z[i] -= w;
        }
        bool ok = std::all_of(z.begin(), z.end(), residual_ok);
        // a couple of extra sweeps once the tolerance is met buys the last digits
        if (ok && ++polish > 2) return z;
    }
    if (std::all_of(z.begin(), z.end(), residual_ok)) return z;
    throw Error(ErrorCode::NonConvergentRoots,
                "no convergence after " + std::to_string(opts.max_iter) + " iterations");
}

ConjugatePairing pair_conjugates(std::span<const Complex> roots) {
    struct Candidate {
        double cost;
        std::size_t i, j;
    };
    const std::size_t n = roots.size();
    std::vector<Candidate> cands;
    cands.reserve(n * (n + 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        cands.push_back({2 * std::abs(roots[i].imag()), i, i});
        for (std::size_t j = i + 1; j < n; ++j)
            cands.push_back({std::abs(roots[i] - std::conj(roots[j])), i, j});
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& x, const Candidate& y) { return x.cost < y.cost; });

    struct Entry {
        std::size_t key;
        Complex value;
        bool pair;
    };
    std::vector<Entry> entries;
    std::vector<bool> used(n, false);
    ConjugatePairing out;
    for (const auto& c : cands) {
        if (used[c.i] || used[c.j]) continue;
        used[c.i] = used[c.j] = true;
        double rel = c.cost / (1 + std::abs(roots[c.i]));
        out.worst_mismatch = std::max(out.worst_mismatch, rel);
        if (c.i == c.j) {
            entries.push_back({c.i, Complex(roots[c.i].real(), 0.0), false});
        } else {
            Complex w = 0.5 * (roots[c.i] + std::conj(roots[c.j]));
            if (w.imag() < 0) w = std::conj(w);
            entries.push_back({c.i, w, true});
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) { return x.key < y.key; });
    out.roots.reserve(n);
    for (const auto& e : entries) {
        if (!e.pair) {
            out.roots.push_back(e.value);
        } else if (e.value.imag() == 0.0) {
            out.roots.push_back(e.value);
            out.roots.push_back(e.value);
        } else {
            out.roots.push_back(e.value);
            out.roots.push_back(std::conj(e.value));
        }
    }
    return out;
}

BinaryForm BinaryForm::from_coeffs(std::span<const double> coeffs, const RootFinderOptions& opts) {
    if (coeffs.empty()) throw Error(ErrorCode::DegreeTooLow, "no coefficients");
    if (!all_finite(coeffs)) throw Error(ErrorCode::InvalidArgument, "non-finite coefficient");
    if (coeffs[0] == 0.0) throw Error(ErrorCode::ZeroLeadingCoefficient, "leading coefficient is zero");
    if (coeffs.size() < 4)
        throw Error(ErrorCode::DegreeTooLow, "degree " + std::to_string(coeffs.size() - 1) + " < 3");
    BinaryForm f;
    f.roots_ = pair_conjugates(aberth_roots(coeffs, opts)).roots;
    f.leading_ = coeffs[0];
    f.input_coeffs_ = std::vector<double>(coeffs.begin(), coeffs.end());
    return f;
}

BinaryForm BinaryForm::from_roots(std::span<const Complex> roots, double leading, double conj_tol) {
    return from_projective_roots(roots, 0, leading, conj_tol);
}

BinaryForm BinaryForm::from_projective_roots(std::span<const Complex> roots, int infinite, double leading,
                                             double conj_tol) {
    if (infinite < 0) throw Error(ErrorCode::InvalidArgument, "negative count of roots at infinity");
    const std::size_t n = roots.size() + static_cast<std::size_t>(infinite);
    if (n < 3) throw Error(ErrorCode::DegreeTooLow, "degree " + std::to_string(n) + " < 3");
    if (!std::isfinite(leading)) throw Error(ErrorCode::InvalidArgument, "non-finite leading coefficient");
    if (leading == 0.0) throw Error(ErrorCode::ZeroLeadingCoefficient, "leading coefficient is zero");
    for (const auto& r : roots)
        if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
            throw Error(ErrorCode::InvalidArgument, "non-finite root");
    auto paired = pair_conjugates(roots);
    if (paired.worst_mismatch > conj_tol)
        throw Error(ErrorCode::ConjugacyViolation,
                    "roots are not closed under conjugation (mismatch " + std::to_string(paired.worst_mismatch) + ")");
    BinaryForm f;
    f.roots_ = std::move(paired.roots);
    f.leading_ = leading;
    f.infinite_ = infinite;
    return f;
}

BinaryForm act(const BinaryForm& form, const UnimodularMatrix& g) {
    if (g.determinant() != 1) throw Error(ErrorCode::DeterminantNotOne, "matrix determinant is not 1");
    const double a = static_cast<double>(g.a), b = static_cast<double>(g.b);
    const double c = static_cast<double>(g.c), d = static_cast<double>(g.d);

    // X - alpha Z  ->  (a - c alpha) X + (b - d alpha) Z
    BinaryForm out;
    out.roots_.reserve(form.roots_.size() + static_cast<std::size_t>(form.infinite_));
    double leading = form.leading_;
    const auto& roots = form.roots_;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const Complex alpha = roots[i];
        const Complex denom = a - c * alpha;
        if (alpha.imag() == 0.0) {
            const double x = alpha.real();
            if (std::abs(denom.real()) <= 1e-12 * (std::abs(a) + std::abs(c) * std::abs(x))) {
                ++out.infinite_;
                leading *= b - d * x;
            } else {
                out.roots_.push_back(Complex((d * x - b) / denom.real(), 0.0));
                leading *= denom.real();
            }
        } else {
            // a non-real root never reaches infinity
            Complex beta = (d * alpha - b) / denom;
            if (beta.imag() < 0) beta = std::conj(beta);
            out.roots_.push_back(beta);
            out.roots_.push_back(std::conj(beta));
            leading *= std::norm(denom);
            ++i;
        }
    }
    // Z  ->  c X + d Z
    for (int k = 0; k < form.infinite_; ++k) {
        if (g.c != 0) {
            out.roots_.push_back(Complex(-d / c, 0.0));
            leading *= c;
        } else {
            ++out.infinite_;
            leading *= d;
        }
    }
    if (leading == 0.0 || !std::isfinite(leading))
        throw Error(ErrorCode::DegreeDrop, "leading coefficient lost to rounding");
    out.leading_ = leading;
    return out;
}

std::vector<double> expand(const BinaryForm& form) {
    std::vector<double> p{form.leading()};
    auto roots = form.roots();
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (roots[i].imag() == 0.0) {
            const double r = roots[i].real();
            p.push_back(0.0);
            for (std::size_t k = p.size() - 1; k > 0; --k) p[k] -= r * p[k - 1];
        } else {
            const double s = 2 * roots[i].real();
            const double q = std::norm(roots[i]);
            p.push_back(0.0);
            p.push_back(0.0);
            for (std::size_t k = p.size() - 1; k > 0; --k) {
                p[k] -= s * p[k - 1];
                if (k >= 2) p[k] += q * p[k - 2];
            }
            ++i;
        }
    }
    p.insert(p.begin(), static_cast<std::size_t>(form.infinite_roots()), 0.0);
    return p;
}

double relative_coeff_error(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) return std::numeric_limits<double>::infinity();
    double diff = 0, scale = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        diff = std::max(diff, std::abs(x[i] - y[i]));
        scale = std::max(scale, std::abs(y[i]));
    }
    return scale > 0 ? diff / scale : diff;
}

} // namespace formred
