#pragma once

// helpers shared by the unit tests and the acceptance suite: random
// conjugate-closed root sets and brute-force oracles written without the
// library's geometry code

#include "formred/forms.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace support {

using formred::Complex;
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline double log_uniform(Rng& rng, double lo, double hi) {
    return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

inline int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// n roots in the box [-box, box]^2, closed under conjugation
inline std::vector<Complex> random_roots(Rng& rng, int n, double box = 10) {
    std::vector<Complex> roots;
    int pairs = pick(rng, 0, n / 2);
    for (int p = 0; p < pairs; ++p) {
        Complex z(uniform(rng, -box, box), uniform(rng, 0.01, box));
        roots.push_back(z);
        roots.push_back(std::conj(z));
    }
    while (static_cast<int>(roots.size()) < n) roots.emplace_back(uniform(rng, -box, box), 0.0);
    return roots;
}

// h conjugate-closed points within radius r of the real point c
inline void add_cluster(Rng& rng, std::vector<Complex>& out, double c, double r, int h) {
    if (h % 2) out.emplace_back(c + uniform(rng, -r, r), 0.0);
    for (int p = 0; p < h / 2; ++p) {
        Complex z = Complex(c, 0) + std::polar(r * std::sqrt(uniform(rng, 0.01, 1)), uniform(rng, 0.1, 3.0));
        out.push_back(z);
        out.push_back(std::conj(z));
    }
}

struct Circle {
    Complex c;
    double r;
};

inline bool inside(const Circle& d, Complex p) {
    return std::abs(p - d.c) <= d.r * (1 + 1e-12) + 1e-15 * (std::abs(d.c) + std::abs(p));
}

// worked relative to a so tiny triangles far from the origin keep their digits
inline std::optional<Circle> circumcircle(Complex a, Complex b, Complex c) {
    const Complex p = b - a, q = c - a;
    const double d = 2 * (p.real() * q.imag() - p.imag() * q.real());
    if (d == 0) return std::nullopt;
    const double p2 = std::norm(p), q2 = std::norm(q);
    const Complex o((q.imag() * p2 - p.imag() * q2) / d, (p.real() * q2 - q.real() * p2) / d);
    const Complex centre = a + o;
    return Circle{centre, std::max({std::abs(o), std::abs(b - centre), std::abs(c - centre)})};
}

// every disk spanned by one, two or three of the points
inline std::vector<Circle> candidate_disks(const std::vector<Complex>& p) {
    std::vector<Circle> out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        out.push_back({p[i], 0});
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            out.push_back({(p[i] + p[j]) / 2.0, std::abs(p[i] - p[j]) / 2});
            for (std::size_t k = j + 1; k < p.size(); ++k)
                if (auto c = circumcircle(p[i], p[j], p[k])) out.push_back(*c);
        }
    }
    return out;
}

// exhaustive smallest disk holding at least k of the points
inline Circle brute_k_disk(const std::vector<Complex>& p, std::size_t k) {
    Circle best{0, std::numeric_limits<double>::infinity()};
    for (const auto& d : candidate_disks(p)) {
        if (d.r >= best.r) continue;
        std::size_t in = 0;
        for (auto q : p) in += inside(d, q);
        if (in >= k) best = d;
    }
    return best;
}

inline Circle brute_sed(const std::vector<Complex>& p) { return brute_k_disk(p, p.size()); }

// the cluster case tree written out as plain nested conditionals
inline std::string oracle_classify(const std::vector<Complex>& roots, double eps) {
    const std::size_t n = roots.size();
    const double N = static_cast<double>(n);
    const double reach = 2 * eps * (1 + 1e-12);

    std::vector<std::size_t> best;
    double best_r = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> nb;
        std::vector<Complex> pts;
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(roots[j] - roots[i]) <= reach) {
                nb.push_back(j);
                pts.push_back(roots[j]);
            }
        double r = brute_sed(pts).r;
        if (nb.size() > best.size() || (nb.size() == best.size() && r < best_r)) {
            best = nb;
            best_r = r;
        }
    }
    if (2 * best.size() < n) return "NoCluster";
    if (2 * best.size() > n) return "Majority";

    std::vector<Complex> a, b;
    for (std::size_t j = 0; j < n; ++j)
        (std::find(best.begin(), best.end(), j) != best.end() ? a : b).push_back(roots[j]);
    Circle d1 = brute_sed(a), d2 = brute_sed(b);
    if (d2.r < d1.r) std::swap(d1, d2);
    const double r1 = d1.r, r2 = d2.r;
    const double dist = std::abs(d1.c - d2.c);
    const double se = std::sqrt(eps);
    const double cap = 10 * N * eps / 3;
    const double ratio = r2 > 0 ? r1 / r2 : 0;
    auto real = [](Complex c) { return std::abs(c.imag()) <= 1e-9 * (1 + std::abs(c)); };

    if (r2 <= se) {
        if (dist <= r1 + r2 + se + eps) {
            return "AllTinyCluster";
        } else {
            if (ratio <= cap) return "FarSmall-RatioSmall";
            else return "FarSmall-RatioLarge";
        }
    } else {
        if (dist >= 2 * r2) {
            if (ratio < cap) return "FarLarge-RatioSmall";
            else return "FarLarge-RatioLarge";
        } else {
            if (brute_k_disk(roots, n / 2 + 1).r <= 2 * eps) {
                return "Close-MajorityRefined";
            } else if (real(d1.c) && real(d2.c)) {
                if (r1 * r2 < 3 / (64 * N * N)) return "Close-RealProductSmall";
                else return "Close-RealProductLarge";
            } else if (std::abs(d1.c - std::conj(d2.c)) <= 1e-9 * (1 + std::abs(d1.c)) &&
                       std::abs(r1 - r2) <= 1e-9 * (1 + r2)) {
                return "Close-ConjugateEqual";
            } else {
                return "Close-GenericCenters";
            }
        }
    }
}

// potential whose minimum is the covariant point, in product form
inline double product_potential(const std::vector<Complex>& roots, double t, double u) {
    double p = 1;
    for (auto a : roots) p *= (std::norm(Complex(t, 0) - a) + u * u) / u;
    return p;
}

} // namespace support
