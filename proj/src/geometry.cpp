#include "formred/geometry.hpp"
#include "formred/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace formred {

namespace {

constexpr double kMachEps = std::numeric_limits<double>::epsilon();

Disk diameter_disk(Complex a, Complex b) {
    Complex c = 0.5 * (a + b);
    return {c, std::max(std::abs(a - c), std::abs(b - c))};
}

// circumscribed disk, or the widest diameter disk when the points are collinear
Disk circum_disk(Complex a, Complex b, Complex c) {
    const Complex bp = b - a, cp = c - a;
    const double det = 2 * (bp.real() * cp.imag() - bp.imag() * cp.real());
    const double scale = std::max(std::norm(bp), std::norm(cp));
    if (std::abs(det) <= 1e-14 * scale || scale == 0) {
        Disk best = diameter_disk(a, b);
        for (Disk d : {diameter_disk(a, c), diameter_disk(b, c)})
            if (d.radius > best.radius) best = d;
        return best;
    }
    const double b2 = std::norm(bp), c2 = std::norm(cp);
    const Complex off((cp.imag() * b2 - bp.imag() * c2) / det, (bp.real() * c2 - cp.real() * b2) / det);
    const Complex center = a + off;
    const double r = std::max({std::abs(a - center), std::abs(b - center), std::abs(c - center)});
    return {center, r};
}

} // namespace

bool Disk::contains(Complex p, double rel) const {
    const double slack = rel * radius + 8 * kMachEps * (std::abs(center) + std::abs(p));
    return std::abs(p - center) <= radius + slack;
}

EnclosingDisk enclosing_disk(std::span<const Complex> points, std::uint64_t seed) {
    if (points.empty()) throw Error(ErrorCode::EmptyInput, "no points");
    const std::size_t n = points.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);

    auto P = [&](std::size_t i) { return points[order[i]]; };
    EnclosingDisk out{{P(0), 0.0}, {order[0]}};
    for (std::size_t i = 1; i < n; ++i) {
        if (out.disk.contains(P(i))) continue;
        out = {{P(i), 0.0}, {order[i]}};
        for (std::size_t j = 0; j < i; ++j) {
            if (out.disk.contains(P(j))) continue;
            out = {diameter_disk(P(i), P(j)), {order[i], order[j]}};
            for (std::size_t k = 0; k < j; ++k) {
                if (out.disk.contains(P(k))) continue;
                out = {circum_disk(P(i), P(j), P(k)), {order[i], order[j], order[k]}};
            }
        }
    }
    return out;
}

KDisk smallest_k_disk(std::span<const Complex> points, std::size_t k) {
    const std::size_t n = points.size();
    if (n == 0) throw Error(ErrorCode::EmptyInput, "no points");
    if (k == 0 || k > n) throw Error(ErrorCode::InvalidArgument, "k out of range");
    if (k == n) {
        KDisk all{smallest_enclosing_disk(points), {}};
        all.members.resize(n);
        std::iota(all.members.begin(), all.members.end(), std::size_t{0});
        return all;
    }
    std::optional<Disk> best;
    auto consider = [&](const Disk& d) {
        if (best && d.radius >= best->radius) return;
        std::size_t count = 0;
        for (const auto& p : points)
            if (d.contains(p)) ++count;
        if (count >= k) best = d;
    };
    for (std::size_t i = 0; i < n; ++i) {
        consider({points[i], 0.0});
        for (std::size_t j = i + 1; j < n; ++j) {
            consider(diameter_disk(points[i], points[j]));
            for (std::size_t l = j + 1; l < n; ++l) consider(circum_disk(points[i], points[j], points[l]));
        }
    }
    KDisk out{*best, {}};
    for (std::size_t i = 0; i < n; ++i)
        if (out.disk.contains(points[i])) out.members.push_back(i);
    return out;
}

std::optional<MajorityCluster> detect_majority_cluster(std::span<const Complex> roots, double eps) {
    if (!(eps > 0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    const std::size_t n = roots.size();
    const double reach = 2 * eps * (1 + 1e-12);
    std::optional<MajorityCluster> best;
    for (std::size_t i = 0; i < n; ++i) {
        MajorityCluster cand;
        cand.anchor = i;
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(roots[j] - roots[i]) <= reach) cand.indices.push_back(j);
        cand.k = cand.indices.size();
        if (2 * cand.k < n) continue;
        if (best && cand.k < best->k) continue;
        std::vector<Complex> pts;
        for (auto j : cand.indices) pts.push_back(roots[j]);
        cand.disk = smallest_enclosing_disk(pts);
        if (best && cand.k == best->k && cand.disk.radius >= best->disk.radius) continue;

        bool pairwise = true;
        for (std::size_t a = 0; a < pts.size() && pairwise; ++a)
            for (std::size_t b = a + 1; b < pts.size(); ++b)
                if (std::abs(pts[a] - pts[b]) > reach) {
                    pairwise = false;
                    break;
                }
        if (pairwise && cand.disk.radius > reach / std::sqrt(3.0) * (1 + 1e-9) + 8 * kMachEps * std::abs(cand.disk.center))
            throw std::logic_error("cluster radius exceeds 2 eps / sqrt 3");
        best = std::move(cand);
    }
    return best;
}

ClusterSplit split_half(std::span<const Complex> roots, std::span<const std::size_t> cluster_indices) {
    const std::size_t n = roots.size();
    if (n % 2 != 0) throw Error(ErrorCode::OddDegree, "half splits need even degree");
    if (cluster_indices.size() != n / 2)
        throw Error(ErrorCode::WrongClusterSize, "cluster has " + std::to_string(cluster_indices.size()) +
                                                     " roots, expected " + std::to_string(n / 2));
    std::vector<bool> in(n, false);
    for (auto i : cluster_indices) {
        if (i >= n || in[i]) throw Error(ErrorCode::WrongClusterSize, "bad or repeated cluster index");
        in[i] = true;
    }
    ClusterSplit s;
    std::vector<Complex> p1, p2;
    for (std::size_t i = 0; i < n; ++i) {
        if (in[i]) {
            s.cluster_indices.push_back(i);
            p1.push_back(roots[i]);
        } else {
            s.complement_indices.push_back(i);
            p2.push_back(roots[i]);
        }
    }
    s.disk1 = smallest_enclosing_disk(p1);
    s.disk2 = smallest_enclosing_disk(p2);
    if (s.disk2.radius < s.disk1.radius) {
        std::swap(s.disk1, s.disk2);
        std::swap(s.cluster_indices, s.complement_indices);
        s.swapped = true;
    }
    return s;
}

ClusterSplit attach_covariant(const ClusterSplit& split, std::span<const Complex> roots, UpperHalfPoint z) {
    ClusterSplit s = split;
    const Complex t(z.t, 0.0);
    s.d1 = std::abs(t - s.disk1.center);
    s.d2 = std::abs(t - s.disk2.center);

    auto check = [&](const std::vector<std::size_t>& idx, const Disk& disk, double d) {
        const double r = disk.radius;
        const double tol = 1e-9 * (r + d) + 8 * kMachEps * (std::abs(t) + std::abs(disk.center));
        for (auto i : idx) {
            const double dist = std::abs(t - roots[i]);
            // the lower side only holds with t outside the disk
            if (dist > r + d + tol || (d >= r && dist < d - r - tol))
                throw Error(ErrorCode::TriangleViolation,
                            "root " + std::to_string(i) + " at distance " + std::to_string(dist) +
                                " from t, disk radius " + std::to_string(r) + ", d " + std::to_string(d));
        }
    };
    check(s.cluster_indices, s.disk1, *s.d1);
    check(s.complement_indices, s.disk2, *s.d2);
    return s;
}

} // namespace formred
