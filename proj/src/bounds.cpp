#include "formred/bounds.hpp"
#include "formred/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace formred {

namespace {

double sq(double x) { return x * x; }

std::size_t count_within(std::span<const Complex> roots, const Disk& disk) {
    return static_cast<std::size_t>(
        std::count_if(roots.begin(), roots.end(), [&](Complex a) { return disk.contains(a); }));
}

Context split_context(int n, double eps, const ClusterSplit& s, double u, double c_dist) {
    return {{"n", n},
            {"eps", eps},
            {"r1", s.disk1.radius},
            {"r2", s.disk2.radius},
            {"d1", s.d1.value_or(NAN)},
            {"d2", s.d2.value_or(NAN)},
            {"u", u},
            {"c_dist", c_dist}};
}

} // namespace

std::string_view to_string(Relation r) noexcept {
    switch (r) {
    case Relation::Less: return "<";
    case Relation::LessEqual: return "<=";
    case Relation::Greater: return ">";
    case Relation::GreaterEqual: return ">=";
    }
    return "?";
}

bool compare(double lhs, double rhs, Relation rel) {
    if (std::isnan(lhs) || std::isnan(rhs)) return false;
    const double slack = 1e-9 * std::max(std::abs(lhs), std::abs(rhs));
    switch (rel) {
    case Relation::Less: return lhs < rhs + slack;
    case Relation::LessEqual: return lhs <= rhs + slack;
    case Relation::Greater: return lhs > rhs - slack;
    case Relation::GreaterEqual: return lhs >= rhs - slack;
    }
    return false;
}

BoundReport make_report(std::string name, double lhs, Relation rel, double rhs, Context context) {
    return {std::move(name), lhs, rhs, rel, compare(lhs, rhs, rel), std::move(context)};
}

double EpsilonThresholds::minimum() const {
    return std::min({majority_window, ratio_far, center_distance, real_product, growth_majority, growth_half});
}

EpsilonThresholds thresholds(int n) {
    if (n < 3) throw Error(ErrorCode::DegreeTooLow, "thresholds need n >= 3");
    const double N = n;
    EpsilonThresholds t;
    t.n = n;
    t.majority_window = 1.0 / (100 * N * N * (2 * N + 3));
    t.ratio_far = 1.0 / (N * (4 * N * N + 1));
    t.center_distance = 1.0 / (100 * N * sq(2 * N + 3));
    t.real_product = 3.0 / (104 * N * N * (N + 1));
    t.growth_majority = 1.0 / (32 * (N + 1));
    t.growth_half = 1.0 / (4 * N * N);
    return t;
}

std::array<BoundReport, 2> count_bounds(int n, int k, double R, double u) {
    if (!(R > 0) || !(u > 0) || k < 0 || k > n) throw Error(ErrorCode::InvalidArgument, "count_bounds arguments");
    const double h = n / 2.0;
    Context ctx{{"n", n}, {"k", k}, {"R", R}, {"u", u}};
    return {make_report("count.lower", h * (1 - sq(u / R)), Relation::Less, k, ctx),
            make_report("count.upper", k, Relation::LessEqual, h * (1 + sq(R / u)), ctx)};
}

std::vector<BoundReport> u_upper_majority(int n, int k, double r, double t_minus_c, double u) {
    if (2 * k <= n) throw Error(ErrorCode::NotMajority, "need more than n/2 roots in the disk");
    if (!(r >= 0)) throw Error(ErrorCode::InvalidArgument, "negative radius");
    Context ctx{{"n", n}, {"k", k}, {"r", r}, {"t_minus_c", t_minus_c}, {"u", u}};
    std::vector<BoundReport> out;
    out.push_back(make_report("majority.u_linear", u, Relation::LessEqual, 2 * r * std::sqrt(double(n)), ctx));
    if (std::abs(t_minus_c) > r)
        out.push_back(make_report("majority.u_sharp", u, Relation::LessEqual,
                                  4.0 * k * r / std::sqrt(3.0 * n * (2.0 * k - n)), ctx));
    return out;
}

std::pair<double, double> c0_window(int n, double r0) {
    if (!(r0 >= 0)) throw Error(ErrorCode::InvalidArgument, "negative radius");
    const double s = std::sqrt(double(n));
    return {1 / s - r0, s + r0};
}

BoundReport t_center_majority(int n, double r, double t_minus_c) {
    return make_report("majority.center_distance", std::abs(t_minus_c), Relation::LessEqual, (2.0 * n + 3) * r,
                       {{"n", n}, {"r", r}, {"t_minus_c", t_minus_c}});
}

std::vector<BoundReport> half_split_u(int n, const ClusterSplit& s, double u) {
    if (!s.d1 || !s.d2) throw Error(ErrorCode::MissingDistances, "attach the covariant point first");
    const double r1 = s.disk1.radius, r2 = s.disk2.radius, d1 = *s.d1, d2 = *s.d2;
    const double rn = std::sqrt(double(n));
    Context ctx{{"n", n}, {"r1", r1}, {"r2", r2}, {"d1", d1}, {"d2", d2}, {"u", u}};
    return {make_report("half.u_cluster_side", u, Relation::LessEqual, rn * (d1 + r1), ctx),
            make_report("half.u_complement_side", u, Relation::LessEqual, rn * (d2 + r2), ctx),
            make_report("half.u2_lower", std::abs((d1 - r1) * (d2 - r2)), Relation::LessEqual, u * u, ctx),
            make_report("half.u2_upper", u * u, Relation::LessEqual, std::abs((d1 + r1) * (d2 + r2)), ctx)};
}

std::vector<BoundReport> ratio_bounds(int n, const ClusterSplit& s, double u) {
    if (!s.d1 || !s.d2) throw Error(ErrorCode::MissingDistances, "attach the covariant point first");
    const double r1 = s.disk1.radius, r2 = s.disk2.radius, d1 = *s.d1, d2 = *s.d2;
    if (!(d1 > r1) && !(d2 > r2)) throw Error(ErrorCode::NotApplicable, "t lies in both disks");
    Context ctx{{"n", n}, {"r1", r1}, {"r2", r2}, {"d1", d1}, {"d2", d2}, {"u", u}};
    std::vector<BoundReport> out;
    const double u2 = u * u;
    if (d1 > r1 && r2 > 0)
        out.push_back(make_report("half.ratio_cluster_side", 3.0 / n * (sq(d1 - r1) + u2) / (sq(d2 + r2) + u2),
                                  Relation::LessEqual, r1 / r2, ctx));
    if (d2 > r2 && r1 > 0)
        out.push_back(make_report("half.ratio_complement_side", 3.0 / n * (sq(d2 - r2) + u2) / (sq(d1 + r1) + u2),
                                  Relation::LessEqual, r2 / r1, ctx));
    return out;
}

bool is_real(Complex c) { return std::abs(c.imag()) <= 1e-9 * (1 + std::abs(c)); }

bool is_conjugate(Complex c1, Complex c2) { return std::abs(c1 - std::conj(c2)) <= 1e-9 * (1 + std::abs(c1)); }

std::vector<BoundReport> smallness_case_bounds(int n, double eps, const ClusterSplit& s, double u, double c_dist,
                                               const SmallnessOptions& opts) {
    if (!(eps > 0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    if (!s.d1 || !s.d2) throw Error(ErrorCode::MissingDistances, "attach the covariant point first");
    const double r1 = s.disk1.radius, r2 = s.disk2.radius, d1 = *s.d1, d2 = *s.d2;
    if (r1 > r2) throw Error(ErrorCode::InvalidArgument, "expected r1 <= r2");

    const auto thr = thresholds(n);
    const double N = n;
    const double rn = std::sqrt(N);
    const double se = std::sqrt(eps);
    const double ratio = r2 > 0 ? r1 / r2 : 0.0;
    const double ratio_cap = 10 * N * eps / 3;
    const bool centers_real = is_real(s.disk1.center) && is_real(s.disk2.center);
    const bool r1_small = r1 <= eps;
    const bool u_small = u <= eps;

    std::vector<BoundReport> out;
    auto add = [&](const char* name, double lhs, Relation rel, double rhs, Context extra = {}) {
        Context ctx = split_context(n, eps, s, u, c_dist);
        ctx.insert(ctx.end(), extra.begin(), extra.end());
        out.push_back(make_report(name, lhs, rel, rhs, std::move(ctx)));
    };

    // every statement below sits under the standing assumption r1 <= eps
    if (!r1_small) return out;

    if (u_small && opts.majority_radius) {
        const bool many = *opts.majority_radius <= 2 * eps;
        const bool mirrored = !is_real(s.disk1.center) && is_conjugate(s.disk1.center, s.disk2.center) &&
                              std::abs(r1 - r2) <= 1e-9 * (1 + r2);
        const bool ok = many || centers_real || mirrored;
        add("small_u.alternatives", ok ? 0.0 : 1.0, Relation::LessEqual, 0.0,
            {{"majority_radius", *opts.majority_radius},
             {"im_c1", s.disk1.center.imag()},
             {"im_c2", s.disk2.center.imag()}});
    }

    if (eps < thr.ratio_far && u_small && r2 > 0) {
        if (c_dist >= std::max(4 * r2, 4 * se)) add("far.ratio", ratio, Relation::LessEqual, ratio_cap);
        if (r2 <= se && c_dist > eps + se + r1 + r2) add("tight_far.ratio", ratio, Relation::LessEqual, ratio_cap);
        if (r2 > se && c_dist >= 2 * r2 + r2 * se + r1) add("wide_far.ratio", ratio, Relation::LessEqual, ratio_cap);
    }

    if (eps < thr.center_distance) {
        if (c_dist >= 2 * r2 && d1 > r1 && r2 > 0 && ratio < ratio_cap) {
            add("separated.d2_gap", r2 / 2, Relation::LessEqual, std::abs(d2 - r2));
            add("separated.d1_close", d1, Relation::LessEqual, u + r1);
        }
        if (u_small) add("small_u.d1_window", d1, Relation::LessEqual, 1 / (2 * rn) + eps);
        if (u_small && r2 > 0 && c_dist <= std::max(r1 + r2 + eps + se, 2 * r2 + r2 * se + r1) &&
            std::abs(d1 - r1) >= u / rn && std::abs(c_dist / r2 - 1) >= 64 * N * rn * eps)
            add("small_u.product", r1 * r2, Relation::LessEqual, 1 / (64 * N * N));
    }

    const bool far_case = r2 > 0 && c_dist >= 2 * r2 && ratio <= ratio_cap;
    const bool real_close_case = c_dist <= 2 * r2 && centers_real && r1 * r2 <= 3 / (64 * N * N);
    if (eps <= thr.center_distance && (far_case || real_close_case))
        add("u_large.d1_window", d1, Relation::LessEqual, 1 / (2 * rn) + r1);
    if (eps <= thr.center_distance && far_case)
        add("far_centers.d1_window", d1, Relation::LessEqual, 1 / (2 * rn) + r1);
    if (eps <= thr.real_product && real_close_case)
        add("real_centers.d1_window", d1, Relation::LessEqual, 1 / (2 * rn) + r1);

    if (eps < thr.center_distance) {
        // printed without an eps threshold; gated like the case it serves
        if (r2 <= se && r2 > 0 && ratio < ratio_cap) add("tight_far.u", u, Relation::Less, 20 * N * eps / 7);
        if (r2 > se && c_dist >= 2 * r2 && ratio <= ratio_cap) add("wide_far.u", u, Relation::Less, 8 * rn * eps);
        if (r2 > 0 && (r2 <= se || c_dist >= 2 * r2) && ratio <= ratio_cap)
            add("u_small.ratio", u, Relation::LessEqual, 20 * N * eps / 7);
        if (r2 > se && c_dist <= 2 * r2 && r1 * r2 <= eps * eps)
            add("u_small.product", u, Relation::LessEqual, 2 * se);
        if (r2 > se && c_dist < 2 * r2 && r1 * r2 <= 3 / (64 * N * N)) {
            add("close.u_product", u, Relation::LessEqual, 4 * std::sqrt(N * r1 * r2));
            if (r1 * r2 <= eps * eps) add("close.u_eps", u, Relation::LessEqual, 4 * eps * rn);
        }
    }

    if (r2 <= se && c_dist <= 2 * r2) add("tight_close.u", u, Relation::LessEqual, 4 * std::sqrt(N * eps));

    if (opts.generalized_remark && centers_real && c_dist <= 2 * r2)
        add("real_centers.d1_gap", d1 - r1, Relation::LessEqual,
            std::max(std::sqrt(r1 * r2 * 16 * N / 3), 16 * N * (N + 1) * eps / 3));

    return out;
}

BoundReport u_growth_bound(int n, int k, double eps, double t, double u, long long m, std::optional<double> d1) {
    if (!(u > 0)) throw Error(ErrorCode::NonPositiveU, "u must be positive");
    const auto thr = thresholds(n);
    const double factor = 1 / (sq(t - double(m)) + u * u);
    Context ctx{{"n", n}, {"k", k}, {"eps", eps}, {"t", t}, {"u", u}, {"m", double(m)}};
    if (2 * k > n) {
        if (!(eps <= thr.growth_majority))
            throw Error(ErrorCode::HypothesesNotMet, "eps above 1/(32(n+1))");
        return make_report("growth.majority", factor, Relation::Greater, 2.0, ctx);
    }
    if (2 * k == n && k >= 2) {
        if (!(eps <= thr.growth_half)) throw Error(ErrorCode::HypothesesNotMet, "eps above 1/(4n^2)");
        if (!d1 || !(*d1 <= 1 / (2 * std::sqrt(double(n))) + eps))
            throw Error(ErrorCode::HypothesesNotMet, "d1 outside the window");
        ctx.push_back({"d1", *d1});
        return make_report("growth.half", factor, Relation::GreaterEqual, 8.0 / 7.0, ctx);
    }
    throw Error(ErrorCode::HypothesesNotMet, "fewer than n/2 roots in the disk");
}

std::vector<BoundReport> evaluate_catalog(std::span<const Complex> roots, UpperHalfPoint z, const CatalogOptions& opts) {
    const int n = static_cast<int>(roots.size());
    const double N = n;
    const double rn = std::sqrt(N);
    const double t = z.t, u = z.u;
    const Complex tc(t, 0.0);
    std::vector<BoundReport> out;
    auto append = [&](auto&& reports) {
        for (auto& r : reports) out.push_back(std::move(r));
    };

    std::vector<double> dist(roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) dist[i] = std::abs(tc - roots[i]);
    auto count_in = [&](double R) {
        return static_cast<int>(std::count_if(dist.begin(), dist.end(), [&](double d) { return d <= R; }));
    };

    std::vector<double> radii = {0.1 * u, u / rn, 0.5 * u, u, 2 * u, u * rn, 10 * u};
    radii.insert(radii.end(), dist.begin(), dist.end());
    for (double R : radii)
        if (R > 0) append(count_bounds(n, count_in(R), R, u));

    append(std::array{
        make_report("count.half_at_least", count_in(u * rn), Relation::GreaterEqual, N / 2, {{"n", N}, {"u", u}}),
        make_report("count.half_at_most", count_in(u / rn), Relation::LessEqual, N / 2, {{"n", N}, {"u", u}})});
    for (double eps : opts.eps_values)
        if (u < eps)
            out.push_back(make_report("count.small_u_half", count_in(eps * rn), Relation::GreaterEqual, N / 2,
                                      {{"n", N}, {"u", u}, {"eps", eps}}));

    const std::size_t half_up = (roots.size() + 1) / 2;
    const KDisk half_disk = smallest_k_disk(roots, half_up);
    out.push_back(make_report("half_disk.radius", half_disk.disk.radius, Relation::LessEqual, u * rn,
                              {{"n", N}, {"u", u}}));

    std::size_t beta_small = 0;
    for (double d : dist)
        if (d / u <= 1 / (2 * rn)) ++beta_small;
    out.push_back(make_report("normalized.origin_disk", double(beta_small), Relation::LessEqual, N / 2,
                              {{"n", N}, {"u", u}}));

    // disks holding more than n/2 roots
    std::set<std::vector<std::size_t>> seen;
    std::optional<double> majority_radius;
    for (std::size_t k = roots.size() / 2 + 1; k <= roots.size(); ++k) {
        KDisk kd = smallest_k_disk(roots, k);
        if (!majority_radius) majority_radius = kd.disk.radius;
        if (!seen.insert(kd.members).second) continue;
        const int kk = static_cast<int>(kd.members.size());
        const double r = kd.disk.radius;
        const double tmc = std::abs(tc - kd.disk.center);
        append(u_upper_majority(n, kk, r, tmc, u));
        out.push_back(t_center_majority(n, r, tmc));
        double far = 0;
        for (auto i : kd.members) far = std::max(far, dist[i]);
        out.push_back(make_report("majority.root_distance", far, Relation::LessEqual, (2 * N + 2) * r,
                                  {{"n", N}, {"k", double(kk)}, {"r", r}, {"u", u}}));
        const double r0 = r / u;
        const double c0 = tmc / u;
        auto [lo, hi] = c0_window(n, r0);
        Context ctx{{"n", N}, {"k", double(kk)}, {"r0", r0}, {"c0", c0}};
        out.push_back(make_report("normalized.c0_lower", lo, Relation::LessEqual, c0, ctx));
        out.push_back(make_report("normalized.c0_upper", c0, Relation::LessEqual, hi, ctx));
    }

    if (n % 2 == 0) {
        std::vector<std::vector<std::size_t>> splits = opts.splits;
        if (opts.smallest_half_split) {
            KDisk kd = smallest_k_disk(roots, roots.size() / 2);
            if (kd.members.size() == roots.size() / 2) splits.push_back(kd.members);
        }
        std::set<std::vector<std::size_t>> done;
        for (auto idx : splits) {
            std::sort(idx.begin(), idx.end());
            ClusterSplit s = attach_covariant(split_half(roots, idx), roots, z);
            if (!done.insert(s.cluster_indices).second) continue;
            // the setting is precisely n/2 roots in the first disk
            if (count_within(roots, s.disk1) != roots.size() / 2) continue;
            append(half_split_u(n, s, u));
            try {
                append(ratio_bounds(n, s, u));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NotApplicable) throw;
            }
            const double c_dist = std::abs(s.disk1.center - s.disk2.center);
            SmallnessOptions so{majority_radius, opts.generalized_remark};
            for (double eps : opts.eps_values) append(smallness_case_bounds(n, eps, s, u, c_dist, so));
        }
    }
    return out;
}

} // namespace formred
