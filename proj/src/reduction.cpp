#include "formred/reduction.hpp"
#include "formred/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace formred {

namespace {

struct TagName {
    CaseTag tag;
    std::string_view name;
    std::string_view label;
};

constexpr TagName kTagNames[] = {
    {CaseTag::Majority, "Majority", "2"},
    {CaseTag::AllTinyCluster, "AllTinyCluster", "3a"},
    {CaseTag::FarSmallRatioSmall, "FarSmall-RatioSmall", "3b-i"},
    {CaseTag::FarSmallRatioLarge, "FarSmall-RatioLarge", "3b-ii"},
    {CaseTag::FarLargeRatioSmall, "FarLarge-RatioSmall", "3c"},
    {CaseTag::FarLargeRatioLarge, "FarLarge-RatioLarge", "3c-ii"},
    {CaseTag::CloseMajorityRefined, "Close-MajorityRefined", "3d-i"},
    {CaseTag::CloseGenericCenters, "Close-GenericCenters", "3d-ii"},
    {CaseTag::CloseConjugateEqual, "Close-ConjugateEqual", "3d-iii"},
    {CaseTag::CloseRealProductSmall, "Close-RealProductSmall", "3d-iv"},
    {CaseTag::CloseRealProductLarge, "Close-RealProductLarge", "3d-v"},
    {CaseTag::NoCluster, "NoCluster", "none"},
};

bool near(double x, double threshold) {
    return std::abs(x - threshold) <= 1e-9 * std::max(std::abs(x), std::abs(threshold));
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// covariant point, retried once with a looser tolerance when allowed
CovariantSolution solve(const BinaryForm& f, const SolverOptions& opts, bool widen, std::vector<std::string>& warnings) {
    try {
        return solve_covariant(f, opts);
    } catch (const Error& e) {
        if (!widen || e.code() != ErrorCode::NoConvergence) throw;
        SolverOptions loose = opts;
        loose.tolerance *= 1e3;
        warnings.push_back("covariant solve retried with tolerance " + fmt(loose.tolerance) + ": " + e.what());
        return solve_covariant(f, loose);
    }
}

// relative size of one rounding of the roots, measured against u: how far
// the covariant can move when the roots are stored again in double. A root
// error d moves z by about d u / |alpha - z|^2 in units of u, so far roots
// barely count
double root_rounding(const BinaryForm& f, UpperHalfPoint z) {
    const double e = std::numeric_limits<double>::epsilon();
    const Complex w = z.as_complex();
    double worst = e * std::abs(z.t) / z.u;
    for (const auto& a : f.roots()) worst = std::max(worst, e * std::abs(a) * z.u / std::norm(a - w));
    return worst;
}

class Reducer {
public:
    Reducer(const BinaryForm& form, const ReduceOptions& opts, bool widen)
        : form_(form), opts_(opts), widen_(widen) {
        const CovariantSolution s = solve(form_, opts_.solver, widen_, trace_.warnings);
        z_ = s.z;
        uncertainty_ = s.uncertainty;
        rounding_ = root_rounding(form_, z_);
    }

    bool done() const { return fundamental_status(z_).in_domain; }
    UpperHalfPoint z() const { return z_; }
    const BinaryForm& form() const { return form_; }
    ReductionTrace& trace() { return trace_; }

    // one iteration of the usual loop: translate by round(t), invert if inside the unit circle
    void classic_iteration() {
        const auto m = static_cast<std::int64_t>(std::floor(z_.t + 0.5));
        if (m != 0) {
            const UpperHalfPoint expected{z_.t - double(m), z_.u};
            apply(StepKind::Translate, m, UnimodularMatrix::translation(m), expected, std::nullopt);
        }
        if (std::norm(z_.as_complex()) < 1) {
            const UpperHalfPoint expected = UpperHalfPoint::from_complex(-1.0 / z_.as_complex());
            apply(StepKind::Invert, 0, UnimodularMatrix::inversion(), expected, std::nullopt);
        }
    }

    ReductionStep& apply(StepKind kind, std::int64_t m, const UnimodularMatrix& g, UpperHalfPoint expected,
                         std::optional<CaseTag> tag) {
        if (static_cast<int>(trace_.steps.size()) >= opts_.max_steps)
            throw Error(ErrorCode::StepLimit, "no reduced form after " + std::to_string(opts_.max_steps) + " steps");
        BinaryForm next = act(form_, g);
        const CovariantSolution sol = solve(next, opts_.solver, widen_, trace_.warnings);
        const UpperHalfPoint z_next = sol.z;
        rounding_ += root_rounding(next, z_next);
        // roots known to fewer digits than 1e-7 of the cluster scale cannot
        // pin z down that well; the allowance grows with each re-rounding
        const double tol = std::max(1e-7, 64 * rounding_);
        if (tol > 1e-7 && !widened_) {
            widened_ = true;
            trace_.warnings.push_back("drift tolerance widened to " + fmt(tol) +
                                      ": the roots resolve the cluster to fewer digits");
        }
        const bool close = std::abs(z_next.t - expected.t) <= tol * std::max(1.0, std::abs(expected.t)) &&
                           std::abs(z_next.u - expected.u) <= tol * std::max(1.0, expected.u);
        // a nearly flat potential leaves z loose along a geodesic; both
        // solves are only good to their own uncertainty
        const double loose = 2 * (uncertainty_ + sol.uncertainty);
        if (!close) {
            if (!(hyperbolic_distance(z_next, expected) <= loose))
                throw Error(ErrorCode::CovariantDrift, "recomputed (" + fmt(z_next.t) + ", " + fmt(z_next.u) +
                                                          ") vs expected (" + fmt(expected.t) + ", " +
                                                          fmt(expected.u) + ")");
            trace_.warnings.push_back("covariant is ill-conditioned here: recomputed point within " + fmt(loose) +
                                      " of the expected one");
        }
        ReductionStep step;
        step.kind = kind;
        step.m = m;
        step.tag = tag;
        step.z_before = z_;
        step.z_after = z_next;
        step.u_growth = z_next.u / z_.u;
        trace_.steps.push_back(step);
        trace_.total = trace_.total * g;
        form_ = std::move(next);
        z_ = z_next;
        uncertainty_ = sol.uncertainty;
        return trace_.steps.back();
    }

    ReductionResult finish() {
        trace_.final_z = z_;
        return {std::move(form_), std::move(trace_)};
    }

private:
    BinaryForm form_;
    ReduceOptions opts_;
    bool widen_;
    UpperHalfPoint z_;
    ReductionTrace trace_;
    double rounding_ = 0;
    double uncertainty_ = 0;
    bool widened_ = false;
};

} // namespace

std::string_view to_string(CaseTag tag) noexcept {
    for (const auto& t : kTagNames)
        if (t.tag == tag) return t.name;
    return "Unknown";
}

std::string_view short_label(CaseTag tag) noexcept {
    for (const auto& t : kTagNames)
        if (t.tag == tag) return t.label;
    return "?";
}

std::optional<CaseTag> case_tag_from_string(std::string_view s) {
    for (const auto& t : kTagNames)
        if (t.name == s || t.label == s) return t.tag;
    return std::nullopt;
}

std::string_view to_string(StepKind kind) noexcept {
    switch (kind) {
    case StepKind::Translate: return "Translate";
    case StepKind::Invert: return "Invert";
    case StepKind::ClusterTranslate: return "ClusterTranslate";
    }
    return "Unknown";
}

std::optional<StepKind> step_kind_from_string(std::string_view s) {
    for (auto k : {StepKind::Translate, StepKind::Invert, StepKind::ClusterTranslate})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

bool certifies_small_u(CaseTag tag) {
    switch (tag) {
    case CaseTag::Majority:
    case CaseTag::AllTinyCluster:
    case CaseTag::FarSmallRatioSmall:
    case CaseTag::FarLargeRatioSmall:
    case CaseTag::CloseMajorityRefined:
    case CaseTag::CloseConjugateEqual:
    case CaseTag::CloseRealProductSmall:
    case CaseTag::CloseRealProductLarge: return true;
    default: return false;
    }
}

bool majority_growth(CaseTag tag) {
    return tag == CaseTag::Majority || tag == CaseTag::CloseMajorityRefined || tag == CaseTag::CloseConjugateEqual;
}

Classification classify(const BinaryForm& form, double eps) {
    if (form.infinite_roots() == 0) return classify(form.roots(), eps);
    if (!(eps > 0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    Classification c;
    c.eps = eps;
    c.notes.push_back("form has roots at infinity; no cluster step");
    return c;
}

Classification classify(std::span<const Complex> roots, double eps) {
    if (!(eps > 0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    const std::size_t n = roots.size();
    if (n < 3) throw Error(ErrorCode::DegreeTooLow, "need at least 3 roots");
    const double N = static_cast<double>(n);

    Classification c;
    c.eps = eps;
    c.eps_in_range = eps <= thresholds(static_cast<int>(n)).minimum();
    if (!c.eps_in_range) c.notes.push_back("eps above the smallest threshold; the case bounds are not guaranteed");

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (near(std::abs(roots[i] - roots[j]), 2 * eps)) c.ambiguous = true;
    if (c.ambiguous) c.notes.push_back("a root distance is within rounding of 2 eps");

    c.cluster = detect_majority_cluster(roots, eps);
    if (!c.cluster) {
        c.tag = CaseTag::NoCluster;
        return c;
    }
    c.k = c.cluster->k;
    if (2 * c.k > n) {
        c.tag = CaseTag::Majority;
        c.center = c.cluster->disk.center;
        c.r1 = c.cluster->disk.radius;
        return c;
    }

    c.split = split_half(roots, c.cluster->indices);
    const Disk& d1 = c.split->disk1;
    const Disk& d2 = c.split->disk2;
    c.r1 = d1.radius;
    c.r2 = d2.radius;
    c.c_dist = std::abs(d1.center - d2.center);
    c.ratio = c.r2 > 0 ? c.r1 / c.r2 : 0.0;
    c.product = c.r1 * c.r2;
    c.center = d1.center;

    const double se = std::sqrt(eps);
    const double ratio_cap = 10 * N * eps / 3;
    auto watch = [&](double x, double threshold, const char* what) {
        if (near(x, threshold)) {
            c.ambiguous = true;
            c.notes.push_back(std::string(what) + " is within rounding of its threshold");
        }
    };

    watch(c.r2, se, "r2 vs sqrt(eps)");
    if (c.r2 <= se) {
        const double reach = c.r2 + c.r1 + se + eps;
        watch(c.c_dist, reach, "|c1-c2| vs r1+r2+sqrt(eps)+eps");
        if (c.c_dist <= reach) {
            c.tag = CaseTag::AllTinyCluster;
        } else {
            watch(c.ratio, ratio_cap, "r1/r2 vs 10 n eps/3");
            c.tag = c.ratio <= ratio_cap ? CaseTag::FarSmallRatioSmall : CaseTag::FarSmallRatioLarge;
        }
        return c;
    }

    watch(c.c_dist, 2 * c.r2, "|c1-c2| vs 2 r2");
    if (c.c_dist >= 2 * c.r2) {
        watch(c.ratio, ratio_cap, "r1/r2 vs 10 n eps/3");
        c.tag = c.ratio < ratio_cap ? CaseTag::FarLargeRatioSmall : CaseTag::FarLargeRatioLarge;
        return c;
    }

    const KDisk more = smallest_k_disk(roots, n / 2 + 1);
    watch(more.disk.radius, 2 * eps, "majority radius vs 2 eps");
    if (more.disk.radius <= 2 * eps) {
        c.tag = CaseTag::CloseMajorityRefined;
        c.refined = more.disk;
        c.center = more.disk.center;
        return c;
    }
    if (is_real(d1.center) && is_real(d2.center)) {
        const double cap = 3 / (64 * N * N);
        watch(c.product, cap, "r1 r2 vs 3/(64 n^2)");
        c.tag = c.product < cap ? CaseTag::CloseRealProductSmall : CaseTag::CloseRealProductLarge;
        return c;
    }
    if (is_conjugate(d1.center, d2.center) && std::abs(c.r1 - c.r2) <= 1e-9 * (1 + c.r2)) {
        c.tag = CaseTag::CloseConjugateEqual;
        c.center = Complex(d1.center.real(), 0.0);
        return c;
    }
    c.tag = CaseTag::CloseGenericCenters;
    return c;
}

FundamentalDomainStatus fundamental_status(UpperHalfPoint z) {
    if (!(z.u > 0)) throw Error(ErrorCode::NonPositiveU, "u must be positive");
    FundamentalDomainStatus s;
    const double modulus = std::abs(z.as_complex());
    s.modulus_deficit = std::max(0.0, 1 - modulus);
    s.real_excess = std::max(0.0, std::abs(z.t) - 0.5);
    s.modulus_ok = s.modulus_deficit <= 1e-9;
    s.real_part_ok = s.real_excess <= 1e-9;
    s.in_domain = s.modulus_ok && s.real_part_ok;
    return s;
}

ReductionResult classic_reduce(const BinaryForm& form, const ReduceOptions& opts) {
    Reducer r(form, opts, false);
    while (!r.done()) r.classic_iteration();
    return r.finish();
}

ReductionResult cluster_reduce(const BinaryForm& form, double eps, const ReduceOptions& opts) {
    if (!(eps > 0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    Reducer r(form, opts, true);
    const double n = r.form().degree();
    while (!r.done()) {
        const Classification cls = classify(r.form(), eps);
        const UpperHalfPoint z = r.z();
        bool fire = certifies_small_u(cls.tag);
        if (fire && cls.ambiguous) {
            r.trace().warnings.push_back("case boundary within rounding (" + std::string(to_string(cls.tag)) +
                                         "); took a classic step");
            fire = false;
        }
        if (fire && cls.tag == CaseTag::CloseRealProductLarge && !(z.u <= eps)) fire = false;
        if (!fire) {
            r.classic_iteration();
            continue;
        }

        const auto m = static_cast<std::int64_t>(std::floor(cls.center.real() + 0.5));
        const Complex w = z.as_complex() - double(m);
        const UpperHalfPoint expected = UpperHalfPoint::from_complex(-1.0 / w);
        std::optional<double> d1;
        if (cls.split) d1 = std::abs(z.t - cls.split->disk1.center);
        ReductionStep& step = r.apply(StepKind::ClusterTranslate, m, UnimodularMatrix::cluster_step(m), expected, cls.tag);
        step.d1 = d1;
        const double required = majority_growth(cls.tag) ? 2.0 : 8.0 / 7.0;
        if (step.u_growth < required * (1 - 1e-6)) {
            std::ostringstream os;
            os << to_string(cls.tag) << " step with m=" << m << " grew u by " << step.u_growth << " < "
               << required << " (t=" << z.t << ", u=" << z.u << ", n=" << n << ", eps=" << eps << ")";
            throw Error(ErrorCode::GrowthAssertionFailed, os.str());
        }
    }
    return r.finish();
}

} // namespace formred
