#include "formred/bounds.hpp"
#include "formred/error.hpp"
#include "formred/selftest.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace formred;

namespace {

ClusterSplit split_at(std::span<const Complex> roots, std::vector<std::size_t> idx, UpperHalfPoint z) {
    return attach_covariant(split_half(roots, idx), roots, z);
}

std::map<std::string, bool> by_name(const std::vector<BoundReport>& reports) {
    std::map<std::string, bool> out;
    for (const auto& r : reports) {
        auto [it, fresh] = out.emplace(r.name, r.holds);
        if (!fresh) it->second = it->second && r.holds;
    }
    return out;
}

} // namespace

TEST_CASE("compare gives slack only on the permissive side") {
    CHECK(compare(1, 1, Relation::LessEqual));
    CHECK(compare(1 + 1e-12, 1, Relation::LessEqual));
    CHECK_FALSE(compare(1.001, 1, Relation::LessEqual));
    CHECK(compare(2, 1, Relation::Greater));
    CHECK_FALSE(compare(NAN, 1, Relation::LessEqual));
    auto r = make_report("x", 3, Relation::Less, 2);
    CHECK_FALSE(r.holds);
}

TEST_CASE("thresholds") {
    auto t4 = thresholds(4);
    CHECK(t4.majority_window == doctest::Approx(1.0 / 17600).epsilon(1e-14));
    CHECK(t4.growth_majority == doctest::Approx(1.0 / 160).epsilon(1e-14));
    auto t6 = thresholds(6);
    CHECK(t6.majority_window < t4.majority_window);
    CHECK(t6.ratio_far < t4.ratio_far);
    CHECK(t6.center_distance < t4.center_distance);
    CHECK(t6.real_product < t4.real_product);
    CHECK(t6.growth_majority < t4.growth_majority);
    CHECK(t6.growth_half < t4.growth_half);
    CHECK(t4.minimum() == t4.center_distance);
    CHECK_THROWS_AS(thresholds(2), Error);
}

TEST_CASE("count bounds at the boundary") {
    auto eq = count_bounds(6, 6, 1.0, 1.0);
    CHECK(eq[1].holds);
    CHECK(eq[1].rhs == 6);
    auto c = count_bounds(10, 5, std::sqrt(10.0), 1.0);
    CHECK(c[0].lhs == doctest::Approx(5 * (1 - 0.1)));
    CHECK_THROWS_AS(count_bounds(4, 5, 1, 1), Error);
}

TEST_CASE("majority u bound formulas") {
    auto full = u_upper_majority(6, 6, 0.1, 0.5, 0.01);
    REQUIRE(full.size() == 2);
    CHECK(full[1].rhs == doctest::Approx(4 * 6 * 0.1 / std::sqrt(3.0 * 6 * 6)));
    CHECK(full[1].rhs < full[0].rhs);
    CHECK_THROWS_AS(u_upper_majority(6, 3, 0.1, 0.5, 0.01), Error);

    auto [lo, hi] = c0_window(4, 0);
    CHECK(lo == doctest::Approx(0.5));
    CHECK(hi == doctest::Approx(2));
    auto w = c0_window(9, 1.0 / 6);
    CHECK(w.first == doctest::Approx(1.0 / 6));

    CHECK(t_center_majority(4, 0.01, 0.05).rhs == doctest::Approx(0.11));
    CHECK(t_center_majority(4, 0, 0).holds);
}

TEST_CASE("growth bound") {
    auto g = u_growth_bound(5, 3, 1e-4, 7.0, 0.1, 7);
    CHECK(g.lhs == doctest::Approx(100));
    CHECK(g.holds);
    // (t-m)^2 + u^2 = 7/8 sits on the boundary
    auto edge = u_growth_bound(4, 2, 1e-4, 0.5, std::sqrt(7.0 / 8 - 0.25), 0, 0.2);
    CHECK(edge.lhs == doctest::Approx(8.0 / 7));
    CHECK(edge.holds);
    CHECK_THROWS_AS(u_growth_bound(4, 2, 1e-4, 0.5, 0.5, 0, 0.9), Error);
    CHECK_THROWS_AS(u_growth_bound(4, 2, 1e-4, 0.5, 0.5, 0), Error);
    CHECK_THROWS_AS(u_growth_bound(4, 1, 1e-4, 0.5, 0.5, 0), Error);
    CHECK_THROWS_AS(u_growth_bound(4, 3, 0.1, 0.5, 0.5, 0), Error);
}

TEST_CASE("half split bounds on a symmetric split") {
    // conjugate clusters mirror each other, so both sides give the same bound
    std::vector<Complex> r{{1, 2}, {1.1, 2.05}, {1, -2}, {1.1, -2.05}};
    auto f = BinaryForm::from_roots(r, 1.0);
    std::vector<Complex> roots(f.roots().begin(), f.roots().end());
    auto z = covariant_point(roots);
    std::vector<std::size_t> upper;
    for (std::size_t i = 0; i < roots.size(); ++i)
        if (roots[i].imag() > 0) upper.push_back(i);
    auto s = split_at(roots, upper, z);
    auto rep = half_split_u(4, s, z.u);
    CHECK(rep[0].rhs == doctest::Approx(rep[1].rhs));
    for (const auto& b : rep) CHECK(b.holds);
    auto ratio = ratio_bounds(4, s, z.u);
    for (const auto& b : ratio) {
        CHECK(b.rhs == doctest::Approx(1));
        CHECK(b.holds);
    }

    ClusterSplit bare = split_half(roots, upper);
    CHECK_THROWS_AS(half_split_u(4, bare, z.u), Error);
}

TEST_CASE("property: statements that hold across random forms") {
    support::Rng rng(41);
    const char* solid[] = {"count.lower",         "count.upper",          "count.half_at_least",
                           "count.half_at_most",  "half_disk.radius",     "normalized.origin_disk",
                           "majority.u_linear",   "majority.u_sharp",     "majority.center_distance",
                           "majority.root_distance", "normalized.c0_lower", "normalized.c0_upper",
                           "half.u_complement_side", "half.u2_upper",     "half.ratio_cluster_side",
                           "half.ratio_complement_side"};
    std::map<std::string, std::size_t> seen;
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 2 * support::pick(rng, 2, 5);
        std::vector<Complex> raw;
        if (trial % 2) {
            raw = support::random_roots(rng, n, 5);
        } else {
            double c = support::uniform(rng, -3, 3);
            support::add_cluster(rng, raw, c, support::log_uniform(rng, 1e-6, 1e-1), n / 2 + trial % 4 / 2);
            while (static_cast<int>(raw.size()) < n) raw.emplace_back(c + support::uniform(rng, -4, 4), 0);
        }
        auto f = BinaryForm::from_roots(raw, 1.0);
        std::vector<Complex> roots(f.roots().begin(), f.roots().end());
        auto z = covariant_point(roots);
        CatalogOptions o;
        o.eps_values = {thresholds(n).minimum(), 1e-3, 1e-2};
        auto reports = evaluate_catalog(roots, z, o);
        for (const auto& b : reports)
            for (const char* s : solid)
                if (b.name == s) {
                    CAPTURE(trial);
                    CAPTURE(b.name);
                    CHECK(b.holds);
                    ++seen[b.name];
                }
    }
    for (const char* s : solid) {
        CAPTURE(s);
        CHECK(seen[s] > 0);
    }
}

// statements that fail as printed, kept as regressions so a change in the
// catalog or the solver that hides them is noticed
TEST_CASE("two symmetric pairs break the cluster side u bound") {
    const double delta = 1e-3, L = 1.0;
    std::vector<Complex> roots{-delta, delta, -L, L};
    auto z = covariant_point(roots);
    CHECK(std::abs(z.t) < 1e-12);
    CHECK(z.u == doctest::Approx(std::sqrt(delta * L)).epsilon(1e-10));
    auto s = split_at(roots, {0, 1}, z);
    auto rep = by_name(half_split_u(4, s, z.u));
    CHECK_FALSE(rep["half.u_cluster_side"]);
    CHECK(rep["half.u_complement_side"]);
    CHECK(rep["half.u2_upper"]);
}

TEST_CASE("tiny pair beside a far pair breaks the small u statements") {
    std::vector<Complex> roots{{0, 1e-6}, {0, -1e-6}, {8.35, 0.73}, {8.35, -0.73}};
    auto z = covariant_point(roots);
    CatalogOptions o;
    o.eps_values = {1e-6};
    auto rep = by_name(evaluate_catalog(roots, z, o));
    CHECK_FALSE(rep["half.u_cluster_side"]);
    CHECK_FALSE(rep["wide_far.u"]);
    CHECK_FALSE(rep["u_small.ratio"]);
    CHECK(rep["half.u2_lower"]);
    CHECK(rep["separated.d1_close"]);
    CHECK(rep["far_centers.d1_window"]);
}

TEST_CASE("smallness statements on constructed instances") {
    const int n = 4;
    const double eps = thresholds(n).minimum();
    CatalogOptions o;
    o.eps_values = {eps};

    SUBCASE("far separated clusters") {
        // hard to hit by hand, so take the first generated instance that reaches the case
        std::size_t hits = 0;
        for (std::size_t i = 0; i < 3000 && hits < 5; ++i) {
            auto inst = generate_instance(42, i);
            auto z = covariant_point(inst.roots);
            CatalogOptions co;
            co.eps_values = sweep_eps_values(inst, z);
            for (const auto& b : evaluate_catalog(inst.roots, z, co))
                if (b.name == "far.ratio") {
                    CAPTURE(i);
                    CHECK(b.holds);
                    ++hits;
                }
        }
        CHECK(hits > 0);
    }
    SUBCASE("close centers with a tiny product") {
        std::vector<Complex> roots{{0, 1e-12}, {0, -1e-12}, -0.5, 0.6};
        auto z = covariant_point(roots);
        o.eps_values = {2e-5};
        auto rep = by_name(evaluate_catalog(roots, z, o));
        REQUIRE(rep.count("close.u_eps"));
        CHECK(rep["close.u_eps"]);
        CHECK(rep["close.u_product"]);
        CHECK(rep["u_small.product"]);
    }
    SUBCASE("tight single cluster") {
        const int m = 6;
        const double e = thresholds(m).minimum();
        support::Rng rng(42);
        std::vector<Complex> raw;
        support::add_cluster(rng, raw, 0.3, std::sqrt(e), m);
        auto f = BinaryForm::from_roots(raw, 1.0);
        std::vector<Complex> r(f.roots().begin(), f.roots().end());
        auto z = covariant_point(r);
        CHECK(z.u <= 4 * std::sqrt(m * e));
    }
}
