#include "formred/selftest.hpp"

#include "formred/error.hpp"
#include "formred/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

namespace formred {

std::string_view to_string(InstanceFamily f) noexcept {
    switch (f) {
    case InstanceFamily::TwoClusters: return "two_clusters";
    case InstanceFamily::RandomBox: return "random_box";
    case InstanceFamily::WideComplement: return "wide_complement";
    case InstanceFamily::SpreadTriple: return "spread_triple";
    case InstanceFamily::OffAxis: return "off_axis";
    }
    return "?";
}

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double log_uniform(Rng& rng, double lo, double hi) { return std::exp(uniform(rng, std::log(lo), std::log(hi))); }

// h conjugate-closed points in the disk of real center c and radius r,
// with at least one point on the boundary so the disk is nearly tight
void conjugate_cluster(Rng& rng, double c, double r, std::size_t h, std::vector<Complex>& out) {
    if (h % 2 == 1) out.emplace_back(c + r * uniform(rng, -1, 1), 0.0);
    bool first = true;
    for (std::size_t p = 0; p < h / 2; ++p) {
        double rho = first ? r : r * std::sqrt(uniform(rng, 0, 1));
        double th = uniform(rng, 0.05, std::numbers::pi - 0.05);
        Complex z = Complex(c, 0) + std::polar(rho, th);
        out.push_back(z);
        out.push_back(std::conj(z));
        first = false;
    }
    if (h == 1) out.back() = Complex(c + r * (uniform(rng, 0, 1) < 0.5 ? -1 : 1), 0.0);
}

std::vector<std::size_t> iota(std::size_t from, std::size_t count) {
    std::vector<std::size_t> v(count);
    for (std::size_t i = 0; i < count; ++i) v[i] = from + i;
    return v;
}

} // namespace

Instance generate_instance(std::uint64_t seed, std::size_t index) {
    std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    Rng rng(sq);
    Instance inst;
    inst.index = index;
    const std::size_t n = 4 + 2 * std::uniform_int_distribution<int>(0, 3)(rng);
    const std::size_t h = n / 2;
    const double pick = uniform(rng, 0, 1);
    const double side = uniform(rng, 0, 1) < 0.5 ? -1.0 : 1.0;
    const double c1 = uniform(rng, -5, 5);

    if (pick < 0.4) {
        inst.family = InstanceFamily::TwoClusters;
        double r1 = log_uniform(rng, 1e-9, 1e-2);
        double r2 = log_uniform(rng, r1, 10);
        double sep = log_uniform(rng, r2 / 10, 100 * r2);
        conjugate_cluster(rng, c1, r1, h, inst.roots);
        conjugate_cluster(rng, c1 + side * sep, r2, n - h, inst.roots);
        inst.cluster = iota(0, h);
    } else if (pick < 0.65) {
        inst.family = InstanceFamily::RandomBox;
        std::size_t pairs = std::uniform_int_distribution<std::size_t>(0, h)(rng);
        for (std::size_t p = 0; p < pairs; ++p) {
            Complex z(uniform(rng, -10, 10), std::abs(uniform(rng, -10, 10)));
            inst.roots.push_back(z);
            inst.roots.push_back(std::conj(z));
        }
        while (inst.roots.size() < n) inst.roots.emplace_back(uniform(rng, -10, 10), 0.0);
    } else if (pick < 0.75) {
        // tiny cluster beside a wide, overlapping complement
        inst.family = InstanceFamily::WideComplement;
        double eps = thresholds(static_cast<int>(n)).minimum();
        double r1 = log_uniform(rng, 1e-9, eps);
        double r2 = log_uniform(rng, 1, 1e5);
        double sep = log_uniform(rng, r2 / 100, 1.9 * r2);
        conjugate_cluster(rng, c1, r1, h, inst.roots);
        conjugate_cluster(rng, c1 + side * sep, r2, n - h, inst.roots);
        inst.cluster = iota(0, h);
    } else if (pick < 0.85) {
        // tight half cluster, one real root just beyond 2 eps, rest spread out
        inst.family = InstanceFamily::SpreadTriple;
        double eps = thresholds(static_cast<int>(n)).minimum();
        double rho = eps * log_uniform(rng, 1e-4, 0.5);
        double delta = eps * uniform(rng, 2.05 + rho / eps, 3.5);
        double r2 = log_uniform(rng, 2 * std::sqrt(eps), 5);
        conjugate_cluster(rng, c1, rho, h, inst.roots);
        inst.roots.emplace_back(c1 + side * delta, 0.0);
        conjugate_cluster(rng, c1 + uniform(rng, -r2, r2), r2, n - h - 1, inst.roots);
        inst.cluster = iota(0, h);
    } else {
        // more than n/2 roots scattered over a few eps, some off the axis, so
        // the 2 eps neighborhoods need not be closed under conjugation
        inst.family = InstanceFamily::OffAxis;
        double eps = thresholds(static_cast<int>(n)).minimum();
        std::size_t near = std::uniform_int_distribution<std::size_t>(h + 1, n - 1)(rng);
        double box = eps * uniform(rng, 2, 3);
        double spread = log_uniform(rng, 0.02, 2);
        auto scatter = [&](std::size_t upto, double w) {
            while (inst.roots.size() < upto) {
                if (inst.roots.size() + 2 <= upto && uniform(rng, 0, 1) < 0.5) {
                    Complex z(c1 + uniform(rng, -w, w), uniform(rng, 0.01 * w, w));
                    inst.roots.push_back(z);
                    inst.roots.push_back(std::conj(z));
                } else {
                    inst.roots.emplace_back(c1 + uniform(rng, -w, w), 0.0);
                }
            }
        };
        scatter(near, box);
        scatter(n, spread);
    }

    // canonical layout, keeping the planted cluster addressable
    std::vector<Complex> planted;
    for (auto i : inst.cluster) planted.push_back(inst.roots[i]);
    BinaryForm form = BinaryForm::from_roots(inst.roots, 1.0);
    inst.roots.assign(form.roots().begin(), form.roots().end());
    std::vector<std::size_t> idx;
    std::vector<bool> used(n, false);
    for (Complex p : planted)
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i] && inst.roots[i] == p) {
                used[i] = true;
                idx.push_back(i);
                break;
            }
    std::sort(idx.begin(), idx.end());
    inst.cluster = idx.size() == planted.size() ? idx : std::vector<std::size_t>{};
    return inst;
}

std::vector<double> sweep_eps_values(const Instance& inst, UpperHalfPoint z) {
    const int n = static_cast<int>(inst.roots.size());
    std::vector<double> eps;
    for (int e = -28; e <= -4; ++e) eps.push_back(std::pow(10.0, e / 2.0));
    EpsilonThresholds th = thresholds(n);
    for (double v : {th.majority_window, th.ratio_far, th.center_distance, th.real_product, th.growth_majority,
                     th.growth_half})
        eps.push_back(v * (1 - 1e-12));
    eps.push_back(z.u);
    auto radius_of = [&](const std::vector<std::size_t>& idx) {
        std::vector<Complex> pts;
        for (auto i : idx) pts.push_back(inst.roots[i]);
        return smallest_enclosing_disk(pts).radius;
    };
    std::vector<double> r1s;
    if (n % 2 == 0) r1s.push_back(smallest_k_disk(inst.roots, inst.roots.size() / 2).disk.radius);
    if (!inst.cluster.empty()) r1s.push_back(radius_of(inst.cluster));
    for (double r : r1s) {
        if (r > 0) eps.push_back(r);
        eps.push_back(std::max(r, z.u));
    }
    std::sort(eps.begin(), eps.end());
    eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
    return eps;
}

namespace {

struct InstanceOutcome {
    std::vector<std::pair<std::string, bool>> reports;
    std::vector<BoundReport> violations;
    std::optional<CaseTag> tag;
    std::optional<std::string> failure;
    InstanceFamily family = InstanceFamily::RandomBox;
    std::vector<Complex> roots;
};

InstanceOutcome run_instance(const SelftestOptions& opts, std::size_t index) {
    InstanceOutcome out;
    Instance inst = generate_instance(opts.seed, index);
    out.family = inst.family;
    out.roots = inst.roots;
    const int n = static_cast<int>(inst.roots.size());
    try {
        CovariantSolution sol = solve_covariant(inst.roots, opts.solver);
        CatalogOptions co;
        co.eps_values = sweep_eps_values(inst, sol.z);
        if (!inst.cluster.empty()) co.splits.push_back(inst.cluster);
        co.generalized_remark = opts.generalized_remark;
        for (auto& r : evaluate_catalog(inst.roots, sol.z, co)) {
            out.reports.emplace_back(r.name, r.holds);
            if (!r.holds) out.violations.push_back(std::move(r));
        }
        out.tag = classify(inst.roots, opts.eps.value_or(thresholds(n).minimum())).tag;
    } catch (const Error& e) {
        out.failure = e.what();
    }
    return out;
}

} // namespace

SelftestResult run_selftest(const SelftestOptions& opts) {
    if (opts.eps && !(*opts.eps > 0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    const auto started = std::chrono::steady_clock::now();
    std::vector<InstanceOutcome> outcomes(opts.count);
    unsigned workers = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, opts.count)));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < opts.count;) outcomes[i] = run_instance(opts, i);
    };
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();

    // merge in index order so the result does not depend on scheduling
    SelftestResult res;
    res.instances = opts.count;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        auto& o = outcomes[i];
        if (o.failure) res.solver_failures.emplace_back(i, *o.failure);
        for (const auto& [name, holds] : o.reports) {
            auto& tally = res.statements[name];
            ++tally.evaluated;
            ++res.reports;
            if (!holds) {
                ++tally.violated;
                ++res.violations;
            }
        }
        for (auto& v : o.violations)
            if (res.examples.size() < opts.max_examples) res.examples.push_back({i, o.family, std::move(v), o.roots});
        if (o.tag) {
            ++res.tags[*o.tag];
            res.first_instance.try_emplace(*o.tag, i);
        }
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return res;
}

} // namespace formred
