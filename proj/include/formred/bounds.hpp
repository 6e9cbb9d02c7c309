#pragma once

#include "formred/covariant.hpp"
#include "formred/geometry.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace formred {

enum class Relation { Less, LessEqual, Greater, GreaterEqual };

std::string_view to_string(Relation r) noexcept;

using Context = std::vector<std::pair<std::string, double>>;

struct BoundReport {
    std::string name;
    double lhs = 0;
    double rhs = 0;
    Relation relation = Relation::LessEqual;
    bool holds = true;
    Context context;
};

// Comparison with 1e-9 relative slack on the permissive side only.
bool compare(double lhs, double rhs, Relation rel);

BoundReport make_report(std::string name, double lhs, Relation rel, double rhs, Context context = {});

struct EpsilonThresholds {
    int n = 0;
    double majority_window = 0;  // 1/(100 n^2 (2n+3))
    double ratio_far = 0;        // 1/(n (4n^2+1))
    double center_distance = 0;  // 1/(100 n (2n+3)^2)
    double real_product = 0;     // 3/(104 n^2 (n+1))
    double growth_majority = 0;  // 1/(32 (n+1))
    double growth_half = 0;      // 1/(4 n^2)

    double minimum() const;
};

EpsilonThresholds thresholds(int n);

// number of roots k in the closed disk of center t, radius R
std::array<BoundReport, 2> count_bounds(int n, int k, double R, double u);

std::vector<BoundReport> u_upper_majority(int n, int k, double r, double t_minus_c, double u);

std::pair<double, double> c0_window(int n, double r0);

BoundReport t_center_majority(int n, double r, double t_minus_c);

std::vector<BoundReport> half_split_u(int n, const ClusterSplit& split, double u);

std::vector<BoundReport> ratio_bounds(int n, const ClusterSplit& split, double u);

struct SmallnessOptions {
    // radius of the smallest disk holding more than n/2 roots, needed for
    // the three-way alternative when u is small
    std::optional<double> majority_radius;
    // d1 - r1 bound stated without proof, off by default
    bool generalized_remark = false;
};

std::vector<BoundReport> smallness_case_bounds(int n, double eps, const ClusterSplit& split, double u,
                                               double c_dist, const SmallnessOptions& opts = {});

// growth factor u'/u = 1/((t-m)^2+u^2) of the cluster step
BoundReport u_growth_bound(int n, int k, double eps, double t, double u, long long m,
                           std::optional<double> d1 = std::nullopt);

bool is_real(Complex c);
bool is_conjugate(Complex c1, Complex c2);

struct CatalogOptions {
    std::vector<double> eps_values;
    std::vector<std::vector<std::size_t>> splits; // extra half splits to test, by index
    bool smallest_half_split = true;              // also test the smallest n/2-disk split
    bool generalized_remark = false;
};

// every statement whose hypotheses hold on this instance
std::vector<BoundReport> evaluate_catalog(std::span<const Complex> roots, UpperHalfPoint z,
                                          const CatalogOptions& opts);

} // namespace formred
