#pragma once

#include "formred/bounds.hpp"
#include "formred/covariant.hpp"
#include "formred/forms.hpp"
#include "formred/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace formred {

enum class StepKind { Translate, Invert, ClusterTranslate };

enum class CaseTag {
    Majority,
    AllTinyCluster,        // 3a
    FarSmallRatioSmall,    // 3b-i
    FarSmallRatioLarge,    // 3b-ii
    FarLargeRatioSmall,    // 3c
    FarLargeRatioLarge,    // 3c with r1/r2 >= 10 n eps / 3
    CloseMajorityRefined,  // 3d-i
    CloseGenericCenters,   // 3d-ii
    CloseConjugateEqual,   // 3d-iii
    CloseRealProductSmall, // 3d-iv
    CloseRealProductLarge, // 3d-v
    NoCluster,
};

inline constexpr CaseTag kAllCaseTags[] = {
    CaseTag::Majority,           CaseTag::AllTinyCluster,        CaseTag::FarSmallRatioSmall,
    CaseTag::FarSmallRatioLarge, CaseTag::FarLargeRatioSmall,    CaseTag::FarLargeRatioLarge,
    CaseTag::CloseMajorityRefined, CaseTag::CloseGenericCenters, CaseTag::CloseConjugateEqual,
    CaseTag::CloseRealProductSmall, CaseTag::CloseRealProductLarge, CaseTag::NoCluster,
};

std::string_view to_string(CaseTag tag) noexcept;
std::string_view short_label(CaseTag tag) noexcept;
std::optional<CaseTag> case_tag_from_string(std::string_view s);
std::string_view to_string(StepKind kind) noexcept;
std::optional<StepKind> step_kind_from_string(std::string_view s);

// cases where the tree bounds |t - c| and u is small (3d-v additionally
// needs the computed u <= eps, checked by the reducer)
bool certifies_small_u(CaseTag tag);
// cases where more than n/2 roots sit in the disk used for m
bool majority_growth(CaseTag tag);

struct Classification {
    CaseTag tag = CaseTag::NoCluster;
    double eps = 0;
    bool eps_in_range = true;
    std::size_t k = 0;
    std::optional<MajorityCluster> cluster;
    std::optional<ClusterSplit> split;
    std::optional<Disk> refined; // the 2 eps disk with more than n/2 roots
    Complex center = 0;          // the c that picks m
    double r1 = NAN, r2 = NAN, c_dist = NAN, ratio = NAN, product = NAN;
    bool ambiguous = false;
    std::vector<std::string> notes;
};

Classification classify(std::span<const Complex> roots, double eps);
// a form with roots at infinity reports NoCluster
Classification classify(const BinaryForm& form, double eps);

struct FundamentalDomainStatus {
    bool in_domain = true;
    bool modulus_ok = true;     // |z| >= 1
    bool real_part_ok = true;   // |Re z| <= 1/2
    double modulus_deficit = 0; // max(0, 1 - |z|)
    double real_excess = 0;     // max(0, |Re z| - 1/2)
};

FundamentalDomainStatus fundamental_status(UpperHalfPoint z);

struct ReductionStep {
    StepKind kind = StepKind::Translate;
    std::int64_t m = 0;
    std::optional<CaseTag> tag;
    UpperHalfPoint z_before;
    UpperHalfPoint z_after;
    double u_growth = 1;
    std::optional<double> d1; // |t - c1| before a half-split cluster step
};

struct ReductionTrace {
    std::vector<ReductionStep> steps;
    UnimodularMatrix total;
    UpperHalfPoint final_z;
    std::vector<std::string> warnings;
};

struct ReduceOptions {
    int max_steps = 64;
    SolverOptions solver;
};

struct ReductionResult {
    BinaryForm form;
    ReductionTrace trace;
};

ReductionResult classic_reduce(const BinaryForm& form, const ReduceOptions& opts = {});

ReductionResult cluster_reduce(const BinaryForm& form, double eps, const ReduceOptions& opts = {});

} // namespace formred
