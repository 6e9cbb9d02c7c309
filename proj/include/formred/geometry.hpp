#pragma once

#include "formred/covariant.hpp"
#include "formred/forms.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace formred {

struct Disk {
    Complex center = 0;
    double radius = 0;

    // closed disk with a small relative allowance for rounding
    bool contains(Complex p, double rel = 1e-12) const;
};

constexpr std::uint64_t kDefaultShuffleSeed = 0x5eed5eedULL;

struct EnclosingDisk {
    Disk disk;
    std::vector<std::size_t> support; // indices into the input, at most 3
};

EnclosingDisk enclosing_disk(std::span<const Complex> points, std::uint64_t seed = kDefaultShuffleSeed);

inline Disk smallest_enclosing_disk(std::span<const Complex> points, std::uint64_t seed = kDefaultShuffleSeed) {
    return enclosing_disk(points, seed).disk;
}

// smallest disk holding at least k of the points (brute force over the
// disks spanned by 1, 2 or 3 points), with the indices it holds
struct KDisk {
    Disk disk;
    std::vector<std::size_t> members;
};
KDisk smallest_k_disk(std::span<const Complex> points, std::size_t k);

struct MajorityCluster {
    std::size_t k = 0;               // neighborhood size, with multiplicity
    std::size_t anchor = 0;          // the root whose neighborhood it is
    std::vector<std::size_t> indices;
    Disk disk;
};

// largest neighborhood {j : |a_j - a_i| <= 2 eps} with 2k >= n; ties go to
// the smaller enclosing radius, then to the lower anchor index
std::optional<MajorityCluster> detect_majority_cluster(std::span<const Complex> roots, double eps);

struct ClusterSplit {
    std::vector<std::size_t> cluster_indices;
    std::vector<std::size_t> complement_indices;
    Disk disk1;
    Disk disk2;
    std::optional<double> d1;
    std::optional<double> d2;
    bool swapped = false; // complement had the smaller radius
};

ClusterSplit split_half(std::span<const Complex> roots, std::span<const std::size_t> cluster_indices);

ClusterSplit attach_covariant(const ClusterSplit& split, std::span<const Complex> roots, UpperHalfPoint z);

} // namespace formred
