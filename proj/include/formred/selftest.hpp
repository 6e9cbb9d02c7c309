#pragma once

#include "formred/bounds.hpp"
#include "formred/covariant.hpp"
#include "formred/reduction.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace formred {

enum class InstanceFamily { TwoClusters, RandomBox, WideComplement, SpreadTriple, OffAxis };

std::string_view to_string(InstanceFamily f) noexcept;

struct Instance {
    std::size_t index = 0;
    InstanceFamily family = InstanceFamily::RandomBox;
    std::vector<Complex> roots;              // conjugate-closed, canonical layout
    std::vector<std::size_t> cluster;        // planted half cluster, empty for RandomBox
};

// deterministic in (seed, index)
Instance generate_instance(std::uint64_t seed, std::size_t index);

// eps values the catalog is evaluated at for one instance
std::vector<double> sweep_eps_values(const Instance& inst, UpperHalfPoint z);

struct SelftestOptions {
    std::size_t count = 1000;
    std::uint64_t seed = 42;
    std::optional<double> eps; // classification eps, default thresholds(n).minimum()
    unsigned threads = 0;      // 0 picks hardware concurrency
    std::size_t max_examples = 20;
    bool generalized_remark = false;
    SolverOptions solver;
};

struct StatementTally {
    std::size_t evaluated = 0;
    std::size_t violated = 0;
};

struct Violation {
    std::size_t instance = 0;
    InstanceFamily family = InstanceFamily::RandomBox;
    BoundReport report;
    std::vector<Complex> roots;
};

struct SelftestResult {
    std::size_t instances = 0;
    std::size_t reports = 0;
    std::size_t violations = 0;
    std::map<std::string, StatementTally> statements;
    std::map<CaseTag, std::size_t> tags;
    std::map<CaseTag, std::size_t> first_instance; // lowest index reaching each tag
    std::vector<Violation> examples;               // first violations by instance index
    std::vector<std::pair<std::size_t, std::string>> solver_failures;
    double seconds = 0;
};

SelftestResult run_selftest(const SelftestOptions& opts);

} // namespace formred
