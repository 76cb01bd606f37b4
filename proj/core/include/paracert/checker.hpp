#pragma once

// Independent certificate verification. A store is accepted iff every step is
// a valid schema instance, every prerequisite is justified on an earlier line
// (or is fact 0 or a base-eligible n <= 20), no fact is justified twice, and
// 1..N is fully covered. All violations are collected.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "paracert/proof_model.hpp"

namespace paracert {

struct CheckOptions {
    // Topologically sort the steps before checking instead of requiring
    // dependency-ordered lines. Steps on a true cycle are reported.
    bool reorder = false;
    unsigned threads = 1;
};

struct ViolationRecord {
    std::size_t step_index;  // position in the input, 0-based
    ViolationCode code;
    std::string detail;
};

struct CheckStats {
    std::size_t steps_checked = 0;
    std::size_t distinct_facts = 0;
    std::size_t topological_depth = 0;
};

struct CheckReport {
    bool accepted = false;
    std::vector<ViolationRecord> violations;
    std::vector<std::uint64_t> coverage_gaps;
    CheckStats stats;

    bool has(ViolationCode code) const noexcept;
    std::string to_json() const;
};

CheckReport check_steps(std::span<const CertificateStep> steps, std::uint64_t bound,
                        const CheckOptions& options = {});

// Throws IoError / ParseError; logical problems land in the report.
CheckReport check_store(const std::filesystem::path& path, std::uint64_t bound, const CheckOptions& options = {});

struct SpotCheckReport {
    std::size_t parallelogram_checked = 0;
    std::size_t coprime_checked = 0;
    std::string to_json() const;
};

// Re-evaluates a seeded sample of steps against the explicit f(x) = x^2 with
// exact arithmetic. Throws FatalInconsistency on any mismatch.
SpotCheckReport spot_check_numeric(std::span<const CertificateStep> steps, std::size_t sample_size,
                                   std::uint64_t seed);

}  // namespace paracert
