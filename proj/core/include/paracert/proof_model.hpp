#pragma once

// Proof calculus shared by the generator and the checker.
//
// Every fact n claims f(n) = n^2. A step justifies one fact with one of four
// schemas:
//   base              n == 0 or n <= 20 (the symbolic bootstrap covers these)
//   coprime_product   n = a*b, gcd(a,b) = 1, a,b > 1; consumes a and b
//   coprime_quotient  divisor*n = product, gcd(divisor,n) = 1; consumes both
//   parallelogram     p >= q prime; any three of {p+q, p-q, p, q} yield the fourth
//
// validate_step is the single routine both sides share. It recomputes
// primality and gcd itself and trusts nothing carried in the step.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "paracert/primes.hpp"

namespace paracert {

using Int128 = __int128;

inline constexpr std::uint64_t kBaseBound = 20;

// The claim f(n) = n^2.
struct Fact {
    std::uint64_t n = 0;
    friend auto operator<=>(const Fact&, const Fact&) = default;
};

enum class Slot { Sum, Diff, P, Q };

std::string_view to_string(Slot slot) noexcept;
std::optional<Slot> parse_slot(std::string_view text) noexcept;

struct Base {
    friend bool operator==(const Base&, const Base&) = default;
};
struct CoprimeProduct {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    friend bool operator==(const CoprimeProduct&, const CoprimeProduct&) = default;
};
struct CoprimeQuotient {
    std::uint64_t product = 0;
    std::uint64_t divisor = 0;
    friend bool operator==(const CoprimeQuotient&, const CoprimeQuotient&) = default;
};
struct ParallelogramClose {
    std::uint64_t p = 0;
    std::uint64_t q = 0;
    Slot target = Slot::Sum;
    friend bool operator==(const ParallelogramClose&, const ParallelogramClose&) = default;
};

using Justification = std::variant<Base, CoprimeProduct, CoprimeQuotient, ParallelogramClose>;

// Reproducibility tags; never consulted by the checker.
struct StepMeta {
    std::optional<GoldbachPolicy> policy;
    friend bool operator==(const StepMeta&, const StepMeta&) = default;
};

struct CertificateStep {
    Fact fact;
    Justification justification;
    std::vector<std::uint64_t> prerequisites;
    StepMeta meta;

    friend bool operator==(const CertificateStep&, const CertificateStep&) = default;
};

// Builders that fill in the canonical prerequisite list.
CertificateStep make_base_step(std::uint64_t n);
CertificateStep make_product_step(std::uint64_t a, std::uint64_t b);
CertificateStep make_quotient_step(std::uint64_t product, std::uint64_t divisor);
// Throws DomainError if p < q.
CertificateStep make_parallelogram_step(std::uint64_t p, std::uint64_t q, Slot target,
                                        StepMeta meta = {});

// Value each slot carries for the pair (p, q); p >= q.
std::uint64_t slot_value(std::uint64_t p, std::uint64_t q, Slot slot);

// Facts the schema consumes, in canonical order. Empty for Base and for
// malformed parallelogram steps (p < q).
std::vector<std::uint64_t> demanded_prerequisites(const Justification& just);

enum class ViolationCode {
    DuplicateFact,
    Cycle,
    MissingPrerequisite,
    UnexpectedPrerequisite,
    NotCoprime,
    WrongProduct,
    TrivialFactor,
    PNotPrime,
    QNotPrime,
    PLessThanQ,
    SlotMismatch,
    InexactDivision,
    ValueMismatch,
    BaseOutOfRange,
    ArithmeticOverflow,
    CoverageGap,
};

std::string_view to_string(ViolationCode code) noexcept;

struct Violation {
    ViolationCode code;
    std::string detail;
};

struct StepContext {
    std::function<bool(std::uint64_t)> is_established;
    std::function<bool(std::uint64_t)> is_prime;
};

// Empty result means the step is a valid axiom instance under `context`.
std::vector<Violation> validate_step(const CertificateStep& step, const StepContext& context);

// Convenience form: established set plus Miller-Rabin primality. Fact 0 is
// always established.
std::vector<Violation> validate_step(const CertificateStep& step,
                                     const std::unordered_set<std::uint64_t>& established);

struct SlotValue {
    Slot slot;
    Int128 value;  // f at that slot
};

// The f-value the parallelogram equation forces on `target` given the other
// three slots. Throws DomainError if `known` does not name exactly the three
// other slots, MalformedInstance on inexact halving, OverflowError on wrap.
Int128 parallelogram_solve(std::span<const SlotValue> known, Slot target);

// Checked n^2.
Int128 checked_square(std::uint64_t n);

// Dependency-ordered steps plus the fact index. Fact 0 is the axiom from
// f(m - m) = f(0) = 0 and is established without a step.
class CertificateStore {
public:
    explicit CertificateStore(std::uint64_t target_bound = 0) : target_bound_(target_bound) {}

    std::uint64_t target_bound() const noexcept { return target_bound_; }
    std::span<const CertificateStep> steps() const noexcept { return steps_; }
    std::size_t size() const noexcept { return steps_.size(); }

    bool contains(std::uint64_t n) const noexcept;
    // Throws InternalError on a duplicate fact.
    void append(CertificateStep step);
    void reserve(std::size_t steps) { steps_.reserve(steps); }

private:
    std::uint64_t target_bound_;
    std::vector<CertificateStep> steps_;
    std::vector<bool> dense_;  // membership for n < dense_.size()
    std::unordered_set<std::uint64_t> sparse_;
};

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) noexcept;

}  // namespace paracert
