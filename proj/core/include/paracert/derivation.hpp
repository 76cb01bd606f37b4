#pragma once

// Induction driver: certifies f(n) = n^2 for every n in 1..N by emitting
// certificate steps in ascending order of n. Each n above the base range is
// dispatched to exactly one case:
//
//   coprime split      n = a*b, gcd(a,b) = 1, a,b > 1
//   power of two       n = 2^e, closed from a Goldbach pair of n
//   odd prime          closed from n+q, n-q and q with q in {3,5}
//   odd prime power    closed from a Goldbach pair of 2n, then divided by 2
//
// Auxiliary facts above the frontier (p+r, p-r, 2n, Goldbach primes above n)
// are emitted once and reused by later derivations.

#include <cstdint>
#include <string>

#include "paracert/primes.hpp"
#include "paracert/proof_model.hpp"

namespace paracert {

struct EngineOptions {
    GoldbachPolicy policy = GoldbachPolicy::MaxQ;
    // 0 selects 4N + 64, enough for every auxiliary fact.
    std::uint64_t sieve_limit = 0;
    SieveOptions sieve;
};

struct EngineStats {
    std::uint64_t coprime_split = 0;
    std::uint64_t power_of_two = 0;
    std::uint64_t odd_prime = 0;
    std::uint64_t odd_prime_power = 0;
    std::uint64_t already_established = 0;  // n reached after being emitted as an auxiliary fact
    std::uint64_t aux_facts = 0;
    std::uint64_t aux_prime_derivations = 0;
    std::uint64_t goldbach_searches = 0;
    std::uint64_t goldbach_diff_max = 0;    // largest p - q over all pairs used
    std::uint64_t goldbach_diff_total = 0;
    std::uint64_t max_pow2_depth = 0;
    std::uint64_t max_aux_fact = 0;
    std::uint64_t steps = 0;
    double wall_seconds = 0.0;

    std::string to_json() const;
};

// Which of the four induction cases n > 20 falls into.
enum class InductionCase { CoprimeSplit, PowerOfTwo, OddPrime, OddPrimePower };

struct Classification {
    InductionCase kind;
    std::uint64_t a = 0;  // coprime split: a = p^k for the smallest prime p | n
    std::uint64_t b = 0;  //                b = n / a
    std::uint64_t base_prime = 0;  // prime powers: n = base_prime^exponent
    unsigned exponent = 0;
};

Classification classify(std::uint64_t n, const PrimeTable& table);

class DerivationEngine {
public:
    // Throws DomainError for target_bound < 21.
    DerivationEngine(std::uint64_t target_bound, const EngineOptions& options = {});

    // Emits base steps 1..20, then derives 21..N in order.
    void run();

    // Derives the next frontier value. Exposed for step-by-step tests.
    void seed_base();
    void derive_next();

    void derive_pow2(unsigned e);
    void derive_prime_case(std::uint64_t n);
    void derive_aux_prime(std::uint64_t p);
    void derive_diff(std::uint64_t p, std::uint64_t q);
    void derive_odd_prime_power(std::uint64_t n);

    std::uint64_t frontier() const noexcept { return frontier_; }
    const CertificateStore& store() const noexcept { return store_; }
    CertificateStore& store() noexcept { return store_; }
    const EngineStats& stats() const noexcept { return stats_; }
    const PrimeTable& table() const noexcept { return table_; }

private:
    void emit(CertificateStep step);
    // Throws BoundViolation naming `inequality` when value > frontier.
    GoldbachPair find_pair(std::uint64_t m);
    void require_below_frontier(std::uint64_t value, const char* inequality) const;

    std::uint64_t target_;
    EngineOptions options_;
    PrimeTable table_;
    CertificateStore store_;
    EngineStats stats_;
    std::uint64_t frontier_ = 0;  // every 1..frontier_ is established
    unsigned pow2_depth_ = 0;
};

struct CertificationResult {
    CertificateStore store;
    EngineStats stats;
};

// Throws GoldbachFailure, BoundViolation, InternalError.
CertificationResult certify_range(std::uint64_t target_bound, const EngineOptions& options = {});

}  // namespace paracert
