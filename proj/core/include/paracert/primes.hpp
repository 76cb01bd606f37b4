#pragma once

// Prime infrastructure: segmented sieve, 64-bit deterministic primality,
// Goldbach pair search and the two residue selectors used by the derivation.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace paracert {

enum class GoldbachPolicy {
    MaxQ,  // largest q <= m/2; keeps p - q small
    MinQ,  // smallest q
};

std::string_view to_string(GoldbachPolicy policy) noexcept;
// Accepts "max-q" / "min-q"; throws DomainError otherwise.
GoldbachPolicy parse_policy(std::string_view text);

struct GoldbachPair {
    std::uint64_t m = 0;
    std::uint64_t p = 0;  // p >= q, p + q == m
    std::uint64_t q = 0;
    GoldbachPolicy policy = GoldbachPolicy::MaxQ;

    friend bool operator==(const GoldbachPair&, const GoldbachPair&) = default;
};

struct SieveOptions {
    // Numbers per segment; rounded up to a multiple of 128.
    std::uint64_t segment_size = std::uint64_t{1} << 20;
    unsigned threads = 1;
    std::uint64_t memory_budget_bytes = std::uint64_t{1} << 30;
};

// Immutable primality bitset over 0..limit. Only odd numbers are stored.
class PrimeTable {
public:
    PrimeTable() = default;

    // Throws DomainError for limit < 2, ResourceError when the bitset would
    // exceed options.memory_budget_bytes.
    static PrimeTable build(std::uint64_t limit, const SieveOptions& options = {});

    std::uint64_t limit() const noexcept { return limit_; }

    // Table lookup; n must be <= limit().
    bool contains(std::uint64_t n) const noexcept {
        if (n == 2) return true;
        if (n < 2 || (n & 1) == 0) return false;
        const std::uint64_t i = n >> 1;
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    // Any 64-bit n: table below the limit, deterministic Miller-Rabin above.
    bool is_prime(std::uint64_t n) const noexcept;

    std::uint64_t count() const noexcept;

    // Largest prime <= n inside the table, if any.
    std::optional<std::uint64_t> prev_prime(std::uint64_t n) const noexcept;
    // Smallest prime >= n inside the table, if any.
    std::optional<std::uint64_t> next_prime(std::uint64_t n) const noexcept;

    std::vector<std::uint64_t> primes_up_to(std::uint64_t n) const;

private:
    std::uint64_t limit_ = 0;
    std::vector<std::uint64_t> words_;  // bit i <=> 2i+1 is prime
};

inline PrimeTable build_prime_table(std::uint64_t limit, const SieveOptions& options = {}) {
    return PrimeTable::build(limit, options);
}

// Deterministic for every 64-bit input (fixed witness set).
bool is_prime_u64(std::uint64_t n) noexcept;

inline bool is_prime(std::uint64_t n, const PrimeTable& table) noexcept { return table.is_prime(n); }
// Throws UnsupportedError when n does not fit in 64 bits.
bool is_prime(unsigned __int128 n, const PrimeTable& table);

// Pair p + q = m with p >= q both prime, chosen by policy. m must be even and
// >= 4 (DomainError). Throws GoldbachFailure when no pair exists.
GoldbachPair goldbach_pair(std::uint64_t m, const PrimeTable& table,
                           GoldbachPolicy policy = GoldbachPolicy::MaxQ);

// r in {3,5,7,17} with (p + r) % 8 == 4. DomainError for even p.
std::uint64_t select_r(std::uint64_t p);

// q in {3,5} with (n + q) % 4 == 2. DomainError for even n.
std::uint64_t select_q_for_prime(std::uint64_t n);

}  // namespace paracert
