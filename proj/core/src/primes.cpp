#include "paracert/primes.hpp"

#include "paracert/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>
#include <thread>

namespace paracert {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
    u64 result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

// Strong probable-prime test to base a; n odd, n > a.
bool strong_probable_prime(u64 n, u64 a) {
    u64 d = n - 1;
    int s = std::countr_zero(d);
    d >>= s;
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

u64 isqrt(u64 n) {
    auto r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::vector<u64> small_odd_primes(u64 limit) {
    std::vector<bool> composite(limit + 1, false);
    std::vector<u64> primes;
    for (u64 i = 3; i <= limit; i += 2) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (u64 j = i * i; j <= limit; j += 2 * i) composite[j] = true;
    }
    return primes;
}

}  // namespace

std::string_view to_string(GoldbachPolicy policy) noexcept {
    return policy == GoldbachPolicy::MaxQ ? "max-q" : "min-q";
}

GoldbachPolicy parse_policy(std::string_view text) {
    if (text == "max-q") return GoldbachPolicy::MaxQ;
    if (text == "min-q") return GoldbachPolicy::MinQ;
    throw DomainError("unknown Goldbach policy '" + std::string(text) + "' (expected max-q or min-q)");
}

bool is_prime_u64(u64 n) noexcept {
    if (n < 2) return false;
    static constexpr std::array<u64, 12> witnesses{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : witnesses) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    for (u64 a : witnesses) {
        if (!strong_probable_prime(n, a)) return false;
    }
    return true;
}

PrimeTable PrimeTable::build(u64 limit, const SieveOptions& options) {
    if (limit < 2) throw DomainError("prime table limit must be >= 2, got " + std::to_string(limit));
    const u64 bits = limit / 2 + 1;
    const u64 word_count = (bits + 63) / 64;
    if (word_count > options.memory_budget_bytes / sizeof(u64))
        throw ResourceError("prime table up to " + std::to_string(limit) + " needs " +
                            std::to_string(word_count * sizeof(u64)) + " bytes, budget is " +
                            std::to_string(options.memory_budget_bytes));

    PrimeTable table;
    table.limit_ = limit;
    table.words_.assign(word_count, ~u64{0});

    const std::vector<u64> base = small_odd_primes(isqrt(limit));
    // Segments cover whole words so threads never share one.
    const u64 seg_numbers = std::max<u64>(128, (options.segment_size + 127) / 128 * 128);
    const u64 seg_words = seg_numbers / 128;
    const u64 segments = (word_count + seg_words - 1) / seg_words;

    auto sieve_segment = [&](u64 seg) {
        const u64 w_lo = seg * seg_words;
        const u64 w_hi = std::min(word_count, w_lo + seg_words);
        const u64 lo = w_lo * 128;       // first number covered (bit 0 <=> lo + 1)
        const u64 hi = w_hi * 128;       // one past last number covered
        u64* words = table.words_.data();
        for (u64 p : base) {
            u64 start = p * p;
            if (start >= hi) break;
            if (start < lo) {
                start = (lo + p - 1) / p * p;
                if ((start & 1) == 0) start += p;
            }
            for (u64 j = start; j < hi; j += 2 * p) {
                const u64 i = j >> 1;
                words[i >> 6] &= ~(u64{1} << (i & 63));
            }
        }
    };

    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(segments)));
    if (threads == 1) {
        for (u64 s = 0; s < segments; ++s) sieve_segment(s);
    } else {
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < threads; ++t)
            workers.emplace_back([&, t] {
                for (u64 s = t; s < segments; s += threads) sieve_segment(s);
            });
    }

    // 1 is not prime; clear bits above the limit.
    table.words_[0] &= ~u64{1};
    for (u64 i = (limit - 1) / 2 + 1; i < word_count * 64; ++i)
        table.words_[i >> 6] &= ~(u64{1} << (i & 63));
    return table;
}

bool PrimeTable::is_prime(u64 n) const noexcept {
    if (n <= limit_) return contains(n);
    return is_prime_u64(n);
}

bool is_prime(u128 n, const PrimeTable& table) {
    if (n > static_cast<u128>(~u64{0})) throw UnsupportedError("primality beyond 64 bits is not supported");
    return table.is_prime(static_cast<u64>(n));
}

u64 PrimeTable::count() const noexcept {
    if (limit_ < 2) return 0;
    u64 total = 1;  // the prime 2
    for (u64 w : words_) total += static_cast<u64>(std::popcount(w));
    return total;
}

std::optional<u64> PrimeTable::prev_prime(u64 n) const noexcept {
    n = std::min(n, limit_);
    if (n < 2) return std::nullopt;
    if (n == 2) return 2;
    if ((n & 1) == 0) --n;
    for (u64 i = n >> 1;;) {
        const u64 wi = i >> 6;
        const u64 w = words_[wi] & (~u64{0} >> (63 - (i & 63)));
        if (w != 0) return 2 * (wi * 64 + 63 - static_cast<u64>(std::countl_zero(w))) + 1;
        if (wi == 0) return 2;
        i = wi * 64 - 1;
    }
}

std::optional<u64> PrimeTable::next_prime(u64 n) const noexcept {
    if (n <= 2) return limit_ >= 2 ? std::optional<u64>{2} : std::nullopt;
    if ((n & 1) == 0) ++n;
    if (n > limit_) return std::nullopt;
    const u64 last = limit_ >> 1;
    for (u64 i = n >> 1; i <= last;) {
        u64 w = words_[i >> 6] & (~u64{0} << (i & 63));
        if (w != 0) {
            const u64 found = 2 * ((i & ~u64{63}) + std::countr_zero(w)) + 1;
            if (found > limit_) return std::nullopt;
            return found;
        }
        i = (i | 63) + 1;
    }
    return std::nullopt;
}

std::vector<u64> PrimeTable::primes_up_to(u64 n) const {
    std::vector<u64> out;
    n = std::min(n, limit_);
    if (n >= 2) out.push_back(2);
    for (u64 k = 3; k <= n; k += 2)
        if (contains(k)) out.push_back(k);
    return out;
}

GoldbachPair goldbach_pair(u64 m, const PrimeTable& table, GoldbachPolicy policy) {
    if (m < 4 || (m & 1) != 0)
        throw DomainError("Goldbach pair requires an even m >= 4, got " + std::to_string(m));
    if (m == 4) return {4, 2, 2, policy};
    // m >= 6: both primes are odd.
    const u64 half = m / 2;
    const u64 limit = table.limit();
    if (policy == GoldbachPolicy::MaxQ) {
        u64 q = (half & 1) ? half : half - 1;
        for (; q > limit && q >= 3; q -= 2)
            if (is_prime_u64(q) && table.is_prime(m - q)) return {m, m - q, q, policy};
        for (auto cand = table.prev_prime(q); cand && *cand >= 3; cand = table.prev_prime(*cand - 2))
            if (table.is_prime(m - *cand)) return {m, m - *cand, *cand, policy};
    } else {
        for (auto cand = table.next_prime(3); cand && *cand <= half; cand = table.next_prime(*cand + 2))
            if (table.is_prime(m - *cand)) return {m, m - *cand, *cand, policy};
        for (u64 q = std::max<u64>(3, limit + 1) | 1; q <= half; q += 2)
            if (is_prime_u64(q) && table.is_prime(m - q)) return {m, m - q, q, policy};
    }
    throw GoldbachFailure(m);
}

u64 select_r(u64 p) {
    if ((p & 1) == 0) throw DomainError("select_r requires an odd prime, got " + std::to_string(p));
    switch (p % 8) {
        case 1: return 3;
        case 3: return 17;
        case 5: return 7;
        default: return 5;  // 7
    }
}

u64 select_q_for_prime(u64 n) {
    if ((n & 1) == 0) throw DomainError("select_q_for_prime requires an odd prime, got " + std::to_string(n));
    return n % 4 == 1 ? 5 : 3;
}

}  // namespace paracert
