#include "paracert/derivation.hpp"

#include "paracert/errors.hpp"

#include <algorithm>
#include <bit>
#include <chrono>

#include <nlohmann/json.hpp>

namespace paracert {

namespace {

using u64 = std::uint64_t;

std::string str(u64 v) { return std::to_string(v); }

}  // namespace

std::string EngineStats::to_json() const {
    nlohmann::ordered_json j;
    j["case_counts"] = {{"coprime_split", coprime_split},
                        {"power_of_two", power_of_two},
                        {"odd_prime", odd_prime},
                        {"odd_prime_power", odd_prime_power},
                        {"already_established", already_established}};
    j["max_pow2_depth"] = max_pow2_depth;
    j["aux_facts"] = aux_facts;
    j["aux_prime_derivations"] = aux_prime_derivations;
    j["max_aux_fact"] = max_aux_fact;
    j["goldbach_searches"] = goldbach_searches;
    j["goldbach_diff_max"] = goldbach_diff_max;
    j["goldbach_diff_mean"] =
        goldbach_searches ? static_cast<double>(goldbach_diff_total) / static_cast<double>(goldbach_searches) : 0.0;
    j["steps"] = steps;
    j["wall_seconds"] = wall_seconds;
    return j.dump(2);
}

Classification classify(u64 n, const PrimeTable& table) {
    if (n < 2) throw DomainError("classify requires n >= 2");
    if (std::has_single_bit(n)) return {InductionCase::PowerOfTwo, 0, 0, 2, static_cast<unsigned>(std::countr_zero(n))};
    if (table.is_prime(n)) return {InductionCase::OddPrime, 0, 0, n, 1};

    u64 p = 0;
    if ((n & 1) == 0) {
        p = 2;
    } else {
        for (u64 d = 3; d <= n / d; d += 2) {
            if (n % d == 0) {
                p = d;
                break;
            }
        }
        if (p == 0) p = n;  // prime beyond the table; unreachable with the default limit
    }
    u64 a = 1;
    unsigned k = 0;
    u64 rest = n;
    while (rest % p == 0) {
        rest /= p;
        a *= p;
        ++k;
    }
    if (rest == 1) {
        if (k == 1) return {InductionCase::OddPrime, 0, 0, n, 1};
        return {InductionCase::OddPrimePower, 0, 0, p, k};
    }
    return {InductionCase::CoprimeSplit, a, rest, 0, 0};
}

DerivationEngine::DerivationEngine(u64 target_bound, const EngineOptions& options)
    : target_(target_bound), options_(options), store_(target_bound) {
    if (target_bound <= kBaseBound)
        throw DomainError("target bound must be at least " + str(kBaseBound + 1) + ", got " + str(target_bound));
    if (target_bound > (u64{1} << 60)) throw UnsupportedError("target bound too large");
    const u64 limit = options.sieve_limit ? options.sieve_limit : 4 * target_bound + 64;
    table_ = PrimeTable::build(limit, options.sieve);
    store_.reserve(target_bound + target_bound / 2);
}

void DerivationEngine::run() {
    seed_base();
    while (frontier_ < target_) derive_next();
}

void DerivationEngine::seed_base() {
    if (frontier_ != 0) throw InternalError("base facts already seeded");
    for (u64 n = 1; n <= kBaseBound; ++n) {
        emit(make_base_step(n));
        frontier_ = n;
    }
}

void DerivationEngine::emit(CertificateStep step) {
    const u64 n = step.fact.n;
    if (n > frontier_ + 1 && frontier_ >= kBaseBound) {
        if (n > 4 * frontier_)
            throw BoundViolation("auxiliary fact " + str(n) + " exceeds 4N = " + str(4 * frontier_));
        ++stats_.aux_facts;
        if (n > stats_.max_aux_fact) stats_.max_aux_fact = n;
    }
    store_.append(std::move(step));
    ++stats_.steps;
}

GoldbachPair DerivationEngine::find_pair(u64 m) {
    const GoldbachPair pair = goldbach_pair(m, table_, options_.policy);
    ++stats_.goldbach_searches;
    stats_.goldbach_diff_total += pair.p - pair.q;
    stats_.goldbach_diff_max = std::max(stats_.goldbach_diff_max, pair.p - pair.q);
    return pair;
}

void DerivationEngine::require_below_frontier(u64 value, const char* inequality) const {
    if (value > frontier_ || !store_.contains(value))
        throw BoundViolation(std::string("bound ") + inequality + " failed: " + str(value) + " > N = " +
                             str(frontier_));
}

void DerivationEngine::derive_next() {
    const u64 n = frontier_ + 1;
    if (frontier_ < kBaseBound) throw InternalError("seed_base must run before derive_next");
    if (store_.contains(n)) {
        ++stats_.already_established;
    } else {
        const Classification c = classify(n, table_);
        switch (c.kind) {
            case InductionCase::CoprimeSplit:
                ++stats_.coprime_split;
                emit(make_product_step(c.a, c.b));
                break;
            case InductionCase::PowerOfTwo:
                ++stats_.power_of_two;
                derive_pow2(c.exponent);
                break;
            case InductionCase::OddPrime:
                ++stats_.odd_prime;
                derive_prime_case(n);
                break;
            case InductionCase::OddPrimePower:
                ++stats_.odd_prime_power;
                derive_odd_prime_power(n);
                break;
        }
        if (!store_.contains(n)) throw InternalError("derivation did not establish " + str(n));
    }
    frontier_ = n;
}

void DerivationEngine::derive_pow2(unsigned e) {
    if (e >= 63) throw UnsupportedError("2^" + std::to_string(e) + " is out of range");
    const u64 m = u64{1} << e;
    if (store_.contains(m)) return;
    if (m <= kBaseBound) throw InternalError("2^e <= 20 is a base fact");

    struct DepthGuard {
        unsigned& depth;
        explicit DepthGuard(unsigned& d) : depth(d) { ++depth; }
        ~DepthGuard() { --depth; }
    } guard(pow2_depth_);
    if (pow2_depth_ > stats_.max_pow2_depth) stats_.max_pow2_depth = pow2_depth_;

    const GoldbachPair pair = find_pair(m);
    if (pair.p == pair.q) throw InternalError("degenerate Goldbach pair for " + str(m));
    if (!store_.contains(pair.q)) derive_aux_prime(pair.q);
    if (!store_.contains(pair.p)) derive_aux_prime(pair.p);
    derive_diff(pair.p, pair.q);
    emit(make_parallelogram_step(pair.p, pair.q, Slot::Sum, StepMeta{options_.policy}));
}

void DerivationEngine::derive_prime_case(u64 n) {
    const u64 q = select_q_for_prime(n);
    const u64 half = (n + q) / 2;
    if (half >= n) throw InternalError("(n+q)/2 >= n for n = " + str(n));
    if (!store_.contains(n + q)) {
        require_below_frontier(half, "(N+1+q)/2 <= N");
        emit(make_product_step(2, half));
    }
    require_below_frontier(n - q, "N+1-q <= N");
    emit(make_parallelogram_step(n, q, Slot::P));
}

void DerivationEngine::derive_aux_prime(u64 p) {
    if (store_.contains(p)) return;
    ++stats_.aux_prime_derivations;
    const u64 r = select_r(p);
    if (p <= r) throw InternalError("auxiliary prime " + str(p) + " too small for the r selector");
    if (!store_.contains(p + r)) {
        require_below_frontier((p + r) / 4, "(p+r)/4 <= N");
        emit(make_product_step(4, (p + r) / 4));
    }
    if (!store_.contains(p - r)) {
        require_below_frontier((p - r) / 2, "(p-r)/2 <= N");
        emit(make_product_step(2, (p - r) / 2));
    }
    emit(make_parallelogram_step(p, r, Slot::P));
}

void DerivationEngine::derive_diff(u64 p, u64 q) {
    if (p <= q) throw InternalError("derive_diff requires p > q");
    const u64 d = p - q;
    if (store_.contains(d)) return;
    const int k = std::countr_zero(d);
    const u64 odd = d >> k;
    if (odd != 1) {
        require_below_frontier(u64{1} << k, "2^e <= N");
        require_below_frontier(odd, "a <= N");
        emit(make_product_step(u64{1} << k, odd));
    } else {
        derive_pow2(static_cast<unsigned>(k));
    }
}

void DerivationEngine::derive_odd_prime_power(u64 n) {
    if (!store_.contains(2 * n)) {
        const GoldbachPair pair = find_pair(2 * n);
        if (pair.q >= n) throw InternalError("Goldbach pair of 2n has q >= n for composite n = " + str(n));
        if (!store_.contains(pair.q)) throw InternalError("q = " + str(pair.q) + " below the frontier is missing");
        derive_aux_prime(pair.p);
        derive_diff(pair.p, pair.q);
        emit(make_parallelogram_step(pair.p, pair.q, Slot::Sum, StepMeta{options_.policy}));
    }
    emit(make_quotient_step(2 * n, 2));
}

CertificationResult certify_range(u64 target_bound, const EngineOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    DerivationEngine engine(target_bound, options);
    engine.run();
    EngineStats stats = engine.stats();
    stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {std::move(engine.store()), stats};
}

}  // namespace paracert
