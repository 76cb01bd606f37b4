#include "paracert/proof_model.hpp"

#include "paracert/errors.hpp"

#include <algorithm>
#include <array>

namespace paracert {

namespace {

using u64 = std::uint64_t;

constexpr u64 kDenseLimit = u64{1} << 31;

Int128 add(Int128 a, Int128 b) {
    Int128 r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("128-bit addition overflow");
    return r;
}
Int128 sub(Int128 a, Int128 b) {
    Int128 r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("128-bit subtraction overflow");
    return r;
}
Int128 twice(Int128 a) { return add(a, a); }

std::string str(u64 v) { return std::to_string(v); }

constexpr std::array<Slot, 4> kSlotOrder{Slot::P, Slot::Q, Slot::Sum, Slot::Diff};

}  // namespace

std::string_view to_string(Slot slot) noexcept {
    switch (slot) {
        case Slot::Sum: return "sum";
        case Slot::Diff: return "diff";
        case Slot::P: return "p";
        case Slot::Q: return "q";
    }
    return "?";
}

std::optional<Slot> parse_slot(std::string_view text) noexcept {
    if (text == "sum") return Slot::Sum;
    if (text == "diff") return Slot::Diff;
    if (text == "p") return Slot::P;
    if (text == "q") return Slot::Q;
    return std::nullopt;
}

std::string_view to_string(ViolationCode code) noexcept {
    switch (code) {
        case ViolationCode::DuplicateFact: return "duplicate_fact";
        case ViolationCode::Cycle: return "cycle";
        case ViolationCode::MissingPrerequisite: return "missing_prerequisite";
        case ViolationCode::UnexpectedPrerequisite: return "unexpected_prerequisite";
        case ViolationCode::NotCoprime: return "not_coprime";
        case ViolationCode::WrongProduct: return "wrong_product";
        case ViolationCode::TrivialFactor: return "trivial_factor";
        case ViolationCode::PNotPrime: return "p_not_prime";
        case ViolationCode::QNotPrime: return "q_not_prime";
        case ViolationCode::PLessThanQ: return "p_less_than_q";
        case ViolationCode::SlotMismatch: return "slot_mismatch";
        case ViolationCode::InexactDivision: return "inexact_division";
        case ViolationCode::ValueMismatch: return "value_mismatch";
        case ViolationCode::BaseOutOfRange: return "base_out_of_range";
        case ViolationCode::ArithmeticOverflow: return "arithmetic_overflow";
        case ViolationCode::CoverageGap: return "coverage_gap";
    }
    return "unknown";
}

u64 gcd_u64(u64 a, u64 b) noexcept {
    while (b != 0) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Int128 checked_square(u64 n) {
    // n^2 < 2^127 iff n < 2^63.5; reject anything at or above 2^63.
    if (n >> 63) throw OverflowError("square of " + str(n) + " exceeds 127 bits");
    return static_cast<Int128>(n) * static_cast<Int128>(n);
}

u64 slot_value(u64 p, u64 q, Slot slot) {
    switch (slot) {
        case Slot::Sum: {
            u64 s;
            if (__builtin_add_overflow(p, q, &s)) throw OverflowError("p + q exceeds 64 bits");
            return s;
        }
        case Slot::Diff:
            if (p < q) throw DomainError("p - q with p < q");
            return p - q;
        case Slot::P: return p;
        case Slot::Q: return q;
    }
    return 0;
}

std::vector<u64> demanded_prerequisites(const Justification& just) {
    struct Visitor {
        std::vector<u64> operator()(const Base&) const { return {}; }
        std::vector<u64> operator()(const CoprimeProduct& j) const { return {j.a, j.b}; }
        std::vector<u64> operator()(const CoprimeQuotient& j) const { return {j.product, j.divisor}; }
        std::vector<u64> operator()(const ParallelogramClose& j) const {
            if (j.p < j.q) return {};
            std::vector<u64> out;
            for (Slot s : kSlotOrder)
                if (s != j.target) out.push_back(slot_value(j.p, j.q, s));
            return out;
        }
    };
    return std::visit(Visitor{}, just);
}

CertificateStep make_base_step(u64 n) { return {Fact{n}, Base{}, {}, {}}; }

CertificateStep make_product_step(u64 a, u64 b) {
    u64 n;
    if (__builtin_mul_overflow(a, b, &n)) throw OverflowError("a * b exceeds 64 bits");
    return {Fact{n}, CoprimeProduct{a, b}, {a, b}, {}};
}

CertificateStep make_quotient_step(u64 product, u64 divisor) {
    if (divisor == 0 || product % divisor != 0)
        throw DomainError(str(divisor) + " does not divide " + str(product));
    return {Fact{product / divisor}, CoprimeQuotient{product, divisor}, {product, divisor}, {}};
}

CertificateStep make_parallelogram_step(u64 p, u64 q, Slot target, StepMeta meta) {
    if (p < q) throw DomainError("parallelogram step requires p >= q");
    ParallelogramClose just{p, q, target};
    return {Fact{slot_value(p, q, target)}, just, demanded_prerequisites(just), meta};
}

Int128 parallelogram_solve(std::span<const SlotValue> known, Slot target) {
    if (known.size() != 3) throw DomainError("parallelogram_solve needs exactly three known slots");
    std::array<std::optional<Int128>, 4> value;
    for (const SlotValue& sv : known) {
        auto idx = static_cast<std::size_t>(sv.slot);
        if (sv.slot == target || value[idx]) throw DomainError("known slots must be the three non-target slots");
        value[idx] = sv.value;
    }
    auto v = [&](Slot s) { return *value[static_cast<std::size_t>(s)]; };
    // f(sum) + f(diff) = 2 f(p) + 2 f(q)
    switch (target) {
        case Slot::Sum: return sub(add(twice(v(Slot::P)), twice(v(Slot::Q))), v(Slot::Diff));
        case Slot::Diff: return sub(add(twice(v(Slot::P)), twice(v(Slot::Q))), v(Slot::Sum));
        case Slot::P:
        case Slot::Q: {
            const Slot other = target == Slot::P ? Slot::Q : Slot::P;
            const Int128 twice_target = sub(add(v(Slot::Sum), v(Slot::Diff)), twice(v(other)));
            if (twice_target % 2 != 0) throw MalformedInstance("parallelogram slot value is not an integer");
            return twice_target / 2;
        }
    }
    throw DomainError("unknown slot");
}

namespace {

void check_prerequisite_list(const CertificateStep& step, const std::vector<u64>& demanded,
                             const StepContext& ctx, std::vector<Violation>& out) {
    std::vector<u64> want = demanded;
    std::vector<u64> have = step.prerequisites;
    std::sort(want.begin(), want.end());
    std::sort(have.begin(), have.end());
    std::vector<u64> not_listed, extra;
    std::set_difference(want.begin(), want.end(), have.begin(), have.end(), std::back_inserter(not_listed));
    std::set_difference(have.begin(), have.end(), want.begin(), want.end(), std::back_inserter(extra));
    for (u64 x : not_listed)
        out.push_back({ViolationCode::MissingPrerequisite, "prerequisite " + str(x) + " not listed"});
    for (u64 x : extra)
        out.push_back({ViolationCode::UnexpectedPrerequisite, "prerequisite " + str(x) + " not used by the schema"});
    want.erase(std::unique(want.begin(), want.end()), want.end());
    for (u64 x : want)
        if (x != 0 && !ctx.is_established(x))
            out.push_back({ViolationCode::MissingPrerequisite, "missing prerequisite " + str(x)});
}

struct StepValidator {
    u64 n;
    const StepContext& ctx;
    std::vector<Violation>& out;

    void operator()(const Base&) const {
        if (n > kBaseBound)
            out.push_back({ViolationCode::BaseOutOfRange, "base step for " + str(n) + " > " + str(kBaseBound)});
    }

    void operator()(const CoprimeProduct& j) const {
        if (j.a <= 1 || j.b <= 1) {
            out.push_back({ViolationCode::TrivialFactor, "coprime_product factors must exceed 1"});
            return;
        }
        u64 prod;
        if (__builtin_mul_overflow(j.a, j.b, &prod))
            out.push_back({ViolationCode::ArithmeticOverflow, "a * b exceeds 64 bits"});
        else if (prod != n)
            out.push_back({ViolationCode::WrongProduct, str(j.a) + " * " + str(j.b) + " != " + str(n)});
        if (gcd_u64(j.a, j.b) != 1)
            out.push_back({ViolationCode::NotCoprime, "gcd(" + str(j.a) + ", " + str(j.b) + ") != 1"});
    }

    void operator()(const CoprimeQuotient& j) const {
        if (j.divisor <= 1) {
            out.push_back({ViolationCode::TrivialFactor, "coprime_quotient divisor must exceed 1"});
            return;
        }
        if (j.product % j.divisor != 0) {
            out.push_back({ViolationCode::InexactDivision, str(j.divisor) + " does not divide " + str(j.product)});
        } else if (j.product / j.divisor != n) {
            out.push_back({ViolationCode::WrongProduct,
                           str(j.product) + " / " + str(j.divisor) + " != " + str(n)});
        }
        if (gcd_u64(j.divisor, n) != 1)
            out.push_back({ViolationCode::NotCoprime, "gcd(" + str(j.divisor) + ", " + str(n) + ") != 1"});
    }

    void operator()(const ParallelogramClose& j) const {
        if (!ctx.is_prime(j.p)) out.push_back({ViolationCode::PNotPrime, "p = " + str(j.p) + " is not prime"});
        if (!ctx.is_prime(j.q)) out.push_back({ViolationCode::QNotPrime, "q = " + str(j.q) + " is not prime"});
        if (j.p < j.q) {
            out.push_back({ViolationCode::PLessThanQ, "p = " + str(j.p) + " < q = " + str(j.q)});
            return;
        }
        u64 sum;
        if (__builtin_add_overflow(j.p, j.q, &sum)) {
            out.push_back({ViolationCode::ArithmeticOverflow, "p + q exceeds 64 bits"});
            return;
        }
        const u64 target_value = slot_value(j.p, j.q, j.target);
        if (target_value != n) {
            out.push_back({ViolationCode::SlotMismatch, std::string("slot ") + std::string(to_string(j.target)) +
                                                            " of (" + str(j.p) + ", " + str(j.q) + ") is " +
                                                            str(target_value) + ", not " + str(n)});
            return;
        }
        try {
            std::vector<SlotValue> known;
            for (Slot s : kSlotOrder)
                if (s != j.target) known.push_back({s, checked_square(slot_value(j.p, j.q, s))});
            if (parallelogram_solve(known, j.target) != checked_square(n))
                out.push_back({ViolationCode::ValueMismatch, "solved value differs from " + str(n) + "^2"});
        } catch (const MalformedInstance& e) {
            out.push_back({ViolationCode::InexactDivision, e.what()});
        } catch (const OverflowError& e) {
            out.push_back({ViolationCode::ArithmeticOverflow, e.what()});
        }
    }
};

}  // namespace

std::vector<Violation> validate_step(const CertificateStep& step, const StepContext& context) {
    std::vector<Violation> out;
    std::visit(StepValidator{step.fact.n, context, out}, step.justification);
    check_prerequisite_list(step, demanded_prerequisites(step.justification), context, out);
    return out;
}

std::vector<Violation> validate_step(const CertificateStep& step, const std::unordered_set<u64>& established) {
    StepContext ctx{[&](u64 x) { return x == 0 || established.contains(x); }, [](u64 x) { return is_prime_u64(x); }};
    return validate_step(step, ctx);
}

bool CertificateStore::contains(u64 n) const noexcept {
    if (n == 0) return true;
    if (n < dense_.size()) return dense_[n];
    return n >= kDenseLimit && sparse_.contains(n);
}

void CertificateStore::append(CertificateStep step) {
    const u64 n = step.fact.n;
    if (n != 0 && contains(n)) throw InternalError("fact " + str(n) + " justified twice");
    if (n < kDenseLimit) {
        if (n >= dense_.size()) dense_.resize(std::max<u64>(n + 1, dense_.size() * 2), false);
        dense_[n] = true;
    } else {
        sparse_.insert(n);
    }
    steps_.push_back(std::move(step));
}

}  // namespace paracert
