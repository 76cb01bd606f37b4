#pragma once

// Exact-rational constraint propagation for multiplicative f satisfying
// f(m+n) + f(m-n) = 2f(m) + 2f(n) on an instance set E.
//
// The unknowns are u_{p^k} = f(p^k) for prime powers p^k <= M. Composite
// values are monomials by multiplicativity (f(12) = u_4 * u_3), f(1) = 1 and
// f(0) = 0. Equations are solved for their largest unknown as soon as they
// become linear; monomials with two or more undetermined factors stay parked.
// The only branching is the zero product (f(2) - 4) f(p) = 0 coming from the
// (p,p) instance combined with f(2p) = f(2) f(p).

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace paracert {

using Rational = boost::multiprecision::cpp_rational;

std::string to_string(const Rational& value);

// Exact linear form constant + sum coeff_i * u_i, keyed by the prime power i.
class LinearExpr {
public:
    LinearExpr() = default;
    explicit LinearExpr(Rational constant) : constant_(std::move(constant)) {}
    static LinearExpr unknown(std::uint64_t prime_power, Rational coeff = 1);

    const Rational& constant() const noexcept { return constant_; }
    const std::map<std::uint64_t, Rational>& terms() const noexcept { return terms_; }
    bool is_constant() const noexcept { return terms_.empty(); }
    Rational coefficient(std::uint64_t u) const;
    std::optional<std::uint64_t> largest_unknown() const;

    LinearExpr& operator+=(const LinearExpr& other);
    LinearExpr& operator-=(const LinearExpr& other);
    LinearExpr& operator*=(const Rational& factor);
    friend LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
    friend LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }
    friend LinearExpr operator*(LinearExpr a, const Rational& k) { return a *= k; }
    friend bool operator==(const LinearExpr&, const LinearExpr&) = default;

    // Product when at most one side is non-constant.
    static std::optional<LinearExpr> multiply(const LinearExpr& a, const LinearExpr& b);

    // Replaces u by its expression.
    LinearExpr substitute(std::uint64_t u, const LinearExpr& value) const;

    // Descending unknowns, e.g. "2*f(3) + 2*f(2) - 1".
    std::string to_string() const;

private:
    void prune();
    Rational constant_{0};
    std::map<std::uint64_t, Rational> terms_;
};

// A value of f: linear, or a product of two or more non-constant factors
// waiting for all but one of them to be determined.
struct SymbolicValue {
    std::optional<LinearExpr> linear;
    std::vector<LinearExpr> parked_factors;
    bool is_linear() const noexcept { return linear.has_value(); }
};

// Decidable instance set E.
struct InstanceSet {
    std::string name;
    std::function<bool(std::uint64_t)> contains;

    static InstanceSet primes();
    static InstanceSet multiples_of(std::uint64_t k);
    static InstanceSet from_list(std::string name, std::vector<std::uint64_t> members);
    // Whitespace/comma separated positive integers. Throws ParseError / IoError.
    static InstanceSet from_file(const std::filesystem::path& path);
    // "primes", "4n" (or "<k>n"), "file:<path>". Throws DomainError.
    static InstanceSet parse(const std::string& spec);
};

// f(m+n) + f(m-n) - 2f(m) - 2f(n) = 0, or a branch seed f(x) = value.
struct Equation {
    enum class Kind { Instance, Assignment } kind = Kind::Instance;
    std::uint64_t m = 0;
    std::uint64_t n = 0;
    std::uint64_t x = 0;
    Rational value;
    std::string label() const;
};

struct Contradiction {
    std::string equation;
    std::optional<std::uint64_t> unknown;  // unknown whose value is contested, if identifiable
    std::optional<Rational> forced;        // value the failing equation demands
    std::optional<Rational> existing;      // value held before
    std::string describe() const;
};

struct Definition {
    LinearExpr reduced;  // in terms of currently free unknowns only
    LinearExpr origin;   // as solved when created
    std::string source;  // equation label
    std::size_t sequence = 0;
};

class ConstraintSystem {
public:
    ConstraintSystem(InstanceSet set, std::uint64_t bound);

    const InstanceSet& set() const noexcept { return set_; }
    std::uint64_t bound() const noexcept { return bound_; }
    const std::vector<std::uint64_t>& unknowns() const noexcept { return unknowns_; }
    const std::vector<Equation>& equations() const noexcept { return equations_; }
    const std::map<std::uint64_t, Definition>& definitions() const noexcept { return defs_; }
    const std::optional<Contradiction>& contradiction() const noexcept { return contradiction_; }
    const std::vector<std::string>& branch_path() const noexcept { return branch_path_; }

    bool is_determined(std::uint64_t u) const;
    std::optional<Rational> value_of(std::uint64_t u) const;
    // f(n) under the current definitions.
    SymbolicValue f(std::uint64_t n) const;
    std::optional<Rational> f_value(std::uint64_t n) const;

    // Processed before the ordinary instances on the next propagate.
    void add_seed(Equation seed);
    // The branch hypothesis u != value.
    void add_exclusion(std::uint64_t u, Rational value);
    void add_branch_label(std::string label) { branch_path_.push_back(std::move(label)); }

    // Residual of an equation: nullopt while parked.
    std::optional<LinearExpr> residual(const Equation& eq) const;

    // Internal, used by propagate.
    bool define(std::uint64_t u, LinearExpr expr, const std::string& source, std::vector<std::string>& transcript);
    void set_contradiction(Contradiction c) { contradiction_ = std::move(c); }
    std::vector<char>& done() noexcept { return done_; }
    std::vector<Equation>& seeds() noexcept { return seeds_; }
    Contradiction explain(const Equation& eq, const LinearExpr& residual) const;

private:
    LinearExpr resolve(std::uint64_t u) const;
    LinearExpr resolve_origin(std::uint64_t u, std::uint64_t suppressed) const;

    InstanceSet set_;
    std::uint64_t bound_;
    std::vector<std::uint64_t> unknowns_;
    std::vector<Equation> equations_;
    std::vector<char> done_;
    std::vector<Equation> seeds_;
    std::map<std::uint64_t, Definition> defs_;
    std::vector<std::pair<std::uint64_t, Rational>> exclusions_;
    std::optional<Contradiction> contradiction_;
    std::vector<std::string> branch_path_;
    std::size_t next_sequence_ = 0;
};

struct PropagationReport {
    std::vector<std::uint64_t> determined;  // unknowns newly determined in this call
    std::size_t pending = 0;                // parked equations left
    std::optional<Contradiction> contradiction;
};

// Runs to fixpoint; appends one line per inference to `transcript`.
PropagationReport propagate(ConstraintSystem& system, std::vector<std::string>& transcript);

// Children of a zero-product split, or {system} when no split applies.
std::vector<ConstraintSystem> branch_on_zero_product(const ConstraintSystem& system,
                                                     std::vector<std::string>& transcript);

struct SolveTree {
    std::vector<ConstraintSystem> surviving;
    std::vector<ConstraintSystem> pruned;
    std::vector<std::string> transcript;
};

// Propagate and branch until every leaf is at fixpoint.
SolveTree solve(ConstraintSystem root, std::size_t max_depth = 8);

struct BootstrapResult {
    std::map<std::uint64_t, Rational> table;  // n -> f(n), 1 <= n <= 20
    std::map<std::uint64_t, LinearExpr> root_relations;  // u -> origin expression before any branch
    std::vector<Contradiction> pruned;
    std::size_t surviving_branches = 0;
    std::vector<std::string> transcript;
};

// E = primes, M = 40. Throws InternalError unless exactly one branch survives
// with every f(n), n <= 20, determined.
BootstrapResult solve_bootstrap();

struct ProbeReport {
    std::string set;
    std::uint64_t bound = 0;
    std::map<std::uint64_t, Rational> determined;
    std::vector<std::uint64_t> free;
    std::optional<Contradiction> contradiction;
    std::size_t surviving_branches = 0;
    std::vector<std::string> transcript;
    std::string to_json() const;
};

// M must be <= 10^4 (DomainError).
ProbeReport uniqueness_probe(const InstanceSet& set, std::uint64_t bound);

}  // namespace paracert
