#include "paracert/bootstrap.hpp"

#include "paracert/errors.hpp"
#include "paracert/primes.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

namespace paracert {

namespace {

using u64 = std::uint64_t;

std::string str(u64 v) { return std::to_string(v); }

std::string fname(u64 u) { return "f(" + str(u) + ")"; }

}  // namespace

std::string to_string(const Rational& value) { return value.str(); }

// ---------------------------------------------------------------------------
// LinearExpr

LinearExpr LinearExpr::unknown(u64 prime_power, Rational coeff) {
    LinearExpr e;
    if (coeff != 0) e.terms_.emplace(prime_power, std::move(coeff));
    return e;
}

Rational LinearExpr::coefficient(u64 u) const {
    auto it = terms_.find(u);
    return it == terms_.end() ? Rational{0} : it->second;
}

std::optional<u64> LinearExpr::largest_unknown() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.rbegin()->first;
}

void LinearExpr::prune() {
    std::erase_if(terms_, [](const auto& kv) { return kv.second == 0; });
}

LinearExpr& LinearExpr::operator+=(const LinearExpr& other) {
    constant_ += other.constant_;
    for (const auto& [u, c] : other.terms_) terms_[u] += c;
    prune();
    return *this;
}

LinearExpr& LinearExpr::operator-=(const LinearExpr& other) {
    constant_ -= other.constant_;
    for (const auto& [u, c] : other.terms_) terms_[u] -= c;
    prune();
    return *this;
}

LinearExpr& LinearExpr::operator*=(const Rational& factor) {
    if (factor == 0) {
        constant_ = 0;
        terms_.clear();
        return *this;
    }
    constant_ *= factor;
    for (auto& [u, c] : terms_) c *= factor;
    return *this;
}

std::optional<LinearExpr> LinearExpr::multiply(const LinearExpr& a, const LinearExpr& b) {
    if (a.is_constant()) return b * a.constant_;
    if (b.is_constant()) return a * b.constant_;
    return std::nullopt;
}

LinearExpr LinearExpr::substitute(u64 u, const LinearExpr& value) const {
    auto it = terms_.find(u);
    if (it == terms_.end()) return *this;
    LinearExpr out = *this;
    const Rational c = it->second;
    out.terms_.erase(u);
    out += value * c;
    return out;
}

std::string LinearExpr::to_string() const {
    std::ostringstream os;
    bool first = true;
    auto emit = [&](Rational c, const std::string& name) {
        const bool negative = c < 0;
        if (negative) c = -c;
        if (first) {
            if (negative) os << '-';
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        if (name.empty()) {
            os << c.str();
        } else {
            if (c != 1) os << c.str() << '*';
            os << name;
        }
    };
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) emit(it->second, fname(it->first));
    if (constant_ != 0 || first) emit(constant_, "");
    return os.str();
}

// ---------------------------------------------------------------------------
// InstanceSet

InstanceSet InstanceSet::primes() {
    return {"primes", [](u64 n) { return is_prime_u64(n); }};
}

InstanceSet InstanceSet::multiples_of(u64 k) {
    if (k == 0) throw DomainError("multiples_of requires k >= 1");
    return {str(k) + "n", [k](u64 n) { return n > 0 && n % k == 0; }};
}

InstanceSet InstanceSet::from_list(std::string name, std::vector<u64> members) {
    std::set<u64> s(members.begin(), members.end());
    return {std::move(name), [s = std::move(s)](u64 n) { return s.contains(n); }};
}

InstanceSet InstanceSet::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open instance set file " + path.string());
    std::vector<u64> members;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream tokens(line);
        std::string tok;
        while (tokens >> tok) {
            u64 v = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc{} || ptr != tok.data() + tok.size() || v == 0)
                throw ParseError(line_no, "expected a positive integer, got '" + tok + "'");
            members.push_back(v);
        }
    }
    return from_list("file:" + path.string(), std::move(members));
}

InstanceSet InstanceSet::parse(const std::string& spec) {
    if (spec == "primes") return primes();
    if (spec.starts_with("file:")) return from_file(spec.substr(5));
    if (spec.size() >= 2 && spec.back() == 'n') {
        u64 k = 0;
        auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size() - 1, k);
        if (ec == std::errc{} && ptr == spec.data() + spec.size() - 1 && k > 0) return multiples_of(k);
    }
    throw DomainError("unknown instance set '" + spec + "' (expected primes, <k>n or file:<path>)");
}

// ---------------------------------------------------------------------------
// Equations and contradictions

std::string Equation::label() const {
    if (kind == Kind::Instance) return "instance (" + str(m) + "," + str(n) + ")";
    return "seed " + fname(x) + " = " + value.str();
}

std::string Contradiction::describe() const {
    std::string out = equation + " is violated";
    if (unknown && forced && existing)
        out += ": it forces " + fname(*unknown) + " = " + forced->str() + " but " + fname(*unknown) + " = " +
               existing->str();
    return out;
}

// ---------------------------------------------------------------------------
// ConstraintSystem

namespace {

std::vector<u64> smallest_prime_factors(u64 bound) {
    std::vector<u64> spf(bound + 1, 0);
    for (u64 i = 2; i <= bound; ++i) {
        if (spf[i] != 0) continue;
        for (u64 j = i; j <= bound; j += i)
            if (spf[j] == 0) spf[j] = i;
    }
    return spf;
}

}  // namespace

ConstraintSystem::ConstraintSystem(InstanceSet set, u64 bound) : set_(std::move(set)), bound_(bound) {
    const auto spf = smallest_prime_factors(bound_);
    for (u64 x = 2; x <= bound_; ++x) {
        u64 rest = x;
        while (rest % spf[x] == 0) rest /= spf[x];
        if (rest == 1) unknowns_.push_back(x);
    }
    std::vector<u64> members;
    for (u64 x = 1; x <= bound_; ++x)
        if (set_.contains(x)) members.push_back(x);
    // Ascending by (m+n, m).
    for (u64 s = 2; s <= bound_; ++s) {
        for (u64 m : members) {
            if (2 * m < s) continue;
            if (m >= s) break;
            const u64 n = s - m;
            if (n > m || !set_.contains(n)) continue;
            Equation eq;
            eq.m = m;
            eq.n = n;
            equations_.push_back(std::move(eq));
        }
    }
    done_.assign(equations_.size(), 0);
}

LinearExpr ConstraintSystem::resolve(u64 u) const {
    auto it = defs_.find(u);
    return it == defs_.end() ? LinearExpr::unknown(u) : it->second.reduced;
}

bool ConstraintSystem::is_determined(u64 u) const {
    auto it = defs_.find(u);
    return it != defs_.end() && it->second.reduced.is_constant();
}

std::optional<Rational> ConstraintSystem::value_of(u64 u) const {
    if (!is_determined(u)) return std::nullopt;
    return defs_.at(u).reduced.constant();
}

namespace {

std::vector<u64> factors_of(u64 n) {
    std::vector<u64> out;
    for (u64 p = 2; p <= n / p; ++p) {
        if (n % p != 0) continue;
        u64 pk = 1;
        while (n % p == 0) {
            n /= p;
            pk *= p;
        }
        out.push_back(pk);
    }
    if (n > 1) out.push_back(n);
    return out;
}

template <class Resolve>
SymbolicValue symbolic_f(u64 n, Resolve&& resolve) {
    SymbolicValue v;
    if (n == 0) {
        v.linear = LinearExpr{Rational{0}};
        return v;
    }
    Rational scale = 1;
    std::vector<LinearExpr> open;
    for (u64 pk : factors_of(n)) {
        LinearExpr e = resolve(pk);
        if (e.is_constant())
            scale *= e.constant();
        else
            open.push_back(std::move(e));
    }
    if (scale == 0) {
        v.linear = LinearExpr{Rational{0}};
    } else if (open.empty()) {
        v.linear = LinearExpr{scale};
    } else if (open.size() == 1) {
        v.linear = open.front() * scale;
    } else {
        open.front() *= scale;
        v.parked_factors = std::move(open);
    }
    return v;
}

template <class Resolve>
std::optional<LinearExpr> symbolic_residual(const Equation& eq, Resolve&& resolve) {
    if (eq.kind == Equation::Kind::Assignment) {
        SymbolicValue fx = symbolic_f(eq.x, resolve);
        if (!fx.is_linear()) return std::nullopt;
        return *fx.linear - LinearExpr{eq.value};
    }
    const std::pair<Rational, u64> terms[] = {
        {1, eq.m + eq.n}, {1, eq.m - eq.n}, {-2, eq.m}, {-2, eq.n}};
    LinearExpr total;
    for (const auto& [coeff, arg] : terms) {
        SymbolicValue fx = symbolic_f(arg, resolve);
        if (!fx.is_linear()) return std::nullopt;
        total += *fx.linear * coeff;
    }
    return total;
}

}  // namespace

SymbolicValue ConstraintSystem::f(u64 n) const {
    return symbolic_f(n, [this](u64 u) { return resolve(u); });
}

std::optional<Rational> ConstraintSystem::f_value(u64 n) const {
    SymbolicValue v = f(n);
    if (!v.is_linear() || !v.linear->is_constant()) return std::nullopt;
    return v.linear->constant();
}

std::optional<LinearExpr> ConstraintSystem::residual(const Equation& eq) const {
    return symbolic_residual(eq, [this](u64 u) { return resolve(u); });
}

void ConstraintSystem::add_seed(Equation seed) { seeds_.push_back(std::move(seed)); }

void ConstraintSystem::add_exclusion(u64 u, Rational value) { exclusions_.emplace_back(u, std::move(value)); }

bool ConstraintSystem::define(u64 u, LinearExpr expr, const std::string& source,
                              std::vector<std::string>& transcript) {
    if (defs_.contains(u)) throw InternalError("unknown " + str(u) + " defined twice");
    if (expr.coefficient(u) != 0) throw InternalError("definition of " + str(u) + " is self-referential");
    transcript.push_back(fname(u) + " = " + expr.to_string() + "   [" + source + "]");
    Definition def{expr, expr, source, next_sequence_++};
    for (auto& [v, other] : defs_) {
        if (other.reduced.coefficient(u) == 0) continue;
        const bool was_constant = other.reduced.is_constant();
        other.reduced = other.reduced.substitute(u, expr);
        if (!was_constant && other.reduced.is_constant()) {
            transcript.push_back(fname(v) + " = " + other.reduced.to_string() + "   [substituting " + fname(u) +
                                 " into " + other.source + "]");
        }
    }
    defs_.emplace(u, std::move(def));
    for (const auto& [v, banned] : exclusions_) {
        if (auto val = value_of(v); val && *val == banned) {
            contradiction_ = Contradiction{"branch hypothesis " + fname(v) + " != " + banned.str(), v, banned, banned};
            transcript.push_back("contradiction: " + contradiction_->describe());
            return false;
        }
    }
    return true;
}

LinearExpr ConstraintSystem::resolve_origin(u64 u, u64 suppressed) const {
    if (u == suppressed) return LinearExpr::unknown(u);
    auto it = defs_.find(u);
    if (it == defs_.end()) return LinearExpr::unknown(u);
    LinearExpr out{it->second.origin.constant()};
    for (const auto& [w, c] : it->second.origin.terms()) out += resolve_origin(w, suppressed) * c;
    return out;
}

Contradiction ConstraintSystem::explain(const Equation& eq, const LinearExpr& residual) const {
    // Unknowns pinned directly by an equation come first (most recent first),
    // then those that became constant through substitution.
    std::vector<std::tuple<bool, std::size_t, u64>> candidates;
    for (const auto& [u, def] : defs_)
        if (def.reduced.is_constant()) candidates.emplace_back(def.origin.is_constant(), def.sequence, u);
    std::sort(candidates.rbegin(), candidates.rend());
    for (const auto& [direct, seq, v] : candidates) {
        auto lifted = symbolic_residual(eq, [&](u64 u) { return resolve_origin(u, v); });
        if (!lifted) continue;
        const Rational k = lifted->coefficient(v);
        if (k == 0) continue;
        LinearExpr rest = lifted->substitute(v, LinearExpr{});
        // Everything except v must be pinned for a forced value to exist.
        LinearExpr pinned{rest.constant()};
        bool all_pinned = true;
        for (const auto& [w, c] : rest.terms()) {
            auto val = value_of(w);
            if (!val) {
                all_pinned = false;
                break;
            }
            pinned += LinearExpr{*val * c};
        }
        if (!all_pinned) continue;
        const Rational forced = -pinned.constant() / k;
        const Rational existing = *value_of(v);
        if (forced != existing) return Contradiction{eq.label(), v, forced, existing};
    }
    return Contradiction{eq.label() + " (residual " + residual.to_string() + ")", std::nullopt, std::nullopt,
                         std::nullopt};
}

// ---------------------------------------------------------------------------
// Propagation

namespace {

// Returns true when the equation was consumed (discharged or used to define an
// unknown); false when parked. Sets the contradiction on failure.
bool process(ConstraintSystem& system, const Equation& eq, std::vector<std::string>& transcript) {
    auto r = system.residual(eq);
    if (!r) return false;
    if (r->is_constant()) {
        if (r->constant() != 0) {
            Contradiction c = system.explain(eq, *r);
            transcript.push_back("contradiction: " + c.describe());
            system.set_contradiction(std::move(c));
        }
        return true;
    }
    const u64 pivot = *r->largest_unknown();
    const Rational coeff = r->coefficient(pivot);
    LinearExpr rest = r->substitute(pivot, LinearExpr{});
    rest *= Rational{-1} / coeff;
    std::string source = eq.label();
    if (eq.kind == Equation::Kind::Assignment)
        if (auto it = system.definitions().find(eq.x); it != system.definitions().end())
            source += " with " + it->second.source;
    system.define(pivot, std::move(rest), source, transcript);
    return true;
}

}  // namespace

PropagationReport propagate(ConstraintSystem& system, std::vector<std::string>& transcript) {
    PropagationReport report;
    std::set<u64> determined_before;
    for (u64 u : system.unknowns())
        if (system.is_determined(u)) determined_before.insert(u);

    std::vector<char> seed_done(system.seeds().size(), 0);
    auto& done = system.done();
    bool changed = true;
    while (changed && !system.contradiction()) {
        changed = false;
        for (std::size_t i = 0; i < system.seeds().size() && !system.contradiction(); ++i) {
            if (seed_done[i]) continue;
            if (process(system, system.seeds()[i], transcript)) {
                seed_done[i] = 1;
                changed = true;
            }
        }
        for (std::size_t i = 0; i < system.equations().size() && !system.contradiction(); ++i) {
            if (done[i]) continue;
            if (process(system, system.equations()[i], transcript)) {
                done[i] = 1;
                changed = true;
            }
        }
    }
    // Consumed seeds are encoded in the definitions now.
    std::vector<Equation> remaining;
    for (std::size_t i = 0; i < seed_done.size(); ++i)
        if (!seed_done[i]) remaining.push_back(system.seeds()[i]);
    system.seeds() = std::move(remaining);

    for (u64 u : system.unknowns())
        if (system.is_determined(u) && !determined_before.contains(u)) report.determined.push_back(u);
    report.pending = static_cast<std::size_t>(std::count(done.begin(), done.end(), 0)) + system.seeds().size();
    report.contradiction = system.contradiction();
    return report;
}

std::vector<ConstraintSystem> branch_on_zero_product(const ConstraintSystem& system,
                                                     std::vector<std::string>& transcript) {
    if (system.contradiction()) return {};
    const u64 M = system.bound();
    if (M < 6 || system.is_determined(2)) return {system};

    std::optional<u64> trigger;
    std::vector<u64> zeroed;
    for (const Equation& eq : system.equations()) {
        if (eq.kind != Equation::Kind::Instance || eq.m != eq.n || (eq.m & 1) == 0 || eq.m == 1) continue;
        zeroed.push_back(eq.m);
        if (trigger) continue;
        auto fp = system.f(eq.m);
        if (fp.is_linear() && fp.linear->is_constant()) continue;
        trigger = eq.m;
    }
    if (!trigger) return {system};
    std::sort(zeroed.begin(), zeroed.end());

    std::string scope;
    for (u64 q : zeroed) scope += (scope.empty() ? "" : ",") + str(q);
    transcript.push_back("branch on (f(2) - 4)*f(" + str(*trigger) + ") = 0 from instance (" + str(*trigger) + "," +
                         str(*trigger) + ") with f(" + str(2 * *trigger) + ") = f(2)*f(" + str(*trigger) + ")");

    ConstraintSystem keep = system;
    Equation seed;
    seed.kind = Equation::Kind::Assignment;
    seed.x = 2;
    seed.value = 4;
    keep.add_seed(seed);
    keep.add_branch_label("f(2) = 4");

    ConstraintSystem zero = system;
    zero.add_exclusion(2, 4);
    for (u64 q : zeroed) {
        Equation z;
        z.kind = Equation::Kind::Assignment;
        z.x = q;
        z.value = 0;
        zero.add_seed(z);
    }
    zero.add_branch_label("f(2) != 4, so f(q) = 0 for q in {" + scope + "}");
    return {std::move(keep), std::move(zero)};
}

SolveTree solve(ConstraintSystem root, std::size_t max_depth) {
    SolveTree tree;
    std::vector<std::pair<ConstraintSystem, std::size_t>> stack;
    stack.emplace_back(std::move(root), 0);
    while (!stack.empty()) {
        auto [node, depth] = std::move(stack.back());
        stack.pop_back();
        if (!node.branch_path().empty()) tree.transcript.push_back("-- branch: " + node.branch_path().back());
        propagate(node, tree.transcript);
        if (node.contradiction()) {
            tree.transcript.push_back("-- branch pruned");
            tree.pruned.push_back(std::move(node));
            continue;
        }
        if (depth >= max_depth) {
            tree.transcript.push_back("-- branch depth limit reached; leaf kept as inconclusive");
            tree.surviving.push_back(std::move(node));
            continue;
        }
        auto children = branch_on_zero_product(node, tree.transcript);
        if (children.size() == 1) {
            tree.transcript.push_back("-- fixpoint reached");
            tree.surviving.push_back(std::move(children.front()));
            continue;
        }
        // Depth-first, first child explored first.
        for (auto it = children.rbegin(); it != children.rend(); ++it) stack.emplace_back(std::move(*it), depth + 1);
    }
    return tree;
}

BootstrapResult solve_bootstrap() {
    constexpr u64 kBootstrapBound = 40;
    BootstrapResult result;
    ConstraintSystem root(InstanceSet::primes(), kBootstrapBound);
    result.transcript.push_back("f(0) = 0   [axiom]");
    result.transcript.push_back("f(1) = 1   [multiplicativity]");
    propagate(root, result.transcript);
    for (const auto& [u, def] : root.definitions()) result.root_relations.emplace(u, def.origin);

    SolveTree tree = solve(std::move(root));
    result.transcript.insert(result.transcript.end(), tree.transcript.begin(), tree.transcript.end());
    result.surviving_branches = tree.surviving.size();
    for (const auto& pruned : tree.pruned)
        if (pruned.contradiction()) result.pruned.push_back(*pruned.contradiction());

    if (tree.surviving.size() != 1)
        throw InternalError("bootstrap expected exactly one surviving branch, got " +
                            std::to_string(tree.surviving.size()));
    const ConstraintSystem& leaf = tree.surviving.front();
    for (u64 n = 1; n <= 20; ++n) {
        auto v = leaf.f_value(n);
        if (!v) throw InternalError("bootstrap left f(" + str(n) + ") undetermined");
        result.table.emplace(n, *v);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Probe

std::string ProbeReport::to_json() const {
    nlohmann::ordered_json j;
    j["set"] = set;
    j["bound"] = bound;
    auto det = nlohmann::ordered_json::object();
    for (const auto& [u, v] : determined) det[str(u)] = v.str();
    j["determined"] = std::move(det);
    j["free"] = free;
    if (contradiction) {
        nlohmann::ordered_json c;
        c["equation"] = contradiction->equation;
        c["unknown"] = contradiction->unknown ? nlohmann::ordered_json(*contradiction->unknown) : nlohmann::ordered_json(nullptr);
        c["forced"] = contradiction->forced ? nlohmann::ordered_json(contradiction->forced->str()) : nlohmann::ordered_json(nullptr);
        c["existing"] = contradiction->existing ? nlohmann::ordered_json(contradiction->existing->str()) : nlohmann::ordered_json(nullptr);
        c["description"] = contradiction->describe();
        j["contradiction"] = std::move(c);
    } else {
        j["contradiction"] = nullptr;
    }
    j["surviving_branches"] = surviving_branches;
    if (contradiction && surviving_branches == 0)
        j["verdict"] = "contradictory";
    else if (free.empty())
        j["verdict"] = "determined";
    else
        j["verdict"] = "underdetermined";
    j["note"] =
        "free unknowns are those this propagation calculus leaves open at this bound; "
        "this is evidence of non-uniqueness, not a proof";
    return j.dump(2);
}

ProbeReport uniqueness_probe(const InstanceSet& set, u64 bound) {
    if (bound > 10000) throw DomainError("probe bound must be <= 10000, got " + str(bound));
    ProbeReport report;
    report.set = set.name;
    report.bound = bound;
    ConstraintSystem root(set, bound);
    const std::vector<u64> unknowns = root.unknowns();
    SolveTree tree = solve(std::move(root));
    report.transcript = std::move(tree.transcript);
    report.surviving_branches = tree.surviving.size();
    if (tree.surviving.empty()) {
        if (!tree.pruned.empty()) report.contradiction = tree.pruned.front().contradiction();
        report.free = unknowns;
        return report;
    }
    for (u64 u : unknowns) {
        std::optional<Rational> agreed;
        bool ok = true;
        for (const auto& leaf : tree.surviving) {
            auto v = leaf.value_of(u);
            if (!v || (agreed && *agreed != *v)) {
                ok = false;
                break;
            }
            agreed = v;
        }
        if (ok && agreed)
            report.determined.emplace(u, *agreed);
        else
            report.free.push_back(u);
    }
    return report;
}

}  // namespace paracert
