// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Usage: paracert_acceptance [path-to-paracert-binary] [scratch-dir]

#include "fault_injection.hpp"

#include "paracert/bootstrap.hpp"
#include "paracert/certificate_io.hpp"
#include "paracert/checker.hpp"
#include "paracert/derivation.hpp"
#include "paracert/errors.hpp"
#include "paracert/primes.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace paracert;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(const std::string& name, const std::function<Outcome()>& body) {
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " -- " << o.detail << std::endl;
}

Outcome bootstrap_reproduction() {
    const auto t = Clock::now();
    const BootstrapResult r = solve_bootstrap();
    const double s = seconds_since(t);
    bool table_ok = r.table.size() == 20;
    for (std::uint64_t n = 1; n <= 20 && table_ok; ++n) table_ok = r.table.at(n) == Rational(n * n);
    const bool pruned_ok = r.pruned.size() == 1 && r.pruned[0].unknown == 2u &&
                           ((r.pruned[0].forced == Rational(1) / 3 && r.pruned[0].existing == Rational(1) / 2) ||
                            (r.pruned[0].forced == Rational(1) / 2 && r.pruned[0].existing == Rational(1) / 3));
    std::ostringstream d;
    d << "f(n)=n^2 for n<=20: " << (table_ok ? "yes" : "no") << ", surviving branches " << r.surviving_branches
      << ", pruned: " << (r.pruned.empty() ? "none" : r.pruned[0].describe()) << ", " << s << " s";
    return {table_ok && pruned_ok && r.surviving_branches == 1 && s < 1.0, d.str()};
}

Outcome listed_values() {
    const BootstrapResult r = solve_bootstrap();
    const std::pair<std::uint64_t, int> listed[] = {{4, 16},   {5, 25},   {6, 36},   {7, 49},   {8, 64},   {9, 81},
                                                    {10, 100}, {11, 121}, {12, 144}, {14, 196}, {17, 289}};
    std::ostringstream d;
    bool ok = true;
    for (auto [n, v] : listed) {
        const bool match = r.table.at(n) == Rational(v);
        ok = ok && match;
        if (!match) d << "f(" << n << ")=" << to_string(r.table.at(n)) << " expected " << v << "; ";
    }
    const std::pair<std::uint64_t, const char*> relations[] = {{4, "4*f(2)"},
                                                               {5, "2*f(3) + 2*f(2) - 1"},
                                                               {7, "3*f(3) + 6*f(2) - 2"},
                                                               {8, "6*f(3) + 3*f(2) - 2"},
                                                               {9, "4*f(3) + 12*f(2) - 3"}};
    for (auto [u, text] : relations) {
        const auto it = r.root_relations.find(u);
        const bool match = it != r.root_relations.end() && it->second.to_string() == text;
        ok = ok && match;
        if (!match) d << "relation for f(" << u << ") differs; ";
    }
    if (ok) d << "11 values and 5 linear relations match exactly";
    return {ok, d.str()};
}

Outcome end_to_end(EngineStats& stats_out) {
    const auto t = Clock::now();
    CertificationResult r = certify_range(1000000);
    const double gen = seconds_since(t);
    const auto tc = Clock::now();
    const CheckReport report = check_steps(r.store.steps(), 1000000);
    const double chk = seconds_since(tc);
    stats_out = r.stats;
    std::ostringstream d;
    d << r.store.size() << " steps, generate " << gen << " s, check " << chk << " s, violations "
      << report.violations.size() << ", coverage gaps " << report.coverage_gaps.size();
    return {report.accepted && gen + chk < 300.0, d.str()};
}

Outcome fault_injection() {
    CertificationResult r = certify_range(1000);
    const faults::Steps genuine(r.store.steps().begin(), r.store.steps().end());
    const CheckReport clean = check_steps(genuine, 1000);
    bool ok = clean.accepted;
    std::ostringstream d;
    int caught = 0;
    for (const auto& m : faults::all_mutations(genuine)) {
        const CheckReport report = check_steps(m.steps, 1000);
        if (!report.accepted && report.has(m.expected) && !clean.has(m.expected)) {
            ++caught;
        } else {
            ok = false;
            d << "missed '" << m.name << "'; ";
        }
    }
    d << caught << "/11 codes triggered, genuine store " << (clean.accepted ? "accepted" : "REJECTED");
    return {ok && caught == 11, d.str()};
}

Outcome residue_selectors() {
    std::uint64_t bad = 0, checked = 0;
    for (std::uint64_t n = 1; n < 100000; n += 2, ++checked) {
        const std::uint64_t q = select_q_for_prime(n), r = select_r(n);
        if ((n + q) % 4 != 2 || ((n + q) / 2) % 2 != 1) ++bad;
        if ((n + r) % 8 != 4 || ((n + r) / 4) % 2 != 1) ++bad;
        if (n > r && ((n - r) / 2) % 2 != 1) ++bad;
        if (!is_prime_u64(r)) ++bad;
    }
    return {bad == 0, std::to_string(checked) + " odd n checked, " + std::to_string(bad) + " failures"};
}

Outcome goldbach_harness() {
    const std::uint64_t M = 10000000;
    const auto t = Clock::now();
    const PrimeTable table = PrimeTable::build(M);
    std::uint64_t failures_found = 0, checked = 0;
    for (GoldbachPolicy policy : {GoldbachPolicy::MaxQ, GoldbachPolicy::MinQ}) {
        for (std::uint64_t m = 4; m <= M; m += 2, ++checked) {
            try {
                const GoldbachPair pair = goldbach_pair(m, table, policy);
                if (pair.p + pair.q != m || pair.p < pair.q) ++failures_found;
            } catch (const GoldbachFailure&) {
                ++failures_found;
            }
        }
    }
    const double s = seconds_since(t);
    std::ostringstream d;
    d << checked << " (m, policy) cases to 10^7, " << failures_found << " failures, " << s << " s";
    return {failures_found == 0 && s < 120.0, d.str()};
}

Outcome recursion_bound(const EngineStats& stats) {
    return {stats.steps > 0 && stats.max_pow2_depth <= 2,
            "max derive_pow2 depth over 1..10^6 is " + std::to_string(stats.max_pow2_depth)};
}

Outcome probe_contrast() {
    const ProbeReport primes = uniqueness_probe(InstanceSet::primes(), 40);
    bool primes_ok = !primes.contradiction.has_value();
    for (std::uint64_t u : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19}) {
        const auto it = primes.determined.find(u);
        primes_ok = primes_ok && it != primes.determined.end() && it->second == Rational(u * u);
    }
    const ProbeReport four = uniqueness_probe(InstanceSet::multiples_of(4), 100);
    std::ostringstream d;
    d << "primes/40: " << (primes_ok ? "all prime powers <= 20 determined" : "NOT all determined") << "; 4n/100: "
      << four.free.size() << " free unknowns (evidence relative to this propagation calculus)";
    return {primes_ok && !four.free.empty(), d.str()};
}

int run_binary(const std::string& binary, const std::string& args) {
    const std::string cmd = "\"" + binary + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism(const std::string& binary, const fs::path& scratch) {
    if (binary.empty()) return {false, "paracert binary path not given"};
    const fs::path a = scratch / "determinism_a.jsonl", b = scratch / "determinism_b.jsonl";
    const int ra = run_binary(binary, "verify --max 100000 --out \"" + a.string() + "\"");
    const int rb = run_binary(binary, "verify --max 100000 --out \"" + b.string() + "\"");
    if (ra != 0 || rb != 0) return {false, "verify exited with " + std::to_string(ra) + "/" + std::to_string(rb)};
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    const std::string x = slurp(a), y = slurp(b);
    fs::remove(a);
    fs::remove(b);
    return {!x.empty() && x == y, std::to_string(x.size()) + " bytes, " + (x == y ? "identical" : "DIFFERENT")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string binary = argc > 1 ? argv[1] : "";
    const fs::path scratch = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path();

    EngineStats stats;
    criterion("bootstrap-reproduction", bootstrap_reproduction);
    criterion("listed-value-table", listed_values);
    criterion("end-to-end-certification-1e6", [&] { return end_to_end(stats); });
    criterion("fault-injection-11-codes", fault_injection);
    criterion("residue-selectors-below-1e5", residue_selectors);
    criterion("goldbach-harness-1e7", goldbach_harness);
    criterion("recursion-bound-pow2-depth", [&] { return recursion_bound(stats); });
    criterion("probe-contrast", probe_contrast);
    criterion("determinism-verify-1e5", [&] { return determinism(binary, scratch); });

    std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
