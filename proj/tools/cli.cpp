#include "cli.hpp"

#include "paracert/bootstrap.hpp"
#include "paracert/certificate_io.hpp"
#include "paracert/checker.hpp"
#include "paracert/derivation.hpp"
#include "paracert/errors.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace paracert::cli {

namespace {

using json = nlohmann::ordered_json;
using u64 = std::uint64_t;

// Writes `text` to `path`, or to `out` when path is empty.
void emit_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text << '\n';
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open " + path + " for writing");
    file << text << '\n';
    if (!file) throw IoError("failed writing " + path);
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open " + path + " for writing");
    for (const auto& line : lines) file << line << '\n';
    if (!file) throw IoError("failed writing " + path);
}

u64 effective_sieve_limit(const RunConfig& config) {
    if (config.sieve_limit != 0) return config.sieve_limit;
    return sieve_limit_from_env().value_or(0);
}

}  // namespace

std::optional<u64> sieve_limit_from_env() {
    const char* raw = std::getenv(kSieveLimitEnv);
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0' || v < 2) return std::nullopt;
    return static_cast<u64>(v);
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (config.bound <= kBaseBound) {
        err << "verify: --max must be at least " << kBaseBound + 1 << " (1.." << kBaseBound
            << " is the base range)\n";
        return kExitUsage;
    }
    try {
        const BootstrapResult bootstrap = solve_bootstrap();
        out << "bootstrap: f(n) = n^2 for 1 <= n <= 20 (" << bootstrap.surviving_branches << " surviving branch, "
            << bootstrap.pruned.size() << " pruned)\n";
        if (!config.transcript_path.empty()) write_lines(config.transcript_path, bootstrap.transcript);

        EngineOptions options;
        options.policy = config.policy;
        options.sieve_limit = effective_sieve_limit(config);
        options.sieve.threads = config.threads;
        CertificationResult result = certify_range(config.bound, options);
        write_certificate(std::filesystem::path(config.certificate_path), result.store.steps());
        out << "certified 1.." << config.bound << " with " << result.store.size() << " steps -> "
            << config.certificate_path << '\n';

        json stats = json::parse(result.stats.to_json());
        stats["bound"] = config.bound;
        stats["policy"] = to_string(config.policy);

        int status = kExitOk;
        if (config.check) {
            CheckOptions check_options;
            check_options.threads = config.threads;
            const auto steps = read_certificate(std::filesystem::path(config.certificate_path));
            const CheckReport report = check_steps(steps, config.bound, check_options);
            const SpotCheckReport spot = spot_check_numeric(steps, config.sample, config.seed);
            stats["check"] = {{"accepted", report.accepted},
                              {"violations", report.violations.size()},
                              {"coverage_gaps", report.coverage_gaps.size()},
                              {"spot_checked", spot.parallelogram_checked + spot.coprime_checked}};
            out << "check: " << (report.accepted ? "accepted" : "REJECTED") << " (" << report.violations.size()
                << " violations)\n";
            if (!report.accepted) {
                err << report.to_json() << '\n';
                status = kExitRejected;
            }
        }
        if (!config.stats_path.empty()) emit_text(config.stats_path, stats.dump(2), out);
        return status;
    } catch (const GoldbachFailure& e) {
        err << "verify: GOLDBACH FAILURE at " << e.even_number() << ": " << e.what() << '\n';
        return kExitGoldbach;
    } catch (const IoError& e) {
        err << "verify: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ResourceError& e) {
        err << "verify: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "verify: " << e.what() << '\n';
        return kExitRejected;
    }
}

int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::vector<CertificateStep> steps;
    try {
        steps = read_certificate(std::filesystem::path(config.certificate_path));
    } catch (const Error& e) {
        err << "check: " << e.what() << '\n';
        return kExitUsage;
    }
    CheckOptions options;
    options.reorder = config.reorder;
    options.threads = config.threads;
    const CheckReport report = check_steps(steps, config.bound, options);
    json doc = json::parse(report.to_json());
    int status = report.accepted ? kExitOk : kExitRejected;
    if (report.accepted) {
        try {
            doc["spot_check"] = json::parse(spot_check_numeric(steps, config.sample, config.seed).to_json());
        } catch (const FatalInconsistency& e) {
            doc["spot_check"] = {{"error", e.what()}};
            status = kExitRejected;
        }
    }
    try {
        emit_text(config.report_path, doc.dump(2), out);
    } catch (const IoError& e) {
        err << "check: " << e.what() << '\n';
        return kExitUsage;
    }
    return status;
}

int cmd_probe(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (config.bound == 0 || config.bound > 10000) {
        err << "probe: --bound must be in 1..10000\n";
        return kExitUsage;
    }
    try {
        const InstanceSet set = InstanceSet::parse(config.set_spec);
        const ProbeReport report = uniqueness_probe(set, config.bound);
        if (!config.transcript_path.empty()) write_lines(config.transcript_path, report.transcript);
        emit_text(config.report_path, report.to_json(), out);
        return kExitOk;
    } catch (const Error& e) {
        err << "probe: " << e.what() << '\n';
        return kExitUsage;
    }
}

int cmd_goldbach(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (config.bound < 4) {
        err << "goldbach: --max must be at least 4\n";
        return kExitUsage;
    }
    try {
        SieveOptions sieve;
        sieve.threads = config.threads;
        const auto t0 = std::chrono::steady_clock::now();
        const PrimeTable table = PrimeTable::build(std::max<u64>(config.bound, effective_sieve_limit(config)), sieve);
        const double sieve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        json doc;
        doc["bound"] = config.bound;
        doc["evens_checked"] = (config.bound - 2) / 2;
        doc["sieve_seconds"] = sieve_seconds;
        std::vector<u64> failures;
        for (GoldbachPolicy policy : {GoldbachPolicy::MaxQ, GoldbachPolicy::MinQ}) {
            // min-q: histogram of q itself; max-q: histogram of m/2 - q.
            std::map<u64, u64> histogram;
            const auto start = std::chrono::steady_clock::now();
            for (u64 m = 4; m <= config.bound; m += 2) {
                try {
                    const GoldbachPair pair = goldbach_pair(m, table, policy);
                    ++histogram[policy == GoldbachPolicy::MinQ ? pair.q : m / 2 - pair.q];
                } catch (const GoldbachFailure& e) {
                    failures.push_back(e.even_number());
                }
            }
            const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            json hist = json::object();
            for (const auto& [key, count] : histogram) hist[std::to_string(key)] = count;
            json entry;
            entry["histogram_key"] = policy == GoldbachPolicy::MinQ ? "q" : "m/2 - q";
            entry["histogram"] = std::move(hist);
            entry["seconds"] = seconds;
            entry["evens_per_second"] = seconds > 0 ? static_cast<double>((config.bound - 2) / 2) / seconds : 0.0;
            doc["policies"][std::string(to_string(policy))] = std::move(entry);
        }
        doc["failures"] = failures;
        emit_text(config.report_path, doc.dump(2), out);
        if (!failures.empty()) {
            err << "goldbach: COUNTEREXAMPLE(S) FOUND, first at " << failures.front() << '\n';
            return kExitGoldbach;
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "goldbach: " << e.what() << '\n';
        return kExitUsage;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Certificates that multiplicative solutions of the parallelogram equation on primes equal n^2"};
    app.require_subcommand(1);
    RunConfig config;
    std::string policy = "max-q";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--threads", config.threads, "Worker threads")->check(CLI::Range(1u, 256u));
        sub->add_option("--seed", config.seed, "Seed for sampled spot checks");
    };

    auto* verify = app.add_subcommand("verify", "Bootstrap, certify 1..N and write certificates");
    verify->add_option("--max", config.bound, "Bound N (>= 21)")->required();
    verify->add_option("--policy", policy, "Goldbach pair policy")->check(CLI::IsMember({"max-q", "min-q"}));
    verify->add_option("--out", config.certificate_path, "Certificate JSON-lines output");
    verify->add_option("--stats", config.stats_path, "Stats JSON output");
    verify->add_option("--transcript", config.transcript_path, "Bootstrap transcript output");
    verify->add_option("--sieve-limit", config.sieve_limit,
                       std::string("Prime table limit (default: env ") + kSieveLimitEnv + " or 4N+64)");
    verify->add_option("--sample", config.sample, "Spot-check sample size used with --check");
    verify->add_flag("--check", config.check, "Re-read and check the written certificates");
    add_common(verify);

    auto* check = app.add_subcommand("check", "Independently check a certificate file");
    check->add_option("certificates", config.certificate_path, "Certificate JSON-lines file")->required();
    check->add_option("--max", config.bound, "Claimed bound N")->required();
    check->add_option("--report", config.report_path, "Report output (default stdout)");
    check->add_option("--sample", config.sample, "Spot-check sample size");
    check->add_flag("--reorder", config.reorder, "Topologically sort steps instead of requiring file order");
    add_common(check);

    auto* probe = app.add_subcommand("probe", "Probe whether an instance set pins down every f(p^k)");
    probe->add_option("--set", config.set_spec, "primes | <k>n | file:<path>");
    probe->add_option("--bound", config.bound, "Bound M (<= 10000)")->required();
    probe->add_option("--report", config.report_path, "Report output (default stdout)");
    probe->add_option("--transcript", config.transcript_path, "Inference transcript output");

    auto* goldbach = app.add_subcommand("goldbach", "Check Goldbach pairs for every even 4..M");
    goldbach->add_option("--max", config.bound, "Bound M")->required();
    goldbach->add_option("--report", config.report_path, "Report output (default stdout)");
    add_common(goldbach);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    config.policy = parse_policy(policy);

    if (*verify) return cmd_verify(config, out, err);
    if (*check) return cmd_check(config, out, err);
    if (*probe) return cmd_probe(config, out, err);
    if (*goldbach) return cmd_goldbach(config, out, err);
    return kExitUsage;
}

}  // namespace paracert::cli
