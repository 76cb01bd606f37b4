#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "paracert/primes.hpp"

namespace paracert::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitGoldbach = 3;

inline constexpr const char* kSieveLimitEnv = "PARACERT_SIEVE_LIMIT";

struct RunConfig {
    std::string command;
    std::uint64_t bound = 0;  // N for verify/check/goldbach, M for probe
    GoldbachPolicy policy = GoldbachPolicy::MaxQ;
    std::string certificate_path = "certificates.jsonl";
    std::string stats_path;       // verify: stats JSON, empty = none
    std::string report_path;      // check/probe/goldbach: JSON report, empty = stdout
    std::string transcript_path;  // verify/probe: bootstrap or probe transcript
    std::string set_spec = "primes";
    std::uint64_t sieve_limit = 0;  // 0 = environment or automatic
    unsigned threads = 1;
    std::uint64_t seed = 1;
    std::uint64_t sample = 1000;
    bool check = false;
    bool reorder = false;
};

// Sieve limit from the environment, if set and valid.
std::optional<std::uint64_t> sieve_limit_from_env();

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_probe(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_goldbach(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv and dispatches. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace paracert::cli
