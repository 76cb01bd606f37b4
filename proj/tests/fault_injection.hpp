#pragma once

// Mutations of a genuine certificate, one per checker violation code. Shared
// by the unit tests and the acceptance run.

#include "paracert/proof_model.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace faults {

using Steps = std::vector<paracert::CertificateStep>;

struct Mutation {
    std::string name;
    paracert::ViolationCode expected;
    Steps steps;
};

inline std::size_t index_of(const Steps& steps, std::uint64_t n) {
    for (std::size_t i = 0; i < steps.size(); ++i)
        if (steps[i].fact.n == n) return i;
    throw std::runtime_error("fact " + std::to_string(n) + " not in certificate");
}

// `genuine` must cover at least 1..100 as produced by the derivation engine.
inline std::vector<Mutation> all_mutations(const Steps& genuine) {
    using namespace paracert;
    std::vector<Mutation> out;

    {
        Steps s = genuine;
        s.push_back(s[index_of(s, 21)]);
        out.push_back({"duplicate fact", ViolationCode::DuplicateFact, std::move(s)});
    }
    {
        // Move the definition of 26 behind its first consumer.
        Steps s = genuine;
        const std::size_t def = index_of(s, 26);
        std::size_t user = def + 1;
        while (std::find(s[user].prerequisites.begin(), s[user].prerequisites.end(), 26) ==
               s[user].prerequisites.end())
            ++user;
        const CertificateStep moved = s[def];
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(def));
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(user), moved);
        out.push_back({"cycle", ViolationCode::Cycle, std::move(s)});
    }
    {
        Steps s = genuine;
        s[index_of(s, 23)].prerequisites.pop_back();
        out.push_back({"missing prerequisite", ViolationCode::MissingPrerequisite, std::move(s)});
    }
    {
        Steps s = genuine;
        s[index_of(s, 36)] = CertificateStep{{36}, CoprimeProduct{2, 18}, {2, 18}, {}};
        out.push_back({"not coprime", ViolationCode::NotCoprime, std::move(s)});
    }
    {
        Steps s = genuine;
        s[index_of(s, 21)] = CertificateStep{{21}, CoprimeProduct{3, 5}, {3, 5}, {}};
        out.push_back({"wrong product", ViolationCode::WrongProduct, std::move(s)});
    }
    {
        Steps s = genuine;
        s[index_of(s, 14)] = make_parallelogram_step(9, 5, Slot::Sum);
        out.push_back({"p not prime", ViolationCode::PNotPrime, std::move(s)});
    }
    {
        Steps s = genuine;
        s[index_of(s, 14)] = make_parallelogram_step(13, 1, Slot::Sum);
        out.push_back({"q not prime", ViolationCode::QNotPrime, std::move(s)});
    }
    {
        Steps s = genuine;
        s[index_of(s, 14)] = CertificateStep{{14}, ParallelogramClose{3, 11, Slot::Sum}, {3, 11, 8}, {}};
        out.push_back({"p < q", ViolationCode::PLessThanQ, std::move(s)});
    }
    {
        Steps s = genuine;
        auto step = make_parallelogram_step(11, 3, Slot::Sum);
        step.fact.n = 15;
        s[index_of(s, 15)] = step;
        out.push_back({"slot mismatch", ViolationCode::SlotMismatch, std::move(s)});
    }
    {
        Steps s = genuine;
        s[index_of(s, 25)] = CertificateStep{{25}, CoprimeQuotient{50, 3}, {50, 3}, {}};
        out.push_back({"inexact division", ViolationCode::InexactDivision, std::move(s)});
    }
    {
        // Drop a fact in range that nothing depends on.
        Steps s = genuine;
        std::unordered_set<std::uint64_t> used;
        for (const auto& step : s) used.insert(step.prerequisites.begin(), step.prerequisites.end());
        std::uint64_t victim = 100;
        while (used.contains(victim)) --victim;
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(index_of(s, victim)));
        out.push_back({"coverage gap", ViolationCode::CoverageGap, std::move(s)});
    }
    return out;
}

}  // namespace faults
