#include "paracert/certificate_io.hpp"

#include "paracert/errors.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

namespace paracert {

namespace {

using json = nlohmann::ordered_json;
using u64 = std::uint64_t;

struct JustificationToJson {
    json operator()(const Base&) const { return json{{"type", "base"}}; }
    json operator()(const CoprimeProduct& j) const {
        return json{{"type", "coprime_product"}, {"a", j.a}, {"b", j.b}};
    }
    json operator()(const CoprimeQuotient& j) const {
        return json{{"type", "coprime_quotient"}, {"product", j.product}, {"divisor", j.divisor}};
    }
    json operator()(const ParallelogramClose& j) const {
        return json{{"type", "parallelogram"}, {"p", j.p}, {"q", j.q}, {"target", to_string(j.target)}};
    }
};

u64 get_u64(const json& obj, const char* key, std::size_t line_no) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(line_no, std::string("missing field \"") + key + "\"");
    if (!it->is_number_unsigned())
        throw ParseError(line_no, std::string("field \"") + key + "\" must be a non-negative 64-bit integer");
    return it->get<u64>();
}

}  // namespace

std::string to_jsonl(const CertificateStep& step) {
    json line;
    line["n"] = step.fact.n;
    line["just"] = std::visit(JustificationToJson{}, step.justification);
    line["prereqs"] = step.prerequisites;
    if (step.meta.policy) line["meta"] = json{{"policy", to_string(*step.meta.policy)}};
    return line.dump();
}

CertificateStep parse_step(std::string_view line, std::size_t line_no) {
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded()) throw ParseError(line_no, "invalid JSON");
    if (!obj.is_object()) throw ParseError(line_no, "step must be a JSON object");

    CertificateStep step;
    step.fact.n = get_u64(obj, "n", line_no);

    auto just = obj.find("just");
    if (just == obj.end() || !just->is_object()) throw ParseError(line_no, "missing object field \"just\"");
    auto type = just->find("type");
    if (type == just->end() || !type->is_string()) throw ParseError(line_no, "missing string field \"type\"");
    const auto& t = type->get_ref<const std::string&>();
    if (t == "base") {
        step.justification = Base{};
    } else if (t == "coprime_product") {
        step.justification = CoprimeProduct{get_u64(*just, "a", line_no), get_u64(*just, "b", line_no)};
    } else if (t == "coprime_quotient") {
        step.justification =
            CoprimeQuotient{get_u64(*just, "product", line_no), get_u64(*just, "divisor", line_no)};
    } else if (t == "parallelogram") {
        auto target = just->find("target");
        if (target == just->end() || !target->is_string()) throw ParseError(line_no, "missing string field \"target\"");
        auto slot = parse_slot(target->get_ref<const std::string&>());
        if (!slot) throw ParseError(line_no, "unknown target \"" + target->get<std::string>() + "\"");
        step.justification = ParallelogramClose{get_u64(*just, "p", line_no), get_u64(*just, "q", line_no), *slot};
    } else {
        throw ParseError(line_no, "unknown justification type \"" + t + "\"");
    }

    auto prereqs = obj.find("prereqs");
    if (prereqs == obj.end() || !prereqs->is_array()) throw ParseError(line_no, "missing array field \"prereqs\"");
    step.prerequisites.reserve(prereqs->size());
    for (const auto& v : *prereqs) {
        if (!v.is_number_unsigned()) throw ParseError(line_no, "prerequisites must be non-negative integers");
        step.prerequisites.push_back(v.get<u64>());
    }

    if (auto meta = obj.find("meta"); meta != obj.end() && meta->is_object()) {
        if (auto pol = meta->find("policy"); pol != meta->end() && pol->is_string()) {
            const auto& text = pol->get_ref<const std::string&>();
            if (text == "max-q" || text == "min-q") step.meta.policy = parse_policy(text);
        }
    }
    return step;
}

void write_certificate(std::ostream& out, std::span<const CertificateStep> steps) {
    for (const auto& step : steps) out << to_jsonl(step) << '\n';
}

void write_certificate(const std::filesystem::path& path, std::span<const CertificateStep> steps) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_certificate(out, steps);
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

std::vector<CertificateStep> read_certificate(std::istream& in) {
    std::vector<CertificateStep> steps;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        steps.push_back(parse_step(line, line_no));
    }
    if (in.bad()) throw IoError("read error");
    return steps;
}

std::vector<CertificateStep> read_certificate(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_certificate(in);
}

}  // namespace paracert
