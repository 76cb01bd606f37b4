#pragma once

// Certificate JSON-lines format. One step per line, LF terminated:
//
//   {"n":21,"just":{"type":"coprime_product","a":3,"b":7},"prereqs":[3,7]}
//   {"n":50,"just":{"type":"parallelogram","p":31,"q":19,"target":"sum"},"prereqs":[31,19,12],"meta":{"policy":"max-q"}}
//
// "type" is one of base | coprime_product | coprime_quotient | parallelogram;
// "target" is one of sum | diff | p | q. "meta" is optional and ignored by
// the checker. Lines appear in dependency order.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paracert/proof_model.hpp"

namespace paracert {

// Serialized line without the trailing newline.
std::string to_jsonl(const CertificateStep& step);

// Throws ParseError(line_no, ...) on malformed input.
CertificateStep parse_step(std::string_view line, std::size_t line_no = 1);

void write_certificate(std::ostream& out, std::span<const CertificateStep> steps);
// Throws IoError when the file cannot be written.
void write_certificate(const std::filesystem::path& path, std::span<const CertificateStep> steps);

// Blank lines are skipped. Throws ParseError.
std::vector<CertificateStep> read_certificate(std::istream& in);
// Throws IoError when the file cannot be opened, ParseError on bad content.
std::vector<CertificateStep> read_certificate(const std::filesystem::path& path);

}  // namespace paracert
