#include "paracert/certificate_io.hpp"
#include "paracert/errors.hpp"

#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

using namespace paracert;

TEST(CertificateIo, ExactLineFormat) {
    EXPECT_EQ(to_jsonl(make_product_step(3, 7)),
              R"({"n":21,"just":{"type":"coprime_product","a":3,"b":7},"prereqs":[3,7]})");
    EXPECT_EQ(to_jsonl(make_base_step(4)), R"({"n":4,"just":{"type":"base"},"prereqs":[]})");
    EXPECT_EQ(to_jsonl(make_quotient_step(50, 2)),
              R"({"n":25,"just":{"type":"coprime_quotient","product":50,"divisor":2},"prereqs":[50,2]})");
    EXPECT_EQ(to_jsonl(make_parallelogram_step(31, 19, Slot::Sum, StepMeta{GoldbachPolicy::MaxQ})),
              R"({"n":50,"just":{"type":"parallelogram","p":31,"q":19,"target":"sum"},"prereqs":[31,19,12],"meta":{"policy":"max-q"}})");
}

TEST(CertificateIo, RoundTrip) {
    const std::vector<CertificateStep> steps{
        make_base_step(3), make_product_step(3, 7), make_parallelogram_step(23, 3, Slot::P),
        make_parallelogram_step(19, 13, Slot::Sum, StepMeta{GoldbachPolicy::MinQ}), make_quotient_step(50, 2)};
    std::stringstream buffer;
    write_certificate(buffer, steps);
    const std::string text = buffer.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
    EXPECT_EQ(read_certificate(buffer), steps);
}

TEST(CertificateIo, ToleratesBlankLinesAndCrLf) {
    std::istringstream in("\n{\"n\":21,\"just\":{\"type\":\"coprime_product\",\"a\":3,\"b\":7},\"prereqs\":[3,7]}\r\n\n");
    const auto steps = read_certificate(in);
    ASSERT_EQ(steps.size(), 1u);
    EXPECT_EQ(steps[0], make_product_step(3, 7));
}

TEST(CertificateIo, ParseErrorsCarryLineNumbers) {
    std::istringstream in("{\"n\":4,\"just\":{\"type\":\"base\"},\"prereqs\":[]}\nnot json\n");
    try {
        read_certificate(in);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(parse_step(R"({"n":4,"just":{"type":"magic"},"prereqs":[]})"), ParseError);
    EXPECT_THROW(parse_step(R"({"n":14,"just":{"type":"parallelogram","p":11,"q":3,"target":"up"},"prereqs":[]})"),
                 ParseError);
    EXPECT_THROW(parse_step(R"({"n":-4,"just":{"type":"base"},"prereqs":[]})"), ParseError);
    EXPECT_THROW(parse_step(R"({"just":{"type":"base"},"prereqs":[]})"), ParseError);
}

TEST(CertificateIo, MissingFileIsIoError) {
    EXPECT_THROW(read_certificate(std::filesystem::path("/nonexistent/certs.jsonl")), IoError);
    EXPECT_THROW(write_certificate(std::filesystem::path("/nonexistent/dir/certs.jsonl"), {}), IoError);
}
