#include "depocheck/analysis.hpp"
#include "depocheck/sentences.hpp"
#include "doctest.h"

using namespace depocheck;

namespace {

std::vector<std::string> pieces(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& r : segment_sentences(text)) out.emplace_back(text.substr(r.begin, r.size()));
  return out;
}

}  // namespace

TEST_SUITE("sentences") {

TEST_CASE("splits on terminal punctuation before an uppercase letter") {
  CHECK(pieces("One fact. Two facts? Three! four.") ==
        std::vector<std::string>{"One fact.", "Two facts?", "Three! four."});
  CHECK(pieces("It cost 1.5 million. Then it rose.") ==
        std::vector<std::string>{"It cost 1.5 million.", "Then it rose."});
}

TEST_CASE("abbreviations do not end sentences") {
  CHECK(pieces("Mr. Holloway met Dr. Patel. Ms. Ortiz and Mrs. Lee left.") ==
        std::vector<std::string>{"Mr. Holloway met Dr. Patel.", "Ms. Ortiz and Mrs. Lee left."});
  CHECK(pieces("See Exhibit No. 4 from Acme Inc. Staff signed.") ==
        std::vector<std::string>{"See Exhibit No. 4 from Acme Inc. Staff signed."});
}

TEST_CASE("closing quotes and brackets stay with their sentence") {
  CHECK(pieces("He said \"stop.\" Then he left.") ==
        std::vector<std::string>{"He said \"stop.\"", "Then he left."});
  CHECK(pieces("(It rained.) Later.") == std::vector<std::string>{"(It rained.)", "Later."});
}

TEST_CASE("blank lines end sentences") {
  CHECK(pieces("A heading\n\nbody text here") == std::vector<std::string>{"A heading", "body text here"});
}

TEST_CASE("edge cases") {
  CHECK(segment_sentences("").empty());
  CHECK(segment_sentences("   \n ").empty());
  CHECK(pieces("  padded.  ") == std::vector<std::string>{"padded."});
  CHECK(pieces("no terminal punctuation") == std::vector<std::string>{"no terminal punctuation"});
}

TEST_CASE("segments tile a ten-sentence summary") {
  const std::string text =
      "Daniel Holloway died on March 3, 2021 (1:08-1:09).  He bought a policy in 2015 (1:17).\n"
      "The policy named Margaret as beneficiary [1:19]. Mr. Becker objected. The coverage was raised in 2019 (2:04-2:06). "
      "It was valued at $10 million (2:15)! Was the claim denied? Yes, on August 12, 2021 (2:19).\n\n"
      "The appeal failed (3:02). Dr. Patel's test was normal (3:12).";
  auto doc = segment_summary(text);
  REQUIRE(doc.segments.size() == 10);
  std::string rebuilt;
  std::size_t cursor = 0;
  for (const auto& seg : doc.segments) {
    CHECK(seg.range.begin >= cursor);
    const auto gap = text.substr(cursor, seg.range.begin - cursor);
    CHECK(gap.find_first_not_of(" \t\r\n") == std::string::npos);
    CHECK(seg.text == text.substr(seg.range.begin, seg.range.size()));
    rebuilt += gap + seg.text;
    cursor = seg.range.end;
  }
  rebuilt += text.substr(cursor);
  CHECK(rebuilt == text);
  CHECK(doc.segments[2].refs.size() == 1);
  CHECK(doc.segments[3].refs.empty());
}

}  // TEST_SUITE
