#include <doctest.h>

#include "geometer/sentences.hpp"

using namespace geometer;

namespace {
std::vector<std::string_view> split(std::string_view s) {
  return text::split_sentences(s, text::SegmentationOptions::defaults());
}
}  // namespace

TEST_CASE("terminal punctuation splits") {
  auto s = split("A bet. Another bet? Yes!");
  REQUIRE(s.size() == 3);
  CHECK(s[0] == "A bet.");
  CHECK(s[1] == "Another bet?");
  CHECK(s[2] == "Yes!");
}

TEST_CASE("empty and whitespace inputs") {
  CHECK(split("").empty());
  CHECK(split("  \n ").empty());
}

TEST_CASE("abbreviations suppress splits") {
  CHECK(split("See e.g. the UKGC register. Done.").size() == 2);
  CHECK(split("Run by Aurora Ltd. It holds a licence.").size() == 1);
  CHECK(split("No. 7 is the top pick. It pays out fast.").size() == 2);
  CHECK(split("Casinos vs. Sportsbooks is an old debate. Both pay.").size() == 2);
}

TEST_CASE("lowercase continuation does not split") {
  CHECK(split("the rtp is 96.1 percent on average").size() == 1);
  CHECK(split("version 2.1 shipped. it works").size() == 1);
}

TEST_CASE("digits and quotes can open a sentence") {
  CHECK(split("It pays. 7 of 10 agree.").size() == 2);
  CHECK(split("He agreed. \"Trust matters,\" she said.").size() == 2);
}

TEST_CASE("closing quotes stay with their sentence") {
  auto s = split("He said \"stop.\" Then he left.");
  REQUIRE(s.size() == 2);
  CHECK(s[0] == "He said \"stop.\"");
  CHECK(s[1] == "Then he left.");
}

TEST_CASE("trailing material without terminator is a sentence") {
  auto s = split("First point. second part still going");
  REQUIRE(s.size() == 1);
  s = split("First point. Second part still going");
  REQUIRE(s.size() == 2);
  CHECK(s[1] == "Second part still going");
}

TEST_CASE("segmentation is deterministic") {
  const std::string input = "Licence checks matter. See e.g. the register. Done!";
  CHECK(split(input) == split(input));
}

TEST_CASE("user abbreviations extend the defaults") {
  auto opts = text::SegmentationOptions::with_extra({"approx."});
  CHECK(text::split_sentences("It costs approx. Ten pounds.", opts).size() == 1);
  CHECK(split("It costs approx. Ten pounds.").size() == 2);
}
