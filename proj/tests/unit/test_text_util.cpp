#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <stdexcept>

#include "govgram/text_util.hpp"

using namespace govgram;

TEST_CASE("tokenize keeps contractions and hyphenated words") {
  const auto t = tokenize("Maintainers can't co-chair (yet).");
  REQUIRE(t.size() == 7);
  CHECK(t[0].text == "Maintainers");
  CHECK(t[0].lower == "maintainers");
  CHECK(t[1].text == "can't");
  CHECK(t[2].text == "co-chair");
  CHECK_FALSE(t[3].is_word);
  CHECK(t[4].text == "yet");
  CHECK(t[6].text == ".");
  CHECK(t[2].span == Span{18, 26});
}

TEST_CASE("tokenize treats non-ASCII bytes as word characters") {
  const auto t = tokenize("caf\xc3\xa9 rules");
  REQUIRE(t.size() == 2);
  CHECK(t[0].text == "caf\xc3\xa9");
}

TEST_CASE("string helpers") {
  CHECK(to_lower("MiXeD") == "mixed");
  CHECK(trim("  a b \n") == "a b");
  CHECK(split("a,,b", ',').size() == 3);
  CHECK(starts_with_ci("Governance.md", "GOVERN"));
  CHECK(collapse_whitespace("  a \t\n b  ") == "a b");
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_fixed(1.23456, 3) == "1.235");
  CHECK(format_fixed(-0.0001, 3) == "0.000");
}

TEST_CASE("csv quoting round trip") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("[0.1, 0.2]") == "\"[0.1, 0.2]\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  const auto f = parse_csv_line("a,\"[0.1, 0.2]\",\"x\"\"y\",");
  REQUIRE(f.size() == 4);
  CHECK(f[1] == "[0.1, 0.2]");
  CHECK(f[2] == "x\"y");
  CHECK(f[3].empty());
}

TEST_CASE("sha256 of known inputs") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("parallel_for visits each index once and propagates errors") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](std::size_t i) {
                                 if (i == 7) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
  parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}
