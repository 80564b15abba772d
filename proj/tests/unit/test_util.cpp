#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "sensorium/util.hpp"

using namespace sensorium;

TEST_CASE("split keeps empty fields") {
  auto parts = split("a\t\tb", '\t');
  REQUIRE(parts.size() == 3);
  CHECK(parts[0] == "a");
  CHECK(parts[1] == "");
  CHECK(parts[2] == "b");
}

TEST_CASE("lower_ascii leaves non-ascii bytes alone") {
  CHECK(lower_ascii("HeLLo") == "hello");
  CHECK(lower_ascii("caf\xc3\xa9") == "caf\xc3\xa9");
}

TEST_CASE("valid_utf8") {
  CHECK(valid_utf8("plain ascii"));
  CHECK(valid_utf8("caf\xc3\xa9"));
  CHECK_FALSE(valid_utf8("\xff\xfe"));
  CHECK_FALSE(valid_utf8("\xc3"));          // truncated sequence
  CHECK_FALSE(valid_utf8("\xc0\xaf"));      // overlong
  CHECK_FALSE(valid_utf8("\xed\xa0\x80"));  // surrogate
}

TEST_CASE("rng bounded draws stay in range and are deterministic") {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) {
    std::size_t x = a.next_below(7);
    CHECK(x < 7);
    CHECK(x == b.next_below(7));
  }
  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    double u = c.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456.789, 0.0, -2.5e17}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("line reader handles plain and gzip files") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "sensorium_util_test";
  fs::create_directories(dir);
  auto plain = (dir / "plain.txt").string();
  write_file(plain, "one\r\ntwo\nthree");

  LineReader reader(plain);
  std::string line;
  REQUIRE(reader.next(line));
  CHECK(line == "one");
  REQUIRE(reader.next(line));
  CHECK(line == "two");
  REQUIRE(reader.next(line));
  CHECK(line == "three");
  CHECK_FALSE(reader.next(line));

  auto gz = std::string(SENSORIUM_TEST_DATA) + "/minicorpus.txt.gz";
  if (fs::exists(gz)) {
    LineReader gzreader(gz);
    REQUIRE(gzreader.next(line));
    CHECK(!line.empty());
  }
  fs::remove_all(dir);
}

TEST_CASE("fnv1a digest is stable") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64_hex("a") != fnv1a64_hex("b"));
  CHECK(fnv1a64_hex("abc") == fnv1a64_hex("abc"));
}
