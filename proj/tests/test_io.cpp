#include <doctest.h>

#include <string>
#include <vector>

#include "helpers.hpp"
#include "varch/errors.hpp"
#include "varch/io.hpp"

using namespace varch;

TEST_SUITE("io") {

TEST_CASE("fnv1a64 matches the published test vectors") {
  CHECK(fnv1a64(std::string("")) == 0xcbf29ce484222325ull);
  CHECK(fnv1a64(std::string("a")) == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64(std::string("foobar")) == 0x85944171f73967e8ull);
}

TEST_CASE("hash_hex renders 16 lowercase hex digits") {
  CHECK(hash_hex(0xcbf29ce484222325ull) == "cbf29ce484222325");
  CHECK(hash_hex(0x1ull) == "0000000000000001");
  CHECK(hash_hex(0x0ull) == "0000000000000000");
}

TEST_CASE("read_file returns contents and fails on missing paths") {
  testutil::TempDir dir("io_read");
  const std::string path = dir.file("x.txt");
  testutil::write_text(path, "hello\nworld");
  CHECK(read_file(path) == "hello\nworld");
  CHECK_THROWS_AS(read_file(dir.file("absent.txt")), Error);
  try {
    read_file(dir.file("absent.txt"));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FileNotFound);
  }
}

TEST_CASE("atomic_write_file writes, overwrites, and leaves no temp file") {
  testutil::TempDir dir("io_write");
  const std::string path = dir.file("out.csv");
  atomic_write_file(path, "first");
  CHECK(read_file(path) == "first");
  atomic_write_file(path, "second");
  CHECK(read_file(path) == "second");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  CHECK(file_hash_hex(path) == hash_hex(fnv1a64(std::string("second"))));
}

TEST_CASE("split_csv keeps empty fields and has no quoting") {
  CHECK(split_csv("a,b,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_csv(",x,") == std::vector<std::string>{"", "x", ""});
  CHECK(split_csv("") == std::vector<std::string>{""});
  CHECK(split_csv("single") == std::vector<std::string>{"single"});
}

TEST_CASE("split_lines accepts LF and CRLF and drops a trailing newline") {
  CHECK(split_lines("a\nb\r\nc\n") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_lines("one") == std::vector<std::string>{"one"});
  CHECK(split_lines("") == std::vector<std::string>{});
  CHECK(split_lines("\n\n") == std::vector<std::string>{"", ""});
}

TEST_CASE("format_double is the shortest exact round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(-0.25) == "-0.25");
  const double samples[] = {1.0 / 3.0, 1e300, -1e-300, 3.141592653589793, 0.0, -42.5};
  for (double v : samples) {
    double back = 0.0;
    REQUIRE(parse_double(format_double(v), back));
    REQUIRE(back == v);
  }
}

TEST_CASE("parse_double rejects partial and malformed tokens") {
  double out = 0.0;
  CHECK(parse_double("1.5", out));
  CHECK(out == 1.5);
  CHECK(parse_double("-3e2", out));
  CHECK(out == -300.0);
  CHECK_FALSE(parse_double("1.5x", out));
  CHECK_FALSE(parse_double("", out));
  CHECK_FALSE(parse_double("  2", out));
  CHECK_FALSE(parse_double("2 ", out));
}

}  // TEST_SUITE
