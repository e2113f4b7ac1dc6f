#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "depkern/error.hpp"
#include "depkern/sample.hpp"
#include "oracles.hpp"

using depkern::ErrorKind;
using depkern::PairedSample;
using depkern::rank_permutation;
using depkern::rank_sample;
using depkern::RankedSample;
using depkern::read_csv;
using depkern::TiesPolicy;
using testutil::throws_kind;

namespace {

std::string write_tmp(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::path("sample_csv_tmp");
  std::filesystem::create_directories(dir);
  const std::string path = (dir / name).string();
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  return path;
}

bool is_permutation_1n(const std::vector<std::int32_t>& r) {
  std::vector<std::int32_t> c = r;
  std::sort(c.begin(), c.end());
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != static_cast<std::int32_t>(i + 1)) return false;
  return true;
}

}  // namespace

TEST_CASE("read_csv parses plain two-column files") {
  const auto p = write_tmp("plain.csv", "1,2\n3,4\n");
  PairedSample s = read_csv(p, false, nullptr);
  REQUIRE(s.size() == 2);
  CHECK(s.x[0] == 1.0);
  CHECK(s.y[0] == 2.0);
  CHECK(s.x[1] == 3.0);
  CHECK(s.y[1] == 4.0);

  const auto h = write_tmp("header.csv", "x,y\n0.5,-1.25\n");
  PairedSample sh = read_csv(h, true, nullptr);
  REQUIRE(sh.size() == 1);
  CHECK(sh.x[0] == 0.5);
  CHECK(sh.y[0] == -1.25);

  // header skipped blindly even if it looks numeric
  const auto h2 = write_tmp("header2.csv", "9,9\n1,2\n");
  CHECK(read_csv(h2, true, nullptr).size() == 1);
}

TEST_CASE("read_csv tolerates CRLF, BOM, spaces, and a trailing blank line") {
  const auto p = write_tmp("crlf.csv", "\xEF\xBB\xBF 1 ,\t2\r\n3,4\r\n\n");
  PairedSample s = read_csv(p, false, nullptr);
  REQUIRE(s.size() == 2);
  CHECK(s.x[0] == 1.0);
  CHECK(s.y[1] == 4.0);
}

TEST_CASE("read_csv reports extra columns once as a warning") {
  const auto p = write_tmp("extra.csv", "1,2,99\n3,4,98\n");
  std::vector<std::string> warnings;
  PairedSample s = read_csv(p, false, &warnings);
  REQUIRE(s.size() == 2);
  CHECK(s.y[0] == 2.0);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("row 1") != std::string::npos);
  CHECK(warnings[0].find("ignored") != std::string::npos);
}

TEST_CASE("read_csv failure modes carry row coordinates") {
  CHECK(throws_kind([] { read_csv("sample_csv_tmp/definitely_missing.csv", false, nullptr); },
                    ErrorKind::io));

  const auto bad = write_tmp("bad.csv", "1,2\nfoo,4\n");
  try {
    read_csv(bad, false, nullptr);
    CHECK(false);
  } catch (const depkern::Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
    CHECK(std::string(e.what()).find("row 2, column 1") != std::string::npos);
  }

  const auto one = write_tmp("one_col.csv", "1,2\n7\n");
  CHECK(throws_kind([&] { read_csv(one, false, nullptr); }, ErrorKind::format));

  const auto blank = write_tmp("blank.csv", "1,2\n\n3,4\n");
  CHECK(throws_kind([&] { read_csv(blank, false, nullptr); }, ErrorKind::format));

  const auto inf = write_tmp("inf.csv", "inf,2\n");
  CHECK(throws_kind([&] { read_csv(inf, false, nullptr); }, ErrorKind::format));

  const auto empty = write_tmp("empty.csv", "");
  CHECK(throws_kind([&] { read_csv(empty, false, nullptr); }, ErrorKind::format));

  const auto only_header = write_tmp("only_header.csv", "x,y\n");
  CHECK(throws_kind([&] { read_csv(only_header, true, nullptr); }, ErrorKind::format));
}

TEST_CASE("ranking assigns midrank-free integer ranks") {
  PairedSample s;
  s.x = {0.3, 0.1, 0.2};
  s.y = {10.0, 30.0, 20.0};
  RankedSample r = rank_sample(s, TiesPolicy::error, 0);
  CHECK(r.n == 3);
  CHECK(r.r == std::vector<std::int32_t>{3, 1, 2});
  CHECK(r.s == std::vector<std::int32_t>{1, 3, 2});
}

TEST_CASE("ties policy error names the offending rows") {
  PairedSample s;
  s.x = {5.0, 5.0};
  s.y = {1.0, 2.0};
  try {
    rank_sample(s, TiesPolicy::error, 0);
    CHECK(false);
  } catch (const depkern::Error& e) {
    CHECK(e.kind() == ErrorKind::ties);
    CHECK(std::string(e.what()).find("tied x values at rows 1 and 2") != std::string::npos);
  }

  PairedSample t;
  t.x = {1.0, 2.0};
  t.y = {7.0, 7.0};
  CHECK(throws_kind([&] { rank_sample(t, TiesPolicy::error, 0); }, ErrorKind::ties));
}

TEST_CASE("jitter breaks ties deterministically and leaves untied points alone") {
  PairedSample s;
  s.x = {1.0, 5.0, 5.0, 10.0};
  s.y = {4.0, 3.0, 2.0, 1.0};
  RankedSample a = rank_sample(s, TiesPolicy::jitter, 42);
  RankedSample b = rank_sample(s, TiesPolicy::jitter, 42);
  CHECK(a.r == b.r);
  CHECK(a.s == b.s);
  CHECK(is_permutation_1n(a.r));
  CHECK(a.r[0] == 1);
  CHECK(a.r[3] == 4);
  CHECK(a.r[1] + a.r[2] == 5);  // the tied pair occupies ranks {2, 3}
  CHECK(a.s == std::vector<std::int32_t>{4, 3, 2, 1});

  // different seeds eventually produce the other tie order
  bool saw_both = false;
  const std::int32_t first = a.r[1];
  for (std::uint64_t seed = 0; seed < 64 && !saw_both; ++seed) {
    RankedSample c = rank_sample(s, TiesPolicy::jitter, seed);
    if (c.r[1] != first) saw_both = true;
  }
  CHECK(saw_both);

  // jitter on tie-free data reproduces the error-policy ranks
  PairedSample clean;
  clean.x = {0.9, -0.4, 0.2, 1.7};
  clean.y = {5.0, 6.0, 7.0, 8.0};
  CHECK(rank_sample(clean, TiesPolicy::jitter, 123).r ==
        rank_sample(clean, TiesPolicy::error, 0).r);
}

TEST_CASE("ranks are invariant under strictly increasing transformations") {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  PairedSample s;
  for (int i = 0; i < 200; ++i) {
    s.x.push_back(unif(eng));
    s.y.push_back(unif(eng));
  }
  PairedSample t;
  for (int i = 0; i < 200; ++i) {
    t.x.push_back(std::exp(s.x[i]));
    t.y.push_back(std::atan(s.y[i]));
  }
  RankedSample rs = rank_sample(s, TiesPolicy::error, 0);
  RankedSample rt = rank_sample(t, TiesPolicy::error, 0);
  CHECK(rs.r == rt.r);
  CHECK(rs.s == rt.s);
}

TEST_CASE("rank_permutation satisfies pi[r_i] = s_i") {
  RankedSample r = testutil::make_ranked({2, 1, 3}, {1, 3, 2});
  CHECK(rank_permutation(r) == std::vector<std::int32_t>{3, 1, 2});

  std::mt19937_64 eng(99);
  RankedSample q =
      testutil::make_ranked(testutil::random_perm(40, eng), testutil::random_perm(40, eng));
  const auto pi = rank_permutation(q);
  CHECK(is_permutation_1n(pi));
  for (std::size_t i = 0; i < q.n; ++i) CHECK(pi[q.r[i] - 1] == q.s[i]);
}

TEST_CASE("rank_sample input validation") {
  PairedSample s;
  CHECK(throws_kind([&] { rank_sample(s, TiesPolicy::error, 0); }, ErrorKind::sample_too_small));
  s.x = {1.0, 2.0};
  s.y = {1.0};
  CHECK(throws_kind([&] { rank_sample(s, TiesPolicy::error, 0); }, ErrorKind::invalid_argument));
}
