#include "depkern/sample.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "depkern/error.hpp"

namespace depkern {

namespace {

double parse_field(const std::string& field, std::size_t row, std::size_t col) {
  const char* b = field.data();
  const char* e = b + field.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  while (e > b && (e[-1] == ' ' || e[-1] == '\t')) --e;
  double value = 0.0;
  auto res = std::from_chars(b, e, value);
  if (res.ec != std::errc() || res.ptr != e || b == e)
    fail(ErrorKind::parse, "row " + std::to_string(row) + ", column " + std::to_string(col) +
                               ": not a number: '" + field + "'");
  if (!std::isfinite(value))
    fail(ErrorKind::format, "row " + std::to_string(row) + ", column " + std::to_string(col) +
                                ": non-finite value");
  return value;
}

}  // namespace

PairedSample read_csv(const std::string& path, bool has_header, std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open: " + path);
  PairedSample out;
  std::string line;
  std::size_t row = 0;
  bool warned_extra = false;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (row == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF)
      line.erase(0, 3);
    if (row == 1 && has_header) continue;
    if (line.empty()) {
      // allow a single trailing blank line, reject blank rows elsewhere
      if (in.peek() == std::char_traits<char>::eof()) break;
      fail(ErrorKind::format, "row " + std::to_string(row) + ": blank row");
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() < 2)
      fail(ErrorKind::format, "row " + std::to_string(row) + ": expected two columns, got " +
                                  std::to_string(fields.size()));
    if (fields.size() > 2 && !warned_extra) {
      warned_extra = true;
      if (warnings != nullptr)
        warnings->push_back("row " + std::to_string(row) + ": columns beyond the second are ignored");
    }
    out.x.push_back(parse_field(fields[0], row, 1));
    out.y.push_back(parse_field(fields[1], row, 2));
  }
  if (out.x.empty()) fail(ErrorKind::format, "no data rows in: " + path);
  return out;
}

namespace {

std::vector<std::int32_t> ranks_of(const std::vector<double>& v, TiesPolicy policy,
                                   std::uint64_t seed, const char* coord) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (policy == TiesPolicy::jitter) {
    std::mt19937_64 eng(seed);
    std::vector<std::uint64_t> noise(n);
    for (auto& z : noise) z = eng();
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (v[a] != v[b]) return v[a] < v[b];
      if (noise[a] != noise[b]) return noise[a] < noise[b];
      return a < b;
    });
  } else {
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b] || (v[a] == v[b] && a < b); });
    for (std::size_t k = 0; k + 1 < n; ++k)
      if (v[idx[k]] == v[idx[k + 1]])
        fail(ErrorKind::ties, std::string("tied ") + coord + " values at rows " +
                                  std::to_string(idx[k] + 1) + " and " + std::to_string(idx[k + 1] + 1));
  }
  std::vector<std::int32_t> rank(n);
  for (std::size_t k = 0; k < n; ++k) rank[idx[k]] = static_cast<std::int32_t>(k + 1);
  return rank;
}

}  // namespace

RankedSample rank_sample(const PairedSample& sample, TiesPolicy policy, std::uint64_t seed) {
  require(sample.x.size() == sample.y.size(), ErrorKind::invalid_argument,
          "x and y lengths differ");
  require(!sample.x.empty(), ErrorKind::sample_too_small, "empty sample");
  RankedSample out;
  out.n = sample.x.size();
  out.r = ranks_of(sample.x, policy, seed ^ 0x9e3779b97f4a7c15ULL, "x");
  out.s = ranks_of(sample.y, policy, seed ^ 0xd1b54a32d192ed03ULL, "y");
  return out;
}

std::vector<std::int32_t> rank_permutation(const RankedSample& ranked) {
  std::vector<std::int32_t> pi(ranked.n);
  for (std::size_t i = 0; i < ranked.n; ++i) pi[ranked.r[i] - 1] = ranked.s[i];
  return pi;
}

}  // namespace depkern
