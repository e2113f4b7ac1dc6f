#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace depkern {

struct PairedSample {
  std::vector<double> x;
  std::vector<double> y;
  std::size_t size() const { return x.size(); }
};

// Midrank-free integer ranks, 1..n in each coordinate (a permutation each).
struct RankedSample {
  std::size_t n = 0;
  std::vector<std::int32_t> r;  // ranks of x
  std::vector<std::int32_t> s;  // ranks of y
};

enum class TiesPolicy { error, jitter };

// Two numeric columns, comma separated. Rows beyond two columns are accepted
// with a warning; short or non-numeric rows are rejected with 1-based
// row/column coordinates in the message.
PairedSample read_csv(const std::string& path, bool has_header,
                      std::vector<std::string>* warnings = nullptr);

// TiesPolicy::error reports the first tied pair; TiesPolicy::jitter breaks
// ties by a seeded random order and never moves the rank of an untied value.
RankedSample rank_sample(const PairedSample& sample, TiesPolicy policy, std::uint64_t seed = 0);

// pi with pi[r_i] = s_i: the y-rank sequence listed in x-rank order (1-based values).
std::vector<std::int32_t> rank_permutation(const RankedSample& ranked);

}  // namespace depkern
