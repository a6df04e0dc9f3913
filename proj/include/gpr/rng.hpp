#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "gpr/types.hpp"

namespace gpr {

// Seedable random stream used everywhere randomness is needed.
//
// The engine is std::mt19937_64 (bit-portable by the standard) and all
// distributions are generated here by hand, so a (seed, call sequence)
// pair reproduces the same values on any platform. Normal variates use
// Box-Muller without caching: one normal() consumes exactly two engine
// draws.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0, 1).
  double uniform();

  // Uniform on (0, 1] (safe as a log() argument).
  double uniform_pos();

  // Standard normal via Box-Muller.
  double normal();

  // Uniform integer in [0, n).
  int uniform_int(int n);

  std::uint64_t raw() { return eng_(); }

  Vec normal_vector(int n);
  Vec unit_vector(int n); // normalized normal_vector
  Vec rademacher_vector(int n); // entries in {-1, +1}

private:
  std::mt19937_64 eng_;
};

// Derives an independent substream seed from (seed, tag). Tags name the
// purpose ("ensemble", "signal", "rows", trial ids, ...), so adding a new
// consumer never perturbs existing streams.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index);

// k distinct indices from {0,...,n-1}, uniform without replacement
// (partial Fisher-Yates). Result is in draw order.
std::vector<int> sample_without_replacement(int n, int k, Rng& rng);

// k distinct indices drawn sequentially without replacement with
// probability proportional to weights[i] among the remaining items.
// Indices with zero weight are never drawn; if fewer than k indices have
// positive weight, the result is shorter than k. Throws ZeroWeightError
// when every weight is zero.
std::vector<int> weighted_sample_without_replacement(const Vec& weights, int k, Rng& rng);

} // namespace gpr
