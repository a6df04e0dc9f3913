#include "gpr/rng.hpp"

#include <cmath>
#include <numbers>

#include "gpr/errors.hpp"

namespace gpr {

double Rng::uniform() {
  // 53-bit mantissa from the top bits of one engine draw.
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_pos() { return 1.0 - uniform(); }

double Rng::normal() {
  const double u1 = uniform_pos();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::uniform_int(int n) {
  // Rejection-free scaling is fine here: n is tiny relative to 2^53.
  return static_cast<int>(uniform() * static_cast<double>(n));
}

Vec Rng::normal_vector(int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = normal();
  return v;
}

Vec Rng::unit_vector(int n) {
  Vec v = normal_vector(n);
  double norm = v.norm();
  while (norm == 0.0) { // essentially impossible, but never divide by zero
    v = normal_vector(n);
    norm = v.norm();
  }
  return v / norm;
}

Vec Rng::rademacher_vector(int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform() < 0.5 ? -1.0 : 1.0;
  return v;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

} // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  return splitmix64(seed ^ splitmix64(fnv1a(tag)));
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
  return splitmix64(derive_seed(seed, tag) ^ splitmix64(index));
}

std::vector<int> sample_without_replacement(int n, int k, Rng& rng) {
  if (k < 0 || k > n) throw InvalidInputError("sample_without_replacement: need 0 <= k <= n");
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  std::vector<int> out(k);
  for (int j = 0; j < k; ++j) {
    const int pick = j + rng.uniform_int(n - j);
    std::swap(pool[j], pool[pick]);
    out[j] = pool[j];
  }
  return out;
}

std::vector<int> weighted_sample_without_replacement(const Vec& weights, int k, Rng& rng) {
  const int n = static_cast<int>(weights.size());
  if (k < 0 || k > n) throw InvalidInputError("weighted_sample_without_replacement: need 0 <= k <= n");
  for (int i = 0; i < n; ++i) {
    if (!(weights[i] >= 0.0))
      throw InvalidInputError("weighted_sample_without_replacement: weights must be nonnegative and finite");
  }
  double total = weights.sum();
  if (total <= 0.0) throw ZeroWeightError("weighted_sample_without_replacement: all weights are zero");

  std::vector<double> w(weights.data(), weights.data() + n);
  std::vector<int> out;
  out.reserve(k);
  for (int j = 0; j < k && total > 0.0; ++j) {
    double target = rng.uniform() * total;
    int pick = -1;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      if (w[i] <= 0.0) continue;
      acc += w[i];
      pick = i;
      if (target < acc) break;
    }
    if (pick < 0) break; // remaining mass exhausted by roundoff
    out.push_back(pick);
    total -= w[pick];
    w[pick] = 0.0;
  }
  return out;
}

} // namespace gpr
