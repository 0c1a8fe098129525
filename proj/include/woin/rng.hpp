// Named, seedable RNG substreams. Every stochastic source in a run draws
// from its own stream keyed by (run seed, stream name), so adding or
// reordering draws in one subsystem cannot perturb another.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace woin {

// splitmix64; used both to derive stream seeds from names and as the
// per-stream generator. Distribution code below is hand-rolled so that a
// (seed, name) pair yields the same sequence on every platform, which
// std::*_distribution does not guarantee.
class RngStream {
 public:
  RngStream() : state_(0x9e3779b97f4a7c15ull) {}
  RngStream(std::uint64_t run_seed, std::string_view name) {
    std::uint64_t h = run_seed ^ 0x9e3779b97f4a7c15ull;
    for (char c : name) {
      h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
      h *= 0x100000001b3ull;
    }
    state_ = h;
    // decorrelate nearby seeds
    next_u64();
    next_u64();
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform in [lo,hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // uniform integer in [lo,hi] inclusive
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  double exponential(double mean) {
    double u;
    do { u = next_double(); } while (u <= 0.0);
    return -mean * std::log(u);
  }

  // Box-Muller; one draw per call, spare discarded for simplicity
  double normal(double mean, double stddev) {
    double u1;
    do { u1 = next_double(); } while (u1 <= 0.0);
    const double u2 = next_double();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    return mean + stddev * z;
  }

  // Knuth's method; fine for the lambdas seen here (< a few hundred)
  int poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    const double limit = std::exp(-lambda);
    double prod = 1.0;
    int n = 0;
    for (;;) {
      prod *= next_double();
      if (prod <= limit) return n;
      ++n;
    }
  }

  // index drawn according to a probability vector (assumed to sum to ~1)
  int categorical(const std::vector<double>& probs) {
    const double u = next_double();
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return static_cast<int>(i);
    }
    // u fell into the rounding slack past the last positive entry
    for (std::size_t i = probs.size(); i-- > 0;) {
      if (probs[i] > 0.0) return static_cast<int>(i);
    }
    return 0;
  }

 private:
  std::uint64_t state_;
};

}  // namespace woin
