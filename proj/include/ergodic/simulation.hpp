#pragma once

#include "ergodic/kernel.hpp"

#include <cstdint>
#include <vector>

namespace ergodic {

/// SplitMix64: a Weyl counter (step 0x9E3779B97F4A7C15) passed through a
/// fixed 64-bit mixer. Output depends only on the seed and the draw count.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct SimulationRun {
  MarkovKernel kernel;
  std::size_t initial_state;
  std::uint64_t seed;
  /// path.size() == length, path[0] == initial_state
  std::vector<std::size_t> path;

  std::size_t length() const { return path.size(); }
};

/// Inverse-CDF sampling of each row in state order.
SimulationRun simulate_path(const MarkovKernel& kernel, std::size_t x0, std::size_t n, std::uint64_t seed);

/// (1/len) sum_i g(path[i])
double empirical_time_average(const SimulationRun& run, const Observable& g);
/// Sample variance of g along the path.
double empirical_variance(const SimulationRun& run, const Observable& g);

/// Exact (1/n) sum_{i=0..n-1} ((T*)^i g)(x).
double deterministic_time_average(const MarkovKernel& kernel, const Observable& g, std::size_t x, unsigned n);

struct ProfileRow {
  unsigned n;
  double deviation;
  double scaled;  ///< n * deviation
};

struct ConvergenceProfile {
  double space_average = 0.0;
  std::vector<ProfileRow> rows;
  /// max over the grid of n * deviation
  double fitted_constant = 0.0;
};

/// Throws AmbiguousLimit when the kernel has more than one ergodic class.
ConvergenceProfile convergence_profile(const MarkovKernel& kernel, const Observable& g, std::size_t x,
                                       const std::vector<unsigned>& n_grid);

}  // namespace ergodic
