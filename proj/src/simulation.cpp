#include "ergodic/simulation.hpp"

#include "ergodic/decomposition.hpp"
#include "ergodic/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ergodic {

SimulationRun simulate_path(const MarkovKernel& kernel, std::size_t x0, std::size_t n, std::uint64_t seed) {
  if (x0 >= kernel.size()) throw InvalidInput("initial state out of range");
  if (n == 0) throw InvalidInput("path length must be >= 1");
  const std::size_t size = kernel.size();
  SplitMix64 rng(seed);
  std::vector<std::size_t> path;
  path.reserve(n);
  path.push_back(x0);
  std::size_t x = x0;
  for (std::size_t step = 1; step < n; ++step) {
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t next = size;
    std::size_t last_positive = 0;
    for (std::size_t y = 0; y < size; ++y) {
      const double p = kernel(x, y);
      if (p <= 0.0) continue;
      last_positive = y;
      cumulative += p;
      if (u < cumulative) {
        next = y;
        break;
      }
    }
    // u above the rounded row total
    x = next == size ? last_positive : next;
    path.push_back(x);
  }
  return SimulationRun{kernel, x0, seed, std::move(path)};
}

double empirical_time_average(const SimulationRun& run, const Observable& g) {
  require_same_space(run.kernel.space(), g.space(), "empirical_time_average");
  double sum = 0.0;
  for (auto x : run.path) sum += g(x);
  return sum / static_cast<double>(run.path.size());
}

double empirical_variance(const SimulationRun& run, const Observable& g) {
  const double mean = empirical_time_average(run, g);
  double ss = 0.0;
  for (auto x : run.path) ss += (g(x) - mean) * (g(x) - mean);
  return run.path.size() > 1 ? ss / static_cast<double>(run.path.size() - 1) : 0.0;
}

double deterministic_time_average(const MarkovKernel& kernel, const Observable& g, std::size_t x, unsigned n) {
  require_same_space(kernel.space(), g.space(), "deterministic_time_average");
  if (x >= kernel.size()) throw InvalidInput("state out of range");
  if (n == 0) throw InvalidInput("deterministic_time_average needs n >= 1");
  Vector f = g.values();
  double sum = 0.0;
  for (unsigned i = 0; i < n; ++i) {
    sum += f(static_cast<Eigen::Index>(x));
    if (i + 1 < n) f = kernel.matrix() * f;
  }
  return sum / static_cast<double>(n);
}

ConvergenceProfile convergence_profile(const MarkovKernel& kernel, const Observable& g, std::size_t x,
                                       const std::vector<unsigned>& n_grid) {
  require_same_space(kernel.space(), g.space(), "convergence_profile");
  if (x >= kernel.size()) throw InvalidInput("state out of range");
  if (n_grid.empty()) throw InvalidInput("n grid is empty");
  for (auto n : n_grid)
    if (n == 0) throw InvalidInput("grid values must be >= 1");
  const ErgodicDecomposition decomp = decompose(kernel);
  if (decomp.class_count() != 1) {
    std::string names;
    for (const auto& cls : decomp.classes) {
      names += names.empty() ? "{" : ", {";
      for (std::size_t i = 0; i < cls.size(); ++i) names += (i ? "," : "") + kernel.space().label(cls[i]);
      names += "}";
    }
    throw AmbiguousLimit("limit depends on the start: ergodic classes " + names);
  }

  ConvergenceProfile profile;
  profile.space_average = pairing(decomp.invariant_measures.front(), g);

  // One pass up to the largest n, reading off partial sums at grid points.
  const unsigned n_max = *std::max_element(n_grid.begin(), n_grid.end());
  std::vector<double> partial(n_max + 1, 0.0);
  Vector f = g.values();
  double sum = 0.0;
  for (unsigned i = 0; i < n_max; ++i) {
    sum += f(static_cast<Eigen::Index>(x));
    partial[i + 1] = sum;
    if (i + 1 < n_max) f = kernel.matrix() * f;
  }
  for (auto n : n_grid) {
    const double avg = partial[n] / static_cast<double>(n);
    const double dev = std::abs(avg - profile.space_average);
    profile.rows.push_back({n, dev, dev * static_cast<double>(n)});
    profile.fitted_constant = std::max(profile.fitted_constant, dev * static_cast<double>(n));
  }
  return profile;
}

}  // namespace ergodic
