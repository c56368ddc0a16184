#pragma once

#include "ergodic/decomposition.hpp"
#include "ergodic/kernel.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ergodic {

enum class Condition { kDoeblin, kHarris, kQsccWitness, kUniformIntegrability, kTheorem2 };

std::string_view condition_name(Condition c);

/// Measures and per-state vectors are stored as weight arrays in the order of
/// the kernel's states; state subsets as label lists.
using Witness = std::variant<double, std::int64_t, std::string, std::vector<double>, std::vector<std::string>>;

struct ConditionReport {
  Condition condition;
  bool satisfied = false;
  std::map<std::string, Witness, std::less<>> witnesses;
  std::vector<std::string> diagnostics;

  bool has(std::string_view name) const { return witnesses.find(name) != witnesses.end(); }

  template <class T>
  const T& get(std::string_view name) const {
    auto it = witnesses.find(name);
    if (it == witnesses.end()) throw std::out_of_range("no witness named " + std::string(name));
    return std::get<T>(it->second);
  }
};

/// Largest one-step minorization: eps = sum_y min_x p(x,y), mu = column minima / eps.
ConditionReport check_doeblin(const MarkovKernel& kernel);

/// Hitting-time finiteness for K plus a k-step minorization on K, k = 1..k_max.
/// Expected times use tau_K = inf{n >= 1 : x_n in K}; witness "hitting_times"
/// holds E_x tau_K per state (infinite entries when unsatisfied).
ConditionReport check_harris(const MarkovKernel& kernel, const StateSubset& small_set, unsigned k_max);
ConditionReport check_harris(const MarkovKernel& kernel, const std::vector<std::string>& small_set, unsigned k_max);

/// ||P^n - V|| < 1 with V the constant-row operator eps^n delta_{x*}.
ConditionReport check_qscc_witness(const MarkovKernel& kernel, std::string_view x_star, double eps, unsigned n);

/// Uniform integrability of a discretized density f(x, t) over cells of the
/// given weights. For each eps in the grid, "sigma" holds the largest sigma such
/// that every (fractional) cell set lighter than sigma carries mass < eps in
/// every row; +inf when eps exceeds the total mass.
ConditionReport check_uniform_integrability(const Matrix& density, const Vector& cell_weights,
                                            const std::vector<double>& eps_grid);

/// Re-evaluates the defining inequalities of a satisfied Doeblin, Harris or
/// QSCC report against the kernel.
bool replay_witnesses(const ConditionReport& report, const MarkovKernel& kernel, double tol = 1e-12);

}  // namespace ergodic
