#pragma once

#include "ergodic/kernel.hpp"

#include <cstddef>
#include <vector>

namespace ergodic {

using StateSubset = std::vector<std::size_t>;

/// Closed communicating classes of the support digraph (edge iff p > 0) and
/// the remaining transient states. Classes are sorted by smallest member;
/// members ascend.
struct ClassStructure {
  std::vector<StateSubset> closed;
  StateSubset transient;
};

ClassStructure classify_states(const MarkovKernel& kernel);

/// States reachable from `sources` in one or more steps.
std::vector<bool> reachable_from(const MarkovKernel& kernel, const StateSubset& sources);

/// Recurrent classes E_a with invariant measures nu_a and absorption
/// probabilities y_a; the Cesaro limit kernel is p1(t, .) = sum_a y_a(t) nu_a.
struct ErgodicDecomposition {
  MarkovKernel kernel;
  std::vector<StateSubset> classes;
  StateSubset transient;
  std::vector<SignedMeasure> invariant_measures;
  std::vector<Observable> eigenfunctions;
  MarkovKernel limit_kernel;

  std::size_t class_count() const { return classes.size(); }
};

ErgodicDecomposition decompose(const MarkovKernel& kernel);

/// Stationary distribution of the kernel restricted to a closed class, as a
/// measure on the full space.
SignedMeasure class_stationary_measure(const MarkovKernel& kernel, const StateSubset& cls);

/// kernel_distance(cesaro_average(P, n), p1), averaging P^1..P^n.
double limit_kernel_error(const ErgodicDecomposition& decomp, unsigned n);

/// Weights w_a = <mu, y_a> of the limit sum_a w_a nu_a.
std::vector<double> limit_coefficients(const ErgodicDecomposition& decomp, const SignedMeasure& mu);

/// Long-run Cesaro average of T^i mu. Throws InvalidInput unless mu is a probability measure.
SignedMeasure limit_of_initial_measure(const ErgodicDecomposition& decomp, const SignedMeasure& mu);

/// (1/n) sum_{i=0..n-1} (T*)^i (g 1_{E_alpha})
Observable restricted_time_average(const ErgodicDecomposition& decomp, std::size_t alpha,
                                   const Observable& g, unsigned n);

}  // namespace ergodic
