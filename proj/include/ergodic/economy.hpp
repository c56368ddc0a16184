#pragma once

#include "ergodic/conditions.hpp"
#include "ergodic/decomposition.hpp"
#include "ergodic/kernel.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ergodic {

/// Economy with state space X = E x D (labels "e|d", exogenous-major order),
/// exogenous shock kernel q on E, and an evolution law x' = f(x, e') given as
/// a finite table.
class EconomyModel {
 public:
  /// law[x * |E| + e] = index of f(x, e) in the product space.
  EconomyModel(StateSpace exo, StateSpace endo, MarkovKernel q, std::vector<std::size_t> law);

  /// Law keyed by "x_label|e_label" -> "x'_label"; every pair must be present.
  static EconomyModel from_labels(StateSpace exo, StateSpace endo, MarkovKernel q,
                                  const std::map<std::string, std::string>& law);

  const StateSpace& exo_space() const { return exo_; }
  const StateSpace& endo_space() const { return endo_; }
  const StateSpace& state_space() const { return states_; }
  const MarkovKernel& q() const { return q_; }

  std::size_t state_index(std::size_t exo, std::size_t endo) const { return exo * endo_.size() + endo; }
  std::size_t exo_of(std::size_t state) const { return state / endo_.size(); }
  std::size_t endo_of(std::size_t state) const { return state % endo_.size(); }
  std::size_t law(std::size_t state, std::size_t shock) const { return law_[state * exo_.size() + shock]; }

 private:
  StateSpace exo_;
  StateSpace endo_;
  StateSpace states_;
  MarkovKernel q_;
  std::vector<std::size_t> law_;
};

/// p(x, x') = sum of q(exo(x), e') over shocks e' with f(x, e') = x'.
MarkovKernel induce_kernel(const EconomyModel& model);

/// f^(n)(x, e): the law applied n times with the shock held at e.
std::size_t iterate_law(const EconomyModel& model, std::size_t state, std::size_t shock, unsigned n);

/// Checks the three sufficient hypotheses for a unique invariant measure:
/// the law's range K, a shock e* collapsing K onto one x* after n <= n_max
/// iterations, and eps = min_e q(e, e*) > 0. n_max = 0 means |X|.
ConditionReport check_theorem2(const EconomyModel& model, unsigned n_max = 0);

/// Re-verifies the witnesses of a satisfied check_theorem2 report.
bool replay_theorem2(const ConditionReport& report, const EconomyModel& model);

/// The chain watched only on K: kernel_K = A + B (I - D)^{-1} C for the block
/// partition of P over (K, K^c).
struct TraceChain {
  MarkovKernel base;
  StateSubset subset;
  MarkovKernel kernel_k;
};

/// Throws NonReturningSubset when some state of K can leave K for good.
TraceChain trace_chain(const MarkovKernel& kernel, const StateSubset& subset);
TraceChain trace_chain(const MarkovKernel& kernel, const std::vector<std::string>& subset);

struct ErgodicityVerdict {
  MarkovKernel kernel;
  ConditionReport theorem2;
  ErgodicDecomposition decomposition;
  /// Unique invariant measure when the induced chain has one ergodic class.
  std::optional<SignedMeasure> mu_star;
  /// Harris check with K and k = n from the theorem2 witnesses (when satisfied).
  std::optional<ConditionReport> harris;
  /// p^(n)(x, x*) >= eps^n for every x in K.
  bool minorization_holds = false;
  /// Theorem2 satisfied, one ergodic class, Harris cross-check passed.
  bool satisfied = false;
  std::vector<std::string> diagnostics;
};

ErgodicityVerdict ergodicity_verdict(const EconomyModel& model, unsigned n_max = 0);

}  // namespace ergodic
