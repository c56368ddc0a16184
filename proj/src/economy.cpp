#include "ergodic/economy.hpp"

#include "ergodic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace ergodic {

namespace {

StateSpace product_space(const StateSpace& exo, const StateSpace& endo) {
  std::vector<std::string> labels;
  labels.reserve(exo.size() * endo.size());
  for (const auto& e : exo.labels()) {
    if (e.find('|') != std::string::npos) throw InvalidInput("exogenous label '" + e + "' contains '|'");
    for (const auto& d : endo.labels()) {
      if (d.find('|') != std::string::npos) throw InvalidInput("endogenous label '" + d + "' contains '|'");
      labels.push_back(e + "|" + d);
    }
  }
  return StateSpace(std::move(labels));
}

StateSubset law_range(const EconomyModel& model) {
  const std::size_t nx = model.state_space().size();
  const std::size_t ne = model.exo_space().size();
  std::vector<bool> hit(nx, false);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t e = 0; e < ne; ++e) hit[model.law(x, e)] = true;
  StateSubset range;
  for (std::size_t x = 0; x < nx; ++x)
    if (hit[x]) range.push_back(x);
  return range;
}

double min_shock_probability(const MarkovKernel& q, std::size_t target) {
  return q.matrix().col(static_cast<Eigen::Index>(target)).minCoeff();
}

}  // namespace

EconomyModel::EconomyModel(StateSpace exo, StateSpace endo, MarkovKernel q, std::vector<std::size_t> law)
    : exo_(std::move(exo)),
      endo_(std::move(endo)),
      states_(product_space(exo_, endo_)),
      q_(std::move(q)),
      law_(std::move(law)) {
  require_same_space(q_.space(), exo_, "economy model q");
  if (law_.size() != states_.size() * exo_.size()) throw InvalidInput("evolution law is not total");
  for (auto x : law_)
    if (x >= states_.size()) throw InvalidInput("evolution law maps outside the state space");
}

EconomyModel EconomyModel::from_labels(StateSpace exo, StateSpace endo, MarkovKernel q,
                                       const std::map<std::string, std::string>& law) {
  const StateSpace states = product_space(exo, endo);
  std::vector<std::size_t> table(states.size() * exo.size(), states.size());
  for (const auto& [key, value] : law) {
    const auto cut = key.rfind('|');
    if (cut == std::string::npos) throw InvalidInput("law key '" + key + "' is not of the form x|e");
    const std::size_t x = states.index_of(std::string_view(key).substr(0, cut));
    const std::size_t e = exo.index_of(std::string_view(key).substr(cut + 1));
    table[x * exo.size() + e] = states.index_of(value);
  }
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i] == states.size())
      throw InvalidInput("law is missing the entry for " + states.label(i / exo.size()) + "|" +
                         exo.label(i % exo.size()));
  return EconomyModel(std::move(exo), std::move(endo), std::move(q), std::move(table));
}

MarkovKernel induce_kernel(const EconomyModel& model) {
  const std::size_t nx = model.state_space().size();
  const std::size_t ne = model.exo_space().size();
  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(nx), static_cast<Eigen::Index>(nx));
  for (std::size_t x = 0; x < nx; ++x) {
    const std::size_t e = model.exo_of(x);
    for (std::size_t shock = 0; shock < ne; ++shock)
      p(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(model.law(x, shock))) += model.q()(e, shock);
  }
  return MarkovKernel(model.state_space(), std::move(p), true);
}

std::size_t iterate_law(const EconomyModel& model, std::size_t state, std::size_t shock, unsigned n) {
  if (n == 0) throw InvalidInput("iterate_law needs n >= 1");
  if (state >= model.state_space().size() || shock >= model.exo_space().size())
    throw InvalidInput("iterate_law: index out of range");
  for (unsigned i = 0; i < n; ++i) state = model.law(state, shock);
  return state;
}

ConditionReport check_theorem2(const EconomyModel& model, unsigned n_max) {
  const auto& states = model.state_space();
  const std::size_t ne = model.exo_space().size();
  if (n_max == 0) n_max = static_cast<unsigned>(states.size());

  ConditionReport report{Condition::kTheorem2, false, {}, {}};
  const StateSubset k_set = law_range(model);
  report.witnesses["K"] = states.labels_of(k_set);
  report.witnesses["hypothesis_1"] = std::int64_t{1};

  // Search order: increasing n, then shock order. Prefer the first collapsing
  // shock that also satisfies the uniform shock bound.
  struct Hit {
    std::size_t shock, target;
    unsigned n;
  };
  std::optional<Hit> first_collapse, witness;
  std::vector<StateSubset> images(ne, k_set);
  for (unsigned n = 1; n <= n_max && !witness; ++n) {
    for (std::size_t e = 0; e < ne && !witness; ++e) {
      for (auto& x : images[e]) x = model.law(x, e);
      const bool collapsed = std::all_of(images[e].begin(), images[e].end(),
                                         [&](std::size_t x) { return x == images[e].front(); });
      if (!collapsed) continue;
      const Hit hit{e, images[e].front(), n};
      if (!first_collapse) first_collapse = hit;
      if (min_shock_probability(model.q(), e) > 0.0) witness = hit;
    }
  }
  const auto chosen = witness ? witness : first_collapse;
  report.witnesses["hypothesis_2"] = std::int64_t{chosen ? 1 : 0};
  if (!chosen) {
    std::ostringstream msg;
    msg << "no shock collapses K onto a single state within n_max = " << n_max << " iterations";
    report.diagnostics.push_back(msg.str());
    report.witnesses["hypothesis_3"] = std::int64_t{0};
    report.diagnostics.push_back("hypothesis 3 not evaluated: no collapsing shock e*");
    return report;
  }
  const double eps = min_shock_probability(model.q(), chosen->shock);
  report.witnesses["e_star"] = model.exo_space().label(chosen->shock);
  report.witnesses["x_star"] = states.label(chosen->target);
  report.witnesses["n"] = static_cast<std::int64_t>(chosen->n);
  report.witnesses["eps"] = eps;
  report.witnesses["hypothesis_3"] = std::int64_t{eps > 0.0 ? 1 : 0};
  if (!(eps > 0.0)) report.diagnostics.push_back("q(e, {e*}) = 0 for some e: the collapsing shock is not uniformly reachable");
  report.satisfied = eps > 0.0;
  return report;
}

bool replay_theorem2(const ConditionReport& report, const EconomyModel& model) {
  if (!report.satisfied || report.condition != Condition::kTheorem2) return false;
  const auto& states = model.state_space();
  const StateSubset k_set = states.indices_of(report.get<std::vector<std::string>>("K"));
  std::vector<bool> in_k(states.size(), false);
  for (auto x : k_set) in_k[x] = true;
  for (std::size_t x = 0; x < states.size(); ++x)
    for (std::size_t e = 0; e < model.exo_space().size(); ++e)
      if (!in_k[model.law(x, e)]) return false;
  const std::size_t e_star = model.exo_space().index_of(report.get<std::string>("e_star"));
  const std::size_t x_star = states.index_of(report.get<std::string>("x_star"));
  const auto n = static_cast<unsigned>(report.get<std::int64_t>("n"));
  for (auto x : k_set)
    if (iterate_law(model, x, e_star, n) != x_star) return false;
  const double eps = report.get<double>("eps");
  return eps > 0.0 && min_shock_probability(model.q(), e_star) >= eps;
}

TraceChain trace_chain(const MarkovKernel& kernel, const StateSubset& subset_in) {
  const std::size_t n = kernel.size();
  StateSubset subset = subset_in;
  if (subset.empty()) throw InvalidInput("trace chain needs a nonempty subset");
  for (auto x : subset)
    if (x >= n) throw InvalidInput("state index out of range");
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  std::vector<bool> in_k(n, false);
  for (auto x : subset) in_k[x] = true;

  // Excursion states: K^c states reachable from K without passing through K.
  std::vector<bool> excursion(n, false);
  std::deque<std::size_t> queue;
  auto visit_successors = [&](std::size_t x) {
    for (std::size_t y = 0; y < n; ++y)
      if (!in_k[y] && !excursion[y] && kernel(x, y) > 0.0) {
        excursion[y] = true;
        queue.push_back(y);
      }
  };
  for (auto x : subset) visit_successors(x);
  while (!queue.empty()) {
    const std::size_t y = queue.front();
    queue.pop_front();
    visit_successors(y);
  }
  for (const auto& cls : classify_states(kernel).closed) {
    const bool avoids = std::none_of(cls.begin(), cls.end(), [&](std::size_t x) { return in_k[x]; });
    const bool entered = std::any_of(cls.begin(), cls.end(), [&](std::size_t x) { return excursion[x]; });
    if (avoids && entered) {
      std::string names;
      for (auto x : cls) names += (names.empty() ? "" : ",") + kernel.space().label(x);
      throw NonReturningSubset("chain leaves K for good into closed class {" + names + "}");
    }
  }

  StateSubset outside;
  for (std::size_t y = 0; y < n; ++y)
    if (excursion[y]) outside.push_back(y);
  const auto m = static_cast<Eigen::Index>(outside.size());
  auto pick = [&](const StateSubset& rows, const StateSubset& cols) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < cols.size(); ++c)
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = kernel(rows[r], cols[c]);
    return out;
  };
  Matrix result = pick(subset, subset);
  if (m > 0) {
    const Matrix b = pick(subset, outside);
    const Matrix c = pick(outside, subset);
    const Matrix d = pick(outside, outside);
    const Matrix excursions = (Matrix::Identity(m, m) - d).partialPivLu().solve(c);
    result += b * excursions;
  }
  StateSpace sub(kernel.space().labels_of(subset));
  return TraceChain{kernel, subset, MarkovKernel(std::move(sub), std::move(result), true)};
}

TraceChain trace_chain(const MarkovKernel& kernel, const std::vector<std::string>& subset) {
  return trace_chain(kernel, kernel.space().indices_of(subset));
}

ErgodicityVerdict ergodicity_verdict(const EconomyModel& model, unsigned n_max) {
  MarkovKernel kernel = induce_kernel(model);
  ConditionReport t2 = check_theorem2(model, n_max);
  ErgodicDecomposition decomp = decompose(kernel);
  ErgodicityVerdict verdict{kernel, t2, decomp, std::nullopt, std::nullopt, false, false, {}};

  const auto range = law_range(model);
  if (range.size() < kernel.size()) {
    std::vector<bool> hit(kernel.size(), false);
    for (auto x : range) hit[x] = true;
    std::string names;
    for (std::size_t x = 0; x < kernel.size(); ++x)
      if (!hit[x]) names += (names.empty() ? "" : ", ") + kernel.space().label(x);
    verdict.diagnostics.push_back("states never produced by the law: " + names);
  }
  std::ostringstream classes;
  classes << "ergodic classes: " << decomp.class_count() << ", transient states: " << decomp.transient.size();
  verdict.diagnostics.push_back(classes.str());
  if (decomp.class_count() == 1) verdict.mu_star = decomp.invariant_measures.front();

  if (t2.satisfied) {
    const auto k_labels = t2.get<std::vector<std::string>>("K");
    const auto n = static_cast<unsigned>(t2.get<std::int64_t>("n"));
    const std::size_t x_star = kernel.space().index_of(t2.get<std::string>("x_star"));
    const double bound = std::pow(t2.get<double>("eps"), static_cast<double>(n));
    verdict.harris = check_harris(kernel, k_labels, n);
    const MarkovKernel pn = n_step(kernel, n);
    verdict.minorization_holds = true;
    for (auto x : kernel.space().indices_of(k_labels))
      if (pn(x, x_star) < bound * (1.0 - 1e-12)) verdict.minorization_holds = false;
    verdict.satisfied = decomp.class_count() == 1 && verdict.harris->satisfied && verdict.minorization_holds;
    if (decomp.class_count() != 1)
      verdict.diagnostics.push_back("hypotheses hold but the induced kernel has several ergodic classes");
  }
  return verdict;
}

}  // namespace ergodic
