#include "ergodic/conditions.hpp"

#include "ergodic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

namespace ergodic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// (H) asks for a strict minorization; the witness eps is shrunk by this factor.
constexpr double kStrictShrink = 1.0 - 1e-12;

struct Minorization {
  double eps = 0.0;
  Vector mu;
};

Minorization minorize_rows(const Matrix& p, const StateSubset& rows) {
  const Eigen::Index n = p.cols();
  Vector minima = Vector::Constant(n, kInf);
  for (auto x : rows) minima = minima.cwiseMin(p.row(static_cast<Eigen::Index>(x)).transpose());
  Minorization out;
  out.eps = minima.sum();
  out.mu = out.eps > 0.0 ? Vector(minima / out.eps) : Vector::Zero(n);
  return out;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

StateSubset normalized_subset(const MarkovKernel& kernel, StateSubset subset) {
  if (subset.empty()) throw InvalidInput("state subset K must be nonempty");
  for (auto x : subset)
    if (x >= kernel.size()) throw InvalidInput("state index out of range");
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  return subset;
}

// E_x tau_K with tau_K = inf{n >= 1 : x_n in K}; +inf where the chain can get
// stuck in a closed class that avoids K.
Vector expected_hitting_times(const MarkovKernel& kernel, const std::vector<bool>& in_k) {
  const std::size_t n = kernel.size();
  std::vector<bool> stuck(n, false);
  for (const auto& cls : classify_states(kernel).closed) {
    const bool avoids = std::none_of(cls.begin(), cls.end(), [&](std::size_t x) { return in_k[x]; });
    if (avoids)
      for (auto x : cls) stuck[x] = true;
  }
  // Propagate backwards along edges inside K^c.
  std::deque<std::size_t> queue;
  for (std::size_t x = 0; x < n; ++x)
    if (stuck[x]) queue.push_back(x);
  while (!queue.empty()) {
    const std::size_t y = queue.front();
    queue.pop_front();
    for (std::size_t x = 0; x < n; ++x) {
      if (!in_k[x] && !stuck[x] && kernel(x, y) > 0.0) {
        stuck[x] = true;
        queue.push_back(x);
      }
    }
  }

  StateSubset solvable;
  for (std::size_t x = 0; x < n; ++x)
    if (!in_k[x] && !stuck[x]) solvable.push_back(x);
  const auto m = static_cast<Eigen::Index>(solvable.size());
  Vector h_out = Vector::Constant(static_cast<Eigen::Index>(n), kInf);
  if (m > 0) {
    Matrix a = Matrix::Identity(m, m);
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index c = 0; c < m; ++c) a(r, c) -= kernel(solvable[static_cast<std::size_t>(r)], solvable[static_cast<std::size_t>(c)]);
    const Vector h = a.partialPivLu().solve(Vector::Ones(m));
    for (Eigen::Index r = 0; r < m; ++r) h_out(static_cast<Eigen::Index>(solvable[static_cast<std::size_t>(r)])) = h(r);
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (!in_k[x]) continue;
    double h = 1.0;
    for (std::size_t y = 0; y < n; ++y) {
      if (in_k[y] || kernel(x, y) == 0.0) continue;
      h += kernel(x, y) * h_out(static_cast<Eigen::Index>(y));
    }
    h_out(static_cast<Eigen::Index>(x)) = h;
  }
  return h_out;
}

}  // namespace

std::string_view condition_name(Condition c) {
  switch (c) {
    case Condition::kDoeblin: return "doeblin";
    case Condition::kHarris: return "harris";
    case Condition::kQsccWitness: return "qscc";
    case Condition::kUniformIntegrability: return "uniform_integrability";
    case Condition::kTheorem2: return "theorem2";
  }
  return "unknown";
}

ConditionReport check_doeblin(const MarkovKernel& kernel) {
  StateSubset all(kernel.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const Minorization m = minorize_rows(kernel.matrix(), all);
  ConditionReport report{Condition::kDoeblin, m.eps > 0.0, {}, {}};
  report.witnesses["eps"] = m.eps;
  if (report.satisfied) {
    report.witnesses["mu"] = to_std(m.mu);
  } else {
    report.diagnostics.push_back("column minima vanish: no state is reachable in one step from every state");
  }
  return report;
}

ConditionReport check_harris(const MarkovKernel& kernel, const StateSubset& small_set, unsigned k_max) {
  if (k_max == 0) throw InvalidInput("k_max must be >= 1");
  const StateSubset k_set = normalized_subset(kernel, small_set);
  std::vector<bool> in_k(kernel.size(), false);
  for (auto x : k_set) in_k[x] = true;

  ConditionReport report{Condition::kHarris, false, {}, {}};
  report.witnesses["K"] = kernel.space().labels_of(k_set);

  const Vector hitting = expected_hitting_times(kernel, in_k);
  report.witnesses["hitting_times"] = to_std(hitting);
  const double sup_hitting = hitting.maxCoeff();
  report.witnesses["sup_hitting_time"] = sup_hitting;
  const bool finite = std::isfinite(sup_hitting);
  if (!finite) report.diagnostics.push_back("some closed class avoids K: expected hitting time is infinite");

  Matrix power = kernel.matrix();
  bool minorized = false;
  for (unsigned k = 1; k <= k_max; ++k) {
    if (k > 1) power = power * kernel.matrix();
    const Minorization m = minorize_rows(power, k_set);
    if (m.eps > 0.0) {
      minorized = true;
      report.witnesses["k"] = static_cast<std::int64_t>(k);
      report.witnesses["eps"] = m.eps;
      report.witnesses["eps_strict"] = m.eps * kStrictShrink;
      report.witnesses["mu"] = to_std(m.mu);
      break;
    }
  }
  if (!minorized) {
    std::ostringstream msg;
    msg << "no k <= " << k_max << " gives a positive minorization over K";
    report.diagnostics.push_back(msg.str());
  }
  report.satisfied = finite && minorized;
  return report;
}

ConditionReport check_harris(const MarkovKernel& kernel, const std::vector<std::string>& small_set, unsigned k_max) {
  return check_harris(kernel, kernel.space().indices_of(small_set), k_max);
}

ConditionReport check_qscc_witness(const MarkovKernel& kernel, std::string_view x_star, double eps, unsigned n) {
  const std::size_t star = kernel.space().index_of(x_star);
  if (!(eps > 0.0 && eps <= 1.0)) throw InvalidInput("eps must lie in (0, 1]");
  if (n == 0) throw InvalidInput("n must be >= 1");
  const double v_mass = std::pow(eps, static_cast<double>(n));
  Matrix gap = n_step(kernel, n).matrix();
  gap.col(static_cast<Eigen::Index>(star)).array() -= v_mass;
  const double norm_gap = operator_norm(gap);

  ConditionReport report{Condition::kQsccWitness, norm_gap < 1.0, {}, {}};
  report.witnesses["x_star"] = std::string(x_star);
  report.witnesses["eps"] = eps;
  report.witnesses["n"] = static_cast<std::int64_t>(n);
  report.witnesses["v_mass"] = v_mass;
  report.witnesses["norm_gap"] = norm_gap;
  if (!report.satisfied) report.diagnostics.push_back("||P^n - V|| >= 1 for this (x*, eps, n)");
  return report;
}

ConditionReport check_uniform_integrability(const Matrix& density, const Vector& cell_weights,
                                            const std::vector<double>& eps_grid) {
  if (density.cols() != cell_weights.size() || density.rows() == 0 || density.cols() == 0)
    throw InvalidInput("density columns must match the number of cells");
  if (!density.allFinite() || !cell_weights.allFinite()) throw InvalidInput("density values must be finite");
  if (density.minCoeff() < 0.0) throw InvalidInput("density has negative entries");
  if (cell_weights.minCoeff() <= 0.0) throw InvalidInput("cell weights must be positive");
  if (eps_grid.empty()) throw InvalidInput("eps grid is empty");
  for (double e : eps_grid)
    if (!(e > 0.0)) throw InvalidInput("eps values must be positive");
  for (Eigen::Index x = 0; x < density.rows(); ++x) {
    const double mass = density.row(x).dot(cell_weights);
    if (std::abs(mass - 1.0) > kRenormalizeTol) throw InvalidInput("density row does not integrate to 1");
  }

  const auto cells = static_cast<std::size_t>(density.cols());
  std::vector<double> sigmas;
  for (double eps : eps_grid) {
    double sigma = kInf;
    for (Eigen::Index x = 0; x < density.rows(); ++x) {
      std::vector<std::size_t> order(cells);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return density(x, static_cast<Eigen::Index>(a)) > density(x, static_cast<Eigen::Index>(b));
      });
      // Heaviest mass per unit weight first: the concave envelope of mass vs weight.
      double mass = 0.0, weight = 0.0, row_sigma = kInf;
      for (auto c : order) {
        const double d = density(x, static_cast<Eigen::Index>(c));
        const double w = cell_weights(static_cast<Eigen::Index>(c));
        if (d <= 0.0) break;
        if (mass + d * w >= eps) {
          row_sigma = weight + (eps - mass) / d;
          break;
        }
        mass += d * w;
        weight += w;
      }
      sigma = std::min(sigma, row_sigma);
    }
    sigmas.push_back(sigma);
  }

  ConditionReport report{Condition::kUniformIntegrability, true, {}, {}};
  report.witnesses["eps"] = eps_grid;
  for (double s : sigmas) report.satisfied = report.satisfied && s > 0.0;
  report.witnesses["sigma"] = sigmas;
  return report;
}

bool replay_witnesses(const ConditionReport& report, const MarkovKernel& kernel, double tol) {
  if (!report.satisfied) return false;
  const Eigen::Index n = static_cast<Eigen::Index>(kernel.size());
  auto minorizes = [&](const Matrix& p, const StateSubset& rows, double eps, const std::vector<double>& mu,
                       bool strict) {
    if (static_cast<Eigen::Index>(mu.size()) != n || !(eps > 0.0)) return false;
    double total = 0.0;
    for (double m : mu) {
      if (m < -tol) return false;
      total += m;
    }
    if (std::abs(total - 1.0) > tol) return false;
    for (auto x : rows)
      for (Eigen::Index y = 0; y < n; ++y) {
        const double lhs = p(static_cast<Eigen::Index>(x), y);
        const double rhs = eps * mu[static_cast<std::size_t>(y)];
        if (lhs < rhs - tol) return false;
        if (strict && mu[static_cast<std::size_t>(y)] > 0.0 && !(lhs > rhs)) return false;
      }
    return true;
  };

  switch (report.condition) {
    case Condition::kDoeblin: {
      StateSubset all(kernel.size());
      std::iota(all.begin(), all.end(), std::size_t{0});
      return minorizes(kernel.matrix(), all, report.get<double>("eps"), report.get<std::vector<double>>("mu"), false);
    }
    case Condition::kHarris: {
      const StateSubset k_set = kernel.space().indices_of(report.get<std::vector<std::string>>("K"));
      std::vector<bool> in_k(kernel.size(), false);
      for (auto x : k_set) in_k[x] = true;
      const auto& h = report.get<std::vector<double>>("hitting_times");
      if (static_cast<Eigen::Index>(h.size()) != n) return false;
      // h(x) = 1 + sum_{y not in K} p(x,y) h(y) for every x
      for (Eigen::Index x = 0; x < n; ++x) {
        if (!std::isfinite(h[static_cast<std::size_t>(x)])) return false;
        double rhs = 1.0;
        for (Eigen::Index y = 0; y < n; ++y)
          if (!in_k[static_cast<std::size_t>(y)]) rhs += kernel(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) * h[static_cast<std::size_t>(y)];
        if (std::abs(rhs - h[static_cast<std::size_t>(x)]) > tol * std::max(1.0, rhs)) return false;
      }
      const auto k = static_cast<unsigned>(report.get<std::int64_t>("k"));
      const Matrix pk = n_step(kernel, k).matrix();
      return minorizes(pk, k_set, report.get<double>("eps_strict"), report.get<std::vector<double>>("mu"), true);
    }
    case Condition::kQsccWitness: {
      const auto& x_star = report.get<std::string>("x_star");
      const auto again = check_qscc_witness(kernel, x_star, report.get<double>("eps"),
                                            static_cast<unsigned>(report.get<std::int64_t>("n")));
      const double gap = again.get<double>("norm_gap");
      return gap < 1.0 && std::abs(gap - report.get<double>("norm_gap")) <= tol;
    }
    default:
      throw InvalidInput("replay_witnesses handles doeblin, harris and qscc reports only");
  }
}

}  // namespace ergodic
