#include "ergodic/decomposition.hpp"

#include "ergodic/errors.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>

#include <algorithm>
#include <cmath>
#include <deque>

namespace ergodic {

namespace {

using Digraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;

Digraph support_graph(const MarkovKernel& kernel) {
  const std::size_t n = kernel.size();
  Digraph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (kernel(i, j) > 0.0) boost::add_edge(i, j, g);
  return g;
}

// Negative rounding noise on quantities that are nonnegative by construction.
constexpr double kClampTol = 1e-12;

double clamp_nonnegative(double v) { return (v < 0.0 && v > -kClampTol) ? 0.0 : v; }

}  // namespace

ClassStructure classify_states(const MarkovKernel& kernel) {
  const std::size_t n = kernel.size();
  const Digraph g = support_graph(kernel);
  std::vector<int> component(n);
  const int count = boost::strong_components(g, component.data());

  std::vector<bool> leaks(static_cast<std::size_t>(count), false);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (kernel(i, j) > 0.0 && component[i] != component[j]) leaks[static_cast<std::size_t>(component[i])] = true;

  std::vector<StateSubset> members(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < n; ++i) members[static_cast<std::size_t>(component[i])].push_back(i);

  ClassStructure out;
  for (int c = 0; c < count; ++c) {
    auto& m = members[static_cast<std::size_t>(c)];
    if (leaks[static_cast<std::size_t>(c)])
      out.transient.insert(out.transient.end(), m.begin(), m.end());
    else
      out.closed.push_back(std::move(m));
  }
  std::sort(out.closed.begin(), out.closed.end(),
            [](const StateSubset& a, const StateSubset& b) { return a.front() < b.front(); });
  std::sort(out.transient.begin(), out.transient.end());
  return out;
}

std::vector<bool> reachable_from(const MarkovKernel& kernel, const StateSubset& sources) {
  const std::size_t n = kernel.size();
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue(sources.begin(), sources.end());
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t y = 0; y < n; ++y) {
      if (kernel(x, y) > 0.0 && !seen[y]) {
        seen[y] = true;
        queue.push_back(y);
      }
    }
  }
  return seen;
}

SignedMeasure class_stationary_measure(const MarkovKernel& kernel, const StateSubset& cls) {
  const auto m = static_cast<Eigen::Index>(cls.size());
  Matrix a(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c)
      a(r, c) = kernel(cls[static_cast<std::size_t>(c)], cls[static_cast<std::size_t>(r)]);
  a -= Matrix::Identity(m, m);
  // (P^T - I) nu = 0 has rank m - 1 on an irreducible class; swap one equation for sum(nu) = 1.
  a.row(m - 1).setOnes();
  Vector rhs = Vector::Zero(m);
  rhs(m - 1) = 1.0;
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) throw NumericalDegeneracy("stationary system of a closed class is singular");
  const Vector local = lu.solve(rhs);

  Vector w = Vector::Zero(static_cast<Eigen::Index>(kernel.size()));
  for (Eigen::Index r = 0; r < m; ++r) w(static_cast<Eigen::Index>(cls[static_cast<std::size_t>(r)])) = clamp_nonnegative(local(r));
  return SignedMeasure(kernel.space(), std::move(w));
}

ErgodicDecomposition decompose(const MarkovKernel& kernel) {
  ClassStructure structure = classify_states(kernel);
  const auto n = static_cast<Eigen::Index>(kernel.size());
  const auto& space = kernel.space();

  std::vector<SignedMeasure> measures;
  for (const auto& cls : structure.closed) measures.push_back(class_stationary_measure(kernel, cls));

  // Absorption probabilities: y = P y on the transient block, boundary 1 on E_a, 0 on other classes.
  const auto& tr = structure.transient;
  const auto t = static_cast<Eigen::Index>(tr.size());
  std::vector<Observable> eigenfunctions;
  Eigen::PartialPivLU<Matrix> lu;
  if (t > 0) {
    // I - Q with the diagonal taken as the off-diagonal row mass, so tiny leaks do not cancel.
    Matrix fundamental(t, t);
    for (Eigen::Index r = 0; r < t; ++r) {
      const std::size_t x = tr[static_cast<std::size_t>(r)];
      for (Eigen::Index c = 0; c < t; ++c) fundamental(r, c) = -kernel(x, tr[static_cast<std::size_t>(c)]);
      double out = 0.0;
      for (std::size_t y = 0; y < kernel.size(); ++y)
        if (y != x) out += kernel(x, y);
      fundamental(r, r) = out;
    }
    lu.compute(fundamental);
  }
  for (const auto& cls : structure.closed) {
    Vector y = Vector::Zero(n);
    for (auto x : cls) y(static_cast<Eigen::Index>(x)) = 1.0;
    if (t > 0) {
      Vector b(t);
      for (Eigen::Index r = 0; r < t; ++r) {
        double s = 0.0;
        for (auto x : cls) s += kernel(tr[static_cast<std::size_t>(r)], x);
        b(r) = s;
      }
      const Vector h = lu.solve(b);
      for (Eigen::Index r = 0; r < t; ++r)
        y(static_cast<Eigen::Index>(tr[static_cast<std::size_t>(r)])) = std::clamp(clamp_nonnegative(h(r)), 0.0, 1.0);
    }
    eigenfunctions.emplace_back(space, std::move(y));
  }

  Matrix p1 = Matrix::Zero(n, n);
  for (std::size_t a = 0; a < measures.size(); ++a)
    p1 += eigenfunctions[a].values() * measures[a].weights().transpose();

  return ErgodicDecomposition{kernel,
                              std::move(structure.closed),
                              std::move(structure.transient),
                              std::move(measures),
                              std::move(eigenfunctions),
                              MarkovKernel(space, std::move(p1), true)};
}

double limit_kernel_error(const ErgodicDecomposition& decomp, unsigned n) {
  const Matrix avg = cesaro_average(decomp.kernel, n, CesaroStart::kFirstPower);
  return operator_norm(Matrix(avg - decomp.limit_kernel.matrix()));
}

std::vector<double> limit_coefficients(const ErgodicDecomposition& decomp, const SignedMeasure& mu) {
  require_same_space(decomp.kernel.space(), mu.space(), "limit_coefficients");
  std::vector<double> w;
  w.reserve(decomp.class_count());
  for (const auto& y : decomp.eigenfunctions) w.push_back(pairing(mu, y));
  return w;
}

SignedMeasure limit_of_initial_measure(const ErgodicDecomposition& decomp, const SignedMeasure& mu) {
  require_same_space(decomp.kernel.space(), mu.space(), "limit_of_initial_measure");
  if (!mu.is_probability()) throw InvalidInput("initial measure must be a probability measure");
  const auto w = limit_coefficients(decomp, mu);
  Vector out = Vector::Zero(static_cast<Eigen::Index>(decomp.kernel.size()));
  for (std::size_t a = 0; a < w.size(); ++a) out += w[a] * decomp.invariant_measures[a].weights();
  return SignedMeasure(decomp.kernel.space(), std::move(out));
}

Observable restricted_time_average(const ErgodicDecomposition& decomp, std::size_t alpha,
                                   const Observable& g, unsigned n) {
  if (alpha >= decomp.class_count()) throw InvalidInput("class index out of range");
  if (n == 0) throw InvalidInput("restricted_time_average needs n >= 1");
  require_same_space(decomp.kernel.space(), g.space(), "restricted_time_average");
  Vector f = Vector::Zero(g.values().size());
  for (auto x : decomp.classes[alpha]) f(static_cast<Eigen::Index>(x)) = g(x);
  const Matrix& p = decomp.kernel.matrix();
  Vector sum = Vector::Zero(f.size());
  for (unsigned i = 0; i < n; ++i) {
    sum += f;
    if (i + 1 < n) f = p * f;
  }
  return Observable(decomp.kernel.space(), sum / static_cast<double>(n));
}

}  // namespace ergodic
