#pragma once

// Shared fixtures and random generators for the test suites.

#include "ergodic/decomposition.hpp"
#include "ergodic/economy.hpp"
#include "ergodic/kernel.hpp"
#include "ergodic/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <map>
#include <string>
#include <numeric>
#include <random>
#include <vector>

namespace ergodic::testing {

inline Matrix rows_of(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

inline MarkovKernel kernel_of(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m = rows_of(rows);
  return MarkovKernel(StateSpace::indexed(static_cast<std::size_t>(m.rows())), m);
}

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }
inline double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

// The fixtures used throughout: two-state mixing chain, flip, absorbing pair with one transient.
inline MarkovKernel two_state() { return kernel_of({{0.6, 0.4}, {0.3, 0.7}}); }
inline MarkovKernel flip() { return kernel_of({{0, 1}, {1, 0}}); }
inline MarkovKernel absorbing_pair() { return kernel_of({{1, 0, 0}, {0, 1, 0}, {0.3, 0.3, 0.4}}); }
inline MarkovKernel three_cycle_leak() { return kernel_of({{0.5, 0.5, 0}, {0, 0, 1}, {1, 0, 0}}); }

inline double uniform(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline MarkovKernel random_dense_kernel(std::mt19937_64& rng, std::size_t n) {
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = uniform(rng, 0.01, 1.0);
    m.row(i) /= m.row(i).sum();
  }
  return MarkovKernel(StateSpace::indexed(n), m, true);
}

/// Random rank-2 stochastic kernel P = A B with a real subdominant eigenvalue
/// bounded away from zero; its residual decays exactly geometrically.
inline MarkovKernel random_rank_two_kernel(std::mt19937_64& rng, std::size_t n) {
  for (;;) {
    Matrix a(static_cast<Eigen::Index>(n), 2), b(2, static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double w = uniform(rng);
      a(i, 0) = w;
      a(i, 1) = 1.0 - w;
    }
    for (Eigen::Index r = 0; r < 2; ++r) {
      for (Eigen::Index j = 0; j < b.cols(); ++j) b(r, j) = uniform(rng, 0.0, 1.0) * (uniform(rng) < 0.7 ? 1.0 : 0.05);
      b.row(r) /= b.row(r).sum();
    }
    const Matrix small = b * a;  // 2x2 stochastic, eigenvalues 1 and trace - 1
    const double r = small.trace() - 1.0;
    if (std::abs(r) < 0.05) continue;
    return MarkovKernel(StateSpace::indexed(n), a * b, true);
  }
}

struct Planted {
  MarkovKernel kernel;
  std::vector<StateSubset> classes;  // as planted, before sorting
  StateSubset transient;
};

/// Closed classes are either dense (aperiodic) or cyclic with period d >= 2;
/// transient states each keep an edge into some class. States are shuffled.
inline Planted planted_kernel(std::mt19937_64& rng, std::size_t max_states, std::size_t min_classes,
                              std::size_t max_classes, std::size_t max_transient, bool allow_periodic) {
  for (;;) {
    const std::size_t classes = pick(rng, min_classes, max_classes);
    std::vector<std::size_t> sizes;
    std::size_t total = 0;
    for (std::size_t c = 0; c < classes; ++c) {
      sizes.push_back(pick(rng, 1, 4));
      total += sizes.back();
    }
    const std::size_t transient = pick(rng, 0, max_transient);
    total += transient;
    if (total > max_states) continue;

    std::vector<std::size_t> perm(total);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);

    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
    auto at = [&](std::size_t i, std::size_t j) -> double& {
      return m(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(perm[j]));
    };
    std::vector<StateSubset> planted;
    std::size_t offset = 0;
    for (auto s : sizes) {
      StateSubset members;
      for (std::size_t i = 0; i < s; ++i) members.push_back(offset + i);
      const bool periodic = allow_periodic && s >= 2 && uniform(rng) < 0.35;
      if (periodic) {
        // groups of a cyclic class: state i belongs to group i % d
        const std::size_t d = pick(rng, 2, s);
        for (std::size_t i = 0; i < s; ++i)
          for (std::size_t j = 0; j < s; ++j)
            if (j % d == (i % d + 1) % d) at(offset + i, offset + j) = uniform(rng, 0.1, 1.0);
      } else {
        for (std::size_t i = 0; i < s; ++i)
          for (std::size_t j = 0; j < s; ++j) at(offset + i, offset + j) = uniform(rng, 0.05, 1.0);
      }
      for (auto& x : members) x = perm[x];
      std::sort(members.begin(), members.end());
      planted.push_back(members);
      offset += s;
    }
    StateSubset trans;
    const std::size_t recurrent = offset;
    for (std::size_t t = 0; t < transient; ++t) {
      const std::size_t i = recurrent + t;
      for (std::size_t j = 0; j < total; ++j)
        if (uniform(rng) < 0.5) at(i, j) = uniform(rng, 0.05, 1.0);
      at(i, pick(rng, 0, recurrent - 1)) += uniform(rng, 0.1, 1.0);
      trans.push_back(perm[i]);
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) /= m.row(i).sum();
    std::sort(trans.begin(), trans.end());
    return Planted{MarkovKernel(StateSpace::indexed(total), m, true), planted, trans};
  }
}

/// Cyclic class of period d with the given number of states per group,
/// plus transient states feeding into it.
inline MarkovKernel periodic_kernel(std::mt19937_64& rng, std::size_t period, std::size_t per_group,
                                    std::size_t transient) {
  const std::size_t cyc = period * per_group;
  const std::size_t total = cyc + transient;
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
  for (std::size_t i = 0; i < cyc; ++i) {
    const std::size_t next_group = (i / per_group + 1) % period;
    for (std::size_t k = 0; k < per_group; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(next_group * per_group + k)) = uniform(rng, 0.1, 1.0);
  }
  for (std::size_t t = cyc; t < total; ++t) {
    for (std::size_t j = 0; j < total; ++j)
      if (uniform(rng) < 0.4) m(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = uniform(rng, 0.05, 1.0);
    m(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(pick(rng, 0, cyc - 1))) += 0.5;
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) /= m.row(i).sum();
  return MarkovKernel(StateSpace::indexed(total), m, true);
}

/// Sum of ||S^i|| for i >= 1, truncated once terms fall below 1e-17.
inline double residual_series(const SpectralSplit& split) {
  CMatrix s = split.residual;
  double total = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double norm = operator_norm(s);
    total += norm;
    if (norm < 1e-17) break;
    s = s * split.residual;
  }
  return total;
}

/// A priori bound C with ||(1/n) sum_{i=1..n} lambda^{-i} P^i - T_lambda|| <= C / n, using
/// |sum_{i=1..n} z^i| <= 2 / |1 - z| on the unit circle.
inline double cesaro_bound(const SpectralSplit& split, std::size_t index) {
  const Complex lambda = split.peripheral_eigenvalues[index];
  double c = residual_series(split);
  for (std::size_t j = 0; j < split.peripheral_count(); ++j) {
    if (j == index) continue;
    const Complex z = split.peripheral_eigenvalues[j] / lambda;
    c += 2.0 * operator_norm(split.projections[j]) / std::abs(1.0 - z);
  }
  return c;
}

/// E = {e0, e1}, D = {d0, d1}; shock e0 resets to e0|d0, shock e1 moves to e1 and flips d.
inline EconomyModel toy_economy(const Matrix& q) {
  StateSpace exo({"e0", "e1"});
  StateSpace endo({"d0", "d1"});
  std::map<std::string, std::string> law;
  for (const std::string e : {"e0", "e1"})
    for (const std::string d : {"d0", "d1"}) {
      const std::string x = e + "|" + d;
      law[x + "|e0"] = "e0|d0";
      law[x + "|e1"] = std::string("e1|") + (d == "d0" ? "d1" : "d0");
    }
  return EconomyModel::from_labels(exo, endo, MarkovKernel(exo, q), law);
}

inline EconomyModel toy_economy() { return toy_economy(rows_of({{.5, .5}, {.5, .5}})); }

inline Matrix random_stochastic(std::mt19937_64& rng, std::size_t n, double zero_prob) {
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = uniform(rng) < zero_prob ? 0.0 : uniform(rng, 0.05, 1.0);
    if (m.row(i).sum() == 0.0) m(i, static_cast<Eigen::Index>(pick(rng, 0, n - 1))) = 1.0;
    m.row(i) /= m.row(i).sum();
  }
  return m;
}

/// Random model whose law is a random table; shock `collapse` (when set) maps
/// every state to one fixed state after a random permutation of the rest.
inline EconomyModel random_model(std::mt19937_64& rng, std::size_t ne, std::size_t nd, const Matrix& q,
                                 bool plant_collapse) {
  StateSpace exo = StateSpace::indexed(ne, "e");
  StateSpace endo = StateSpace::indexed(nd, "d");
  const std::size_t nx = ne * nd;
  std::vector<std::size_t> law(nx * ne);
  for (auto& v : law) v = pick(rng, 0, nx - 1);
  if (plant_collapse) {
    const std::size_t shock = pick(rng, 0, ne - 1);
    const std::size_t target = pick(rng, 0, nx - 1);
    for (std::size_t x = 0; x < nx; ++x) law[x * ne + shock] = target;
  }
  return EconomyModel(exo, endo, MarkovKernel(exo, q, true), law);
}

/// Exogenous states split into two blocks that q never connects; the law keeps
/// the drawn shock as the new exogenous component, so each block traps the
/// chain. One shock of the first block collapses everything onto one state.
inline EconomyModel split_block_model(std::mt19937_64& rng, std::size_t ne, std::size_t nd) {
  const std::size_t first = pick(rng, 1, ne - 1);
  Matrix q = Matrix::Zero(static_cast<Eigen::Index>(ne), static_cast<Eigen::Index>(ne));
  const Matrix a = random_stochastic(rng, first, 0.2);
  const Matrix b = random_stochastic(rng, ne - first, 0.2);
  q.topLeftCorner(a.rows(), a.cols()) = a;
  q.bottomRightCorner(b.rows(), b.cols()) = b;
  StateSpace exo = StateSpace::indexed(ne, "e");
  StateSpace endo = StateSpace::indexed(nd, "d");
  const std::size_t nx = ne * nd;
  std::vector<std::size_t> law(nx * ne);
  const std::size_t collapse = pick(rng, 0, first - 1);
  const std::size_t target_d = pick(rng, 0, nd - 1);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t e = 0; e < ne; ++e)
      law[x * ne + e] = e * nd + (e == collapse ? target_d : pick(rng, 0, nd - 1));
  return EconomyModel(exo, endo, MarkovKernel(exo, q, true), law);
}

}  // namespace ergodic::testing
