#include "ergodic/spectral.hpp"

#include "ergodic/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace ergodic {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Distance allowed between a computed peripheral eigenvalue and its root of unity.
constexpr double kSnapTol = 1e-6;
// Largest singular value of (P - lambda I) still counted as null.
constexpr double kNullTol = 1e-8;
constexpr double kImagResidueTol = 1e-10;
constexpr unsigned kDecaySamples = 64;

struct Root {
  long k;
  long q;
};

Complex exact_root(Root r) {
  const long k = ((r.k % r.q) + r.q) % r.q;
  if ((4 * k) % r.q == 0) {
    switch ((4 * k) / r.q) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double angle = kTwoPi * static_cast<double>(k) / static_cast<double>(r.q);
  return {std::cos(angle), std::sin(angle)};
}

Root nearest_root(Complex z, std::size_t max_order) {
  Root best{0, 1};
  double best_dist = std::abs(z - Complex(1.0, 0.0));
  const double angle = std::arg(z);
  for (long q = 2; q <= static_cast<long>(std::max<std::size_t>(max_order, 1)); ++q) {
    const long k = std::lround(angle * static_cast<double>(q) / kTwoPi);
    const Root cand{((k % q) + q) % q, q};
    const double dist = std::abs(z - exact_root(cand));
    // smaller orders win near-ties
    if (dist < best_dist - 1e-9) {
      best = cand;
      best_dist = dist;
    }
  }
  const long g = std::gcd(best.k, best.q);
  if (g > 1) best = {best.k / g, best.q / g};
  return best;
}

double angle_of(Root r) { return static_cast<double>(r.k) / static_cast<double>(r.q); }

// Columns spanning the null space of `a`, assumed to have dimension m.
CMatrix null_space(const CMatrix& a, Eigen::Index m) {
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Eigen::Index n = a.cols();
  if (sv(n - m) > kNullTol * std::max(1.0, sv(0)))
    throw NumericalDegeneracy("peripheral eigenvalue is not semisimple (geometric multiplicity too small)");
  return svd.matrixV().rightCols(m);
}

CMatrix power(const CMatrix& base, unsigned n) {
  CMatrix result = CMatrix::Identity(base.rows(), base.cols());
  CMatrix b = base;
  while (n > 0) {
    if (n & 1u) result = result * b;
    n >>= 1u;
    if (n > 0) b = b * b;
  }
  return result;
}

}  // namespace

Complex snap_to_root_of_unity(Complex z, std::size_t max_order) {
  return exact_root(nearest_root(z, max_order));
}

std::size_t SpectralSplit::unit_index() const {
  for (std::size_t i = 0; i < peripheral_eigenvalues.size(); ++i)
    if (peripheral_eigenvalues[i] == Complex(1.0, 0.0)) return i;
  throw NumericalDegeneracy("lambda = 1 missing from the peripheral spectrum");
}

Matrix SpectralSplit::unit_projection() const {
  const CMatrix& t = projections.at(unit_index());
  if (t.imag().cwiseAbs().maxCoeff() > kImagResidueTol)
    throw NumericalDegeneracy("unit projection has a non-negligible imaginary part");
  return t.real();
}

SpectralSplit compute_split(const MarkovKernel& kernel, double peripheral_tol) {
  if (!(peripheral_tol > 0.0 && peripheral_tol < 0.5))
    throw InvalidInput("peripheral tolerance must lie in (0, 0.5)");
  const auto n = static_cast<Eigen::Index>(kernel.size());
  const Matrix& p = kernel.matrix();

  Eigen::EigenSolver<Matrix> solver(p, false);
  if (solver.info() != Eigen::Success) throw NumericalDegeneracy("eigenvalue computation failed");
  const Eigen::VectorXcd eigenvalues = solver.eigenvalues();

  struct Group {
    Root root;
    std::size_t count;
  };
  std::vector<Group> groups;
  double decay_rate = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex z = eigenvalues(i);
    if (std::abs(z) < 1.0 - peripheral_tol) {
      decay_rate = std::max(decay_rate, std::abs(z));
      continue;
    }
    const Root r = nearest_root(z, kernel.size());
    if (std::abs(z - exact_root(r)) > kSnapTol)
      throw NumericalDegeneracy("peripheral eigenvalue is not close to a root of unity");
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const Group& g) { return g.root.k == r.k && g.root.q == r.q; });
    if (it == groups.end())
      groups.push_back({r, 1});
    else
      ++it->count;
  }
  std::sort(groups.begin(), groups.end(),
            [](const Group& a, const Group& b) { return angle_of(a.root) < angle_of(b.root); });
  if (groups.empty() || groups.front().root.k != 0)
    throw NumericalDegeneracy("lambda = 1 missing from the peripheral spectrum");

  SpectralSplit split{kernel, {}, {}, {}, CMatrix(p.cast<Complex>()), decay_rate, 0.0};
  const CMatrix pc = p.cast<Complex>();
  const CMatrix id = CMatrix::Identity(n, n);
  for (const auto& g : groups) {
    const Complex lambda = exact_root(g.root);
    const auto m = static_cast<Eigen::Index>(g.count);
    const CMatrix right = null_space(pc - lambda * id, m);
    const CMatrix left = null_space(pc.transpose() - lambda * id, m);
    const CMatrix gram = left.transpose() * right;
    Eigen::FullPivLU<CMatrix> lu(gram);
    if (!lu.isInvertible() || lu.rcond() < 1e-12)
      throw NumericalDegeneracy("left and right eigenspaces are not in duality");
    CMatrix projection = right * lu.solve(CMatrix(left.transpose()));
    split.residual -= lambda * projection;
    split.peripheral_eigenvalues.push_back(lambda);
    split.multiplicities.push_back(g.count);
    split.projections.push_back(std::move(projection));
  }

  CMatrix s_power = split.residual;
  double m_const = 0.0;
  for (unsigned k = 1; k <= kDecaySamples; ++k) {
    const double norm = operator_norm(s_power);
    m_const = std::max(m_const, decay_rate > 0.0 ? norm / std::pow(decay_rate, k) : norm);
    s_power = s_power * split.residual;
  }
  split.decay_constant = m_const;
  return split;
}

CMatrix reconstruct_power(const SpectralSplit& split, unsigned n) {
  CMatrix out = power(split.residual, n);
  for (std::size_t i = 0; i < split.peripheral_count(); ++i)
    out += std::pow(split.peripheral_eigenvalues[i], static_cast<double>(n)) * split.projections[i];
  return out;
}

CMatrix cesaro_projection(const MarkovKernel& kernel, Complex lambda, unsigned n) {
  if (n == 0) throw InvalidInput("cesaro_projection needs n >= 1");
  if (std::abs(std::abs(lambda) - 1.0) > 1e-9) throw InvalidInput("lambda must lie on the unit circle");
  const Matrix& p = kernel.matrix();
  const Complex inv = 1.0 / lambda;
  Matrix pw = p;
  Complex weight = inv;
  CMatrix sum = CMatrix::Zero(p.rows(), p.cols());
  for (unsigned i = 1; i <= n; ++i) {
    sum += weight * pw.cast<Complex>();
    if (i < n) {
      pw = pw * p;
      weight *= inv;
    }
  }
  return sum / static_cast<double>(n);
}

double DecayProfile::log_slope(unsigned n_lo, unsigned n_hi) const {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (const auto& [k, norm] : norms) {
    if (k < n_lo || k > n_hi || !(norm > 0.0)) continue;
    const double x = k;
    const double y = std::log(norm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  const double c = static_cast<double>(count);
  return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

DecayProfile residual_decay_profile(const SpectralSplit& split, unsigned n_max) {
  if (n_max < 2) throw InvalidInput("residual_decay_profile needs n_max >= 2");
  DecayProfile profile;
  profile.decay_rate = split.decay_rate;
  CMatrix s_power = split.residual;
  for (unsigned k = 1; k <= n_max; ++k) {
    const double norm = operator_norm(s_power);
    profile.norms.emplace_back(k, norm);
    const double scaled = split.decay_rate > 0.0 ? norm / std::pow(split.decay_rate, k) : norm;
    profile.fitted_constant = std::max(profile.fitted_constant, scaled);
    if (k < n_max) s_power = s_power * split.residual;
  }
  return profile;
}

}  // namespace ergodic
