#pragma once

#include "ergodic/kernel.hpp"

#include <complex>
#include <utility>
#include <vector>

namespace ergodic {

using Complex = std::complex<double>;

inline constexpr double kDefaultPeripheralTol = 1e-8;

/// p^(n) = sum_i lambda_i^n T_i + S^n, with T_i the spectral projection onto the
/// eigenspace of the peripheral eigenvalue lambda_i and S the geometrically
/// decaying remainder.
struct SpectralSplit {
  MarkovKernel kernel;
  std::vector<Complex> peripheral_eigenvalues;
  std::vector<std::size_t> multiplicities;
  std::vector<CMatrix> projections;
  CMatrix residual;
  /// Largest non-peripheral eigenvalue modulus (0 when there is none).
  double decay_rate = 0.0;
  /// M with ||S^n|| <= M decay_rate^n on the sampled range.
  double decay_constant = 0.0;

  std::size_t peripheral_count() const { return peripheral_eigenvalues.size(); }
  /// Index of lambda = 1 in peripheral_eigenvalues.
  std::size_t unit_index() const;
  /// Real part of the lambda = 1 projection (imaginary residue checked).
  Matrix unit_projection() const;
};

/// Throws NumericalDegeneracy if a peripheral eigenvalue is not semisimple.
SpectralSplit compute_split(const MarkovKernel& kernel, double peripheral_tol = kDefaultPeripheralTol);

/// S^n + sum_i lambda_i^n T_i
CMatrix reconstruct_power(const SpectralSplit& split, unsigned n);

/// (1/n) sum_{i=1..n} lambda^{-i} P^i, the slow oracle for the lambda projection.
CMatrix cesaro_projection(const MarkovKernel& kernel, Complex lambda, unsigned n);

struct DecayProfile {
  /// (n, ||S^n||) for n = 1..n_max
  std::vector<std::pair<unsigned, double>> norms;
  double decay_rate = 0.0;
  double fitted_constant = 0.0;

  /// Least-squares slope of log ||S^n|| over n in [n_lo, n_hi]; points with
  /// zero norm are skipped. Returns NaN with fewer than two usable points.
  double log_slope(unsigned n_lo, unsigned n_hi) const;
};

DecayProfile residual_decay_profile(const SpectralSplit& split, unsigned n_max);

/// Nearest root of unity of order <= max_order to z.
Complex snap_to_root_of_unity(Complex z, std::size_t max_order);

}  // namespace ergodic
