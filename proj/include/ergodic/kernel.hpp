#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ergodic {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;

/// Tolerance on row sums for a kernel to count as stochastic.
inline constexpr double kStochasticTol = 1e-12;
/// Rows within this distance of stochastic may be renormalized on request.
inline constexpr double kRenormalizeTol = 1e-9;

/// Ordered set of distinct state labels. Cheap to copy (shared, immutable).
class StateSpace {
 public:
  explicit StateSpace(std::vector<std::string> labels);

  /// Space with labels prefix0, prefix1, ...
  static StateSpace indexed(std::size_t n, std::string_view prefix = "s");

  std::size_t size() const { return data_->labels.size(); }
  const std::vector<std::string>& labels() const { return data_->labels; }
  const std::string& label(std::size_t i) const { return data_->labels.at(i); }

  std::optional<std::size_t> find(std::string_view label) const;
  /// Throws InvalidInput for unknown labels.
  std::size_t index_of(std::string_view label) const;
  std::vector<std::size_t> indices_of(const std::vector<std::string>& labels) const;
  std::vector<std::string> labels_of(const std::vector<std::size_t>& indices) const;

  friend bool operator==(const StateSpace& a, const StateSpace& b) {
    return a.data_ == b.data_ || a.data_->labels == b.data_->labels;
  }

 private:
  struct Data {
    std::vector<std::string> labels;
    std::map<std::string, std::size_t, std::less<>> index;
  };
  std::shared_ptr<const Data> data_;
};

/// Row-stochastic transition matrix over a StateSpace; row i is p(x_i, .).
class MarkovKernel {
 public:
  /// Validates entries and row sums. With `renormalize`, rows within
  /// kRenormalizeTol of stochastic are rescaled and tiny negatives clamped.
  MarkovKernel(StateSpace space, Matrix rows, bool renormalize = false);

  static MarkovKernel identity(StateSpace space);

  const StateSpace& space() const { return space_; }
  const Matrix& matrix() const { return rows_; }
  std::size_t size() const { return space_.size(); }
  double operator()(std::size_t from, std::size_t to) const { return rows_(from, to); }

 private:
  StateSpace space_;
  Matrix rows_;
};

/// Real weights over a space. Variation norm = sum of absolute weights.
class SignedMeasure {
 public:
  SignedMeasure(StateSpace space, Vector weights);

  static SignedMeasure point_mass(StateSpace space, std::size_t at);

  const StateSpace& space() const { return space_; }
  const Vector& weights() const { return weights_; }
  double operator()(std::size_t i) const { return weights_(i); }

  double total_mass() const { return weights_.sum(); }
  double variation_norm() const { return weights_.cwiseAbs().sum(); }
  bool is_probability(double tol = kStochasticTol) const;
  /// Mass of a subset given by indices.
  double mass(const std::vector<std::size_t>& subset) const;

 private:
  StateSpace space_;
  Vector weights_;
};

/// Bounded function on states, sup-norm.
class Observable {
 public:
  Observable(StateSpace space, Vector values);

  static Observable constant(StateSpace space, double c);
  static Observable indicator(StateSpace space, const std::vector<std::size_t>& subset);

  const StateSpace& space() const { return space_; }
  const Vector& values() const { return values_; }
  double operator()(std::size_t i) const { return values_(i); }
  double sup_norm() const { return values_.cwiseAbs().maxCoeff(); }

 private:
  StateSpace space_;
  Vector values_;
};

enum class CesaroStart {
  kFirstPower,  ///< (1/n) sum_{i=1..n} P^i
  kIdentity,    ///< (1/n) sum_{i=0..n-1} P^i
};

/// (T mu)(y) = sum_x mu(x) p(x, y).
SignedMeasure apply_measure(const MarkovKernel& kernel, const SignedMeasure& mu);
/// (T* l)(x) = sum_t p(x, t) l(t).
Observable apply_observable(const MarkovKernel& kernel, const Observable& l);
/// p^(n); n = 0 gives the identity kernel.
MarkovKernel n_step(const MarkovKernel& kernel, unsigned n);
Matrix cesaro_average(const MarkovKernel& kernel, unsigned n, CesaroStart start);
/// |<mu, T* l> - <T mu, l>|
double duality_gap(const MarkovKernel& kernel, const SignedMeasure& mu, const Observable& l);
/// max_x sum_y |a(x,y) - b(x,y)|, the induced operator-norm distance.
double kernel_distance(const MarkovKernel& a, const MarkovKernel& b);

/// Max absolute row sum (operator norm on measures acting from the left).
double operator_norm(const Matrix& m);
double operator_norm(const CMatrix& m);
double pairing(const SignedMeasure& mu, const Observable& l);
/// Sum of |a - b| over states.
double variation_distance(const Vector& a, const Vector& b);

void require_same_space(const StateSpace& a, const StateSpace& b, std::string_view what);

}  // namespace ergodic
