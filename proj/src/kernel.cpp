#include "ergodic/kernel.hpp"

#include "ergodic/errors.hpp"

#include <cmath>
#include <map>
#include <string>

namespace ergodic {

StateSpace::StateSpace(std::vector<std::string> labels) {
  if (labels.empty()) throw InvalidInput("state space must contain at least one state");
  auto data = std::make_shared<Data>();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty()) throw InvalidInput("empty state label");
    if (!data->index.emplace(labels[i], i).second)
      throw InvalidInput("duplicate state label '" + labels[i] + "'");
  }
  data->labels = std::move(labels);
  data_ = std::move(data);
}

StateSpace StateSpace::indexed(std::size_t n, std::string_view prefix) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(prefix) + std::to_string(i));
  return StateSpace(std::move(labels));
}

std::optional<std::size_t> StateSpace::find(std::string_view label) const {
  auto it = data_->index.find(label);
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

std::size_t StateSpace::index_of(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw InvalidInput("unknown state label '" + std::string(label) + "'");
}

std::vector<std::size_t> StateSpace::indices_of(const std::vector<std::string>& labels) const {
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(index_of(l));
  return out;
}

std::vector<std::string> StateSpace::labels_of(const std::vector<std::size_t>& indices) const {
  std::vector<std::string> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(label(i));
  return out;
}

void require_same_space(const StateSpace& a, const StateSpace& b, std::string_view what) {
  if (!(a == b)) throw InvalidInput(std::string(what) + ": state spaces differ");
}

MarkovKernel::MarkovKernel(StateSpace space, Matrix rows, bool renormalize)
    : space_(std::move(space)), rows_(std::move(rows)) {
  const auto n = static_cast<Eigen::Index>(space_.size());
  if (rows_.rows() != n || rows_.cols() != n)
    throw InvalidInput("kernel must be " + std::to_string(n) + "x" + std::to_string(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double& v = rows_(i, j);
      if (!std::isfinite(v)) throw InvalidInput("kernel entry is not finite");
      if (v < 0.0) {
        if (renormalize && v >= -kRenormalizeTol)
          v = 0.0;
        else
          throw InvalidInput("negative kernel entry in row '" + space_.label(i) + "'");
      }
    }
    const double sum = rows_.row(i).sum();
    const double dev = std::abs(sum - 1.0);
    if (dev > kStochasticTol) {
      if (renormalize && dev <= kRenormalizeTol)
        rows_.row(i) /= sum;
      else
        throw InvalidInput("row '" + space_.label(i) + "' sums to " + std::to_string(sum));
    }
    for (Eigen::Index j = 0; j < n; ++j)
      if (rows_(i, j) > 1.0 + kStochasticTol) throw InvalidInput("kernel entry exceeds 1");
  }
}

MarkovKernel MarkovKernel::identity(StateSpace space) {
  const auto n = static_cast<Eigen::Index>(space.size());
  return MarkovKernel(std::move(space), Matrix::Identity(n, n));
}

SignedMeasure::SignedMeasure(StateSpace space, Vector weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (weights_.size() != static_cast<Eigen::Index>(space_.size()))
    throw InvalidInput("measure length does not match the state space");
  if (!weights_.allFinite()) throw InvalidInput("measure weight is not finite");
}

SignedMeasure SignedMeasure::point_mass(StateSpace space, std::size_t at) {
  Vector w = Vector::Zero(static_cast<Eigen::Index>(space.size()));
  w(static_cast<Eigen::Index>(at)) = 1.0;
  return SignedMeasure(std::move(space), std::move(w));
}

bool SignedMeasure::is_probability(double tol) const {
  return weights_.minCoeff() >= -tol && std::abs(weights_.sum() - 1.0) <= tol;
}

double SignedMeasure::mass(const std::vector<std::size_t>& subset) const {
  double m = 0.0;
  for (auto i : subset) m += weights_(static_cast<Eigen::Index>(i));
  return m;
}

Observable::Observable(StateSpace space, Vector values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != static_cast<Eigen::Index>(space_.size()))
    throw InvalidInput("observable length does not match the state space");
  if (!values_.allFinite()) throw InvalidInput("observable value is not finite");
}

Observable Observable::constant(StateSpace space, double c) {
  const auto n = static_cast<Eigen::Index>(space.size());
  return Observable(std::move(space), Vector::Constant(n, c));
}

Observable Observable::indicator(StateSpace space, const std::vector<std::size_t>& subset) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(space.size()));
  for (auto i : subset) v(static_cast<Eigen::Index>(i)) = 1.0;
  return Observable(std::move(space), std::move(v));
}

SignedMeasure apply_measure(const MarkovKernel& kernel, const SignedMeasure& mu) {
  require_same_space(kernel.space(), mu.space(), "apply_measure");
  Vector out = kernel.matrix().transpose() * mu.weights();
  return SignedMeasure(kernel.space(), std::move(out));
}

Observable apply_observable(const MarkovKernel& kernel, const Observable& l) {
  require_same_space(kernel.space(), l.space(), "apply_observable");
  Vector out = kernel.matrix() * l.values();
  return Observable(kernel.space(), std::move(out));
}

MarkovKernel n_step(const MarkovKernel& kernel, unsigned n) {
  const auto size = static_cast<Eigen::Index>(kernel.size());
  Matrix result = Matrix::Identity(size, size);
  Matrix base = kernel.matrix();
  // binary powering; products of stochastic matrices stay stochastic
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return MarkovKernel(kernel.space(), std::move(result), true);
}

Matrix cesaro_average(const MarkovKernel& kernel, unsigned n, CesaroStart start) {
  if (n == 0) throw InvalidInput("cesaro_average needs n >= 1");
  const auto size = static_cast<Eigen::Index>(kernel.size());
  const Matrix& p = kernel.matrix();
  Matrix power = Matrix::Identity(size, size);
  if (start == CesaroStart::kFirstPower) power = p;
  Matrix sum = Matrix::Zero(size, size);
  for (unsigned i = 0; i < n; ++i) {
    sum += power;
    if (i + 1 < n) power = power * p;
  }
  return sum / static_cast<double>(n);
}

double pairing(const SignedMeasure& mu, const Observable& l) {
  require_same_space(mu.space(), l.space(), "pairing");
  return mu.weights().dot(l.values());
}

double duality_gap(const MarkovKernel& kernel, const SignedMeasure& mu, const Observable& l) {
  return std::abs(pairing(mu, apply_observable(kernel, l)) - pairing(apply_measure(kernel, mu), l));
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double kernel_distance(const MarkovKernel& a, const MarkovKernel& b) {
  require_same_space(a.space(), b.space(), "kernel_distance");
  return operator_norm(Matrix(a.matrix() - b.matrix()));
}

double variation_distance(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().sum(); }

}  // namespace ergodic
