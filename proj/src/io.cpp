#include "ergodic/io.hpp"

#include "ergodic/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace ergodic::io {

namespace {

const json& field(const json& j, const char* name) {
  if (!j.is_object()) throw InvalidInput("expected a JSON object");
  auto it = j.find(name);
  if (it == j.end()) throw InvalidInput(std::string("missing field '") + name + "'");
  return *it;
}

double number(const json& v) {
  if (!v.is_number()) throw InvalidInput("expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw InvalidInput("non-finite number");
  return d;
}

std::vector<std::string> strings(const json& v, const char* what) {
  if (!v.is_array()) throw InvalidInput(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) throw InvalidInput(std::string(what) + " must be an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

Vector vector_of(const json& v, const char* what) {
  if (!v.is_array()) throw InvalidInput(std::string(what) + " must be an array");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = number(v[i]);
  return out;
}

Matrix matrix_of(const json& v, const char* what) {
  if (!v.is_array() || v.empty()) throw InvalidInput(std::string(what) + " must be a nonempty array of rows");
  const std::size_t cols = v.front().is_array() ? v.front().size() : 0;
  Matrix out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < v.size(); ++r) {
    if (!v[r].is_array() || v[r].size() != cols) throw InvalidInput(std::string(what) + " is ragged");
    for (std::size_t c = 0; c < cols; ++c)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number(v[r][c]);
  }
  return out;
}

json rows_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json complex_rows_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector weights_on(const json& j, const StateSpace& space, const char* key) {
  const auto labels = strings(field(j, "states"), "states");
  const Vector w = vector_of(field(j, key), key);
  if (static_cast<std::size_t>(w.size()) != labels.size()) throw InvalidInput("states and weights differ in length");
  if (labels.size() != space.size()) throw InvalidInput("measure does not cover the kernel's states");
  Vector out = Vector::Zero(w.size());
  std::vector<bool> seen(space.size(), false);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::size_t at = space.index_of(labels[i]);
    if (seen[at]) throw InvalidInput("duplicate state '" + labels[i] + "'");
    seen[at] = true;
    out(static_cast<Eigen::Index>(at)) = w(static_cast<Eigen::Index>(i));
  }
  return out;
}

}  // namespace

MarkovKernel kernel_from_json(const json& j) {
  StateSpace space(strings(field(j, "states"), "states"));
  Matrix rows = matrix_of(field(j, "rows"), "rows");
  return MarkovKernel(std::move(space), std::move(rows), true);
}

json to_json(const MarkovKernel& kernel) {
  return json{{"states", kernel.space().labels()}, {"rows", rows_json(kernel.matrix())}};
}

SignedMeasure measure_from_json(const json& j, const StateSpace& space) {
  return SignedMeasure(space, weights_on(j, space, "weights"));
}

Observable observable_from_json(const json& j, const StateSpace& space) {
  const char* key = j.is_object() && j.contains("values") ? "values" : "weights";
  return Observable(space, weights_on(j, space, key));
}

json to_json(const SignedMeasure& mu) {
  return json{{"states", mu.space().labels()}, {"weights", vector_json(mu.weights())}};
}

json to_json(const Observable& l) {
  return json{{"states", l.space().labels()}, {"weights", vector_json(l.values())}};
}

EconomyModel model_from_json(const json& j) {
  StateSpace exo(strings(field(j, "exo_states"), "exo_states"));
  StateSpace endo(strings(field(j, "endo_states"), "endo_states"));
  MarkovKernel q(exo, matrix_of(field(j, "q"), "q"), true);
  const json& law_j = field(j, "law");
  if (!law_j.is_object()) throw InvalidInput("law must be an object");
  std::map<std::string, std::string> law;
  for (auto it = law_j.begin(); it != law_j.end(); ++it) {
    if (!it.value().is_string()) throw InvalidInput("law values must be state labels");
    law[it.key()] = it.value().get<std::string>();
  }
  return EconomyModel::from_labels(std::move(exo), std::move(endo), std::move(q), law);
}

json to_json(const EconomyModel& model) {
  json law = json::object();
  const auto& states = model.state_space();
  for (std::size_t x = 0; x < states.size(); ++x)
    for (std::size_t e = 0; e < model.exo_space().size(); ++e)
      law[states.label(x) + "|" + model.exo_space().label(e)] = states.label(model.law(x, e));
  return json{{"exo_states", model.exo_space().labels()},
              {"endo_states", model.endo_space().labels()},
              {"q", rows_json(model.q().matrix())},
              {"law", std::move(law)}};
}

DensityInput density_from_json(const json& j) {
  DensityInput in{matrix_of(field(j, "density"), "density"), vector_of(field(j, "cell_weights"), "cell_weights"), {}};
  const Vector eps = vector_of(field(j, "eps"), "eps");
  in.eps.assign(eps.data(), eps.data() + eps.size());
  return in;
}

json to_json(const ErgodicDecomposition& decomp) {
  const auto& space = decomp.kernel.space();
  json classes = json::array();
  for (const auto& cls : decomp.classes) classes.push_back(space.labels_of(cls));
  json measures = json::array();
  for (const auto& nu : decomp.invariant_measures) measures.push_back(vector_json(nu.weights()));
  json eigenfunctions = json::array();
  for (const auto& y : decomp.eigenfunctions) eigenfunctions.push_back(vector_json(y.values()));
  return json{{"states", space.labels()},
              {"classes", std::move(classes)},
              {"transient", space.labels_of(decomp.transient)},
              {"invariant_measures", std::move(measures)},
              {"eigenfunctions", std::move(eigenfunctions)},
              {"limit_kernel", rows_json(decomp.limit_kernel.matrix())}};
}

json to_json(const SpectralSplit& split) {
  json eigenvalues = json::array();
  for (const auto& l : split.peripheral_eigenvalues) eigenvalues.push_back({l.real(), l.imag()});
  json projections = json::array();
  for (const auto& t : split.projections) projections.push_back(complex_rows_json(t));
  return json{{"states", split.kernel.space().labels()},
              {"peripheral_eigenvalues", std::move(eigenvalues)},
              {"multiplicities", split.multiplicities},
              {"projections", std::move(projections)},
              {"residual", complex_rows_json(split.residual)},
              {"decay_rate", split.decay_rate},
              {"decay_constant", split.decay_constant}};
}

json to_json(const ConditionReport& report) {
  json witnesses = json::object();
  for (const auto& [name, value] : report.witnesses)
    std::visit([&](const auto& v) { witnesses[name] = v; }, value);
  return json{{"condition", std::string(condition_name(report.condition))},
              {"satisfied", report.satisfied},
              {"witnesses", std::move(witnesses)},
              {"diagnostics", report.diagnostics}};
}

json to_json(const ErgodicityVerdict& verdict) {
  json out{{"satisfied", verdict.satisfied},
           {"theorem2", to_json(verdict.theorem2)},
           {"class_count", verdict.decomposition.class_count()},
           {"minorization_holds", verdict.minorization_holds},
           {"diagnostics", verdict.diagnostics}};
  out["mu_star"] = verdict.mu_star ? to_json(*verdict.mu_star) : json(nullptr);
  out["harris"] = verdict.harris ? to_json(*verdict.harris) : json(nullptr);
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + tmp.string());
    out << contents;
    if (!out) throw InvalidInput("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw InvalidInput("cannot move " + tmp.string() + " into place: " + ec.message());
}

}  // namespace ergodic::io
