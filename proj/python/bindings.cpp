#include "ergodic/conditions.hpp"
#include "ergodic/decomposition.hpp"
#include "ergodic/economy.hpp"
#include "ergodic/errors.hpp"
#include "ergodic/io.hpp"
#include "ergodic/simulation.hpp"
#include "ergodic/spectral.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ergodic;

namespace {

std::vector<std::vector<std::string>> class_labels(const ErgodicDecomposition& d) {
  std::vector<std::vector<std::string>> out;
  for (const auto& cls : d.classes) out.push_back(d.kernel.space().labels_of(cls));
  return out;
}

SignedMeasure measure_of(const MarkovKernel& k, const Vector& weights) { return SignedMeasure(k.space(), weights); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite-state Markov kernels: ergodic decomposition, spectral split, ergodicity conditions.";

  auto invalid = py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<NonReturningSubset>(m, "NonReturningSubset", invalid.ptr());
  py::register_exception<AmbiguousLimit>(m, "AmbiguousLimit", invalid.ptr());
  py::register_exception<NumericalDegeneracy>(m, "NumericalDegeneracy", PyExc_RuntimeError);

  py::class_<MarkovKernel>(m, "MarkovKernel")
      .def(py::init([](std::vector<std::string> labels, const Matrix& rows, bool renormalize) {
             return MarkovKernel(StateSpace(std::move(labels)), rows, renormalize);
           }),
           py::arg("labels"), py::arg("rows"), py::arg("renormalize") = false)
      .def_static("indexed", [](const Matrix& rows) {
        return MarkovKernel(StateSpace::indexed(static_cast<std::size_t>(rows.rows())), rows);
      })
      .def_property_readonly("labels", [](const MarkovKernel& k) { return k.space().labels(); })
      .def_property_readonly("matrix", &MarkovKernel::matrix)
      .def("__len__", &MarkovKernel::size)
      .def("index_of", [](const MarkovKernel& k, const std::string& label) { return k.space().index_of(label); })
      .def("n_step", &n_step)
      .def(
          "cesaro_average",
          [](const MarkovKernel& k, unsigned n, bool from_identity) {
            return cesaro_average(k, n, from_identity ? CesaroStart::kIdentity : CesaroStart::kFirstPower);
          },
          py::arg("n"), py::arg("from_identity") = false)
      .def("push_measure", [](const MarkovKernel& k, const Vector& w) { return apply_measure(k, measure_of(k, w)).weights(); })
      .def("apply_observable",
           [](const MarkovKernel& k, const Vector& v) { return apply_observable(k, Observable(k.space(), v)).values(); });

  m.def("kernel_distance", &kernel_distance);

  py::class_<SpectralSplit>(m, "SpectralSplit")
      .def_readonly("peripheral_eigenvalues", &SpectralSplit::peripheral_eigenvalues)
      .def_readonly("multiplicities", &SpectralSplit::multiplicities)
      .def_readonly("projections", &SpectralSplit::projections)
      .def_readonly("residual", &SpectralSplit::residual)
      .def_readonly("decay_rate", &SpectralSplit::decay_rate)
      .def_readonly("decay_constant", &SpectralSplit::decay_constant)
      .def("unit_projection", &SpectralSplit::unit_projection)
      .def("reconstruct_power", &reconstruct_power)
      .def("residual_norms", [](const SpectralSplit& s, unsigned n_max) { return residual_decay_profile(s, n_max).norms; });

  m.def("compute_split", &compute_split, py::arg("kernel"), py::arg("peripheral_tol") = kDefaultPeripheralTol);

  py::class_<ErgodicDecomposition>(m, "ErgodicDecomposition")
      .def_readonly("classes", &ErgodicDecomposition::classes)
      .def_readonly("transient", &ErgodicDecomposition::transient)
      .def_property_readonly("class_labels", &class_labels)
      .def_property_readonly("transient_labels",
                             [](const ErgodicDecomposition& d) { return d.kernel.space().labels_of(d.transient); })
      .def_property_readonly("invariant_measures",
                             [](const ErgodicDecomposition& d) {
                               std::vector<Vector> out;
                               for (const auto& mu : d.invariant_measures) out.push_back(mu.weights());
                               return out;
                             })
      .def_property_readonly("eigenfunctions",
                             [](const ErgodicDecomposition& d) {
                               std::vector<Vector> out;
                               for (const auto& y : d.eigenfunctions) out.push_back(y.values());
                               return out;
                             })
      .def_property_readonly("limit_kernel", [](const ErgodicDecomposition& d) { return d.limit_kernel.matrix(); })
      .def("__len__", &ErgodicDecomposition::class_count)
      .def("limit_kernel_error", &limit_kernel_error)
      .def("limit_coefficients",
           [](const ErgodicDecomposition& d, const Vector& w) { return limit_coefficients(d, measure_of(d.kernel, w)); })
      .def("limit_of_initial_measure", [](const ErgodicDecomposition& d, const Vector& w) {
        return limit_of_initial_measure(d, measure_of(d.kernel, w)).weights();
      });

  m.def("decompose", &decompose);

  py::class_<ConditionReport>(m, "ConditionReport")
      .def_property_readonly("condition", [](const ConditionReport& r) { return std::string(condition_name(r.condition)); })
      .def_readonly("satisfied", &ConditionReport::satisfied)
      .def_readonly("witnesses", &ConditionReport::witnesses)
      .def_readonly("diagnostics", &ConditionReport::diagnostics)
      .def("__bool__", [](const ConditionReport& r) { return r.satisfied; });

  m.def("check_doeblin", &check_doeblin);
  m.def("check_harris",
        py::overload_cast<const MarkovKernel&, const std::vector<std::string>&, unsigned>(&check_harris),
        py::arg("kernel"), py::arg("small_set"), py::arg("k_max") = 0u);
  m.def("check_qscc_witness", &check_qscc_witness, py::arg("kernel"), py::arg("x_star"), py::arg("eps"), py::arg("n"));
  m.def("check_uniform_integrability", &check_uniform_integrability, py::arg("density"), py::arg("cell_weights"),
        py::arg("eps_grid"));
  m.def("replay_witnesses", &replay_witnesses, py::arg("report"), py::arg("kernel"), py::arg("tol") = 1e-12);

  py::class_<EconomyModel>(m, "EconomyModel")
      .def(py::init([](std::vector<std::string> exo, std::vector<std::string> endo, const Matrix& q,
                       const std::map<std::string, std::string>& law) {
             StateSpace e(std::move(exo));
             return EconomyModel::from_labels(e, StateSpace(std::move(endo)), MarkovKernel(e, q), law);
           }),
           py::arg("exo"), py::arg("endo"), py::arg("q"), py::arg("law"))
      .def_property_readonly("labels", [](const EconomyModel& e) { return e.state_space().labels(); })
      .def("induce_kernel", &induce_kernel)
      .def("check_theorem2", &check_theorem2, py::arg("n_max") = 0u)
      .def("verdict", [](const EconomyModel& e, unsigned n_max) {
        const auto v = ergodicity_verdict(e, n_max);
        py::dict out;
        out["satisfied"] = v.satisfied;
        out["theorem2"] = v.theorem2;
        out["class_count"] = v.decomposition.class_count();
        out["minorization_holds"] = v.minorization_holds;
        out["mu_star"] = v.mu_star ? py::cast(v.mu_star->weights()) : py::none();
        out["diagnostics"] = v.diagnostics;
        return out;
      }, py::arg("n_max") = 0u);

  m.def("trace_chain", [](const MarkovKernel& k, const std::vector<std::string>& subset) {
    return trace_chain(k, subset).kernel_k;
  });

  m.def(
      "simulate_path",
      [](const MarkovKernel& k, const std::string& x0, std::size_t n, std::uint64_t seed) {
        return simulate_path(k, k.space().index_of(x0), n, seed).path;
      },
      py::arg("kernel"), py::arg("x0"), py::arg("n"), py::arg("seed"));
  m.def("deterministic_time_average",
        [](const MarkovKernel& k, const Vector& g, const std::string& x, unsigned n) {
          return deterministic_time_average(k, Observable(k.space(), g), k.space().index_of(x), n);
        });

  m.def("kernel_from_json", [](const std::string& text) { return io::kernel_from_json(io::json::parse(text)); });
  m.def("kernel_to_json", [](const MarkovKernel& k) { return io::to_json(k).dump(); });
}
