// Copyright 2026 The qergo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qergo/basis.hpp"
#include "qergo/channels.hpp"
#include "qergo/classical.hpp"
#include "qergo/ergodicity.hpp"
#include "qergo/errors.hpp"
#include "qergo/expectation.hpp"
#include "qergo/experiment.hpp"
#include "qergo/operator.hpp"
#include "qergo/sources.hpp"

namespace py = pybind11;
using namespace qergo;

namespace {

Operator as_operator(const Matrix& m, int d) {
  int sites = 0;
  Eigen::Index dim = 1;
  while (dim < m.rows()) {
    dim *= d;
    ++sites;
  }
  if (dim != m.rows() || m.rows() != m.cols()) {
    throw ShapeError("matrix of size " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                     " is not a square power of " + std::to_string(d));
  }
  return Operator(d, sites, m);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dense and transfer-matrix tools for quantum stochastic sources.";
  m.attr("__version__") = toolkit_version();

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
  auto validation = py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ParameterError>(m, "ParameterError", validation.ptr());
  py::register_exception<InvalidAlphabetError>(m, "InvalidAlphabetError", validation.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", validation.ptr());
  py::register_exception<AlignmentError>(m, "AlignmentError", base.ptr());
  py::register_exception<UnsupportedBackendError>(m, "UnsupportedBackendError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  // operators
  py::class_<Operator>(m, "Operator")
      .def(py::init<int, int, Matrix>(), py::arg("d"), py::arg("sites"), py::arg("matrix"))
      .def_static("from_matrix", &as_operator, py::arg("matrix"), py::arg("d") = 2)
      .def_static("identity", &Operator::identity, py::arg("d"), py::arg("sites"))
      .def_property_readonly("d", &Operator::d)
      .def_property_readonly("sites", &Operator::sites)
      .def_property_readonly("dim", &Operator::dim)
      .def_property_readonly("matrix", &Operator::matrix)
      .def("adjoint", &Operator::adjoint)
      .def("is_hermitian", &Operator::is_hermitian, py::arg("tol") = 1e-10)
      .def("__repr__", [](const Operator& o) {
        return "<Operator d=" + std::to_string(o.d()) + " sites=" + std::to_string(o.sites()) + ">";
      });

  py::class_<DensityReport>(m, "DensityReport")
      .def_readonly("hermiticity_deviation", &DensityReport::hermiticity_deviation)
      .def_readonly("min_eigenvalue", &DensityReport::min_eigenvalue)
      .def_readonly("trace_deviation", &DensityReport::trace_deviation)
      .def_readonly("passed", &DensityReport::passed)
      .def("summary", &DensityReport::summary);

  py::class_<DensityOperator>(m, "DensityOperator")
      .def(py::init([](const Operator& op) { return DensityOperator(op); }), py::arg("op"))
      .def(py::init([](const Matrix& mat, int d) { return DensityOperator(as_operator(mat, d)); }), py::arg("matrix"),
           py::arg("d") = 2)
      .def_property_readonly("op", &DensityOperator::op)
      .def_property_readonly("matrix", &DensityOperator::matrix)
      .def_property_readonly("d", &DensityOperator::d)
      .def_property_readonly("sites", &DensityOperator::sites)
      .def_property_readonly("dim", &DensityOperator::dim);

  m.def("validate_density", [](const Operator& op) { return validate_density(op); }, py::arg("op"));
  m.def("tensor_product", py::overload_cast<const Operator&, const Operator&>(&tensor_product));
  m.def("tensor_product", py::overload_cast<const DensityOperator&, const DensityOperator&>(&tensor_product));
  m.def("tensor_power", py::overload_cast<const Operator&, int>(&tensor_power));
  m.def("tensor_power", py::overload_cast<const DensityOperator&, int>(&tensor_power));
  m.def("trace_pairing", &trace_pairing, py::arg("rho"), py::arg("a"));
  m.def("embed_observable", &embed_observable, py::arg("a"), py::arg("left_pad"), py::arg("right_pad"));
  m.def(
      "random_observable",
      [](int d, int sites, std::uint64_t seed, double scale) { return random_observable(SiteConfig(d), sites, seed, scale); },
      py::arg("d"), py::arg("sites"), py::arg("seed"), py::arg("scale") = 1.0);
  m.def(
      "random_density", [](int d, int sites, std::uint64_t seed) { return random_density(SiteConfig(d), sites, seed); },
      py::arg("d"), py::arg("sites"), py::arg("seed"));
  m.def("random_unitary", &random_unitary, py::arg("d"), py::arg("seed"));
  m.def("dense_max_dim", &dense_max_dim);
  m.def("set_dense_max_dim", &set_dense_max_dim, py::arg("max_dim"));
  m.def("pauli_x", &ops::pauli_x);
  m.def("pauli_y", &ops::pauli_y);
  m.def("pauli_z", &ops::pauli_z);
  m.def("basis_projector", &ops::basis_projector, py::arg("d"), py::arg("k"));

  // bases
  py::class_<AlphabetSpec>(m, "AlphabetSpec")
      .def(py::init<int, std::vector<Vector>>(), py::arg("d"), py::arg("vectors"))
      .def_static("computational", &AlphabetSpec::computational, py::arg("d"))
      .def_property_readonly("d", &AlphabetSpec::d)
      .def_property_readonly("size", &AlphabetSpec::size)
      .def_property_readonly("vectors", &AlphabetSpec::vectors)
      .def("is_orthonormal", &AlphabetSpec::is_orthonormal, py::arg("tol") = 1e-12);

  py::class_<PinchingBasis>(m, "PinchingBasis")
      .def(py::init<Matrix>(), py::arg("columns"))
      .def_static("computational", &PinchingBasis::computational, py::arg("d"))
      .def_property_readonly("d", &PinchingBasis::d)
      .def_property_readonly("unitary", &PinchingBasis::unitary);

  // channels
  py::class_<KrausChannel>(m, "KrausChannel")
      .def(py::init<int, std::vector<Matrix>, int, std::string>(), py::arg("d"), py::arg("kraus"),
           py::arg("block_size") = 1, py::arg("name") = "")
      .def_property_readonly("d", &KrausChannel::d)
      .def_property_readonly("block_size", &KrausChannel::block_size)
      .def_property_readonly("kraus", &KrausChannel::kraus)
      .def_property_readonly("name", &KrausChannel::name)
      .def("__len__", &KrausChannel::size);

  py::class_<KrausReport>(m, "KrausReport")
      .def_readonly("completeness_deviation", &KrausReport::completeness_deviation)
      .def_readonly("passed", &KrausReport::passed);

  m.def("validate_kraus", &validate_kraus, py::arg("channel"), py::arg("tol") = kKrausTolerance);
  m.def("apply_channel", &apply_channel, py::arg("channel"), py::arg("rho"), py::arg("copies"));
  m.def("apply_channel_map", &apply_channel_map, py::arg("channel"), py::arg("x"), py::arg("copies"));
  m.def("dual_channel", &dual_channel, py::arg("channel"), py::arg("a"), py::arg("copies"));
  m.def("identity_channel", &identity_channel, py::arg("d"));
  m.def("depolarizing_channel", &depolarizing_channel, py::arg("d"), py::arg("p"));
  m.def("amplitude_damping_channel", &amplitude_damping_channel, py::arg("gamma"));
  m.def("phase_damping_channel", &phase_damping_channel, py::arg("lam"));
  m.def("unitary_channel", &unitary_channel, py::arg("u"));
  m.def("embedding_channel", &embedding_channel, py::arg("alphabet"), py::arg("basis"));
  m.def("block_channel", &block_channel, py::arg("channel"), py::arg("k"));

  // classical processes
  py::class_<ClassicalProcess>(m, "ClassicalProcess")
      .def_static("iid", &ClassicalProcess::iid, py::arg("weights"))
      .def_static("markov", &ClassicalProcess::markov, py::arg("transition"), py::arg("initial") = py::none())
      .def_static("mixture", &ClassicalProcess::mixture, py::arg("components"), py::arg("weights"))
      .def_property_readonly("kind", [](const ClassicalProcess& p) { return to_string(p.kind()); })
      .def_property_readonly("alphabet_size", &ClassicalProcess::alphabet_size)
      .def("is_stationary", &ClassicalProcess::is_stationary);

  py::class_<Classification>(m, "Classification")
      .def_readonly("stationary", &Classification::stationary)
      .def_readonly("ergodic", &Classification::ergodic)
      .def_readonly("weakly_mixing", &Classification::weakly_mixing)
      .def_readonly("strongly_mixing", &Classification::strongly_mixing)
      .def_readonly("note", &Classification::note);

  m.def("classify_process", &classify_process, py::arg("process"));
  m.def(
      "stationary_distribution", [](const RealMatrix& t) { return stationary_distribution(t).distribution; },
      py::arg("transition"));
  m.def(
      "marginal_probability",
      [](const ClassicalProcess& p, const std::vector<int>& word) { return marginal_probability(p, word); },
      py::arg("process"), py::arg("word"));
  m.def(
      "classical_correlation",
      [](const ClassicalProcess& p, const std::vector<double>& f, const std::vector<double>& g, int mm, int gap) {
        return classical_correlation(p, f, g, mm, gap);
      },
      py::arg("process"), py::arg("f"), py::arg("g"), py::arg("m"), py::arg("gap"));

  // conditional expectations
  m.def("conditional_expectation", &conditional_expectation, py::arg("a"), py::arg("basis"));
  m.def(
      "state_to_measure", [](const DensityOperator& rho, const PinchingBasis& b) {
        return state_to_measure(rho, b).probabilities;
      },
      py::arg("rho"), py::arg("basis"));

  // sources
  py::class_<QuantumSource>(m, "QuantumSource")
      .def_static("iid", &QuantumSource::iid, py::arg("sigma"))
      .def_static("classically_correlated", &construct_classically_correlated, py::arg("process"),
                  py::arg("alphabet"))
      .def_static("channel_transformed", &channel_transform_source, py::arg("base"), py::arg("channel"))
      .def_property_readonly("kind", [](const QuantumSource& s) { return to_string(s.kind()); })
      .def_property_readonly("d", &QuantumSource::d)
      .def_property_readonly("alignment", &QuantumSource::alignment)
      .def("describe", &QuantumSource::describe)
      .def("density", &source_density, py::arg("m"))
      .def("__repr__", &QuantumSource::describe);

  m.def(
      "source_correlation",
      [](const QuantumSource& s, const Operator& a, const Operator& b, int gap, const std::string& backend) {
        return source_correlation(s, a, b, gap, backend_from_string(backend));
      },
      py::arg("source"), py::arg("a"), py::arg("b"), py::arg("gap"), py::arg("backend") = "transfer");
  m.def(
      "correlation_sequence",
      [](const QuantumSource& s, const Operator& a, const Operator& b, int n_max, const std::string& backend) {
        return correlation_sequence(s, a, b, n_max, backend_from_string(backend));
      },
      py::arg("source"), py::arg("a"), py::arg("b"), py::arg("n_max"), py::arg("backend") = "transfer");

  py::class_<CheckReport>(m, "CheckReport")
      .def_readonly("check", &CheckReport::check)
      .def_readonly("m", &CheckReport::m)
      .def_readonly("extension", &CheckReport::extension)
      .def_readonly("shift_unit", &CheckReport::shift_unit)
      .def_readonly("trials", &CheckReport::trials)
      .def_readonly("max_deviation", &CheckReport::max_deviation)
      .def_readonly("passed", &CheckReport::passed);

  m.def("check_consistency", &check_consistency, py::arg("source"), py::arg("m"), py::arg("extension"),
        py::arg("trials"), py::arg("seed"), py::arg("tol") = kCheckTolerance);
  m.def("check_stationarity", &check_stationarity, py::arg("source"), py::arg("m"), py::arg("extension"),
        py::arg("trials"), py::arg("seed"), py::arg("shift_unit") = 1, py::arg("tol") = kCheckTolerance);

  // ergodicity
  py::class_<VerdictPolicy>(m, "VerdictPolicy")
      .def(py::init<>())
      .def_static("for_backend", [](const std::string& b) { return VerdictPolicy::for_backend(backend_from_string(b)); })
      .def_readwrite("epsilon", &VerdictPolicy::epsilon)
      .def_readwrite("window_fraction", &VerdictPolicy::window_fraction);

  py::class_<ErgodicityReport>(m, "ErgodicityReport")
      .def_property_readonly("criterion", [](const ErgodicityReport& r) { return to_string(r.criterion); })
      .def_property_readonly("verdict", [](const ErgodicityReport& r) { return to_string(r.verdict); })
      .def_readonly("sequence", &ErgodicityReport::sequence)
      .def_readonly("target", &ErgodicityReport::target)
      .def_readonly("final_statistic", &ErgodicityReport::final_statistic)
      .def_readonly("window_max", &ErgodicityReport::window_max)
      .def_readonly("fitted_decay_rate", &ErgodicityReport::fitted_decay_rate);

  py::class_<PairAnalysis>(m, "PairAnalysis")
      .def_readonly("correlations", &PairAnalysis::correlations)
      .def_readonly("target", &PairAnalysis::target)
      .def_readonly("cesaro_means", &PairAnalysis::cesaro_means)
      .def_property_readonly("ergodic", [](const PairAnalysis& p) { return p.report(Criterion::ergodic_mean); })
      .def_property_readonly("weak", [](const PairAnalysis& p) { return p.report(Criterion::weak_mixing); })
      .def_property_readonly("strong", [](const PairAnalysis& p) { return p.report(Criterion::strong_mixing); });

  m.def(
      "analyze_pair",
      [](const QuantumSource& s, const Operator& a, const Operator& b, int n_max, const std::string& backend,
         std::optional<VerdictPolicy> policy) {
        const Backend be = backend_from_string(backend);
        return analyze_pair(s, a, b, n_max, be, policy.value_or(VerdictPolicy::for_backend(be)));
      },
      py::arg("source"), py::arg("a"), py::arg("b"), py::arg("n_max"), py::arg("backend") = "transfer",
      py::arg("policy") = py::none());

  m.def(
      "sweep",
      [](const QuantumSource& s, int mm, int observable_count, std::uint64_t seed, int n_max, const std::string& backend,
         int threads) {
        const Backend be = backend_from_string(backend);
        SweepReport r;
        {
          py::gil_scoped_release release;
          r = sweep_report(s, mm, observable_count, seed, n_max, be, VerdictPolicy::for_backend(be), threads);
        }
        py::dict out;
        out["ergodic"] = to_string(r.aggregate.ergodic);
        out["weak"] = to_string(r.aggregate.weak);
        out["strong"] = to_string(r.aggregate.strong);
        out["implications_consistent"] = r.implications_consistent;
        py::list pairs;
        for (const PairResult& p : r.pairs) {
          pairs.append(py::make_tuple(p.label, to_string(p.verdicts.ergodic), to_string(p.verdicts.weak),
                                      to_string(p.verdicts.strong)));
        }
        out["pairs"] = pairs;
        return out;
      },
      py::arg("source"), py::arg("m"), py::arg("observable_count"), py::arg("seed"), py::arg("n_max"),
      py::arg("backend") = "transfer", py::arg("threads") = 1);

  // experiments
  m.def(
      "run_config",
      [](const std::string& text, int threads) {
        ExperimentConfig cfg = parse_config(text);
        cfg.threads = threads;
        RunReport r;
        {
          py::gil_scoped_release release;
          r = run_experiment(cfg);
        }
        return py::make_tuple(r.passed(), render_report(r, ReportFormat::structured));
      },
      py::arg("config_json"), py::arg("threads") = 1,
      "Runs an experiment config (JSON text); returns (passed, report_json).");
}
