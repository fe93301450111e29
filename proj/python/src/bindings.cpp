#include "dqm/protocol.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace dqm;

namespace {

py::object to_py(const nlohmann::json& j) {
  py::object loads = py::module_::import("json").attr("loads");
  return loads(j.dump());
}

nlohmann::json from_py(const py::object& o) {
  py::object dumps = py::module_::import("json").attr("dumps");
  return nlohmann::json::parse(dumps(o).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_dqm, m) {
  m.doc() = "Deformed spin measurement geometry";

  py::register_exception<ArityError>(m, "ArityError", PyExc_ValueError);
  py::register_exception<SpectralCapExceeded>(m, "SpectralCapExceeded", PyExc_RuntimeError);

  py::enum_<Role>(m, "Role")
      .value("SPIN", Role::Spin)
      .value("STERN_GERLACH", Role::SternGerlach)
      .value("RELATIVE_ORIENTATION", Role::RelativeOrientation);
  py::enum_<Observer>(m, "Observer").value("SINGLE", Observer::Single).value("TWO", Observer::Two);
  py::enum_<Outcome>(m, "Outcome").value("UP", Outcome::Up).value("DOWN", Outcome::Down);

  // qkernel
  m.def("theta_of_n", [](double q, long n) { return theta_of_n(DeformationParameter(q), n); }, py::arg("q"),
        py::arg("n"));
  m.def("n_closest", [](double q, double theta) { return n_closest(DeformationParameter(q), theta); },
        py::arg("q"), py::arg("theta"));
  m.def("f_coefficient", [](double q, double mu, long n) { return f_coefficient(DeformationParameter(q), mu, n); },
        py::arg("q"), py::arg("mu"), py::arg("n"));
  m.def("f_peak_level", [](double q, double mu) { return f_peak_level(DeformationParameter(q), mu); },
        py::arg("q"), py::arg("mu"));
  m.def("mu_of_theta", [](double q, double theta) { return mu_of_theta(DeformationParameter(q), theta); },
        py::arg("q"), py::arg("theta"));

  // states
  py::class_<Truncation>(m, "Truncation")
      .def(py::init([](int n_max, int buffer, bool adaptive) { return Truncation{n_max, buffer, adaptive}; }),
           py::arg("n_max") = 400, py::arg("buffer") = 8, py::arg("adaptive") = false)
      .def_readwrite("n_max", &Truncation::n_max)
      .def_readwrite("buffer", &Truncation::buffer)
      .def_readwrite("adaptive", &Truncation::adaptive);

  py::class_<GeometryState>(m, "GeometryState")
      .def_property_readonly("role", &GeometryState::role)
      .def_property_readonly("q", &GeometryState::q)
      .def_property_readonly("discarded_tail", &GeometryState::discarded_tail)
      .def("to_json", [](const GeometryState& s) { return to_py(to_json(s)); })
      .def_static("from_json", [](const py::object& o) { return geometry_state_from_json(from_py(o)); });

  m.def("rho_state", [](Role r, double q, double chi, Truncation t) { return rho_state(r, DeformationParameter(q), chi, t); },
        py::arg("role"), py::arg("q"), py::arg("chi") = 0.0, py::arg("truncation") = Truncation{});
  m.def("pi_basis_state",
        [](Role r, double q, long n, double phi, double chi, Truncation t) {
          return pi_basis_state(r, DeformationParameter(q), n, phi, chi, t);
        },
        py::arg("role"), py::arg("q"), py::arg("n"), py::arg("phi") = 0.0, py::arg("chi") = 0.0,
        py::arg("truncation") = Truncation{});
  m.def("semiclassical_state",
        [](Role r, double q, double mu, double phi, double chi, Truncation t) {
          return semiclassical_state(r, DeformationParameter(q), mu, phi, chi, t);
        },
        py::arg("role"), py::arg("q"), py::arg("mu"), py::arg("phi") = 0.0, py::arg("chi") = 0.0,
        py::arg("truncation") = Truncation{});
  m.def("direction_state",
        [](Role r, double q, double theta, double omega, Truncation t) {
          return direction_state(r, DeformationParameter(q), theta, omega, t);
        },
        py::arg("role"), py::arg("q"), py::arg("theta"), py::arg("omega") = 0.0,
        py::arg("truncation") = Truncation{});
  m.def("rotation_state",
        [](double q, double theta, double alpha, double gamma, Truncation t) {
          return rotation_state(DeformationParameter(q), theta, alpha, gamma, t);
        },
        py::arg("q"), py::arg("theta"), py::arg("alpha") = 0.0, py::arg("gamma") = 0.0,
        py::arg("truncation") = Truncation{});

  py::class_<FullGeometry>(m, "FullGeometry")
      .def(py::init<std::vector<GeometryState>>(), py::arg("factors"))
      .def_property_readonly("q", &FullGeometry::q)
      .def("has", &FullGeometry::has);

  // spectra
  py::class_<ProbabilityLaw>(m, "ProbabilityLaw")
      .def_readonly("p0", &ProbabilityLaw::p0)
      .def_readonly("variance", &ProbabilityLaw::variance)
      .def_readonly("histogram", &ProbabilityLaw::histogram)
      .def_readonly("approximate", &ProbabilityLaw::approximate)
      .def_property_readonly("spread", &ProbabilityLaw::spread)
      .def_property_readonly("spectral",
                             [](const ProbabilityLaw& l) { return l.provenance == Provenance::Spectral; });

  m.def("probability_moments",
        py::overload_cast<const FullGeometry&, Outcome, Observer>(&probability_moments), py::arg("geometry"),
        py::arg("outcome") = Outcome::Up, py::arg("observer") = Observer::Single);
  m.def("sigma_matrix_moments",
        [](const FullGeometry& g, Observer o) {
          MatrixMoments mm = sigma_matrix_moments(g, o);
          return py::make_tuple(mm.mean, mm.pati_variance);
        },
        py::arg("geometry"), py::arg("observer") = Observer::Single,
        "Returns (mean, pati_variance) as 2x2 nested lists.");
  m.def("spectral_distribution",
        [](const FullGeometry& g, Outcome w, Observer o, int cap) {
          SpectralOptions opt;
          opt.per_factor_cap = cap;
          return spectral_distribution(g, w, o, opt);
        },
        py::arg("geometry"), py::arg("outcome") = Outcome::Up, py::arg("observer") = Observer::Single,
        py::arg("per_factor_cap") = 64);
  m.def("variance_equivalence",
        [](const FullGeometry& g, Observer o) {
          VarianceEquivalence v = variance_equivalence_check(g, o);
          return py::make_tuple(v.lhs, v.rhs);
        },
        py::arg("geometry"), py::arg("observer") = Observer::Single);

  // protocol
  m.def("classical_baseline", &classical_baseline, py::arg("p0"), py::arg("N"));
  m.def("measured_sigma_law", &measured_sigma_law, py::arg("p0"), py::arg("variance_f"), py::arg("N"),
        py::arg("q"));
  m.def("sample_counts",
        [](const ProbabilityLaw& law, long N, long trials, std::uint64_t seed, std::uint64_t stream) {
          SampleSet s = sample_counts(law, N, trials, seed, stream);
          return py::dict(py::arg("k") = s.k, py::arg("mean_k") = s.mean_k, py::arg("spread_k") = s.spread_k,
                          py::arg("se_mean") = s.se_mean, py::arg("se_spread") = s.se_spread);
        },
        py::arg("law"), py::arg("N"), py::arg("trials"), py::arg("seed"), py::arg("stream") = 0);
  m.def("estimate_rotation",
        [](const py::object& config) {
          ProtocolConfig cfg = protocol_config_from_json(from_py(config));
          RotationEstimate est;
          {
            py::gil_scoped_release release;
            est = estimate_rotation(cfg);
          }
          return to_py(to_json(est));
        },
        py::arg("config"), "Runs the rotation protocol for a JSON-shaped config dict.");
}
