#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "layered_elastica/bie2d.hpp"
#include "layered_elastica/green2d.hpp"
#include "layered_elastica/green3d.hpp"
#include "layered_elastica/medium.hpp"
#include "layered_elastica/verify.hpp"

namespace py = pybind11;
using namespace le;

namespace {

QuadConfig quad(double tol) {
    QuadConfig c;
    c.tol = tol;
    return c;
}

Coeff3DKey key_by_name(const std::string& name) {
    for (const auto& k : all_keys3d())
        if (key_name(k) == name) return k;
    throw Error(ErrorCode::invalid_input, "unknown coefficient key '" + name + "'");
}

Wave wave_of(const std::string& w) {
    if (w == "p") return Wave::p;
    if (w == "s") return Wave::s;
    throw Error(ErrorCode::invalid_input, "wave must be 'p' or 's'");
}

py::dict transmission_dict(const TransmissionCheck& t) {
    py::dict d;
    d["displacement_jump"] = t.displacement_jump;
    d["traction_jump_max"] = t.traction_jump;
    d["traction_jump_rms"] = t.traction_jump_rms;
    d["traction_scale"] = t.traction_scale;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two-layered elastodynamic Green tensors and rough-interface scattering";

    py::register_exception<Error>(m, "LayeredElasticaError", PyExc_ValueError);

    py::class_<ElasticMedium>(m, "ElasticMedium")
        .def(py::init([](double lambda, double mu, double rho_plus, double rho_minus, double omega, int dim) {
                 ElasticMedium e;
                 e.lambda = lambda;
                 e.mu = mu;
                 e.rho_plus = rho_plus;
                 e.rho_minus = rho_minus;
                 e.omega = omega;
                 e.dim = dim;
                 e.validate();
                 return e;
             }),
             py::arg("lambda_"), py::arg("mu"), py::arg("rho_plus"), py::arg("rho_minus"), py::arg("omega"),
             py::arg("dim") = 2)
        .def_readwrite("lambda_", &ElasticMedium::lambda)
        .def_readwrite("mu", &ElasticMedium::mu)
        .def_readwrite("rho_plus", &ElasticMedium::rho_plus)
        .def_readwrite("rho_minus", &ElasticMedium::rho_minus)
        .def_readwrite("omega", &ElasticMedium::omega)
        .def_readwrite("dim", &ElasticMedium::dim)
        .def("validate", &ElasticMedium::validate)
        .def("to_json", [](const ElasticMedium& e) { return medium_to_json(e); })
        .def_static("from_json", &medium_from_json)
        .def("wavenumbers", [](const ElasticMedium& e) {
            Wavenumbers k = wavenumbers(e);
            py::dict d;
            d["kp_plus"] = k.kp_plus;
            d["kp_minus"] = k.kp_minus;
            d["ks_plus"] = k.ks_plus;
            d["ks_minus"] = k.ks_minus;
            return d;
        });

    m.def("beta", [](cplx xi, double k) { return beta(xi, k); }, py::arg("xi"), py::arg("k"));

    m.def(
        "green2d",
        [](const Vec2& x, const Vec2& y, const ElasticMedium& e, double tol) {
            return CMat2(assemble_G(x, y, e, quad(tol)).G);
        },
        py::arg("x"), py::arg("y"), py::arg("medium"), py::arg("tol") = 1e-10,
        "2x2 Green tensor G(x, y).", py::call_guard<py::gil_scoped_release>());

    m.def(
        "green3d",
        [](const Vec3& x, const Vec3& y, const ElasticMedium& e, double tol) {
            ElasticMedium e3 = e;
            e3.dim = 3;
            return CMat3(assemble_G3d(x, y, e3, quad(tol)).G);
        },
        py::arg("x"), py::arg("y"), py::arg("medium"), py::arg("tol") = 1e-10,
        "3x3 Green tensor G(x, y).", py::call_guard<py::gil_scoped_release>());

    m.def(
        "far_field2d",
        [](const std::string& wave, int column, double theta, const Vec2& y, const ElasticMedium& e) {
            return far_field(wave_of(wave), column, theta, y, e).value;
        },
        py::arg("wave"), py::arg("column"), py::arg("theta"), py::arg("y"), py::arg("medium"));

    m.def(
        "far_field3d",
        [](const std::string& key, double theta, double phi, const Vec3& y, const ElasticMedium& e) {
            ElasticMedium e3 = e;
            e3.dim = 3;
            Coeff3DKey k = key_by_name(key);
            int c = far_field_case_of(k, theta >= 0 ? Side::plus : Side::minus);
            if (c == 0) throw Error(ErrorCode::invalid_input, "key has no far-field case on this side");
            return far_field3d(c, k, theta, phi, y, e3).value;
        },
        py::arg("key"), py::arg("theta"), py::arg("phi"), py::arg("y"), py::arg("medium"));

    m.def("coefficient_keys3d", []() {
        std::vector<std::string> v;
        for (const auto& k : all_keys3d()) v.push_back(key_name(k));
        return v;
    });
    m.def("transcription_summary", []() { return transcription_report().summary(); });

    m.def("suite_names", &suite_names);
    m.def(
        "run_suite",
        [](const std::string& name, std::uint64_t seed) {
            VerifyOptions o;
            o.seed = seed;
            std::string js;
            {
                py::gil_scoped_release release;
                js = run_suite(name, o).to_json();
            }
            return py::module_::import("json").attr("loads")(js);
        },
        py::arg("name"), py::arg("seed") = 7, "Run one verification suite; returns the JSON report as a dict.");

    py::class_<ScatterSolution>(m, "ScatterSolution")
        .def_readonly("residual", &ScatterSolution::residual)
        .def_property_readonly("mesh_nodes", [](const ScatterSolution& s) { return s.disc.mesh.nodes.size(); })
        .def("field", &ScatterSolution::field_inside, py::arg("x"), "u_+ above or u_- below the interface, |x| < R")
        .def("u_hat", &ScatterSolution::u_hat_at, py::arg("x"))
        .def(
            "exterior", [](const ScatterSolution& s, const Vec2& x) { return CVec2(reconstruct_exterior(s, x)); },
            py::arg("x"), "u_+ or u_- for |x| > R")
        .def("transmission", [](const ScatterSolution& s) { return transmission_dict(transmission_check(s)); });

    m.def(
        "solve",
        [](const ElasticMedium& e, const std::string& profile, const Vec2& z, const CVec2& a, double R, int nodes,
           double ppw) {
            IncidentSource src;
            src.z = z;
            src.a = a;
            SolverOptions o;
            o.R = R;
            o.boundary_nodes = nodes;
            o.points_per_wavelength = ppw;
            return solve_scattering(e, profile_from_json(profile), src, o);
        },
        py::arg("medium"), py::arg("profile") = "{\"type\": \"flat\"}", py::arg("z"), py::arg("a"),
        py::arg("R") = 4.0, py::arg("nodes") = 512, py::arg("ppw") = 10.0,
        "Solve the rough-interface scattering problem for the point source at z with polarization a.",
        py::call_guard<py::gil_scoped_release>());
}
