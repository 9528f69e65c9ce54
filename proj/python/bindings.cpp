#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "strand/checks.hpp"
#include "strand/cli.hpp"
#include "strand/config.hpp"
#include "strand/errors.hpp"
#include "strand/noether.hpp"
#include "strand/synthetic.hpp"

namespace py = pybind11;
using namespace strand;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const VecField& f) {
    const Grid2& g = f.grid();
    Array out({g.n_t, g.n_s, 3});
    auto v = out.mutable_unchecked<3>();
    for (int it = 0; it < g.n_t; ++it) {
        for (int is = 0; is < g.n_s; ++is) {
            for (int c = 0; c < 3; ++c) v(it, is, c) = f(it, is)[c];
        }
    }
    return out;
}

Array to_array(const RotField& f) {
    const Grid2& g = f.grid();
    Array out({g.n_t, g.n_s, 3, 3});
    auto v = out.mutable_unchecked<4>();
    for (int it = 0; it < g.n_t; ++it) {
        for (int is = 0; is < g.n_s; ++is) {
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) v(it, is, i, j) = f(it, is).matrix()(i, j);
            }
        }
    }
    return out;
}

VecField from_array(const Array& a, const Grid2& g, const char* name) {
    if (a.ndim() != 3 || a.shape(0) != g.n_t || a.shape(1) != g.n_s || a.shape(2) != 3) {
        throw InvalidArgument(std::string(name) + " must have shape (n_t, n_s, 3)");
    }
    auto v = a.unchecked<3>();
    VecField f(g);
    for (int it = 0; it < g.n_t; ++it) {
        for (int is = 0; is < g.n_s; ++is) f(it, is) = Vec3(v(it, is, 0), v(it, is, 1), v(it, is, 2));
    }
    return f;
}

Stage1Section section_from(const Grid2& g, const Array& rho, const Array& theta, const Array& Omega,
                           const Array& omega) {
    return {from_array(rho, g, "rho"), from_array(theta, g, "theta"), from_array(Omega, g, "Omega"),
            from_array(omega, g, "omega")};
}

py::dict section_dict(const Stage1Section& s1) {
    py::dict d;
    d["rho"] = to_array(s1.rho);
    d["theta"] = to_array(s1.theta);
    d["Omega"] = to_array(s1.Omega);
    d["omega"] = to_array(s1.omega);
    return d;
}

py::dict norms_dict(const ResidualNorms& n) {
    py::dict d;
    d["vertical"] = n.vertical;
    d["horizontal_rho"] = n.horizontal_rho;
    d["horizontal_theta"] = n.horizontal_theta;
    return d;
}

py::list report_list(const Report& r) {
    py::list out;
    for (const CheckResult& c : r.checks) out.append(py::make_tuple(c.name, c.value, c.tolerance, c.pass));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Reduced field equations of a molecular strand with rotors";

    auto base = py::register_exception<StrandError>(m, "StrandError");
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
    py::register_exception<NotAntisymmetric>(m, "NotAntisymmetric", base.ptr());
    py::register_exception<NotARotation>(m, "NotARotation", base.ptr());
    py::register_exception<NearAngleApi>(m, "NearAngleApi", base.ptr());
    py::register_exception<TooFarFromGroup>(m, "TooFarFromGroup", base.ptr());
    py::register_exception<NotFlat>(m, "NotFlat", base.ptr());
    py::register_exception<Blowup>(m, "Blowup", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<UnknownPreset>(m, "UnknownPreset", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    // Rotations cross the boundary as plain 3x3 matrices.
    m.def("hat", &hat, py::arg("v"));
    m.def("vee", &vee, py::arg("M"));
    m.def("exp_so3", [](const Vec3& v) { return exp_so3(v).matrix(); }, py::arg("v"));
    m.def("log_so3", [](const Mat3& R) { return log_so3(Rot3::from_matrix(R)); }, py::arg("R"));
    m.def("reorthonormalize", [](const Mat3& M) { return reorthonormalize(M).matrix(); }, py::arg("M"));

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init(&default_params))
        .def_readwrite("I", &ModelParams::inertia_body)
        .def_readwrite("K", &ModelParams::inertia_rotor)
        .def_readwrite("C", &ModelParams::pot_C)
        .def_readwrite("D", &ModelParams::pot_D)
        .def_readwrite("kappa", &ModelParams::pot_kappa)
        .def_readwrite("c0", &ModelParams::pot_c0)
        .def("validate", &ModelParams::validate)
        .def("stiffness", &ModelParams::stiffness);
    m.def("anisotropic_params", &anisotropic_params);

    m.def(
        "lagrangian_stage1",
        [](const Vec3& rho, const Vec3& rho_t, const Vec3& theta_s, const Vec3& theta_t, const Vec3& Omega,
           const Vec3& omega, const ModelParams& p) {
            return lagrangian_stage1({rho, rho_t, theta_s, theta_t, Omega, omega}, p);
        },
        py::arg("rho"), py::arg("rho_t"), py::arg("theta_s"), py::arg("theta_t"), py::arg("Omega"),
        py::arg("omega"), py::arg("params"));
    m.def(
        "fiber_derivatives",
        [](const Vec3& rho, const Vec3& rho_t, const Vec3& theta_s, const Vec3& theta_t, const Vec3& Omega,
           const Vec3& omega, const ModelParams& p) {
            const FiberDerivatives d = fiber_derivatives_stage1({rho, rho_t, theta_s, theta_t, Omega, omega}, p);
            py::dict out;
            out["rho"] = d.dl_drho;
            out["rho_t"] = d.dl_drho_t;
            out["theta_s"] = d.dl_dtheta_s;
            out["theta_t"] = d.dl_dtheta_t;
            out["Omega"] = d.dl_dOmega;
            out["omega"] = d.dl_domega;
            return out;
        },
        py::arg("rho"), py::arg("rho_t"), py::arg("theta_s"), py::arg("theta_t"), py::arg("Omega"),
        py::arg("omega"), py::arg("params"));

    py::class_<Grid2>(m, "Grid")
        .def(py::init([](int n_t, int n_s, double dt, double ds, const std::string& bc) {
                 return Grid2::make(n_t, n_s, dt, ds, parse_boundary(bc));
             }),
             py::arg("n_t"), py::arg("n_s"), py::arg("dt"), py::arg("ds"), py::arg("bc") = "clamped")
        .def_readonly("n_t", &Grid2::n_t)
        .def_readonly("n_s", &Grid2::n_s)
        .def_readonly("dt", &Grid2::dt)
        .def_readonly("ds", &Grid2::ds)
        .def_property_readonly("bc", [](const Grid2& g) { return to_string(g.bc_s); });

    m.def(
        "simulate",
        [](const std::string& preset, const Grid2& g, const ModelParams& p, const std::string& scheme) {
            SimConfig cfg;
            cfg.grid = g;
            cfg.params = p;
            cfg.preset = parse_preset(preset);
            cfg.scheme = parse_scheme(scheme);
            cfg.validate();
            py::gil_scoped_release release;
            SimResult res = run(cfg);
            py::gil_scoped_acquire acquire;
            return section_dict(res.section);
        },
        py::arg("preset"), py::arg("grid"), py::arg("params") = default_params(), py::arg("scheme") = "rk4");
    m.def(
        "simulate_config",
        [](const std::string& path) { return section_dict(run(read_config(path)).section); }, py::arg("path"));

    m.def(
        "stage1_residual_norms",
        [](const Grid2& g, const Array& rho, const Array& theta, const Array& Omega, const Array& omega,
           const ModelParams& p) {
            return norms_dict(interior_norms(stage1_residuals(section_from(g, rho, theta, Omega, omega), p)));
        },
        py::arg("grid"), py::arg("rho"), py::arg("theta"), py::arg("Omega"), py::arg("omega"),
        py::arg("params") = default_params());
    m.def(
        "flatness_residual",
        [](const Grid2& g, const Array& Omega, const Array& omega) {
            return to_array(flatness_residual_rotation(from_array(Omega, g, "Omega"), from_array(omega, g, "omega")));
        },
        py::arg("grid"), py::arg("Omega"), py::arg("omega"));
    m.def(
        "reconstruct_rotation",
        [](const Grid2& g, const Array& Omega, const Array& omega, const Mat3& lambda0, double tol) {
            return to_array(reconstruct_rotation(from_array(Omega, g, "Omega"), from_array(omega, g, "omega"),
                                                 Rot3::from_matrix(lambda0), tol));
        },
        py::arg("grid"), py::arg("Omega"), py::arg("omega"), py::arg("lambda0") = Mat3::Identity(),
        py::arg("tol") = 1e-2);

    m.def("check_derivatives", [](std::uint64_t seed) { return report_list(check_derivatives(default_params(), seed)); },
          py::arg("seed") = 1);
    m.def("check_stages", [](std::uint64_t seed) { return report_list(check_stages(seed)); }, py::arg("seed") = 2);
    m.def("check_variational", []() { return report_list(check_variational(default_params())); });
    m.def("check_roundtrip", [](std::uint64_t seed) { return report_list(check_roundtrip(seed)); },
          py::arg("seed") = 11);

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::vector<const char*> argv{"strand-reduce"};
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
