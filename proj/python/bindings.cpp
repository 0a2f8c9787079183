#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "ringlab/cli.hpp"
#include "ringlab/cmy.hpp"
#include "ringlab/errors.hpp"
#include "ringlab/level_sets.hpp"
#include "ringlab/rosay_rudin.hpp"
#include "ringlab/serialize.hpp"
#include "ringlab/two_point.hpp"

namespace py = pybind11;
using namespace ringlab;

namespace {

// Python objects cross the boundary as JSON documents.
Json to_cpp(const py::object& o) {
    if (o.is_none()) return Json();
    const auto text = py::module_::import("json").attr("dumps")(o).cast<std::string>();
    return Json::parse(text);
}

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Vec to_vec(const std::vector<double>& v) {
    if (v.size() < 2 || v.size() > 3) throw std::invalid_argument("points must have 2 or 3 coordinates");
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

py::array_t<double> to_array(const Vec& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<double> to_array(const Mat& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out.mutable_at(i, j) = m(i, j);
    }
    return out;
}

Extremum extremum_of(const std::string& kind) {
    if (kind == "max") return Extremum::max;
    if (kind == "min") return Extremum::min;
    throw ConfigError("kind must be max or min");
}

} // namespace

PYBIND11_MODULE(_ringlab, m) {
    m.doc() = "Harmonic capacity potentials on ring domains and level-set convexity checks.";

    auto base = py::register_exception<Error>(m, "RinglabError", PyExc_RuntimeError);
    py::register_exception<GeometryError>(m, "GeometryError", base.ptr());
    py::register_exception<SolverAccuracyError>(m, "SolverAccuracyError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<HypothesisViolation>(m, "HypothesisViolation", base.ptr());
    py::register_exception<ConstraintError>(m, "ConstraintError", base.ptr());
    py::register_exception<DegeneracyError>(m, "DegeneracyError", base.ptr());

    py::class_<HarmonicField>(m, "Field")
        .def_property_readonly("dimension", &HarmonicField::dimension)
        .def_property_readonly("fit", [](const HarmonicField& f) { return to_py(to_json(f.fit_report())); })
        .def_property_readonly("ring", [](const HarmonicField& f) { return to_py(to_json(f.ring())); })
        .def("eval", [](const HarmonicField& f, const std::vector<double>& x) { return f.eval(to_vec(x)); })
        .def("grad", [](const HarmonicField& f, const std::vector<double>& x) { return to_array(f.eval_grad(to_vec(x))); })
        .def("hessian",
             [](const HarmonicField& f, const std::vector<double>& x) { return to_array(f.eval_hessian(to_vec(x))); })
        .def("kappa1",
             [](const HarmonicField& f, const std::vector<double>& x) { return smallest_principal_curvature(f, to_vec(x)); })
        .def("du_kappa1", [](const HarmonicField& f, const std::vector<double>& x) { return du_kappa1(f, to_vec(x)); })
        .def(
            "level_curve",
            [](const HarmonicField& f, double level, double spacing) {
                const LevelCurve c = trace_level(f, level, spacing);
                py::array_t<double> pts({static_cast<py::ssize_t>(c.size()), py::ssize_t{2}});
                for (std::size_t i = 0; i < c.size(); ++i) {
                    pts.mutable_at(i, 0) = c.points[i](0);
                    pts.mutable_at(i, 1) = c.points[i](1);
                }
                return pts;
            },
            py::arg("level"), py::arg("spacing") = 0.01)
        .def("to_json", [](const HarmonicField& f) { return to_py(to_json(f)); })
        .def_static("from_json", [](const py::object& o) { return field_from_json(to_cpp(o)); });

    m.def(
        "solve",
        [](const py::object& domain, const py::object& solver) {
            const ConvexRing ring = ring_from_json(to_cpp(domain));
            return solve_ring(ring, solver_params_from_json(to_cpp(solver), ring.dimension()));
        },
        py::arg("domain"), py::arg("solver") = py::none(),
        "Solve the capacity potential on a ring given in the config-file domain schema.");

    m.def(
        "check_psi_admissible",
        [](const py::object& psi, double t_max, int samples) {
            const Admissibility a = check_psi_admissible(psi_from_json(to_cpp(psi)), t_max, samples);
            return py::make_tuple(a.admissible, a.worst_margin);
        },
        py::arg("psi"), py::arg("t_max"), py::arg("samples") = 1001);

    m.def(
        "eval_Q",
        [](const HarmonicField& f, const py::object& psi, const std::vector<double>& x, const std::vector<double>& y) {
            return eval_Q(f, psi_from_json(to_cpp(psi)), to_vec(x), to_vec(y));
        },
        py::arg("field"), py::arg("psi"), py::arg("x"), py::arg("y"));

    m.def(
        "extremize_Q",
        [](const HarmonicField& f, const py::object& psi, const std::string& kind, int levels, int pairs_per_level,
           int refine_top, std::optional<double> cap, std::uint64_t seed, int workers) {
            ExtremizeOptions o;
            o.levels = levels;
            o.pairs_per_level = pairs_per_level;
            o.refine_top = refine_top;
            o.cap = cap;
            o.seed = seed;
            o.workers = workers;
            const PsiSpec spec = psi_from_json(to_cpp(psi));
            QReport r;
            {
                py::gil_scoped_release release;
                r = extremize_Q(f, spec, extremum_of(kind), o);
            }
            return to_py(to_json(r));
        },
        py::arg("field"), py::arg("psi") = py::none(), py::arg("kind") = "max", py::arg("levels") = 20,
        py::arg("pairs_per_level") = 200, py::arg("refine_top") = 50, py::arg("cap") = py::none(), py::arg("seed") = 1,
        py::arg("workers") = 1);

    m.def(
        "scan_min_du_kappa1",
        [](const HarmonicField& f, int levels, int points_per_level, bool exploratory, int workers) {
            CmyScanOptions o;
            o.exploratory = exploratory;
            o.workers = workers;
            CmyReport r;
            {
                py::gil_scoped_release release;
                r = scan_min_du_kappa1(f, levels, points_per_level, o);
            }
            return to_py(to_json(r));
        },
        py::arg("field"), py::arg("levels") = 41, py::arg("points_per_level") = 256, py::arg("exploratory") = false,
        py::arg("workers") = 1);

    m.def(
        "build_rotation",
        [](const std::vector<double>& du_x0, const std::vector<double>& du_y0) {
            const RotationEven r = build_rotation(to_vec(du_x0), to_vec(du_y0));
            py::dict d;
            d["angle"] = r.angle;
            d["scale"] = r.scale;
            d["matrix"] = to_array(r.matrix);
            return d;
        },
        py::arg("du_x0"), py::arg("du_y0"));

    m.def(
        "run",
        [](const py::object& config, const std::string& subcommand) {
            const RunConfig c = parse_config(to_cpp(config));
            std::ostringstream log;
            const int code = run(c, subcommand, log);
            return py::make_tuple(code, log.str());
        },
        py::arg("config"), py::arg("subcommand"),
        "Run one CLI subcommand; returns (exit code, log text). The JSON report is written to output.dir.");
}
