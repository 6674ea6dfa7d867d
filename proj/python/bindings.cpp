#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "okb/errors.hpp"
#include "okb/estimates.hpp"
#include "okb/io.hpp"

namespace py = pybind11;

// Rat <-> fractions.Fraction. Loading also takes int and "p/q" strings.
namespace pybind11::detail {
template <>
struct type_caster<okb::Rat> {
    PYBIND11_TYPE_CASTER(okb::Rat, const_name("fractions.Fraction"));

    bool load(handle src, bool) {
        if (PyBool_Check(src.ptr())) return false;
        if (PyLong_Check(src.ptr())) {
            value = okb::parse_rat(py::str(src).cast<std::string>());
            return true;
        }
        if (py::isinstance<py::str>(src)) {
            value = okb::parse_rat(src.cast<std::string>());
            return true;
        }
        if (py::isinstance(src, py::module_::import("fractions").attr("Fraction"))) {
            value = okb::parse_rat(py::str(src.attr("numerator")).cast<std::string>() + "/" +
                                   py::str(src.attr("denominator")).cast<std::string>());
            return true;
        }
        return false;
    }

    static handle cast(const okb::Rat& q, return_value_policy, handle) {
        auto Fraction = py::module_::import("fractions").attr("Fraction");
        return Fraction(py::int_(py::str(q.get_num().get_str())), py::int_(py::str(q.get_den().get_str()))).release();
    }
};
}  // namespace pybind11::detail

namespace {

using namespace okb;

py::object to_python(const io::Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

io::Json from_python(const py::object& o) {
    return io::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::tuple cloud(const PointCloud& pc) { return py::make_tuple(pc.k, pc.points); }

py::tuple interval(const Rat& lo, const Rat& hi) { return py::make_tuple(lo, hi); }

}  // namespace

PYBIND11_MODULE(_okb, m) {
    m.doc() = "Exact discrete Okounkov bodies, stability thresholds and lattice estimates";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    py::class_<AffineFunctional>(m, "AffineFunctional")
        .def(py::init([](Vec gradient, Rat constant) { return AffineFunctional{std::move(gradient), constant}; }),
             py::arg("gradient"), py::arg("constant") = Rat(0))
        .def_readonly("gradient", &AffineFunctional::gradient)
        .def_readonly("constant", &AffineFunctional::constant)
        .def("__call__", &AffineFunctional::operator())
        .def_static("coordinate", &AffineFunctional::coordinate, py::arg("n"), py::arg("i"));

    py::class_<ConcavePL>(m, "ConcavePL")
        .def(py::init<std::vector<AffineFunctional>>())
        .def(py::init<AffineFunctional>())
        .def_property_readonly("pieces", &ConcavePL::pieces)
        .def("__call__", &ConcavePL::operator());
    py::implicitly_convertible<AffineFunctional, ConcavePL>();

    py::class_<ConvexBody>(m, "ConvexBody")
        .def_static("hull", &ConvexBody::hull, py::arg("points"))
        .def_static(
            "from_halfspaces",
            [](std::size_t dim, const std::vector<std::pair<Vec, Rat>>& hs) {
                std::vector<HalfSpace> out;
                for (const auto& [normal, offset] : hs) out.push_back({normal, offset});
                return ConvexBody::from_halfspaces(dim, out);
            },
            py::arg("dim"), py::arg("halfspaces"), "halfspaces as (normal, offset) pairs, normal . x <= offset")
        .def_static("box", &ConvexBody::box, py::arg("lo"), py::arg("hi"))
        .def_static("unit_cube", &ConvexBody::unit_cube, py::arg("n"))
        .def_static("simplex", &ConvexBody::simplex, py::arg("n"), py::arg("scale") = Rat(1))
        .def_static("segment", &ConvexBody::segment, py::arg("a"), py::arg("b"))
        .def_property_readonly("dim", &ConvexBody::dim)
        .def_property_readonly("affine_dim", &ConvexBody::affine_dim)
        .def_property_readonly("is_empty", &ConvexBody::is_empty)
        .def_property_readonly("vertices", &ConvexBody::vertices)
        .def_property_readonly("halfspaces",
                               [](const ConvexBody& B) {
                                   std::vector<std::pair<Vec, Rat>> out;
                                   for (const auto& h : B.halfspaces()) out.emplace_back(h.normal, h.offset);
                                   return out;
                               })
        .def("contains", &ConvexBody::contains)
        .def(py::self == py::self)
        .def("__repr__", [](const ConvexBody& B) {
            return "<ConvexBody dim=" + std::to_string(B.dim()) + " vertices=" + std::to_string(B.vertices().size()) +
                   ">";
        });

    m.def("volume", &volume);
    m.def("barycenter", &barycenter);
    m.def("superlevel", &superlevel, py::arg("body"), py::arg("G"), py::arg("t"));
    m.def("slice_volume", &slice_volume, py::arg("body"), py::arg("f"), py::arg("t"));
    m.def("minkowski_cube", &minkowski_cube, py::arg("body"), py::arg("eps"));
    m.def(
        "chebyshev_ball",
        [](const ConvexBody& B) {
            const Ball b = chebyshev_ball(B);
            return py::make_tuple(b.center, b.radius_lb);
        },
        "(center, certified lower bound on the radius)");
    m.def("slice_cone", &slice_cone);
    m.def("apex_cone", &apex_cone);
    m.def("rooftop", &rooftop);
    m.def("scale_translate", &scale_translate);
    m.def("integrate", &integrate);

    m.def(
        "enumerate", [](const ConvexBody& B, std::int64_t k, unsigned jobs) { return cloud(enumerate(B, k, jobs)); },
        py::arg("body"), py::arg("k"), py::arg("jobs") = 1, "(k, integer points z) with z/k in the body");
    m.def("count", &count, py::arg("body"), py::arg("k"), py::arg("jobs") = 1);
    m.def("discrepancy", &discrepancy);
    m.def("concave_sum", &concave_sum);
    m.def("lower_bound_constant_ub", &lower_bound_constant_ub);

    py::class_<GradedSeriesModel>(m, "GradedSeriesModel")
        .def_static("toric", &GradedSeriesModel::toric)
        .def_static("curve", &GradedSeriesModel::curve, py::arg("genus"), py::arg("gaps"))
        .def_static(
            "from_json", [](const py::object& o) { return io::model_from(from_python(o)); },
            "build a model from the JSON document accepted by the command-line tool")
        .def_property_readonly("backend", [](const GradedSeriesModel& M) { return backend_name(M.backend()); })
        .def_property_readonly("ambient", &GradedSeriesModel::ambient)
        .def_property_readonly("dim", &GradedSeriesModel::dim)
        .def_readonly("label", &GradedSeriesModel::label);

    auto models = m.def_submodule("models", "bundled example models");
    models.def("segment", &models::segment);
    models.def("unit_simplex", &models::unit_simplex);
    models.def("anticanonical_p2", &models::anticanonical_p2);
    models.def("trapezoid", &models::trapezoid);
    models.def("quartic", &models::quartic, py::arg("gaps"));
    models.def("canonical_generic", &models::canonical_generic, py::arg("genus"));
    models.def("canonical_panel", &models::canonical_panel, py::arg("name"));
    models.def("canonical_panel_names", &models::canonical_panel_names);
    models.def("top_gap_square", &models::top_gap_square, py::arg("k_max"));

    m.def("discrete_body", [](const GradedSeriesModel& M, std::int64_t k) { return cloud(discrete_body(M, k)); });
    m.def("gap_set", [](const GradedSeriesModel& M, std::int64_t k) { return cloud(gap_set(M, k)); });
    m.def("d_k", &d_k);
    m.def("D_k", &D_k);
    m.def(
        "gap_table",
        [](const GradedSeriesModel& M, std::int64_t k_max) {
            std::vector<py::tuple> out;
            for (const auto& r : gap_table(M, k_max)) out.push_back(py::make_tuple(r.k, r.d, r.D, r.diff));
            return out;
        },
        "rows (k, d_k, D_k, D_k - d_k)");
    m.def("is_gap_sequence", &is_gap_sequence);
    m.def("numerical_semigroup_gaps", &numerical_semigroup_gaps);

    py::class_<ValuationModel>(m, "ValuationModel")
        .def(py::init([](std::string label, Rat A, ConcavePL G) { return ValuationModel{std::move(label), A, G}; }),
             py::arg("label"), py::arg("A"), py::arg("G"))
        .def_static("divisorial", &ValuationModel::divisorial, py::arg("n"), py::arg("label") = "p1")
        .def_readonly("label", &ValuationModel::label)
        .def_readonly("A", &ValuationModel::A);
    m.def("coordinate_family", &coordinate_family, py::arg("n"), py::arg("s"));

    m.def("jumping_numbers",
          [](const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k) {
              return jumping_numbers(M, v, k).values;
          });
    m.def("S_km", &S_km);
    m.def("Sbar_km", &Sbar_km);
    m.def(
        "quantile",
        [](const GradedSeriesModel& M, const ValuationModel& v, const Rat& tau) {
            const auto q = quantile(M, v, tau);
            return interval(q.lo, q.hi);
        },
        "(lo, hi) bracket of Q(tau); lo == hi when exact");
    m.def(
        "S_tau",
        [](const GradedSeriesModel& M, const ValuationModel& v, const Rat& tau) {
            const auto s = S_tau(M, v, tau);
            return interval(s.lo, s.hi);
        },
        "(lo, hi) certified interval; lo == hi when exact");
    m.def(
        "delta_km_restricted",
        [](const GradedSeriesModel& M, const std::vector<ValuationModel>& family, std::int64_t k,
           std::int64_t mm) -> py::tuple {
            const auto r = delta_km_restricted(M, family, k, mm);
            if (r.infinite) return py::make_tuple(py::float_(INFINITY), r.argmin);
            return py::make_tuple(r.lo, r.argmin);
        },
        "(value, argmin label); an upper bound on the true threshold");

    m.def(
        "verify_S_two_sided",
        [](const GradedSeriesModel& M, const ValuationModel& v, const Rat& tau, const std::string& rule,
           std::int64_t k_min, std::int64_t k_max, unsigned jobs) {
            return to_python(io::to_json(verify_S_two_sided(M, v, tau, MRule::parse(rule), {k_min, k_max},
                                                            default_tol(), jobs)));
        },
        py::arg("model"), py::arg("valuation"), py::arg("tau"), py::arg("m_rule") = "ceil_tau",
        py::arg("k_min") = 1, py::arg("k_max") = 40, py::arg("jobs") = 1);
    m.def(
        "verify_weierstrass",
        [](int g_max, std::int64_t k_max) { return to_python(io::to_json(verify_weierstrass(g_max, k_max))); },
        py::arg("g_max") = 8, py::arg("k_max") = 50);
}
