#include "idbounds/bounds.hpp"
#include "idbounds/config.hpp"
#include "idbounds/errors.hpp"
#include "idbounds/simulators.hpp"
#include "idbounds/verification.hpp"

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace idbounds;

namespace {

py::array_t<double> to_array(const SampleBatch& b) {
    if (b.dim == 1) return py::array_t<double>(static_cast<py::ssize_t>(b.count), b.values.data());
    return py::array_t<double>({static_cast<py::ssize_t>(b.count), static_cast<py::ssize_t>(b.dim)}, b.values.data());
}

} // namespace

PYBIND11_MODULE(_idbounds, m) {
    m.doc() = "Deviation bounds for infinitely divisible laws, with Monte Carlo verification";

    static py::exception<Error> exc(m, "IdboundsError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(exc, e.what());
        }
    });

    py::class_<BoundValue>(m, "BoundValue")
        .def_readonly("value", &BoundValue::value)
        .def_readonly("raw", &BoundValue::raw)
        .def_readonly("vacuous", &BoundValue::vacuous)
        .def_readonly("regime", &BoundValue::regime);

    py::class_<TailBound>(m, "TailBound")
        .def_readonly("name", &TailBound::name)
        .def_readonly("valid_lo", &TailBound::valid_lo)
        .def_readonly("valid_hi", &TailBound::valid_hi)
        .def_readonly("audit_lo", &TailBound::audit_lo)
        .def_property_readonly("center", [](const TailBound& b) { return std::string(center_name(b.center)); })
        .def_property_readonly("direction", [](const TailBound& b) { return std::string(direction_name(b.direction)); })
        .def_property_readonly("empty", &TailBound::empty)
        .def("in_range", &TailBound::in_range)
        .def("evaluate", &TailBound::evaluate)
        .def("__call__", [](const TailBound& b, double x) { return b(x); });

    m.def("dev_nico_bound", &dev_nico_bound, py::arg("K"), py::arg("alpha2"));
    m.def(
        "engine_bound",
        [](std::function<double(double)> h, double t_end, double h_sup) {
            HFunction hf{std::move(h), t_end, h_sup, "python"};
            return tail_bound_from_h(hf);
        },
        py::arg("h"), py::arg("t_end") = kInf, py::arg("h_sup") = kInf);
    m.def(
        "quad_wiener_bound",
        [](const std::vector<double>& eigs, double c, const std::string& form, const std::string& target) {
            QuadForm f = form == "exact_h" ? QuadForm::exact_h : form == "log_form" ? QuadForm::log_form : QuadForm::min_form;
            QuadTarget t = target == "sup" ? QuadTarget::sup : QuadTarget::lipschitz;
            return quad_wiener_bound(make_quadratic_spec({eigs}), c, f, t);
        },
        py::arg("eigs"), py::arg("c") = 1.0, py::arg("form") = "exact_h", py::arg("target") = "lipschitz");
    m.def(
        "levy_area_bound",
        [](double T, int n, double c) { return levy_area_bound(T, n, c, 0.5, AreaVariant::lipschitz); }, py::arg("T"),
        py::arg("n") = 1, py::arg("c") = 1.0);
    m.def("solve_expm1_ratio", &solve_expm1_ratio);
    m.def(
        "h_T_eigs", [](double T, int N) { return generate_eigs({EigenKind::square_norm, T}, N); }, py::arg("T"),
        py::arg("N"));

    m.def(
        "sample_chaos2",
        [](const std::vector<double>& eigs, std::size_t count, std::uint64_t seed, std::uint64_t stream) {
            return to_array(sample_chaos2(eigs, count, {seed, stream}));
        },
        py::arg("eigs"), py::arg("count"), py::arg("seed") = 1, py::arg("stream") = 0);
    m.def(
        "sample_levy_area",
        [](double T, int steps, std::size_t count, std::uint64_t seed, std::uint64_t stream) {
            return to_array(sample_levy_area(T, steps, count, {seed, stream}));
        },
        py::arg("T"), py::arg("steps"), py::arg("count"), py::arg("seed") = 1, py::arg("stream") = 0);
    m.def(
        "sample_stable",
        [](double alpha, double sigma_total, int n, std::size_t count, std::uint64_t seed) {
            StableSampler s;
            s.alpha = alpha;
            s.sigma_total = sigma_total;
            s.n = n;
            return to_array(sample_stable(s, count, {seed, 0}));
        },
        py::arg("alpha"), py::arg("sigma_total"), py::arg("n"), py::arg("count"), py::arg("seed") = 1);

    m.def(
        "empirical_tail",
        [](const std::vector<double>& values, const std::vector<double>& grid, double level) {
            TailCurve c = empirical_tail(values, grid, level);
            py::dict d;
            d["x"] = c.x_grid;
            d["p_hat"] = c.p_hat;
            d["ci_lo"] = c.ci_lo;
            d["ci_hi"] = c.ci_hi;
            return d;
        },
        py::arg("values"), py::arg("grid"), py::arg("level") = 0.99);

    m.def(
        "run_config",
        [](const std::string& json_text) {
            auto cfg = cli::json::parse(json_text);
            std::ostringstream log, err;
            int rc = cli::run_main(cfg, log, err);
            return py::make_tuple(rc, err.str());
        },
        py::arg("config_json"));
}
