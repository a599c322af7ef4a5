#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lawvere/conservativity.hpp"
#include "lawvere/metalang.hpp"
#include "lawvere/order.hpp"
#include "lawvere/registry.hpp"
#include "lawvere/report.hpp"
#include "lawvere/tensor.hpp"

namespace py = pybind11;
using namespace lawvere;

namespace {

std::string report_json(const Report& r) { return to_json(r).dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite Lawvere theories, approximation orders, tensors and a monadic metalanguage";

  py::register_exception<CapacityExceeded>(m, "CapacityExceeded");
  py::register_exception<InvalidSpec>(m, "InvalidSpec", PyExc_ValueError);
  py::register_exception<NotBounded>(m, "NotBounded");
  py::register_exception<ml::SyntaxError>(m, "SyntaxError");
  py::register_exception<ml::TypeError>(m, "TypeError");
  py::register_exception<ml::MonadNotAdditive>(m, "MonadNotAdditive");

  py::class_<Theory, std::shared_ptr<Theory>>(m, "Theory")
      .def_property_readonly("spec", &Theory::spec)
      .def_property_readonly("family", &Theory::family)
      .def_property_readonly("bounded", &Theory::bounded)
      .def_property_readonly("has_join", &Theory::has_join)
      .def("carrier_size", &Theory::carrier_size, py::arg("n"))
      .def("unit", &Theory::unit, py::arg("n"), py::arg("i"))
      .def("subst",
           [](const Theory& th, Elem t, std::size_t n, const std::vector<Elem>& sigma, std::size_t k) {
             return th.subst(t, n, sigma, k);
           },
           py::arg("t"), py::arg("n"), py::arg("sigma"), py::arg("k"))
      .def("join", &Theory::join, py::arg("a"), py::arg("b"), py::arg("n"))
      .def("show", &Theory::show, py::arg("t"), py::arg("n"))
      .def("__repr__", [](const Theory& th) { return "<Theory " + th.spec() + ">"; });

  // pybind11 holders cannot be pointers to const; theories are immutable after construction.
  m.def("make_theory", [](const std::string& spec) { return std::const_pointer_cast<Theory>(make_theory(spec)); },
        py::arg("spec"));
  m.def("builtin_specs", [] {
    std::vector<std::string> out;
    for (const auto& b : builtin_theories()) out.push_back(b.spec);
    return out;
  });

  m.def("hom_size", [](const std::string& spec, std::size_t n, std::size_t k) {
    return HomSet(*make_theory(spec), n, k).size();
  });
  m.def(
      "order_pairs",
      [](const std::string& spec, std::size_t N, std::size_t n, bool two_sided) {
        auto ot = compute_preorder(make_theory(spec), N, two_sided ? RuleMode::TwoSided : RuleMode::Literal);
        return ot.pairs(n);
      },
      py::arg("spec"), py::arg("max_size"), py::arg("n"), py::arg("two_sided") = false);

  m.def(
      "run_source",
      [](const std::string& src, const std::string& monad) {
        auto th = make_theory(monad);
        auto r = ml::run_program(ml::parse_program(src), *th);
        return py::make_tuple(r.shown, ml::show(*r.type), r.value);
      },
      py::arg("source"), py::arg("monad"));

  py::class_<ReportOptions>(m, "ReportOptions")
      .def(py::init<>())
      .def_readwrite("jobs", &ReportOptions::jobs)
      .def_readwrite("seed", &ReportOptions::seed)
      .def_readwrite("list_limit", &ReportOptions::list_limit);

  // Reports come back as JSON text; the Python wrapper decodes them.
  m.def("report_theories", [](const ReportOptions& o) { return report_json(report_theories(o)); },
        py::arg("opt") = ReportOptions{});
  m.def("report_hom", [](const std::string& s, std::size_t n, std::size_t k, const ReportOptions& o) {
    return report_json(report_hom(s, n, k, o));
  }, py::arg("spec"), py::arg("n"), py::arg("m"), py::arg("opt") = ReportOptions{});
  m.def("report_order", [](const std::string& s, std::size_t N, bool two, const ReportOptions& o) {
    return report_json(report_order(s, N, two, o));
  }, py::arg("spec"), py::arg("max_size"), py::arg("two_sided") = false, py::arg("opt") = ReportOptions{});
  m.def("report_conservativity", [](const std::string& s, std::size_t N, const ReportOptions& o) {
    py::gil_scoped_release release;
    return report_json(report_conservativity(s, N, o));
  }, py::arg("spec"), py::arg("max_size"), py::arg("opt") = ReportOptions{});
  m.def("report_tensor", [](const std::string& s, std::size_t N, const std::string& mode, bool verify,
                            const ReportOptions& o) {
    py::gil_scoped_release release;
    return report_json(report_tensor(s, N, mode, verify, o));
  }, py::arg("spec"), py::arg("max_size"), py::arg("mode") = "full", py::arg("verify") = false,
     py::arg("opt") = ReportOptions{});
  m.def("report_uniformity", [](const std::string& s, std::size_t n, std::size_t k, const ReportOptions& o) {
    return report_json(report_uniformity(s, n, k, o));
  }, py::arg("spec"), py::arg("n"), py::arg("m"), py::arg("opt") = ReportOptions{});
  m.def("report_additivity", [](const std::string& s, std::size_t N, const ReportOptions& o) {
    return report_json(report_additivity(s, N, o));
  }, py::arg("spec"), py::arg("max_size"), py::arg("opt") = ReportOptions{});
  m.def("report_run", [](const std::string& f, const std::string& monad, const ReportOptions& o) {
    return report_json(report_run(f, monad, o));
  }, py::arg("file"), py::arg("monad"), py::arg("opt") = ReportOptions{});
  m.def("report_laws", [](const std::string& monad, const std::string& suite, std::size_t S,
                          const ReportOptions& o) {
    py::gil_scoped_release release;
    return report_json(report_laws(monad, suite, S, o));
  }, py::arg("monad"), py::arg("suite"), py::arg("max_type_size"), py::arg("opt") = ReportOptions{});
}
