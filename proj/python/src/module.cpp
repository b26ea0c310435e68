#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qva/io.hpp"

namespace py = pybind11;
using namespace qva;

namespace {

std::vector<std::string> check_lines(const Instance& inst, const std::string& suite,
                                     std::optional<std::pair<int, int>> n_range, std::optional<int> max_witness,
                                     std::optional<std::pair<unsigned, int>> sample, int workers) {
  RunOptions opt;
  opt.suite = suite;
  opt.n_range = n_range;
  opt.max_witness = max_witness;
  opt.sample = sample;
  opt.workers = workers;
  std::vector<CheckReport> records;
  {
    py::gil_scoped_release release;
    records = run_checks(inst, opt);
  }
  std::vector<std::string> out;
  for (const auto& r : records) out.push_back(report_json(r));
  return out;
}

}  // namespace

PYBIND11_MODULE(_qva, m) {
  m.doc() = "Exact checks for vertex algebras and their braided deformations on graded truncations";

  auto base = py::register_exception<Error>(m, "QvaError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());

  py::class_<Instance>(m, "Instance")
      .def_property_readonly("dim", [](const Instance& i) { return i.sf->dim(); })
      .def_property_readonly("cutoff", [](const Instance& i) { return i.sf->cutoff(); })
      .def_property_readonly("h_order", [](const Instance& i) { return i.sf->h_order(); })
      .def_property_readonly("control", [](const Instance& i) { return i.control; })
      .def_property_readonly("braided", [](const Instance& i) { return i.S.has_value(); })
      .def_property_readonly("basis",
                             [](const Instance& i) {
                               std::vector<std::pair<std::string, int>> out;
                               for (int k = 0; k < i.sf->dim(); ++k)
                                 out.push_back({i.sf->space().name(k), i.sf->weight(k)});
                               return out;
                             })
      .def("emit", &emit_instance)
      .def(
          "product",
          [](const Instance& i, const std::string& a, int n, const std::string& b) {
            const StateField& sf = *i.sf;
            return pretty(sf.space(), sf.product(basis_index(sf, a), n, basis_index(sf, b)));
          },
          py::arg("a"), py::arg("n"), py::arg("b"), "a_(n)b as 'c·name + ...'")
      .def(
          "commutator",
          [](const Instance& i, const std::string& a, const std::string& b) {
            return commutator_states(i, basis_index(*i.sf, a), basis_index(*i.sf, b));
          },
          py::arg("a"), py::arg("b"))
      .def("__eq__", &Instance::operator==);

  m.def(
      "build",
      [](const std::string& kind, const std::string& level, int cutoff, int h_order,
         std::vector<std::pair<std::string, int>> generators, const std::string& braiding) {
        BuildParams params;
        params.kind = kind;
        params.level = level;
        params.cutoff = cutoff;
        params.h_order = h_order;
        params.generators = std::move(generators);
        params.braiding = braiding;
        return build_instance(params);
      },
      py::arg("kind"), py::arg("level") = "1", py::arg("cutoff") = 3, py::arg("h_order") = 1,
      py::arg("generators") = std::vector<std::pair<std::string, int>>{{"u", 1}}, py::arg("braiding") = "none");
  m.def("parse", &parse_instance, py::arg("text"), py::arg("h_order") = std::nullopt);
  m.def("check_lines", &check_lines, py::arg("instance"), py::arg("suite") = "classical",
        py::arg("n_range") = std::nullopt, py::arg("max_witness") = std::nullopt, py::arg("sample") = std::nullopt,
        py::arg("workers") = 0, "One JSON record per check, sorted");
  m.def("check_names", &check_names);
}
