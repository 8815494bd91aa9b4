#include "flowcat/commands.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>

namespace py = pybind11;
using namespace flowcat::app;

namespace {

using Result = std::pair<int, std::string>;

Result wrap(const Report& r) { return {r.exit_code, r.json.dump(2)}; }

Inputs inputs(const std::string& complex, const std::optional<std::string>& matching,
              const std::optional<std::string>& cosheaf)
{
    Inputs in;
    in.complex_text = complex;
    in.matching_text = matching;
    in.cosheaf_text = cosheaf;
    return in;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.attr("EXIT_OK") = exit_ok;
    m.attr("EXIT_INVALID") = exit_invalid;
    m.attr("EXIT_COMPUTATION") = exit_computation;

    m.def(
        "validate",
        [](const std::string& complex, const std::optional<std::string>& matching) {
            py::gil_scoped_release unlocked;
            return wrap(cmd_validate(inputs(complex, matching, std::nullopt)));
        },
        py::arg("complex"), py::arg("matching") = std::nullopt);

    m.def(
        "flow",
        [](const std::string& complex, const std::string& matching, std::optional<std::string> source,
           std::optional<std::string> target, int max_zigzag_len, std::optional<std::string> category) {
            FlowOptions opt{std::move(source), std::move(target), max_zigzag_len, std::move(category)};
            py::gil_scoped_release unlocked;
            return wrap(cmd_flow(inputs(complex, matching, std::nullopt), opt));
        },
        py::arg("complex"), py::arg("matching"), py::arg("source") = std::nullopt,
        py::arg("target") = std::nullopt, py::arg("max_zigzag_len") = 4, py::arg("category") = std::nullopt);

    m.def(
        "homology",
        [](const std::string& kind, const std::string& complex, std::optional<std::string> matching,
           std::optional<std::string> cosheaf, std::optional<std::string> coefficients, int max_nerve_dim,
           int max_zigzag_len, std::optional<std::string> category) {
            HomologyOptions opt{std::move(coefficients), max_nerve_dim, max_zigzag_len, std::move(category)};
            py::gil_scoped_release unlocked;
            return wrap(cmd_homology(inputs(complex, matching, cosheaf), kind, opt));
        },
        py::arg("kind"), py::arg("complex"), py::arg("matching") = std::nullopt, py::arg("cosheaf") = std::nullopt,
        py::arg("coefficients") = std::nullopt, py::arg("max_nerve_dim") = 3, py::arg("max_zigzag_len") = 4,
        py::arg("category") = std::nullopt);

    m.def("fixture_list", [] { return wrap(cmd_fixture_list()); });
    m.def(
        "fixture_run",
        [](const std::string& name) {
            py::gil_scoped_release unlocked;
            return wrap(cmd_fixture_run(name));
        },
        py::arg("name"));
    m.def("fixture_files", &fixture_files);
    m.def("fixture_file", &fixture_file, py::arg("name"));
}
