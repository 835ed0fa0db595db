#include "defring/error.hpp"
#include "defring/report.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

std::string run(const std::string& command, const std::string& input, const std::string& quiver, const std::string& ring,
                int truncate, int max_arity, int dmax, bool abelian, bool gma, int threads)
{
    defring::RunConfig cfg;
    cfg.command = command;
    cfg.input = input;
    cfg.quiver = quiver;
    cfg.ring = ring;
    cfg.truncate = truncate;
    cfg.max_arity = max_arity;
    cfg.dmax = dmax;
    cfg.abelian = abelian;
    cfg.gma = gma;
    cfg.threads = threads;
    py::gil_scoped_release nogil;
    return defring::run_command(cfg).doc.dump();
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "defring native core";
    static py::exception<defring::Refusal> refusal(m, "Refusal");
    static py::exception<defring::CapExceeded> cap(m, "CapExceeded", PyExc_MemoryError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const defring::Refusal& e) {
            refusal(e.what());
        } catch (const defring::CapExceeded& e) {
            cap(e.what());
        } catch (const defring::ValidationError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const defring::UsageError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });
    m.attr("schema_version") = defring::kSchemaVersion;
    m.def("run", &run, py::arg("command"), py::arg("input") = "", py::arg("quiver") = "", py::arg("ring") = "eps:1",
          py::arg("truncate") = 0, py::arg("max_arity") = 0, py::arg("dmax") = 0, py::arg("abelian") = false,
          py::arg("gma") = false, py::arg("threads") = 1,
          "Run a subcommand and return the report as a JSON string.");
}
