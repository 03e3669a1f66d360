#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nlw/error.hpp"
#include "nlw/ground_state.hpp"
#include "nlw/multibubble.hpp"
#include "nlw/runner.hpp"

namespace py = pybind11;
using namespace nlw;

namespace {

py::array_t<double> to_array(std::span<const double> v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict constants_dict(int dim) {
  const auto k = closed_form_constants(dim);
  py::dict d;
  d["dim"] = k.dim;
  d["interaction_constant"] = k.interaction_constant;
  d["lamW_L2_sq"] = k.lamW_L2_sq;
  d["lamW_L2_sq_published"] = k.lamW_L2_sq_published;
  d["omega_sq"] = k.omega_sq;
  d["pairing_UL"] = k.pairing_UL;
  d["E_W"] = k.E_W;
  d["grad_W_sq"] = k.grad_W_sq;
  return d;
}

py::dict record_dict(const RunRecord& r) {
  py::dict d;
  d["exit_code"] = r.exit_code;
  d["metadata"] = r.metadata;
  py::dict files;
  for (const auto& [name, text] : r.files) files[py::str(name)] = text;
  d["files"] = files;
  if (r.trajectory) d["trajectory"] = py::bytes(*r.trajectory);
  return d;
}

RunRecord dispatch(const std::string& scenario, const ScenarioConfig& c) {
  if (scenario == "verify-constants") return run_verify_constants(c);
  if (scenario == "eigen") return run_eigen(c);
  if (scenario == "evolve") return run_evolve(c);
  if (scenario == "collide") return run_collide(c);
  if (scenario == "reduced") return run_reduced(c);
  throw ConfigError("unknown scenario: " + scenario);
}

}  // namespace

PYBIND11_MODULE(_nlwlab, m) {
  m.doc() = "Radial energy-critical wave equation: profiles, constants and scenario runs.";

  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("version", &version);

  m.def("W", py::vectorize([](double r, int dim) { return W(r, dim); }), py::arg("r"), py::arg("dim"));
  m.def("LambdaW", py::vectorize([](double r, int dim) { return LambdaW(r, dim); }), py::arg("r"), py::arg("dim"));

  m.def("closed_form_constants", &constants_dict, py::arg("dim"));
  m.def(
      "quadrature_constants",
      [](int dim) {
        const auto q = quadrature_constants(dim);
        py::dict d;
        d["interaction"] = q.interaction;
        d["lamW_L2_sq"] = q.lamW_L2_sq;
        d["pairing_UL"] = q.pairing_UL;
        d["grad_W_sq"] = q.grad_W_sq;
        d["potential_W"] = q.potential_W;
        return d;
      },
      py::arg("dim"));

  m.def(
      "synthesize",
      [](std::vector<int> signs, std::vector<double> scales, int dim, std::size_t n, double r_max) {
        const auto g = make_grid(dim, n, r_max);
        const auto p = synthesize({std::move(signs), std::move(scales)}, g);
        return py::make_tuple(to_array(g->nodes()), to_array(p.u), to_array(p.udot));
      },
      py::arg("signs"), py::arg("scales"), py::arg("dim") = 6, py::arg("n") = 4096, py::arg("r_max") = 50.0,
      "Returns (r, u, udot) for the bubble sum on a cell-centered grid.");

  m.def("energy", [](std::vector<int> signs, std::vector<double> scales, int dim, std::size_t n, double r_max) {
    return nonlinear_energy(synthesize({std::move(signs), std::move(scales)}, make_grid(dim, n, r_max)));
  }, py::arg("signs"), py::arg("scales"), py::arg("dim") = 6, py::arg("n") = 4096, py::arg("r_max") = 50.0);

  m.def("normalize_config", [](const std::string& text) { return to_text(parse_config(text)); }, py::arg("text"));

  m.def(
      "run",
      [](const std::string& scenario, const std::string& config_text) {
        const auto c = parse_config(config_text);
        RunRecord r;
        {
          py::gil_scoped_release release;
          r = dispatch(scenario, c);
        }
        return record_dict(r);
      },
      py::arg("scenario"), py::arg("config") = "",
      "Runs a scenario from a config document. Returns exit_code, metadata (JSON text) and files.");
}
