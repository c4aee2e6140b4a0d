#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "zkstrip/app.hpp"
#include "zkstrip/config.hpp"
#include "zkstrip/decay.hpp"
#include "zkstrip/diagnostics.hpp"
#include "zkstrip/evolution.hpp"
#include "zkstrip/output.hpp"
#include "zkstrip/smoothstep.hpp"
#include "zkstrip/spectral.hpp"
#include "zkstrip/weights.hpp"

namespace py = pybind11;
using namespace zk;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const Field& f) {
  Array a({f.grid.nx, f.grid.ny});
  std::copy(f.values.begin(), f.values.end(), a.mutable_data());
  return a;
}

Field from_array(const StripGrid& g, const Array& a) {
  if (a.ndim() != 2 || static_cast<std::size_t>(a.shape(0)) != g.nx ||
      static_cast<std::size_t>(a.shape(1)) != g.ny)
    throw ValidationError("array shape must be (nx, ny)");
  Field f(g);
  std::copy(a.data(), a.data() + a.size(), f.values.begin());
  return f;
}

py::dict records_dict(const Trajectory& t) {
  std::vector<double> time, l2, h1, energy;
  for (const DiagnosticRecord& r : t.records) {
    time.push_back(r.t);
    l2.push_back(r.l2);
    h1.push_back(r.h1);
    energy.push_back(r.energy);
  }
  py::dict d;
  d["t"] = py::array(py::cast(time));
  d["l2"] = py::array(py::cast(l2));
  d["h1"] = py::array(py::cast(h1));
  d["energy"] = py::array(py::cast(energy));
  for (std::size_t w = 0; w < t.weights.size(); ++w) {
    std::vector<double> v;
    for (const DiagnosticRecord& r : t.records) v.push_back(r.weighted_l2[w]);
    d[py::str("weighted_l2[" + t.weights[w].name() + "]")] = py::array(py::cast(v));
  }
  d["failed"] = t.failed;
  d["failure"] = t.failure;
  return d;
}

py::dict report_dict(const Report& r) {
  py::dict d;
  for (const auto& [k, v] : r) d[py::str(k)] = v;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pseudospectral ZK strip solver";

  py::register_exception<BlowupError>(m, "BlowupError", PyExc_RuntimeError);
  py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_NotImplementedError);

  py::class_<StripGrid>(m, "Grid")
      .def(py::init([](std::size_t nx, std::size_t ny, double x_min, double x_max, double width) {
             StripGrid g;
             g.nx = nx;
             g.ny = ny;
             g.x_min = x_min;
             g.x_max = x_max;
             g.width = width;
             g.validate();
             return g;
           }),
           py::arg("nx"), py::arg("ny"), py::arg("x_min"), py::arg("x_max"), py::arg("width"))
      .def_readonly("nx", &StripGrid::nx)
      .def_readonly("ny", &StripGrid::ny)
      .def_readonly("x_min", &StripGrid::x_min)
      .def_readonly("x_max", &StripGrid::x_max)
      .def_readonly("width", &StripGrid::width)
      .def_property_readonly("x", [](const StripGrid& g) {
        std::vector<double> v(g.nx);
        for (std::size_t i = 0; i < g.nx; ++i) v[i] = g.x(i);
        return py::array(py::cast(v));
      })
      .def_property_readonly("y", [](const StripGrid& g) {
        std::vector<double> v(g.ny);
        for (std::size_t j = 0; j < g.ny; ++j) v[j] = g.y(j);
        return py::array(py::cast(v));
      });

  m.def("forward_transform", [](const StripGrid& g, const Array& a) {
    const SpectralField s = forward_transform(from_array(g, a));
    py::array_t<std::complex<double>> out({g.nx, g.ny});
    std::copy(s.coeffs.begin(), s.coeffs.end(), out.mutable_data());
    return out;
  });
  m.def("inverse_transform", [](const StripGrid& g, const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& c) {
    if (c.ndim() != 2 || static_cast<std::size_t>(c.shape(0)) != g.nx ||
        static_cast<std::size_t>(c.shape(1)) != g.ny)
      throw ValidationError("array shape must be (nx, ny)");
    SpectralField s(g);
    std::copy(c.data(), c.data() + c.size(), s.coeffs.begin());
    return to_array(inverse_transform(s));
  });
  m.def("integrate", [](const StripGrid& g, const Array& a) { return integrate(from_array(g, a)); });

  m.def("smoothstep", &smoothstep);
  m.def("g_h", &g_h, py::arg("u"), py::arg("h"));
  m.def("g_h_prime", &g_h_prime, py::arg("u"), py::arg("h"));
  m.def("g_h_star", &g_h_star, py::arg("u"), py::arg("h"));
  m.def("eval_weight",
        [](const std::string& w, double x, int order) { return eval_weight(parse_weight(w), x, order); },
        py::arg("weight"), py::arg("x"), py::arg("order") = 0);
  m.def("kappa0_plateau", &kappa0_plateau);
  m.def("steklov_ratio", &steklov_ratio, py::arg("profile"), py::arg("width"));

  m.def("conserved_quantities", [](const StripGrid& g, const Array& a) {
    const Conserved c = conserved_quantities(from_array(g, a));
    py::dict d;
    d["l2_squared"] = c.l2_squared;
    d["energy"] = c.energy;
    d["hamiltonian"] = c.hamiltonian;
    d["gradient"] = c.gradient;
    d["cubic"] = c.cubic;
    return d;
  });

  m.def("validate_config", [](const std::string& text) { parse_config(text); },
        "Raises ValueError listing every problem of the document.");

  m.def("simulate",
        [](const std::string& text) {
          const RunSpec spec = parse_config(text);
          Probes p;
          p.weights = spec.weights;
          p.keep_snapshots = true;
          const Trajectory t = run(build_initial(spec), std::nullopt, build_coefficients(spec), spec.solver, p);
          py::dict d = records_dict(t);
          std::vector<Array> snaps;
          for (const Field& f : t.snapshots) snaps.push_back(to_array(f));
          d["snapshots"] = snaps;
          d["grid"] = spec.grid;
          return d;
        },
        py::arg("config"), "Runs a config document and returns its diagnostics.");

  m.def("run_scenario",
        [](const std::string& text) {
          const RunSpec spec = parse_config(text);
          if (!spec.scenario) throw ValidationError("config has no [scenario] block");
          const ScenarioRun r = run_scenario(spec.scenario->scenario, spec.grid, spec.solver,
                                             spec.scenario->check_beta.value_or(0.0));
          py::dict d = records_dict(r.traj);
          d["report"] = report_dict(decay_report_entries(r.report));
          d["weight"] = r.built.weight.name();
          return d;
        },
        py::arg("config"));

  m.def("csv", [](const std::string& text) {
    const RunSpec spec = parse_config(text);
    Probes p;
    p.weights = spec.weights;
    return csv_string(run(build_initial(spec), std::nullopt, build_coefficients(spec), spec.solver, p));
  });

  m.def("self_check", [] {
    std::ostringstream log;
    const int code = check_command(log, false);
    return py::make_tuple(code, log.str());
  });
}
