#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cgc/job.hpp"
#include "cgc/pseudosphere.hpp"

namespace py = pybind11;
using namespace cgc;

namespace {

std::array<std::array<cplx, 3>, 3> to_rows(const CMat3& m) {
  std::array<std::array<cplx, 3>, 3> out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out[r][c] = m(r, c);
  return out;
}

SimpleFactor make_factor(cplx alpha, cplx a, cplx b) {
  return SimpleFactor(alpha, IsotropicLine(a, b));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "constant-curvature surfaces by loop-group dressing";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<PoleError>(m, "PoleError", PyExc_ValueError);
  py::register_exception<AdmissibilityError>(m, "AdmissibilityError",
                                             PyExc_ArithmeticError);

  m.def("run_job", [](const std::string& config_json) {
    JobConfig cfg = parse_job_config(config_json);
    return report_to_json(run_job(cfg).report);
  },
        py::arg("config_json"),
        "run a job config (JSON text) and return the verification report as "
        "JSON text; side outputs named in the config are written as well");

  m.def("surface_points", [](const std::string& config_json,
                             const std::string& part) {
    JobConfig cfg = parse_job_config(config_json);
    SurfaceField s = job_surface(cfg);
    std::vector<std::array<double, 3>> pts;
    pts.reserve(s.p.size());
    for (const CVec3& v : s.p) {
      if (part == "real")
        pts.push_back({v(0).real(), v(1).real(), v(2).real()});
      else if (part == "imag")
        pts.push_back({v(0).imag(), v(1).imag(), v(2).imag()});
      else
        throw ConfigError("surface_points: part must be 'real' or 'imag'");
    }
    return py::make_tuple(cfg.grid.nx, cfg.grid.ny, pts);
  },
        py::arg("config_json"), py::arg("part") = "real",
        "build the surface for a job config and return (nx, ny, points) with "
        "points row-major over the grid");

  m.def("simple_factor", [](cplx alpha, cplx line_a, cplx line_b, cplx lam) {
    return to_rows(eval_simple_factor(make_factor(alpha, line_a, line_b), lam));
  },
        py::arg("alpha"), py::arg("line_a"), py::arg("line_b"),
        py::arg("lam"),
        "evaluate the simple dressing factor with the given pole and "
        "isotropic line at a spectral point");

  m.def("permutability_defect",
        [](cplx a1, cplx la1, cplx lb1, cplx a2, cplx la2, cplx lb2,
           const std::vector<cplx>& samples) {
          return permutability_defect(make_factor(a1, la1, lb1),
                                      make_factor(a2, la2, lb2), samples);
        },
        py::arg("alpha1"), py::arg("line_a1"), py::arg("line_b1"),
        py::arg("alpha2"), py::arg("line_a2"), py::arg("line_b2"),
        py::arg("samples"),
        "sup over the samples of the Bianchi permutability residual for two "
        "factors");

  m.def("default_tolerances", [] {
    return default_tolerances();
  },
        "default tolerance for every verification check name");
}
