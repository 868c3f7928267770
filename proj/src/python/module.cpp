// Python bindings. Configurations and documents cross the boundary as JSON
// text; fields come back as complex numpy arrays of shape (ny, nx).

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ds2aw/config.hpp"
#include "ds2aw/error.hpp"
#include "ds2aw/fieldgen.hpp"
#include "ds2aw/modes.hpp"
#include "ds2aw/pipeline.hpp"
#include "ds2aw/report.hpp"
#include "ds2aw/theta.hpp"

namespace py = pybind11;
using namespace ds2aw;

namespace {

RunConfig config_from(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ConfigParse, std::string("config: ") + e.what());
  }
  return parse_config(doc);
}

py::array_t<Complex> to_array(const Field& f) {
  py::array_t<Complex> out({f.ny, f.nx});
  std::copy(f.u.begin(), f.u.end(), out.mutable_data());
  return out;
}

py::tuple snapshots(const std::vector<Field>& fields) {
  std::vector<double> times;
  py::list arrays;
  for (const Field& f : fields) {
    times.push_back(f.t);
    arrays.append(to_array(f));
  }
  return py::make_tuple(times, arrays);
}

CMatrix to_matrix(const py::array_t<Complex, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw Error(ErrorCode::InvalidArgument, "B must be two-dimensional");
  CMatrix B(a.shape(0), a.shape(1));
  for (py::ssize_t i = 0; i < a.shape(0); ++i)
    for (py::ssize_t j = 0; j < a.shape(1); ++j) B(i, j) = a.at(i, j);
  return B;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite-gap anomalous waves of the DS2 equation";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error;
      py::object instance = exc(e.what());
      instance.attr("code") = std::string(to_string(e.code()));
      instance.attr("exit_code") = exit_code(e.code());
      PyErr_SetObject(error.ptr(), instance.ptr());
    }
  });

  m.def("growth_rate", &growth_rate, py::arg("k_x"), py::arg("k_y"), py::arg("a") = 1.0);

  m.def(
      "analyze",
      [](const std::string& config) {
        const AnalyzeResult r = analyze(config_from(config));
        return modes_to_json(r.modes, r.report).dump();
      },
      py::arg("config"));

  m.def(
      "spectrum",
      [](const std::string& config) { return spectral_to_json(spectrum(config_from(config))).dump(); },
      py::arg("config"));

  m.def(
      "theta",
      [](const py::array_t<Complex, py::array::c_style | py::array::forcecast>& B,
         const std::vector<Complex>& z, int radius, double tail_tol) {
        ThetaParams p;
        p.B = to_matrix(B);
        p.truncation_radius = radius;
        p.tail_tolerance = tail_tol;
        CVector zv(static_cast<int>(z.size()));
        for (std::size_t i = 0; i < z.size(); ++i) zv[static_cast<int>(i)] = z[i];
        return theta(zv, p);
      },
      py::arg("B"), py::arg("z"), py::arg("radius") = 8, py::arg("tail_tol") = 1e-12);

  m.def(
      "evaluate",
      [](const std::string& config, double x, double y, double t) {
        const RunConfig cfg = config_from(config);
        const SpectralData sd = spectrum(cfg);
        std::vector<double> times = cfg.times;
        times.push_back(t);
        RunConfig probe = cfg;
        probe.times = times;
        return FiniteGapSolution(sd, theta_params_for(probe, sd))(x, y, t);
      },
      py::arg("config"), py::arg("x"), py::arg("y"), py::arg("t"));

  m.def(
      "evolve_fieldgen",
      [](const std::string& config, int threads) {
        const RunConfig cfg = config_from(config);
        std::vector<Field> fields;
        {
          py::gil_scoped_release release;
          fields = evolve_fieldgen(cfg, threads);
        }
        return snapshots(fields);
      },
      py::arg("config"), py::arg("threads") = 1);

  m.def(
      "evolve_reference",
      [](const std::string& config) {
        const RunConfig cfg = config_from(config);
        std::vector<Field> fields;
        {
          py::gil_scoped_release release;
          fields = evolve_reference(cfg);
        }
        return snapshots(fields);
      },
      py::arg("config"));
}
