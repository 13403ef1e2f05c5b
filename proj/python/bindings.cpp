// Python bindings. Structured results cross as JSON text and are decoded on
// the Python side.

#include "aokb/cli.hpp"
#include "aokb/errors.hpp"
#include "aokb/filtration.hpp"
#include "aokb/okounkov.hpp"
#include "aokb/surface_model.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <tuple>

namespace py = pybind11;
using namespace aokb;

namespace {

EnumerationOptions options(std::uint64_t budget, int workers) { return {budget, workers}; }

std::vector<std::pair<std::string, std::string>> point_strings(const std::vector<RationalPoint>& pts) {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.emplace_back(rational_string(p.x), rational_string(p.y));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Arithmetic Okounkov bodies on the projective line over Z";
  m.attr("__version__") = AOKB_VERSION;

  // Translators run newest first, so the base class goes in first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  m.def("field_info", [](const std::string& desc) {
    const NumberField f = make_field(desc);
    return py::dict(py::arg("descriptor") = f.descriptor(), py::arg("degree") = f.degree(),
                    py::arg("discriminant") = f.discriminant().get_str(),
                    py::arg("minkowski_constant") = minkowski_constant(f).mid());
  }, py::arg("field"));

  m.def("h0_power", [](const std::string& bundle, int k, std::uint64_t budget, int workers) {
    const SurfaceBundle b = parse_bundle(bundle);
    LogScalar h;
    {
      py::gil_scoped_release release;
      h = h0_hat_power(b, k, options(budget, workers));
    }
    return std::make_tuple(h.to_string(), h.approx());
  }, py::arg("bundle"), py::arg("k"), py::arg("budget") = 100'000'000, py::arg("workers") = 0);

  m.def("valuation_image", [](const std::string& bundle, long p, const std::string& point, int k, std::uint64_t budget,
                              int workers) {
    const SurfaceBundle b = parse_bundle(bundle);
    const FlagData f = parse_flag(p, point);
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    py::gil_scoped_release release;
    for (const auto& v : valuation_image(b, f, k, ImagePath::Auto, options(budget, workers))) out.emplace_back(v.nu1, v.nu2);
    return out;
  }, py::arg("bundle"), py::arg("p"), py::arg("point"), py::arg("k"), py::arg("budget") = 100'000'000,
     py::arg("workers") = 0);

  m.def("lambda_points", [](const std::string& bundle, long p, const std::string& point, int k_max, std::uint64_t budget,
                            int workers) {
    const SurfaceBundle b = parse_bundle(bundle);
    const FlagData f = parse_flag(p, point);
    std::vector<RationalPoint> pts;
    {
      py::gil_scoped_release release;
      pts = lambda_points(b, f, k_max, options(budget, workers));
    }
    return point_strings(pts);
  }, py::arg("bundle"), py::arg("p"), py::arg("point"), py::arg("k_max"), py::arg("budget") = 100'000'000,
     py::arg("workers") = 0);

  m.def("convex_hull", [](const std::vector<std::pair<std::string, std::string>>& pts) {
    std::vector<RationalPoint> v;
    for (const auto& [x, y] : pts) v.push_back({parse_rational(x), parse_rational(y)});
    return to_json(convex_hull(std::move(v))).dump();
  }, py::arg("points"));

  m.def("run", [](const std::string& config_json) {
    RunConfig cfg;
    cfg.apply_json(nlohmann::json::parse(config_json));
    RunOutput out;
    {
      py::gil_scoped_release release;
      out = run(cfg);
    }
    return std::make_tuple(out.exit_code, out.json.dump(), out.csv, out.svg);
  }, py::arg("config_json"));
}
