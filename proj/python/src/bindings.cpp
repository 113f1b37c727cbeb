#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hypcert/cones.hpp"
#include "hypcert/cover.hpp"
#include "hypcert/dynsys.hpp"
#include "hypcert/enclose.hpp"
#include "hypcert/interval.hpp"
#include "hypcert/periodic.hpp"
#include "hypcert/pipeline.hpp"

namespace py = pybind11;
using namespace hypcert;

namespace {

IntervalVector to_box(const std::vector<std::pair<double, double>>& bounds) {
  IntervalVector box(bounds.size());
  for (std::size_t i = 0; i < bounds.size(); ++i) box[i] = Interval(bounds[i].first, bounds[i].second);
  return box;
}

std::vector<std::pair<double, double>> from_box(const IntervalVector& box) {
  std::vector<std::pair<double, double>> r;
  for (std::size_t i = 0; i < box.size(); ++i) r.emplace_back(box[i].lo(), box[i].hi());
  return r;
}

std::vector<std::vector<std::int64_t>> coords(const std::vector<Cube>& cubes) {
  std::vector<std::vector<std::int64_t>> r;
  for (const auto& c : cubes) r.push_back(c.coords);
  return r;
}

py::dict proof_dict(const RigorousOrbitProof& p) {
  py::dict d;
  d["centre"] = p.centre;
  d["radius"] = p.radius;
  d["newton_image"] = from_box(p.newton_image);
  d["verdict"] = p.verdict;
  return d;
}

GridSpec make_grid(const std::vector<std::pair<double, double>>& domain, int resolution,
                   std::vector<bool> periodic) {
  if (periodic.empty()) periodic.assign(domain.size(), false);
  if (periodic.size() != domain.size()) throw std::invalid_argument("periodic must match domain");
  std::vector<GridSpec::RealDim> dims;
  for (std::size_t i = 0; i < domain.size(); ++i) dims.push_back({domain[i].first, domain[i].second, periodic[i]});
  return GridSpec::from_real(dims, resolution);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rigorous enclosures and hyperbolicity certificates for maps.";

  py::register_exception<IntervalError>(m, "IntervalError", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NewtonError>(m, "NewtonError", PyExc_RuntimeError);

  py::class_<Interval>(m, "Interval")
      .def(py::init<double>())
      .def(py::init<double, double>())
      .def_property_readonly("lo", &Interval::lo)
      .def_property_readonly("hi", &Interval::hi)
      .def("mid", &Interval::mid)
      .def("width", &Interval::width)
      .def("contains", py::overload_cast<double>(&Interval::contains, py::const_))
      .def("contains", py::overload_cast<const Interval&>(&Interval::contains, py::const_))
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(py::self / py::self)
      .def(-py::self)
      .def(py::self == py::self)
      .def("__repr__", [](const Interval& a) {
        std::ostringstream os;
        os << a;
        return os.str();
      });
  m.def("sqr", py::overload_cast<const Interval&>(&sqr));
  m.def("sqrt", py::overload_cast<const Interval&>(&hypcert::sqrt));
  m.def("sin", py::overload_cast<const Interval&>(&hypcert::sin));
  m.def("cos", py::overload_cast<const Interval&>(&hypcert::cos));
  m.def("pi_interval", &pi_interval);
  m.def("enclose_literal", &enclose_literal, "Tight enclosure of the decimal literal nearest x.");

  m.def(
      "min_cover",
      [](const std::vector<std::pair<double, double>>& domain, int resolution,
         const std::vector<std::pair<double, double>>& box, std::vector<bool> periodic) {
        const CoverResult r = min_cover(make_grid(domain, resolution, std::move(periodic)), to_box(box));
        return py::make_tuple(coords(r.cubes), r.escaped);
      },
      py::arg("domain"), py::arg("resolution"), py::arg("box"), py::arg("periodic") = std::vector<bool>{},
      "Cells every cover of the box must contain, and whether the box escapes the domain.");
  m.def(
      "realize",
      [](const std::vector<std::pair<double, double>>& domain, int resolution,
         const std::vector<std::int64_t>& cube, std::vector<bool> periodic) {
        return from_box(realize(make_grid(domain, resolution, std::move(periodic)), Cube{cube}));
      },
      py::arg("domain"), py::arg("resolution"), py::arg("cube"), py::arg("periodic") = std::vector<bool>{});

  py::class_<MapSystem>(m, "MapSystem")
      .def_property_readonly("name", &MapSystem::name)
      .def_property_readonly("dimension", &MapSystem::dimension)
      .def("eval", &MapSystem::eval)
      .def("jac", &MapSystem::jac)
      .def("eval_box", [](const MapSystem& f, const std::vector<std::pair<double, double>>& box) {
        return from_box(f.eval_i(to_box(box)));
      });
  py::class_<SmaleMap, MapSystem>(m, "SmaleMap").def(py::init<>());
  py::class_<HenonMap, MapSystem>(m, "HenonMap")
      .def(py::init<double, double>(), py::arg("a"), py::arg("b"))
      .def_property_readonly("a", &HenonMap::a)
      .def_property_readonly("b", &HenonMap::b);

  m.def(
      "prove_fixed_point",
      [](const MapSystem& f, const std::vector<double>& x, double r, const std::vector<double>& periods) {
        return proof_dict(prove_fixed_point(f, x, r, periods));
      },
      py::arg("map"), py::arg("centre"), py::arg("radius"), py::arg("periods") = std::vector<double>{});
  m.def(
      "prove_period_two",
      [](const MapSystem& f, const std::vector<double>& x, const std::vector<double>& y, double r,
         const std::vector<double>& periods) { return proof_dict(prove_period_two(f, x, y, r, periods)); },
      py::arg("map"), py::arg("x"), py::arg("y"), py::arg("radius"),
      py::arg("periods") = std::vector<double>{});

  py::class_<Pipeline>(m, "Pipeline")
      .def(py::init([](const std::string& config_json) {
             return Pipeline(PipelineConfig::from_json(nlohmann::json::parse(config_json)));
           }),
           py::arg("config_json"))
      .def_static("from_file",
                  [](const std::string& path) { return Pipeline(PipelineConfig::load(path)); })
      .def("enclose", &Pipeline::enclose, py::call_guard<py::gil_scoped_release>())
      .def("find_cycles", &Pipeline::find_cycles, py::call_guard<py::gil_scoped_release>())
      .def("refine", &Pipeline::refine, py::call_guard<py::gil_scoped_release>())
      .def("compute_frames", &Pipeline::compute_frames, py::call_guard<py::gil_scoped_release>())
      .def("verify", &Pipeline::verify, py::call_guard<py::gil_scoped_release>())
      .def("certify", &Pipeline::certify, py::call_guard<py::gil_scoped_release>())
      .def("run", &Pipeline::run, py::arg("out_dir"), py::call_guard<py::gil_scoped_release>())
      .def_property_readonly("vertex_count", [](const Pipeline& p) { return p.graph().vertex_count(); })
      .def_property_readonly("edge_count", [](const Pipeline& p) { return p.graph().edge_count(); })
      .def_property_readonly("boxes", [](const Pipeline& p) { return coords(p.graph().vertices()); })
      .def_property_readonly("periodic_points",
                             [](const Pipeline& p) {
                               std::vector<std::vector<std::vector<double>>> r;
                               for (const auto& level : p.points()) {
                                 auto& out = r.emplace_back();
                                 for (const auto& c : level) out.push_back(c.point);
                               }
                               return r;
                             })
      .def_property_readonly("unverified",
                             [](const Pipeline& p) -> py::object {
                               if (!p.cones()) return py::none();
                               return py::cast(p.cones()->unverified);
                             })
      .def_property_readonly("rates",
                             [](const Pipeline& p) -> py::object {
                               if (!p.rates()) return py::none();
                               const CertifiedRates& r = *p.rates();
                               py::dict d;
                               d["lambda_bar"] = r.lambda_bar;
                               d["lambda"] = r.lambda;
                               d["d1"] = r.d1;
                               d["d2"] = r.d2;
                               d["r"] = r.r;
                               d["l"] = r.l;
                               d["c"] = r.c;
                               return d;
                             })
      .def("summary", &Pipeline::summary)
      .def("exit_code", &Pipeline::exit_code);
}
