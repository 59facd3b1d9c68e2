// Python bindings.  Results and reports cross over as plain dicts (via the
// JSON writers), so the Python side sees the same fields as the CLI.
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "orlicz/bodies.hpp"
#include "orlicz/errors.hpp"
#include "orlicz/functionals.hpp"
#include "orlicz/harness.hpp"
#include "orlicz/io.hpp"
#include "orlicz/mixed_volumes.hpp"

namespace py = pybind11;
using namespace orlicz;

namespace {

py::object to_py(const io::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

OptimizerOptions opts_from(int restarts, int max_iter, double tol, std::uint64_t seed, int threads) {
  return OptimizerOptions{restarts, max_iter, tol, seed, threads};
}

// python callables must stay on the calling thread
int threads_for(const OrliczFunction& phi, int threads) { return phi.kind() == PhiKind::Custom ? 1 : threads; }

const char* class_name(PhiClass c) {
  switch (c) {
    case PhiClass::Phi: return "Phi";
    case PhiClass::Psi: return "Psi";
    case PhiClass::Neither: return "Neither";
    case PhiClass::ConstantBoth: return "ConstantBoth";
  }
  return "?";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Orlicz affine and geominimal surface areas";

  // leaked on purpose: must outlive interpreter teardown
  static auto* exc = new py::exception<Error>(m, "OrliczError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string code(to_string(e.code()));
      py::object err = exc->attr("__call__")(code + ": " + e.what());
      err.attr("code") = code;
      PyErr_SetObject(exc->ptr(), err.ptr());
    }
  });

  py::class_<SphereGrid>(m, "SphereGrid")
      .def_property_readonly("dim", &SphereGrid::dim)
      .def("__len__", &SphereGrid::size)
      .def_property_readonly("nodes", &SphereGrid::nodes)
      .def("weight", &SphereGrid::weight);
  m.def("build_grid", &build_grid, py::arg("dim"), py::arg("resolution"));

  py::class_<ConvexBody>(m, "ConvexBody")
      .def_static("ball", &ConvexBody::ball, py::arg("radius"), py::arg("dim"))
      .def_static("ellipsoid", &ConvexBody::ellipsoid, py::arg("matrix"))
      .def_static("vpolytope", &ConvexBody::vpolytope, py::arg("points"))
      .def_static("hpolytope", &ConvexBody::hpolytope, py::arg("normals"), py::arg("offsets"))
      .def_static("smooth", &ConvexBody::smooth, py::arg("grid"), py::arg("h"), py::arg("f") = py::none())
      .def_static("from_json",
                  [](const std::string& text, int dim) { return io::convex_from_json(io::parse_json(text), dim); },
                  py::arg("text"), py::arg("dim") = 2)
      .def("to_json", [](const ConvexBody& K) { return io::to_json(K).dump(); })
      .def_property_readonly("dim", &ConvexBody::dim)
      .def_property_readonly("kind", [](const ConvexBody& K) { return to_string(K.kind()); })
      .def("volume", [](const ConvexBody& K) { return volume(K); })
      .def("support", [](const ConvexBody& K, const Vec& u) { return support(K, u); })
      .def("polar", [](const ConvexBody& K) { return polar(K); })
      .def("scale", [](const ConvexBody& K, double s) { return scale(K, s); })
      .def("apply", [](const ConvexBody& K, const Mat& A) { return apply_sl(K, SLTransform(A)); })
      .def("centroid", [](const ConvexBody& K) { return centroid(K); });

  m.def("random_sl", [](int dim, std::uint64_t seed, double max_cond) { return random_sl(dim, seed, max_cond).matrix; },
        py::arg("dim"), py::arg("seed"), py::arg("max_cond") = 20.0);

  py::class_<OrliczFunction>(m, "OrliczFunction")
      .def_static("power", &OrliczFunction::power, py::arg("p"), py::arg("dim"))
      .def_static("constant", &OrliczFunction::constant, py::arg("a"), py::arg("dim"))
      .def_static("arctan_inv_n", &OrliczFunction::arctan_inv_n, py::arg("dim"))
      .def_static("log1p_inv_n", &OrliczFunction::log1p_inv_n, py::arg("dim"))
      .def_static("exp_neg_inv_n", &OrliczFunction::exp_neg_inv_n, py::arg("dim"))
      .def_static("custom", &OrliczFunction::custom, py::arg("f"), py::arg("dim"), py::arg("name"))
      .def_static("parse", &io::parse_phi, py::arg("spec"), py::arg("dim"))
      .def("__call__", &OrliczFunction::operator())
      .def_property_readonly("name", &OrliczFunction::name)
      .def_property_readonly("dim", &OrliczFunction::dim)
      .def_property_readonly("cls", [](const OrliczFunction& f) { return class_name(f.cls()); })
      .def("__repr__", [](const OrliczFunction& f) { return "<OrliczFunction " + f.name() + ">"; });

  m.def(
      "v_phi",
      [](const ConvexBody& K, const ConvexBody& Q, const OrliczFunction& phi, const SphereGrid* grid) {
        return v_phi(K, Q, phi, grid).value;
      },
      py::arg("K"), py::arg("Q"), py::arg("phi"), py::arg("grid") = nullptr);
  m.def(
      "v_p",
      [](const ConvexBody& K, const ConvexBody& L, double p, bool polar_, const SphereGrid* grid) {
        return v_p(K, L, p, polar_, grid);
      },
      py::arg("K"), py::arg("L"), py::arg("p"), py::arg("polar") = false, py::arg("grid") = nullptr);
  m.def(
      "s_phi", [](const ConvexBody& K, const OrliczFunction& phi, const SphereGrid* grid) { return s_phi(K, phi, grid); },
      py::arg("K"), py::arg("phi"), py::arg("grid") = nullptr);
  m.def("lp_affine_closed_form",
        [](const ConvexBody& K, double p, const SphereGrid* grid) { return lp_affine_closed_form(K, p, grid); },
        py::arg("K"), py::arg("p"), py::arg("grid") = nullptr);
  m.def("ellipsoid_closed_form", &ellipsoid_closed_form, py::arg("E"), py::arg("phi"));

  auto functional = [&m](const char* name, auto fn) {
    m.def(
        name,
        [fn](const ConvexBody& K, const OrliczFunction& phi, const SphereGrid& grid, int restarts, int max_iter,
             double tol, std::uint64_t seed, int threads) {
          return to_py(io::to_json(fn(K, phi, grid, opts_from(restarts, max_iter, tol, seed, threads_for(phi, threads)))));
        },
        py::arg("K"), py::arg("phi"), py::arg("grid"), py::arg("restarts") = 8, py::arg("max_iter") = 5000,
        py::arg("tol") = 1e-6, py::arg("seed") = 0, py::arg("threads") = 0);
  };
  functional("affine_orlicz", [](const ConvexBody& K, const OrliczFunction& phi, const SphereGrid& g,
                                 const OptimizerOptions& o) { return affine_orlicz(K, phi, g, o); });
  functional("geominimal_orlicz", [](const ConvexBody& K, const OrliczFunction& phi, const SphereGrid& g,
                                     const OptimizerOptions& o) { return geominimal_orlicz(K, phi, g, o); });

  m.def(
      "golden_corpus",
      [](int dim, int smooth, int polytopes, int ellipsoids, int resolution, std::uint64_t seed) {
        std::vector<std::pair<std::string, ConvexBody>> out;
        for (auto& b : golden_corpus({dim, smooth, polytopes, ellipsoids, resolution, seed}))
          out.emplace_back(b.id, b.body);
        return out;
      },
      py::arg("dim") = 2, py::arg("smooth") = 20, py::arg("polytopes") = 10, py::arg("ellipsoids") = 5,
      py::arg("resolution") = 256, py::arg("seed") = 42);
  m.def("suite_names", &suite_names);
  m.def(
      "run_suite",
      [](const std::string& name, const std::vector<std::pair<std::string, ConvexBody>>& corpus,
         const std::vector<OrliczFunction>& phis, const SphereGrid& grid, double tol, int restarts,
         std::uint64_t seed, int max_pairs, bool csv) -> py::object {
        std::vector<CorpusBody> c;
        for (const auto& [id, body] : corpus) c.push_back({id, body});
        HarnessOptions o;
        o.tol = tol;
        o.optimizer.restarts = restarts;
        o.seed = seed;
        o.max_pairs = max_pairs;
        for (const auto& phi : phis)
          if (phi.kind() == PhiKind::Custom) o.optimizer.threads = 1;
        SuiteReport r = run_suite(name, c, phis, grid, o);
        if (csv) return py::str(io::report_csv(r));
        return to_py(io::to_json(r));
      },
      py::arg("name"), py::arg("corpus"), py::arg("phis") = std::vector<OrliczFunction>{}, py::arg("grid"),
      py::arg("tol") = 0.01, py::arg("restarts") = 4, py::arg("seed") = 42, py::arg("max_pairs") = 5,
      py::arg("csv") = false);
}
