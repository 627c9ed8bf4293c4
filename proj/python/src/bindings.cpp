#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lpg/besov.hpp"
#include "lpg/calculus.hpp"
#include "lpg/error.hpp"
#include "lpg/families.hpp"
#include "lpg/harness.hpp"
#include "lpg/inequalities.hpp"
#include "lpg/multipliers.hpp"

namespace py = pybind11;
using namespace lpg;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

SampledFunction to_sampled(const Grid& grid, const CArray& a) {
  if (static_cast<std::size_t>(a.size()) != grid.size())
    throw InvalidArgument("array has " + std::to_string(a.size()) + " samples, grid has " + std::to_string(grid.size()));
  return SampledFunction(grid, std::vector<Complex>(a.data(), a.data() + a.size()));
}

CArray to_array(const SampledFunction& f) {
  std::vector<py::ssize_t> shape(f.grid().counts().begin(), f.grid().counts().end());
  CArray out(shape);
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

Boundary boundary_from(const std::string& s) {
  if (s == "periodic") return Boundary::Periodic;
  if (s == "truncated") return Boundary::Truncated;
  throw InvalidArgument("boundary must be 'periodic' or 'truncated'");
}

DyadicPartition partition_for(const RocklandOp& op, const std::string& smoothness) {
  return DyadicPartition(DyadicPartition::l_max_for(op.lambda_max()), smoothness_from_string(smoothness));
}

CalculusOptions calculus(double tolerance, int max_degree) {
  CalculusOptions o;
  o.tolerance = tolerance;
  o.max_degree = max_degree;
  return o;
}

// Python callables are invoked from worker threads, so take the GIL per call.
ScalarMultiplier from_callable(py::function fn, std::string name) {
  auto holder = std::make_shared<py::function>(std::move(fn));
  return {[holder](double l) {
            py::gil_scoped_acquire gil;
            return (*holder)(l).cast<Complex>();
          },
          std::move(name), std::nullopt};
}

}  // namespace

PYBIND11_MODULE(_lpg, m) {
  m.doc() = "Littlewood-Paley analysis on model graded groups";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<Grid>(m, "Grid")
      .def(py::init([](std::vector<double> half, std::vector<int> counts, const std::string& boundary) {
             return Grid(std::move(half), std::move(counts), boundary_from(boundary));
           }),
           py::arg("half_extent"), py::arg("counts"), py::arg("boundary") = "periodic")
      .def_property_readonly("shape", [](const Grid& g) { return g.counts(); })
      .def_property_readonly("half_extent", [](const Grid& g) { return g.half_extents(); })
      .def_property_readonly("size", &Grid::size)
      .def_property_readonly("cell_volume", &Grid::cell_volume)
      .def_property_readonly("periodic", [](const Grid& g) { return g.boundary() == Boundary::Periodic; })
      .def("axis",
           [](const Grid& g, std::size_t a) {
             if (a >= g.dim()) throw py::index_error("axis out of range");
             std::vector<double> x(g.count(a));
             for (int k = 0; k < g.count(a); ++k) x[k] = g.coordinate(a, k);
             return py::array_t<double>(x.size(), x.data());
           })
      .def("refined", &Grid::refined)
      .def("__repr__", [](const Grid& g) { return "<Grid " + std::to_string(g.size()) + " nodes>"; });

  py::class_<RocklandOp>(m, "Operator")
      .def_property_readonly("grid", &RocklandOp::grid)
      .def_property_readonly("nu", &RocklandOp::nu)
      .def_property_readonly("Q", [](const RocklandOp& op) { return op.spec().Q(); })
      .def_property_readonly("lambda_max", &RocklandOp::lambda_max)
      .def_property_readonly("group", [](const RocklandOp& op) { return to_string(op.spec().kind()); })
      .def_property_readonly("has_symbol", &RocklandOp::has_symbol);

  m.def(
      "abelian_operator",
      [](const std::vector<std::pair<long, long>>& weights, std::vector<double> half, std::vector<int> counts,
         const std::vector<int>& exponents) {
        std::vector<Rational> w;
        for (auto [n, d] : weights) w.emplace_back(n, d);
        const auto spec = GroupSpec::make(GroupKind::AbelianGraded, w);
        return abelian_symbol_operator(spec, Grid(std::move(half), std::move(counts), Boundary::Periodic), exponents);
      },
      py::arg("weights"), py::arg("half_extent"), py::arg("counts"), py::arg("exponents"),
      "Rockland operator sum_i (-d_i^2)^{e_i} on a periodic grid; weights are (num, den) pairs.");
  m.def(
      "heisenberg_operator",
      [](std::vector<double> half, std::vector<int> counts) {
        return heisenberg_sublaplacian(Grid(std::move(half), std::move(counts), Boundary::Truncated));
      },
      py::arg("half_extent"), py::arg("counts"), "Finite-difference sub-Laplacian on a truncated box.");

  py::class_<ScalarMultiplier>(m, "Multiplier")
      .def(py::init(&from_callable), py::arg("fn"), py::arg("name") = "callable")
      .def("__call__", [](const ScalarMultiplier& s, double l) { return s(l); })
      .def_readonly("name", &ScalarMultiplier::name);
  m.def("exp_decay", &exponential_decay, py::arg("rate"));
  m.def("imaginary_power", &imaginary_power, py::arg("tau"));
  m.def("smooth_cutoff", &smooth_cutoff, py::arg("level"), py::arg("width") = 0.5);

  m.def("apply", [](const RocklandOp& op, const CArray& f) { return to_array(apply(op, to_sampled(op.grid(), f))); },
        py::arg("op"), py::arg("f"));
  m.def(
      "apply_multiplier",
      [](const RocklandOp& op, const ScalarMultiplier& mult, const CArray& f, double tolerance, int max_degree) {
        const auto in = to_sampled(op.grid(), f);
        SampledFunction out(op.grid());
        {
          py::gil_scoped_release nogil;
          out = apply_multiplier(op, mult, in, calculus(tolerance, max_degree)).value;
        }
        return to_array(out);
      },
      py::arg("op"), py::arg("m"), py::arg("f"), py::arg("tolerance") = 1e-8, py::arg("max_degree") = 4096);
  m.def(
      "band_project",
      [](const RocklandOp& op, double level, const CArray& f) {
        return to_array(band_project(op, level, to_sampled(op.grid(), f)));
      },
      py::arg("op"), py::arg("level"), py::arg("f"));
  m.def(
      "blocks",
      [](const RocklandOp& op, const CArray& f, const std::string& smoothness, bool inhomogeneous) {
        const auto in = to_sampled(op.grid(), f);
        std::vector<SampledFunction> bs;
        {
          py::gil_scoped_release nogil;
          bs = blocks(op, partition_for(op, smoothness), in, inhomogeneous);
        }
        std::vector<CArray> out;
        for (const auto& b : bs) out.push_back(to_array(b));
        return out;
      },
      py::arg("op"), py::arg("f"), py::arg("smoothness") = "bump", py::arg("inhomogeneous") = false);

  m.def(
      "lp_norm", [](const Grid& g, const CArray& f, double p) { return lp_norm(to_sampled(g, f), p); }, py::arg("grid"),
      py::arg("f"), py::arg("p"));
  m.def(
      "besov_norm",
      [](const RocklandOp& op, const CArray& f, double r, double p, double q, bool homogeneous,
         const std::string& smoothness) {
        const auto in = to_sampled(op.grid(), f);
        py::gil_scoped_release nogil;
        return besov_norm(op, partition_for(op, smoothness), in, {r, p, q, homogeneous});
      },
      py::arg("op"), py::arg("f"), py::arg("r"), py::arg("p"), py::arg("q"), py::arg("homogeneous") = true,
      py::arg("smoothness") = "bump");
  m.def(
      "nikolskii_slope",
      [](const RocklandOp& op, const CArray& f, double p, double q, const std::vector<double>& levels) {
        const auto in = to_sampled(op.grid(), f);
        SlopeReport r;
        {
          py::gil_scoped_release nogil;
          r = nikolskii_experiment(op, in, p, q, levels);
        }
        py::dict d;
        d["fitted_slope"] = r.fitted_slope;
        d["theoretical_slope"] = r.theoretical_slope;
        d["residual"] = r.residual;
        d["constant"] = r.constant;
        d["ratios"] = r.ordinates;
        return d;
      },
      py::arg("op"), py::arg("f"), py::arg("p"), py::arg("q"), py::arg("levels"),
      "Fit log2(||T_L f||_q / ||T_L f||_p) against log2 L for the sharp band projector T_L.");
  m.def("nikolskii_constant", &nikolskii_constant_abelian, py::arg("op"), py::arg("p"), py::arg("q"));

  m.def(
      "standard_family",
      [](const Grid& g, std::uint64_t seed) {
        py::dict d;
        for (const auto& mem : standard_family(g, seed)) d[py::str(mem.name)] = to_array(mem.f);
        return d;
      },
      py::arg("grid"), py::arg("seed") = 0);
  m.def("spike", [](const Grid& g) { return to_array(spike(g)); }, py::arg("grid"));
  m.def(
      "gaussian", [](const Grid& g, const std::vector<double>& w) { return to_array(gaussian(g, w)); },
      py::arg("grid"), py::arg("widths"));

  m.def("list_experiments", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : list_experiments()) out.emplace_back(e.name, e.reference);
    return out;
  });
  m.def(
      "run_config",
      [](const std::string& json_text) {
        const auto cfg = parse_config(json_text);
        py::gil_scoped_release nogil;
        return manifest_json(run(cfg));
      },
      py::arg("json_text"), "Run an experiment config given as JSON text; returns the manifest as JSON text.");
  m.def("emit_plot_data", &emit_plot_data, py::arg("manifest_path"));
  m.attr("inf") = kInf;
}
