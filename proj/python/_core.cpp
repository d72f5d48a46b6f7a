#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "fgw/barycenter.hpp"
#include "fgw/geodesic.hpp"
#include "fgw/linear_ot.hpp"
#include "fgw/loss_tensor.hpp"
#include "fgw/solver.hpp"
#include "fgw/toolkit.hpp"
#include "fgw/types.hpp"

namespace py = pybind11;
using namespace fgw;

namespace {

StructuredObject make_object(Matrix structure, Matrix features, std::optional<Vector> weights) {
  Histogram h = weights ? Histogram(std::move(*weights)) : Histogram::uniform(structure.rows());
  return StructuredObject(std::move(structure), std::move(features), std::move(h));
}

SolverParams make_solver_params(double alpha, int p, int q, int max_iters, double rel_tol,
                                int restarts, std::uint64_t seed) {
  SolverParams params;
  params.alpha = alpha;
  params.p = p;
  params.q = q;
  params.max_iters = max_iters;
  params.rel_tol = rel_tol;
  params.restarts = restarts;
  params.seed = seed;
  return params;
}

py::dict solution_dict(const FgwSolution& sol) {
  py::dict out;
  out["distance"] = sol.value;
  out["objective"] = sol.objective;
  out["coupling"] = sol.coupling.matrix();
  out["trace"] = sol.trace;
  out["restarts_used"] = sol.restarts_used;
  return out;
}

Coupling coupling_from_matrix(const Matrix& pi) {
  return Coupling(pi, Histogram(pi.rowwise().sum()), Histogram(pi.colwise().sum().transpose()));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fused Gromov-Wasserstein distances, barycenters and geodesics";

  py::register_exception<Error>(m, "FgwError", PyExc_RuntimeError);

  py::class_<StructuredObject>(m, "StructuredObject")
      .def(py::init(&make_object), py::arg("structure"), py::arg("features"),
           py::arg("weights") = std::nullopt,
           "Structured object from an n x n structure matrix, n x d features and\n"
           "optional positive weights (uniform when omitted).")
      .def_property_readonly("structure", &StructuredObject::structure)
      .def_property_readonly("features", &StructuredObject::features)
      .def_property_readonly("weights",
                             [](const StructuredObject& o) { return o.weights().weights(); })
      .def("__len__", &StructuredObject::size)
      .def("__repr__", [](const StructuredObject& o) {
        return "StructuredObject(n=" + std::to_string(o.size()) +
               ", d=" + std::to_string(o.feature_dim()) + ")";
      });

  m.def(
      "validate",
      [](const Matrix& structure, const Matrix& features, const Vector& weights) {
        py::list out;
        for (const auto& v : validate(structure, features, weights)) {
          py::dict item;
          item["code"] = v.describe();
          item["i"] = v.i;
          item["j"] = v.j;
          item["warning"] = v.warning;
          out.append(item);
        }
        return out;
      },
      py::arg("structure"), py::arg("features"), py::arg("weights"),
      "Returns the list of structured-object invariant violations (empty when valid).");

  m.def("feature_cost_matrix", &feature_cost_matrix, py::arg("src"), py::arg("dst"), py::arg("q"));

  m.def(
      "solve_linear_ot",
      [](const Matrix& cost, const Vector& a, const Vector& b) {
        OtSolution sol = solve_linear_ot(cost, Histogram(a), Histogram(b));
        py::dict out;
        out["coupling"] = sol.coupling.matrix();
        out["cost"] = sol.cost;
        out["iterations"] = sol.iterations;
        out["potential_source"] = sol.potential_source;
        out["potential_target"] = sol.potential_target;
        return out;
      },
      py::arg("cost"), py::arg("a"), py::arg("b"),
      "Exact linear optimal transport (network-simplex family).");

  m.def(
      "wasserstein",
      [](const StructuredObject& src, const StructuredObject& dst, int p) {
        return wasserstein_distance(src, dst, p);
      },
      py::arg("src"), py::arg("dst"), py::arg("p") = 2);

  m.def(
      "gromov_wasserstein",
      [](const StructuredObject& src, const StructuredObject& dst, int p, int q) {
        return gw_distance(src, dst, p, q);
      },
      py::arg("src"), py::arg("dst"), py::arg("p") = 1, py::arg("q") = 1);

  m.def(
      "fgw",
      [](const StructuredObject& src, const StructuredObject& dst, double alpha, int p, int q,
         int max_iters, double rel_tol, int restarts, std::uint64_t seed) {
        return solution_dict(
            solve_fgw(src, dst, make_solver_params(alpha, p, q, max_iters, rel_tol, restarts, seed)));
      },
      py::arg("src"), py::arg("dst"), py::arg("alpha") = 0.5, py::arg("p") = 1, py::arg("q") = 2,
      py::arg("max_iters") = 1000, py::arg("rel_tol") = 1e-9, py::arg("restarts") = 5,
      py::arg("seed") = 0,
      "Conditional-gradient FGW solve; returns distance, objective, coupling and trace.");

  m.def(
      "fgw_objective",
      [](const StructuredObject& src, const StructuredObject& dst, const Matrix& pi, double alpha,
         int p, int q) {
        SolverParams params = make_solver_params(alpha, p, q, 1000, 1e-9, 0, 0);
        return fgw_objective(src, dst, coupling_from_matrix(pi), params);
      },
      py::arg("src"), py::arg("dst"), py::arg("coupling"), py::arg("alpha") = 0.5,
      py::arg("p") = 1, py::arg("q") = 2);

  m.def(
      "apply_loss_tensor",
      [](const Matrix& c1, const Matrix& c2, const Matrix& pi, int q) {
        return apply_loss_tensor(c1, c2, coupling_from_matrix(pi), q);
      },
      py::arg("c1"), py::arg("c2"), py::arg("coupling"), py::arg("q") = 2);

  m.def("reparameterize_alpha", &reparameterize_alpha, py::arg("alpha_tilde"));

  m.def(
      "barycenter",
      [](const std::vector<StructuredObject>& inputs, std::optional<Vector> lambdas, Index size,
         double alpha, int q, int restarts, std::uint64_t seed, std::optional<Matrix> fixed_structure,
         std::optional<Matrix> fixed_features, int max_outer_iters) {
        Vector l = lambdas ? std::move(*lambdas)
                           : Vector::Constant(inputs.size(), 1.0 / inputs.size());
        BarycenterProblem problem{inputs,
                                  std::move(l),
                                  size,
                                  Histogram::uniform(size),
                                  make_solver_params(alpha, 1, q, 1000, 1e-9, restarts, seed),
                                  std::move(fixed_structure),
                                  std::move(fixed_features),
                                  max_outer_iters};
        BarycenterSolution sol = solve_barycenter(problem);
        py::dict out;
        out["barycenter"] = sol.barycenter;
        py::list couplings;
        for (const auto& c : sol.couplings) couplings.append(c.matrix());
        out["couplings"] = couplings;
        out["objective_trace"] = sol.objective_trace;
        return out;
      },
      py::arg("inputs"), py::arg("lambdas") = std::nullopt, py::arg("size") = 0,
      py::arg("alpha") = 0.5, py::arg("q") = 2, py::arg("restarts") = 5, py::arg("seed") = 0,
      py::arg("fixed_structure") = std::nullopt, py::arg("fixed_features") = std::nullopt,
      py::arg("max_outer_iters") = 50,
      "FGW Frechet mean with fixed target size and uniform target weights.");

  m.def(
      "recover_adjacency",
      [](const Matrix& c) {
        AdjacencyRecovery rec = recover_adjacency(c);
        py::dict out;
        out["adjacency"] = rec.adjacency;
        out["threshold"] = rec.threshold;
        out["residual"] = rec.residual;
        return out;
      },
      py::arg("structure"));

  m.def(
      "interpolate",
      [](const StructuredObject& src, const StructuredObject& dst, const std::vector<double>& times,
         double alpha, int q, int restarts, std::uint64_t seed) {
        Geodesic geo(src, dst, make_solver_params(alpha, 1, q, 1000, 1e-9, restarts, seed));
        py::list points;
        for (double t : times) points.append(geo.at(t).object);
        py::dict out;
        out["points"] = points;
        out["coupling"] = geo.coupling().matrix();
        out["endpoint_objective"] = geo.endpoint_objective();
        return out;
      },
      py::arg("src"), py::arg("dst"), py::arg("times"), py::arg("alpha") = 0.5, py::arg("q") = 2,
      py::arg("restarts") = 5, py::arg("seed") = 0,
      "Constant-speed geodesic points at the requested times.");

  m.def("mds", &mds_embed, py::arg("distances"), py::arg("dim") = 2);
  m.def("silhouette_score", &silhouette_score, py::arg("points"), py::arg("labels"));
  m.def("adjusted_rand_index", &adjusted_rand_index, py::arg("a"), py::arg("b"));

  // fixtures
  m.def("toy_trees", &make_toy_trees);
  m.def("isometric_graphs", &make_isometric_graphs);
  m.def("equivalent_objects", &make_equivalent_objects);
  m.def("fuse_features_into_structure", &fuse_features_into_structure, py::arg("obj"));
  m.def("shifted_image_pair", &make_shifted_image_pair, py::arg("size") = 12, py::arg("shift") = 3);
  m.def(
      "two_hump_series",
      [](int count, double class_gap, std::uint64_t seed) {
        return make_two_hump_series(count, class_gap, seed);
      },
      py::arg("count") = 25, py::arg("class_gap") = 0.3, py::arg("seed") = 0);
  m.def(
      "noisy_loop_graphs",
      [](const std::string& cls, int count, std::uint64_t seed) {
        const LoopClass c = cls == "eight" ? LoopClass::Eight : LoopClass::Circle;
        std::vector<StructuredObject> out;
        for (const auto& g : make_noisy_loop_graphs(c, count, seed)) {
          out.push_back(shortest_path_structure(g));
        }
        return out;
      },
      py::arg("cls") = "circle", py::arg("count") = 10, py::arg("seed") = 0);
  m.def(
      "sbm",
      [](const std::vector<Index>& blocks, double p_in, double p_out,
         const std::vector<std::vector<double>>& feature_means, std::uint64_t seed) {
        return shortest_path_structure(make_sbm(blocks, p_in, p_out, feature_means, seed));
      },
      py::arg("blocks"), py::arg("p_in"), py::arg("p_out"), py::arg("feature_means"),
      py::arg("seed") = 0);
  m.def(
      "shortest_path_object",
      [](Index n, const std::vector<std::tuple<Index, Index, double>>& edges, Matrix features,
         std::optional<Vector> weights) {
        Histogram h = weights ? Histogram(std::move(*weights)) : Histogram::uniform(n);
        GraphSpec g{n, edges, std::move(features), std::move(h)};
        return shortest_path_structure(g);
      },
      py::arg("n"), py::arg("edges"), py::arg("features"), py::arg("weights") = std::nullopt,
      "Structured object whose structure is the graph's shortest-path metric.");

  m.def(
      "concentration_experiment",
      [](const std::vector<int>& sizes, int trials, std::uint64_t seed, Index reference_size) {
        ConcentrationTarget target;
        target.reference_size = reference_size;
        ConcentrationResult res = concentration_experiment(target, sizes, trials, seed);
        py::dict out;
        out["sizes"] = res.sizes;
        out["mean_distance"] = res.mean_distance;
        out["slope"] = res.slope;
        out["slope_stderr"] = res.slope_stderr;
        return out;
      },
      py::arg("sizes"), py::arg("trials") = 20, py::arg("seed") = 0,
      py::arg("reference_size") = 512);
}
