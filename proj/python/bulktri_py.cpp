#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bulktri/aggregate.hpp"
#include "bulktri/engine.hpp"
#include "bulktri/oracle.hpp"
#include "bulktri/rank_index.hpp"
#include "bulktri/synthetic.hpp"

namespace py = pybind11;
using namespace bulktri;

namespace {

using PyEdge = std::pair<VertexId, VertexId>;

std::vector<Edge> to_edges(const std::vector<PyEdge>& in) {
  std::vector<Edge> out;
  out.reserve(in.size());
  for (auto [a, b] : in) out.push_back(Edge::of(a, b));
  return out;
}

std::vector<PyEdge> from_edges(const std::vector<Edge>& in) {
  std::vector<PyEdge> out;
  out.reserve(in.size());
  for (const Edge& e : in) out.emplace_back(e.u, e.v);
  return out;
}

Executor executor_for(int workers) {
  return workers <= 0 ? Executor::hardware() : Executor::with_workers(workers);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Batch-parallel streaming triangle count estimation";

  py::class_<Edge>(m, "Edge")
      .def(py::init(&Edge::of), py::arg("a"), py::arg("b"))
      .def_readonly("u", &Edge::u)
      .def_readonly("v", &Edge::v)
      .def("empty", &Edge::empty)
      .def("__eq__", [](const Edge& a, const Edge& b) { return a == b; })
      .def("__hash__", [](const Edge& e) { return EdgeHash{}(e); })
      .def("__repr__", [](const Edge& e) { return "Edge(" + to_string(e) + ")"; });

  py::class_<Estimator>(m, "Estimator")
      .def_readonly("f1", &Estimator::f1)
      .def_readonly("f2", &Estimator::f2)
      .def_readonly("f3", &Estimator::f3)
      .def_readonly("chi", &Estimator::chi)
      .def("coarse_estimate", [](const Estimator& e, std::uint64_t m_seen) {
        return coarse_estimate(e, m_seen);
      });

  py::class_<Engine>(m, "Engine")
      .def(py::init([](std::size_t r, std::uint64_t seed, int workers) {
             return Engine(r, seed, executor_for(workers));
           }),
           py::arg("estimators"), py::arg("seed") = 1, py::arg("workers") = 0)
      .def("ingest_batch",
           [](Engine& e, const std::vector<PyEdge>& batch) {
             const auto edges = to_edges(batch);
             py::gil_scoped_release release;
             e.ingest_batch(edges);
           })
      .def_property_readonly("estimators",
                             [](const Engine& e) {
                               return std::vector<Estimator>(e.estimators().begin(),
                                                             e.estimators().end());
                             })
      .def_property_readonly("m_seen", [](const Engine& e) { return e.state().m_seen; })
      .def_property_readonly("batches_seen",
                             [](const Engine& e) { return e.state().batches_seen; })
      .def(
          "estimate",
          [](const Engine& e, std::size_t groups) {
            AggregateConfig cfg;
            cfg.groups = groups;
            return aggregate_estimate(e.executor(), e.estimators(), e.state().m_seen, cfg);
          },
          py::arg("groups") = 1);

  m.def(
      "rank_all",
      [](const std::vector<PyEdge>& batch) {
        const auto ranked = rank_all(Executor::sequential(), to_edges(batch));
        std::vector<std::tuple<VertexId, VertexId, BatchPos, std::uint64_t>> out;
        for (const Arc& a : ranked.by_src_pos_desc()) out.emplace_back(a.src, a.dst, a.pos, a.rank);
        return out;
      },
      "(src, dst, pos, rank) for every arc, ordered by src then newest first");

  m.def(
      "aggregate_estimate",
      [](const Engine& e, std::size_t groups) {
        return aggregate_estimate(e.executor(), e.estimators(), e.state().m_seen,
                                  AggregateConfig{groups, 1.0, 0.1});
      },
      py::arg("engine"), py::arg("groups"));
  m.def("mean_coarse_estimate", [](const Engine& e) {
    return mean_coarse_estimate(e.estimators(), e.state().m_seen);
  });
  m.def("required_estimators", &required_estimators, py::arg("epsilon"), py::arg("delta"),
        py::arg("m"), py::arg("max_degree"), py::arg("tau_lower_bound"));
  m.def("exact_triangle_count", [](const std::vector<PyEdge>& edges) {
    return exact_triangle_count(to_edges(edges));
  });
  m.def("generate_gnp", [](std::uint64_t n, double p, std::uint64_t seed) {
    return from_edges(generate_gnp(n, p, seed));
  }, py::arg("n"), py::arg("p"), py::arg("seed") = 1);
  m.def("generate_powerlaw",
        [](std::uint64_t n, double exponent, std::uint64_t min_degree, std::uint64_t seed) {
          return from_edges(generate_powerlaw(n, exponent, min_degree, seed));
        },
        py::arg("n"), py::arg("exponent"), py::arg("min_degree") = 1, py::arg("seed") = 1);

  py::register_exception<InconsistentState>(m, "InconsistentState", PyExc_RuntimeError);
  py::register_exception<UndefinedEstimate>(m, "UndefinedEstimate", PyExc_ValueError);
}
