#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mpcmst/oracle.hpp"
#include "mpcmst/pipeline.hpp"

namespace py = pybind11;
using namespace mpcmst;

namespace {

// Infinite sentinels become None on the Python side.
py::list values_or_none(const std::vector<Word>& v) {
  py::list out;
  for (Word x : v) {
    if (x == kPosInf || x == kNegInf || x == kNone) {
      out.append(py::none());
    } else {
      out.append(x);
    }
  }
  return out;
}

py::object optional_index(const std::optional<std::size_t>& i) {
  if (i) return py::int_(*i);
  return py::none();
}

py::object stats_dict(const RunInfo& info) { return py::module_::import("json").attr("loads")(stats_json(info)); }

RunConfig make_run_config(std::uint64_t seed, double delta, double kappa, Word c_g, Word sort_round_cost,
                          double exponent, bool forest) {
  RunConfig rc;
  rc.seed = seed;
  rc.delta = delta;
  rc.kappa = kappa;
  rc.c_g = c_g;
  rc.sort_round_cost = sort_round_cost;
  rc.exponent = exponent;
  rc.allow_forest = forest;
  return rc;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "MPC minimum spanning tree verification, sensitivity and all-edges LCA on a simulated cluster";

  py::class_<Edge>(m, "Edge")
      .def(py::init([](Word u, Word v, Word w, bool is_tree) { return Edge{u, v, w, is_tree, kNone}; }), py::arg("u"),
           py::arg("v"), py::arg("w"), py::arg("is_tree"))
      .def_readwrite("u", &Edge::u)
      .def_readwrite("v", &Edge::v)
      .def_readwrite("w", &Edge::w)
      .def_readwrite("is_tree", &Edge::is_tree)
      .def("__repr__", [](const Edge& e) {
        return "Edge(" + std::to_string(e.u) + ", " + std::to_string(e.v) + ", " + std::to_string(e.w) + ", " +
               (e.is_tree ? "True" : "False") + ")";
      });

  py::class_<WeightedGraph>(m, "Graph")
      .def(py::init([](Word n, const std::vector<Edge>& edges) { return WeightedGraph{n, edges}; }), py::arg("n"),
           py::arg("edges"))
      .def_readwrite("n", &WeightedGraph::n)
      .def_readwrite("edges", &WeightedGraph::edges)
      .def("to_text", &format_edge_list);

  m.def("parse_edge_list", [](const std::string& text) { return parse_edge_list(text); }, py::arg("text"));

  m.def(
      "generate",
      [](const std::string& kind, Word n, Word m_, Word diameter, Word perturb, Word cycles, Word max_weight,
         std::uint64_t seed) {
        return generate_instance(parse_instance_kind(kind), GeneratorParams{n, m_, diameter, perturb, cycles, max_weight},
                                 seed);
      },
      py::arg("kind"), py::arg("n"), py::arg("m") = 0, py::arg("diameter") = 0, py::arg("perturb") = 1,
      py::arg("cycles") = 1, py::arg("max_weight") = Word{1} << 20, py::arg("seed") = 0);

#define MPCMST_RUN_ARGS                                                                                      \
  py::arg("graph"), py::kw_only(), py::arg("seed") = 0, py::arg("delta") = 0.5, py::arg("kappa") = 4.0,     \
      py::arg("c_g") = 8, py::arg("sort_round_cost") = 1, py::arg("exponent") = 3.0, py::arg("forest") = false

  m.def(
      "verify",
      [](const WeightedGraph& g, std::uint64_t seed, double delta, double kappa, Word c_g, Word src, double exponent,
         bool forest) {
        VerifyReport r = run_verify(g, make_run_config(seed, delta, kappa, c_g, src, exponent, forest));
        py::dict d;
        d["yes"] = r.yes;
        d["reason"] = r.reason;
        d["witness_non_tree"] = optional_index(r.witness_non_tree);
        d["witness_tree"] = optional_index(r.witness_tree);
        d["path_max"] = values_or_none(r.path_max);
        d["stats"] = stats_dict(r.info);
        return d;
      },
      MPCMST_RUN_ARGS);

  m.def(
      "sensitivity",
      [](const WeightedGraph& g, std::uint64_t seed, double delta, double kappa, Word c_g, Word src, double exponent,
         bool forest) {
        SensitivityReport r = run_sensitivity(g, make_run_config(seed, delta, kappa, c_g, src, exponent, forest));
        py::dict d;
        d["is_mst"] = r.is_mst;
        d["sens"] = values_or_none(r.sens);
        d["max_notes"] = r.note_peak;
        d["stats"] = stats_dict(r.info);
        return d;
      },
      MPCMST_RUN_ARGS);

  m.def(
      "lca",
      [](const WeightedGraph& g, std::uint64_t seed, double delta, double kappa, Word c_g, Word src, double exponent,
         bool forest) {
        LcaReport r = run_lca(g, make_run_config(seed, delta, kappa, c_g, src, exponent, forest));
        py::dict d;
        d["lca"] = values_or_none(r.lca);
        d["stats"] = stats_dict(r.info);
        return d;
      },
      MPCMST_RUN_ARGS);

#undef MPCMST_RUN_ARGS

  py::module_ oracle = m.def_submodule("oracle", "Sequential reference implementations");
  oracle.def("mst_weight", [](const WeightedGraph& g) { return oracle::mst(g).weight; });
  oracle.def(
      "verify", [](const WeightedGraph& g, bool forest) { return oracle::verify(g, forest).yes; }, py::arg("graph"),
      py::arg("forest") = false);
  oracle.def(
      "sensitivity", [](const WeightedGraph& g, bool forest) { return values_or_none(oracle::sensitivity(g, forest)); },
      py::arg("graph"), py::arg("forest") = false);
  oracle.def("lca", [](const WeightedGraph& g) { return values_or_none(oracle::lca(g)); });

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<NotSpanning>(m, "NotSpanning", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<AccountingFault>(m, "AccountingFault", PyExc_RuntimeError);
}
