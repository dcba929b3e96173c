#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "graphzip/coder.hpp"
#include "graphzip/graph.hpp"
#include "graphzip/mdl.hpp"
#include "graphzip/tree.hpp"

namespace py = pybind11;
using namespace graphzip;

namespace {

Graph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    Graph g(n);
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
}

CoderSpec make_spec(const std::string& family, int klass, const std::string& mode) {
    CoderSpec spec;
    spec.family = family_from_string(family);
    if (klass != 1 && klass != 2) throw domain_error("klass must be 1 or 2");
    spec.klass = klass == 1 ? Klass::Class1 : Klass::Class2;
    if (mode == "universal")
        spec.mode = Mode::Universal;
    else if (mode == "learned")
        spec.mode = Mode::Learned;
    else
        throw domain_error("mode must be 'universal' or 'learned'");
    return spec;
}

} // namespace

PYBIND11_MODULE(_graphzip, m) {
    m.doc() = "structural graph compression and MDL model selection";

    py::register_exception<parse_error>(m, "ParseError", PyExc_ValueError);
    py::register_exception<decode_error>(m, "DecodeError", PyExc_ValueError);
    py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<domain_error>(m, "DomainError", PyExc_ValueError);
    py::register_exception<solver_error>(m, "SolverError", PyExc_RuntimeError);

    py::class_<Graph>(m, "Graph")
        .def(py::init(&graph_from_edges), py::arg("n"), py::arg("edges") = std::vector<std::pair<int, int>>{})
        .def_property_readonly("n", &Graph::vertex_count)
        .def_property_readonly("edge_count", &Graph::edge_count)
        .def("edges", &Graph::edges)
        .def("has_edge", &Graph::has_edge)
        .def("degree", &Graph::degree)
        .def("__repr__", [](const Graph& g) {
            return "<Graph n=" + std::to_string(g.vertex_count()) + " edges=" +
                   std::to_string(g.edge_count()) + ">";
        });

    m.def("generate", &generate_from_string, py::arg("model"), py::arg("seed") = 1,
          "generate a graph from a spec like 'er:n=100,p=0.05'");
    m.def("load_edge_list", [](const std::string& text) { return load_edge_list(text); });
    m.def("to_edge_list", &to_edge_list);
    m.def("is_isomorphic_small", &is_isomorphic_small);
    m.def("degree_histogram", [](const Graph& g) { return degree_histogram(g).counts; });

    py::class_<CoderStats>(m, "CoderStats")
        .def("to_json", &CoderStats::to_json)
        .def_static("from_json", &CoderStats::from_json);

    m.def(
        "compress",
        [](const Graph& g, const std::string& family, int klass, const std::string& mode,
           const CoderStats* stats, const std::string& picker, std::uint64_t seed) {
            const CoderSpec spec = make_spec(family, klass, mode);
            VertexPicker pk = picker == "random" ? VertexPicker::random(seed) : VertexPicker::min_index();
            auto res = encode_graph(g, spec, stats, pk);
            py::dict d;
            d["data"] = py::bytes(reinterpret_cast<const char*>(res.bytes.data()), res.bytes.size());
            d["header_bits"] = res.header_bits;
            d["payload_bits"] = res.payload_bits;
            d["total_bits"] = res.total_bits();
            d["ideal_payload_bits"] = res.ideal_payload_bits;
            return d;
        },
        py::arg("graph"), py::arg("family") = "iid", py::arg("klass") = 1,
        py::arg("mode") = "universal", py::arg("stats") = nullptr, py::arg("picker") = "minid",
        py::arg("seed") = 1);

    m.def("decompress", [](py::bytes data) {
        const std::string s = data;
        std::vector<std::uint8_t> bytes(s.begin(), s.end());
        return decode_graph(bytes);
    });

    m.def("train", [](const std::vector<Graph>& graphs, const std::string& family) {
        return train_stats(graphs, family_from_string(family));
    });

    m.def("f1_score", &f1_score);
    m.def("labeled_iid_bits", &analytic_labeled_iid_bits);

    m.def(
        "generate_precision",
        [](const std::string& family, int p, std::uint64_t seed) {
            return generate_precision(precision_family_from_string(family), p, seed);
        },
        py::arg("family"), py::arg("p"), py::arg("seed") = 1);
    m.def("sample_gaussian", &sample_gaussian, py::arg("omega"), py::arg("n_samples"),
          py::arg("seed") = 1);
    m.def("graph_from_precision",
          [](const Matrix& omega, double tol) { return graph_from_precision(omega, tol); },
          py::arg("omega"), py::arg("tol") = 1e-8);
    m.def("graphical_lasso",
          [](const Matrix& S, double lam, double tol, int max_iter) {
              return graphical_lasso(S, lam, GlassoOptions{tol, max_iter});
          },
          py::arg("S"), py::arg("lam"), py::arg("tol") = 1e-5, py::arg("max_iter") = 500);
    m.def("dempster_complete",
          [](const Matrix& S, const Graph& g) { return dempster_complete(S, g); });
    m.def("predictive_mdl", [](const Matrix& X, const Graph& g) {
        auto r = predictive_mdl(X, g);
        return py::make_tuple(r.bits, r.shrinkage_used);
    });

    m.def(
        "select_model",
        [](const Matrix& X, std::vector<double> lambdas, const std::string& family, int klass,
           const std::string& mode, const CoderStats* stats) {
            if (lambdas.empty())
                lambdas = default_lambda_grid(static_cast<int>(X.rows()), static_cast<int>(X.cols()));
            auto rep = select_model(X, lambdas, make_spec(family, klass, mode), stats);
            py::list path;
            for (const auto& e : rep.path) {
                py::dict d;
                d["lambda"] = e.lambda;
                d["converged"] = e.converged;
                if (e.converged) {
                    d["edges"] = e.edges;
                    d["L_G_bits"] = e.graph_bits;
                    d["L_D_bits"] = e.data_bits;
                    d["total_bits"] = e.total();
                }
                path.append(std::move(d));
            }
            py::dict out;
            out["path"] = path;
            out["best_index"] = rep.best_index;
            out["lambda"] = rep.best().lambda;
            out["graph"] = rep.best().graph;
            return out;
        },
        py::arg("X"), py::arg("lambdas") = std::vector<double>{}, py::arg("family") = "iid",
        py::arg("klass") = 1, py::arg("mode") = "universal", py::arg("stats") = nullptr);
}
