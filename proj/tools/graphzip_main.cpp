#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "graphzip/coder.hpp"
#include "graphzip/graph.hpp"
#include "graphzip/mdl.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace graphzip;

namespace {

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write '" + path + "'");
    out << data;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write '" + path + "'");
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

void emit_report(const json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << '\n';
    else
        write_file(out_path, j.dump(2) + "\n");
}

CoderSpec spec_from_flags(const std::string& coder, int klass, const std::string& mode) {
    CoderSpec spec;
    spec.family = family_from_string(coder);
    if (klass != 1 && klass != 2) throw domain_error("--class must be 1 or 2");
    spec.klass = klass == 1 ? Klass::Class1 : Klass::Class2;
    if (mode == "learned")
        spec.mode = Mode::Learned;
    else if (mode == "universal")
        spec.mode = Mode::Universal;
    else
        throw domain_error("--mode must be learned or universal");
    return spec;
}

VertexPicker picker_from_flags(const std::string& name, std::uint64_t seed) {
    if (name == "minid") return VertexPicker::min_index();
    if (name == "random") return VertexPicker::random(seed);
    throw domain_error("--picker must be minid or random");
}

std::vector<std::string> corpus_files(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file()) files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw config_error("corpus directory '" + dir + "' is empty");
    return files;
}

int pool_threads(int tasks) {
    int n = 0;
    if (const char* env = std::getenv("GRAPHZIP_THREADS")) n = std::atoi(env);
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    return std::max(1, std::min(n, tasks));
}

json graph_report(const Graph& g) {
    return json{{"n", g.vertex_count()}, {"edges", g.edge_count()}};
}

int cmd_gen(const std::string& model, std::uint64_t seed, const std::string& out) {
    Graph g = generate_from_string(model, seed);
    const std::string text = to_edge_list(g);
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
    json j = graph_report(g);
    j["model"] = model;
    j["seed"] = seed;
    if (!out.empty()) {
        j["output"] = out;
        std::cout << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_gen_gauss(const std::string& family, int p, int nsamples, std::uint64_t seed,
                  const std::string& out, const std::string& truth_out) {
    const auto fam = precision_family_from_string(family);
    Matrix omega = generate_precision(fam, p, seed);
    Matrix X = sample_gaussian(omega, nsamples, seed + 1);
    std::ostringstream ss;
    ss.precision(17);
    for (int i = 0; i < X.rows(); ++i) {
        for (int j = 0; j < X.cols(); ++j) ss << (j ? "," : "") << X(i, j);
        ss << '\n';
    }
    if (out.empty())
        std::cout << ss.str();
    else
        write_file(out, ss.str());
    if (!truth_out.empty()) write_file(truth_out, to_edge_list(graph_from_precision(omega)));
    if (!out.empty()) {
        json j{{"family", family}, {"p", p}, {"N", nsamples}, {"seed", seed}, {"output", out}};
        if (!truth_out.empty()) j["truth"] = truth_out;
        std::cout << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_compress(const std::string& in, std::string out, const std::string& coder, int klass,
                 const std::string& mode, const std::string& stats_path, const std::string& picker,
                 std::uint64_t seed, const std::string& report_out) {
    const auto t0 = std::chrono::steady_clock::now();
    const CoderSpec spec = spec_from_flags(coder, klass, mode);
    CoderStats stats;
    const CoderStats* stats_ptr = nullptr;
    if (spec.mode == Mode::Learned) {
        if (stats_path.empty()) throw config_error("learned mode requires --stats");
        stats = CoderStats::from_json(read_file(stats_path));
        stats_ptr = &stats;
    }
    const std::string text = read_file(in);
    Graph g = load_edge_list(text);
    auto res = encode_graph(g, spec, stats_ptr, picker_from_flags(picker, seed));
    if (out.empty()) out = in + ".gzt";
    write_file(out, res.bytes);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json j = graph_report(g);
    j["command"] = "compress";
    j["input"] = in;
    j["input_digest"] = fnv1a_hex(text);
    j["output"] = out;
    j["spec"] = to_string(spec);
    j["header_bits"] = res.header_bits;
    j["payload_bits"] = res.payload_bits;
    j["total_bits"] = res.total_bits();
    j["ideal_payload_bits"] = res.ideal_payload_bits;
    j["seconds"] = secs;
    emit_report(j, report_out);
    return 0;
}

int cmd_decompress(const std::string& in, std::string out, const std::string& report_out) {
    const std::string data = read_file(in);
    std::vector<std::uint8_t> bytes(data.begin(), data.end());
    Graph g = decode_graph(bytes);
    if (out.empty()) out = in + ".edges";
    const std::string text = to_edge_list(g);
    write_file(out, text);
    json j = graph_report(g);
    j["command"] = "decompress";
    j["input"] = in;
    j["input_digest"] = fnv1a_hex(data);
    j["output"] = out;
    j["output_digest"] = fnv1a_hex(text);
    emit_report(j, report_out);
    return 0;
}

int cmd_train(const std::vector<std::string>& inputs, const std::string& corpus_dir,
              const std::string& model, int count, std::uint64_t seed, const std::string& coder,
              const std::string& out) {
    std::vector<Graph> graphs;
    std::vector<std::string> files = inputs;
    if (!corpus_dir.empty()) {
        auto more = corpus_files(corpus_dir);
        files.insert(files.end(), more.begin(), more.end());
    }
    for (const auto& f : files) graphs.push_back(load_edge_list(read_file(f)));
    for (int i = 0; i < count; ++i) graphs.push_back(generate_from_string(model, seed + i));
    if (graphs.empty()) throw config_error("no training graphs given");
    CoderStats stats = train_stats(graphs, family_from_string(coder));
    const std::string text = stats.to_json() + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
    json j{{"command", "train"},
           {"graphs", graphs.size()},
           {"family", coder},
           {"output", out.empty() ? "-" : out}};
    if (!out.empty()) std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_benchmark(const std::vector<std::string>& inputs, const std::string& corpus_dir,
                  const std::vector<std::string>& models, std::uint64_t seed,
                  std::vector<std::string> specs, const std::string& out_csv,
                  const std::string& report_out) {
    struct Item {
        std::string name;
        Graph graph;
    };
    std::vector<Item> items;
    std::vector<std::string> files = inputs;
    if (!corpus_dir.empty()) {
        auto more = corpus_files(corpus_dir);
        files.insert(files.end(), more.begin(), more.end());
    }
    for (const auto& f : files) items.push_back({fs::path(f).filename().string(), load_edge_list(read_file(f))});
    for (const auto& m : models) items.push_back({m, generate_from_string(m, seed)});
    if (items.empty()) throw config_error("benchmark needs graphs (--corpus, --model or files)");

    if (specs.empty() || (specs.size() == 1 && specs[0] == "all"))
        specs = {"iid-c1", "triangle-c1", "cn-c1", "motif4-c1",
                 "iid-c2", "triangle-c2", "cn-c2", "motif4-c2"};
    std::vector<CoderSpec> parsed;
    for (const auto& s : specs) {
        const auto dash = s.find("-c");
        if (dash == std::string::npos || dash + 2 >= s.size())
            throw domain_error("spec '" + s + "' should look like triangle-c2");
        parsed.push_back(spec_from_flags(s.substr(0, dash), s[dash + 2] - '0', "universal"));
    }

    struct Cell {
        std::int64_t header = 0, payload = 0;
    };
    std::vector<std::vector<Cell>> table(items.size(), std::vector<Cell>(parsed.size()));
    std::atomic<std::size_t> cursor{0};
    const std::size_t tasks = items.size() * parsed.size();
    auto work = [&] {
        for (std::size_t t = cursor.fetch_add(1); t < tasks; t = cursor.fetch_add(1)) {
            const std::size_t gi = t / parsed.size(), si = t % parsed.size();
            auto res = encode_graph(items[gi].graph, parsed[si]);
            table[gi][si] = {res.header_bits, res.payload_bits};
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < pool_threads(static_cast<int>(tasks)); ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();

    std::ostringstream csv;
    csv << "graph,n,edges,labeled_iid";
    for (const auto& s : specs) csv << ',' << s;
    csv << '\n';
    json rows = json::array();
    for (std::size_t gi = 0; gi < items.size(); ++gi) {
        const auto& g = items[gi].graph;
        csv << items[gi].name << ',' << g.vertex_count() << ',' << g.edge_count() << ','
            << static_cast<std::int64_t>(std::ceil(analytic_labeled_iid_bits(g.vertex_count(), g.edge_count())));
        json row{{"graph", items[gi].name},
                 {"n", g.vertex_count()},
                 {"edges", g.edge_count()},
                 {"labeled_iid_bits", analytic_labeled_iid_bits(g.vertex_count(), g.edge_count())}};
        for (std::size_t si = 0; si < parsed.size(); ++si) {
            csv << ',' << (table[gi][si].header + table[gi][si].payload);
            row[specs[si]] = {{"header_bits", table[gi][si].header},
                              {"payload_bits", table[gi][si].payload},
                              {"total_bits", table[gi][si].header + table[gi][si].payload}};
        }
        csv << '\n';
        rows.push_back(std::move(row));
    }
    if (out_csv.empty())
        std::cout << csv.str();
    else
        write_file(out_csv, csv.str());
    json j{{"command", "benchmark"}, {"seed", seed}, {"rows", rows}};
    if (!report_out.empty()) emit_report(j, report_out);
    return 0;
}

int cmd_select(const std::string& in, double lmin, double lmax, double lstep,
               const std::string& coder, int klass, const std::string& mode,
               const std::string& stats_path, const std::string& truth_path,
               const std::string& report_out) {
    const std::string text = read_file(in);
    Matrix X = load_matrix(text);
    std::vector<double> grid;
    if (lmin > 0.0)
        grid = lambda_grid(lmin, lmax, lstep);
    else
        grid = default_lambda_grid(static_cast<int>(X.rows()), static_cast<int>(X.cols()));

    const CoderSpec spec = spec_from_flags(coder, klass, mode);
    CoderStats stats;
    const CoderStats* stats_ptr = nullptr;
    if (spec.mode == Mode::Learned) {
        if (stats_path.empty()) throw config_error("learned mode requires --stats");
        stats = CoderStats::from_json(read_file(stats_path));
        stats_ptr = &stats;
    }
    auto report = select_model(X, grid, spec, stats_ptr);

    json path = json::array();
    for (const auto& e : report.path) {
        json entry{{"lambda", e.lambda}, {"converged", e.converged}};
        if (e.converged) {
            entry["edges"] = e.edges;
            entry["L_G_bits"] = e.graph_bits;
            entry["L_D_bits"] = e.data_bits;
            entry["total_bits"] = e.total();
            entry["shrinkage_used"] = e.shrinkage_used;
        } else {
            entry["error"] = e.fail_reason;
        }
        path.push_back(std::move(entry));
    }
    const auto& best = report.best();
    json sel{{"lambda", best.lambda},
             {"index", report.best_index},
             {"edges", best.edges},
             {"total_bits", best.total()},
             {"edge_list", json::array()}};
    for (auto [u, v] : best.graph.edges()) sel["edge_list"].push_back({u, v});
    json j{{"command", "select"},
           {"version", 1},
           {"input", in},
           {"input_digest", fnv1a_hex(text)},
           {"spec", to_string(spec)},
           {"N", X.rows()},
           {"p", X.cols()},
           {"lambda_grid", grid},
           {"path", path},
           {"selected", sel}};
    if (!truth_path.empty()) {
        Graph truth = load_edge_list(read_file(truth_path));
        j["f1"] = f1_score(best.graph, truth);
    }
    emit_report(j, report_out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"graphzip: structural graph compression and MDL model selection"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic graph edge list");
    std::string gen_model;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen->add_option("--model", gen_model, "er:n=..,p=.. | ba:n=..,m=.. | ws:n=..,k=..,beta=.. | complete:n=.. | empty:n=..")->required();
    gen->add_option("--seed", gen_seed);
    gen->add_option("-o,--out", gen_out);

    // gen-gauss
    auto* gg = app.add_subcommand("gen-gauss", "sample a synthetic Gaussian dataset");
    std::string gg_family = "cycle", gg_out, gg_truth;
    int gg_p = 30, gg_n = 60;
    std::uint64_t gg_seed = 1;
    gg->add_option("--family", gg_family, "cycle | ar1 | er | hub");
    gg->add_option("--p", gg_p, "number of variables");
    gg->add_option("--n-samples", gg_n);
    gg->add_option("--seed", gg_seed);
    gg->add_option("-o,--out", gg_out);
    gg->add_option("--truth", gg_truth, "write the true conditional independence graph here");

    // compress
    auto* comp = app.add_subcommand("compress", "encode an edge list into a .gzt stream");
    std::string c_in, c_out, c_coder = "iid", c_mode = "universal", c_stats, c_picker = "minid", c_report;
    int c_class = 1;
    std::uint64_t c_seed = 1;
    comp->add_option("input", c_in)->required();
    comp->add_option("-o,--out", c_out);
    comp->add_option("--coder", c_coder, "iid | triangle | cn | motif4");
    comp->add_option("--class", c_class, "1 (node-by-node) or 2 (level-by-node)");
    comp->add_option("--mode", c_mode, "universal | learned");
    comp->add_option("--stats", c_stats, "stats file for learned mode");
    comp->add_option("--picker", c_picker, "minid | random");
    comp->add_option("--seed", c_seed, "seed for the random picker");
    comp->add_option("--report", c_report, "write the JSON report here instead of stdout");

    // decompress
    auto* dec = app.add_subcommand("decompress", "decode a .gzt stream back to an edge list");
    std::string d_in, d_out, d_report;
    dec->add_option("input", d_in)->required();
    dec->add_option("-o,--out", d_out);
    dec->add_option("--report", d_report);

    // train
    auto* tr = app.add_subcommand("train", "estimate coder statistics from a corpus");
    std::vector<std::string> t_files;
    std::string t_corpus, t_model, t_coder = "iid", t_out;
    int t_count = 0, t_class = 1;
    std::uint64_t t_seed = 1;
    tr->add_option("files", t_files, "edge list files");
    tr->add_option("--corpus", t_corpus, "directory of edge lists");
    tr->add_option("--model", t_model, "synthetic model to train on");
    tr->add_option("--count", t_count, "number of synthetic graphs");
    tr->add_option("--seed", t_seed);
    tr->add_option("--coder", t_coder);
    tr->add_option("--class", t_class)->capture_default_str();
    tr->add_option("-o,--out", t_out);

    // benchmark
    auto* bm = app.add_subcommand("benchmark", "codelength table over graphs and coders");
    std::vector<std::string> b_files, b_models, b_specs;
    std::string b_corpus, b_csv, b_report;
    std::uint64_t b_seed = 1;
    bm->add_option("files", b_files);
    bm->add_option("--corpus", b_corpus);
    bm->add_option("--model", b_models, "synthetic models (repeatable)");
    bm->add_option("--seed", b_seed);
    bm->add_option("--specs", b_specs, "e.g. triangle-c2 (default: all)");
    bm->add_option("--csv", b_csv, "write the CSV table here");
    bm->add_option("--report", b_report, "write the JSON report here");

    // select
    auto* sel = app.add_subcommand("select", "MDL model selection for Gaussian data");
    std::string s_in, s_coder = "iid", s_mode = "universal", s_stats, s_truth, s_report;
    int s_class = 1;
    double s_lmin = 0.0, s_lmax = 1.0, s_lstep = 0.01;
    sel->add_option("input", s_in)->required();
    sel->add_option("--lambda-min", s_lmin, "default: 0.01 when N>p, 0.1 otherwise");
    sel->add_option("--lambda-max", s_lmax);
    sel->add_option("--lambda-step", s_lstep);
    sel->add_option("--coder", s_coder);
    sel->add_option("--class", s_class);
    sel->add_option("--mode", s_mode);
    sel->add_option("--stats", s_stats);
    sel->add_option("--truth", s_truth, "true edge list; adds an F1 field to the report");
    sel->add_option("--report", s_report);

    try {
        app.parse(argc, argv);
        if (*gen) return cmd_gen(gen_model, gen_seed, gen_out);
        if (*gg) return cmd_gen_gauss(gg_family, gg_p, gg_n, gg_seed, gg_out, gg_truth);
        if (*comp)
            return cmd_compress(c_in, c_out, c_coder, c_class, c_mode, c_stats, c_picker, c_seed,
                                c_report);
        if (*dec) return cmd_decompress(d_in, d_out, d_report);
        if (*tr) return cmd_train(t_files, t_corpus, t_model, t_count, t_seed, t_coder, t_out);
        if (*bm) return cmd_benchmark(b_files, b_corpus, b_models, b_seed, b_specs, b_csv, b_report);
        if (*sel)
            return cmd_select(s_in, s_lmin, s_lmax, s_lstep, s_coder, s_class, s_mode, s_stats,
                              s_truth, s_report);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
