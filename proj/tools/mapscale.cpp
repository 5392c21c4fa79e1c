// mapscale - mapper and multiscale mapper summaries, their persistence
// diagrams, and the randomized certification harness.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mapscale/io.hpp"
#include "mapscale/mapscale.hpp"

namespace fs = std::filesystem;
using namespace mapscale;
using nlohmann::json;

namespace {

struct RunConfig {
    std::string complex_path;
    std::string function_path;
    std::string metric_path;
    std::string tower_path;
    std::string mode = "combinatorial";  // or "exact-pl"
    int k_max = 1;
    int field_prime = 2;
    std::string output_dir = ".";
    unsigned long long seed = 7;
    int trials = 20;
    bool log_scale = false;

    void load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config: " + path);
        json j;
        in >> j;
        if (j.contains("complex")) complex_path = j["complex"];
        if (j.contains("function")) function_path = j["function"];
        if (j.contains("codomain_metric")) metric_path = j["codomain_metric"];
        if (j.contains("tower")) tower_path = j["tower"];
        if (j.contains("mode")) mode = j["mode"];
        if (j.contains("homology_dims")) k_max = j["homology_dims"].get<int>();
        if (j.contains("field_prime")) field_prime = j["field_prime"].get<int>();
        if (j.contains("output_dir")) output_dir = j["output_dir"];
        if (j.contains("seed")) seed = j["seed"].get<unsigned long long>();
        if (j.contains("trials")) trials = j["trials"].get<int>();
        if (j.contains("log_scale")) log_scale = j["log_scale"].get<bool>();
    }

    PullbackCover::Mode pullback_mode() const {
        if (mode == "exact-pl" || mode == "exact-PL" || mode == "exact") return PullbackCover::Mode::ExactPL;
        if (mode == "combinatorial") return PullbackCover::Mode::Combinatorial;
        throw std::runtime_error("unknown mode '" + mode + "' (use exact-pl or combinatorial)");
    }
};

CoverTower load_tower(const RunConfig& cfg) {
    if (cfg.tower_path.empty()) throw std::runtime_error("no tower spec given (--tower)");
    std::ifstream in(cfg.tower_path);
    if (!in) throw std::runtime_error("cannot open tower spec: " + cfg.tower_path);
    json spec;
    in >> spec;
    return read_tower_spec(spec);
}

VertexFunction load_function(const RunConfig& cfg) {
    if (cfg.function_path.empty()) throw std::runtime_error("no function file given (--function)");
    return read_function(cfg.function_path, !cfg.metric_path.empty());
}

SimplicialComplex load_complex(const RunConfig& cfg) {
    if (cfg.complex_path.empty()) throw std::runtime_error("no complex file given (--complex)");
    return read_complex(cfg.complex_path);
}

void check_vertex_consistency(const SimplicialComplex& K, const VertexFunction& f) {
    if (!f.defined_on(K.vertices()))
        throw std::runtime_error("function file does not cover every vertex of the complex");
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.output_dir);
    fs::path p = fs::path(cfg.output_dir) / name;
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    std::cout << "wrote " << p.string() << "\n";
    return out;
}

int cmd_mapper(const RunConfig& cfg, int scale_index) {
    SimplicialComplex K = load_complex(cfg);
    VertexFunction f = load_function(cfg);
    check_vertex_consistency(K, f);
    CoverTower W = load_tower(cfg);
    if (scale_index < 0 || scale_index >= (int)W.n_scales())
        throw std::runtime_error("scale index out of range");
    MapperResult res = mapper(W.covers[scale_index], f, K, cfg.pullback_mode(), *W.codomain,
                              cfg.k_max + 1);
    auto dot = open_out(cfg, "mapper.dot");
    write_dot(dot, res.complex, res.elements);
    auto js = open_out(cfg, "mapper.json");
    js << mapper_to_json(res.complex, res.elements).dump(2) << "\n";
    return 0;
}

int cmd_multiscale(const RunConfig& cfg) {
    SimplicialComplex K = load_complex(cfg);
    VertexFunction f = load_function(cfg);
    check_vertex_consistency(K, f);
    CoverTower W = load_tower(cfg);
    MapperTower mt = multiscale_mapper(W, f, K, cfg.pullback_mode(), cfg.k_max + 1);
    auto js = open_out(cfg, "multiscale.json");
    js << mapper_tower_to_json(mt).dump(2) << "\n";
    return 0;
}

int cmd_diagram(const RunConfig& cfg, bool use_quiver) {
    SimplicialComplex K = load_complex(cfg);
    VertexFunction f = load_function(cfg);
    check_vertex_consistency(K, f);
    CoverTower W = load_tower(cfg);
    MapperTower mt = multiscale_mapper(W, f, K, cfg.pullback_mode(), cfg.k_max + 1);
    PersistenceDiagram D = use_quiver ? quiver_diagram(mt.tower, cfg.k_max, cfg.field_prime)
                                      : tower_diagram(mt.tower, cfg.k_max, cfg.field_prime);
    if (cfg.log_scale) D = log_diagram(D);
    auto out = open_out(cfg, "diagram.txt");
    write_diagram(out, D);
    return 0;
}

int cmd_bottleneck(const std::string& a, const std::string& b, int k) {
    PersistenceDiagram D1 = read_diagram(a);
    PersistenceDiagram D2 = read_diagram(b);
    double d = bottleneck(D1, D2, k);
    if (d == kInf) std::cout << "inf\n";
    else std::cout << std::setprecision(17) << d << "\n";
    return 0;
}

int cmd_cech(const RunConfig& cfg, bool rips) {
    SimplicialComplex K = load_complex(cfg);
    VertexFunction f = load_function(cfg);
    check_vertex_consistency(K, f);
    CoverTower W = load_tower(cfg);
    PullbackPseudometric pm = pullback_pseudometric(W, f, K, cfg.pullback_mode());
    auto csv = open_out(cfg, "pseudometric.csv");
    write_pseudometric_csv(csv, pm);
    CechFiltration cf = cech_filtration(pm, cfg.k_max + 1, rips);
    auto filt = open_out(cfg, rips ? "rips_filtration.txt" : "cech_filtration.txt");
    write_filtration(filt, cf);
    PersistenceDiagram D = tower_diagram(cf.to_tower(), cfg.k_max, cfg.field_prime);
    if (cfg.log_scale) D = log_diagram(D);
    auto out = open_out(cfg, "cech_diagram.txt");
    write_diagram(out, D);
    return 0;
}

int cmd_demo(const RunConfig& cfg, const std::string& s, const std::string& delta,
             const std::string& M) {
    InstabilityDemo demo =
        demo_instability(Rational::parse(s), Rational::parse(delta), Rational::parse(M));
    std::cout << "sup norm |f-g| = " << demo.sup_norm << "\n";
    std::cout << "D1 for f: ";
    for (const auto& pt : demo.d1_f.points)
        std::cout << "(" << pt.birth << "," << (pt.death == kInf ? std::string("inf")
                                                                 : std::to_string(pt.death)) << ") ";
    std::cout << "\nD1 for g: ";
    for (const auto& pt : demo.d1_g.points)
        std::cout << "(" << pt.birth << "," << (pt.death == kInf ? std::string("inf")
                                                                 : std::to_string(pt.death)) << ") ";
    std::cout << "\nbottleneck(D1,D1') = " << (demo.bottleneck_d1 == kInf ? "inf" : "finite") << "\n";
    std::cout << "as predicted: " << (demo.diagrams_as_predicted ? "yes" : "NO") << "\n";
    json j;
    j["sup_norm"] = demo.sup_norm;
    j["expected_death"] = demo.expected_death.to_double();
    j["as_predicted"] = demo.diagrams_as_predicted;
    auto out = open_out(cfg, "demo_instability.json");
    out << j.dump(2) << "\n";
    return demo.diagrams_as_predicted ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, const std::string& theorem) {
    VerifyConfig vc;
    vc.trials = cfg.trials;
    vc.seed = cfg.seed;
    vc.k_max = cfg.k_max;
    vc.field_prime = cfg.field_prime;
    ExperimentReport rep = verify_stability(theorem, vc);
    print_report_summary(std::cout, rep);
    auto out = open_out(cfg, "verify_" + theorem + ".json");
    out << report_to_json(rep).dump(2) << "\n";
    return rep.pass ? 0 : 1;
}

int cmd_bench(const RunConfig& cfg, int vertices, double edge_p) {
    BenchReport rep = bench_skeleton(cfg.seed, vertices, edge_p, cfg.k_max, cfg.field_prime);
    std::cout << "total simplices:   " << rep.total_simplices << "\n";
    std::cout << "1-skeleton size:   " << rep.skeleton_size << "\n";
    std::cout << "full-complex time: " << rep.full_seconds << " s\n";
    std::cout << "1-skeleton time:   " << rep.skeleton_seconds << " s\n";
    std::cout << "speedup:           " << rep.speedup << "x\n";
    std::cout << "diagrams equal:    " << (rep.diagrams_equal ? "yes" : "NO") << "\n";
    json j;
    j["total_simplices"] = rep.total_simplices;
    j["skeleton_size"] = rep.skeleton_size;
    j["full_seconds"] = rep.full_seconds;
    j["skeleton_seconds"] = rep.skeleton_seconds;
    j["speedup"] = rep.speedup;
    j["diagrams_equal"] = rep.diagrams_equal;
    auto out = open_out(cfg, "bench.json");
    out << j.dump(2) << "\n";
    return rep.diagrams_equal ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mapper / multiscale mapper summaries and their certification harness"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file")->each([&](const std::string& p) {
        cfg.load(p);
    });

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--complex", cfg.complex_path, "complex file");
        sub->add_option("--function", cfg.function_path, "function file");
        sub->add_option("--codomain-metric", cfg.metric_path, "codomain metric CSV");
        sub->add_option("--tower", cfg.tower_path, "tower spec JSON");
        sub->add_option("--mode", cfg.mode, "exact-pl | combinatorial");
        sub->add_option("--dims", cfg.k_max, "max homology dimension");
        sub->add_option("--prime", cfg.field_prime, "field prime");
        sub->add_option("--out", cfg.output_dir, "output directory");
        sub->add_option("--seed", cfg.seed, "rng seed");
        sub->add_flag("--log", cfg.log_scale, "log-reindex output diagrams");
    };

    int scale_index = 0;
    auto* s_mapper = app.add_subcommand("mapper", "nerve of one pullback cover (DOT + JSON)");
    add_common(s_mapper);
    s_mapper->add_option("--scale-index", scale_index, "tower scale to use");

    auto* s_multi = app.add_subcommand("multiscale", "tower of nerves with simplicial maps (JSON)");
    add_common(s_multi);

    bool use_quiver = false;
    auto* s_diag = app.add_subcommand("diagram", "persistence diagram of the multiscale mapper");
    add_common(s_diag);
    s_diag->add_flag("--quiver", use_quiver, "use the rank-decomposition oracle path");

    std::string diag_a, diag_b;
    int bott_k = 1;
    auto* s_bott = app.add_subcommand("bottleneck", "bottleneck distance between diagram files");
    s_bott->add_option("a", diag_a, "first diagram")->required();
    s_bott->add_option("b", diag_b, "second diagram")->required();
    s_bott->add_option("-k,--dim", bott_k, "homology dimension");

    bool rips = false;
    auto* s_cech = app.add_subcommand("cech", "pullback pseudometric, Cech filtration, diagram");
    add_common(s_cech);
    s_cech->add_flag("--rips", rips, "Rips variant");

    std::string demo_s = "1", demo_delta = "2", demo_M = "16";
    auto* s_demo = app.add_subcommand("demo-instability", "fixed-scale mapper instability demo");
    add_common(s_demo);
    s_demo->add_option("--s", demo_s, "tower resolution");
    s_demo->add_option("--delta", demo_delta, "function perturbation");
    s_demo->add_option("--M", demo_M, "codomain half-width");

    std::string theorem = "function-perturb";
    auto* s_verify = app.add_subcommand("verify", "randomized certification of a stability bound");
    add_common(s_verify);
    s_verify->add_option("--theorem", theorem,
                         "cover-perturb | function-perturb | general | combinatorial-approx | "
                         "mm-vs-cech | skeleton-exact");
    s_verify->add_option("--trials", cfg.trials, "trial count");

    int bench_vertices = 18;
    double bench_edge_p = 0.55;
    auto* s_bench = app.add_subcommand("bench", "full-complex vs 1-skeleton timing");
    add_common(s_bench);
    s_bench->add_option("--vertices", bench_vertices, "vertex count");
    s_bench->add_option("--edge-p", bench_edge_p, "edge probability");

    CLI11_PARSE(app, argc, argv);

    if (const char* env_seed = std::getenv("MAPSCALE_SEED"))
        cfg.seed = std::strtoull(env_seed, nullptr, 10);

    try {
        if (s_mapper->parsed()) return cmd_mapper(cfg, scale_index);
        if (s_multi->parsed()) return cmd_multiscale(cfg);
        if (s_diag->parsed()) return cmd_diagram(cfg, use_quiver);
        if (s_bott->parsed()) return cmd_bottleneck(diag_a, diag_b, bott_k);
        if (s_cech->parsed()) return cmd_cech(cfg, rips);
        if (s_demo->parsed()) return cmd_demo(cfg, demo_s, demo_delta, demo_M);
        if (s_verify->parsed()) return cmd_verify(cfg, theorem);
        if (s_bench->parsed()) return cmd_bench(cfg, bench_vertices, bench_edge_p);
    } catch (const std::exception& e) {
        std::cerr << "mapscale: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
