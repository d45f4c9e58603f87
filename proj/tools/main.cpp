#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "eulersparse/io.hpp"
#include "eulersparse/rng.hpp"
#include "eulersparse/verify.hpp"
#include "json.hpp"

using nlohmann::json;
using namespace eulersparse;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

DirectedMultigraph load_input(const std::string& path) {
    DirectedMultigraph g = read_tsv_file(path);
    if (g.has_oversized_weights())
        std::cerr << "warning: weights above 2^40; doubling headroom is thin\n";
    return g;
}

json certificate_json(const ErrorCertificate& cert) {
    return json{{"pass", cert.pass()},
                {"eulerian_ok", cert.eulerian_ok},
                {"degrees_ok", cert.degrees_ok},
                {"weights_ok", cert.weights_ok},
                {"error_ok", cert.error_ok},
                {"edges_in", cert.edges_in},
                {"edges_out", cert.edges_out},
                {"epsilon", cert.epsilon},
                {"measured_error", cert.measured_error},
                {"failures", cert.failures}};
}

json toggle_round_json(const ToggleRoundReport& r) {
    json j{{"edges_before", r.edges_before},
           {"edges_after", r.edges_after},
           {"heavy_set_aside", r.heavy_set_aside},
           {"leftover_kept", r.leftover_kept},
           {"cycles_toggled", r.cycles_toggled},
           {"max_cycle_length", r.certificate.max_length},
           {"expansion_used", r.certificate.expansion_used},
           {"measured_rho", r.measured_rho}};
    if (r.measured_error) j["measured_error"] = *r.measured_error;
    return j;
}

json colour_round_json(const ColourRoundReport& r) {
    json j{{"branch", r.branch},
           {"m_before", r.m_before},
           {"m_after", r.m_after},
           {"integral_edges", r.integral_edges},
           {"carried_cycles", r.carried_cycles},
           {"heavy_set_aside", r.heavy_set_aside},
           {"leftover_kept", r.leftover_kept},
           {"colour_calls", r.ct_calls},
           {"coloured_fraction", r.coloured_fraction},
           {"flip_applied", r.flip_applied},
           {"sparsity_ok", r.sparsity_ok},
           {"max_cycle_leverage_ratio", r.max_cycle_leverage_ratio}};
    if (r.measured_error) j["measured_error"] = *r.measured_error;
    return j;
}

void emit(const json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    os << j.dump(2) << "\n";
}

struct BenchCell {
    std::string method;
    Vertex n = 0;
    uint64_t seed = 0;
    json result;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral sparsification of Eulerian directed graphs"};
    app.require_subcommand(1);

    // --- gen ---------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "Generate a random Eulerian graph (TSV)");
    RandomEulerianParams gp;
    uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("-n,--vertices", gp.n, "vertex count (>= 3)")->required();
    gen->add_option("-c,--cycles", gp.cycle_count, "number of random cycles unioned");
    gen->add_option("--max-cycle-len", gp.max_cycle_len, "maximum cycle length");
    gen->add_option("--max-weight-exp", gp.max_weight_exp,
                    "weights are 2^u with u uniform in [0, this]");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("-o,--output", gen_out, "output TSV path")->required();

    // --- decompose ----------------------------------------------------------
    auto* dec = app.add_subcommand("decompose", "Short-cycle decomposition per weight level");
    std::string dec_in, dec_report;
    uint64_t dec_seed = 0;
    dec->add_option("-i,--input", dec_in, "input TSV path")->required();
    dec->add_option("--seed", dec_seed, "RNG seed");
    dec->add_option("--report", dec_report, "write the JSON report here instead of stdout");

    // --- sparsify -----------------------------------------------------------
    auto* sp = app.add_subcommand("sparsify", "Sparsify an Eulerian graph");
    std::string sp_in, sp_out, sp_report, sp_method, sp_oracle = "gaussian-walk";
    double sp_eps = 0.25, sp_stop = 0.0;
    uint64_t sp_seed = 0;
    bool sp_verify = false, sp_verify_rounds = false;
    std::size_t sp_max_rounds = 200;
    sp->add_option("-i,--input", sp_in, "input TSV path")->required();
    sp->add_option("-o,--output", sp_out, "output path (TSV for toggle, JSON for colour)")
        ->required();
    sp->add_option("--method", sp_method, "toggle | colour")
        ->required()
        ->check(CLI::IsMember({"toggle", "colour"}));
    sp->add_option("--eps", sp_eps, "target error in (0, 1/2)");
    sp->add_option("--seed", sp_seed, "RNG seed");
    sp->add_option("--oracle", sp_oracle, "colour oracle backend")
        ->check(CLI::IsMember({"random-sign", "gaussian-walk", "adversarial"}));
    sp->add_option("--stop-constant", sp_stop, "override the calibrated stop constant");
    sp->add_option("--max-rounds", sp_max_rounds, "round cap");
    sp->add_flag("--verify", sp_verify, "certify the output (exit 1 on failure)");
    sp->add_flag("--verify-rounds", sp_verify_rounds, "measure the error after every round");
    sp->add_option("--report", sp_report, "write the JSON report here instead of stdout");

    // --- verify ---------------------------------------------------------------
    auto* ver = app.add_subcommand("verify", "Certify a sparsifier output against its input");
    std::string ver_in, ver_cand;
    double ver_eps = 0.25;
    ver->add_option("-i,--input", ver_in, "input TSV path")->required();
    ver->add_option("-c,--candidate", ver_cand, "candidate graph (TSV or JSON)")->required();
    ver->add_option("--eps", ver_eps, "target error in (0, 1/2)");

    // --- bench ---------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "Compare both methods across sizes");
    std::vector<Vertex> bench_sizes{40, 80, 120};
    double bench_eps = 0.25;
    uint64_t bench_seed = 0;
    int bench_density = 12;
    bool bench_certify = false;
    std::string bench_out, bench_oracle = "random-sign";
    bench->add_option("--sizes", bench_sizes, "vertex counts to run");
    bench->add_option("--eps", bench_eps, "target error");
    bench->add_option("--seed", bench_seed, "RNG seed");
    bench->add_option("--density", bench_density, "approximate edges per vertex");
    bench->add_option("--oracle", bench_oracle, "colour oracle backend")
        ->check(CLI::IsMember({"random-sign", "gaussian-walk"}));
    bench->add_flag("--certify", bench_certify, "measure the spectral error of every output");
    bench->add_option("-o,--output", bench_out, "write the JSON report here instead of stdout");

    try {
        app.parse(argc, argv);

        if (*gen) {
            DirectedMultigraph g = generate_random_eulerian(gp, gen_seed);
            write_tsv_file(gen_out, g);
            emit(json{{"n", g.vertex_count()},
                      {"m", g.edge_count()},
                      {"eulerian", is_eulerian(g)},
                      {"seed", gen_seed},
                      {"output", gen_out}},
                 "");
            return 0;
        }

        if (*dec) {
            DirectedMultigraph g = load_input(dec_in);
            DirectedMultigraph split = binary_decompose(g);
            NaiveShortCycleDecomposer decomposer;
            json levels = json::array();
            bool all_valid = true;
            std::size_t total_cycles = 0, total_leftover = 0;
            int stream = 0;
            for (const WeightLevel& lvl : partition_by_weight(split)) {
                UndirectedMultigraph u;
                u.n = split.vertex_count();
                for (const Edge& e : lvl.subgraph.edges()) u.edges.push_back({e.tail, e.head});
                CycleDecomposition d =
                    decomposer.decompose(u, derive_seed(dec_seed, stream++));
                DecompositionValidation val = validate_decomposition(u, d);
                all_valid = all_valid && val.pass();
                total_cycles += d.cycles.size();
                total_leftover += d.leftover.size();
                levels.push_back(json{{"exponent", lvl.exponent},
                                      {"edges", u.edges.size()},
                                      {"cycles", d.cycles.size()},
                                      {"leftover", d.leftover.size()},
                                      {"leftover_bound", d.certificate.m_hat},
                                      {"max_cycle_length", d.certificate.max_length},
                                      {"max_contracted_length", d.certificate.max_contracted_length},
                                      {"expansion_used", d.certificate.expansion_used},
                                      {"valid", val.pass()}});
            }
            emit(json{{"n", g.vertex_count()},
                      {"m", g.edge_count()},
                      {"m_split", split.edge_count()},
                      {"levels", levels},
                      {"total_cycles", total_cycles},
                      {"total_leftover", total_leftover},
                      {"all_valid", all_valid}},
                 dec_report);
            return all_valid ? 0 : 1;
        }

        if (*sp) {
            DirectedMultigraph g = load_input(sp_in);
            NaiveShortCycleDecomposer decomposer;
            json report{{"method", sp_method},
                        {"epsilon", sp_eps},
                        {"seed", sp_seed},
                        {"n", g.vertex_count()},
                        {"edges_in", g.edge_count()}};
            auto t0 = std::chrono::steady_clock::now();
            bool ok = true;
            if (sp_method == "toggle") {
                ToggleConfig cfg;
                cfg.epsilon = sp_eps;
                cfg.seed = sp_seed;
                cfg.verify_rounds = sp_verify_rounds;
                cfg.max_rounds = sp_max_rounds;
                if (sp_stop > 0) cfg.stop_constant = sp_stop;
                SparsifyResult res = sparsify(g, cfg, decomposer);
                report["wall_ms"] = ms_since(t0);
                report["edges_out"] = res.graph.edge_count();
                report["stop_reason"] = res.stop_reason;
                json rounds = json::array();
                for (const ToggleRoundReport& r : res.rounds) rounds.push_back(toggle_round_json(r));
                report["rounds"] = std::move(rounds);
                write_tsv_file(sp_out, res.graph);
                if (sp_verify) {
                    ErrorCertificate cert = certify(g, res.graph, sp_eps);
                    report["certificate"] = certificate_json(cert);
                    ok = cert.pass();
                }
            } else {
                ColourConfig cfg;
                cfg.epsilon = sp_eps;
                cfg.seed = sp_seed;
                cfg.oracle = oracle_kind_from_name(sp_oracle);
                cfg.verify_rounds = sp_verify_rounds;
                cfg.max_iterations = sp_max_rounds;
                if (sp_stop > 0) cfg.stop_constant = sp_stop;
                PcsResult res = pcs(g, cfg, decomposer);
                report["wall_ms"] = ms_since(t0);
                report["oracle"] = sp_oracle;
                report["edges_out"] = res.graph.edges.size();
                report["stop_reason"] = res.stop_reason;
                json rounds = json::array();
                for (const ColourRoundReport& r : res.rounds) rounds.push_back(colour_round_json(r));
                report["rounds"] = std::move(rounds);
                write_json_graph_file(sp_out, res.graph);
                if (sp_verify) {
                    ErrorCertificate cert = certify(g, res.graph, sp_eps);
                    report["certificate"] = certificate_json(cert);
                    ok = cert.pass();
                }
            }
            emit(report, sp_report);
            return ok ? 0 : 1;
        }

        if (*ver) {
            DirectedMultigraph g = load_input(ver_in);
            RealDigraph candidate = load_real_graph(ver_cand);
            ErrorCertificate cert = certify(g, candidate, ver_eps);
            emit(certificate_json(cert), "");
            return cert.pass() ? 0 : 1;
        }

        if (*bench) {
            int threads = 1;
            if (const char* env = std::getenv("SPARSIFY_THREADS")) threads = std::max(1, std::atoi(env));
            std::vector<BenchCell> cells;
            for (Vertex n : bench_sizes)
                for (const char* method : {"toggle", "colour"})
                    cells.push_back({method, n, derive_seed(bench_seed, cells.size()), {}});

            auto run_cell = [&](BenchCell& cell) {
                RandomEulerianParams p;
                p.n = cell.n;
                p.cycle_count = std::max(4, bench_density * static_cast<int>(cell.n) / 5);
                p.max_cycle_len = 8;
                p.max_weight_exp = 2;
                DirectedMultigraph g = generate_random_eulerian(p, cell.seed);
                NaiveShortCycleDecomposer decomposer;
                auto t0 = std::chrono::steady_clock::now();
                json r{{"method", cell.method}, {"n", cell.n}, {"edges_in", g.edge_count()}};
                if (cell.method == "toggle") {
                    ToggleConfig cfg;
                    cfg.epsilon = bench_eps;
                    cfg.seed = cell.seed;
                    SparsifyResult res = sparsify(g, cfg, decomposer);
                    r["edges_out"] = res.graph.edge_count();
                    r["rounds"] = res.rounds.size();
                    r["wall_ms"] = ms_since(t0);
                    if (bench_certify) r["measured_error"] = error_metric(g, res.graph);
                } else {
                    ColourConfig cfg;
                    cfg.epsilon = bench_eps;
                    cfg.seed = cell.seed;
                    cfg.oracle = oracle_kind_from_name(bench_oracle);
                    PcsResult res = pcs(g, cfg, decomposer);
                    r["edges_out"] = res.graph.edges.size();
                    r["rounds"] = res.rounds.size();
                    r["wall_ms"] = ms_since(t0);
                    if (bench_certify) r["measured_error"] = error_metric(g, res.graph);
                }
                cell.result = std::move(r);
            };

            std::atomic<std::size_t> next{0};
            auto worker = [&]() {
                for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1))
                    run_cell(cells[i]);
            };
            if (threads <= 1) {
                worker();
            } else {
                std::vector<std::thread> pool;
                for (int t = 0; t < std::min<int>(threads, static_cast<int>(cells.size())); ++t)
                    pool.emplace_back(worker);
                for (std::thread& t : pool) t.join();
            }
            json rows = json::array();
            for (BenchCell& c : cells) rows.push_back(std::move(c.result));
            emit(json{{"epsilon", bench_eps},
                      {"seed", bench_seed},
                      {"oracle", bench_oracle},
                      {"threads", threads},
                      {"cells", rows}},
                 bench_out);
            return 0;
        }
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
