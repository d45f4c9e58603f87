#include "eulersparse/toggle.hpp"

#include <cmath>

#include "eulersparse/linalg.hpp"
#include "eulersparse/rng.hpp"

namespace eulersparse {

std::vector<Edge> toggle_cycle(const OrientedCycle& c, bool heads) {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < c.original.size(); ++i) {
        bool opposing = c.reversed[i] != 0;
        if (opposing == heads) continue;  // heads keeps the agreeing edges
        const DirEdge& e = c.original[i];
        out.push_back({e.tail, e.head, 2 * c.weight});
    }
    return out;
}

CycleHarvest harvest_cycles(const DirectedMultigraph& g, const std::vector<double>& resistance,
                            double heavy_threshold, const ShortCycleDecomposer& decomposer,
                            uint64_t seed, uint64_t& next_cycle_id) {
    if (resistance.size() != g.edge_count())
        throw InvalidParamsError("resistance vector does not match the edge count");

    CycleHarvest harvest;
    DirectedMultigraph light(g.vertex_count());
    std::vector<EdgeId> light_ids;
    std::vector<double> light_res;
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
        const Edge& e = g.edge(id);
        if (static_cast<double>(e.weight) * resistance[id] > heavy_threshold) {
            harvest.heavy.push_back(id);
        } else {
            light.add_edge(e.tail, e.head, e.weight);
            light_ids.push_back(id);
            light_res.push_back(resistance[id]);
        }
    }

    harvest.certificate.m_hat = 2 * static_cast<std::size_t>(g.vertex_count());
    std::vector<WeightLevel> levels = partition_by_weight(light);
    uint64_t level_stream = 0;
    for (const WeightLevel& lvl : levels) {
        UndirectedMultigraph view;
        view.n = g.vertex_count();
        view.edges.reserve(lvl.subgraph.edge_count());
        for (const Edge& e : lvl.subgraph.edges()) view.edges.push_back({e.tail, e.head});
        CycleDecomposition d =
            decomposer.decompose(view, derive_seed(seed, level_stream++));

        auto& cert = harvest.certificate;
        cert.max_length = std::max(cert.max_length, d.certificate.max_length);
        cert.max_contracted_length =
            std::max(cert.max_contracted_length, d.certificate.max_contracted_length);
        cert.expansion_used = cert.expansion_used || d.certificate.expansion_used;

        for (EdgeId local : d.leftover)
            harvest.leftover.push_back(light_ids[lvl.source_edge_ids[local]]);
        const Weight w = Weight(1) << lvl.exponent;
        for (const auto& cyc : d.cycles) {
            std::vector<DirEdge> edges;
            std::vector<EdgeId> host_ids;
            std::vector<double> res;
            edges.reserve(cyc.size());
            for (EdgeId local : cyc) {
                EdgeId host = light_ids[lvl.source_edge_ids[local]];
                const Edge& e = g.edge(host);
                edges.push_back({e.tail, e.head});
                host_ids.push_back(host);
                res.push_back(resistance[host]);
            }
            OrientedCycle oc =
                correct_orientation(std::move(edges), w, std::move(host_ids), std::move(res));
            oc.id = next_cycle_id++;
            harvest.cycles.push_back(std::move(oc));
        }
    }
    return harvest;
}

SparsifyOnceResult sparsify_once_with_coins(
    const DirectedMultigraph& g, const std::vector<double>& resistance, const ToggleConfig& cfg,
    const ShortCycleDecomposer& decomposer,
    const std::function<bool(std::size_t, const OrientedCycle&)>& coin,
    std::vector<OrientedCycle>* captured_cycles) {
    if (!is_eulerian(g)) throw NotEulerianError("toggle round requires an Eulerian input");

    SparsifyOnceResult res;
    res.report.edges_before = g.edge_count();
    if (g.edge_count() == 0) {
        res.graph = g;
        return res;
    }

    const double threshold = cfg.leverage_threshold_factor *
                             static_cast<double>(g.vertex_count()) /
                             static_cast<double>(g.edge_count());
    uint64_t next_cycle_id = 0;
    CycleHarvest harvest =
        harvest_cycles(g, resistance, threshold, decomposer, cfg.seed, next_cycle_id);

    DirectedMultigraph h(g.vertex_count());
    std::vector<double> out_res;
    auto carry = [&](EdgeId id) {
        const Edge& e = g.edge(id);
        h.add_edge(e.tail, e.head, e.weight);
        out_res.push_back(resistance[id]);
    };
    for (EdgeId id : harvest.heavy) carry(id);
    for (EdgeId id : harvest.leftover) carry(id);

    double rho = 0.0;
    for (std::size_t i = 0; i < harvest.cycles.size(); ++i) {
        const OrientedCycle& c = harvest.cycles[i];
        for (std::size_t j = 0; j < c.length(); ++j)
            rho = std::max(rho, static_cast<double>(c.weight) * c.resistance[j]);
        bool heads = coin(i, c);
        for (std::size_t j = 0; j < c.length(); ++j) {
            bool opposing = c.reversed[j] != 0;
            if (opposing == heads) continue;
            const DirEdge& e = c.original[j];
            h.add_edge(e.tail, e.head, 2 * c.weight);
            out_res.push_back(c.resistance[j]);
        }
    }
    if (captured_cycles) *captured_cycles = harvest.cycles;

    res.report.edges_after = h.edge_count();
    res.report.heavy_set_aside = harvest.heavy.size();
    res.report.leftover_kept = harvest.leftover.size();
    res.report.cycles_toggled = harvest.cycles.size();
    res.report.certificate = harvest.certificate;
    res.report.measured_rho = rho;
    res.graph = std::move(h);
    res.resistance = std::move(out_res);
    return res;
}

SparsifyOnceResult sparsify_once(const DirectedMultigraph& g, const std::vector<double>& resistance,
                                 const ToggleConfig& cfg, const ShortCycleDecomposer& decomposer) {
    Rng rng(derive_seed(cfg.seed, 0x70661eULL));
    auto coin = [&rng](std::size_t, const OrientedCycle&) { return rand_bit(rng); };
    return sparsify_once_with_coins(g, resistance, cfg, decomposer, coin);
}

double toggle_stop_threshold(const ToggleConfig& cfg, Vertex n, std::size_t m_hat, int max_len) {
    const double logn = std::log2(std::max<double>(static_cast<double>(n), 2.0));
    const double l = static_cast<double>(max_len);
    return cfg.stop_constant *
           (static_cast<double>(m_hat) * logn +
            static_cast<double>(n) * l * l * logn / (cfg.epsilon * cfg.epsilon));
}

SparsifyResult sparsify(const DirectedMultigraph& g, const ToggleConfig& cfg,
                        const ShortCycleDecomposer& decomposer) {
    if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 0.5))
        throw InvalidParamsError("epsilon must lie in (0, 1/2]");
    if (!is_eulerian(g)) throw NotEulerianError("sparsify requires an Eulerian input");

    SparsifyResult out;
    DirectedMultigraph h = binary_decompose(g);
    const Vertex n = h.vertex_count();
    const std::size_t m_hat = 2 * static_cast<std::size_t>(n);
    // Until a decomposition has reported an actual max cycle length, the
    // threshold falls back to the worst-case bound.
    const int a_priori_len = 2 * static_cast<int>(std::ceil(std::log2(std::max<double>(n, 2.0))));
    int measured_len = 0;

    std::vector<double> resistance =
        h.edge_count() ? effective_resistances(h) : std::vector<double>{};

    std::size_t round = 0;
    std::size_t no_progress = 0;
    out.stop_reason = "edge count below stop threshold";
    while (static_cast<double>(h.edge_count()) >=
           toggle_stop_threshold(cfg, n, m_hat, measured_len > 0 ? measured_len : a_priori_len)) {
        if (round >= cfg.max_rounds) {
            out.stop_reason = "round cap reached";
            break;
        }
        ToggleConfig round_cfg = cfg;
        round_cfg.seed = derive_seed(cfg.seed, 1 + round);
        SparsifyOnceResult step = sparsify_once(h, resistance, round_cfg, decomposer);
        if (cfg.verify_rounds) step.report.measured_error = error_metric(h, step.graph);
        if (step.report.cycles_toggled > 0)
            measured_len = std::max(measured_len, step.report.certificate.max_length);
        bool progressed = step.graph.edge_count() < h.edge_count();
        h = std::move(step.graph);
        resistance = std::move(step.resistance);
        out.rounds.push_back(step.report);
        ++round;
        no_progress = progressed ? 0 : no_progress + 1;
        if (no_progress >= 32) {
            // Nothing can shrink (e.g. everything is heavy or leftover);
            // retrying with fresh coins will not help forever.
            out.stop_reason = "no progress across 32 rounds";
            break;
        }
    }
    out.graph = std::move(h);
    return out;
}

}  // namespace eulersparse
