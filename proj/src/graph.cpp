#include "eulersparse/graph.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <string>

#include "eulersparse/rng.hpp"

namespace eulersparse {

DirectedMultigraph::DirectedMultigraph(Vertex n) : n_(n) {
    if (n < 0) throw InvalidParamsError("vertex count must be non-negative");
}

DirectedMultigraph DirectedMultigraph::from_edges(Vertex n, std::vector<Edge> edges) {
    DirectedMultigraph g(n);
    g.edges_.reserve(edges.size());
    for (const Edge& e : edges) g.add_edge(e.tail, e.head, e.weight);
    return g;
}

EdgeId DirectedMultigraph::add_edge(Vertex tail, Vertex head, Weight weight) {
    if (tail < 0 || tail >= n_ || head < 0 || head >= n_)
        throw InvalidParamsError("edge endpoint out of range: " + std::to_string(tail) + "->" +
                                 std::to_string(head) + " with n=" + std::to_string(n_));
    if (tail == head)
        throw SelfLoopError("self-loop rejected at vertex " + std::to_string(tail));
    if (weight == 0) throw InvalidParamsError("edge weight must be positive");
    if (weight >= kMaxEdgeWeight)
        throw WeightOverflowError("edge weight " + std::to_string(weight) + " exceeds 2^62 cap");
    if (weight > kSoftWeightBound) oversized_ = true;
    edges_.push_back({tail, head, weight});
    return static_cast<EdgeId>(edges_.size() - 1);
}

DegreeVector weighted_degrees(const DirectedMultigraph& g) {
    DegreeVector d;
    d.out.assign(static_cast<std::size_t>(g.vertex_count()), 0);
    d.in.assign(static_cast<std::size_t>(g.vertex_count()), 0);
    for (const Edge& e : g.edges()) {
        d.out[static_cast<std::size_t>(e.tail)] += e.weight;
        d.in[static_cast<std::size_t>(e.head)] += e.weight;
    }
    return d;
}

std::vector<int64_t> degree_difference(const DirectedMultigraph& g) {
    DegreeVector d = weighted_degrees(g);
    std::vector<int64_t> diff(d.out.size());
    for (std::size_t v = 0; v < d.out.size(); ++v)
        diff[v] = static_cast<int64_t>(d.out[v]) - static_cast<int64_t>(d.in[v]);
    return diff;
}

bool is_eulerian(const DirectedMultigraph& g) {
    for (int64_t dv : degree_difference(g))
        if (dv != 0) return false;
    return true;
}

DirectedMultigraph binary_decompose(const DirectedMultigraph& g) {
    DirectedMultigraph out(g.vertex_count());
    for (const Edge& e : g.edges()) {
        Weight w = e.weight;
        while (w != 0) {
            Weight bit = w & (~w + 1);  // lowest set bit
            out.add_edge(e.tail, e.head, bit);
            w ^= bit;
        }
    }
    return out;
}

std::vector<WeightLevel> partition_by_weight(const DirectedMultigraph& g) {
    std::map<int, WeightLevel> levels;
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
        const Edge& e = g.edge(id);
        if (!std::has_single_bit(e.weight))
            throw NonPowerOfTwoWeightError("edge " + std::to_string(id) + " has weight " +
                                           std::to_string(e.weight) +
                                           "; run binary_decompose first");
        int exp = std::countr_zero(e.weight);
        auto it = levels.find(exp);
        if (it == levels.end()) {
            WeightLevel lvl;
            lvl.exponent = exp;
            lvl.subgraph = DirectedMultigraph(g.vertex_count());
            it = levels.emplace(exp, std::move(lvl)).first;
        }
        it->second.subgraph.add_edge(e.tail, e.head, e.weight);
        it->second.source_edge_ids.push_back(id);
    }
    std::vector<WeightLevel> out;
    out.reserve(levels.size());
    for (auto& [exp, lvl] : levels) out.push_back(std::move(lvl));
    return out;
}

DirectedMultigraph reassemble(Vertex n, const std::vector<WeightLevel>& levels) {
    DirectedMultigraph out(n);
    for (const WeightLevel& lvl : levels)
        for (const Edge& e : lvl.subgraph.edges()) out.add_edge(e.tail, e.head, e.weight);
    return out;
}

DirectedMultigraph generate_random_eulerian(const RandomEulerianParams& params, uint64_t seed) {
    if (params.n < 3) throw InvalidParamsError("need at least 3 vertices");
    if (params.cycle_count < 1) throw InvalidParamsError("need at least one cycle");
    if (params.max_cycle_len < 3) throw InvalidParamsError("max cycle length must be >= 3");
    if (params.max_weight_exp < 0 || params.max_weight_exp > 40)
        throw InvalidParamsError("max weight exponent out of [0, 40]");

    Rng rng(seed);
    const Vertex n = params.n;
    const int max_len = std::min<int>(params.max_cycle_len, n);

    DirectedMultigraph g(n);
    std::vector<Vertex> covered;      // vertices already on some cycle
    std::vector<Vertex> uncovered;    // shuffled tail of never-used vertices
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    uncovered.reserve(static_cast<std::size_t>(n));
    for (Vertex v = 0; v < n; ++v) uncovered.push_back(v);
    for (std::size_t i = uncovered.size(); i > 1; --i)
        std::swap(uncovered[i - 1], uncovered[rand_below(rng, i)]);

    auto take_uncovered = [&]() {
        Vertex v = uncovered.back();
        uncovered.pop_back();
        used[static_cast<std::size_t>(v)] = 1;
        covered.push_back(v);
        return v;
    };

    for (int c = 0; c < params.cycle_count; ++c) {
        int len = static_cast<int>(rand_range(rng, 3, max_len));
        std::vector<Vertex> cyc;
        cyc.reserve(static_cast<std::size_t>(len));
        std::vector<char> in_cycle(static_cast<std::size_t>(n), 0);
        if (covered.empty()) {
            cyc.push_back(take_uncovered());
        } else {
            // Anchor at a used vertex so the edge support stays connected.
            cyc.push_back(covered[rand_below(rng, covered.size())]);
        }
        in_cycle[static_cast<std::size_t>(cyc[0])] = 1;
        while (static_cast<int>(cyc.size()) < len) {
            Vertex v;
            if (!uncovered.empty()) {
                v = take_uncovered();
            } else {
                v = static_cast<Vertex>(rand_below(rng, static_cast<uint64_t>(n)));
                if (in_cycle[static_cast<std::size_t>(v)]) continue;
                if (!used[static_cast<std::size_t>(v)]) {
                    used[static_cast<std::size_t>(v)] = 1;
                    covered.push_back(v);
                }
            }
            in_cycle[static_cast<std::size_t>(v)] = 1;
            cyc.push_back(v);
        }
        Weight w = Weight(1) << rand_range(rng, 0, params.max_weight_exp);
        for (std::size_t i = 0; i < cyc.size(); ++i)
            g.add_edge(cyc[i], cyc[(i + 1) % cyc.size()], w);
    }
    return g;
}

RealDigraph to_real(const DirectedMultigraph& g) {
    RealDigraph out;
    out.n = g.vertex_count();
    out.edges.reserve(g.edge_count());
    for (const Edge& e : g.edges())
        out.edges.push_back({e.tail, e.head, static_cast<double>(e.weight)});
    return out;
}

std::vector<double> degree_difference(const RealDigraph& g) {
    std::vector<double> diff(static_cast<std::size_t>(g.n), 0.0);
    for (const RealEdge& e : g.edges) {
        diff[static_cast<std::size_t>(e.tail)] += e.weight;
        diff[static_cast<std::size_t>(e.head)] -= e.weight;
    }
    return diff;
}

bool is_eulerian(const RealDigraph& g, double tol) {
    double scale = 1.0;
    std::vector<double> outdeg(static_cast<std::size_t>(g.n), 0.0);
    for (const RealEdge& e : g.edges) outdeg[static_cast<std::size_t>(e.tail)] += e.weight;
    for (double d : outdeg) scale = std::max(scale, d);
    for (double dv : degree_difference(g))
        if (std::abs(dv) > tol * scale) return false;
    return true;
}

}  // namespace eulersparse
