#include "eulersparse/cycle_decomp.hpp"

#include <algorithm>
#include <deque>

#include "eulersparse/rng.hpp"

namespace eulersparse {

namespace {

// Contracted super-edge: a path of original edges between endpoints a and b.
// path is ordered a -> b.
struct SuperEdge {
    Vertex a = 0, b = 0;
    std::vector<EdgeId> path;
    bool alive = false;

    Vertex other(Vertex v) const { return v == a ? b : a; }
};

std::vector<EdgeId> ids_from(const SuperEdge& se, Vertex start) {
    std::vector<EdgeId> ids = se.path;
    if (start == se.b) std::reverse(ids.begin(), ids.end());
    return ids;
}

class Contractor {
public:
    Contractor(const UndirectedMultigraph& g, uint64_t seed) : g_(g), rng_(seed) {
        const std::size_t n = static_cast<std::size_t>(g.n);
        adjacency_.resize(n);
        degree_.assign(n, 0);
        pool_.reserve(g.edges.size());
        for (EdgeId id = 0; id < g.edges.size(); ++id) {
            auto [u, v] = g.edges[id];
            if (u < 0 || u >= g.n || v < 0 || v >= g.n)
                throw InvalidParamsError("decomposition input edge endpoint out of range");
            if (u == v) throw InvalidParamsError("decomposition input has a self-loop");
            add_super_edge(u, v, {id});
        }
        for (Vertex v = 0; v < g.n; ++v)
            if (degree_[static_cast<std::size_t>(v)] <= 2) pending_.push_back(v);
    }

    CycleDecomposition run() {
        CycleDecomposition out;
        alive_edges_ = pool_.size();
        while (alive_edges_ > 0) {
            peel(out);
            if (alive_edges_ == 0) break;
            bfs_emit(out);
        }
        out.certificate.m_hat = 2 * static_cast<std::size_t>(g_.n);
        return out;
    }

private:
    void add_super_edge(Vertex a, Vertex b, std::vector<EdgeId> path) {
        std::size_t idx = pool_.size();
        pool_.push_back({a, b, std::move(path), true});
        adjacency_[static_cast<std::size_t>(a)].push_back(idx);
        adjacency_[static_cast<std::size_t>(b)].push_back(idx);
        ++degree_[static_cast<std::size_t>(a)];
        ++degree_[static_cast<std::size_t>(b)];
        ++alive_edges_;
    }

    void kill(std::size_t idx) {
        SuperEdge& se = pool_[idx];
        se.alive = false;
        --degree_[static_cast<std::size_t>(se.a)];
        --degree_[static_cast<std::size_t>(se.b)];
        --alive_edges_;
    }

    // Live incident super-edges of v, compacting dead entries as we go.
    std::vector<std::size_t> incident(Vertex v) {
        auto& adj = adjacency_[static_cast<std::size_t>(v)];
        std::vector<std::size_t> live;
        std::size_t kept = 0;
        for (std::size_t idx : adj) {
            if (!pool_[idx].alive) continue;
            adj[kept++] = idx;
            live.push_back(idx);
        }
        adj.resize(kept);
        return live;
    }

    void note_cycle(CycleDecomposition& out, std::vector<EdgeId> ids, int contracted_len) {
        auto& cert = out.certificate;
        cert.max_length = std::max(cert.max_length, static_cast<int>(ids.size()));
        cert.max_contracted_length = std::max(cert.max_contracted_length, contracted_len);
        if (static_cast<int>(ids.size()) > contracted_len) cert.expansion_used = true;
        out.cycles.push_back(std::move(ids));
    }

    void peel(CycleDecomposition& out) {
        while (!pending_.empty()) {
            Vertex v = pending_.front();
            pending_.pop_front();
            std::vector<std::size_t> inc = incident(v);
            if (inc.size() != degree_[static_cast<std::size_t>(v)])
                throw Error("internal: degree bookkeeping out of sync");
            if (inc.size() > 2) continue;  // degree grew back via splicing
            if (inc.empty()) continue;
            if (inc.size() == 1) {
                // Dead end: the whole spliced path can never close a cycle.
                SuperEdge& se = pool_[inc[0]];
                Vertex u = se.other(v);
                for (EdgeId id : se.path) out.leftover.push_back(id);
                kill(inc[0]);
                if (degree_[static_cast<std::size_t>(u)] <= 2) pending_.push_back(u);
                continue;
            }
            SuperEdge& e1 = pool_[inc[0]];
            SuperEdge& e2 = pool_[inc[1]];
            Vertex u1 = e1.other(v);
            Vertex u2 = e2.other(v);
            if (u1 == u2) {
                // Both edges run to the same vertex: closing them through v
                // is already a cycle, so emit it instead of forming a
                // self-loop.
                std::vector<EdgeId> ids = ids_from(e1, u1);
                std::vector<EdgeId> tail = ids_from(e2, v);
                ids.insert(ids.end(), tail.begin(), tail.end());
                int contracted = 2;
                kill(inc[0]);
                kill(inc[1]);
                note_cycle(out, std::move(ids), contracted);
                if (degree_[static_cast<std::size_t>(u1)] <= 2) pending_.push_back(u1);
                continue;
            }
            // Splice u1 - v - u2 into a single path super-edge.
            std::vector<EdgeId> path = ids_from(e1, u1);
            std::vector<EdgeId> tail = ids_from(e2, v);
            path.insert(path.end(), tail.begin(), tail.end());
            kill(inc[0]);
            kill(inc[1]);
            add_super_edge(u1, u2, std::move(path));
            // u1/u2 degrees are unchanged by the splice; only v dies.
        }
    }

    // The remainder has min degree >= 3, so a BFS from any vertex closes a
    // cycle within depth ~log2(n). We finish scanning the vertex where the
    // first non-tree edge shows up and take the shortest cycle it offers.
    void bfs_emit(CycleDecomposition& out) {
        std::vector<Vertex> kernel;
        for (Vertex v = 0; v < g_.n; ++v)
            if (degree_[static_cast<std::size_t>(v)] >= 3) kernel.push_back(v);
        if (kernel.empty()) throw Error("internal: edges remain but no kernel vertex");
        Vertex root = kernel[rand_below(rng_, kernel.size())];

        ++epoch_;
        if (visited_.size() != static_cast<std::size_t>(g_.n)) {
            visited_.assign(static_cast<std::size_t>(g_.n), 0);
            depth_.assign(static_cast<std::size_t>(g_.n), 0);
            parent_edge_.assign(static_cast<std::size_t>(g_.n), SIZE_MAX);
            parent_vertex_.assign(static_cast<std::size_t>(g_.n), -1);
        }
        auto seen = [&](Vertex v) { return visited_[static_cast<std::size_t>(v)] == epoch_; };
        auto mark = [&](Vertex v, int d, std::size_t pe, Vertex pv) {
            visited_[static_cast<std::size_t>(v)] = epoch_;
            depth_[static_cast<std::size_t>(v)] = d;
            parent_edge_[static_cast<std::size_t>(v)] = pe;
            parent_vertex_[static_cast<std::size_t>(v)] = pv;
        };

        std::deque<Vertex> queue;
        mark(root, 0, SIZE_MAX, -1);
        queue.push_back(root);
        while (!queue.empty()) {
            Vertex u = queue.front();
            queue.pop_front();
            std::size_t best_edge = SIZE_MAX;
            Vertex best_to = -1;
            int best_len = 0;
            for (std::size_t idx : incident(u)) {
                if (idx == parent_edge_[static_cast<std::size_t>(u)]) continue;
                Vertex x = pool_[idx].other(u);
                if (!seen(x)) {
                    mark(x, depth_[static_cast<std::size_t>(u)] + 1, idx, u);
                    queue.push_back(x);
                    continue;
                }
                int len = cycle_length_through(u, x);
                if (best_edge == SIZE_MAX || len < best_len) {
                    best_edge = idx;
                    best_to = x;
                    best_len = len;
                }
            }
            if (best_edge != SIZE_MAX) {
                emit_cycle(out, u, best_to, best_edge);
                return;
            }
        }
        throw Error("internal: BFS found no cycle in a min-degree-3 kernel");
    }

    int cycle_length_through(Vertex u, Vertex x) {
        Vertex a = u, b = x;
        int len = 1;
        while (a != b) {
            if (depth_[static_cast<std::size_t>(a)] >= depth_[static_cast<std::size_t>(b)]) {
                a = parent_vertex_[static_cast<std::size_t>(a)];
                ++len;
            } else {
                b = parent_vertex_[static_cast<std::size_t>(b)];
                ++len;
            }
        }
        return len;
    }

    void emit_cycle(CycleDecomposition& out, Vertex u, Vertex x, std::size_t closing) {
        // Tree chains from u and x up to their LCA, plus the closing edge,
        // walked as lca -> ... -> u -> x -> ... -> lca.
        std::vector<std::pair<Vertex, std::size_t>> up_u, up_x;  // (from-vertex, edge)
        Vertex a = u, b = x;
        while (a != b) {
            if (depth_[static_cast<std::size_t>(a)] >= depth_[static_cast<std::size_t>(b)]) {
                up_u.push_back({parent_vertex_[static_cast<std::size_t>(a)],
                                parent_edge_[static_cast<std::size_t>(a)]});
                a = parent_vertex_[static_cast<std::size_t>(a)];
            } else {
                up_x.push_back({b, parent_edge_[static_cast<std::size_t>(b)]});
                b = parent_vertex_[static_cast<std::size_t>(b)];
            }
        }
        std::vector<EdgeId> ids;
        int contracted = 0;
        auto append = [&](Vertex from, std::size_t idx) {
            std::vector<EdgeId> part = ids_from(pool_[idx], from);
            ids.insert(ids.end(), part.begin(), part.end());
            ++contracted;
        };
        for (auto it = up_u.rbegin(); it != up_u.rend(); ++it) append(it->first, it->second);
        append(u, closing);
        for (auto& [from, idx] : up_x) append(from, idx);

        std::vector<Vertex> touched;
        for (auto& [from, idx] : up_u) touched.push_back(pool_[idx].a), touched.push_back(pool_[idx].b);
        for (auto& [from, idx] : up_x) touched.push_back(pool_[idx].a), touched.push_back(pool_[idx].b);
        touched.push_back(u);
        touched.push_back(x);
        for (auto& [from, idx] : up_u) kill(idx);
        for (auto& [from, idx] : up_x) kill(idx);
        kill(closing);
        note_cycle(out, std::move(ids), contracted);
        for (Vertex v : touched)
            if (degree_[static_cast<std::size_t>(v)] <= 2) pending_.push_back(v);
    }

    const UndirectedMultigraph& g_;
    Rng rng_;
    std::vector<SuperEdge> pool_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::vector<std::size_t> degree_;
    std::deque<Vertex> pending_;
    std::size_t alive_edges_ = 0;

    std::vector<uint32_t> visited_;
    std::vector<int> depth_;
    std::vector<std::size_t> parent_edge_;
    std::vector<Vertex> parent_vertex_;
    uint32_t epoch_ = 0;
};

}  // namespace

CycleDecomposition NaiveShortCycleDecomposer::decompose(const UndirectedMultigraph& g,
                                                        uint64_t seed) const {
    return Contractor(g, seed).run();
}

DecompositionValidation validate_decomposition(const UndirectedMultigraph& g,
                                               const CycleDecomposition& d) {
    DecompositionValidation v;
    std::vector<int> count(g.edges.size(), 0);
    bool in_range = true;
    auto use = [&](EdgeId id) {
        if (id >= g.edges.size()) {
            in_range = false;
            return;
        }
        ++count[id];
    };
    for (const auto& cyc : d.cycles)
        for (EdgeId id : cyc) use(id);
    for (EdgeId id : d.leftover) use(id);

    v.edge_disjoint = in_range;
    v.covers_all = in_range;
    for (EdgeId id = 0; id < count.size(); ++id) {
        if (count[id] > 1) {
            v.edge_disjoint = false;
            v.failures.push_back("edge " + std::to_string(id) + " used " +
                                 std::to_string(count[id]) + " times");
        }
        if (count[id] == 0) {
            v.covers_all = false;
            v.failures.push_back("edge " + std::to_string(id) + " missing from the cover");
        }
    }
    if (!in_range) v.failures.push_back("edge id out of range");

    v.cycles_close = true;
    for (std::size_t c = 0; c < d.cycles.size(); ++c) {
        const auto& cyc = d.cycles[c];
        if (cyc.size() < 2) {
            v.cycles_close = false;
            v.failures.push_back("cycle " + std::to_string(c) + " has length < 2");
            continue;
        }
        bool ok = true;
        // Walk the edges: consecutive edges must share exactly the walk
        // vertex and the walk must land back at the start.
        auto endpoints = [&](EdgeId id) { return g.edges[id]; };
        if (!in_range) break;
        auto [a0, b0] = endpoints(cyc[0]);
        auto [a1, b1] = endpoints(cyc[1]);
        Vertex start, cur;
        if (b0 == a1 || b0 == b1) {
            start = a0;
            cur = b0;
        } else if (a0 == a1 || a0 == b1) {
            start = b0;
            cur = a0;
        } else {
            ok = false;
            start = cur = -1;
        }
        for (std::size_t i = 1; ok && i < cyc.size(); ++i) {
            auto [a, b] = endpoints(cyc[i]);
            if (a == cur)
                cur = b;
            else if (b == cur)
                cur = a;
            else
                ok = false;
        }
        if (ok && cur != start) ok = false;
        if (!ok) {
            v.cycles_close = false;
            v.failures.push_back("cycle " + std::to_string(c) + " is not a closed walk");
        }
    }

    v.lengths_ok = true;
    for (std::size_t c = 0; c < d.cycles.size(); ++c)
        if (static_cast<int>(d.cycles[c].size()) > d.certificate.max_length) {
            v.lengths_ok = false;
            v.failures.push_back("cycle " + std::to_string(c) +
                                 " exceeds the certified max length");
        }
    v.leftover_ok = d.leftover.size() <= d.certificate.m_hat;
    if (!v.leftover_ok)
        v.failures.push_back("leftover count " + std::to_string(d.leftover.size()) +
                             " exceeds certified bound " + std::to_string(d.certificate.m_hat));
    return v;
}

std::vector<DirEdge> OrientedCycle::forward_edges() const {
    std::vector<DirEdge> f;
    f.reserve(original.size());
    for (std::size_t i = 0; i < original.size(); ++i)
        f.push_back(reversed[i] ? DirEdge{original[i].head, original[i].tail} : original[i]);
    return f;
}

std::vector<EdgeId> OrientedCycle::opposing_edge_ids() const {
    std::vector<EdgeId> out;
    for (std::size_t i = 0; i < original.size(); ++i)
        if (reversed[i]) out.push_back(edge_ids[i]);
    return out;
}

std::vector<Vertex> OrientedCycle::vertices() const {
    std::vector<Vertex> vs;
    vs.reserve(original.size());
    for (const DirEdge& e : forward_edges()) vs.push_back(e.tail);
    return vs;
}

OrientedCycle correct_orientation(std::vector<DirEdge> edges, Weight weight,
                                  std::vector<EdgeId> edge_ids, std::vector<double> resistance) {
    const std::size_t len = edges.size();
    if (len < 2) throw NotACycleError("a cycle needs at least 2 edges");
    if (!edge_ids.empty() && edge_ids.size() != len)
        throw NotACycleError("edge id list does not match the edge list");
    if (!resistance.empty() && resistance.size() != len)
        throw NotACycleError("resistance list does not match the edge list");

    // Index incidences; every cycle vertex must appear on exactly 2 edge
    // endpoints.
    std::vector<Vertex> verts;
    for (const DirEdge& e : edges) {
        if (e.tail == e.head) throw NotACycleError("self-loop inside a cycle");
        verts.push_back(e.tail);
        verts.push_back(e.head);
    }
    std::sort(verts.begin(), verts.end());
    for (std::size_t i = 0; i < verts.size(); i += 2) {
        if (i + 1 >= verts.size() || verts[i] != verts[i + 1] ||
            (i + 2 < verts.size() && verts[i + 2] == verts[i]))
            throw NotACycleError("cycle edges must touch every vertex exactly twice");
    }

    std::vector<std::vector<std::size_t>> inc;
    std::vector<Vertex> ids(verts);
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    auto local = [&](Vertex v) {
        return static_cast<std::size_t>(
            std::lower_bound(ids.begin(), ids.end(), v) - ids.begin());
    };
    inc.resize(ids.size());
    for (std::size_t i = 0; i < len; ++i) {
        inc[local(edges[i].tail)].push_back(i);
        inc[local(edges[i].head)].push_back(i);
    }

    // Start from the lowest host edge id (position order if ids are absent)
    // and walk in that edge's direction.
    std::size_t start = 0;
    if (!edge_ids.empty())
        start = static_cast<std::size_t>(
            std::min_element(edge_ids.begin(), edge_ids.end()) - edge_ids.begin());

    OrientedCycle oc;
    oc.weight = weight;
    oc.original.reserve(len);
    oc.reversed.reserve(len);
    std::vector<char> used(len, 0);
    std::size_t pos = start;
    Vertex cur = edges[start].head;
    bool flipped = false;
    for (std::size_t step = 0; step < len; ++step) {
        used[pos] = 1;
        oc.original.push_back(edges[pos]);
        oc.reversed.push_back(flipped ? 1 : 0);
        if (!edge_ids.empty()) oc.edge_ids.push_back(edge_ids[pos]);
        if (!resistance.empty()) oc.resistance.push_back(resistance[pos]);
        if (step + 1 == len) break;
        std::size_t next = SIZE_MAX;
        for (std::size_t cand : inc[local(cur)])
            if (!used[cand]) next = cand;
        if (next == SIZE_MAX) throw NotACycleError("walk stalled; edges do not form one cycle");
        if (edges[next].tail == cur) {
            flipped = false;
            cur = edges[next].head;
        } else {
            flipped = true;
            cur = edges[next].tail;
        }
        pos = next;
    }
    if (cur != edges[start].tail)
        throw NotACycleError("walk did not close back to the start vertex");
    if (oc.edge_ids.empty()) {
        oc.edge_ids.resize(len);
        // Positions double as ids when the caller has no host graph.
        for (std::size_t i = 0; i < len; ++i)
            oc.edge_ids[i] = static_cast<EdgeId>(i);
    }
    return oc;
}

std::vector<std::tuple<Vertex, Vertex, double>> laplacian_change_triplets(const OrientedCycle& c) {
    std::vector<std::tuple<Vertex, Vertex, double>> t;
    const double w = static_cast<double>(c.weight);
    for (const DirEdge& e : c.forward_edges()) {
        t.emplace_back(e.tail, e.tail, w);
        t.emplace_back(e.head, e.tail, -w);
    }
    for (std::size_t i = 0; i < c.original.size(); ++i) {
        if (!c.reversed[i]) continue;
        const DirEdge& e = c.original[i];
        t.emplace_back(e.tail, e.tail, -w);
        t.emplace_back(e.head, e.head, -w);
        t.emplace_back(e.tail, e.head, w);
        t.emplace_back(e.head, e.tail, w);
    }
    return t;
}

}  // namespace eulersparse
