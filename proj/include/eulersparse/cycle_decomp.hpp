#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "eulersparse/graph.hpp"

namespace eulersparse {

// Unweighted undirected multigraph view used by the decomposer. The index
// into edges is the edge id that decomposition results refer to.
struct UndirectedMultigraph {
    Vertex n = 0;
    std::vector<std::pair<Vertex, Vertex>> edges;
};

struct DecompositionCertificate {
    std::size_t m_hat = 0;          // guaranteed leftover bound (2n for the naive scheme)
    int max_length = 0;             // measured max cycle length after path expansion
    int max_contracted_length = 0;  // measured max cycle length before expansion
    bool expansion_used = false;    // true if any emitted cycle went through a spliced path
};

// Edge-disjoint cycles plus the edges that did not make it into any cycle.
// Cycle entries are edge ids in closed-walk order.
struct CycleDecomposition {
    std::vector<std::vector<EdgeId>> cycles;
    std::vector<EdgeId> leftover;
    DecompositionCertificate certificate;
};

class ShortCycleDecomposer {
public:
    virtual ~ShortCycleDecomposer() = default;
    virtual CycleDecomposition decompose(const UndirectedMultigraph& g, uint64_t seed) const = 0;
};

// Peels degree-<=2 vertices by splicing their incident edges into contracted
// super-edges (paths of original edges), then repeatedly BFSes the
// min-degree-3 remainder for a short cycle, expands it through the spliced
// paths, removes it, and goes back to peeling. Edges discarded at degree-1
// vertices become leftover; there are at most 2n of them because every
// discarded path burns its interior vertices and its dead endpoint. Cycles
// found in the contracted graph have at most ~2 log2(n) contracted edges, but
// expansion can make them longer; the certificate reports what actually
// happened rather than the a-priori bound.
class NaiveShortCycleDecomposer final : public ShortCycleDecomposer {
public:
    CycleDecomposition decompose(const UndirectedMultigraph& g, uint64_t seed) const override;
};

struct DecompositionValidation {
    bool edge_disjoint = false;
    bool covers_all = false;   // cycles + leftover == all edge ids exactly once
    bool cycles_close = false; // every cycle is a closed walk of length >= 2
    bool lengths_ok = false;   // every cycle length <= certificate.max_length
    bool leftover_ok = false;  // leftover count <= certificate.m_hat
    std::vector<std::string> failures;

    bool pass() const {
        return edge_disjoint && covers_all && cycles_close && lengths_ok && leftover_ok;
    }
};

DecompositionValidation validate_decomposition(const UndirectedMultigraph& g,
                                               const CycleDecomposition& d);

// A directed edge as it appears inside a cycle (host-graph direction).
struct DirEdge {
    Vertex tail = 0;
    Vertex head = 0;

    friend bool operator==(const DirEdge&, const DirEdge&) = default;
};

// A cycle whose underlying undirected closed walk has been given a coherent
// direction. original[i] is the i-th edge of the walk in its host-graph
// direction; reversed[i] says that edge opposes the walk (so the walk
// traverses it head -> tail). The uniform weight is the host weight of every
// edge in the cycle.
struct OrientedCycle {
    uint64_t id = 0;
    Weight weight = 1;
    std::vector<DirEdge> original;     // walk order
    std::vector<uint8_t> reversed;     // 1 = edge opposes the walk direction
    std::vector<EdgeId> edge_ids;      // ids in the host graph, aligned with original
    std::vector<double> resistance;    // per-edge effective resistance (optional, may be empty)

    std::size_t length() const { return original.size(); }

    // The consistently directed cycle: original edges with the opposing ones
    // flipped. Every vertex has exactly one outgoing and one incoming edge.
    std::vector<DirEdge> forward_edges() const;

    // Host ids of the opposing (reversed) edges.
    std::vector<EdgeId> opposing_edge_ids() const;

    std::vector<Vertex> vertices() const;
};

// Picks the walk direction from the edge whose host id is smallest (falling
// back to position 0), then walks the closed cycle flagging every edge that
// opposes the walk. Throws NotACycleError unless the edges form one closed
// cycle visiting each of its vertices exactly once.
OrientedCycle correct_orientation(std::vector<DirEdge> edges, Weight weight,
                                  std::vector<EdgeId> edge_ids = {},
                                  std::vector<double> resistance = {});

// Sparse triplets of the Laplacian change this cycle toggles by: the directed
// Laplacian of the forward cycle minus the undirected Laplacian of the
// opposing edges (at full cycle weight). Adding these to the host Laplacian
// is what one toggle outcome does; subtracting is the other.
std::vector<std::tuple<Vertex, Vertex, double>> laplacian_change_triplets(const OrientedCycle& c);

}  // namespace eulersparse
