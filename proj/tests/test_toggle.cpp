#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "eulersparse/cycle_decomp.hpp"
#include "eulersparse/graph.hpp"
#include "eulersparse/linalg.hpp"
#include "eulersparse/rng.hpp"
#include "eulersparse/toggle.hpp"
#include "test_util.hpp"

using namespace eulersparse;
using namespace testutil;

namespace {

const NaiveShortCycleDecomposer kDecomposer;

std::vector<Edge> original_edges(const OrientedCycle& c) {
    std::vector<Edge> out;
    for (const DirEdge& e : c.original) out.push_back({e.tail, e.head, c.weight});
    return out;
}

DenseMatrix dense_of(Vertex n, const std::vector<Edge>& edges) { return dense_directed(n, edges); }

bool all_power_of_two(const DirectedMultigraph& g) {
    return std::all_of(g.edges().begin(), g.edges().end(),
                       [](const Edge& e) { return (e.weight & (e.weight - 1)) == 0; });
}

}  // namespace

TEST_SUITE_BEGIN("toggle");

TEST_CASE("toggle_cycle on a consistent triangle") {
    OrientedCycle c = correct_orientation({{0, 1}, {1, 2}, {2, 0}}, 1);
    std::vector<Edge> heads = toggle_cycle(c, true);
    REQUIRE(heads.size() == 3);
    for (const Edge& e : heads) CHECK(e.weight == 2);
    CHECK(toggle_cycle(c, false).empty());
}

TEST_CASE("toggle_cycle splits a mixed 4-cycle by orientation") {
    // Two edges agree with the walk, two oppose it (mask 0b0101).
    OrientedCycle c = correct_orientation(cycle_edges_with_mask(4, 0b0101), 3);
    std::vector<Edge> heads = toggle_cycle(c, true);
    std::vector<Edge> tails = toggle_cycle(c, false);
    CHECK(heads.size() == 2);
    CHECK(tails.size() == 2);
    for (const Edge& e : heads) CHECK(e.weight == 6);
    for (const Edge& e : tails) CHECK(e.weight == 6);
    std::vector<int64_t> base = degree_difference_of(4, original_edges(c));
    CHECK(degree_difference_of(4, heads) == base);
    CHECK(degree_difference_of(4, tails) == base);
}

TEST_CASE("both toggle outcomes shift the Laplacian by the same matrix, opposite signs") {
    for (int k = 2; k <= 8; ++k) {
        for (unsigned mask = 0; mask < (1u << k); ++mask) {
            OrientedCycle c = correct_orientation(cycle_edges_with_mask(k, mask), 2);
            DenseMatrix base = dense_of(k, original_edges(c));
            DenseMatrix change = DenseMatrix::Zero(k, k);
            for (const auto& [i, j, val] : laplacian_change_triplets(c)) change(i, j) += val;

            DenseMatrix heads = dense_of(k, toggle_cycle(c, true));
            DenseMatrix tails = dense_of(k, toggle_cycle(c, false));
            INFO("k=", k, " mask=", mask);
            CHECK((heads - base - change).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((tails - base + change).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("harvest splits edges by the leverage threshold") {
    DirectedMultigraph g = directed_triangle(1);
    std::vector<double> res = effective_resistances(g);  // 4/3 each, w*r = 4/3

    uint64_t next_id = 0;
    CycleHarvest light = harvest_cycles(g, res, 4.0, kDecomposer, 1, next_id);
    CHECK(light.heavy.empty());
    CHECK(light.leftover.empty());
    REQUIRE(light.cycles.size() == 1);
    CHECK(light.cycles[0].length() == 3);
    CHECK(light.cycles[0].id == 0);
    CHECK(next_id == 1);

    CycleHarvest heavy = harvest_cycles(g, res, 1.0, kDecomposer, 1, next_id);
    CHECK(heavy.heavy.size() == 3);
    CHECK(heavy.cycles.empty());

    // The boundary is strict: w*r == threshold stays light. Exact values so
    // the comparison is not at the mercy of solver rounding.
    std::vector<double> unit(3, 1.0);
    CycleHarvest boundary = harvest_cycles(g, unit, 1.0, kDecomposer, 1, next_id);
    CHECK(boundary.heavy.empty());
    CHECK(boundary.cycles.size() == 1);
}

TEST_CASE("harvest keeps per-level bookkeeping straight") {
    // Two weight levels plus one stray edge pair that cannot join a cycle.
    DirectedMultigraph g(5);
    g.add_edge(0, 1, 1);
    g.add_edge(1, 2, 1);
    g.add_edge(2, 0, 1);
    g.add_edge(0, 1, 2);
    g.add_edge(1, 2, 2);
    g.add_edge(2, 0, 2);
    g.add_edge(3, 4, 1);
    g.add_edge(4, 3, 1);
    std::vector<double> res(g.edge_count(), 0.5);

    uint64_t next_id = 5;
    CycleHarvest h = harvest_cycles(g, res, 100.0, kDecomposer, 9, next_id);
    CHECK(h.heavy.empty());
    CHECK(h.leftover.empty());
    REQUIRE(h.cycles.size() == 3);  // triangle at weight 1, digon at weight 1, triangle at weight 2
    CHECK(next_id == 8);

    std::multiset<Weight> weights;
    std::size_t total_edges = 0;
    for (const OrientedCycle& c : h.cycles) {
        weights.insert(c.weight);
        total_edges += c.length();
        for (std::size_t i = 0; i < c.length(); ++i) {
            CHECK(g.edge(c.edge_ids[i]).tail == c.original[i].tail);
            CHECK(g.edge(c.edge_ids[i]).head == c.original[i].head);
            CHECK(g.edge(c.edge_ids[i]).weight == c.weight);
            CHECK(c.resistance[i] == 0.5);
        }
    }
    CHECK(weights == std::multiset<Weight>{1, 1, 2});
    CHECK(total_edges == 8);
}

TEST_CASE("harvest rejects a mismatched resistance vector") {
    uint64_t next_id = 0;
    std::vector<double> wrong(2, 1.0);
    CHECK_THROWS_AS(harvest_cycles(directed_triangle(1), wrong, 4.0, kDecomposer, 0, next_id),
                    InvalidParamsError);
}

TEST_CASE("sparsify_once on a single cycle hits both outcomes") {
    DirectedMultigraph g = directed_triangle(2);
    std::vector<double> res = effective_resistances(g);
    ToggleConfig cfg;

    auto fixed = [&](bool value) {
        return sparsify_once_with_coins(
            g, res, cfg, kDecomposer,
            [value](std::size_t, const OrientedCycle&) { return value; });
    };

    SparsifyOnceResult heads = fixed(true);
    CHECK(heads.graph.edge_count() == 3);
    for (const Edge& e : heads.graph.edges()) CHECK(e.weight == 4);
    CHECK(is_eulerian(heads.graph));
    CHECK(heads.resistance.size() == 3);

    SparsifyOnceResult tails = fixed(false);
    CHECK(tails.graph.edge_count() == 0);
    CHECK(is_eulerian(tails.graph));
    CHECK(tails.report.cycles_toggled == 1);
    CHECK(tails.report.edges_before == 3);
    CHECK(tails.report.edges_after == 0);
}

TEST_CASE("sparsify_once carries everything when all edges are heavy") {
    DirectedMultigraph g = directed_triangle(2);
    std::vector<double> res = effective_resistances(g);
    ToggleConfig cfg;
    cfg.leverage_threshold_factor = 1e-12;
    SparsifyOnceResult r = sparsify_once(g, res, cfg, kDecomposer);
    CHECK(r.graph == g);
    CHECK(r.resistance == res);
    CHECK(r.report.heavy_set_aside == 3);
    CHECK(r.report.cycles_toggled == 0);
    CHECK(r.report.measured_rho == 0.0);
}

TEST_CASE("sparsify_once structural properties on random instances") {
    Rng seeds(71);
    for (int trial = 0; trial < 6; ++trial) {
        RandomEulerianParams p;
        p.n = 40;
        p.cycle_count = 60;
        p.max_weight_exp = 3;
        DirectedMultigraph g = generate_random_eulerian(p, seeds());
        std::vector<double> res = effective_resistances(g);
        ToggleConfig cfg;
        cfg.seed = seeds();

        SparsifyOnceResult r = sparsify_once(g, res, cfg, kDecomposer);
        CHECK(is_eulerian(r.graph));
        CHECK(degree_difference(r.graph) == degree_difference(g));
        CHECK(all_power_of_two(r.graph));
        CHECK(r.resistance.size() == r.graph.edge_count());

        Weight max_in = 0, max_out = 0;
        for (const Edge& e : g.edges()) max_in = std::max(max_in, e.weight);
        for (const Edge& e : r.graph.edges()) max_out = std::max(max_out, e.weight);
        CHECK(max_out <= 2 * max_in);

        double threshold = cfg.leverage_threshold_factor * static_cast<double>(g.vertex_count()) /
                           static_cast<double>(g.edge_count());
        CHECK(r.report.measured_rho <= threshold);
        CHECK(r.report.edges_before == g.edge_count());
        CHECK(r.report.edges_after == r.graph.edge_count());
        CHECK(r.report.heavy_set_aside + r.report.leftover_kept <= r.graph.edge_count());

        // Same seed, same outcome.
        SparsifyOnceResult again = sparsify_once(g, res, cfg, kDecomposer);
        CHECK(again.graph == r.graph);
    }
}

TEST_CASE("sparsify_once validates its input") {
    DirectedMultigraph open(3);
    open.add_edge(0, 1, 1);
    std::vector<double> res(1, 1.0);
    ToggleConfig cfg;
    CHECK_THROWS_AS(sparsify_once(open, res, cfg, kDecomposer), NotEulerianError);

    DirectedMultigraph odd = digon(3);
    std::vector<double> res2 = effective_resistances(odd);
    CHECK_THROWS_AS(sparsify_once(odd, res2, cfg, kDecomposer), NonPowerOfTwoWeightError);
}

TEST_CASE("sparsify_once on the empty graph") {
    DirectedMultigraph g(5);
    ToggleConfig cfg;
    SparsifyOnceResult r = sparsify_once(g, {}, cfg, kDecomposer);
    CHECK(r.graph.edge_count() == 0);
    CHECK(r.report.edges_before == 0);
}

TEST_CASE("mean per-round reduction beats 15/16 on dense instances") {
    RandomEulerianParams p;
    p.n = 100;
    p.cycle_count = 1500;
    p.max_weight_exp = 2;
    double ratio_sum = 0.0;
    int trials = 20;
    for (int t = 0; t < trials; ++t) {
        DirectedMultigraph g = generate_random_eulerian(p, 1000 + static_cast<uint64_t>(t));
        std::vector<double> res = effective_resistances(g);
        ToggleConfig cfg;
        cfg.seed = 7000 + static_cast<uint64_t>(t);
        SparsifyOnceResult r = sparsify_once(g, res, cfg, kDecomposer);
        ratio_sum += static_cast<double>(r.graph.edge_count()) / static_cast<double>(g.edge_count());
    }
    CHECK(ratio_sum / trials <= 15.0 / 16.0);
}

TEST_CASE("stop threshold formula") {
    ToggleConfig cfg;
    cfg.epsilon = 0.25;
    cfg.stop_constant = 0.5;
    double want = 0.5 * (20.0 * std::log2(10.0) + 10.0 * 36.0 * std::log2(10.0) / 0.0625);
    CHECK(toggle_stop_threshold(cfg, 10, 20, 6) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("sparsify below threshold returns the binary decomposition untouched") {
    DirectedMultigraph g = directed_triangle(3);  // weight 3 exercises the split
    ToggleConfig cfg;                             // defaults: threshold far above 6 edges
    SparsifyResult r = sparsify(g, cfg, kDecomposer);
    CHECK(r.rounds.empty());
    CHECK(r.stop_reason == "edge count below stop threshold");
    CHECK(r.graph == binary_decompose(g));
}

TEST_CASE("sparsify preserves degrees and power-of-two weights across rounds") {
    RandomEulerianParams p;
    p.n = 30;
    p.cycle_count = 120;
    p.max_weight_exp = 2;
    DirectedMultigraph g = generate_random_eulerian(p, 5150);
    ToggleConfig cfg;
    cfg.stop_constant = 1e-6;  // force the loop to actually run
    cfg.max_rounds = 4;
    cfg.seed = 99;
    cfg.verify_rounds = true;
    SparsifyResult r = sparsify(g, cfg, kDecomposer);
    CHECK(r.stop_reason == "round cap reached");
    CHECK(r.rounds.size() == 4);
    CHECK(is_eulerian(r.graph));
    CHECK(degree_difference(r.graph) == degree_difference(g));
    CHECK(all_power_of_two(r.graph));
    for (const ToggleRoundReport& rep : r.rounds) {
        REQUIRE(rep.measured_error.has_value());
        CHECK(*rep.measured_error >= 0.0);
    }

    SparsifyResult again = sparsify(g, cfg, kDecomposer);
    CHECK(again.graph == r.graph);
}

TEST_CASE("sparsify gives up after 32 rounds without progress") {
    ToggleConfig cfg;
    cfg.stop_constant = 1e-9;
    cfg.leverage_threshold_factor = 1e-12;  // everything is heavy, nothing shrinks
    cfg.max_rounds = 100;
    SparsifyResult r = sparsify(directed_triangle(2), cfg, kDecomposer);
    CHECK(r.stop_reason == "no progress across 32 rounds");
    CHECK(r.rounds.size() == 32);
    CHECK(r.graph == directed_triangle(2));
}

TEST_CASE("sparsify validates parameters") {
    ToggleConfig cfg;
    cfg.epsilon = 0.0;
    CHECK_THROWS_AS(sparsify(directed_triangle(1), cfg, kDecomposer), InvalidParamsError);
    cfg.epsilon = 0.6;
    CHECK_THROWS_AS(sparsify(directed_triangle(1), cfg, kDecomposer), InvalidParamsError);
    cfg.epsilon = 0.5;  // boundary is allowed
    CHECK_NOTHROW(sparsify(directed_triangle(1), cfg, kDecomposer));

    DirectedMultigraph open(2);
    open.add_edge(0, 1, 1);
    ToggleConfig ok;
    CHECK_THROWS_AS(sparsify(open, ok, kDecomposer), NotEulerianError);
}

TEST_SUITE_END();
