// Acceptance suite: eight end-to-end checks over the sparsifier library, one
// pass/fail line per check, exit 0 only if all pass. Tolerances, budgets, and
// statistical thresholds are pinned here on purpose; nothing is configurable.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "eulersparse/colouring.hpp"
#include "eulersparse/cycle_decomp.hpp"
#include "eulersparse/graph.hpp"
#include "eulersparse/linalg.hpp"
#include "eulersparse/rng.hpp"
#include "eulersparse/toggle.hpp"
#include "eulersparse/verify.hpp"
#include "json.hpp"

namespace {

using namespace eulersparse;

constexpr double kStructuralBudgetSec = 300.0;     // check 1 must finish inside this
constexpr double kCertificationBudgetSec = 1200.0; // check 2 must finish inside this
constexpr double kRealDegreeTol = 1e-9;   // relative; matches is_eulerian(RealDigraph)
constexpr double kMeanLaplacianTol = 1e-12;
constexpr double kBinomialNull = 0.95;    // claimed per-round success rate under test
constexpr double kBinomialAlpha = 0.05;   // one-sided rejection level

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// P(X <= k) for X ~ Binomial(n, p), via log-gamma to stay stable for n ~ 1e3.
double binomial_lower_tail(std::size_t n, std::size_t k, double p) {
    double cdf = 0.0;
    for (std::size_t i = 0; i <= k && i <= n; ++i) {
        double logpmf = std::lgamma(double(n) + 1.0) - std::lgamma(double(i) + 1.0) -
                        std::lgamma(double(n - i) + 1.0) + double(i) * std::log(p) +
                        double(n - i) * std::log1p(-p);
        cdf += std::exp(logpmf);
    }
    return std::min(cdf, 1.0);
}

int ceil_log2(Vertex n) {
    int k = 0;
    while ((int64_t(1) << k) < int64_t(n)) ++k;
    return k;
}

DirectedMultigraph flower(Vertex petals) {
    DirectedMultigraph g(1 + 2 * petals);
    for (Vertex t = 0; t < petals; ++t) {
        Vertex a = 1 + 2 * t, b = 2 + 2 * t;
        g.add_edge(0, a, 1);
        g.add_edge(a, b, 1);
        g.add_edge(b, 0, 1);
    }
    return g;
}

// ---------------------------------------------------------------------------
// 1. Structural invariants: every output of both sparsifiers stays Eulerian,
//    preserves per-vertex degree differences, and (toggle) keeps power-of-two
//    integral weights. 200 instances spread over n in [20, 300], plus five
//    small instances through the gaussian-walk backend.
// ---------------------------------------------------------------------------
Outcome check_structural_invariants() {
    auto t0 = std::chrono::steady_clock::now();
    NaiveShortCycleDecomposer dec;
    std::vector<std::string> fails;
    double worst_real_dev = 0.0;
    std::size_t instances = 0;

    auto check_toggle = [&](const DirectedMultigraph& g, const DirectedMultigraph& out,
                            const std::vector<int64_t>& want, const std::string& tag) {
        if (!is_eulerian(out)) fails.push_back(tag + ": toggle output not eulerian");
        if (degree_difference(out) != want) fails.push_back(tag + ": toggle degrees moved");
        for (const Edge& e : out.edges()) {
            if (e.weight == 0 || (e.weight & (e.weight - 1)) != 0) {
                fails.push_back(tag + ": non power-of-two weight");
                break;
            }
        }
        (void)g;
    };
    auto check_colour = [&](const RealDigraph& out, const std::string& tag) {
        double scale = 1.0;
        for (const RealEdge& e : out.edges) {
            scale = std::max(scale, std::abs(e.weight));
            if (!(e.weight > 0.0)) {
                fails.push_back(tag + ": nonpositive colour weight");
                break;
            }
        }
        if (!is_eulerian(out)) fails.push_back(tag + ": colour output not eulerian");
        double dev = 0.0;
        for (double d : degree_difference(out)) dev = std::max(dev, std::abs(d));
        worst_real_dev = std::max(worst_real_dev, dev);
        if (dev > kRealDegreeTol * scale) fails.push_back(tag + ": colour degrees moved");
    };

    for (int i = 0; i < 200 && fails.size() < 4; ++i) {
        Vertex n = Vertex(20 + (i * 280) / 199);
        RandomEulerianParams p;
        p.n = n;
        p.cycle_count = 2 * int(n);
        p.max_weight_exp = 3;
        uint64_t seed = derive_seed(101, uint64_t(i));
        DirectedMultigraph g = generate_random_eulerian(p, seed);
        std::vector<int64_t> want = degree_difference(g);
        std::string tag = "n=" + std::to_string(n) + "/i=" + std::to_string(i);
        ++instances;

        ToggleConfig tcfg;
        tcfg.epsilon = 0.5;
        tcfg.stop_constant = 1e-4;  // push many rounds; check 2 owns the frozen default
        tcfg.seed = seed + 1;
        check_toggle(g, sparsify(g, tcfg, dec).graph, want, tag);

        ColourConfig ccfg;
        ccfg.epsilon = 0.5;
        ccfg.stop_constant = 1e-4;
        ccfg.seed = seed + 2;
        ccfg.oracle = OracleKind::RandomSign;
        check_colour(pcs(g, ccfg, dec).graph, tag);
    }

    for (int i = 0; i < 5 && fails.size() < 4; ++i) {
        RandomEulerianParams p;
        p.n = Vertex(20 + 10 * i);
        p.cycle_count = 2 * int(p.n);
        p.max_weight_exp = 2;
        uint64_t seed = derive_seed(102, uint64_t(i));
        DirectedMultigraph g = generate_random_eulerian(p, seed);
        ColourConfig ccfg;
        ccfg.epsilon = 0.5;
        ccfg.stop_constant = 1e-4;
        ccfg.seed = seed + 1;
        ccfg.oracle = OracleKind::GaussianWalk;
        check_colour(pcs(g, ccfg, dec).graph, "gaussian-walk i=" + std::to_string(i));
    }

    double secs = seconds_since(t0);
    std::ostringstream det;
    if (fails.empty()) {
        det << instances << " instances (n 20..300) x both methods + 5 gaussian-walk runs; "
            << "worst real degree deviation " << std::scientific << worst_real_dev;
        if (secs >= kStructuralBudgetSec) det << "; OVER TIME BUDGET";
    } else {
        det << fails.size() << " failures, first: " << fails.front();
    }
    return {fails.empty() && secs < kStructuralBudgetSec, det.str()};
}

// ---------------------------------------------------------------------------
// 2. Error certification at the frozen stop constants: for eps in {0.5, 0.25}
//    and n in {100, 200}, at least 18 of 20 seeded runs per cell must land at
//    measured error <= eps, for both methods. Instances and seeds reproduce
//    the calibration protocol exactly.
// ---------------------------------------------------------------------------
Outcome check_error_certification() {
    auto t0 = std::chrono::steady_clock::now();
    NaiveShortCycleDecomposer dec;
    bool ok = true;
    std::ostringstream det;
    det << "passes per cell (need >=18/20, eps {.5,.25} x n {100,200}):";
    for (int method = 0; method < 2; ++method) {
        det << (method == 0 ? " toggle" : " | colour");
        for (double eps : {0.5, 0.25}) {
            for (int n : {100, 200}) {
                int cell_pass = 0;
                for (int run = 0; run < 20; ++run) {
                    RandomEulerianParams p;
                    p.n = Vertex(n);
                    p.cycle_count = 57 * n;
                    p.max_weight_exp = 2;
                    uint64_t seed = derive_seed(777, uint64_t(n * 1000 + run));
                    DirectedMultigraph g = generate_random_eulerian(p, seed);
                    double err;
                    if (method == 0) {
                        ToggleConfig cfg;  // frozen default stop_constant
                        cfg.epsilon = eps;
                        cfg.seed = seed + 1;
                        err = error_metric(g, sparsify(g, cfg, dec).graph);
                    } else {
                        ColourConfig cfg;  // frozen default stop_constant
                        cfg.epsilon = eps;
                        cfg.seed = seed + 1;
                        cfg.oracle = OracleKind::RandomSign;
                        err = error_metric(to_real(g), pcs(g, cfg, dec).graph);
                    }
                    if (err <= eps) ++cell_pass;
                }
                ok = ok && cell_pass >= 18;
                det << ' ' << cell_pass;
            }
        }
    }
    double secs = seconds_since(t0);
    if (secs >= kCertificationBudgetSec) {
        det << "; OVER TIME BUDGET";
        ok = false;
    }
    return {ok, det.str()};
}

// ---------------------------------------------------------------------------
// 3. Edge-reduction rates. (a) A single toggle round on cycle-dominated
//    instances removes at least 1/16 of the edges on average over 20 seeds.
//    (b) Dense-branch colour rounds that actually coloured their cycles shrink
//    the composite by at least 1/64; tested one-sided against a 95% per-round
//    success rate at level 0.05. (c) Every sparse-branch round satisfies its
//    shrink-or-hand-back disjunction, recomputed here from the raw counters.
// ---------------------------------------------------------------------------
Outcome check_edge_reduction() {
    NaiveShortCycleDecomposer dec;

    double ratio_sum = 0.0;
    int instrumented = 0;
    for (int s = 0; s < 20; ++s) {
        RandomEulerianParams p;
        p.n = 100;
        p.cycle_count = 1500;
        p.max_weight_exp = 0;
        DirectedMultigraph g = generate_random_eulerian(p, derive_seed(303, uint64_t(s)));
        std::vector<double> res = effective_resistances(g);
        ToggleConfig cfg;
        cfg.seed = derive_seed(303, uint64_t(100 + s));
        SparsifyOnceResult r = sparsify_once(g, res, cfg, dec);
        const ToggleRoundReport& rep = r.report;
        std::size_t covered = rep.edges_before - rep.heavy_set_aside - rep.leftover_kept;
        if (rep.cycles_toggled > 0 && 2 * covered >= rep.edges_before) ++instrumented;
        ratio_sum += double(rep.edges_after) / double(rep.edges_before);
    }
    double mean_ratio = ratio_sum / 20.0;
    bool a_ok = instrumented == 20 && mean_ratio <= 15.0 / 16.0;

    std::size_t dense_rounds = 0, dense_pass = 0;
    std::size_t sparse_rounds = 0, sparse_pass = 0;
    // The dense-branch shrink claim presumes the round's own harvest covered
    // at least half of the integral part entering it, so track that count
    // across rounds (the report only carries it for the round's exit side).
    auto scan_rounds = [&](std::size_t integral_in, const PcsResult& r) {
        for (const ColourRoundReport& rd : r.rounds) {
            if (rd.branch == "pcg") {
                std::size_t covered =
                    integral_in - rd.heavy_set_aside - rd.leftover_kept;
                if (2 * covered >= integral_in && rd.coloured_fraction >= 0.5) {
                    ++dense_rounds;
                    if (64 * rd.m_after <= 63 * rd.m_before) ++dense_pass;
                }
            } else {
                ++sparse_rounds;
                bool shrank = 64 * rd.m_after <= 63 * rd.m_before;
                bool handed_back = 4 * rd.integral_edges >= rd.m_after;
                if ((shrank || handed_back) && rd.sparsity_ok) ++sparse_pass;
            }
            integral_in = rd.integral_edges;
        }
    };

    for (int s = 0; s < 20; ++s) {
        RandomEulerianParams p;
        p.n = 60;
        p.cycle_count = 600;
        p.max_weight_exp = 2;
        uint64_t seed = derive_seed(304, uint64_t(s));
        DirectedMultigraph g = generate_random_eulerian(p, seed);
        ColourConfig cfg;
        cfg.epsilon = 0.5;
        cfg.stop_constant = 1e-4;
        cfg.seed = seed + 1;
        cfg.oracle = OracleKind::RandomSign;
        scan_rounds(g.edge_count(), pcs(g, cfg, dec));
    }
    for (Vertex petals : {8, 9, 10, 11, 12, 13, 16, 17, 18, 19}) {
        DirectedMultigraph g = flower(petals);
        ColourConfig cfg;
        // Low enough that even the larger flowers run their carried petal
        // cycle through the sparse branch instead of stopping after round 1.
        cfg.stop_constant = 1e-6;
        cfg.seed = uint64_t(petals);
        cfg.oracle = OracleKind::Adversarial;
        scan_rounds(g.edge_count(), pcs(g, cfg, dec));
    }
    for (int s = 0; s < 10; ++s) {
        RandomEulerianParams p;
        p.n = 24;
        p.cycle_count = 70;
        uint64_t seed = derive_seed(305, uint64_t(s));
        DirectedMultigraph g = generate_random_eulerian(p, seed);
        ColourConfig cfg;
        cfg.epsilon = 0.5;
        cfg.stop_constant = 2e-4;
        cfg.seed = seed + 1;
        cfg.oracle = OracleKind::GaussianWalk;
        scan_rounds(g.edge_count(), pcs(g, cfg, dec));
    }

    double pvalue = dense_rounds == 0
                        ? 0.0
                        : binomial_lower_tail(dense_rounds, dense_pass, kBinomialNull);
    bool b_ok = dense_rounds >= 20 && pvalue >= kBinomialAlpha;
    bool c_ok = sparse_rounds >= 10 && sparse_pass == sparse_rounds;

    std::ostringstream det;
    det << "one-round mean ratio " << std::fixed << mean_ratio << " (<=0.9375, " << instrumented
        << "/20 cycle-dominated); dense rounds 63/64: " << dense_pass << "/" << dense_rounds
        << " (p=" << pvalue << "); sparse rounds ok: " << sparse_pass << "/" << sparse_rounds;
    return {a_ok && b_ok && c_ok, det.str()};
}

// ---------------------------------------------------------------------------
// 4. Per-cycle spectral bounds: the three PSD dominations each decomposed
//    cycle must satisfy inside its host metric (opposing side, forward side,
//    full toggle change) hold on 1000 harvested cycles, and the carried-cycle
//    rescaling stays dominated by the composite on 60 mid-pipeline states.
//    All comparisons allow eigenvalues down to -1e-8 times the matrix scale.
// ---------------------------------------------------------------------------
Outcome check_spectral_bounds() {
    NaiveShortCycleDecomposer dec;
    std::size_t cycles_checked = 0;
    double worst_cycle_eig = 0.0;
    bool ok = true;

    for (uint64_t i = 0; cycles_checked < 1000 && i < 200; ++i) {
        RandomEulerianParams p;
        p.n = Vertex(24 + 8 * (i % 4));
        p.cycle_count = 2 * int(p.n);
        p.max_weight_exp = 2;
        DirectedMultigraph g = generate_random_eulerian(p, derive_seed(404, i));
        std::vector<double> res = effective_resistances(g);
        HostMetric host = make_host_metric(g);
        uint64_t next_id = 0;
        CycleHarvest h = harvest_cycles(g, res, 1e9, dec, derive_seed(404, 1000 + i), next_id);
        for (const OrientedCycle& c : h.cycles) {
            if (cycles_checked >= 1000) break;
            CycleLemmaReport rep = check_cycle_lemmas(host, c);
            ++cycles_checked;
            ok = ok && rep.pass();
            worst_cycle_eig = std::min({worst_cycle_eig, rep.spart_min_eig, rep.fpart_min_eig,
                                        rep.bounds_fwd_min_eig, rep.bounds_rev_min_eig});
        }
    }

    std::size_t states_checked = 0;
    double worst_state_eig = 0.0;
    for (uint64_t s = 0; s < 12; ++s) {
        RandomEulerianParams p;
        p.n = 20;
        p.cycle_count = 50;
        p.max_weight_exp = 1;
        DirectedMultigraph g = generate_random_eulerian(p, derive_seed(405, s));
        ColourConfig cfg;
        cfg.epsilon = 0.5;
        cfg.oracle = (s % 2 == 0) ? OracleKind::Adversarial : OracleKind::GaussianWalk;
        cfg.seed = derive_seed(405, 100 + s);
        auto oracle = make_oracle(cfg.oracle, cfg);
        Rng rng(derive_seed(405, 200 + s));
        SparsifierState st;
        st.g = g;
        st.resistance = effective_resistances(g);
        for (int round = 0; round < 5 && st.m_prime() > 0; ++round) {
            ColourRoundReport rep;
            if (4 * st.g.edge_count() >= st.m_prime())
                st = pcg(std::move(st), cfg, dec, *oracle, rng, rep);
            else
                st = pcc(std::move(st), cfg, *oracle, rng, rep);
            double eig = 0.0;
            ok = ok && check_rescale_dominance(st, &eig);
            worst_state_eig = std::min(worst_state_eig, eig);
            ++states_checked;
        }
    }

    std::ostringstream det;
    det << cycles_checked << " cycles and " << states_checked
        << " mid-pipeline states within tolerance; worst cycle eig " << std::scientific
        << worst_cycle_eig << ", worst state eig " << worst_state_eig;
    return {ok && cycles_checked >= 1000 && states_checked >= 48, det.str()};
}

// ---------------------------------------------------------------------------
// 5. Single-round outcome enumeration: on every corpus graph whose round
//    toggles at most 10 cycles, the exhaustively enumerated outcomes match
//    the per-cycle changes within 1e-12, average back to the input Laplacian,
//    and seeded rounds only ever produce enumerated outcomes.
// ---------------------------------------------------------------------------
Outcome check_outcome_enumeration() {
    NaiveShortCycleDecomposer dec;
    using GraphKey = std::vector<std::tuple<Vertex, Vertex, Weight>>;
    auto key_of = [](const DirectedMultigraph& g) {
        GraphKey k;
        k.reserve(g.edge_count());
        for (const Edge& e : g.edges()) k.emplace_back(e.tail, e.head, e.weight);
        std::sort(k.begin(), k.end());
        return k;
    };

    std::size_t analyzed = 0, skipped = 0, trials = 0, misses = 0;
    double worst_dev = 0.0;
    bool ok = true;

    // seed_decomp: vary the full seed (coin and decomposition) only on graphs
    // whose cycle set is forced, so enumerated support is seed-independent.
    auto analyze = [&](const DirectedMultigraph& g, uint64_t tag, bool seed_decomp) {
        ToggleConfig cfg;
        cfg.seed = derive_seed(505, tag);
        ToggleDistribution dist;
        try {
            dist = brute_force_toggle_distribution(g, cfg, dec, 10);
        } catch (const TooLargeError&) {
            ++skipped;
            return;
        }
        ++analyzed;
        ok = ok && dist.matches_cycle_changes;
        worst_dev = std::max(worst_dev, dist.max_deviation);

        DenseMatrix base = laplacian_directed(g);
        double scale = std::max(1.0, base.cwiseAbs().maxCoeff());
        if ((dist.mean_laplacian - base).cwiseAbs().maxCoeff() > kMeanLaplacianTol * scale)
            ok = false;

        std::set<GraphKey> support;
        for (const ToggleOutcome& o : dist.outcomes) support.insert(key_of(o.graph));
        std::vector<double> res = effective_resistances(g);
        for (uint64_t t = 0; t < 20; ++t) {
            DirectedMultigraph out;
            if (seed_decomp) {
                ToggleConfig run = cfg;
                run.seed = derive_seed(505, tag * 1000 + 7 + t);
                out = sparsify_once(g, res, run, dec).graph;
            } else {
                Rng coins(derive_seed(505, tag * 1000 + 7 + t));
                auto coin = [&coins](std::size_t, const OrientedCycle&) { return rand_bit(coins); };
                out = sparsify_once_with_coins(g, res, cfg, dec, coin).graph;
            }
            ++trials;
            if (support.count(key_of(out)) == 0) {
                ++misses;
                ok = false;
            }
        }
    };

    DirectedMultigraph triangle(3);
    triangle.add_edge(0, 1, 2);
    triangle.add_edge(1, 2, 2);
    triangle.add_edge(2, 0, 2);
    DirectedMultigraph digon(2);
    digon.add_edge(0, 1, 2);
    digon.add_edge(1, 0, 2);
    DirectedMultigraph two_triangles(5);
    for (auto [a, b] : {std::pair<Vertex, Vertex>{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 4}, {4, 0}})
        two_triangles.add_edge(a, b, 1);
    analyze(triangle, 1, true);
    analyze(digon, 2, true);
    analyze(two_triangles, 3, true);
    analyze(flower(2), 4, true);
    analyze(flower(3), 5, true);

    for (uint64_t s = 0; s < 60 && analyzed < 24; ++s) {
        RandomEulerianParams p;
        p.n = Vertex(4 + s % 9);
        p.cycle_count = 2 + int(s % 3);
        p.max_weight_exp = int(s % 2);
        DirectedMultigraph g = generate_random_eulerian(p, derive_seed(506, s));
        analyze(g, 100 + s, false);
    }

    std::ostringstream det;
    det << analyzed << " graphs enumerated (" << skipped << " skipped as too large), " << trials
        << " seeded rounds, " << misses << " outside support; worst outcome deviation "
        << std::scientific << worst_dev;
    return {ok && analyzed >= 20, det.str()};
}

// ---------------------------------------------------------------------------
// 6. Decomposition certificates: on 100 random multigraphs the naive
//    decomposer yields an edge-disjoint exact cover with at most 2n leftover
//    edges, and when no spliced path was expanded the measured max cycle
//    length stays within 2*ceil(log2 n).
// ---------------------------------------------------------------------------
Outcome check_decomposition_certificates() {
    NaiveShortCycleDecomposer dec;
    bool ok = true;
    std::size_t graphs = 0, expansion_free = 0;
    int worst_len = 0;
    std::string first_fail;

    auto check_one = [&](const UndirectedMultigraph& u, uint64_t seed, const std::string& tag) {
        ++graphs;
        CycleDecomposition d = dec.decompose(u, seed);
        DecompositionValidation v = validate_decomposition(u, d);
        if (!v.pass()) {
            ok = false;
            if (first_fail.empty())
                first_fail = tag + ": " + (v.failures.empty() ? "invalid" : v.failures.front());
        }
        if (d.leftover.size() > 2 * std::size_t(u.n)) {
            ok = false;
            if (first_fail.empty()) first_fail = tag + ": leftover above 2n";
        }
        // Cycles found in the contracted graph obey the BFS length bound on
        // every input; the expanded length only has to obey it when no
        // spliced path made it into a cycle.
        if (d.certificate.max_contracted_length > 2 * ceil_log2(u.n)) {
            ok = false;
            if (first_fail.empty()) first_fail = tag + ": contracted cycle above 2 ceil(log2 n)";
        }
        if (!d.certificate.expansion_used) {
            ++expansion_free;
            worst_len = std::max(worst_len, d.certificate.max_length);
            if (d.certificate.max_length > 2 * ceil_log2(u.n)) {
                ok = false;
                if (first_fail.empty()) first_fail = tag + ": cycle longer than 2 ceil(log2 n)";
            }
        }
    };

    for (uint64_t i = 0; i < 100; ++i) {
        Rng rng(derive_seed(606, i));
        UndirectedMultigraph u;
        if (i % 2 == 0) {
            RandomEulerianParams p;
            p.n = Vertex(16 + rand_below(rng, 105));
            p.cycle_count = int(2 * p.n + Vertex(rand_below(rng, uint64_t(4 * p.n))));
            DirectedMultigraph g = generate_random_eulerian(p, rng());
            u.n = g.vertex_count();
            u.edges.reserve(g.edge_count());
            for (const Edge& e : g.edges()) u.edges.push_back({e.tail, e.head});
        } else {
            u.n = Vertex(16 + rand_below(rng, 105));
            std::size_t m = std::size_t(2 + rand_below(rng, 7)) * std::size_t(u.n);
            for (std::size_t j = 0; j < m; ++j) {
                Vertex tail = Vertex(rand_below(rng, uint64_t(u.n)));
                Vertex head = tail;
                while (head == tail) head = Vertex(rand_below(rng, uint64_t(u.n)));
                u.edges.push_back({tail, head});
            }
        }
        check_one(u, rng(), "graph " + std::to_string(i));
    }

    // Block graphs (disjoint parallel bundles and 4-cliques) decompose
    // without touching a spliced path, so the expanded-length clause gets
    // exercised rather than holding vacuously.
    for (uint64_t i = 0; i < 20; ++i) {
        Rng rng(derive_seed(607, i));
        UndirectedMultigraph u;
        Vertex next = 0;
        int blocks = 3 + int(rand_below(rng, 6));
        for (int b = 0; b < blocks; ++b) {
            if (rand_bit(rng)) {
                Vertex a = next++, c = next++;
                int parallel = 2 * (1 + int(rand_below(rng, 3)));
                for (int j = 0; j < parallel; ++j) u.edges.push_back({a, c});
            } else {
                Vertex base = next;
                next = Vertex(next + 4);
                for (Vertex x = 0; x < 4; ++x)
                    for (Vertex y = Vertex(x + 1); y < 4; ++y)
                        u.edges.push_back({Vertex(base + x), Vertex(base + y)});
            }
        }
        u.n = next;
        check_one(u, rng(), "block graph " + std::to_string(i));
    }

    bool coverage_ok = expansion_free >= 20;
    std::ostringstream det;
    if (ok && coverage_ok) {
        det << graphs << " multigraphs: exact edge-disjoint cover, leftover <= 2n, contracted "
            << "lengths in bound; " << expansion_free
            << " expansion-free decompositions within 2*ceil(log2 n) (worst length " << worst_len
            << ")";
    } else if (!coverage_ok) {
        det << "only " << expansion_free << " expansion-free decompositions; length clause vacuous";
    } else {
        det << first_fail;
    }
    return {ok && coverage_ok, det.str()};
}

// ---------------------------------------------------------------------------
// 7. Colour-target contract with the gaussian-walk backend (declared
//    saturation fraction 1/2): the residual unsaturated edge mass never
//    exceeds the target, and the oracle call count never exceeds
//    ceil(log2(|S| L / m_t)) + 1.
// ---------------------------------------------------------------------------
struct OwnedFamily {
    DirectedMultigraph g;
    std::vector<double> resistance;
    std::vector<OrientedCycle> cycles;  // owns what the family points into
    CycleMatrixFamily family;
};

OwnedFamily harvested_family(uint64_t seed, Vertex n, int cycle_count, int weight_exp) {
    OwnedFamily out;
    RandomEulerianParams p;
    p.n = n;
    p.cycle_count = cycle_count;
    p.max_weight_exp = weight_exp;
    out.g = generate_random_eulerian(p, seed);
    out.resistance = effective_resistances(out.g);
    NaiveShortCycleDecomposer dec;
    uint64_t next_id = 0;
    CycleHarvest h = harvest_cycles(out.g, out.resistance, 1e9, dec, seed, next_id);
    out.cycles = std::move(h.cycles);
    auto q = std::make_shared<const DenseMatrix>(pseudo_inverse_sqrt(laplacian_undirected(out.g)));
    std::vector<CycleMatrixFamily::Member> members;
    members.reserve(out.cycles.size());
    for (const OrientedCycle& c : out.cycles) members.push_back({&c, 1.0});
    out.family = CycleMatrixFamily(out.g.vertex_count(), q, std::move(members));
    return out;
}

OwnedFamily fabricated_family(std::size_t count, int len) {
    OwnedFamily out;
    out.cycles.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        OrientedCycle c;
        c.id = i;
        c.weight = 1;
        for (int j = 0; j < len; ++j) {
            c.original.push_back({Vertex(j), Vertex((j + 1) % len)});
            c.reversed.push_back(0);
            c.edge_ids.push_back(EdgeId(j));
            c.resistance.push_back(0.1);
        }
        out.cycles.push_back(std::move(c));
    }
    auto q = std::make_shared<const DenseMatrix>(DenseMatrix::Identity(len, len));
    std::vector<CycleMatrixFamily::Member> members;
    members.reserve(count);
    for (const OrientedCycle& c : out.cycles) members.push_back({&c, 1.0});
    out.family = CycleMatrixFamily(Vertex(len), q, std::move(members));
    return out;
}

Outcome check_colour_target_contract() {
    ColourConfig cfg;  // default walk knobs
    auto oracle = make_oracle(OracleKind::GaussianWalk, cfg);
    const double cprime = oracle->fraction_guarantee();
    bool ok = true;
    std::size_t cases = 0, worst_calls = 0;
    double worst_slack = 1e9;
    std::string first_fail;

    auto run_case = [&](const CycleMatrixFamily& fam, double m_t, uint64_t seed, double ybase) {
        if (fam.empty() || !(m_t > 0)) return;
        Rng rng(seed);
        std::vector<double> y(fam.size(), ybase);
        ColourTargetResult r = colour_target(fam, y, m_t, *oracle, rng);
        ++cases;
        const double sl = double(fam.size()) * double(fam.max_cycle_length());
        double raw = std::log(sl / m_t) / std::log(1.0 / (1.0 - cprime));
        std::size_t bound = raw <= 0 ? 1 : std::size_t(std::ceil(raw)) + 1;
        worst_calls = std::max(worst_calls, r.oracle_calls);
        worst_slack = std::min(worst_slack, m_t - r.leftover_edge_mass);
        if (r.leftover_edge_mass > m_t) {
            ok = false;
            if (first_fail.empty()) first_fail = "residual mass above target";
        }
        if (r.oracle_calls > bound) {
            ok = false;
            if (first_fail.empty())
                first_fail = "call count " + std::to_string(r.oracle_calls) + " above bound " +
                             std::to_string(bound);
        }
    };

    for (uint64_t i = 0; i < 12; ++i) {
        OwnedFamily h = harvested_family(derive_seed(707, i), Vertex(16 + 8 * (i % 3)),
                                         20 + 20 * int(i % 3), int(i % 3));
        double mass = h.family.edge_mass();
        int j = 0;
        for (double m_t : {mass / 2, mass / 4, mass / 8, mass / 16, 1.5})
            run_case(h.family, m_t, derive_seed(708, i * 10 + uint64_t(j++)), 0.0);
    }
    int fi = 0;
    for (auto [count, len] : {std::pair<std::size_t, int>{50, 4}, {200, 12}, {120, 3}, {64, 8}}) {
        OwnedFamily f = fabricated_family(count, len);
        double sl = double(count) * double(len);
        run_case(f.family, sl / 2, derive_seed(709, uint64_t(fi * 10 + 0)), 0.0);
        run_case(f.family, sl / 8, derive_seed(709, uint64_t(fi * 10 + 1)), 0.0);
        run_case(f.family, 1.5, derive_seed(709, uint64_t(fi * 10 + 2)), 0.0);
        run_case(f.family, sl / 8, derive_seed(709, uint64_t(fi * 10 + 3)), 0.25);
        ++fi;
    }

    std::ostringstream det;
    if (ok) {
        det << cases << " colour-target calls: residual mass <= target always (min slack "
            << std::fixed << worst_slack << "), calls within ceil(log2(SL/m_t))+1 (worst "
            << worst_calls << " calls)";
    } else {
        det << first_fail;
    }
    return {ok && cases >= 60, det.str()};
}

// ---------------------------------------------------------------------------
// 8. Method comparison (informational): run both methods over a small
//    eps grid, emit the comparison as JSON, and prove the emission parses
//    back with the expected fields. Numbers are reported, not thresholded.
// ---------------------------------------------------------------------------
Outcome check_method_report() {
    NaiveShortCycleDecomposer dec;
    nlohmann::json rows = nlohmann::json::array();
    for (double eps : {0.5, 0.25}) {
        RandomEulerianParams p;
        p.n = 48;
        p.cycle_count = 57 * 48;
        p.max_weight_exp = 2;
        uint64_t seed = derive_seed(808, eps == 0.5 ? 0 : 1);
        DirectedMultigraph g = generate_random_eulerian(p, seed);

        auto t0 = std::chrono::steady_clock::now();
        ToggleConfig tcfg;
        tcfg.epsilon = eps;
        tcfg.seed = seed + 1;
        SparsifyResult tr = sparsify(g, tcfg, dec);
        rows.push_back({{"method", "toggle"},
                        {"n", int(p.n)},
                        {"epsilon", eps},
                        {"edges_in", g.edge_count()},
                        {"edges_out", tr.graph.edge_count()},
                        {"measured_error", error_metric(g, tr.graph)},
                        {"rounds", tr.rounds.size()},
                        {"wall_ms", seconds_since(t0) * 1000.0}});

        t0 = std::chrono::steady_clock::now();
        ColourConfig ccfg;
        ccfg.epsilon = eps;
        ccfg.seed = seed + 2;
        ccfg.oracle = OracleKind::RandomSign;
        PcsResult cr = pcs(g, ccfg, dec);
        rows.push_back({{"method", "colour"},
                        {"n", int(p.n)},
                        {"epsilon", eps},
                        {"edges_in", g.edge_count()},
                        {"edges_out", cr.graph.edges.size()},
                        {"measured_error", error_metric(to_real(g), cr.graph)},
                        {"rounds", cr.rounds.size()},
                        {"wall_ms", seconds_since(t0) * 1000.0}});
    }

    std::string emitted = rows.dump();
    std::printf("method comparison report: %s\n", emitted.c_str());
    bool ok = true;
    try {
        nlohmann::json parsed = nlohmann::json::parse(emitted);
        ok = parsed.is_array() && parsed.size() == 4;
        for (const auto& row : parsed) {
            for (const char* k : {"method", "n", "epsilon", "edges_in", "edges_out",
                                  "measured_error", "rounds", "wall_ms"})
                ok = ok && row.contains(k);
            ok = ok && row["method"].is_string() && row["measured_error"].is_number() &&
                 row["edges_out"].is_number();
        }
    } catch (const nlohmann::json::exception&) {
        ok = false;
    }
    std::ostringstream det;
    det << "4 rows (toggle/colour x eps .5/.25 at n=48) emitted and reparsed";
    return {ok, det.str()};
}

}  // namespace

int main() {
    struct Row {
        const char* name;
        Outcome (*fn)();
    };
    const Row rows[] = {
        {"structural invariants", check_structural_invariants},
        {"error certification", check_error_certification},
        {"edge reduction rates", check_edge_reduction},
        {"per-cycle spectral bounds", check_spectral_bounds},
        {"single-round outcome enumeration", check_outcome_enumeration},
        {"decomposition certificates", check_decomposition_certificates},
        {"colour-target contract", check_colour_target_contract},
        {"method comparison report", check_method_report},
    };
    int failed = 0;
    int idx = 0;
    for (const Row& row : rows) {
        ++idx;
        auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = row.fn();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        if (!out.pass) ++failed;
        std::printf("criterion %d %-4s %6.1fs  %s: %s\n", idx, out.pass ? "pass" : "FAIL",
                    seconds_since(t0), row.name, out.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("acceptance: %d/8 passed\n", 8 - failed);
    return failed == 0 ? 0 : 1;
}
