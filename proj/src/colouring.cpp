#include "eulersparse/colouring.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "eulersparse/rng.hpp"

namespace eulersparse {

OracleKind oracle_kind_from_name(const std::string& name) {
    if (name == "random-sign") return OracleKind::RandomSign;
    if (name == "gaussian-walk") return OracleKind::GaussianWalk;
    if (name == "adversarial") return OracleKind::Adversarial;
    throw InvalidParamsError("unknown oracle backend: " + name);
}

std::string oracle_name(OracleKind kind) {
    switch (kind) {
        case OracleKind::RandomSign: return "random-sign";
        case OracleKind::GaussianWalk: return "gaussian-walk";
        case OracleKind::Adversarial: return "adversarial";
    }
    return "?";
}

std::size_t ColouredCycleSet::edge_mass() const {
    std::size_t total = 0;
    for (const OrientedCycle& c : cycles) total += c.length();
    return total;
}

void append_cycle_weight(RealDigraph& out, const OrientedCycle& c, double colour) {
    if (!(colour >= -1.0 && colour <= 1.0))
        throw ColourOutOfRangeError("cycle colour " + std::to_string(colour) +
                                    " outside [-1, 1]");
    const double w = static_cast<double>(c.weight);
    for (std::size_t i = 0; i < c.original.size(); ++i) {
        double factor = c.reversed[i] ? (1.0 - colour) : (1.0 + colour);
        if (factor == 0.0) continue;
        out.edges.push_back({c.original[i].tail, c.original[i].head, factor * w});
    }
}

RealDigraph cycle_weight(Vertex n, const std::vector<OrientedCycle>& cycles,
                         const std::vector<double>& colours) {
    if (cycles.size() != colours.size())
        throw InvalidParamsError("cycle and colour counts differ");
    RealDigraph out;
    out.n = n;
    for (std::size_t i = 0; i < cycles.size(); ++i)
        append_cycle_weight(out, cycles[i], colours[i]);
    return out;
}

std::vector<Edge> cycle_weight_signed(const OrientedCycle& c, int sign) {
    if (sign != 1 && sign != -1) throw ColourOutOfRangeError("sign must be +-1");
    std::vector<Edge> out;
    for (std::size_t i = 0; i < c.original.size(); ++i) {
        bool opposing = c.reversed[i] != 0;
        if ((sign > 0) == opposing) continue;
        out.push_back({c.original[i].tail, c.original[i].head, 2 * c.weight});
    }
    return out;
}

RealDigraph composite_graph(const SparsifierState& s) {
    RealDigraph out = to_real(s.g);
    for (std::size_t i = 0; i < s.bar.cycles.size(); ++i)
        append_cycle_weight(out, s.bar.cycles[i], s.bar.colours[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Matrix family

CycleMatrixFamily::CycleMatrixFamily(Vertex n, std::shared_ptr<const DenseMatrix> q,
                                     std::vector<Member> members)
    : n_(n), q_(std::move(q)), members_(std::move(members)) {
    triplets_.reserve(members_.size());
    for (const Member& m : members_) triplets_.push_back(laplacian_change_triplets(*m.cycle));
}

int CycleMatrixFamily::max_cycle_length() const {
    int l = 0;
    for (const Member& m : members_) l = std::max(l, static_cast<int>(m.cycle->length()));
    return l;
}

double CycleMatrixFamily::edge_mass() const {
    double total = 0;
    for (const Member& m : members_) total += static_cast<double>(m.cycle->length());
    return total;
}

CycleMatrixFamily CycleMatrixFamily::restrict_to(const std::vector<std::size_t>& indices) const {
    std::vector<Member> sub;
    sub.reserve(indices.size());
    for (std::size_t i : indices) sub.push_back(members_[i]);
    return CycleMatrixFamily(n_, q_, std::move(sub));
}

DenseMatrix CycleMatrixFamily::signed_core_sum(const std::vector<double>& coef) const {
    if (coef.size() != members_.size())
        throw DimensionMismatchError("coefficient count does not match the family");
    DenseMatrix d = DenseMatrix::Zero(n_, n_);
    for (std::size_t i = 0; i < members_.size(); ++i) {
        double s = coef[i] * members_[i].scale;
        if (s == 0.0) continue;
        for (const auto& [r, c, v] : triplets_[i]) d(r, c) += s * v;
    }
    return (*q_) * (d * (*q_));
}

DenseMatrix CycleMatrixFamily::core(std::size_t i) const {
    DenseMatrix d = DenseMatrix::Zero(n_, n_);
    for (const auto& [r, c, v] : triplets_[i]) d(r, c) += members_[i].scale * v;
    return (*q_) * (d * (*q_));
}

DenseMatrix CycleMatrixFamily::lifted(std::size_t i) const { return hermitian_lift(core(i)); }

double CycleMatrixFamily::bilinear(std::size_t i, const DenseVector& a,
                                   const DenseVector& b) const {
    double acc = 0;
    for (const auto& [r, c, v] : triplets_[i]) acc += a[r] * v * b[c];
    return members_[i].scale * acc;
}

double CycleMatrixFamily::sigma_sq_bound() const {
    double rho = 0;
    for (const Member& m : members_) {
        const OrientedCycle& c = *m.cycle;
        for (std::size_t j = 0; j < c.length(); ++j) {
            double r = c.resistance.empty() ? 0.0 : c.resistance[j];
            rho = std::max(rho, m.scale * static_cast<double>(c.weight) * r);
        }
    }
    double l = static_cast<double>(max_cycle_length());
    return 8.0 * l * l * rho;
}

PartialColourContract build_contract(CycleMatrixFamily family, double fraction_guarantee,
                                     bool materialize) {
    PartialColourContract c;
    c.sigma_sq = family.sigma_sq_bound();
    c.fraction_guarantee = fraction_guarantee;
    if (materialize) {
        double f = 0;
        for (std::size_t i = 0; i < family.size(); ++i) f += 2.0 * family.core(i).squaredNorm();
        c.frob_sq_sum = f;
    }
    c.family = std::move(family);
    return c;
}

// ---------------------------------------------------------------------------
// Oracles

namespace {

class RandomSignOracle final : public PartialColourOracle {
public:
    std::string name() const override { return "random-sign"; }
    double fraction_guarantee() const override { return 1.0; }
    std::vector<double> colour(const PartialColourContract& contract,
                               const std::vector<double>& y, Rng& rng) const override {
        (void)contract;
        std::vector<double> x(y.size());
        for (double& v : x) v = rand_bit(rng) ? 1.0 : -1.0;
        return x;
    }
};

class GaussianWalkOracle final : public PartialColourOracle {
public:
    explicit GaussianWalkOracle(const ColourConfig& cfg)
        : step_(cfg.walk_step),
          top_k_(cfg.walk_top_k),
          refresh_(std::max(cfg.walk_refresh, 1)),
          max_steps_(cfg.walk_max_steps) {}

    std::string name() const override { return "gaussian-walk"; }
    double fraction_guarantee() const override { return 0.5; }

    std::vector<double> colour(const PartialColourContract& contract,
                               const std::vector<double>& y, Rng& rng) const override {
        const CycleMatrixFamily& fam = contract.family;
        const std::size_t m = fam.size();
        std::vector<double> x = y;
        if (m == 0) return x;
        const auto n = static_cast<Eigen::Index>(fam.vertex_count());
        std::vector<char> frozen(m, 0);
        std::size_t frozen_count = 0;
        const auto need =
            static_cast<std::size_t>(std::ceil(fraction_guarantee() * static_cast<double>(m)));

        const auto k = std::min<Eigen::Index>(std::max(top_k_, 1), n);
        DenseMatrix v_basis;  // right singular basis, warmed across refreshes
        std::vector<DenseVector> constraints;

        auto orthonormalize = [](DenseMatrix& b) {
            Eigen::HouseholderQR<DenseMatrix> qr(b);
            b = qr.householderQ() * DenseMatrix::Identity(b.rows(), b.cols());
        };

        auto refresh = [&]() {
            std::vector<double> coef(m);
            for (std::size_t i = 0; i < m; ++i) coef[i] = x[i] - y[i];
            DenseMatrix sum = fam.signed_core_sum(coef);
            if (v_basis.size() == 0) {
                v_basis = DenseMatrix(n, k);
                for (Eigen::Index c = 0; c < k; ++c)
                    for (Eigen::Index r = 0; r < n; ++r) v_basis(r, c) = rand_normal(rng);
            }
            orthonormalize(v_basis);
            DenseMatrix u_basis;
            for (int sweep = 0; sweep < 2; ++sweep) {
                u_basis = sum * v_basis;
                orthonormalize(u_basis);
                v_basis = sum.transpose() * u_basis;
                orthonormalize(v_basis);
            }
            constraints.clear();
            for (Eigen::Index j = 0; j < k; ++j) {
                DenseVector a = fam.q() * u_basis.col(j);
                DenseVector b = fam.q() * v_basis.col(j);
                DenseVector g(static_cast<Eigen::Index>(m));
                for (std::size_t i = 0; i < m; ++i)
                    g[static_cast<Eigen::Index>(i)] = frozen[i] ? 0.0 : fam.bilinear(i, a, b);
                for (const DenseVector& prev : constraints) g -= prev.dot(g) * prev;
                double norm = g.norm();
                if (norm > 1e-12) constraints.push_back(g / norm);
            }
        };

        std::size_t steps = 0;
        while (frozen_count < need && steps < max_steps_) {
            if (steps % static_cast<std::size_t>(refresh_) == 0) refresh();
            DenseVector delta(static_cast<Eigen::Index>(m));
            for (std::size_t i = 0; i < m; ++i)
                delta[static_cast<Eigen::Index>(i)] = frozen[i] ? 0.0 : step_ * rand_normal(rng);
            for (const DenseVector& g : constraints) delta -= g.dot(delta) * g;
            for (std::size_t i = 0; i < m; ++i) {
                if (frozen[i]) continue;
                x[i] += delta[static_cast<Eigen::Index>(i)];
                if (x[i] >= 1.0) {
                    x[i] = 1.0;
                    frozen[i] = 1;
                    ++frozen_count;
                } else if (x[i] <= -1.0) {
                    x[i] = -1.0;
                    frozen[i] = 1;
                    ++frozen_count;
                }
            }
            ++steps;
        }
        if (frozen_count < need) {
            // The walk ran out of budget; push the most advanced coordinates
            // to the nearest wall so the declared fraction still holds.
            std::vector<std::size_t> order;
            for (std::size_t i = 0; i < m; ++i)
                if (!frozen[i]) order.push_back(i);
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                double da = std::abs(x[a]), db = std::abs(x[b]);
                if (da != db) return da > db;
                return a < b;
            });
            for (std::size_t i : order) {
                if (frozen_count >= need) break;
                x[i] = x[i] >= 0.0 ? 1.0 : -1.0;
                frozen[i] = 1;
                ++frozen_count;
            }
        }
        return x;
    }

private:
    double step_;
    int top_k_;
    int refresh_;
    std::size_t max_steps_;
};

// Contract-abiding worst case: freezes exactly the declared fraction, picks
// the heaviest cycles, keeps their bigger side, and drags every other colour
// back towards zero so no free progress is made.
class AdversarialOracle final : public PartialColourOracle {
public:
    std::string name() const override { return "adversarial"; }
    double fraction_guarantee() const override { return 0.5; }
    std::vector<double> colour(const PartialColourContract& contract,
                               const std::vector<double>& y, Rng& rng) const override {
        (void)rng;
        const CycleMatrixFamily& fam = contract.family;
        const std::size_t m = fam.size();
        std::vector<double> x(m);
        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            std::size_t la = fam.member(a).cycle->length(), lb = fam.member(b).cycle->length();
            if (la != lb) return la > lb;
            return a < b;
        });
        const auto need = static_cast<std::size_t>(
            std::ceil(fraction_guarantee() * static_cast<double>(m)));
        for (std::size_t rank = 0; rank < m; ++rank) {
            std::size_t i = order[rank];
            const OrientedCycle& c = *fam.member(i).cycle;
            if (rank < need) {
                std::size_t opposing = c.opposing_edge_ids().size();
                std::size_t agreeing = c.length() - opposing;
                x[i] = agreeing >= opposing ? 1.0 : -1.0;
            } else {
                x[i] = 0.5 * y[i];
            }
        }
        return x;
    }
};

}  // namespace

std::unique_ptr<PartialColourOracle> make_oracle(OracleKind kind, const ColourConfig& cfg) {
    switch (kind) {
        case OracleKind::RandomSign: return std::make_unique<RandomSignOracle>();
        case OracleKind::GaussianWalk: return std::make_unique<GaussianWalkOracle>(cfg);
        case OracleKind::Adversarial: return std::make_unique<AdversarialOracle>();
    }
    throw InvalidParamsError("unknown oracle kind");
}

// ---------------------------------------------------------------------------
// Colour target

ColourTargetResult colour_target(const CycleMatrixFamily& family, std::vector<double> y,
                                 double m_t, const PartialColourOracle& oracle, Rng& rng,
                                 bool verify) {
    if (y.size() != family.size())
        throw DimensionMismatchError("initial colours do not match the family size");
    for (double v : y)
        if (!(v > -1.0 && v < 1.0))
            throw ColourOutOfRangeError("colour target needs strictly interior start colours");

    ColourTargetResult res;
    res.colours = std::move(y);
    res.saturated.assign(family.size(), 0);
    const double max_len = std::max(1, family.max_cycle_length());

    std::vector<std::size_t> active(family.size());
    std::iota(active.begin(), active.end(), 0);

    while (static_cast<double>(active.size()) * max_len > m_t) {
        CycleMatrixFamily sub = family.restrict_to(active);
        std::vector<double> suby;
        suby.reserve(active.size());
        for (std::size_t i : active) suby.push_back(res.colours[i]);
        PartialColourContract contract = build_contract(sub, oracle.fraction_guarantee());
        std::vector<double> x = oracle.colour(contract, suby, rng);
        if (x.size() != active.size())
            throw OracleStalledError("oracle returned the wrong number of colours");
        std::size_t newly = 0;
        for (std::size_t j = 0; j < active.size(); ++j) {
            if (!(x[j] >= -1.0 && x[j] <= 1.0))
                throw ColourOutOfRangeError("oracle colour outside [-1, 1]");
            if (x[j] == 1.0 || x[j] == -1.0) ++newly;
        }
        const auto required = static_cast<std::size_t>(std::ceil(
            oracle.fraction_guarantee() * static_cast<double>(active.size())));
        if (newly < required)
            throw OracleStalledError("oracle saturated " + std::to_string(newly) + " of " +
                                     std::to_string(active.size()) + ", declared fraction needs " +
                                     std::to_string(required));
        if (verify) {
            std::vector<double> diff(active.size());
            for (std::size_t j = 0; j < active.size(); ++j) diff[j] = x[j] - suby[j];
            res.measured_norms.push_back(operator_norm(contract.family.signed_core_sum(diff)));
        }
        std::vector<std::size_t> next;
        for (std::size_t j = 0; j < active.size(); ++j) {
            res.colours[active[j]] = x[j];
            if (x[j] == 1.0 || x[j] == -1.0)
                res.saturated[active[j]] = 1;
            else
                next.push_back(active[j]);
        }
        active = std::move(next);
        ++res.oracle_calls;
    }
    for (std::size_t i = 0; i < family.size(); ++i)
        if (!res.saturated[i])
            res.leftover_edge_mass += static_cast<double>(family.member(i).cycle->length());
    return res;
}

// ---------------------------------------------------------------------------
// Rounds

namespace {

std::shared_ptr<const DenseMatrix> composite_metric(const SparsifierState& state) {
    RealDigraph comp = composite_graph(state);
    return std::make_shared<const DenseMatrix>(pseudo_inverse_sqrt(laplacian_undirected(comp)));
}

void emit_signed_cycle(DirectedMultigraph& h, std::vector<double>& res, const OrientedCycle& c,
                       int sign) {
    for (std::size_t j = 0; j < c.length(); ++j) {
        bool opposing = c.reversed[j] != 0;
        if ((sign > 0) == opposing) continue;
        h.add_edge(c.original[j].tail, c.original[j].head, 2 * c.weight);
        res.push_back(c.resistance.empty() ? 0.0 : c.resistance[j]);
    }
}

double leverage_ratio_4n(const SparsifierState& state) {
    const double mp = static_cast<double>(state.m_prime());
    if (mp == 0) return 0.0;
    const double base = 4.0 * static_cast<double>(state.g.vertex_count()) / mp;
    double worst = 0.0;
    for (const OrientedCycle& c : state.bar.cycles)
        for (std::size_t j = 0; j < c.length(); ++j) {
            double r = c.resistance.empty() ? 0.0 : c.resistance[j];
            worst = std::max(worst, static_cast<double>(c.weight) * r / base);
        }
    return worst;
}

}  // namespace

SparsifierState pcg(SparsifierState state, const ColourConfig& cfg,
                    const ShortCycleDecomposer& decomposer, const PartialColourOracle& oracle,
                    Rng& rng, ColourRoundReport& report) {
    const Vertex n = state.g.vertex_count();
    const std::size_t m = state.g.edge_count();
    const std::size_t m_prime = state.m_prime();
    report = ColourRoundReport{};
    report.branch = "pcg";
    report.m_before = m_prime;
    if (4 * m < m_prime)
        throw BranchViolationError("pcg needs 4m >= m' (m=" + std::to_string(m) +
                                   ", m'=" + std::to_string(m_prime) + ")");
    if (m == 0) {
        report.m_after = m_prime;
        return state;
    }

    auto q = composite_metric(state);
    const double threshold =
        cfg.heavy_threshold_factor * static_cast<double>(n) / static_cast<double>(m_prime);
    CycleHarvest harvest = harvest_cycles(state.g, state.resistance, threshold, decomposer,
                                          rng(), state.next_cycle_id);
    report.heavy_set_aside = harvest.heavy.size();
    report.leftover_kept = harvest.leftover.size();
    report.certificate = harvest.certificate;

    std::vector<CycleMatrixFamily::Member> members;
    members.reserve(harvest.cycles.size());
    for (const OrientedCycle& c : harvest.cycles) members.push_back({&c, 1.0});
    CycleMatrixFamily family(n, q, std::move(members));

    ColourTargetResult ct =
        colour_target(family, std::vector<double>(family.size(), 0.0),
                      static_cast<double>(m) / 8.0, oracle, rng, cfg.verify_rounds);
    report.ct_calls = ct.oracle_calls;
    report.ct_norms = ct.measured_norms;

    // Keep the lighter side: count the edges both sign choices would emit
    // over the saturated cycles and negate everything if we are on the
    // heavier one.
    std::size_t emit_as_is = 0, emit_negated = 0;
    for (std::size_t i = 0; i < harvest.cycles.size(); ++i) {
        if (!ct.saturated[i]) continue;
        const OrientedCycle& c = harvest.cycles[i];
        std::size_t opposing = c.opposing_edge_ids().size();
        std::size_t agreeing = c.length() - opposing;
        if (ct.colours[i] > 0) {
            emit_as_is += agreeing;
            emit_negated += opposing;
        } else {
            emit_as_is += opposing;
            emit_negated += agreeing;
        }
    }
    if (emit_as_is > emit_negated) {
        for (double& v : ct.colours) v = -v;
        report.flip_applied = true;
    }

    DirectedMultigraph h(n);
    std::vector<double> res;
    auto carry = [&](EdgeId id) {
        const Edge& e = state.g.edge(id);
        h.add_edge(e.tail, e.head, e.weight);
        res.push_back(state.resistance[id]);
    };
    for (EdgeId id : harvest.heavy) carry(id);
    for (EdgeId id : harvest.leftover) carry(id);
    std::size_t coloured = 0;
    for (std::size_t i = 0; i < harvest.cycles.size(); ++i) {
        if (!ct.saturated[i]) continue;
        emit_signed_cycle(h, res, harvest.cycles[i], ct.colours[i] > 0 ? 1 : -1);
        ++coloured;
    }

    ColouredCycleSet bar;
    for (std::size_t i = 0; i < harvest.cycles.size(); ++i) {
        if (ct.saturated[i]) continue;
        bar.cycles.push_back(harvest.cycles[i]);
        bar.colours.push_back(ct.colours[i]);
    }
    for (std::size_t i = 0; i < state.bar.cycles.size(); ++i) {
        bar.cycles.push_back(std::move(state.bar.cycles[i]));
        bar.colours.push_back(state.bar.colours[i]);
    }

    state.g = std::move(h);
    state.resistance = std::move(res);
    state.bar = std::move(bar);
    report.m_after = state.m_prime();
    report.integral_edges = state.g.edge_count();
    report.carried_cycles = state.bar.cycles.size();
    report.coloured_fraction =
        harvest.cycles.empty()
            ? 1.0
            : static_cast<double>(coloured) / static_cast<double>(harvest.cycles.size());
    report.max_cycle_leverage_ratio = leverage_ratio_4n(state);
    return state;
}

SparsifierState pcc(SparsifierState state, const ColourConfig& cfg,
                    const PartialColourOracle& oracle, Rng& rng, ColourRoundReport& report) {
    const Vertex n = state.g.vertex_count();
    const std::size_t m = state.g.edge_count();
    const std::size_t m_prime = state.m_prime();
    report = ColourRoundReport{};
    report.branch = "pcc";
    report.m_before = m_prime;
    if (4 * m >= m_prime)
        throw BranchViolationError("pcc needs 4m < m' (m=" + std::to_string(m) +
                                   ", m'=" + std::to_string(m_prime) + ")");

    auto q = composite_metric(state);
    // Rescaled cycles: what is left of each colour's headroom.
    std::vector<CycleMatrixFamily::Member> members;
    members.reserve(state.bar.cycles.size());
    for (std::size_t i = 0; i < state.bar.cycles.size(); ++i)
        members.push_back({&state.bar.cycles[i], 1.0 - std::abs(state.bar.colours[i])});
    CycleMatrixFamily family(n, q, std::move(members));

    ColourTargetResult ct =
        colour_target(family, std::vector<double>(family.size(), 0.0),
                      static_cast<double>(m_prime) / 4.0, oracle, rng, cfg.verify_rounds);
    report.ct_calls = ct.oracle_calls;
    report.ct_norms = ct.measured_norms;

    // A saturated call colour s pushes cycle i to the wall iff it agrees with
    // the sign of the carried colour (0 agrees with both).
    auto lands_on_wall = [&](double carried, int s) {
        return (s > 0 && carried >= 0.0) || (s < 0 && carried <= 0.0);
    };

    double mass_plus = 0, mass_minus = 0;
    for (std::size_t i = 0; i < state.bar.cycles.size(); ++i) {
        if (!ct.saturated[i]) continue;
        int s = ct.colours[i] > 0 ? 1 : -1;
        double len = static_cast<double>(state.bar.cycles[i].length());
        if (lands_on_wall(state.bar.colours[i], s)) mass_plus += len;
        if (lands_on_wall(state.bar.colours[i], -s)) mass_minus += len;
    }
    if (mass_minus > mass_plus) {
        for (double& v : ct.colours) v = -v;
        report.flip_applied = true;
    }

    DirectedMultigraph h = state.g;
    std::vector<double> res = state.resistance;
    ColouredCycleSet bar;
    std::size_t coloured = 0;
    for (std::size_t i = 0; i < state.bar.cycles.size(); ++i) {
        double carried = state.bar.colours[i];
        double s = ct.colours[i];
        bool saturated = ct.saturated[i] != 0;
        if (saturated && lands_on_wall(carried, s > 0 ? 1 : -1)) {
            emit_signed_cycle(h, res, state.bar.cycles[i], s > 0 ? 1 : -1);
            ++coloured;
            continue;
        }
        double z = carried + (1.0 - std::abs(carried)) * s;
        // Strictly interior in exact arithmetic; guard against rounding
        // landing exactly on a wall.
        if (z >= 1.0) z = std::nextafter(1.0, 0.0);
        if (z <= -1.0) z = std::nextafter(-1.0, 0.0);
        bar.cycles.push_back(std::move(state.bar.cycles[i]));
        bar.colours.push_back(z);
    }

    state.g = std::move(h);
    state.resistance = std::move(res);
    state.bar = std::move(bar);
    report.m_after = state.m_prime();
    report.integral_edges = state.g.edge_count();
    report.carried_cycles = state.bar.cycles.size();
    report.coloured_fraction =
        family.size() == 0
            ? 1.0
            : static_cast<double>(coloured) / static_cast<double>(family.size());
    report.max_cycle_leverage_ratio = leverage_ratio_4n(state);
    report.sparsity_ok =
        64 * report.m_after <= 63 * report.m_before || 4 * report.integral_edges >= report.m_after;
    return state;
}

double colour_stop_threshold(const ColourConfig& cfg, Vertex n) {
    const double nn = static_cast<double>(n);
    const double logn = std::log2(std::max(nn, 2.0));
    const double loglog = std::log2(std::max(logn, 1.0 + 1e-9));
    const double eps = cfg.epsilon;
    return cfg.stop_constant * (nn * logn * logn * loglog * loglog / (eps * eps) +
                                nn * std::pow(logn, 8.0 / 3.0) / std::pow(eps, 4.0 / 3.0));
}

PcsResult pcs(const DirectedMultigraph& g, const ColourConfig& cfg,
              const ShortCycleDecomposer& decomposer) {
    if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 0.5))
        throw InvalidParamsError("epsilon must lie in (0, 1/2]");
    if (!is_eulerian(g)) throw NotEulerianError("the colouring sparsifier needs an Eulerian input");

    PcsResult out;
    SparsifierState state;
    state.g = binary_decompose(g);
    if (state.g.edge_count()) state.resistance = effective_resistances(state.g);
    std::unique_ptr<PartialColourOracle> oracle = make_oracle(cfg.oracle, cfg);
    Rng rng(derive_seed(cfg.seed, 0xc01015ULL));

    const double threshold = colour_stop_threshold(cfg, state.g.vertex_count());
    const RealDigraph original = to_real(g);
    std::size_t no_progress = 0;
    out.stop_reason = "edge count below stop threshold";
    while (static_cast<double>(state.m_prime()) >= threshold) {
        if (out.rounds.size() >= cfg.max_iterations) {
            out.stop_reason = "iteration cap reached";
            break;
        }
        std::size_t before = state.m_prime();
        ColourRoundReport report;
        if (4 * state.g.edge_count() >= before)
            state = pcg(std::move(state), cfg, decomposer, *oracle, rng, report);
        else
            state = pcc(std::move(state), cfg, *oracle, rng, report);
        if (cfg.verify_rounds)
            report.measured_error = error_metric(original, composite_graph(state));
        out.rounds.push_back(std::move(report));
        no_progress = state.m_prime() < before ? 0 : no_progress + 1;
        if (no_progress >= 32) {
            out.stop_reason = "no progress across 32 rounds";
            break;
        }
    }
    out.graph = composite_graph(state);
    out.final_state = std::move(state);
    return out;
}

StateCheck check_state(const SparsifierState& s) {
    StateCheck c;
    for (EdgeId id = 0; id < s.g.edge_count(); ++id)
        if ((s.g.edge(id).weight & (s.g.edge(id).weight - 1)) != 0) {
            c.weights_power_of_two = false;
            c.failures.push_back("edge " + std::to_string(id) + " weight is not a power of two");
            break;
        }
    for (double v : s.bar.colours)
        if (!(v > -1.0 && v < 1.0)) {
            c.colours_interior = false;
            c.failures.push_back("carried colour " + std::to_string(v) + " not interior");
            break;
        }
    if (!is_eulerian(composite_graph(s))) {
        c.composite_eulerian = false;
        c.failures.push_back("composite graph is not Eulerian");
    }
    const double mp = static_cast<double>(s.m_prime());
    if (mp > 0) {
        const double base16 =
            16.0 * static_cast<double>(s.g.vertex_count()) / mp;
        for (const OrientedCycle& cyc : s.bar.cycles)
            for (std::size_t j = 0; j < cyc.length(); ++j) {
                double r = cyc.resistance.empty() ? 0.0 : cyc.resistance[j];
                double lev = static_cast<double>(cyc.weight) * r;
                if (lev > base16 * (1.0 + 1e-9)) {
                    c.cycle_leverage_ok = false;
                    c.failures.push_back("cycle " + std::to_string(cyc.id) +
                                         " edge leverage " + std::to_string(lev) +
                                         " above 16n/m' = " + std::to_string(base16));
                }
            }
        c.max_leverage_ratio_4n = leverage_ratio_4n(s);
    }
    return c;
}

}  // namespace eulersparse
