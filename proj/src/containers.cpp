#include "gpfq/containers.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>

#include "gpfq/errors.hpp"

namespace gpfq {

namespace {

using u64 = std::uint64_t;
using Bitmap = std::vector<u64>;

constexpr std::size_t kMaxVertices = 16'384;   // recursion + bitmap budget
constexpr std::size_t kMaxEdges = 2'500'000;
constexpr std::size_t kMemoWordLimit = 8;      // memoize only small states
constexpr std::size_t kMemoEntryLimit = 2'000'000;
constexpr std::size_t kAbsorbLimit = 20'000;   // subset-absorption cutoff
constexpr std::size_t kDiagnosticEdgeLimit = 300'000;  // delta_tau cost cap

bool bit(const Bitmap& m, std::size_t i) { return (m[i >> 6] >> (i & 63)) & 1; }
void set_bit(Bitmap& m, std::size_t i) { m[i >> 6] |= u64{1} << (i & 63); }
void clear_bit(Bitmap& m, std::size_t i) { m[i >> 6] &= ~(u64{1} << (i & 63)); }

u64 popcount(const Bitmap& m) {
    u64 n = 0;
    for (u64 w : m) n += std::uint64_t(std::popcount(w));
    return n;
}

unsigned thread_count() {
    if (const char* env = std::getenv("GPFQ_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1 && n <= 256) return static_cast<unsigned>(n);
    }
    return 1;
}

struct BitmapHash {
    std::size_t operator()(const Bitmap& m) const {
        u64 h = 0xcbf29ce484222325ULL;
        for (u64 w : m) {
            h ^= w;
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

// The deterministic fingerprint tree over one hypergraph.  Mutable state is
// shared down the recursion; every branch records enough to undo itself.
struct Engine {
    const UniformHypergraph& H;
    std::size_t nv, ne;
    long double eps_edges;            // leaf once alive <= eps_edges
    u64 node_budget;

    std::vector<std::uint32_t> edge_start;  // CSR of edges through a position
    std::vector<std::uint32_t> edge_id;

    Bitmap in, prot, edge_alive;
    std::vector<std::uint32_t> deg;
    u64 alive = 0;
    u64 nodes = 0;

    std::unordered_set<Bitmap, BitmapHash> memo;
    bool use_memo;

    std::vector<Bitmap> leaves;
    std::vector<u64> fingerprints;
    u64 max_leaf_alive = 0;

    explicit Engine(const UniformHypergraph& graph, double epsilon, u64 budget)
        : H(graph),
          nv(graph.vertices.size()),
          ne(graph.edge_count()),
          eps_edges(static_cast<long double>(epsilon) * static_cast<long double>(ne)),
          node_budget(budget) {
        const std::size_t words = (nv + 63) / 64;
        in.assign(words, 0);
        for (std::size_t i = 0; i < nv; ++i) set_bit(in, i);
        prot.assign(words, 0);
        edge_alive.assign((ne + 63) / 64, ~u64{0});
        std::vector<std::uint32_t> count(nv, 0);
        for (std::size_t e = 0; e < ne; ++e)
            for (std::uint32_t p : H.edge(e)) ++count[p];
        edge_start.assign(nv + 1, 0);
        for (std::size_t i = 0; i < nv; ++i) edge_start[i + 1] = edge_start[i] + count[i];
        edge_id.resize(edge_start[nv]);
        std::vector<std::uint32_t> cursor(edge_start.begin(), edge_start.end() - 1);
        for (std::size_t e = 0; e < ne; ++e)
            for (std::uint32_t p : H.edge(e)) edge_id[cursor[p]++] = static_cast<std::uint32_t>(e);
        deg = std::move(count);
        alive = ne;
        use_memo = (in.size() <= kMemoWordLimit);
    }

    struct Undo {
        std::vector<std::uint32_t> removed;
        std::vector<std::uint32_t> killed;
        bool protected_one = false;
        std::uint32_t protected_v = 0;
    };

    void remove_vertex(std::uint32_t v, Undo& u) {
        clear_bit(in, v);
        u.removed.push_back(v);
        for (std::uint32_t k = edge_start[v]; k < edge_start[v + 1]; ++k) {
            const std::uint32_t e = edge_id[k];
            if (!bit(edge_alive, e)) continue;
            clear_bit(edge_alive, e);
            u.killed.push_back(e);
            --alive;
            for (std::uint32_t p : H.edge(e)) --deg[p];
        }
    }

    void undo(const Undo& u) {
        for (auto it = u.killed.rbegin(); it != u.killed.rend(); ++it) {
            set_bit(edge_alive, *it);
            ++alive;
            for (std::uint32_t p : H.edge(*it)) ++deg[p];
        }
        for (auto it = u.removed.rbegin(); it != u.removed.rend(); ++it)
            set_bit(in, *it);
        if (u.protected_one) clear_bit(prot, u.protected_v);
    }

    void visit() {
        if (++nodes > node_budget)
            throw RoundLimit("container_step: branch tree exceeds the node budget");
        if (static_cast<long double>(alive) <= eps_edges) {
            // `alive` is exactly |H[R u P]|: an edge survives iff none of its
            // vertices was removed, i.e. iff it lies inside `in`.
            leaves.push_back(in);
            fingerprints.push_back(popcount(prot));
            if (alive > max_leaf_alive) max_leaf_alive = alive;
            return;
        }
        if (use_memo && memo.size() < kMemoEntryLimit) {
            Bitmap key = in;
            key.insert(key.end(), prot.begin(), prot.end());
            if (!memo.insert(std::move(key)).second) return;
        }

        // Max-degree vertex of the induced subgraph among removable ones.
        std::uint32_t v = 0;
        std::uint32_t best = 0;
        bool have = false;
        for (std::size_t p = 0; p < nv; ++p) {
            if (!bit(in, p) || bit(prot, p)) continue;
            if (deg[p] > best) {
                best = deg[p];
                v = static_cast<std::uint32_t>(p);
                have = true;
            }
        }
        // Some alive edge exists (alive > eps >= 0) and no alive edge lies
        // fully inside prot (that branch is pruned), so a removable vertex
        // with positive degree is always present.
        if (!have)
            throw std::logic_error("container engine: no branch vertex");

        // Branch 1: independent sets avoiding v.
        {
            Undo u;
            remove_vertex(v, u);
            visit();
            undo(u);
        }

        // Branch 2: independent sets containing v.  Protect it, prune if an
        // edge closes inside the fingerprint, trim newly dominated vertices.
        bool prune = false;
        std::vector<std::uint32_t> trims;
        for (std::uint32_t k = edge_start[v]; k < edge_start[v + 1] && !prune; ++k) {
            const std::uint32_t e = edge_id[k];
            if (!bit(edge_alive, e)) continue;
            std::uint32_t open = 0;
            std::uint32_t last = 0;
            for (std::uint32_t p : H.edge(e)) {
                if (p == v || bit(prot, p)) continue;
                ++open;
                last = p;
            }
            if (open == 0) prune = true;
            else if (open == 1) trims.push_back(last);
        }
        if (!prune) {
            std::sort(trims.begin(), trims.end());
            trims.erase(std::unique(trims.begin(), trims.end()), trims.end());
            Undo u;
            u.protected_one = true;
            u.protected_v = v;
            set_bit(prot, v);
            for (std::uint32_t t : trims)
                if (bit(in, t)) remove_vertex(t, u);
            visit();
            undo(u);
        }
    }
};

struct StepOutcome {
    std::vector<Bitmap> containers;   // canonical: sorted, unique, absorbed
    u64 nodes = 0;
    u64 min_fingerprint = 0;
    u64 max_fingerprint = 0;
    bool any_fingerprint = false;
    double max_epsilon_measured = 0.0;  // max leaf |H[C]| / |H|
};

void absorb_subsets(std::vector<Bitmap>& sets) {
    const std::size_t words = sets.empty() ? 0 : sets[0].size();
    if (sets.size() > kAbsorbLimit ||
        sets.size() * sets.size() * words > 2'000'000'000ULL)
        return;
    std::vector<Bitmap> kept;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        bool absorbed = false;
        for (std::size_t j = 0; j < sets.size() && !absorbed; ++j) {
            if (i == j) continue;
            bool subset = true;
            for (std::size_t w = 0; w < words && subset; ++w)
                subset = (sets[i][w] & ~sets[j][w]) == 0;
            // Strict containment only; duplicates were removed beforehand.
            absorbed = subset && sets[i] != sets[j];
        }
        if (!absorbed) kept.push_back(sets[i]);
    }
    sets.swap(kept);
}

StepOutcome run_step(const UniformHypergraph& H, double epsilon, u64 node_budget) {
    Engine engine(H, epsilon, node_budget);
    engine.visit();

    StepOutcome out;
    out.nodes = engine.nodes;
    if (!engine.fingerprints.empty()) {
        const auto [lo, hi] = std::minmax_element(engine.fingerprints.begin(),
                                                  engine.fingerprints.end());
        out.min_fingerprint = *lo;
        out.max_fingerprint = *hi;
        out.any_fingerprint = true;
    }

    out.max_epsilon_measured = static_cast<double>(engine.max_leaf_alive) /
                               static_cast<double>(H.edge_count());

    std::vector<Bitmap> family = std::move(engine.leaves);
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());
    absorb_subsets(family);
    out.containers = std::move(family);
    return out;
}

PointSet to_point_set(const Space& s, const UniformHypergraph& H, const Bitmap& m) {
    PointSet P(s);
    for (std::size_t p = 0; p < H.vertices.size(); ++p)
        if (bit(m, p)) P.add(H.vertices[p]);
    return P;
}

void validate(const ContainerParams& params) {
    if (!(params.epsilon > 0.0 && params.epsilon < 0.5))
        throw std::invalid_argument("container params: epsilon must lie in (0, 1/2)");
    if (params.tau < 0)
        throw std::invalid_argument("container params: tau must be nonnegative");
    if (!(params.tau_scale > 0))
        throw std::invalid_argument("container params: tau_scale must be positive");
}

void check_engine_budget(const UniformHypergraph& H) {
    if (H.vertices.empty())
        throw EmptyHypergraph("container_step: hypergraph has no vertices");
    if (H.vertices.size() > kMaxVertices || H.edge_count() > kMaxEdges)
        throw BudgetExceeded("container_step: hypergraph exceeds engine budget");
}

// Scheme tau rule for diagnostics; NaN when the rule's hypothesis fails.
double diagnostic_tau(const ContainerParams& params, std::uint64_t q, unsigned d,
                      double k) {
    if (params.tau > 0) return params.tau * params.tau_scale;
    try {
        switch (params.strategy) {
            case SupersatStrategy::BalancedTriples:
                return params.tau_scale / (k * std::sqrt(static_cast<double>(q)));
            case SupersatStrategy::Coplanar:
                return params.tau_scale * container_tau_coplanar(q, d, k);
            case SupersatStrategy::Critical:
                return params.tau_scale * container_tau_critical(q, d, k);
        }
    } catch (const PreconditionFailed&) {
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double diagnostic_delta(const UniformHypergraph& H, double tau) {
    if (H.edge_count() == 0 || H.edge_count() > kDiagnosticEdgeLimit || !(tau > 0) ||
        std::isnan(tau))
        return std::numeric_limits<double>::quiet_NaN();
    return delta_tau(H, tau);
}

}  // namespace

ContainerFamily container_step(const Space& s, const UniformHypergraph& H,
                               const ContainerParams& params) {
    validate(params);
    check_engine_budget(H);

    ContainerFamily fam;
    fam.q = s.q();
    fam.d = s.d();
    fam.rounds = 1;

    RoundRecord rec;
    rec.round = 1;
    if (H.edge_count() == 0) {
        PointSet all(s);
        for (std::uint32_t v : H.vertices) all.add(v);
        fam.containers.push_back(all);
        rec.container_count = 1;
        rec.max_container_size = H.vertices.size();
        fam.log.push_back(rec);
        return fam;
    }

    StepOutcome out = run_step(H, params.epsilon, params.node_budget);
    for (const Bitmap& m : out.containers)
        fam.containers.push_back(to_point_set(s, H, m));

    rec.container_count = fam.containers.size();
    for (const PointSet& C : fam.containers)
        rec.max_container_size = std::max(rec.max_container_size, C.size());
    rec.edges = H.edge_count();
    rec.nodes = out.nodes;
    rec.min_fingerprint = out.min_fingerprint;
    rec.max_fingerprint = out.max_fingerprint;
    rec.max_epsilon_measured = out.max_epsilon_measured;
    const double k = static_cast<double>(H.vertices.size()) / static_cast<double>(s.q());
    rec.tau = diagnostic_tau(params, s.q(), s.d(), k);
    rec.delta_value = diagnostic_delta(H, rec.tau);
    fam.log.push_back(rec);
    return fam;
}

ContainerFamily iterate_containers(std::uint64_t q, unsigned d,
                                   const ContainerParams& params) {
    validate(params);
    Space s(q, d);
    if (params.strategy == SupersatStrategy::BalancedTriples && d != 2)
        throw WrongDimension("iterate_containers: the triple strategy needs d = 2");

    std::uint64_t threshold = params.size_threshold;
    if (threshold == 0) {
        switch (params.strategy) {
            case SupersatStrategy::BalancedTriples: threshold = 9 * q; break;
            case SupersatStrategy::Coplanar: threshold = (2 * (d + 1) + 1) * q; break;
            case SupersatStrategy::Critical: {
                threshold = 4 * d;
                for (unsigned i = 0; i + 1 < d; ++i) threshold *= q;
                break;
            }
        }
    }
    unsigned max_rounds = params.max_rounds;
    if (max_rounds == 0)
        max_rounds = d * (d + 1) * static_cast<unsigned>(std::bit_width(q - 1));

    auto strategy_graph = [&](const PointSet& C) {
        switch (params.strategy) {
            case SupersatStrategy::BalancedTriples: return balanced_triples(s, C);
            case SupersatStrategy::Coplanar: return build_coplanar_hypergraph(s, C);
            case SupersatStrategy::Critical: return build_critical_hypergraph(s, C);
        }
        throw std::logic_error("unreachable");
    };

    ContainerFamily fam;
    fam.q = q;
    fam.d = d;
    fam.containers.push_back(PointSet::full(s));

    // Refinement results for one oversized container, in its round slot.
    struct Slot {
        bool stuck = false;           // no strategy edges, or budget hit
        std::vector<PointSet> out;
        u64 edges = 0;
        u64 nodes = 0;
        u64 min_fingerprint = 0;
        u64 max_fingerprint = 0;
        bool any_fingerprint = false;
        double max_epsilon_measured = 0.0;
        std::size_t hypergraph_vertices = 0;
        double delta = std::numeric_limits<double>::quiet_NaN();
        double tau = std::numeric_limits<double>::quiet_NaN();
    };

    std::vector<PointSet> stuck;  // kept as they are, never refined again
    for (unsigned round = 1; round <= max_rounds; ++round) {
        std::vector<PointSet> fits, oversized;
        for (const PointSet& C : fam.containers)
            (C.size() <= threshold ? fits : oversized).push_back(C);
        if (oversized.empty()) break;

        std::vector<Slot> slots(oversized.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= oversized.size()) return;
                Slot& slot = slots[i];
                UniformHypergraph H = strategy_graph(oversized[i]);
                if (H.edge_count() == 0) {
                    slot.stuck = true;
                    continue;
                }
                slot.edges = H.edge_count();
                slot.hypergraph_vertices = H.vertices.size();
                const double k =
                    static_cast<double>(H.vertices.size()) / static_cast<double>(q);
                slot.tau = diagnostic_tau(params, q, d, k);
                try {
                    StepOutcome out = run_step(H, params.epsilon, params.node_budget);
                    slot.nodes = out.nodes;
                    slot.min_fingerprint = out.min_fingerprint;
                    slot.max_fingerprint = out.max_fingerprint;
                    slot.any_fingerprint = out.any_fingerprint;
                    slot.max_epsilon_measured = out.max_epsilon_measured;
                    for (const Bitmap& m : out.containers)
                        slot.out.push_back(to_point_set(s, H, m));
                    slot.delta = diagnostic_delta(H, slot.tau);
                } catch (const RoundLimit&) {
                    slot.stuck = true;
                    slot.out.clear();
                }
            }
        };
        const unsigned n_threads =
            std::min<std::size_t>(thread_count(), oversized.size());
        if (n_threads <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }

        // Deterministic merge in slot order.
        RoundRecord rec;
        rec.round = round;
        bool progressed = false;
        bool any_fingerprint = false;
        std::uint64_t biggest = 0;
        for (std::size_t i = 0; i < oversized.size(); ++i) {
            Slot& slot = slots[i];
            if (slot.stuck) {
                ++rec.stuck;
                stuck.push_back(oversized[i]);
                continue;
            }
            progressed = true;
            for (PointSet& C : slot.out) fits.push_back(std::move(C));
            rec.edges += slot.edges;
            rec.nodes += slot.nodes;
            rec.max_epsilon_measured =
                std::max(rec.max_epsilon_measured, slot.max_epsilon_measured);
            if (slot.any_fingerprint) {
                if (!any_fingerprint || slot.min_fingerprint < rec.min_fingerprint)
                    rec.min_fingerprint = slot.min_fingerprint;
                rec.max_fingerprint = std::max(rec.max_fingerprint, slot.max_fingerprint);
                any_fingerprint = true;
            }
            if (oversized[i].size() > biggest) {
                biggest = oversized[i].size();
                rec.tau = slot.tau;
                rec.delta_value = slot.delta;
            }
        }

        // Re-canonicalize the family: stuck containers stay as they are.
        for (const PointSet& C : stuck) fits.push_back(C);
        std::sort(fits.begin(), fits.end(), [](const PointSet& a, const PointSet& b) {
            return a.indices() < b.indices();
        });
        fits.erase(std::unique(fits.begin(), fits.end()), fits.end());
        const std::size_t fam_words = (s.point_count() + 63) / 64;
        if (fits.size() <= kAbsorbLimit &&
            fits.size() * fits.size() * fam_words <= 2'000'000'000ULL) {
            std::vector<PointSet> kept;
            for (std::size_t i = 0; i < fits.size(); ++i) {
                bool absorbed = false;
                for (std::size_t j = 0; j < fits.size() && !absorbed; ++j)
                    absorbed = i != j && fits[i] != fits[j] && fits[i].is_subset_of(fits[j]);
                if (!absorbed) kept.push_back(fits[i]);
            }
            fits.swap(kept);
        }
        fam.containers.swap(fits);
        fam.rounds = round;
        rec.container_count = fam.containers.size();
        for (const PointSet& C : fam.containers)
            rec.max_container_size = std::max(rec.max_container_size, C.size());
        fam.log.push_back(rec);
        if (!progressed) break;  // only stuck containers remain oversized
    }

    fam.complete = true;
    for (const PointSet& C : fam.containers)
        if (C.size() > threshold) fam.complete = false;
    return fam;
}

FamilyReport verify_family(const ContainerFamily& family,
                           const std::vector<PointSet>& samples) {
    FamilyReport rep;
    for (const PointSet& C : family.containers) ++rep.size_histogram[C.size()];
    std::size_t covered = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        bool inside = false;
        for (const PointSet& C : family.containers)
            if (samples[i].is_subset_of(C)) {
                inside = true;
                break;
            }
        if (inside)
            ++covered;
        else
            rep.uncovered.push_back(i);
    }
    rep.covered_fraction =
        samples.empty() ? 1.0
                        : static_cast<double>(covered) / static_cast<double>(samples.size());
    return rep;
}

FamilyReport verify_family(const UniformHypergraph& H,
                           const ContainerFamily& family,
                           const std::vector<PointSet>& samples) {
    FamilyReport rep = verify_family(family, samples);
    for (const PointSet& C : family.containers) {
        std::uint64_t induced = 0;
        for (std::size_t e = 0; e < H.edge_count(); ++e) {
            bool all_in = true;
            for (std::uint32_t p : H.edge(e))
                if (!C.contains(H.vertices[p])) {
                    all_in = false;
                    break;
                }
            if (all_in) ++induced;
        }
        rep.max_induced_edges = std::max(rep.max_induced_edges, induced);
    }
    return rep;
}

}  // namespace gpfq
