#include "gpfq/lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "gpfq/errors.hpp"
#include "gpfq/incidence.hpp"
#include "gpfq/supersat.hpp"

namespace gpfq {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

std::uint64_t mix64(std::uint64_t z) {
    z += kGolden;
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

unsigned thread_count() {
    const char* env = std::getenv("GPFQ_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || v < 1) return 1;
    return static_cast<unsigned>(v > 256 ? 256 : v);
}

// Hyperplane tables shared by every solver in this translation unit: the
// incidence graph plus, per parallel class, the ids of its q hyperplanes.
struct Tables {
    Space space;
    IncidenceGraph G;
    std::vector<std::vector<std::uint32_t>> class_hyps;
    unsigned cap;  // points a general position set may place on one hyperplane

    explicit Tables(const Space& s)
        : space(s), G(build_incidence(s)), cap(s.d()) {
        class_hyps.resize(G.n_classes);
        for (std::uint32_t h = 0; h < G.n_hyperplanes; ++h)
            class_hyps[G.parallel_class[h]].push_back(h);
    }
};

// Greedy filling pass over `points` (permuted by `order_seed`; 0 keeps the
// given order): a point joins when every hyperplane through it still holds
// fewer than `cap` chosen points.  The result is a maximal general position
// subset.
std::vector<std::uint32_t> greedy_gp(const Tables& T,
                                     const std::vector<std::uint32_t>& points,
                                     std::uint64_t order_seed) {
    std::vector<std::uint32_t> order = points;
    if (order_seed != 0) {
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[mix64(order_seed ^ (i * 0x7c15)) % i]);
    }
    std::vector<std::uint16_t> cnt(T.G.n_hyperplanes, 0);
    std::vector<std::uint32_t> chosen;
    for (std::uint32_t x : order) {
        bool ok = true;
        for (std::uint32_t h : T.G.point_hyps[x])
            if (cnt[h] >= T.cap) {
                ok = false;
                break;
            }
        if (!ok) continue;
        for (std::uint32_t h : T.G.point_hyps[x]) ++cnt[h];
        chosen.push_back(x);
    }
    return chosen;
}

struct SolveResult {
    unsigned alpha = 0;
    std::vector<std::uint32_t> witness;
};

// Exact solver.  Invariant: every point still in `cand` can be added on its
// own (all its hyperplanes hold at most cap-1 chosen points), because a
// hyperplane that reaches `cap` immediately sweeps its points out of `cand`.
// The prune bounds the achievable gain by the tightest parallel class: the
// class partitions the space, and each of its hyperplanes can absorb at most
// min(cap - chosen-on-it, candidates-on-it) further points.
struct AlphaSolver {
    const Tables& T;
    std::uint64_t budget;
    std::uint64_t nodes = 0;

    std::vector<std::uint64_t> cand;
    std::int64_t cand_count = 0;
    std::vector<std::uint16_t> cnt;
    std::vector<std::int32_t> avail;
    std::vector<std::uint32_t> cur;
    std::vector<std::uint32_t> trail;  // candidates swept by full hyperplanes
    unsigned best = 0;
    std::vector<std::uint32_t> best_set;

    AlphaSolver(const Tables& tables, const PointSet& P, std::uint64_t node_budget)
        : T(tables), budget(node_budget) {
        const std::uint64_t n = T.space.point_count();
        cand.assign((n + 63) / 64, 0);
        cnt.assign(T.G.n_hyperplanes, 0);
        avail.assign(T.G.n_hyperplanes, 0);
        for (std::uint64_t x = 0; x < n; ++x)
            if (P.contains(x)) {
                cand[x >> 6] |= 1ull << (x & 63);
                ++cand_count;
                for (std::uint32_t h : T.G.point_hyps[x]) ++avail[h];
            }
    }

    bool has(std::uint32_t x) const { return (cand[x >> 6] >> (x & 63)) & 1; }

    void drop(std::uint32_t x) {
        cand[x >> 6] &= ~(1ull << (x & 63));
        --cand_count;
        for (std::uint32_t h : T.G.point_hyps[x]) --avail[h];
    }

    void put_back(std::uint32_t x) {
        cand[x >> 6] |= 1ull << (x & 63);
        ++cand_count;
        for (std::uint32_t h : T.G.point_hyps[x]) ++avail[h];
    }

    // Adds candidate x to the chosen set; returns the trail mark to undo.
    std::size_t include(std::uint32_t x) {
        const std::size_t mark = trail.size();
        drop(x);
        cur.push_back(x);
        for (std::uint32_t h : T.G.point_hyps[x])
            if (++cnt[h] == T.cap)
                for (std::uint32_t y : T.G.hyp_points[h])
                    if (has(y)) {
                        drop(y);
                        trail.push_back(y);
                    }
        return mark;
    }

    void undo_include(std::uint32_t x, std::size_t mark) {
        for (std::uint32_t h : T.G.point_hyps[x]) --cnt[h];
        while (trail.size() > mark) {
            put_back(trail.back());
            trail.pop_back();
        }
        cur.pop_back();
        put_back(x);
    }

    unsigned class_bound() const {
        unsigned bound = ~0u;
        for (const auto& hyps : T.class_hyps) {
            unsigned sum = 0;
            for (std::uint32_t h : hyps) {
                const unsigned room = T.cap - cnt[h];
                const unsigned here = static_cast<unsigned>(avail[h]);
                sum += room < here ? room : here;
            }
            if (sum < bound) bound = sum;
        }
        return bound;
    }

    // Pencil bound: the hyperplanes through a chosen point x cover every
    // other point of the space exactly lambda = (q^{d-1}-1)/(q-1) times
    // (for d = 2 each further point sits on exactly one line through x), so
    // the extension size is at most the summed seat room divided by lambda.
    unsigned pencil_bound() const {
        const std::uint64_t q = T.space.q();
        std::uint64_t lambda = 0, pw = 1;
        for (unsigned i = 0; i + 1 < T.space.d(); ++i) {
            lambda += pw;
            pw *= q;
        }
        unsigned bound = ~0u;
        for (std::uint32_t x : cur) {
            std::uint64_t sum = 0;
            for (std::uint32_t h : T.G.point_hyps[x]) {
                const unsigned room = T.cap - cnt[h];
                const unsigned here = static_cast<unsigned>(avail[h]);
                sum += room < here ? room : here;
            }
            const unsigned pb = static_cast<unsigned>(sum / lambda);
            if (pb < bound) bound = pb;
        }
        return bound;
    }

    // Most-constrained candidate: maximal total chosen count over its
    // hyperplanes, ties to the lowest point index.
    std::uint32_t pick() const {
        std::uint32_t arg = 0;
        unsigned best_pressure = 0;
        bool found = false;
        for (std::size_t w = 0; w < cand.size(); ++w) {
            std::uint64_t bits = cand[w];
            while (bits != 0) {
                const std::uint32_t x =
                    static_cast<std::uint32_t>(w * 64 +
                                               std::countr_zero(bits));
                bits &= bits - 1;
                unsigned pressure = 0;
                for (std::uint32_t h : T.G.point_hyps[x]) pressure += cnt[h];
                if (!found || pressure > best_pressure) {
                    found = true;
                    best_pressure = pressure;
                    arg = x;
                }
            }
        }
        return arg;
    }

    void dfs() {
        if (++nodes > budget)
            throw BudgetExceeded("alpha_exact: node budget exhausted");
        if (cur.size() + static_cast<std::size_t>(cand_count) <= best) return;
        if (cand_count == 0) {
            best = static_cast<unsigned>(cur.size());
            best_set = cur;
            return;
        }
        unsigned gain = class_bound();
        if (!cur.empty()) {
            const unsigned pb = pencil_bound();
            if (pb < gain) gain = pb;
        }
        if (cur.size() + gain <= best) return;
        // A hyperplane with one seat left admits at most one of its
        // candidates: branch on which one (or none), which cuts far deeper
        // than a binary split.  Prefer the one with the fewest candidates.
        std::uint32_t tight = ~0u;
        std::int32_t tight_avail = 0;
        for (std::uint32_t h = 0; h < T.G.n_hyperplanes; ++h)
            if (cnt[h] + 1u == T.cap && avail[h] >= 1 &&
                (tight == ~0u || avail[h] < tight_avail)) {
                tight = h;
                tight_avail = avail[h];
            }
        if (tight != ~0u) {
            std::vector<std::uint32_t> seats;
            seats.reserve(static_cast<std::size_t>(tight_avail));
            for (std::uint32_t y : T.G.hyp_points[tight])
                if (has(y)) seats.push_back(y);
            for (std::uint32_t y : seats) {
                const std::size_t mark = include(y);
                dfs();
                undo_include(y, mark);
                drop(y);  // later branches leave y out
            }
            dfs();  // no candidate of the tight hyperplane is chosen
            for (std::uint32_t y : seats) put_back(y);
            return;
        }
        const std::uint32_t x = pick();
        const std::size_t mark = include(x);
        dfs();
        undo_include(x, mark);
        drop(x);
        dfs();
        put_back(x);
    }
};

SolveResult alpha_solve(const Tables& T, const PointSet& P,
                        std::uint64_t node_budget, unsigned initial_best,
                        std::vector<std::uint32_t> initial_witness) {
    AlphaSolver solver(T, P, node_budget);
    solver.best = initial_best;
    solver.best_set = std::move(initial_witness);
    // Affine maps act transitively on affinely independent (d+1)-tuples and
    // preserve general position, so when P is the whole space some maximum
    // set contains the frame {0, e_1, ..., e_d}; rooting there loses nothing.
    if (P.size() == T.space.point_count()) {
        const unsigned d = T.space.d();
        std::vector<felem> coords(d, 0);
        std::vector<std::uint32_t> frame{
            static_cast<std::uint32_t>(T.space.index_of(coords))};
        for (unsigned i = 0; i < d; ++i) {
            std::fill(coords.begin(), coords.end(), felem{0});
            coords[i] = 1;
            frame.push_back(
                static_cast<std::uint32_t>(T.space.index_of(coords)));
        }
        for (std::uint32_t x : frame) solver.include(x);
    }
    solver.dfs();
    return {solver.best, std::move(solver.best_set)};
}

// Survivors of the greedy hitting pass: repeatedly delete the point lying on
// the most surviving coplanar tuples (ties to the lowest index) until none
// survives.  The survivors meet every hyperplane in at most d points.
std::vector<std::uint32_t> deletion_survivors(const Space& s, const PointSet& P) {
    const UniformHypergraph H = build_coplanar_hypergraph(s, P);
    const std::size_t nv = H.vertices.size();
    const std::size_t ne = H.edge_count();
    std::vector<std::uint32_t> adj_start(nv + 1, 0);
    for (std::uint32_t e : H.edge_data) ++adj_start[e + 1];
    for (std::size_t v = 0; v < nv; ++v) adj_start[v + 1] += adj_start[v];
    std::vector<std::uint32_t> adj(H.edge_data.size());
    {
        std::vector<std::uint32_t> cursor(adj_start.begin(), adj_start.end() - 1);
        for (std::size_t e = 0; e < ne; ++e)
            for (std::uint32_t v : H.edge(e))
                adj[cursor[v]++] = static_cast<std::uint32_t>(e);
    }
    std::vector<std::uint32_t> deg(nv, 0);
    for (std::size_t v = 0; v < nv; ++v) deg[v] = adj_start[v + 1] - adj_start[v];
    std::vector<char> edge_alive(ne, 1), deleted(nv, 0);
    std::size_t alive = ne;
    while (alive > 0) {
        std::size_t arg = 0;
        std::uint32_t top = 0;
        for (std::size_t v = 0; v < nv; ++v)
            if (!deleted[v] && deg[v] > top) {
                top = deg[v];
                arg = v;
            }
        deleted[arg] = 1;
        for (std::uint32_t i = adj_start[arg]; i < adj_start[arg + 1]; ++i) {
            const std::uint32_t e = adj[i];
            if (!edge_alive[e]) continue;
            edge_alive[e] = 0;
            --alive;
            for (std::uint32_t v : H.edge(e)) --deg[v];
        }
    }
    std::vector<std::uint32_t> survivors;
    survivors.reserve(nv);
    for (std::size_t v = 0; v < nv; ++v)
        if (!deleted[v]) survivors.push_back(H.vertices[v]);
    return survivors;
}

unsigned cover_upper(const Tables& T, const PointSet& P) {
    unsigned bound = ~0u;
    for (const auto& hyps : T.class_hyps) {
        unsigned sum = 0;
        for (std::uint32_t h : hyps) {
            unsigned on = 0;
            for (std::uint32_t x : T.G.hyp_points[h])
                if (P.contains(x)) ++on;
            sum += on < T.cap ? on : T.cap;
        }
        if (sum < bound) bound = sum;
    }
    return bound;
}

PointSet sample_into(const Space& s, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("sample_random_set: p must lie in [0, 1]");
    PointSet out(s);
    for (std::uint64_t i = 0; i < s.point_count(); ++i)
        if (point_variate(seed, i) < p) out.add(i);
    return out;
}

void append_double(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

// One trial at one grid probability.  `witness` carries the best general
// position subset seen at smaller p in the same trial; nested samples keep it
// valid, so the certified lower bound never drops as p grows.
TrialRecord run_trial_point(const Tables& T, double p, std::uint64_t trial_seed,
                            std::uint64_t node_budget,
                            std::vector<std::uint32_t>& witness) {
    const auto t0 = std::chrono::steady_clock::now();
    const Space& s = T.space;
    TrialRecord rec;
    rec.q = s.q();
    rec.d = s.d();
    rec.p = p;
    rec.seed = trial_seed;

    const PointSet S = sample_into(s, p, trial_seed);
    rec.sample_size = S.size();
    rec.coplanar_count = count_coplanar(s, S);

    const std::vector<std::uint64_t> idx64 = S.indices();
    std::vector<std::uint32_t> points(idx64.begin(), idx64.end());

    std::vector<std::uint32_t> bestw = witness;
    for (unsigned j = 0; j < 5; ++j) {
        const std::uint64_t order_seed = j == 0 ? 0 : mix64(trial_seed + j);
        std::vector<std::uint32_t> g = greedy_gp(T, points, order_seed);
        if (g.size() > bestw.size()) bestw = std::move(g);
    }
    try {
        std::vector<std::uint32_t> survivors = deletion_survivors(s, S);
        if (survivors.size() > bestw.size()) bestw = std::move(survivors);
    } catch (const BudgetExceeded&) {
        // The greedy witnesses stand on their own.
    }

    try {
        SolveResult r = alpha_solve(T, S, node_budget,
                                    static_cast<unsigned>(bestw.size()), bestw);
        rec.alpha_lower = r.alpha;
        rec.alpha_upper = r.alpha;
        rec.alpha_exact_flag = true;
        witness = std::move(r.witness);
    } catch (const BudgetExceeded&) {
        rec.alpha_lower = bestw.size();
        rec.alpha_upper = cover_upper(T, S);
        if (rec.alpha_upper > S.size()) rec.alpha_upper = S.size();
        rec.alpha_exact_flag = false;
        witness = std::move(bestw);
    }
    rec.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return rec;
}

}  // namespace

double point_variate(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t z = mix64(seed + kGolden * (index + 1));
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

PointSet sample_random_set(std::uint64_t q, unsigned d, double p,
                           std::uint64_t seed) {
    const Space s(q, d);
    return sample_into(s, p, seed);
}

unsigned alpha_exact(const Space& s, const PointSet& P,
                     std::uint64_t node_budget) {
    require_same_ambient(s, P);
    const Tables T(s);
    const std::vector<std::uint64_t> idx64 = P.indices();
    std::vector<std::uint32_t> points(idx64.begin(), idx64.end());
    std::vector<std::uint32_t> bestw;
    for (unsigned j = 0; j < 5; ++j) {
        std::vector<std::uint32_t> g =
            greedy_gp(T, points, j == 0 ? 0 : mix64(0xa11ce + j));
        if (g.size() > bestw.size()) bestw = std::move(g);
    }
    return alpha_solve(T, P, node_budget, static_cast<unsigned>(bestw.size()),
                       std::move(bestw))
        .alpha;
}

PointSet greedy_maximal_gp(const Space& s, const PointSet& P,
                           std::uint64_t order_seed) {
    require_same_ambient(s, P);
    const Tables T(s);
    const std::vector<std::uint64_t> idx64 = P.indices();
    std::vector<std::uint32_t> points(idx64.begin(), idx64.end());
    PointSet out(s);
    for (std::uint32_t x : greedy_gp(T, points, order_seed)) out.add(x);
    return out;
}

unsigned alpha_deletion_lower(const Space& s, const PointSet& P) {
    require_same_ambient(s, P);
    return static_cast<unsigned>(deletion_survivors(s, P).size());
}

unsigned alpha_cover_upper(const Space& s, const PointSet& P) {
    require_same_ambient(s, P);
    const Tables T(s);
    return cover_upper(T, P);
}

std::vector<TrialRecord> phase_sweep(std::uint64_t q, unsigned d,
                                     const std::vector<double>& p_grid,
                                     unsigned trials, std::uint64_t seed,
                                     std::uint64_t node_budget) {
    if (trials == 0)
        throw std::invalid_argument("phase_sweep: trials must be at least 1");
    for (double p : p_grid)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument(
                "phase_sweep: grid probabilities must lie in [0, 1]");

    const Space s(q, d);
    const Tables T(s);

    // Ascending-p processing order (output keeps the caller's grid order).
    std::vector<std::size_t> order(p_grid.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return p_grid[a] < p_grid[b];
                     });

    std::vector<TrialRecord> records(p_grid.size() * trials);
    std::vector<std::exception_ptr> failures(trials);
    std::atomic<unsigned> next{0};

    auto run_trial = [&](unsigned t) {
        const std::uint64_t trial_seed = seed ^ t;
        std::vector<std::uint32_t> witness;
        for (std::size_t gi : order)
            records[gi * trials + t] = run_trial_point(
                T, p_grid[gi], trial_seed, node_budget, witness);
    };
    auto worker = [&]() {
        for (;;) {
            const unsigned t = next.fetch_add(1);
            if (t >= trials) return;
            try {
                run_trial(t);
            } catch (...) {
                failures[t] = std::current_exception();
            }
        }
    };

    const unsigned workers =
        std::min<unsigned>(thread_count(), trials);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    for (const std::exception_ptr& e : failures)
        if (e) std::rethrow_exception(e);
    return records;
}

std::vector<SweepPoint> summarize_sweep(const std::vector<TrialRecord>& records) {
    std::vector<const TrialRecord*> sorted;
    sorted.reserve(records.size());
    for (const TrialRecord& r : records) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const TrialRecord* a, const TrialRecord* b) {
                         return a->p < b->p;
                     });
    std::vector<SweepPoint> out;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j]->p == sorted[i]->p) ++j;
        std::vector<std::uint64_t> alphas, sizes;
        double exact = 0.0;
        for (std::size_t k = i; k < j; ++k) {
            alphas.push_back(sorted[k]->alpha_lower);
            sizes.push_back(sorted[k]->sample_size);
            exact += sorted[k]->alpha_exact_flag ? 1.0 : 0.0;
        }
        std::sort(alphas.begin(), alphas.end());
        std::sort(sizes.begin(), sizes.end());
        SweepPoint pt;
        pt.p = sorted[i]->p;
        pt.median_alpha = static_cast<double>(alphas[alphas.size() / 2]);
        pt.median_size = static_cast<double>(sizes[sizes.size() / 2]);
        pt.exact_fraction = exact / static_cast<double>(j - i);
        out.push_back(pt);
        i = j;
    }
    return out;
}

std::vector<SlopeSegment> sweep_slope_report(
    const std::vector<TrialRecord>& records) {
    const std::vector<SweepPoint> pts = summarize_sweep(records);
    std::vector<SlopeSegment> out;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const SweepPoint& a = pts[i];
        const SweepPoint& b = pts[i + 1];
        if (a.p <= 0.0 || b.p <= a.p) continue;
        if (a.median_alpha <= 0.0 || b.median_alpha <= 0.0) continue;
        SlopeSegment seg;
        seg.p_lo = a.p;
        seg.p_hi = b.p;
        seg.slope = (std::log(b.median_alpha) - std::log(a.median_alpha)) /
                    (std::log(b.p) - std::log(a.p));
        out.push_back(seg);
    }
    return out;
}

long double first_moment_bound(const ContainerFamily& family, double p,
                               std::uint64_t m) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("first_moment_bound: p must lie in [0, 1]");
    long double total = 0.0L;
    for (const PointSet& C : family.containers) {
        const std::uint64_t n = C.size();
        if (m > n) continue;
        long double term = 1.0L;
        for (std::uint64_t i = 1; i <= m; ++i)
            term *= static_cast<long double>(n - m + i) * p /
                    static_cast<long double>(i);
        total += term;
    }
    return total;
}

std::vector<CountRecord> count_gp_sets(std::uint64_t q, unsigned d,
                                       bool by_size,
                                       std::uint64_t node_budget) {
    const Space s(q, d);
    const Tables T(s);
    const std::uint64_t n = s.point_count();
    std::vector<std::uint16_t> cnt(T.G.n_hyperplanes, 0);
    std::vector<std::uint64_t> per_size(n + 1, 0);
    std::uint64_t nodes = 0, total = 0;
    unsigned cur = 0;

    auto dfs = [&](auto&& self, std::uint64_t start) -> void {
        if (++nodes > node_budget)
            throw BudgetExceeded("count_gp_sets: census outgrew the node budget");
        ++total;
        ++per_size[cur];
        for (std::uint64_t x = start; x < n; ++x) {
            bool ok = true;
            for (std::uint32_t h : T.G.point_hyps[x])
                if (cnt[h] >= T.cap) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            for (std::uint32_t h : T.G.point_hyps[x]) ++cnt[h];
            ++cur;
            self(self, x + 1);
            --cur;
            for (std::uint32_t h : T.G.point_hyps[x]) --cnt[h];
        }
    };
    dfs(dfs, 0);

    std::vector<CountRecord> out;
    if (by_size) {
        std::uint64_t top = n;
        while (top > 0 && per_size[top] == 0) --top;
        for (std::uint64_t m = 0; m <= top; ++m)
            out.push_back({q, d, m, per_size[m]});
    } else {
        out.push_back({q, d, kTotalRow, total});
    }
    return out;
}

std::string trials_to_csv(const std::vector<TrialRecord>& records,
                          bool include_runtime) {
    std::string out = "# schema: gpfq.trial.v1\n";
    out += "q,d,p,seed,sample_size,alpha_lower,alpha_upper,alpha_exact,"
           "coplanar_count";
    if (include_runtime) out += ",runtime_ms";
    out += '\n';
    for (const TrialRecord& r : records) {
        out += std::to_string(r.q);
        out += ',';
        out += std::to_string(r.d);
        out += ',';
        append_double(out, r.p);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += std::to_string(r.sample_size);
        out += ',';
        out += std::to_string(r.alpha_lower);
        out += ',';
        out += std::to_string(r.alpha_upper);
        out += ',';
        out += r.alpha_exact_flag ? '1' : '0';
        out += ',';
        out += std::to_string(r.coplanar_count);
        if (include_runtime) {
            out += ',';
            append_double(out, r.runtime_ms);
        }
        out += '\n';
    }
    return out;
}

std::string counts_to_csv(const std::vector<CountRecord>& records) {
    std::string out = "# schema: gpfq.count.v1\nq,d,m,count\n";
    for (const CountRecord& r : records) {
        out += std::to_string(r.q);
        out += ',';
        out += std::to_string(r.d);
        out += ',';
        out += r.m == kTotalRow ? std::string("total") : std::to_string(r.m);
        out += ',';
        out += std::to_string(r.count);
        out += '\n';
    }
    return out;
}

std::string slopes_to_csv(const std::vector<SlopeSegment>& segments) {
    std::string out = "# schema: gpfq.slope.v1\np_lo,p_hi,slope\n";
    for (const SlopeSegment& s : segments) {
        append_double(out, s.p_lo);
        out += ',';
        append_double(out, s.p_hi);
        out += ',';
        append_double(out, s.slope);
        out += '\n';
    }
    return out;
}

std::string sweep_points_to_csv(const std::vector<SweepPoint>& points) {
    std::string out =
        "# schema: gpfq.sweep.v1\np,median_alpha,median_size,exact_fraction\n";
    for (const SweepPoint& pt : points) {
        append_double(out, pt.p);
        out += ',';
        append_double(out, pt.median_alpha);
        out += ',';
        append_double(out, pt.median_size);
        out += ',';
        append_double(out, pt.exact_fraction);
        out += '\n';
    }
    return out;
}

}  // namespace gpfq
