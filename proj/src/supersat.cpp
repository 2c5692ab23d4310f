#include "gpfq/supersat.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "gpfq/errors.hpp"

namespace gpfq {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kEdgeBudget = 4'000'000;    // max stored hypergraph edges
constexpr u64 kScanBudget = 20'000'000;   // max tuples in a brute rank scan

u64 narrow64(u128 v, const char* what) {
    if (v > static_cast<u128>(UINT64_MAX)) throw std::overflow_error(what);
    return static_cast<u64>(v);
}

// Exact C(n, k) for small k; every prefix product is itself a binomial, so
// the stepwise division is exact.
u128 binom128(u64 n, unsigned k) {
    if (k > n) return 0;
    u128 r = 1;
    for (unsigned i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

u64 binom_u64(u64 n, unsigned k) { return narrow64(binom128(n, k), "binomial overflow"); }

double binom_real(double x, unsigned k) {
    double num = 1.0, den = 1.0;
    for (unsigned i = 0; i < k; ++i) {
        num *= x - static_cast<double>(i);
        den *= static_cast<double>(i + 1);
    }
    return num / den;
}

// Points of `f` lying in P, as sorted indices.
std::vector<u64> members(const Space& s, const Flat& f, const PointSet& P) {
    std::vector<u64> out;
    for (u64 v : flat_points(s, f))
        if (P.contains(v)) out.push_back(v);
    return out;
}

// Position of each member inside the sorted vertex list.
std::vector<std::uint32_t> positions_of(const std::vector<std::uint32_t>& vertices,
                                        const std::vector<u64>& pts) {
    std::vector<std::uint32_t> pos(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto it = std::lower_bound(vertices.begin(), vertices.end(),
                                   static_cast<std::uint32_t>(pts[i]));
        pos[i] = static_cast<std::uint32_t>(it - vertices.begin());
    }
    return pos;
}

std::vector<std::uint32_t> vertex_list(const PointSet& P) {
    const auto idx = P.indices();
    return {idx.begin(), idx.end()};
}

// Run fn on every t-subset of items (ascending positions).
template <typename Fn>
void for_each_subset(const std::vector<std::uint32_t>& items, unsigned t, Fn&& fn) {
    const std::size_t m = items.size();
    if (t == 0 || m < t) return;
    std::vector<std::uint32_t> pick(t);
    std::vector<std::size_t> at(t);
    for (unsigned i = 0; i < t; ++i) at[i] = i;
    while (true) {
        for (unsigned i = 0; i < t; ++i) pick[i] = items[at[i]];
        fn(pick);
        unsigned i = t;
        while (i > 0) {
            --i;
            if (at[i] != m - t + i) break;
            if (i == 0) return;
        }
        ++at[i];
        for (unsigned j = i + 1; j < t; ++j) at[j] = at[j - 1] + 1;
    }
}

void guard_edge_budget(u64 edges) {
    if (edges > kEdgeBudget)
        throw BudgetExceeded("hypergraph would exceed the edge budget");
}

// True when the tuple has a collinear triple (affine rank 2 on 3 points).
bool has_collinear_triple(const Space& s, std::span<const u64> pts) {
    std::array<u64, 3> tri;
    const std::size_t n = pts.size();
    for (std::size_t a = 0; a + 2 < n; ++a)
        for (std::size_t b = a + 1; b + 1 < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c) {
                tri = {pts[a], pts[b], pts[c]};
                if (affine_rank(s, tri) <= 2) return true;
            }
    return false;
}

// Brute C(|P|, d+1) scan; `critical_only` narrows to critical tuples.  Used
// for dimensions without a flat census and as the find_critical fallback.
u64 scan_tuples(const Space& s, const PointSet& P, bool critical_only,
                UniformHypergraph* build) {
    const unsigned t = s.d() + 1;
    const auto idx = P.indices();
    const double total = binom_real(static_cast<double>(idx.size()), t);
    if (total > static_cast<double>(kScanBudget))
        throw BudgetExceeded("tuple rank scan exceeds budget");

    std::vector<std::uint32_t> items(idx.begin(), idx.end());
    std::vector<u64> pts(t);
    u64 count = 0;
    for_each_subset(items, t, [&](const std::vector<std::uint32_t>& pick) {
        for (unsigned i = 0; i < t; ++i) pts[i] = pick[i];
        if (affine_rank(s, pts) > s.d()) return;
        if (critical_only) {
            for (unsigned skip = 0; skip < t; ++skip) {
                std::vector<u64> sub;
                sub.reserve(t - 1);
                for (unsigned i = 0; i < t; ++i)
                    if (i != skip) sub.push_back(pts[i]);
                if (affine_rank(s, sub) != s.d()) return;
            }
        }
        ++count;
        if (build) {
            guard_edge_budget(count);
            build->add_edge(positions_of(build->vertices, pts));
        }
    });
    return count;
}

}  // namespace

std::vector<u64> degree_profile(const UniformHypergraph& H) {
    std::vector<u64> delta(H.r + 1, 0);
    if (H.r == 0 || H.edge_count() == 0) return delta;
    const std::size_t edges = H.edge_count();

    for (unsigned i = 1; i <= H.r; ++i) {
        if (21 * i <= 126 && H.vertices.size() < (1u << 21)) {
            // Pack each i-subset of an edge into 21-bit lanes and sort.
            std::vector<u128> keys;
            keys.reserve(edges * binom_u64(H.r, i));
            std::vector<std::uint32_t> edge_pos(H.r);
            for (std::size_t e = 0; e < edges; ++e) {
                auto ed = H.edge(e);
                edge_pos.assign(ed.begin(), ed.end());
                for_each_subset(edge_pos, i, [&](const std::vector<std::uint32_t>& sub) {
                    u128 key = 0;
                    for (std::uint32_t p : sub) key = (key << 21) | p;
                    keys.push_back(key);
                });
            }
            std::sort(keys.begin(), keys.end());
            u64 best = 0, run = 0;
            for (std::size_t j = 0; j < keys.size(); ++j) {
                run = (j > 0 && keys[j] == keys[j - 1]) ? run + 1 : 1;
                best = std::max(best, run);
            }
            delta[i] = best;
        } else {
            std::map<std::vector<std::uint32_t>, u64> counts;
            std::vector<std::uint32_t> edge_pos(H.r);
            for (std::size_t e = 0; e < edges; ++e) {
                auto ed = H.edge(e);
                edge_pos.assign(ed.begin(), ed.end());
                for_each_subset(edge_pos, i,
                                [&](const std::vector<std::uint32_t>& sub) { ++counts[sub]; });
            }
            for (const auto& [sub, c] : counts) delta[i] = std::max(delta[i], c);
        }
    }
    return delta;
}

UniformHypergraph balanced_triples(const Space& s, const PointSet& P) {
    require_same_ambient(s, P);
    if (s.d() != 2)
        throw WrongDimension("balanced_triples: defined for planar point sets only");
    if (P.size() == 0)
        throw std::invalid_argument("balanced_triples: need a nonempty point set");

    UniformHypergraph H;
    H.r = 3;
    H.vertices = vertex_list(P);
    const u64 size = P.size();
    const u64 q = s.q();
    u64 edges = 0;
    for_each_flat(s, 1, [&](const Flat& line) {
        const auto mem = members(s, line, P);
        const u64 m = mem.size();
        // Typical window |l ∩ P| in [|P|/(2q), 2|P|/q], compared exactly.
        if (m < 3 || 2 * q * m < size || q * m > 2 * size) return true;
        edges += binom_u64(m, 3);
        guard_edge_budget(edges);
        const auto pos = positions_of(H.vertices, mem);
        for_each_subset(pos, 3,
                        [&](const std::vector<std::uint32_t>& sub) { H.add_edge(sub); });
        return true;
    });
    return H;
}

TripleSystemBounds triple_system_bounds(u64 q, u64 size) {
    const double n = static_cast<double>(size);
    const double dq = static_cast<double>(q);
    TripleSystemBounds b;
    b.size_lower =
        (dq * (dq + 1) - 8 * dq * dq * dq / n) * binom_real(n / (2 * dq), 3);
    b.delta1_upper = (dq + 1) * binom_real(2 * n / dq, 2);
    b.delta2_upper = 2 * n / dq;
    return b;
}

std::uint64_t count_coplanar(const Space& s, const PointSet& P) {
    require_same_ambient(s, P);
    const unsigned d = s.d();
    if (d == 2) {
        u128 total = 0;
        for_each_flat(s, 1, [&](const Flat& line) {
            total += binom128(members(s, line, P).size(), 3);
            return true;
        });
        return narrow64(total, "count_coplanar overflow");
    }
    if (d == 3) {
        // Every rank-3 tuple lies in exactly one plane; a collinear 4-tuple
        // lies in q+1 planes, so the line census removes the extra q copies.
        u128 by_planes = 0, by_lines = 0;
        for_each_flat(s, 2, [&](const Flat& plane) {
            by_planes += binom128(members(s, plane, P).size(), 4);
            return true;
        });
        for_each_flat(s, 1, [&](const Flat& line) {
            by_lines += binom128(members(s, line, P).size(), 4);
            return true;
        });
        return narrow64(by_planes - static_cast<u128>(s.q()) * by_lines,
                        "count_coplanar overflow");
    }
    return scan_tuples(s, P, /*critical_only=*/false, nullptr);
}

UniformHypergraph build_coplanar_hypergraph(const Space& s, const PointSet& P) {
    require_same_ambient(s, P);
    UniformHypergraph H;
    H.r = s.d() + 1;
    H.vertices = vertex_list(P);
    const unsigned d = s.d();
    if (d == 2 || d == 3) {
        guard_edge_budget(count_coplanar(s, P));
        if (d == 2) {
            for_each_flat(s, 1, [&](const Flat& line) {
                const auto pos = positions_of(H.vertices, members(s, line, P));
                for_each_subset(pos, 3,
                                [&](const std::vector<std::uint32_t>& sub) { H.add_edge(sub); });
                return true;
            });
        } else {
            std::vector<u64> pts(4);
            for_each_flat(s, 2, [&](const Flat& plane) {
                const auto mem = members(s, plane, P);
                const auto pos = positions_of(H.vertices, mem);
                std::vector<std::uint32_t> at(mem.size());
                for (std::size_t i = 0; i < mem.size(); ++i)
                    at[i] = static_cast<std::uint32_t>(i);
                for_each_subset(at, 4, [&](const std::vector<std::uint32_t>& sub) {
                    for (unsigned i = 0; i < 4; ++i) pts[i] = mem[sub[i]];
                    if (affine_rank(s, pts) != 3) return;  // collinear: line pass
                    std::vector<std::uint32_t> ep(4);
                    for (unsigned i = 0; i < 4; ++i) ep[i] = pos[sub[i]];
                    H.add_edge(ep);
                });
                return true;
            });
            for_each_flat(s, 1, [&](const Flat& line) {
                const auto pos = positions_of(H.vertices, members(s, line, P));
                for_each_subset(pos, 4,
                                [&](const std::vector<std::uint32_t>& sub) { H.add_edge(sub); });
                return true;
            });
        }
        return H;
    }
    scan_tuples(s, P, /*critical_only=*/false, &H);
    return H;
}

bool is_critical(const Space& s, const std::vector<u64>& points) {
    const unsigned t = s.d() + 1;
    if (points.size() != t)
        throw std::invalid_argument("is_critical: tuple must have d+1 points");
    std::vector<u64> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("is_critical: points must be distinct");

    if (affine_rank(s, points) > s.d()) return false;
    std::vector<u64> sub;
    sub.reserve(t - 1);
    for (unsigned skip = 0; skip < t; ++skip) {
        sub.clear();
        for (unsigned i = 0; i < t; ++i)
            if (i != skip) sub.push_back(points[i]);
        if (affine_rank(s, sub) != s.d()) return false;
    }
    return true;
}

std::uint64_t count_critical(const Space& s, const PointSet& P) {
    require_same_ambient(s, P);
    const unsigned d = s.d();
    if (d == 2) return count_coplanar(s, P);  // collinear triples are critical
    if (d == 3) {
        // Per plane: all 4-subsets minus those with a collinear triple.  Two
        // collinear triples inside one 4-set share two points and hence a
        // line, so the per-line terms never double-subtract.
        const auto planes = enumerate_flats(s, 2);
        std::vector<u64> plane_m(planes.size());
        u128 total = 0;
        for (std::size_t i = 0; i < planes.size(); ++i) {
            plane_m[i] = members(s, planes[i], P).size();
            total += binom128(plane_m[i], 4);
        }
        u128 correction = 0;
        for_each_flat(s, 1, [&](const Flat& line) {
            const u64 ml = members(s, line, P).size();
            if (ml < 3) return true;
            for (const Flat& plane : hyperplanes_containing(s, line)) {
                const auto it =
                    std::lower_bound(planes.begin(), planes.end(), plane);
                const u64 mp = plane_m[static_cast<std::size_t>(it - planes.begin())];
                correction += binom128(ml, 3) * (mp - ml) + binom128(ml, 4);
            }
            return true;
        });
        return narrow64(total - correction, "count_critical overflow");
    }
    return scan_tuples(s, P, /*critical_only=*/true, nullptr);
}

UniformHypergraph build_critical_hypergraph(const Space& s, const PointSet& P) {
    require_same_ambient(s, P);
    UniformHypergraph H;
    H.r = s.d() + 1;
    H.vertices = vertex_list(P);
    const unsigned d = s.d();
    if (d == 2) return build_coplanar_hypergraph(s, P);
    if (d == 3) {
        guard_edge_budget(count_critical(s, P));
        std::vector<u64> pts(4);
        for_each_flat(s, 2, [&](const Flat& plane) {
            const auto mem = members(s, plane, P);
            const auto pos = positions_of(H.vertices, mem);
            std::vector<std::uint32_t> at(mem.size());
            for (std::size_t i = 0; i < mem.size(); ++i)
                at[i] = static_cast<std::uint32_t>(i);
            for_each_subset(at, 4, [&](const std::vector<std::uint32_t>& sub) {
                for (unsigned i = 0; i < 4; ++i) pts[i] = mem[sub[i]];
                if (affine_rank(s, pts) != 3) return;
                if (has_collinear_triple(s, pts)) return;
                std::vector<std::uint32_t> ep(4);
                for (unsigned i = 0; i < 4; ++i) ep[i] = pos[sub[i]];
                H.add_edge(ep);
            });
            return true;
        });
        return H;
    }
    scan_tuples(s, P, /*critical_only=*/true, &H);
    return H;
}

std::optional<std::vector<u64>> find_critical(const Space& s, const PointSet& P) {
    require_same_ambient(s, P);
    const unsigned t = s.d() + 1;
    const auto idx = P.indices();
    if (idx.size() < t) return std::nullopt;

    // Depth-first lexicographic scan.  Every i-subset of a critical tuple
    // with i <= d is affinely independent, so dependent prefixes prune.
    std::vector<u64> pick;
    pick.reserve(t);
    u64 nodes = 0;
    std::optional<std::vector<u64>> found;
    auto dfs = [&](auto&& self, std::size_t from) -> bool {
        if (++nodes > kScanBudget)
            throw BudgetExceeded("find_critical: scan exceeds budget");
        if (pick.size() == t)
            return is_critical(s, pick) && (found = pick, true);
        for (std::size_t i = from; i < idx.size(); ++i) {
            pick.push_back(idx[i]);
            const bool viable =
                pick.size() > s.d() || affine_rank(s, pick) == pick.size();
            if (viable && self(self, i + 1)) return true;
            pick.pop_back();
        }
        return false;
    };
    dfs(dfs, 0);
    return found;
}

double delta_tau(const UniformHypergraph& H, double tau) {
    if (H.edge_count() == 0)
        throw EmptyHypergraph("delta_tau: hypergraph has no edges");
    if (!(tau > 0))
        throw std::invalid_argument("delta_tau: tau must be positive");
    const auto delta = degree_profile(H);
    const double r = H.r;
    const double lead = std::ldexp(1.0, static_cast<int>(H.r * (H.r - 1) / 2) - 1) *
                        static_cast<double>(H.vertices.size()) /
                        (r * static_cast<double>(H.edge_count()));
    double sum = 0.0;
    for (unsigned i = 2; i <= H.r; ++i) {
        const int pair_exp = static_cast<int>((i - 1) * (i - 2) / 2);
        sum += static_cast<double>(delta[i]) /
               (std::ldexp(1.0, pair_exp) * std::pow(tau, static_cast<double>(i - 1)));
    }
    return lead * sum;
}

BoundednessReport check_bounded(const UniformHypergraph& H, double c, double tau) {
    if (H.edge_count() == 0)
        throw EmptyHypergraph("check_bounded: hypergraph has no edges");
    if (!(tau > 0))
        throw std::invalid_argument("check_bounded: tau must be positive");
    const auto delta = degree_profile(H);
    const double density =
        static_cast<double>(H.edge_count()) / static_cast<double>(H.vertices.size());

    BoundednessReport rep;
    rep.tau = tau;
    rep.c_given = c;
    rep.bounded = true;
    for (unsigned i = 2; i <= H.r; ++i) {
        const double tpow = std::pow(tau, static_cast<double>(i - 1));
        const double need = static_cast<double>(delta[i]) / (density * tpow);
        rep.c_needed.push_back(need);
        rep.c_required = std::max(rep.c_required, need);
        if (static_cast<double>(delta[i]) > c * density * tpow) rep.bounded = false;
    }
    return rep;
}

double container_tau_coplanar(u64 q, unsigned d, double k) {
    if (!(k > 1))
        throw PreconditionFailed("container_tau_coplanar: needs |P| > q (k > 1)");
    const double dd = d;
    return std::pow(std::min(k - 1, 1.0), -dd / (dd + 1)) / k *
           std::pow(static_cast<double>(q), -1.0 / (dd + 1));
}

double container_tau_critical(u64 q, unsigned d, double k) {
    if (!(k > 0))
        throw PreconditionFailed("container_tau_critical: needs k > 0");
    const double dq = static_cast<double>(q);
    const double dd = d;
    return std::max(std::pow(dq, 1.0 / dd - 1.0) / k,
                    std::pow(dq, dd - 2.0) / (k * k));
}

double coplanar_count_lower(u64 q, unsigned d, u64 n) {
    if (q < 2 * (d + 1))
        throw PreconditionFailed("coplanar_count_lower: needs q >= 2(d+1)");
    if (n < q + 2 * (d + 1))
        throw PreconditionFailed("coplanar_count_lower: needs |P| >= q + 2(d+1)");
    const double nn = static_cast<double>(n);
    const double dq = static_cast<double>(q);
    return binom_real(nn, d - 1) / binom_real(static_cast<double>(d + 1), d - 1) *
           std::min(nn / dq - 1.0, 1.0) * nn * nn / (32.0 * dq);
}

double critical_count_lower(u64 q, unsigned d, u64 n) {
    u128 pre = 4 * static_cast<u128>(d);
    for (unsigned i = 0; i + 1 < d; ++i) pre *= q;
    if (static_cast<u128>(n) < pre)
        throw PreconditionFailed("critical_count_lower: needs |P| >= 4d q^{d-1}");
    const double nn = static_cast<double>(n);
    double value = 1.0;
    for (unsigned i = 0; i <= d; ++i) value *= nn / 4.0;
    double fact = 1.0;
    for (unsigned i = 2; i <= d + 1; ++i) fact *= static_cast<double>(i);
    return value / (fact * static_cast<double>(q));
}

}  // namespace gpfq
