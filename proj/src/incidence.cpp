#include "gpfq/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>

#include "gpfq/errors.hpp"

namespace gpfq {

namespace {

constexpr std::uint64_t kSpaceBudget = 1'000'000;       // max q^d
constexpr std::uint64_t kIncidenceBudget = 250'000'000; // max stored incidences
constexpr std::uint64_t kVerifyOpsBudget = 5'000'000'000ULL;
constexpr std::uint64_t kSampledEntriesTarget = 1'000'000;

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t pow_u64(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) r *= b;
    return r;
}

// |hyps(u) ∩ hyps(v)| for sorted id lists.
std::uint64_t sorted_intersection_size(const std::vector<std::uint32_t>& a,
                                       const std::vector<std::uint32_t>& b) {
    std::uint64_t n = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++n;
            ++ia;
            ++ib;
        }
    }
    return n;
}

void check_adjacency_consistency(const IncidenceGraph& G) {
    std::uint64_t from_hyps = 0;
    for (const auto& pts : G.hyp_points) from_hyps += pts.size();
    std::uint64_t from_points = 0;
    for (const auto& hs : G.point_hyps) from_points += hs.size();
    if (from_hyps != from_points)
        throw std::invalid_argument("incidence graph: adjacency lists disagree");
    for (std::uint32_t h = 0; h < G.hyp_points.size(); ++h) {
        for (std::uint32_t v : G.hyp_points[h]) {
            if (v >= G.point_hyps.size() ||
                !std::binary_search(G.point_hyps[v].begin(), G.point_hyps[v].end(), h))
                throw std::invalid_argument("incidence graph: adjacency lists disagree");
        }
    }
}

}  // namespace

IncidenceGraph build_incidence(const Space& s) {
    if (s.d() < 2)
        throw std::invalid_argument("build_incidence: need ambient dimension >= 2");
    if (s.point_count() > kSpaceBudget)
        throw BudgetExceeded("build_incidence: q^d exceeds 10^6");

    IncidenceGraph G;
    G.q = s.q();
    G.d = s.d();
    G.n_points = s.point_count();
    G.delta2 = pow_u64(s.q(), s.d() - 1);
    G.delta1 = (s.point_count() - 1) / (s.q() - 1);
    G.hyperplanes = enumerate_flats(s, s.d() - 1);
    G.n_hyperplanes = G.hyperplanes.size();

    const std::uint64_t incidences = G.n_hyperplanes * G.delta2;
    if (incidences > kIncidenceBudget)
        throw BudgetExceeded("build_incidence: incidence lists would exceed memory budget");

    G.hyp_points.resize(G.n_hyperplanes);
    G.point_hyps.resize(G.n_points);
    std::vector<std::uint32_t> degree(G.n_points, 0);
    for (std::uint32_t h = 0; h < G.n_hyperplanes; ++h) {
        auto pts = flat_points(s, G.hyperplanes[h]);
        G.hyp_points[h].assign(pts.begin(), pts.end());
        for (std::uint64_t p : pts) ++degree[p];
    }
    for (std::uint64_t v = 0; v < G.n_points; ++v) G.point_hyps[v].reserve(degree[v]);
    for (std::uint32_t h = 0; h < G.n_hyperplanes; ++h)
        for (std::uint32_t v : G.hyp_points[h]) G.point_hyps[v].push_back(h);
    // Scatter order is increasing in h, so each point_hyps list is sorted.

    G.parallel_class.resize(G.n_hyperplanes);
    std::map<std::vector<std::vector<felem>>, std::uint32_t> classes;
    for (std::uint32_t h = 0; h < G.n_hyperplanes; ++h) {
        auto [it, fresh] = classes.try_emplace(G.hyperplanes[h].basis,
                                               static_cast<std::uint32_t>(classes.size()));
        (void)fresh;
        G.parallel_class[h] = it->second;
    }
    G.n_classes = static_cast<std::uint32_t>(classes.size());
    return G;
}

CubeCheck verify_cube_identity(const IncidenceGraph& G, std::uint64_t seed) {
    check_adjacency_consistency(G);
    CubeCheck out;

    const std::uint64_t n = G.n_points;
    const std::uint64_t m = G.n_hyperplanes;
    const std::uint64_t q = G.q;
    // Off-diagonal constant (delta1 - 1) * q^{d-2} and adjacency coefficient
    // delta2, both from the claimed (q, d) parameters.
    const std::uint64_t cross = (G.delta1 - 1) * pow_u64(q, G.d - 2);
    const std::uint64_t on_edge = cross + G.delta2;

    std::uint64_t incidences = 0;
    for (const auto& hs : G.point_hyps) incidences += hs.size();

    // Full check cost per point: spread the point's hyperplane lists
    // (delta1 * delta2 increments), then one pass over all m hyperplane sums.
    const std::uint64_t per_point = G.delta1 * G.delta2 + incidences / std::max<std::uint64_t>(n, 1) + m;
    const bool full = n * per_point <= kVerifyOpsBudget;

    if (full) {
        // Row-streamed exact check of the point x hyperplane block: for point
        // u build the codegree row r[v] = |hyps(u) ∩ hyps(v)|, then the walk
        // count to hyperplane h is sum of r over h's points.
        std::vector<std::uint64_t> row(n);
        std::vector<char> on(m);
        for (std::uint64_t u = 0; u < n; ++u) {
            std::fill(row.begin(), row.end(), 0);
            std::fill(on.begin(), on.end(), 0);
            for (std::uint32_t h : G.point_hyps[u]) {
                on[h] = 1;
                for (std::uint32_t v : G.hyp_points[h]) ++row[v];
            }
            for (std::uint32_t h = 0; h < m; ++h) {
                std::uint64_t walks = 0;
                for (std::uint32_t v : G.hyp_points[h]) walks += row[v];
                const std::uint64_t want = on[h] ? on_edge : cross;
                ++out.entries_checked;
                if (walks != want) {
                    ++out.mismatches;
                    out.ok = false;
                    return out;
                }
            }
        }
        out.ok = true;
        return out;
    }

    // Sampled fallback.  Degree biregularity is verified in full; together
    // with constant codegree (q^{d-1} - 1)/(q - 1) between distinct points it
    // implies the identity, so the sampling targets codegree entries.
    out.sampled = true;
    for (const auto& hs : G.point_hyps) {
        ++out.entries_checked;
        if (hs.size() != G.delta1) {
            ++out.mismatches;
            return out;
        }
    }
    for (const auto& pts : G.hyp_points) {
        ++out.entries_checked;
        if (pts.size() != G.delta2) {
            ++out.mismatches;
            return out;
        }
    }
    const std::uint64_t codeg = (pow_u64(q, G.d - 1) - 1) / (q - 1);
    std::uint64_t entries = kSampledEntriesTarget;
    const std::uint64_t per_pair = 2 * G.delta1;
    if (entries * per_pair > kVerifyOpsBudget / 2)
        entries = std::max<std::uint64_t>(10'000, kVerifyOpsBudget / 2 / per_pair);
    for (std::uint64_t i = 0; i < entries; ++i) {
        const std::uint64_t u = mix64(seed ^ (2 * i)) % n;
        std::uint64_t v = mix64(seed ^ (2 * i + 1)) % (n - 1);
        if (v >= u) ++v;  // uniform over v != u
        ++out.entries_checked;
        if (sorted_intersection_size(G.point_hyps[u], G.point_hyps[v]) != codeg) {
            ++out.mismatches;
            return out;
        }
    }
    out.ok = true;
    return out;
}

double second_eigenvalue(const IncidenceGraph& G, const CubeCheck& proof) {
    if (!proof.ok)
        throw IdentityFailed("second_eigenvalue: cube identity not verified");
    return std::pow(static_cast<double>(G.q), (G.d - 1) / 2.0);
}

double second_eigenvalue_numeric(const IncidenceGraph& G) {
    if (G.n_points > 10'000)
        throw BudgetExceeded("second_eigenvalue_numeric: q^d exceeds 10^4");
    const std::uint64_t n = G.n_points;
    const std::uint64_t m = G.n_hyperplanes;

    // Two-step operator on point vectors: (B B^t x)[u] = sum over hyperplanes
    // through u of the hyperplane's x-sum.  Its spectrum is {delta1 * delta2}
    // on constants and {lambda_i^2} elsewhere, so deflating the constant
    // vector isolates lambda2^2.
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y,
                     std::vector<double>& z) {
        std::fill(z.begin(), z.end(), 0.0);
        for (std::uint32_t h = 0; h < m; ++h)
            for (std::uint32_t v : G.hyp_points[h]) z[h] += x[v];
        std::fill(y.begin(), y.end(), 0.0);
        for (std::uint64_t u = 0; u < n; ++u)
            for (std::uint32_t h : G.point_hyps[u]) y[u] += z[h];
    };
    auto deflate = [&](std::vector<double>& x) {
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= static_cast<double>(n);
        for (double& v : x) v -= mean;
    };
    auto normalize = [&](std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        s = std::sqrt(s);
        if (s > 0) {
            for (double& v : x) v /= s;
        }
        return s;
    };

    std::vector<double> x(n), y(n), z(m);
    for (std::uint64_t u = 0; u < n; ++u)
        x[u] = static_cast<double>(mix64(u)) / 18446744073709551616.0 - 0.5;
    deflate(x);
    normalize(x);

    double value = 0.0;
    for (int it = 0; it < 500; ++it) {
        apply(x, y, z);
        deflate(y);
        const double next = normalize(y);
        x.swap(y);
        if (it > 2 && std::abs(next - value) <= 1e-13 * std::max(1.0, value)) {
            value = next;
            break;
        }
        value = next;
    }
    return std::sqrt(value);
}

SpectralReport analyze_spectrum(const Space& s) {
    SpectralReport rep;
    rep.q = s.q();
    rep.d = s.d();
    IncidenceGraph G = build_incidence(s);
    rep.delta1 = G.delta1;
    rep.delta2 = G.delta2;
    rep.cube = verify_cube_identity(G);
    rep.lambda2_closed = second_eigenvalue(G, rep.cube);
    if (G.n_points <= 10'000) {
        rep.lambda2_numeric = second_eigenvalue_numeric(G);
        rep.numeric_ran = true;
    } else {
        rep.lambda2_numeric = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

std::uint64_t edges_between(const IncidenceGraph& G, const PointSet& S,
                            const std::vector<std::uint32_t>& T, CountSide side) {
    if (S.universe_size() != G.n_points)
        throw MixedAmbient("edges_between: point set does not match the graph's space");
    for (std::uint32_t h : T)
        if (h >= G.n_hyperplanes)
            throw std::out_of_range("edges_between: hyperplane id out of range");

    std::uint64_t e = 0;
    if (side == CountSide::Hyperplanes) {
        for (std::uint32_t h : T)
            for (std::uint32_t v : G.hyp_points[h])
                if (S.contains(v)) ++e;
    } else {
        std::vector<char> in_t(G.n_hyperplanes, 0);
        for (std::uint32_t h : T) in_t[h] = 1;
        for (std::uint64_t v : S.indices())
            for (std::uint32_t h : G.point_hyps[v])
                if (in_t[h]) ++e;
    }
    return e;
}

MixingReport mixing_deviation(const IncidenceGraph& G, const PointSet& S,
                              const std::vector<std::uint32_t>& T) {
    MixingReport rep;
    rep.e = edges_between(G, S, T, CountSide::Hyperplanes);
    const double ns = static_cast<double>(S.size());
    const double nt = static_cast<double>(T.size());
    rep.expected = static_cast<double>(G.delta2) * ns * nt / static_cast<double>(G.n_points);
    rep.deviation = std::abs(static_cast<double>(rep.e) - rep.expected);
    const double lambda2 = std::pow(static_cast<double>(G.q), (G.d - 1) / 2.0);
    rep.bound = lambda2 * std::sqrt(ns * nt);
    rep.within = rep.deviation <= rep.bound * (1 + 1e-12) + 1e-9;
    return rep;
}

AtypicalReport atypical_hyperplanes(const IncidenceGraph& G, const PointSet& P) {
    if (P.universe_size() != G.n_points)
        throw MixedAmbient("atypical_hyperplanes: point set does not match the graph's space");
    if (P.size() == 0)
        throw std::invalid_argument("atypical_hyperplanes: need a nonempty point set");

    const std::uint64_t size = P.size();
    const std::uint64_t q = G.q;
    AtypicalReport rep;
    rep.window_lo = static_cast<double>(size) / (2.0 * static_cast<double>(q));
    rep.window_hi = 2.0 * static_cast<double>(size) / static_cast<double>(q);
    rep.bound = 8.0 * static_cast<double>(pow_u64(q, G.d + 1)) / static_cast<double>(size);
    for (std::uint32_t h = 0; h < G.n_hyperplanes; ++h) {
        std::uint64_t x = 0;
        for (std::uint32_t v : G.hyp_points[h])
            if (P.contains(v)) ++x;
        // x < |P|/(2q) or x > 2|P|/q, compared without rounding.
        if (2 * q * x < size || q * x > 2 * size) ++rep.count;
    }
    return rep;
}

}  // namespace gpfq
