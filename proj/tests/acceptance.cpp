// Acceptance battery for the general position laboratory.  Each numbered
// criterion prints exactly one [PASS]/[FAIL] line; the process exits nonzero
// if any fails.  argv[1] must name the gpfq CLI binary (used by the
// determinism criterion to check the external interface as well).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gpfq/containers.hpp"
#include "gpfq/errors.hpp"
#include "gpfq/geometry.hpp"
#include "gpfq/incidence.hpp"
#include "gpfq/lab.hpp"
#include "gpfq/supersat.hpp"

using namespace gpfq;

namespace {

using u64 = std::uint64_t;
using Artifacts = std::map<std::string, std::string>;

u64 mix64(u64 z) {
    z += 0x9e3779b97f4a7c15ull;
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

PointSet sample_exact(const Space& s, u64 size, u64 seed) {
    const u64 n = s.point_count();
    std::vector<u64> order(n);
    for (u64 i = 0; i < n; ++i) order[i] = i;
    for (u64 i = n; i > 1; --i)
        std::swap(order[i - 1], order[mix64(seed ^ (i * 0x9275)) % i]);
    PointSet P(s);
    for (u64 i = 0; i < size; ++i) P.add(order[i]);
    return P;
}

// Tracks the first failed check of a criterion.
struct Checker {
    bool ok = true;
    std::string why;
    void require(bool cond, const std::string& msg) {
        if (ok && !cond) {
            ok = false;
            why = msg;
        }
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Rank-test oracles: direct definition checks, no census shortcuts.
void oracle_tuples(const Space& s, const PointSet& P, u64* coplanar,
                   u64* critical) {
    const std::vector<u64> pts = P.indices();
    const unsigned d = s.d();
    const unsigned r = d + 1;
    *coplanar = 0;
    *critical = 0;
    if (pts.size() < r) return;
    std::vector<std::size_t> c(r);
    for (unsigned i = 0; i < r; ++i) c[i] = i;
    std::vector<u64> tuple(r), sub(d);
    for (;;) {
        for (unsigned i = 0; i < r; ++i) tuple[i] = pts[c[i]];
        if (affine_rank(s, tuple) <= d) {
            ++*coplanar;
            bool crit = true;
            for (unsigned skip = 0; skip < r && crit; ++skip) {
                unsigned w = 0;
                for (unsigned i = 0; i < r; ++i)
                    if (i != skip) sub[w++] = tuple[i];
                if (affine_rank(s, sub) != d) crit = false;
            }
            if (crit) ++*critical;
        }
        // next combination
        unsigned i = r;
        while (i > 0 && c[i - 1] == pts.size() - r + (i - 1)) --i;
        if (i == 0) break;
        ++c[i - 1];
        for (unsigned j = i; j < r; ++j) c[j] = c[j - 1] + 1;
    }
}

// All general position subsets of a tiny plane, by full 2^(q^d) scan.
std::vector<PointSet> scan_gp_sets(const Space& s) {
    const u64 n = s.point_count();
    std::vector<PointSet> out;
    for (u64 mask = 0; mask < (1ull << n); ++mask) {
        PointSet P(s);
        for (u64 i = 0; i < n; ++i)
            if ((mask >> i) & 1) P.add(i);
        if (is_general_position(s, P)) out.push_back(P);
    }
    return out;
}

// ---------------------------------------------------------------------------

bool crit1_spectra(Checker& ck, Artifacts& art) {
    std::string csv = "# schema: gpfq.spectra.v1\nq,d,lambda2_closed,lambda2_numeric\n";
    const std::pair<u64, unsigned> cases[] = {{2, 2}, {3, 2}, {4, 2}, {5, 2},
                                              {7, 2}, {2, 3}, {3, 3}};
    for (auto [q, d] : cases) {
        const SpectralReport r = analyze_spectrum(Space(q, d));
        ck.require(r.cube.ok, "walk identity fails at q=" + std::to_string(q) +
                                  " d=" + std::to_string(d));
        ck.require(!r.cube.sampled,
                   "walk identity was sampled, not exact, at q=" +
                       std::to_string(q));
        ck.require(r.cube.mismatches == 0, "walk identity mismatch entries");
        ck.require(r.numeric_ran, "numeric eigenvalue did not run");
        const double target = std::pow(static_cast<double>(q), (d - 1) / 2.0);
        ck.require(std::abs(r.lambda2_numeric - target) <= 1e-6 * target,
                   "numeric second eigenvalue off at q=" + std::to_string(q));
        ck.require(r.lambda2_closed == target, "closed-form eigenvalue off");
        csv += std::to_string(q) + ',' + std::to_string(d) + ',' +
               fmt(r.lambda2_closed) + ',' + fmt(r.lambda2_numeric) + '\n';
    }
    art["c1.spectra.csv"] = csv;
    return ck.ok;
}

bool crit2_flats(Checker& ck, Artifacts& art) {
    std::string csv = "# schema: gpfq.flats.v1\nq,d,k,count,per_point\n";
    for (u64 q : {2, 3, 4, 5}) {
        for (unsigned d : {2u, 3u}) {
            const Space s(q, d);
            for (unsigned k = 0; k <= d; ++k) {
                const std::vector<Flat> flats = enumerate_flats(s, k);
                ck.require(flats.size() == flat_count(d, k, q),
                           "flat count off at q=" + std::to_string(q) + " d=" +
                               std::to_string(d) + " k=" + std::to_string(k));
                std::vector<u64> through(s.point_count(), 0);
                for (const Flat& f : flats)
                    for (u64 x : flat_points(s, f)) ++through[x];
                const u64 expect = gaussian_binomial(d, k, q);
                for (u64 x = 0; x < s.point_count(); ++x)
                    ck.require(through[x] == expect,
                               "per-point flat count off at q=" +
                                   std::to_string(q) + " k=" + std::to_string(k));
                csv += std::to_string(q) + ',' + std::to_string(d) + ',' +
                       std::to_string(k) + ',' + std::to_string(flats.size()) +
                       ',' + std::to_string(expect) + '\n';
            }
        }
    }
    art["c2.flats.csv"] = csv;
    return ck.ok;
}

bool crit3_atypical(Checker& ck, Artifacts& art) {
    std::string csv = "# schema: gpfq.atypical.v1\nq,d,size,count,bound\n";
    const std::pair<u64, unsigned> cases[] = {{7, 2}, {11, 2}, {5, 3}};
    for (auto [q, d] : cases) {
        const Space s(q, d);
        const IncidenceGraph G = build_incidence(s);
        const u64 n = s.point_count();
        const u64 classes[4] = {n / 6 + 1, n / 4 + 1, n / 2, (3 * n) / 4};
        for (int cls = 0; cls < 4; ++cls) {
            for (unsigned t = 0; t < 50; ++t) {
                const u64 seed = mix64(0xa7 + q * 1000 + cls * 100 + t);
                const PointSet P = sample_exact(s, classes[cls], seed);
                const AtypicalReport rep = atypical_hyperplanes(G, P);
                ck.require(static_cast<double>(rep.count) <= rep.bound,
                           "atypical hyperplane bound violated at q=" +
                               std::to_string(q) + " size=" +
                               std::to_string(P.size()));
                csv += std::to_string(q) + ',' + std::to_string(d) + ',' +
                       std::to_string(P.size()) + ',' +
                       std::to_string(rep.count) + ',' + fmt(rep.bound) + '\n';
            }
        }
    }
    art["c3.atypical.csv"] = csv;
    return ck.ok;
}

bool crit4_triples(Checker& ck, Artifacts& art) {
    std::string csv =
        "# schema: gpfq.triples.v1\nq,size,edges,delta1,delta2,size_lower,"
        "delta1_upper,delta2_upper\n";
    for (u64 q : {11, 13}) {
        const Space s(q, 2);
        for (unsigned t = 0; t < 50; ++t) {
            const u64 lo = 9 * q + 1, hi = q * q;
            const u64 size = lo + mix64(0xba1 + q * 100 + t) % (hi - lo + 1);
            const PointSet P = sample_exact(s, size, mix64(0x4a + q * 77 + t));
            const UniformHypergraph H = balanced_triples(s, P);
            const std::vector<u64> prof = degree_profile(H);
            const TripleSystemBounds b = triple_system_bounds(q, P.size());
            ck.require(static_cast<double>(H.edge_count()) >= b.size_lower,
                       "triple system too small at q=" + std::to_string(q));
            ck.require(static_cast<double>(prof[1]) <= b.delta1_upper,
                       "triple system degree too high at q=" + std::to_string(q));
            ck.require(static_cast<double>(prof[2]) <= b.delta2_upper,
                       "triple system codegree too high at q=" +
                           std::to_string(q));
            csv += std::to_string(q) + ',' + std::to_string(P.size()) + ',' +
                   std::to_string(H.edge_count()) + ',' +
                   std::to_string(prof[1]) + ',' + std::to_string(prof[2]) +
                   ',' + fmt(b.size_lower) + ',' + fmt(b.delta1_upper) + ',' +
                   fmt(b.delta2_upper) + '\n';
        }
    }
    const Space s11(11, 2);
    const UniformHypergraph full = balanced_triples(s11, PointSet::full(s11));
    ck.require(full.edge_count() == 21780,
               "full-plane triple system has " +
                   std::to_string(full.edge_count()) + " edges, not 21780");
    art["c4.triples.csv"] = csv;
    return ck.ok;
}

bool crit5_coplanar_bound(Checker& ck, Artifacts& art) {
    std::string csv = "# schema: gpfq.coplanar.v1\nq,d,size,count,bound\n";
    const std::pair<u64, unsigned> cases[] = {{7, 2}, {8, 2}, {9, 2}, {8, 3}};
    for (auto [q, d] : cases) {
        const Space s(q, d);
        const u64 lo = q + 2 * (d + 1), hi = 2 * q + 2 * (d + 1);
        for (unsigned t = 0; t < 50; ++t) {
            const u64 size = lo + mix64(0xc0 + q * 31 + t) % (hi - lo + 1);
            const PointSet P = sample_exact(s, size, mix64(0x5c + q * 13 + t));
            const u64 count = count_coplanar(s, P);
            const double bound = coplanar_count_lower(q, d, P.size());
            ck.require(static_cast<double>(count) >= bound,
                       "coplanar count below its floor at q=" +
                           std::to_string(q) + " d=" + std::to_string(d));
            csv += std::to_string(q) + ',' + std::to_string(d) + ',' +
                   std::to_string(P.size()) + ',' + std::to_string(count) +
                   ',' + fmt(bound) + '\n';
        }
    }
    art["c5.coplanar.csv"] = csv;
    return ck.ok;
}

bool crit6_critical(Checker& ck, Artifacts& art) {
    std::string csv = "# schema: gpfq.critical.v1\nq,d,size,count,reference\n";
    for (u64 q : {11, 13}) {
        const Space s(q, 2);
        const u64 lo = 8 * q, hi = q * q;
        for (unsigned t = 0; t < 20; ++t) {
            const u64 size = lo + mix64(0xcf + q * 51 + t) % (hi - lo + 1);
            const PointSet P = sample_exact(s, size, mix64(0x6e + q * 17 + t));
            const u64 count = count_critical(s, P);
            const double bound = critical_count_lower(q, 2, P.size());
            ck.require(static_cast<double>(count) >= bound,
                       "critical count below its floor at q=" +
                           std::to_string(q));
            csv += std::to_string(q) + ",2," + std::to_string(P.size()) + ',' +
                   std::to_string(count) + ',' + fmt(bound) + '\n';
        }
    }
    const Space s53(5, 3);
    for (unsigned t = 0; t < 100; ++t) {
        const u64 size = 10 + mix64(0x53 + t) % 31;  // 10..40
        const PointSet P = sample_exact(s53, size, mix64(0x35c + t));
        const u64 census = count_critical(s53, P);
        u64 cop = 0, crit = 0;
        oracle_tuples(s53, P, &cop, &crit);
        ck.require(census == crit,
                   "per-plane critical census disagrees with the rank oracle "
                   "(census " +
                       std::to_string(census) + ", oracle " +
                       std::to_string(crit) + ")");
        csv += "5,3," + std::to_string(P.size()) + ',' +
               std::to_string(census) + ',' + std::to_string(crit) + '\n';
    }
    art["c6.critical.csv"] = csv;
    return ck.ok;
}

bool crit7_oracle(Checker& ck, Artifacts& art) {
    std::string csv =
        "# schema: gpfq.oracle.v1\nq,d,size,coplanar,critical\n";
    const std::pair<u64, unsigned> cases[] = {{5, 2}, {7, 2}, {3, 3}, {5, 3}};
    for (auto [q, d] : cases) {
        const Space s(q, d);
        const u64 cap = std::min<u64>(25, s.point_count());
        for (unsigned t = 0; t < 100; ++t) {
            const u64 size = (d + 2) + mix64(0x07 + q * 7 + t) % (cap - d - 1);
            const PointSet P = sample_exact(s, size, mix64(0x70 + q * 3 + t));
            u64 cop = 0, crit = 0;
            oracle_tuples(s, P, &cop, &crit);
            ck.require(count_coplanar(s, P) == cop,
                       "coplanar census disagrees with the rank oracle at q=" +
                           std::to_string(q) + " d=" + std::to_string(d));
            ck.require(count_critical(s, P) == crit,
                       "critical census disagrees with the rank oracle at q=" +
                           std::to_string(q) + " d=" + std::to_string(d));
            csv += std::to_string(q) + ',' + std::to_string(d) + ',' +
                   std::to_string(P.size()) + ',' + std::to_string(cop) + ',' +
                   std::to_string(crit) + '\n';
        }
    }
    art["c7.oracle.csv"] = csv;
    return ck.ok;
}

std::string log_csv(const ContainerFamily& fam) {
    std::string csv =
        "# schema: gpfq.rounds.v1\nround,containers,max_size,edges,"
        "max_epsilon,stuck\n";
    for (const RoundRecord& r : fam.log)
        csv += std::to_string(r.round) + ',' +
               std::to_string(r.container_count) + ',' +
               std::to_string(r.max_container_size) + ',' +
               std::to_string(r.edges) + ',' + fmt(r.max_epsilon_measured) +
               ',' + std::to_string(r.stuck) + '\n';
    csv += "final," + std::to_string(fam.containers.size()) + ",,,,\n";
    return csv;
}

bool crit8_containers(Checker& ck, Artifacts& art) {
    // Exhaustive coverage at q in {2, 3}: every general position set from the
    // full subset scan must lie inside some container of the final family.
    for (u64 q : {2, 3}) {
        const Space s(q, 2);
        ContainerParams params;
        params.strategy = SupersatStrategy::BalancedTriples;
        params.size_threshold = q == 2 ? 3 : 4;
        const ContainerFamily fam = iterate_containers(q, 2, params);
        u64 covered = 0, totalsets = 0;
        for (const PointSet& I : scan_gp_sets(s)) {
            ++totalsets;
            for (const PointSet& C : fam.containers)
                if (I.is_subset_of(C)) {
                    ++covered;
                    break;
                }
        }
        ck.require(covered == totalsets,
                   "exhaustive coverage gap at q=" + std::to_string(q) + ": " +
                       std::to_string(covered) + "/" +
                       std::to_string(totalsets));
        art["c8.q" + std::to_string(q) + ".rounds.csv"] = log_csv(fam);
    }

    // Randomized coverage and per-round sparsity at q in {11, 13}.
    for (u64 q : {11, 13}) {
        const Space s(q, 2);
        ContainerParams params;
        params.strategy = SupersatStrategy::BalancedTriples;
        if (q == 13) params.epsilon = 0.32;  // keeps round one final (measured)
        const ContainerFamily fam = iterate_containers(q, 2, params);
        ck.require(fam.complete,
                   "container iteration incomplete at q=" + std::to_string(q));
        for (const RoundRecord& r : fam.log)
            ck.require(r.max_epsilon_measured <= params.epsilon,
                       "a container induces more than epsilon |H| edges at q=" +
                           std::to_string(q) + " round " +
                           std::to_string(r.round));
        std::vector<PointSet> samples;
        samples.reserve(500);
        for (unsigned i = 0; i < 500; ++i)
            samples.push_back(greedy_maximal_gp(s, PointSet::full(s),
                                                mix64(0x8a11 + q * 1000 + i)));
        const FamilyReport rep = verify_family(fam, samples);
        ck.require(rep.covered_fraction == 1.0,
                   "random maximal sets escape the family at q=" +
                       std::to_string(q));
        art["c8.q" + std::to_string(q) + ".rounds.csv"] = log_csv(fam);
    }
    return ck.ok;
}

bool crit9_alpha(Checker& ck, Artifacts& art) {
    std::string csv = "# schema: gpfq.alpha.v1\nq,d,alpha\n";
    const u64 expected[][2] = {{2, 4}, {3, 4}, {5, 6}};
    for (auto [q, a] : expected) {
        const Space s(q, 2);
        const unsigned got = alpha_exact(s, PointSet::full(s));
        ck.require(got == a, "alpha(F_" + std::to_string(q) + "^2) = " +
                                 std::to_string(got) + ", expected " +
                                 std::to_string(a));
        csv += std::to_string(q) + ",2," + std::to_string(got) + '\n';
    }
    for (u64 q : {7, 11}) {
        const Space s(q, 2);
        const unsigned got = alpha_exact(s, PointSet::full(s));
        ck.require(q <= got && got <= 2 * q,
                   "alpha(F_" + std::to_string(q) + "^2) outside [q, 2q]");
        csv += std::to_string(q) + ",2," + std::to_string(got) + '\n';
    }
    // Brute-force cross-check by full subset scan at q <= 3.
    for (u64 q : {2, 3}) {
        const Space s(q, 2);
        u64 brute = 0;
        for (const PointSet& I : scan_gp_sets(s)) brute = std::max(brute, I.size());
        ck.require(alpha_exact(s, PointSet::full(s)) == brute,
                   "solver disagrees with the exhaustive scan at q=" +
                       std::to_string(q));
    }
    art["c9.alpha.csv"] = csv;
    return ck.ok;
}

std::vector<double> grid13() {
    std::vector<double> grid{0.0};
    for (int i = 0; i < 14; ++i) grid.push_back(0.005 * std::pow(1.48, i));
    grid.push_back(1.0);
    return grid;
}

bool crit10_sweep(Checker& ck, Artifacts& art) {
    const std::vector<double> grid = grid13();
    const std::vector<TrialRecord> rec = phase_sweep(13, 2, grid, 20, 0x51ab);
    const std::vector<SweepPoint> pts = summarize_sweep(rec);
    ck.require(pts.size() == grid.size(), "sweep lost grid points");
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        ck.require(pts[i].median_alpha <= pts[i + 1].median_alpha,
                   "median alpha drops between p=" + fmt(pts[i].p) + " and p=" +
                       fmt(pts[i + 1].p));
    ck.require(pts.front().median_alpha == 0.0, "alpha at p=0 is not 0");
    const unsigned full_alpha =
        alpha_exact(Space(13, 2), PointSet::full(Space(13, 2)));
    ck.require(pts.back().median_alpha == static_cast<double>(full_alpha),
               "alpha at p=1 does not match the exact solver");
    for (const SweepPoint& pt : pts) {
        const double mean = pt.p * 169.0;
        const double sigma = std::sqrt(169.0 * pt.p * (1.0 - pt.p));
        ck.require(std::abs(pt.median_size - mean) <= 3.0 * sigma,
                   "sample size drifts beyond 3 sigma at p=" + fmt(pt.p));
    }
    const std::vector<SlopeSegment> slopes = sweep_slope_report(rec);
    ck.require(!slopes.empty(), "empty slope report");
    for (const SlopeSegment& seg : slopes)
        ck.require(std::isfinite(seg.slope), "non-finite slope");
    art["c10.trials.csv"] = trials_to_csv(rec);
    art["c10.slopes.csv"] = slopes_to_csv(slopes);
    art["c10.sweep.csv"] = sweep_points_to_csv(pts);
    return ck.ok;
}

bool crit11_counting(Checker& ck, Artifacts& art) {
    const std::vector<CountRecord> c22 = count_gp_sets(2, 2, false);
    ck.require(c22.size() == 1 && c22[0].count == 16,
               "census total at q=2 is not 16");

    const std::vector<CountRecord> c32 = count_gp_sets(3, 2, true);
    const Space s3(3, 2);
    std::vector<u64> oracle(10, 0);
    u64 oracle_total = 0;
    for (const PointSet& I : scan_gp_sets(s3)) {
        ++oracle[I.size()];
        ++oracle_total;
    }
    u64 total = 0;
    for (const CountRecord& r : c32) {
        ck.require(r.count == oracle[r.m],
                   "census at q=3 disagrees with the subset scan at m=" +
                       std::to_string(r.m));
        total += r.count;
    }
    ck.require(total == oracle_total, "census total at q=3 disagrees");
    ck.require(total >= 8, "census total at q=3 below 2^q");

    auto binom = [](u64 n, u64 k) {
        if (k > n) return u64{0};
        u64 r = 1;
        for (u64 i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    };
    for (u64 q : {2, 3}) {
        const std::vector<CountRecord> recs =
            count_gp_sets(q, 2, true);
        for (const CountRecord& r : recs)
            if (r.m <= q)
                ck.require(r.count >= binom(q, r.m),
                           "per-size count below the curve-subset floor");
        const unsigned a =
            alpha_exact(Space(q, 2), PointSet::full(Space(q, 2)));
        ck.require(recs.back().m == a,
                   "counts do not vanish exactly above alpha at q=" +
                       std::to_string(q));
    }

    // First-moment domination of a Monte Carlo estimate at q=11, p=0.3.
    const Space s11(11, 2);
    const IncidenceGraph G = build_incidence(s11);
    ContainerParams params;
    params.strategy = SupersatStrategy::BalancedTriples;
    const ContainerFamily fam = iterate_containers(11, 2, params);
    const double p = 0.3;
    std::string csv =
        "# schema: gpfq.moment.v1\nm,bound,estimate,sigma_mean\n";
    for (u64 m : {5, 10, 15}) {
        const unsigned T = 200, K = 2000;
        long double sum = 0.0L, sumsq = 0.0L;
        for (unsigned t = 0; t < T; ++t) {
            const PointSet S =
                sample_random_set(11, 2, p, mix64(0x3c0 + 7 * t));
            long double est = 0.0L;
            const std::vector<u64> pts = S.indices();
            if (pts.size() >= m) {
                unsigned hits = 0;
                std::vector<u64> pool(pts);
                std::vector<std::uint16_t> cnt(G.n_hyperplanes, 0);
                std::vector<u64> pick(m);
                for (unsigned k = 0; k < K; ++k) {
                    // partial Fisher-Yates: the first m entries of a shuffle
                    for (u64 i = 0; i < m; ++i) {
                        const u64 j =
                            i + mix64((t * 131071ull + k) * 64 + i) %
                                    (pool.size() - i);
                        std::swap(pool[i], pool[j]);
                        pick[i] = pool[i];
                    }
                    bool gp = true;
                    for (u64 x : pick)
                        for (std::uint32_t h : G.point_hyps[x])
                            if (++cnt[h] > 2) gp = false;
                    if (gp) ++hits;
                    for (u64 x : pick)
                        for (std::uint32_t h : G.point_hyps[x]) --cnt[h];
                }
                long double subsets = 1.0L;
                for (u64 i = 1; i <= m; ++i)
                    subsets *= static_cast<long double>(pts.size() - m + i) /
                               static_cast<long double>(i);
                est = subsets * hits / K;
            }
            sum += est;
            sumsq += est * est;
        }
        const long double mean = sum / T;
        const long double var =
            std::max(0.0L, sumsq / T - mean * mean);
        const long double sigma_mean = std::sqrt(var / T);
        const long double bound = first_moment_bound(fam, p, m);
        ck.require(bound >= mean - 3.0L * sigma_mean,
                   "first-moment bound undercuts the Monte Carlo estimate at "
                   "m=" + std::to_string(m));
        csv += std::to_string(m) + ',' + fmt(static_cast<double>(bound)) +
               ',' + fmt(static_cast<double>(mean)) + ',' +
               fmt(static_cast<double>(sigma_mean)) + '\n';
    }
    art["c11.counts.q3.csv"] = counts_to_csv(c32);
    art["c11.moment.csv"] = csv;
    return ck.ok;
}

// Runs criteria 3..11 into `art` (quietly: their pass/fail was already
// reported on the first pass).
void rerun_3_to_11(Artifacts& art) {
    Checker quiet;
    crit3_atypical(quiet, art);
    crit4_triples(quiet, art);
    crit5_coplanar_bound(quiet, art);
    crit6_critical(quiet, art);
    crit7_oracle(quiet, art);
    crit8_containers(quiet, art);
    crit9_alpha(quiet, art);
    crit10_sweep(quiet, art);
    crit11_counting(quiet, art);
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

bool crit12_determinism(Checker& ck, const Artifacts& first,
                        const std::string& cli) {
    // Same seeds, different thread count: every CSV artifact of criteria
    // 3..11 must come back byte-identical.  (Criteria 1 and 2 also left
    // artifacts in `first`; drop those before comparing.)
    Artifacts expected = first;
    expected.erase("c1.spectra.csv");
    expected.erase("c2.flats.csv");
    setenv("GPFQ_THREADS", "3", 1);
    Artifacts second;
    rerun_3_to_11(second);
    unsetenv("GPFQ_THREADS");
    ck.require(expected.size() == second.size(),
               "artifact sets differ in size");
    for (const auto& [name, bytes] : expected) {
        const auto it = second.find(name);
        ck.require(it != second.end(), "missing artifact " + name);
        if (it != second.end())
            ck.require(it->second == bytes,
                       "artifact " + name + " changed under GPFQ_THREADS=3");
    }

    // The CLI reproduces bytes across thread counts too.
    const std::string base = "/tmp/gpfq_accept";
    const std::string args =
        " simulate --q 11 --d 2 --p-grid 0,0.2,0.6,1 --trials 5 --seed 77 "
        "--out ";
    const int rc1 = std::system(
        ("GPFQ_THREADS=1 " + cli + args + base + "_a.csv >/dev/null 2>&1")
            .c_str());
    const int rc2 = std::system(
        ("GPFQ_THREADS=4 " + cli + args + base + "_b.csv >/dev/null 2>&1")
            .c_str());
    ck.require(rc1 == 0 && rc2 == 0, "CLI simulate runs failed");
    ck.require(!slurp(base + "_a.csv").empty(), "CLI wrote no output");
    ck.require(slurp(base + "_a.csv") == slurp(base + "_b.csv"),
               "CLI trial CSV differs across thread counts");
    ck.require(slurp(base + "_a.csv.slopes.csv") ==
                   slurp(base + "_b.csv.slopes.csv"),
               "CLI slope CSV differs across thread counts");
    return ck.ok;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-gpfq-cli>\n", argv[0]);
        return 2;
    }
    const std::string cli = argv[1];
    unsetenv("GPFQ_THREADS");

    struct Criterion {
        const char* name;
        double limit_s;
        bool (*run)(Checker&, Artifacts&);
    };
    const Criterion list[] = {
        {"1. walk identity and second eigenvalue", 60, crit1_spectra},
        {"2. flat census against the subspace formulas", 30, crit2_flats},
        {"3. atypical hyperplane ceiling", 60, crit3_atypical},
        {"4. balanced triple system guarantees", 120, crit4_triples},
        {"5. coplanar tuple floor", 600, crit5_coplanar_bound},
        {"6. critical tuple floor and cubic census", 600, crit6_critical},
        {"7. census equals the rank-test oracles", 300, crit7_oracle},
        {"8. container coverage and sparsity", 900, crit8_containers},
        {"9. exact alpha values", 600, crit9_alpha},
        {"10. random sweep phase audit", 1800, crit10_sweep},
        {"11. counting audit and first-moment domination", 900, crit11_counting},
    };

    Artifacts artifacts;
    bool all_ok = true;
    for (const Criterion& c : list) {
        Checker ck;
        const auto t0 = std::chrono::steady_clock::now();
        const bool ok = c.run(ck, artifacts);
        const double secs = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        Checker time_ck;
        time_ck.require(secs < c.limit_s, "exceeded the time limit");
        const bool pass = ok && time_ck.ok;
        std::printf("[%s] %s (%.1f s)%s%s\n", pass ? "PASS" : "FAIL", c.name,
                    secs, pass ? "" : " -- ",
                    pass ? "" : (ck.ok ? time_ck.why.c_str() : ck.why.c_str()));
        std::fflush(stdout);
        all_ok = all_ok && pass;
    }

    {
        Checker ck;
        const auto t0 = std::chrono::steady_clock::now();
        const bool ok = crit12_determinism(ck, artifacts, cli);
        const double secs = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        std::printf("[%s] 12. byte-identical reruns across thread counts "
                    "(%.1f s)%s%s\n",
                    ok ? "PASS" : "FAIL", secs, ok ? "" : " -- ",
                    ok ? "" : ck.why.c_str());
        all_ok = all_ok && ok;
    }

    return all_ok ? 0 : 1;
}
