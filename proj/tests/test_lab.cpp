#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpfq/errors.hpp"
#include "gpfq/geometry.hpp"
#include "gpfq/lab.hpp"
#include "gpfq/supersat.hpp"

using namespace gpfq;

namespace {

// Exhaustive maximum general position subset size over all 2^(q^d) subsets.
unsigned brute_alpha(const Space& s) {
    const std::uint64_t n = s.point_count();
    REQUIRE(n <= 20);
    unsigned best = 0;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        PointSet P(s);
        for (std::uint64_t i = 0; i < n; ++i)
            if ((mask >> i) & 1) P.add(i);
        if (is_general_position(s, P) && P.size() > best)
            best = static_cast<unsigned>(P.size());
    }
    return best;
}

std::vector<std::uint64_t> brute_counts(const Space& s) {
    const std::uint64_t n = s.point_count();
    REQUIRE(n <= 20);
    std::vector<std::uint64_t> per_size(n + 1, 0);
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        PointSet P(s);
        for (std::uint64_t i = 0; i < n; ++i)
            if ((mask >> i) & 1) P.add(i);
        if (is_general_position(s, P)) ++per_size[P.size()];
    }
    return per_size;
}

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_CASE("point variates are reproducible and land in the unit interval") {
    for (std::uint64_t seed : {0ull, 1ull, 0xdeadbeefull}) {
        for (std::uint64_t i = 0; i < 200; ++i) {
            const double u = point_variate(seed, i);
            CHECK(u >= 0.0);
            CHECK(u < 1.0);
            CHECK(u == point_variate(seed, i));
        }
    }
    // Different indices decorrelate: the 200 variates are not all equal.
    CHECK(point_variate(7, 0) != point_variate(7, 1));
}

TEST_CASE("random sets: endpoints, determinism, nesting, and density") {
    SUBCASE("p = 0 is empty and p = 1 is everything") {
        CHECK(sample_random_set(11, 2, 0.0, 99).size() == 0);
        CHECK(sample_random_set(11, 2, 1.0, 99).size() == 121);
    }
    SUBCASE("equal seeds give equal bitmaps") {
        const PointSet a = sample_random_set(11, 2, 0.5, 42);
        const PointSet b = sample_random_set(11, 2, 0.5, 42);
        CHECK(a == b);
        CHECK(a.size() > 0);
    }
    SUBCASE("samples are nested in p for a fixed seed") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const PointSet lo = sample_random_set(7, 2, 0.25, seed);
            const PointSet hi = sample_random_set(7, 2, 0.75, seed);
            CHECK(lo.is_subset_of(hi));
        }
    }
    SUBCASE("aggregate density tracks p") {
        std::uint64_t total = 0;
        for (std::uint64_t seed = 0; seed < 50; ++seed)
            total += sample_random_set(11, 2, 0.5, 1000 + seed).size();
        // 50 samples of Binomial(121, 1/2): mean 3025, sd ~39.
        CHECK(total > 3025 - 4 * 39);
        CHECK(total < 3025 + 4 * 39);
    }
    SUBCASE("probabilities outside the unit interval are rejected") {
        CHECK_THROWS_AS(sample_random_set(5, 2, -0.1, 1), std::invalid_argument);
        CHECK_THROWS_AS(sample_random_set(5, 2, 1.5, 1), std::invalid_argument);
        CHECK_THROWS_AS(sample_random_set(5, 2, std::nan(""), 1),
                        std::invalid_argument);
    }
}

TEST_CASE("alpha_exact on full planes matches the known maxima") {
    CHECK(alpha_exact(Space(2, 2), PointSet::full(Space(2, 2))) == 4);
    CHECK(alpha_exact(Space(3, 2), PointSet::full(Space(3, 2))) == 4);
    CHECK(alpha_exact(Space(5, 2), PointSet::full(Space(5, 2))) == 6);
    CHECK(alpha_exact(Space(7, 2), PointSet::full(Space(7, 2))) == 8);
    CHECK(alpha_exact(Space(3, 3), PointSet::full(Space(3, 3))) == 5);
}

TEST_CASE("alpha_exact agrees with exhaustive search on tiny planes") {
    for (std::uint64_t q : {2ull, 3ull}) {
        Space s(q, 2);
        CHECK(alpha_exact(s, PointSet::full(s)) == brute_alpha(s));
    }
}

TEST_CASE("alpha_exact on structured subsets") {
    SUBCASE("a moment curve is already in general position") {
        Space s(7, 2);
        const PointSet curve = moment_curve(s);
        CHECK(alpha_exact(s, curve) == 7);
    }
    SUBCASE("a full line holds at most two points") {
        Space s(5, 2);
        PointSet line(s);
        for (std::uint64_t x = 0; x < 5; ++x) {
            const felem c[2] = {static_cast<felem>(x), 0};
            line.add(s.index_of(c));
        }
        CHECK(alpha_exact(s, line) == 2);
        CHECK(alpha_deletion_lower(s, line) == 2);
    }
    SUBCASE("the empty set solves to zero") {
        Space s(5, 2);
        CHECK(alpha_exact(s, PointSet(s)) == 0);
    }
}

TEST_CASE("alpha_exact surfaces its node budget") {
    Space s(11, 2);
    CHECK_THROWS_AS(alpha_exact(s, PointSet::full(s), 2), BudgetExceeded);
}

TEST_CASE("deletion lower bound never exceeds the exact solution") {
    Space s(11, 2);
    for (std::uint64_t t = 0; t < 100; ++t) {
        // 20-point pseudo-random subsets, fixed seeds.
        PointSet P(s);
        std::uint64_t state = 0x5151 + t;
        while (P.size() < 20) {
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            P.add((state >> 33) % 121);
        }
        const unsigned lower = alpha_deletion_lower(s, P);
        const unsigned exact = alpha_exact(s, P);
        const unsigned cover = alpha_cover_upper(s, P);
        CHECK(lower <= exact);
        CHECK(exact <= cover);
        CHECK(exact <= P.size());
        const std::uint64_t tuples = count_coplanar(s, P);
        CHECK(lower + tuples >= P.size());  // one deletion per tuple at worst
    }
}

TEST_CASE("deletion bound on a moment curve deletes nothing") {
    Space s(9, 2);
    const PointSet curve = moment_curve(s);
    CHECK(alpha_deletion_lower(s, curve) == 9);
}

TEST_CASE("cover upper bound is d*q on the full space") {
    CHECK(alpha_cover_upper(Space(7, 2), PointSet::full(Space(7, 2))) == 14);
    CHECK(alpha_cover_upper(Space(11, 2), PointSet::full(Space(11, 2))) == 22);
    CHECK(alpha_cover_upper(Space(3, 3), PointSet::full(Space(3, 3))) == 9);
}

TEST_CASE("phase sweep: invariants, endpoints, coupling, and determinism") {
    const std::vector<double> grid{0.0, 0.1, 0.3, 0.6, 1.0};
    const unsigned trials = 6;
    const std::vector<TrialRecord> rec = phase_sweep(7, 2, grid, trials, 0xcafe);
    REQUIRE(rec.size() == grid.size() * trials);

    SUBCASE("per-record invariants") {
        for (const TrialRecord& r : rec) {
            CHECK(r.q == 7);
            CHECK(r.d == 2);
            CHECK(r.alpha_lower <= r.alpha_upper);
            if (r.alpha_exact_flag) CHECK(r.alpha_lower == r.alpha_upper);
            CHECK(r.alpha_upper <= r.sample_size);
            CHECK(r.sample_size <= 49);
        }
    }
    SUBCASE("records are laid out grid-major with derived seeds") {
        for (std::size_t gi = 0; gi < grid.size(); ++gi)
            for (unsigned t = 0; t < trials; ++t) {
                const TrialRecord& r = rec[gi * trials + t];
                CHECK(r.p == grid[gi]);
                CHECK(r.seed == (0xcafeull ^ t));
            }
    }
    SUBCASE("endpoints are degenerate") {
        for (unsigned t = 0; t < trials; ++t) {
            CHECK(rec[0 * trials + t].sample_size == 0);
            CHECK(rec[0 * trials + t].alpha_lower == 0);
            CHECK(rec[4 * trials + t].sample_size == 49);
            CHECK(rec[4 * trials + t].alpha_lower == 8);
            CHECK(rec[4 * trials + t].alpha_exact_flag);
        }
    }
    SUBCASE("within one trial the certified lower bound never drops") {
        for (unsigned t = 0; t < trials; ++t)
            for (std::size_t gi = 0; gi + 1 < grid.size(); ++gi)
                CHECK(rec[gi * trials + t].alpha_lower <=
                      rec[(gi + 1) * trials + t].alpha_lower);
    }
    SUBCASE("medians are non-decreasing and slopes are finite") {
        const std::vector<SweepPoint> pts = summarize_sweep(rec);
        REQUIRE(pts.size() == grid.size());
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            CHECK(pts[i].p < pts[i + 1].p);
            CHECK(pts[i].median_alpha <= pts[i + 1].median_alpha);
        }
        for (const SlopeSegment& seg : sweep_slope_report(rec)) {
            CHECK(seg.p_lo > 0.0);
            CHECK(seg.p_hi > seg.p_lo);
            CHECK(std::isfinite(seg.slope));
        }
    }
    SUBCASE("reruns and thread counts do not change a byte") {
        const std::string base = trials_to_csv(rec);
        const std::string again =
            trials_to_csv(phase_sweep(7, 2, grid, trials, 0xcafe));
        CHECK(base == again);
        setenv("GPFQ_THREADS", "3", 1);
        const std::string threaded =
            trials_to_csv(phase_sweep(7, 2, grid, trials, 0xcafe));
        unsetenv("GPFQ_THREADS");
        CHECK(base == threaded);
    }
    SUBCASE("grid validation") {
        CHECK_THROWS_AS(phase_sweep(7, 2, {0.5, 1.2}, 1, 0),
                        std::invalid_argument);
        CHECK_THROWS_AS(phase_sweep(7, 2, grid, 0, 0), std::invalid_argument);
    }
}

TEST_CASE("first moment bound: closed forms on tiny families") {
    Space s(5, 2);
    ContainerFamily fam;
    fam.q = 5;
    fam.d = 2;
    PointSet C(s);
    for (std::uint64_t i = 0; i < 4; ++i) C.add(i);
    fam.containers.push_back(C);

    CHECK(first_moment_bound(fam, 1.0, 2) == 6.0L);   // C(4,2)
    CHECK(first_moment_bound(fam, 0.5, 1) == 2.0L);   // 4 * 0.5
    CHECK(first_moment_bound(fam, 0.0, 3) == 0.0L);
    CHECK(first_moment_bound(fam, 0.7, 0) == 1.0L);   // one container, m = 0
    CHECK(first_moment_bound(fam, 0.9, 5) == 0.0L);   // m beyond |C|

    fam.containers.push_back(PointSet::full(s));
    CHECK(first_moment_bound(fam, 1.0, 0) == 2.0L);   // |family| when m = 0
    // Second container contributes C(25,2) * 0.25 on top of C(4,2) * 0.25.
    CHECK(first_moment_bound(fam, 0.5, 2) == doctest::Approx(300.0 * 0.25 + 1.5));
    CHECK_THROWS_AS(first_moment_bound(fam, -0.2, 1), std::invalid_argument);
}

TEST_CASE("general position census: frozen values and oracles") {
    SUBCASE("q = 2: every subset qualifies") {
        const std::vector<CountRecord> recs = count_gp_sets(2, 2, true);
        REQUIRE(recs.size() == 5);
        const std::uint64_t expected[] = {1, 4, 6, 4, 1};
        for (std::size_t m = 0; m < 5; ++m) {
            CHECK(recs[m].m == m);
            CHECK(recs[m].count == expected[m]);
        }
        const std::vector<CountRecord> total = count_gp_sets(2, 2, false);
        REQUIRE(total.size() == 1);
        CHECK(total[0].m == kTotalRow);
        CHECK(total[0].count == 16);
    }
    SUBCASE("q = 3 agrees with the exhaustive scan") {
        const std::vector<CountRecord> recs = count_gp_sets(3, 2, true);
        const std::vector<std::uint64_t> oracle = brute_counts(Space(3, 2));
        REQUIRE(recs.size() == 5);  // sizes 0..4, nothing above alpha = 4
        std::uint64_t total = 0;
        for (const CountRecord& r : recs) {
            CHECK(r.count == oracle[r.m]);
            total += r.count;
        }
        CHECK(total == 172);
        CHECK(total >= 8);  // at least 2^q
        CHECK(recs[0].count == 1);
        CHECK(recs[1].count == 9);
        for (std::uint64_t m = 0; m <= 3; ++m)
            CHECK(recs[m].count >= binom(3, m));
    }
    SUBCASE("larger frozen totals") {
        std::uint64_t total4 = 0, total5 = 0;
        for (const CountRecord& r : count_gp_sets(4, 2, true)) total4 += r.count;
        for (const CountRecord& r : count_gp_sets(5, 2, true)) total5 += r.count;
        CHECK(total4 == 1793);
        CHECK(total5 == 16426);
    }
    SUBCASE("a cubic space: census matches the plane count by hand") {
        const std::vector<CountRecord> recs = count_gp_sets(2, 3, true);
        REQUIRE(recs.size() == 5);
        // All <= 3-subsets of the 8 points qualify; of the C(8,4) = 70
        // quadruples exactly the 14 planes are excluded.
        CHECK(recs[3].count == 56);
        CHECK(recs[4].count == 56);
    }
    SUBCASE("the census respects its node budget") {
        CHECK_THROWS_AS(count_gp_sets(7, 2, true, 1000), BudgetExceeded);
    }
}

TEST_CASE("greedy maximal sets are in general position and truly maximal") {
    Space s(11, 2);
    const PointSet full = PointSet::full(s);
    for (std::uint64_t seed : {0ull, 1ull, 2ull, 77ull}) {
        const PointSet S = greedy_maximal_gp(s, full, seed);
        CHECK(is_general_position(s, S));
        CHECK(S.size() >= 6);
        for (std::uint64_t x = 0; x < 121; ++x) {
            if (S.contains(x)) continue;
            PointSet grown = S;
            grown.add(x);
            CHECK_FALSE(is_general_position(s, grown));
        }
    }
    // Restricting to a subset stays inside it.
    const PointSet curve = moment_curve(s);
    const PointSet within = greedy_maximal_gp(s, curve, 5);
    CHECK(within.is_subset_of(curve));
    CHECK(within.size() == 11);  // the curve itself is in general position
}

TEST_CASE("csv writers: schema lines, 17-digit floats, stable bytes") {
    TrialRecord r;
    r.q = 13;
    r.d = 2;
    r.p = 1.0 / 3.0;
    r.seed = 7;
    r.sample_size = 55;
    r.alpha_lower = 12;
    r.alpha_upper = 14;
    r.alpha_exact_flag = false;
    r.coplanar_count = 901;
    r.runtime_ms = 3.25;

    const std::string csv = trials_to_csv({r});
    CHECK(csv ==
          "# schema: gpfq.trial.v1\n"
          "q,d,p,seed,sample_size,alpha_lower,alpha_upper,alpha_exact,"
          "coplanar_count\n"
          "13,2,0.33333333333333331,7,55,12,14,0,901\n");
    const std::string timed = trials_to_csv({r}, true);
    CHECK(timed.find("runtime_ms") != std::string::npos);
    CHECK(timed.find(",3.25\n") != std::string::npos);

    const std::string counts =
        counts_to_csv({{3, 2, 4, 54}, {3, 2, kTotalRow, 172}});
    CHECK(counts ==
          "# schema: gpfq.count.v1\nq,d,m,count\n3,2,4,54\n3,2,total,172\n");

    const std::string slopes = slopes_to_csv({{0.25, 0.5, 1.0}});
    CHECK(slopes == "# schema: gpfq.slope.v1\np_lo,p_hi,slope\n0.25,0.5,1\n");

    SweepPoint pt;
    pt.p = 0.5;
    pt.median_alpha = 7;
    pt.median_size = 24;
    pt.exact_fraction = 1.0;
    CHECK(sweep_points_to_csv({pt}) ==
          "# schema: gpfq.sweep.v1\np,median_alpha,median_size,"
          "exact_fraction\n0.5,7,24,1\n");
}
