#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpfq/containers.hpp"
#include "gpfq/geometry.hpp"

namespace gpfq {

// One random-set trial: sample S_p inside F_q^d, then bound (or solve) the
// maximum size of a general position subset.  `alpha_lower` is always the
// size of a concrete general position subset found, `alpha_upper` a proven
// upper bound; when `alpha_exact_flag` is set the two coincide and equal the
// true maximum.  `seed` is the per-trial seed actually fed to the sampler.
// `runtime_ms` is observational wall time; it is kept out of CSV output by
// default so that identical seeds reproduce identical bytes.
struct TrialRecord {
    std::uint64_t q = 0;
    unsigned d = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t sample_size = 0;
    std::uint64_t alpha_lower = 0;
    std::uint64_t alpha_upper = 0;
    bool alpha_exact_flag = false;
    std::uint64_t coplanar_count = 0;
    double runtime_ms = 0.0;
};

// Exact number of general position sets of size `m` in F_q^d.  A record with
// m == kTotalRow aggregates all sizes into one grand total.
struct CountRecord {
    std::uint64_t q = 0;
    unsigned d = 0;
    std::uint64_t m = 0;
    std::uint64_t count = 0;
};
inline constexpr std::uint64_t kTotalRow = ~std::uint64_t{0};

// Fixed splittable uniform variate on [0, 1): the value depends only on
// (seed, index), never on call order or thread schedule.
double point_variate(std::uint64_t seed, std::uint64_t index);

// p-random subset of F_q^d: point i is included iff
// point_variate(seed, i) < p, so equal seeds give equal bitmaps and the
// samples for p <= p' are nested.  E|S_p| = p q^d.  p must lie in [0, 1]
// (std::invalid_argument otherwise).
PointSet sample_random_set(std::uint64_t q, unsigned d, double p,
                           std::uint64_t seed);

// Exact maximum size of a general position subset of P, by branch and bound:
// greedy start, one point count per hyperplane, and a prune that caps the
// remaining gain by the tightest parallel class of hyperplanes.  Throws
// BudgetExceeded when the search tree outgrows `node_budget` (callers fall
// back to the bounds below).  When P is the whole space the search is rooted
// at {0, e_1, ..., e_d}: affine maps act transitively on affinely independent
// (d+1)-tuples, so some maximum set contains that frame.
unsigned alpha_exact(const Space& s, const PointSet& P,
                     std::uint64_t node_budget = 50'000'000);

// Size of the general position subset left by greedily deleting one point
// from each coplanar (d+1)-tuple, highest tuple count first.  Always a lower
// bound for alpha_exact(P); at least |P| - count_coplanar(P).
unsigned alpha_deletion_lower(const Space& s, const PointSet& P);

// Upper bound from a hyperplane cover: each parallel class partitions the
// space, a general position set meets every hyperplane in at most d points,
// hence alpha <= min over classes of sum_h min(d, |P on h|).  For the full
// space this is d*q.
unsigned alpha_cover_upper(const Space& s, const PointSet& P);

// Maximal general position subset of P, grown greedily in a seed-shuffled
// order (order_seed 0 keeps ascending index order): every point of P either
// joined or would have put d+1 chosen points on some hyperplane.
PointSet greedy_maximal_gp(const Space& s, const PointSet& P,
                           std::uint64_t order_seed);

// For each grid probability and each trial: sample, count coplanar tuples,
// and solve alpha exactly within the per-call node budget, else record the
// [deletion lower, cover upper] interval in-band (no exception escapes).
// Per-trial seeds are seed XOR trial-index, shared across the grid, so the
// samples of one trial are nested in p and each trial's alpha_lower is
// non-decreasing in p (a witness subset found at smaller p persists).
// Records are ordered by (grid position, trial) regardless of GPFQ_THREADS.
std::vector<TrialRecord> phase_sweep(std::uint64_t q, unsigned d,
                                     const std::vector<double>& p_grid,
                                     unsigned trials, std::uint64_t seed,
                                     std::uint64_t node_budget = 50'000'000);

// Per-grid-point aggregates of a sweep, in ascending p: upper medians of the
// certified alpha lower bound and of the sample size, plus the fraction of
// trials solved exactly.
struct SweepPoint {
    double p = 0.0;
    double median_alpha = 0.0;
    double median_size = 0.0;
    double exact_fraction = 0.0;
};
std::vector<SweepPoint> summarize_sweep(const std::vector<TrialRecord>& records);

// Log-log slopes of median alpha between consecutive grid points; segments
// with a zero endpoint median or zero p are skipped (their logs diverge).
struct SlopeSegment {
    double p_lo = 0.0;
    double p_hi = 0.0;
    double slope = 0.0;
};
std::vector<SlopeSegment> sweep_slope_report(
    const std::vector<TrialRecord>& records);

// sum over containers C of binom(|C|, m) * p^m in extended precision: an
// upper bound for the expected number of m-point general position subsets of
// a p-random set, since every such subset lies inside some container.
long double first_moment_bound(const ContainerFamily& family, double p,
                               std::uint64_t m);

// Exact census of general position sets in F_q^d by backtracking over point
// indices (each such set is visited exactly once).  by_size = true: one
// record per size m = 0..alpha, all positive; by_size = false: the single
// kTotalRow aggregate.  Throws BudgetExceeded when the census outgrows the
// node budget.
std::vector<CountRecord> count_gp_sets(std::uint64_t q, unsigned d,
                                       bool by_size,
                                       std::uint64_t node_budget = 200'000'000);

// CSV serialization.  Every writer emits one "# schema: ..." comment line,
// then a header row, then data rows; floats carry 17 significant digits.
// Trial rows omit runtime_ms unless include_runtime is set, keeping default
// output byte-identical across reruns and thread counts.
std::string trials_to_csv(const std::vector<TrialRecord>& records,
                          bool include_runtime = false);
std::string counts_to_csv(const std::vector<CountRecord>& records);
std::string slopes_to_csv(const std::vector<SlopeSegment>& segments);
std::string sweep_points_to_csv(const std::vector<SweepPoint>& points);

}  // namespace gpfq
