#pragma once

#include <cstdint>
#include <vector>

#include "gpfq/geometry.hpp"

namespace gpfq {

// Bipartite point-hyperplane incidence graph of F_q^d.  Sides: the q^d points
// and the q(q^d-1)/(q-1) hyperplanes; a point is adjacent to the hyperplanes
// containing it.  delta1 = (q^d-1)/(q-1) is the point degree, delta2 = q^{d-1}
// the hyperplane degree.  Hyperplane ids are positions in `hyperplanes`
// (canonically sorted); parallel_class groups hyperplanes with the same
// direction space.
struct IncidenceGraph {
    std::uint64_t q = 0;
    unsigned d = 0;
    std::uint64_t n_points = 0;
    std::uint64_t n_hyperplanes = 0;
    std::uint64_t delta1 = 0;
    std::uint64_t delta2 = 0;
    std::vector<Flat> hyperplanes;
    std::vector<std::vector<std::uint32_t>> hyp_points;  // sorted point indices
    std::vector<std::vector<std::uint32_t>> point_hyps;  // sorted hyperplane ids
    std::vector<std::uint32_t> parallel_class;           // per hyperplane
    std::uint32_t n_classes = 0;
};

// Budgets: q^d <= 10^6 and at most ~2.5e8 incidences (BudgetExceeded).
// Pre: d >= 2.
IncidenceGraph build_incidence(const Space& s);

// Result of checking the exact walk identity
//   A^3 = (delta1 - 1) q^{d-2} * [[0, J], [J^t, 0]] + delta2 * A
// entrywise on the bipartite adjacency A.  The diagonal blocks of both sides
// vanish for any bipartite graph, so the point x hyperplane block decides the
// identity.  When the full check would be too expensive the verifier falls
// back to an equivalent sampled check (degree regularity verified in full plus
// pseudorandom codegree entries) and sets `sampled`.
struct CubeCheck {
    bool ok = false;
    bool sampled = false;
    std::uint64_t entries_checked = 0;
    std::uint64_t mismatches = 0;
};

CubeCheck verify_cube_identity(const IncidenceGraph& G, std::uint64_t seed = 1);

// Second-largest adjacency eigenvalue.  Closed form q^{(d-1)/2}; requires the
// cube identity to hold (PreconditionFailed otherwise).
double second_eigenvalue(const IncidenceGraph& G, const CubeCheck& proof);

// Power iteration on the point-side two-step operator, deflating the constant
// vector; returns the numeric second eigenvalue.  Pre: q^d <= 10^4.
double second_eigenvalue_numeric(const IncidenceGraph& G);

struct SpectralReport {
    std::uint64_t q = 0;
    unsigned d = 0;
    std::uint64_t delta1 = 0;
    std::uint64_t delta2 = 0;
    CubeCheck cube;
    double lambda2_closed = 0.0;
    double lambda2_numeric = 0.0;  // NaN when not run
    bool numeric_ran = false;
};

// build + verify + eigenvalues in one pass (numeric part only at q^d <= 1e4).
SpectralReport analyze_spectrum(const Space& s);

// e(S, T): incidences between a set of points and a set of hyperplanes,
// countable from either side; the two routes are independent implementations.
enum class CountSide { Hyperplanes, Points };
std::uint64_t edges_between(const IncidenceGraph& G, const PointSet& S,
                            const std::vector<std::uint32_t>& T, CountSide side);

// Expander mixing: |e(S,T) - delta2 |S||T| / q^d| <= lambda2 sqrt(|S||T|).
struct MixingReport {
    std::uint64_t e = 0;
    double expected = 0.0;
    double deviation = 0.0;
    double bound = 0.0;
    bool within = false;
};
MixingReport mixing_deviation(const IncidenceGraph& G, const PointSet& S,
                              const std::vector<std::uint32_t>& T);

// Hyperplanes whose intersection with P falls outside the typical window
// [|P|/(2q), 2|P|/q]; their number is at most 8 q^{d+1} / |P|.
struct AtypicalReport {
    std::uint64_t count = 0;
    double bound = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
};
AtypicalReport atypical_hyperplanes(const IncidenceGraph& G, const PointSet& P);

}  // namespace gpfq
