#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gpfq/geometry.hpp"

namespace gpfq {

// r-uniform hypergraph on a subset of the points of some F_q^d.  `vertices`
// holds the sorted point indices; edges are stored flat, r entries each, as
// sorted positions into `vertices`.  Edges are duplicate-free.
struct UniformHypergraph {
    unsigned r = 0;
    std::vector<std::uint32_t> vertices;
    std::vector<std::uint32_t> edge_data;

    std::size_t edge_count() const { return r == 0 ? 0 : edge_data.size() / r; }
    std::span<const std::uint32_t> edge(std::size_t i) const {
        return {edge_data.data() + i * r, r};
    }
    void add_edge(std::span<const std::uint32_t> positions) {
        edge_data.insert(edge_data.end(), positions.begin(), positions.end());
    }
};

// Max degree over i-subsets of vertices, for i = 1..r; entry [0] is unused.
// An edgeless hypergraph yields all zeros.  Delta_r counts duplicate edges,
// so it is 1 on any well-formed input; Delta_i is non-increasing in i.
std::vector<std::uint64_t> degree_profile(const UniformHypergraph& H);

// Collinear-triple system over the typical lines of a planar point set: lines
// with |l ∩ P| in [|P|/(2q), 2|P|/q] contribute every 3-subset of l ∩ P.
// Pre: d = 2 (WrongDimension), |P| >= 1.  Edge budget applies.
UniformHypergraph balanced_triples(const Space& s, const PointSet& P);

// Guarantees satisfied by balanced_triples output (real-valued binomials;
// a negative size_lower is vacuous): |S| >= size_lower, Delta_1 <= delta1_upper,
// Delta_2 <= delta2_upper.
struct TripleSystemBounds {
    double size_lower = 0.0;
    double delta1_upper = 0.0;
    double delta2_upper = 0.0;
};
TripleSystemBounds triple_system_bounds(std::uint64_t q, std::uint64_t size);

// Number of (d+1)-subsets of P with affine rank <= d (equivalently: contained
// in a hyperplane).  Exact flat census for d = 2 and d = 3; otherwise a rank
// scan over all C(|P|, d+1) subsets, subject to a budget.
std::uint64_t count_coplanar(const Space& s, const PointSet& P);

// The (d+1)-uniform hypergraph on P whose edges are the coplanar tuples;
// edge_count() == count_coplanar(P).  BudgetExceeded past ~4e6 edges.
UniformHypergraph build_coplanar_hypergraph(const Space& s, const PointSet& P);

// True iff the d+1 distinct points are coplanar and every d-subset has full
// affine rank d (no d of them fit in a (d-2)-flat).
bool is_critical(const Space& s, const std::vector<std::uint64_t>& points);

// Number of critical coplanar (d+1)-subsets of P.  For d = 2 this equals
// count_coplanar (distinct collinear triples are automatically critical); for
// d = 3 an exact per-plane census; otherwise a budgeted scan.
std::uint64_t count_critical(const Space& s, const PointSet& P);

// The (d+1)-uniform hypergraph of critical coplanar tuples in P.
UniformHypergraph build_critical_hypergraph(const Space& s, const PointSet& P);

// Lexicographically first critical tuple of P (as point indices), or absent.
std::optional<std::vector<std::uint64_t>> find_critical(const Space& s,
                                                        const PointSet& P);

// The branching functional
//   Delta(H, tau) = 2^{C(r,2)-1} |V| / (r |H|) * sum_{i=2}^{r} Delta_i /
//                   (2^{C(i-1,2)} tau^{i-1}).
// Pre: H has at least one edge (EmptyHypergraph), tau > 0.
double delta_tau(const UniformHypergraph& H, double tau);

// Checks Delta_i(H) <= c * (|H|/|V|) * tau^{i-1} for 2 <= i <= r and reports
// the smallest sufficient c.
struct BoundednessReport {
    double tau = 0.0;
    double c_given = 0.0;
    bool bounded = false;
    double c_required = 0.0;
    std::vector<double> c_needed;  // entry j is the requirement from i = j+2
};
BoundednessReport check_bounded(const UniformHypergraph& H, double c, double tau);

// tau choices driving the container iterations, with k = |P|/q:
// coplanar scheme: (min{k-1,1})^{-d/(d+1)} k^{-1} q^{-1/(d+1)}  (pre: k > 1);
// critical scheme: max{k^{-1} q^{1/d - 1}, k^{-2} q^{d-2}}      (pre: k > 0).
double container_tau_coplanar(std::uint64_t q, unsigned d, double k);
double container_tau_critical(std::uint64_t q, unsigned d, double k);

// Supersaturation lower bounds (explicit constants from the proofs):
// coplanar:  C(n, d-1)/C(d+1, d-1) * min{n/q - 1, 1} * n^2/(32 q),
//            pre n >= q + 2(d+1) and q >= 2(d+1);
// critical:  n^{d+1} / (4^{d+1} (d+1)! q), pre n >= 4 d q^{d-1}.
// PreconditionFailed when the hypothesis fails.
double coplanar_count_lower(std::uint64_t q, unsigned d, std::uint64_t n);
double critical_count_lower(std::uint64_t q, unsigned d, std::uint64_t n);

}  // namespace gpfq
