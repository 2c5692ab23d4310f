#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "gpfq/geometry.hpp"
#include "gpfq/supersat.hpp"

namespace gpfq {

// Which supersaturation hypergraph drives the iteration.
enum class SupersatStrategy { BalancedTriples, Coplanar, Critical };

struct ContainerParams {
    double epsilon = 0.36787944117144233;  // 1/e, as in all three schemes
    // Diagnostic tau.  0 selects the scheme rule for the strategy at hand
    // (container_tau_coplanar / container_tau_critical with k = |C|/q, and
    // k^{-1} q^{-1/2} for the triple scheme), scaled by tau_scale.
    double tau = 0.0;
    double tau_scale = 1.0;
    // Iteration stops once every container has at most this many points.
    // 0 selects the scheme default: 9q (triples), (2(d+1)+1)q (coplanar),
    // 4d q^{d-1} (critical).
    std::uint64_t size_threshold = 0;
    unsigned max_rounds = 0;            // 0: d(d+1) ceil(log2 q)
    std::uint64_t node_budget = 20'000'000;  // branch-tree nodes per step
    SupersatStrategy strategy = SupersatStrategy::BalancedTriples;
};

// One round of the iteration (container_step families carry exactly one).
struct RoundRecord {
    unsigned round = 0;
    std::size_t container_count = 0;
    std::uint64_t max_container_size = 0;
    std::uint64_t edges = 0;             // total |H| processed this round
    std::uint64_t nodes = 0;             // branch-tree nodes expanded
    std::uint64_t min_fingerprint = 0;   // protected-set sizes at leaves
    std::uint64_t max_fingerprint = 0;
    double max_epsilon_measured = 0.0;   // max |H[C]| / |H| over containers
    double tau = 0.0;                    // diagnostic tau in force
    double delta_value = 0.0;            // delta_tau of the largest H
    std::size_t stuck = 0;               // oversized containers with no edges
};

struct ContainerFamily {
    std::uint64_t q = 0;
    unsigned d = 0;
    std::vector<PointSet> containers;
    std::vector<RoundRecord> log;
    unsigned rounds = 0;
    // False when the iteration stopped at the round limit or on containers
    // that exceed the threshold but carry no supersaturation edges.
    bool complete = true;
};

// Deterministic fingerprint construction over one hypergraph.  Output family
// covers every independent set of H, and each container C induces at most
// epsilon * |H| edges.  A hypergraph with no edges yields the single
// container V(H).  Throws EmptyHypergraph when H has no vertices,
// BudgetExceeded when the branch tree outgrows params.node_budget.
ContainerFamily container_step(const Space& s, const UniformHypergraph& H,
                               const ContainerParams& params);

// Starts from {F_q^d} and repeatedly replaces every container larger than
// the size threshold by container_step on its strategy hypergraph, until all
// containers fit or the round limit is reached (partial family flagged via
// complete = false, never thrown).
ContainerFamily iterate_containers(std::uint64_t q, unsigned d,
                                   const ContainerParams& params);

struct FamilyReport {
    double covered_fraction = 0.0;
    std::vector<std::size_t> uncovered;  // indices into the sample list
    std::map<std::uint64_t, std::uint64_t> size_histogram;
    std::uint64_t max_induced_edges = 0;  // only set by the H overload
};

// Coverage audit: fraction of samples contained in some family member.
FamilyReport verify_family(const ContainerFamily& family,
                           const std::vector<PointSet>& samples);

// Same, plus the maximum number of H-edges induced inside any container.
FamilyReport verify_family(const UniformHypergraph& H,
                           const ContainerFamily& family,
                           const std::vector<PointSet>& samples);

}  // namespace gpfq
