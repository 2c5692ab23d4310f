// Python bindings for the general position laboratory.  The module exposes
// the core value types (Space, PointSet) and thin wrappers around the main
// operations; reports come back as plain dicts so callers need no extra
// wrapper classes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <sstream>
#include <vector>

#include "gpfq/containers.hpp"
#include "gpfq/errors.hpp"
#include "gpfq/field.hpp"
#include "gpfq/geometry.hpp"
#include "gpfq/incidence.hpp"
#include "gpfq/lab.hpp"
#include "gpfq/supersat.hpp"

namespace py = pybind11;
using namespace gpfq;

namespace {

py::dict spectral_dict(const SpectralReport& r) {
    py::dict out;
    out["q"] = r.q;
    out["d"] = r.d;
    out["delta1"] = r.delta1;
    out["delta2"] = r.delta2;
    out["cube_ok"] = r.cube.ok;
    out["cube_sampled"] = r.cube.sampled;
    out["cube_entries_checked"] = r.cube.entries_checked;
    out["cube_mismatches"] = r.cube.mismatches;
    out["lambda2_closed"] = r.lambda2_closed;
    out["lambda2_numeric"] = r.lambda2_numeric;
    out["numeric_ran"] = r.numeric_ran;
    return out;
}

py::dict trial_dict(const TrialRecord& r) {
    py::dict out;
    out["q"] = r.q;
    out["d"] = r.d;
    out["p"] = r.p;
    out["seed"] = r.seed;
    out["sample_size"] = r.sample_size;
    out["alpha_lower"] = r.alpha_lower;
    out["alpha_upper"] = r.alpha_upper;
    out["alpha_exact"] = r.alpha_exact_flag;
    out["coplanar_count"] = r.coplanar_count;
    return out;
}

py::dict family_dict(const ContainerFamily& fam) {
    py::dict out;
    out["q"] = fam.q;
    out["d"] = fam.d;
    out["rounds"] = fam.rounds;
    out["complete"] = fam.complete;
    out["containers"] = fam.containers;
    py::list log;
    for (const RoundRecord& r : fam.log) {
        py::dict row;
        row["round"] = r.round;
        row["container_count"] = r.container_count;
        row["max_container_size"] = r.max_container_size;
        row["edges"] = r.edges;
        row["nodes"] = r.nodes;
        row["max_epsilon_measured"] = r.max_epsilon_measured;
        row["tau"] = r.tau;
        row["stuck"] = r.stuck;
        log.append(row);
    }
    out["log"] = log;
    return out;
}

SupersatStrategy parse_strategy(const std::string& name) {
    if (name == "triples") return SupersatStrategy::BalancedTriples;
    if (name == "coplanar") return SupersatStrategy::Coplanar;
    if (name == "critical") return SupersatStrategy::Critical;
    throw std::invalid_argument("unknown strategy: " + name +
                                " (want triples|coplanar|critical)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "general position sets over finite fields: exact engines";

    py::register_exception<BudgetExceeded>(m, "BudgetExceeded");
    py::register_exception<PreconditionFailed>(m, "PreconditionFailed");
    py::register_exception<NotPrimePower>(m, "NotPrimePower");
    py::register_exception<MixedAmbient>(m, "MixedAmbient");
    py::register_exception<WrongDimension>(m, "WrongDimension");

    py::class_<Space>(m, "Space")
        .def(py::init<std::uint64_t, unsigned>(), py::arg("q"), py::arg("d"))
        .def_property_readonly("q", &Space::q)
        .def_property_readonly("d", &Space::d)
        .def_property_readonly("point_count", &Space::point_count)
        .def("coords",
             [](const Space& s, std::uint64_t index) {
                 return s.point(index).coords;
             },
             py::arg("index"), "Coordinate tuple of a point index.")
        .def("index_of",
             [](const Space& s, const std::vector<felem>& coords) {
                 return s.index_of(coords);
             },
             py::arg("coords"), "Point index of a coordinate tuple.")
        .def("__repr__", [](const Space& s) {
            return "Space(q=" + std::to_string(s.q()) +
                   ", d=" + std::to_string(s.d()) + ")";
        });

    py::class_<PointSet>(m, "PointSet")
        .def(py::init([](const Space& s, const std::vector<std::uint64_t>& pts) {
                 PointSet P(s);
                 for (std::uint64_t x : pts) P.add(x);
                 return P;
             }),
             py::arg("space"), py::arg("points") = std::vector<std::uint64_t>{})
        .def_property_readonly("q", &PointSet::q)
        .def_property_readonly("d", &PointSet::d)
        .def("__len__", &PointSet::size)
        .def("__contains__", &PointSet::contains)
        .def("add", &PointSet::add)
        .def("remove", &PointSet::remove)
        .def("indices", &PointSet::indices)
        .def("is_subset_of", &PointSet::is_subset_of)
        .def("serialize",
             [](const PointSet& P) {
                 std::ostringstream os;
                 P.serialize(os);
                 return os.str();
             })
        .def_static("deserialize",
                    [](const std::string& text) {
                        std::istringstream is(text);
                        return PointSet::deserialize(is);
                    })
        .def_static("full", &PointSet::full)
        .def("__eq__", [](const PointSet& a, const PointSet& b) { return a == b; })
        .def("__repr__", [](const PointSet& P) {
            return "PointSet(q=" + std::to_string(P.q()) +
                   ", d=" + std::to_string(P.d()) +
                   ", size=" + std::to_string(P.size()) + ")";
        });

    // geometry
    m.def("gaussian_binomial", &gaussian_binomial, py::arg("d"), py::arg("k"),
          py::arg("q"));
    m.def("flat_count", &flat_count, py::arg("d"), py::arg("k"), py::arg("q"));
    m.def("affine_rank",
          [](const Space& s, const std::vector<std::uint64_t>& pts) {
              return affine_rank(s, pts);
          },
          py::arg("space"), py::arg("points"));
    m.def("is_general_position", &is_general_position, py::arg("space"),
          py::arg("points"));
    m.def("is_evasive", &is_evasive, py::arg("space"), py::arg("points"),
          py::arg("k"), py::arg("c"));
    m.def("moment_curve", &moment_curve, py::arg("space"));

    // incidence / spectra
    m.def("analyze_spectrum",
          [](std::uint64_t q, unsigned d) {
              return spectral_dict(analyze_spectrum(Space(q, d)));
          },
          py::arg("q"), py::arg("d"),
          "Walk identity check plus closed-form and numeric second eigenvalue.");
    m.def("atypical_hyperplanes",
          [](const Space& s, const PointSet& P) {
              const AtypicalReport r = atypical_hyperplanes(build_incidence(s), P);
              py::dict out;
              out["count"] = r.count;
              out["bound"] = r.bound;
              out["window_lo"] = r.window_lo;
              out["window_hi"] = r.window_hi;
              return out;
          },
          py::arg("space"), py::arg("points"));

    // supersaturation
    m.def("count_coplanar", &count_coplanar, py::arg("space"), py::arg("points"));
    m.def("count_critical", &count_critical, py::arg("space"), py::arg("points"));
    m.def("coplanar_count_lower", &coplanar_count_lower, py::arg("q"),
          py::arg("d"), py::arg("n"));
    m.def("critical_count_lower", &critical_count_lower, py::arg("q"),
          py::arg("d"), py::arg("n"));
    m.def("triple_system_bounds",
          [](std::uint64_t q, std::uint64_t size) {
              const TripleSystemBounds b = triple_system_bounds(q, size);
              py::dict out;
              out["size_lower"] = b.size_lower;
              out["delta1_upper"] = b.delta1_upper;
              out["delta2_upper"] = b.delta2_upper;
              return out;
          },
          py::arg("q"), py::arg("size"));
    m.def("balanced_triples_profile",
          [](const Space& s, const PointSet& P) {
              const UniformHypergraph H = balanced_triples(s, P);
              const std::vector<std::uint64_t> prof = degree_profile(H);
              py::dict out;
              out["edges"] = H.edge_count();
              out["delta1"] = prof.size() > 1 ? prof[1] : 0;
              out["delta2"] = prof.size() > 2 ? prof[2] : 0;
              return out;
          },
          py::arg("space"), py::arg("points"),
          "Edge count and degree caps of the collinear-triple system.");

    // containers
    m.def("iterate_containers",
          [](std::uint64_t q, unsigned d, const std::string& strategy,
             double epsilon, std::uint64_t size_threshold, unsigned max_rounds,
             std::uint64_t node_budget) {
              ContainerParams params;
              params.strategy = parse_strategy(strategy);
              if (epsilon > 0) params.epsilon = epsilon;
              params.size_threshold = size_threshold;
              params.max_rounds = max_rounds;
              params.node_budget = node_budget;
              return family_dict(iterate_containers(q, d, params));
          },
          py::arg("q"), py::arg("d"), py::arg("strategy") = "triples",
          py::arg("epsilon") = 0.0, py::arg("size_threshold") = 0,
          py::arg("max_rounds") = 0, py::arg("node_budget") = 20'000'000,
          "Container family covering every general position set.");
    m.def("verify_family",
          [](std::uint64_t q, unsigned d,
             const std::vector<PointSet>& containers,
             const std::vector<PointSet>& samples) {
              ContainerFamily fam;
              fam.q = q;
              fam.d = d;
              fam.containers = containers;
              const FamilyReport r = verify_family(fam, samples);
              py::dict out;
              out["covered_fraction"] = r.covered_fraction;
              out["uncovered"] = r.uncovered;
              return out;
          },
          py::arg("q"), py::arg("d"), py::arg("containers"), py::arg("samples"));

    // laboratory
    m.def("sample_random_set", &sample_random_set, py::arg("q"), py::arg("d"),
          py::arg("p"), py::arg("seed"));
    m.def("alpha_exact", &alpha_exact, py::arg("space"), py::arg("points"),
          py::arg("node_budget") = 50'000'000,
          "Largest general position subset size, exact branch and bound.");
    m.def("greedy_maximal_gp", &greedy_maximal_gp, py::arg("space"),
          py::arg("points"), py::arg("order_seed"));
    m.def("phase_sweep",
          [](std::uint64_t q, unsigned d, const std::vector<double>& grid,
             unsigned trials, std::uint64_t seed, std::uint64_t node_budget) {
              py::list out;
              for (const TrialRecord& r :
                   phase_sweep(q, d, grid, trials, seed, node_budget))
                  out.append(trial_dict(r));
              return out;
          },
          py::arg("q"), py::arg("d"), py::arg("p_grid"), py::arg("trials"),
          py::arg("seed"), py::arg("node_budget") = 50'000'000);
    m.def("count_gp_sets",
          [](std::uint64_t q, unsigned d, bool by_size,
             std::uint64_t node_budget) {
              py::list out;
              for (const CountRecord& r :
                   count_gp_sets(q, d, by_size, node_budget)) {
                  py::dict row;
                  if (r.m == kTotalRow)
                      row["m"] = py::none();
                  else
                      row["m"] = r.m;
                  row["count"] = r.count;
                  out.append(row);
              }
              return out;
          },
          py::arg("q"), py::arg("d"), py::arg("by_size") = true,
          py::arg("node_budget") = 200'000'000,
          "Census of general position sets; m=None marks the total row.");
    m.def("first_moment_bound",
          [](std::uint64_t q, unsigned d,
             const std::vector<PointSet>& containers, double p,
             std::uint64_t m) {
              ContainerFamily fam;
              fam.q = q;
              fam.d = d;
              fam.containers = containers;
              return static_cast<double>(first_moment_bound(fam, p, m));
          },
          py::arg("q"), py::arg("d"), py::arg("containers"), py::arg("p"),
          py::arg("m"),
          "Union bound on the expected number of m-point general position "
          "subsets of a p-random set.");
    m.def("trials_to_csv",
          [](std::uint64_t q, unsigned d, const std::vector<double>& grid,
             unsigned trials, std::uint64_t seed) {
              return trials_to_csv(phase_sweep(q, d, grid, trials, seed));
          },
          py::arg("q"), py::arg("d"), py::arg("p_grid"), py::arg("trials"),
          py::arg("seed"), "Run a sweep and render its trial CSV.");
}
