// gpfq: experiment runner for general position sets over finite fields.
//
// Subcommands: spectra, supersat, containers, simulate, count, plot.
// Every CSV output starts with a "# schema: ..." comment line and a header
// row; floats carry 17 significant digits so identical seeds reproduce
// identical bytes.  Exit codes: 0 success, 1 failed verification, 2 invalid
// arguments, 3 budget exceeded (partial output written when one exists).

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gpfq/containers.hpp"
#include "gpfq/errors.hpp"
#include "gpfq/field.hpp"
#include "gpfq/geometry.hpp"
#include "gpfq/incidence.hpp"
#include "gpfq/lab.hpp"
#include "gpfq/supersat.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kBadArgs = 2;
constexpr int kBudget = 3;

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << content;
}

// Deterministic sample of exactly `size` distinct points.
gpfq::PointSet sample_exact(const gpfq::Space& s, std::uint64_t size,
                            std::uint64_t seed) {
    const std::uint64_t n = s.point_count();
    if (size > n)
        throw std::invalid_argument("--size exceeds the number of points");
    std::vector<std::uint64_t> order(n);
    for (std::uint64_t i = 0; i < n; ++i) order[i] = i;
    for (std::uint64_t i = n; i > 1; --i)
        std::swap(order[i - 1], order[mix64(seed ^ (i * 0x9275)) % i]);
    gpfq::PointSet P(s);
    for (std::uint64_t i = 0; i < size; ++i) P.add(order[i]);
    return P;
}

// ---------------------------------------------------------------- spectra --

int run_spectra(std::uint64_t q, unsigned d, const std::string& out) {
    const gpfq::SpectralReport r = gpfq::analyze_spectrum(gpfq::Space(q, d));
    std::string csv = "# schema: gpfq.spectra.v1\n";
    csv += "q,d,delta1,delta2,cube_ok,cube_sampled,entries_checked,"
           "mismatches,lambda2_closed,lambda2_numeric,numeric_ran\n";
    csv += std::to_string(r.q) + ',' + std::to_string(r.d) + ',';
    csv += std::to_string(r.delta1) + ',' + std::to_string(r.delta2) + ',';
    csv += std::string(r.cube.ok ? "1" : "0") + ',';
    csv += std::string(r.cube.sampled ? "1" : "0") + ',';
    csv += std::to_string(r.cube.entries_checked) + ',';
    csv += std::to_string(r.cube.mismatches) + ',';
    csv += fmt_double(r.lambda2_closed) + ',';
    csv += fmt_double(r.lambda2_numeric) + ',';
    csv += r.numeric_ran ? '1' : '0';
    csv += '\n';
    write_text(out, csv);
    return r.cube.ok ? kOk : kVerifyFailed;
}

// --------------------------------------------------------------- supersat --

int run_supersat(std::uint64_t q, unsigned d, const std::string& mode,
                 std::uint64_t size, unsigned trials, std::uint64_t seed,
                 const std::string& out) {
    const gpfq::Space s(q, d);
    std::string csv;
    if (mode == "triples")
        csv = "# schema: gpfq.supersat.triples.v1\n"
              "mode,q,d,trial,seed,size,edges,delta1,delta2,"
              "size_lower,delta1_upper,delta2_upper\n";
    else
        csv = "# schema: gpfq.supersat.count.v1\n"
              "mode,q,d,trial,seed,size,count,lower_bound\n";

    bool budget_hit = false;
    for (unsigned t = 0; t < trials && !budget_hit; ++t) {
        const std::uint64_t trial_seed = seed ^ t;
        const gpfq::PointSet P = sample_exact(s, size, trial_seed);
        try {
            csv += mode + ',' + std::to_string(q) + ',' + std::to_string(d) +
                   ',' + std::to_string(t) + ',' + std::to_string(trial_seed) +
                   ',' + std::to_string(P.size()) + ',';
            if (mode == "triples") {
                const gpfq::UniformHypergraph H = gpfq::balanced_triples(s, P);
                const auto profile = gpfq::degree_profile(H);
                const gpfq::TripleSystemBounds b =
                    gpfq::triple_system_bounds(q, P.size());
                csv += std::to_string(H.edge_count()) + ',';
                csv += std::to_string(profile.size() > 1 ? profile[1] : 0) + ',';
                csv += std::to_string(profile.size() > 2 ? profile[2] : 0) + ',';
                csv += fmt_double(b.size_lower) + ',';
                csv += fmt_double(b.delta1_upper) + ',';
                csv += fmt_double(b.delta2_upper) + '\n';
            } else {
                const std::uint64_t count =
                    mode == "coplanar" ? gpfq::count_coplanar(s, P)
                                       : gpfq::count_critical(s, P);
                double bound = std::nan("");
                try {
                    bound = mode == "coplanar"
                                ? gpfq::coplanar_count_lower(q, d, P.size())
                                : gpfq::critical_count_lower(q, d, P.size());
                } catch (const gpfq::PreconditionFailed&) {
                    // The explicit bound needs a larger set; report nan.
                }
                csv += std::to_string(count) + ',' + fmt_double(bound) + '\n';
            }
        } catch (const gpfq::BudgetExceeded& e) {
            std::cerr << "supersat: " << e.what() << " (trial " << t
                      << "); writing partial output\n";
            // Drop the half-written row.
            csv.erase(csv.find_last_of('\n', csv.size() - 2) + 1);
            budget_hit = true;
        }
    }
    write_text(out, csv);
    return budget_hit ? kBudget : kOk;
}

// ------------------------------------------------------------- containers --

int run_containers(std::uint64_t q, unsigned d, const std::string& strategy,
                   double epsilon, double tau_scale, std::uint64_t threshold,
                   std::uint64_t node_budget, unsigned audit_samples,
                   std::uint64_t seed, const std::string& out_dir) {
    gpfq::ContainerParams params;
    params.epsilon = epsilon;
    params.tau_scale = tau_scale;
    params.size_threshold = threshold;
    params.node_budget = node_budget;
    if (strategy == "triples")
        params.strategy = gpfq::SupersatStrategy::BalancedTriples;
    else if (strategy == "coplanar")
        params.strategy = gpfq::SupersatStrategy::Coplanar;
    else
        params.strategy = gpfq::SupersatStrategy::Critical;

    const gpfq::ContainerFamily fam = gpfq::iterate_containers(q, d, params);

    // Family: one serialized point set per container.
    std::ostringstream family;
    family << "# gpfq container family q=" << q << " d=" << d
           << " strategy=" << strategy << " containers="
           << fam.containers.size() << " rounds=" << fam.rounds
           << " complete=" << (fam.complete ? 1 : 0) << '\n';
    for (const gpfq::PointSet& C : fam.containers) C.serialize(family);

    // Build log: one JSON object per line.
    std::string log;
    for (const gpfq::RoundRecord& r : fam.log) {
        nlohmann::json j{{"event", "round"},
                         {"round", r.round},
                         {"containers", r.container_count},
                         {"max_container_size", r.max_container_size},
                         {"edges", r.edges},
                         {"nodes", r.nodes},
                         {"min_fingerprint", r.min_fingerprint},
                         {"max_fingerprint", r.max_fingerprint},
                         {"max_epsilon_measured", r.max_epsilon_measured},
                         {"tau", r.tau},
                         {"delta", r.delta_value},
                         {"stuck", r.stuck}};
        log += j.dump() + '\n';
    }
    nlohmann::json summary{{"event", "summary"},
                           {"q", q},
                           {"d", d},
                           {"strategy", strategy},
                           {"epsilon", params.epsilon},
                           {"tau_scale", params.tau_scale},
                           {"threshold", params.size_threshold},
                           {"rounds", fam.rounds},
                           {"containers", fam.containers.size()},
                           {"complete", fam.complete}};
    log += summary.dump() + '\n';

    if (out_dir.empty()) {
        std::cout << log;
    } else {
        std::filesystem::create_directories(out_dir);
        write_text(out_dir + "/family.txt", family.str());
        write_text(out_dir + "/log.jsonl", log);
    }

    if (audit_samples > 0) {
        const gpfq::Space s(q, d);
        std::vector<gpfq::PointSet> samples;
        samples.reserve(audit_samples);
        for (unsigned i = 0; i < audit_samples; ++i)
            samples.push_back(gpfq::greedy_maximal_gp(
                s, gpfq::PointSet::full(s), mix64(seed ^ i)));
        const gpfq::FamilyReport rep = gpfq::verify_family(fam, samples);
        std::cerr << "audit: " << audit_samples
                  << " maximal general position samples, covered fraction "
                  << fmt_double(rep.covered_fraction) << '\n';
        if (rep.covered_fraction < 1.0) return kVerifyFailed;
    }
    return fam.complete ? kOk : kBudget;
}

// --------------------------------------------------------------- simulate --

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> grid;
    auto parse_parts = [&spec](std::size_t from) {
        std::vector<std::string> parts;
        std::string cur;
        for (std::size_t i = from; i <= spec.size(); ++i) {
            if (i == spec.size() || spec[i] == ':') {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur += spec[i];
            }
        }
        return parts;
    };
    if (spec.rfind("log:", 0) == 0 || spec.rfind("lin:", 0) == 0) {
        const bool logarithmic = spec[1] == 'o';
        const auto parts = parse_parts(4);
        if (parts.size() != 3)
            throw std::invalid_argument("--p-grid: expected " +
                                        spec.substr(0, 4) + "LO:HI:N");
        const double lo = std::stod(parts[0]);
        const double hi = std::stod(parts[1]);
        const unsigned n = static_cast<unsigned>(std::stoul(parts[2]));
        if (n < 2 || hi <= lo || (logarithmic && lo <= 0.0))
            throw std::invalid_argument("--p-grid: degenerate range");
        for (unsigned i = 0; i < n; ++i) {
            const double f = static_cast<double>(i) / (n - 1);
            grid.push_back(logarithmic
                               ? lo * std::pow(hi / lo, f)
                               : lo + (hi - lo) * f);
        }
        return grid;
    }
    std::string cur;
    for (std::size_t i = 0; i <= spec.size(); ++i) {
        if (i == spec.size() || spec[i] == ',') {
            if (!cur.empty()) grid.push_back(std::stod(cur));
            cur.clear();
        } else {
            cur += spec[i];
        }
    }
    if (grid.empty()) throw std::invalid_argument("--p-grid: empty grid");
    return grid;
}

int run_simulate(std::uint64_t q, unsigned d, const std::string& grid_spec,
                 unsigned trials, std::uint64_t seed, std::uint64_t budget,
                 const std::string& out, std::string slopes_out) {
    const std::vector<double> grid = parse_grid(grid_spec);
    const std::vector<gpfq::TrialRecord> records =
        gpfq::phase_sweep(q, d, grid, trials, seed, budget);
    write_text(out, gpfq::trials_to_csv(records));
    if (slopes_out.empty() && !out.empty()) slopes_out = out + ".slopes.csv";
    write_text(slopes_out, gpfq::slopes_to_csv(gpfq::sweep_slope_report(records)));
    return kOk;
}

// ------------------------------------------------------------------ count --

int run_count(std::uint64_t q, unsigned d, bool by_size, std::uint64_t budget,
              const std::string& out) {
    try {
        write_text(out,
                   gpfq::counts_to_csv(gpfq::count_gp_sets(q, d, by_size, budget)));
    } catch (const gpfq::BudgetExceeded& e) {
        std::cerr << "count: " << e.what() << "; writing header-only output\n";
        write_text(out, gpfq::counts_to_csv({}));
        return kBudget;
    }
    return kOk;
}

// ------------------------------------------------------------------- plot --

std::vector<gpfq::TrialRecord> read_trials_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line.rfind("# schema: gpfq.trial.v1", 0) != 0)
        throw std::invalid_argument(path + ": not a gpfq.trial.v1 file");
    if (!std::getline(is, line))
        throw std::invalid_argument(path + ": missing header row");
    std::vector<gpfq::TrialRecord> records;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f;
        std::string cur;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                f.push_back(cur);
                cur.clear();
            } else {
                cur += line[i];
            }
        }
        if (f.size() < 9)
            throw std::invalid_argument(path + ": short row: " + line);
        gpfq::TrialRecord r;
        r.q = std::stoull(f[0]);
        r.d = static_cast<unsigned>(std::stoul(f[1]));
        r.p = std::stod(f[2]);
        r.seed = std::stoull(f[3]);
        r.sample_size = std::stoull(f[4]);
        r.alpha_lower = std::stoull(f[5]);
        r.alpha_upper = std::stoull(f[6]);
        r.alpha_exact_flag = f[7] == "1";
        r.coplanar_count = std::stoull(f[8]);
        records.push_back(r);
    }
    if (records.empty()) throw std::invalid_argument(path + ": no data rows");
    return records;
}

int run_plot(const std::string& in, const std::string& out) {
    const std::vector<gpfq::TrialRecord> records = read_trials_csv(in);
    const std::vector<gpfq::SweepPoint> pts = gpfq::summarize_sweep(records);

    // Log-log curves of median alpha and median sample size against p.
    // Points with p = 0 or a zero median cannot be drawn on log axes.
    struct XY {
        double x, y;
    };
    std::vector<XY> alpha_xy, size_xy;
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool first = true;
    auto take = [&](double p, double v, std::vector<XY>& dst) {
        if (p <= 0.0 || v <= 0.0) return;
        const XY pt{std::log10(p), std::log10(v)};
        dst.push_back(pt);
        if (first) {
            xmin = xmax = pt.x;
            ymin = ymax = pt.y;
            first = false;
        } else {
            xmin = std::min(xmin, pt.x);
            xmax = std::max(xmax, pt.x);
            ymin = std::min(ymin, pt.y);
            ymax = std::max(ymax, pt.y);
        }
    };
    for (const gpfq::SweepPoint& pt : pts) {
        take(pt.p, pt.median_alpha, alpha_xy);
        take(pt.p, pt.median_size, size_xy);
    }
    if (alpha_xy.empty())
        throw std::invalid_argument("plot: no positive medians to draw");
    if (xmax - xmin < 1e-9) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-9) ymax = ymin + 1.0;

    const double W = 720, H = 480, L = 70, R = 20, T = 30, B = 50;
    auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto sy = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };
    auto poly = [&](const std::vector<XY>& xy, const char* color,
                    const char* dash) {
        std::string p = "  <polyline fill=\"none\" stroke=\"";
        p += color;
        p += "\" stroke-width=\"2\"";
        if (*dash) p += std::string(" stroke-dasharray=\"") + dash + "\"";
        p += " points=\"";
        char buf[64];
        for (const XY& pt : xy) {
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(pt.x), sy(pt.y));
            p += buf;
        }
        p += "\"/>\n";
        return p;
    };

    std::string svg;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" "
                  "height=\"%g\" viewBox=\"0 0 %g %g\">\n",
                  W, H, W, H);
    svg += buf;
    svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // Axes.
    std::snprintf(buf, sizeof buf,
                  "  <line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" "
                  "stroke=\"black\"/>\n",
                  L, H - B, W - R, H - B);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "  <line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" "
                  "stroke=\"black\"/>\n",
                  L, T, L, H - B);
    svg += buf;
    // Decade ticks.
    for (int e = static_cast<int>(std::ceil(xmin)); e <= std::floor(xmax); ++e) {
        std::snprintf(buf, sizeof buf,
                      "  <line x1=\"%.2f\" y1=\"%g\" x2=\"%.2f\" y2=\"%g\" "
                      "stroke=\"black\"/>\n  <text x=\"%.2f\" y=\"%g\" "
                      "font-size=\"12\" text-anchor=\"middle\">1e%d</text>\n",
                      sx(e), H - B, sx(e), H - B + 6, sx(e), H - B + 20, e);
        svg += buf;
    }
    for (int e = static_cast<int>(std::ceil(ymin)); e <= std::floor(ymax); ++e) {
        std::snprintf(buf, sizeof buf,
                      "  <line x1=\"%g\" y1=\"%.2f\" x2=\"%g\" y2=\"%.2f\" "
                      "stroke=\"black\"/>\n  <text x=\"%g\" y=\"%.2f\" "
                      "font-size=\"12\" text-anchor=\"end\">1e%d</text>\n",
                      L - 6, sy(e), L, sy(e), L - 10, sy(e) + 4, e);
        svg += buf;
    }
    svg += poly(size_xy, "#888888", "6,4");
    svg += poly(alpha_xy, "#c0392b", "");
    std::snprintf(buf, sizeof buf,
                  "  <text x=\"%g\" y=\"%g\" font-size=\"14\">log p vs log "
                  "median: alpha (red), sample size (grey, dashed); q=%llu "
                  "d=%u</text>\n",
                  L, T - 10, static_cast<unsigned long long>(records[0].q),
                  records[0].d);
    svg += buf;
    svg += "</svg>\n";
    write_text(out, svg);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"experiment harness for general position sets over F_q^d"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "key = value file; explicit flags take precedence");

    std::uint64_t q = 5;
    unsigned d = 2;
    std::string out, out_dir, mode = "coplanar", strategy = "triples";
    std::string grid_spec = "log:0.01:1:8", in_file, slopes_out;
    std::uint64_t size = 10, seed = 1, threshold = 0;
    std::uint64_t sim_budget = 50'000'000, count_budget = 200'000'000;
    std::uint64_t step_budget = 20'000'000;
    unsigned trials = 10, audit_samples = 0;
    double epsilon = 0.36787944117144233, tau_scale = 1.0;
    bool by_size = false;

    auto* spectra = app.add_subcommand(
        "spectra", "incidence graph walk identity and second eigenvalue");
    spectra->add_option("--q", q, "field order (prime power)")->required();
    spectra->add_option("--d", d, "dimension (>= 2)")->required();
    spectra->add_option("--out", out, "output CSV path (default: stdout)");

    auto* supersat = app.add_subcommand(
        "supersat", "forced substructure counts on random point sets");
    supersat->add_option("--q", q)->required();
    supersat->add_option("--d", d)->required();
    supersat->add_option("--mode", mode, "triples | coplanar | critical")
        ->check(CLI::IsMember({"triples", "coplanar", "critical"}));
    supersat->add_option("--size", size, "points per sample")->required();
    supersat->add_option("--trials", trials, "number of samples");
    supersat->add_option("--seed", seed, "base seed (trial t uses seed XOR t)");
    supersat->add_option("--out", out, "output CSV path (default: stdout)");

    auto* containers = app.add_subcommand(
        "containers", "iterated container families for the chosen scheme");
    containers->add_option("--q", q)->required();
    containers->add_option("--d", d)->required();
    containers->add_option("--strategy", strategy,
                           "triples | coplanar | critical")
        ->check(CLI::IsMember({"triples", "coplanar", "critical"}));
    containers->add_option("--epsilon", epsilon, "sparsity target in (0, 1/2)");
    containers->add_option("--tau-scale", tau_scale,
                           "scale on the scheme's diagnostic tau");
    containers->add_option("--threshold", threshold,
                           "stop once every container is this small (0: auto)");
    containers->add_option("--node-budget", step_budget,
                           "branch-tree nodes per refinement step");
    containers->add_option("--audit-samples", audit_samples,
                           "verify coverage on this many maximal samples");
    containers->add_option("--seed", seed, "seed for the audit samples");
    containers->add_option("--out", out_dir,
                           "output directory for family.txt and log.jsonl");

    auto* simulate = app.add_subcommand(
        "simulate", "random set sweep: alpha bounds per probability");
    simulate->add_option("--q", q)->required();
    simulate->add_option("--d", d)->required();
    simulate->add_option("--p-grid", grid_spec,
                         "comma list, or log:LO:HI:N / lin:LO:HI:N");
    simulate->add_option("--trials", trials, "trials per grid point");
    simulate->add_option("--seed", seed, "base seed (trial t uses seed XOR t)");
    simulate->add_option("--budget", sim_budget,
                         "exact-solver node budget per trial");
    simulate->add_option("--out", out, "trials CSV path (default: stdout)");
    simulate->add_option("--slopes-out", slopes_out,
                         "slope report path (default: <out>.slopes.csv)");

    auto* count = app.add_subcommand(
        "count", "exact census of general position sets");
    count->add_option("--q", q)->required();
    count->add_option("--d", d)->required();
    count->add_flag("--by-size", by_size, "one row per set size");
    count->add_option("--budget", count_budget, "census node budget");
    count->add_option("--out", out, "output CSV path (default: stdout)");

    auto* plot = app.add_subcommand(
        "plot", "render a sweep CSV as a log-log SVG phase diagram");
    plot->add_option("--in", in_file, "trials CSV from `simulate`")->required();
    plot->add_option("--out", out, "output SVG path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadArgs;
    }

    try {
        if (spectra->parsed()) return run_spectra(q, d, out);
        if (supersat->parsed())
            return run_supersat(q, d, mode, size, trials, seed, out);
        if (containers->parsed())
            return run_containers(q, d, strategy, epsilon, tau_scale, threshold,
                                  step_budget, audit_samples, seed, out_dir);
        if (simulate->parsed())
            return run_simulate(q, d, grid_spec, trials, seed, sim_budget, out,
                                slopes_out);
        if (count->parsed())
            return run_count(q, d, by_size, count_budget, out);
        if (plot->parsed()) return run_plot(in_file, out);
    } catch (const gpfq::BudgetExceeded& e) {
        std::cerr << "gpfq: " << e.what() << '\n';
        return kBudget;
    } catch (const gpfq::RoundLimit& e) {
        std::cerr << "gpfq: " << e.what() << '\n';
        return kBudget;
    } catch (const gpfq::NotPrimePower& e) {
        std::cerr << "gpfq: " << e.what() << '\n';
        return kBadArgs;
    } catch (const gpfq::WrongDimension& e) {
        std::cerr << "gpfq: " << e.what() << '\n';
        return kBadArgs;
    } catch (const gpfq::PreconditionFailed& e) {
        std::cerr << "gpfq: " << e.what() << '\n';
        return kBadArgs;
    } catch (const gpfq::MixedAmbient& e) {
        std::cerr << "gpfq: " << e.what() << '\n';
        return kBadArgs;
    } catch (const std::invalid_argument& e) {
        std::cerr << "gpfq: " << e.what() << '\n';
        return kBadArgs;
    } catch (const std::exception& e) {
        std::cerr << "gpfq: " << e.what() << '\n';
        return 1;
    }
    return kOk;
}
