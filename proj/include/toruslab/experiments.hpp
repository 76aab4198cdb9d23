#pragma once

#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "toruslab/hetzel.hpp"
#include "toruslab/io.hpp"
#include "toruslab/loop.hpp"
#include "toruslab/transitivity.hpp"

namespace toruslab {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kExitConclusive = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInconclusive = 2;

struct ExperimentConfig {
    std::string name;
    std::filesystem::path out_dir = "out";
    std::optional<IntMatrix2> matrix;
    std::optional<Endomorphism> map;
    std::vector<int> resolutions;
    int samples = 4;
    int subdiv = 2;
    int max_iter = 64;
    long long steps = 1000000;
    std::uint64_t seed = 1;
    double eps = 0.05;
    std::vector<int> windows = {1, 2, 3, 4, 5};
    long long mc_samples = 2000000;
    int loop_pairs = 1000;
};

namespace detail {

inline json report_header(const ExperimentConfig& cfg) {
    return {{"schema_version", kSchemaVersion}, {"experiment", cfg.name}, {"seed", cfg.seed}};
}

inline void write_report(const ExperimentConfig& cfg, const json& report) {
    std::filesystem::create_directories(cfg.out_dir);
    atomic_write_text(cfg.out_dir / "report.json", report.dump(2) + "\n");
}

inline void write_csv(const ExperimentConfig& cfg, const std::string& name,
                      const std::string& content) {
    std::filesystem::create_directories(cfg.out_dir);
    atomic_write_text(cfg.out_dir / name, content);
}

inline const char* match_name(SetMatch m) {
    switch (m) {
        case SetMatch::Exact: return "exact";
        case SetMatch::BoundaryLayer: return "boundary_layer";
        default: return "distinct";
    }
}

inline const char* pair_status_name(PairStatus s) {
    switch (s) {
        case PairStatus::Found: return "found";
        case PairStatus::Absent: return "absent";
        default: return "inconclusive";
    }
}

// Refines a verified pair to double resolution and re-checks invariance there;
// a witness that survives the finer oracle is treated as confirmed.
inline bool confirm_pair_at_double(const Endomorphism& f, const GridOpenSet& inner,
                                   const GridOpenSet& outer, int subdiv) {
    const int n2 = inner.resolution() * 2;
    const GridOpenSet a = regularize(refine(inner, 2));
    const GridOpenSet b = regularize(refine(outer, 2));
    if (a.empty() || b.empty() || !a.set_intersect(b).empty()) return false;
    GridPreimageOracle oracle(f, n2, subdiv);
    return invariance_match(oracle.preimage(a), a) != SetMatch::Distinct &&
           invariance_match(oracle.preimage(b), b) != SetMatch::Distinct;
}

} // namespace detail

inline int run_classify(const ExperimentConfig& cfg) {
    if (!cfg.matrix) throw std::invalid_argument("classify needs a matrix");
    const IntMatrix2 m = *cfg.matrix;
    const SpectralClass cls = classify(m);
    json report = detail::report_header(cfg);
    report["matrix"] = matrix_to_json(m);
    report["classification"] = classification_to_json(cls);
    if (cls.degree >= 2)
        report["all_transitive_class"] = is_all_transitive_class(cls);
    else
        report["all_transitive_class"] = nullptr;
    if (m.det() != 0) {
        json reps = json::array();
        for (const IntVec& v : coset_representatives(m)) reps.push_back(json::array({v.x, v.y}));
        report["coset_representatives"] = reps;
    }
    detail::write_report(cfg, report);
    return kExitConclusive;
}

inline int run_transitivity(const ExperimentConfig& cfg) {
    if (!cfg.map) throw std::invalid_argument("transitivity needs a map");
    const Endomorphism& f = *cfg.map;
    std::vector<int> ladder = cfg.resolutions.empty() ? std::vector<int>{16, 32, 64, 128}
                                                      : cfg.resolutions;
    json rows = json::array();
    std::ostringstream csv;
    csv << "n,scc_count,strongly_connected,pair_status,pair_iterations\n";
    bool all_consistent = true;
    bool refuted = false;
    for (int n : ladder) {
        const SymbolicImageGraph g = build_symbolic_image(f, n, cfg.samples);
        const SccSummary scc = scc_decomposition(g);
        InvariantPairResult pair = find_invariant_pair(f, n, {}, cfg.max_iter, cfg.subdiv);
        json row = {{"n", n},
                    {"scc_count", scc.count},
                    {"strongly_connected", scc.strongly_connected},
                    {"largest_scc", scc.largest},
                    {"pair_status", detail::pair_status_name(pair.status)},
                    {"pair_iterations", pair.iterations}};
        if (pair.status == PairStatus::Found) {
            row["pair_match"] = {detail::match_name(pair.match_inner),
                                 detail::match_name(pair.match_outer)};
            const bool confirmed =
                detail::confirm_pair_at_double(f, *pair.inner, *pair.outer, cfg.subdiv);
            row["confirmed_at_double_resolution"] = confirmed;
            if (confirmed) {
                refuted = true;
                write_pgm(cfg.out_dir / ("pair_inner_n" + std::to_string(n) + ".pgm"), *pair.inner);
                write_pgm(cfg.out_dir / ("pair_outer_n" + std::to_string(n) + ".pgm"), *pair.outer);
            }
        }
        if (!(scc.strongly_connected && pair.status == PairStatus::Absent)) all_consistent = false;
        rows.push_back(row);
        csv << n << ',' << scc.count << ',' << (scc.strongly_connected ? 1 : 0) << ','
            << detail::pair_status_name(pair.status) << ',' << pair.iterations << '\n';
    }
    json report = detail::report_header(cfg);
    report["map"] = endomorphism_to_json(f);
    report["resolutions"] = ladder;
    report["rows"] = rows;
    const std::string verdict = refuted          ? "non_transitive_witness"
                                : all_consistent ? "transitive_consistent"
                                                 : "inconclusive";
    report["verdict"] = verdict;
    detail::write_report(cfg, report);
    detail::write_csv(cfg, "ladder.csv", csv.str());
    return verdict == "inconclusive" ? kExitInconclusive : kExitConclusive;
}

inline int run_counterexample(const ExperimentConfig& cfg) {
    const Endomorphism f = cfg.map ? *cfg.map : make_counterexample(cfg.eps);
    const int n = cfg.resolutions.empty() ? 64 : cfg.resolutions.back();
    json report = detail::report_header(cfg);
    report["map"] = endomorphism_to_json(f);
    report["n"] = n;

    // Pointwise Jacobian floor sampled on a fine grid, next to the closed form.
    double jac_min = std::numeric_limits<double>::infinity();
    const int js = 512;
    for (int j = 0; j < js; ++j)
        for (int i = 0; i < js; ++i)
            jac_min = std::min(jac_min, f.jacobian_det({(i + 0.5) / js, (j + 0.5) / js}));
    report["jacobian_min_sampled"] = jac_min;

    const ConservativityCheck cons = check_conservative(f, 200, cfg.seed, 1e-6);
    report["conservativity"] = {{"max_deviation", cons.max_deviation}, {"pass", cons.pass}};

    Rng rng = Rng(cfg.seed).split(0x636f7665);
    json coverage = json::array();
    std::ostringstream csv;
    csv << "start_x,start_y,steps,cells_visited,fraction,exact\n";
    for (int k = 0; k < 10; ++k) {
        const TorusPoint start{rng.next_double(), rng.next_double()};
        const OrbitCoverage cov = orbit_coverage(f, start, cfg.steps, n);
        coverage.push_back({{"start", json::array({start.x, start.y})},
                            {"fraction", cov.fraction},
                            {"cells_visited", cov.cells_visited},
                            {"exact", cov.exact}});
        csv << start.x << ',' << start.y << ',' << cov.steps << ',' << cov.cells_visited << ','
            << cov.fraction << ',' << (cov.exact ? 1 : 0) << '\n';
    }
    report["orbit_coverage"] = coverage;

    const SymbolicImageGraph g = build_symbolic_image(f, n, cfg.samples);
    const SccSummary scc = scc_decomposition(g);
    report["scc"] = {{"count", scc.count}, {"strongly_connected", scc.strongly_connected}};

    InvariantPairResult pair = find_invariant_pair(f, n, {}, cfg.max_iter, cfg.subdiv);
    report["pair_status"] = detail::pair_status_name(pair.status);
    report["pair_iterations"] = pair.iterations;
    bool confirmed = false;
    if (pair.status == PairStatus::Found) {
        confirmed = detail::confirm_pair_at_double(f, *pair.inner, *pair.outer, cfg.subdiv);
        report["confirmed_at_double_resolution"] = confirmed;
        std::filesystem::create_directories(cfg.out_dir);
        write_pgm(cfg.out_dir / "pair_inner.pgm", *pair.inner);
        write_pgm(cfg.out_dir / "pair_outer.pgm", *pair.outer);
    }
    const bool witness = confirmed && !scc.strongly_connected;
    report["verdict"] = witness ? "non_transitive_witness" : "inconclusive";
    detail::write_report(cfg, report);
    detail::write_csv(cfg, "coverage.csv", csv.str());
    return witness ? kExitConclusive : kExitInconclusive;
}

inline int run_invariant_demo(const ExperimentConfig& cfg) {
    const Endomorphism f = cfg.map ? *cfg.map : make_preset("example-2x-halfshift");
    const int n = cfg.resolutions.empty() ? 8 : cfg.resolutions.back();
    json report = detail::report_header(cfg);
    report["map"] = endomorphism_to_json(f);
    report["n"] = n;

    InvariantPairResult pair = find_invariant_pair(f, n, {}, cfg.max_iter, cfg.subdiv);
    report["pair_status"] = detail::pair_status_name(pair.status);
    report["pair_iterations"] = pair.iterations;
    if (pair.status != PairStatus::Found) {
        report["verdict"] = "inconclusive";
        detail::write_report(cfg, report);
        return kExitInconclusive;
    }
    std::filesystem::create_directories(cfg.out_dir);
    write_pgm(cfg.out_dir / "pair_inner.pgm", *pair.inner);
    write_pgm(cfg.out_dir / "pair_outer.pgm", *pair.outer);
    report["pair_match"] = {detail::match_name(pair.match_inner),
                            detail::match_name(pair.match_outer)};
    report["inner_rle"] = grid_set_to_json(*pair.inner);
    report["outer_rle"] = grid_set_to_json(*pair.outer);

    const std::vector<GridOpenSet> comps = components(*pair.inner);
    json comp_rows = json::array();
    for (const GridOpenSet& c : comps) {
        const WindingVerdict wv = winding_class(c);
        json dirs = json::array();
        for (const IntVec& d : wv.directions) dirs.push_back(json::array({d.x, d.y}));
        comp_rows.push_back(
            {{"cells", c.count()},
             {"winding",
              wv.kind == WindingKind::Winding
                  ? "winding"
                  : (wv.kind == WindingKind::Elementary ? "elementary" : "undetermined")},
             {"directions", dirs},
             {"simply_connected_lift", simply_connected_lift_check(c)}});
    }
    report["inner_components"] = comp_rows;
    report["component_period"] = component_period(f, comps);

    Rng rng = Rng(cfg.seed).split(0x64656d6f);
    json sheets = json::array();
    const std::vector<IntVec> cells = pair.inner->cells();
    for (int k = 0; k < 5; ++k) {
        const IntVec cell = cells[rng.next_int(0, (long long)cells.size() - 1)];
        const TorusPoint q{((double)cell.x + 0.25 + 0.5 * rng.next_double()) / n,
                           ((double)cell.y + 0.25 + 0.5 * rng.next_double()) / n};
        const SheetCount sc = sheet_count_on_set(f, q, *pair.inner, 2);
        sheets.push_back({{"point", json::array({q.x, q.y})},
                          {"count", sc.count},
                          {"ambiguous", sc.ambiguous}});
    }
    report["two_step_sheet_counts"] = sheets;
    report["verdict"] = "pair_exhibited";
    detail::write_report(cfg, report);
    return kExitConclusive;
}

inline int run_hetzel(const ExperimentConfig& cfg) {
    json rows = json::array();
    std::ostringstream csv;
    csv << "window,trials,hits,fraction,exact\n";
    for (int w : cfg.windows) {
        const long long side = 2LL * w + 1;
        const bool exact = side * side * side * side <= kHetzelExactCap;
        const HetzelRow row = exact ? hetzel_exact(w) : hetzel_montecarlo(w, cfg.mc_samples, cfg.seed);
        rows.push_back({{"window", row.n},
                        {"trials", row.total},
                        {"hits", row.hits},
                        {"fraction", row.fraction},
                        {"exact", row.exact}});
        csv << row.n << ',' << row.total << ',' << row.hits << ',' << row.fraction << ','
            << (row.exact ? 1 : 0) << '\n';
    }
    json report = detail::report_header(cfg);
    report["rows"] = rows;
    detail::write_report(cfg, report);
    detail::write_csv(cfg, "integer_spectrum.csv", csv.str());
    return kExitConclusive;
}

inline int run_loop_lemma(const ExperimentConfig& cfg) {
    const Endomorphism f = cfg.map ? *cfg.map : make_preset("expanding-shear");
    Rng rng = Rng(cfg.seed).split(0x6c6f6f70);
    auto rand_class = [&](long long bound) {
        return IntVec{rng.next_int(-bound, bound), rng.next_int(-bound, bound)};
    };

    int independent_intersecting = 0;
    for (int k = 0; k < cfg.loop_pairs; ++k) {
        IntVec c1{0, 0}, c2{0, 0};
        while (c1.x * c2.y - c1.y * c2.x == 0) {
            c1 = rand_class(3);
            c2 = rand_class(3);
        }
        const PolyLoop l1 = PolyLoop::line({rng.next_double(), rng.next_double()}, c1);
        const PolyLoop l2 = PolyLoop::line({rng.next_double(), rng.next_double()}, c2);
        if (loops_intersect(l1, l2)) ++independent_intersecting;
    }

    int parallel_disjoint = 0;
    for (int k = 0; k < cfg.loop_pairs; ++k) {
        IntVec c{0, 0};
        while (c.x == 0 && c.y == 0) c = rand_class(3);
        const TorusPoint base{rng.next_double(), rng.next_double()};
        const PolyLoop l1 = PolyLoop::line(base, c);
        // Same class, pushed off along the normal; parallel lines on the torus.
        const double nx = -(double)c.y, ny = (double)c.x;
        const double norm = std::hypot(nx, ny);
        const double off = (0.2 + 0.6 * rng.next_double()) / norm;
        const PolyLoop l2 =
            PolyLoop::line(project({base.x + nx * off / norm, base.y + ny * off / norm}), c);
        if (!loops_intersect(l1, l2)) ++parallel_disjoint;
    }

    int functorial = 0;
    const int functorial_trials = 200;
    for (int k = 0; k < functorial_trials; ++k) {
        IntVec c{0, 0};
        while (c.x == 0 && c.y == 0) c = rand_class(2);
        const PolyLoop l = PolyLoop::line({rng.next_double(), rng.next_double()}, c);
        const PolyLoop fl = push_forward(f, l, 32);
        const IntVec expect = f.linear().apply(c);
        if (fl.homotopy_class() == expect) ++functorial;
    }

    json report = detail::report_header(cfg);
    report["map"] = endomorphism_to_json(f);
    report["independent_pairs"] = {{"trials", cfg.loop_pairs},
                                   {"intersecting", independent_intersecting}};
    report["parallel_pairs"] = {{"trials", cfg.loop_pairs}, {"disjoint", parallel_disjoint}};
    report["class_functoriality"] = {{"trials", functorial_trials}, {"agreeing", functorial}};
    const bool ok = independent_intersecting == cfg.loop_pairs && parallel_disjoint > 0 &&
                    functorial == functorial_trials;
    report["verdict"] = ok ? "supported" : "inconclusive";
    detail::write_report(cfg, report);
    std::ostringstream csv;
    csv << "check,trials,hits\n"
        << "independent_intersecting," << cfg.loop_pairs << ',' << independent_intersecting << '\n'
        << "parallel_disjoint," << cfg.loop_pairs << ',' << parallel_disjoint << '\n'
        << "class_functorial," << functorial_trials << ',' << functorial << '\n';
    detail::write_csv(cfg, "loops.csv", csv.str());
    return ok ? kExitConclusive : kExitInconclusive;
}

inline int run_experiment(const ExperimentConfig& cfg) {
    if (cfg.name == "classify") return run_classify(cfg);
    if (cfg.name == "transitivity") return run_transitivity(cfg);
    if (cfg.name == "counterexample") return run_counterexample(cfg);
    if (cfg.name == "invariant-demo") return run_invariant_demo(cfg);
    if (cfg.name == "hetzel") return run_hetzel(cfg);
    if (cfg.name == "loop-lemma") return run_loop_lemma(cfg);
    throw std::invalid_argument("unknown experiment: " + cfg.name);
}

} // namespace toruslab
