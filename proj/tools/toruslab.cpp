#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "toruslab/experiments.hpp"
#include "toruslab/io.hpp"

namespace {

using namespace toruslab;

Endomorphism resolve_map(const std::string& preset, const std::string& map_file,
                         const std::string& matrix_text) {
    if (!preset.empty()) return make_preset(preset);
    if (!map_file.empty()) return endomorphism_from_json(json::parse(read_text(map_file)));
    if (!matrix_text.empty()) return Endomorphism::linear_form(parse_matrix(matrix_text));
    throw std::invalid_argument("no map given; use --preset, --map, or --matrix");
}

void add_common(CLI::App* cmd, ExperimentConfig& cfg) {
    cmd->add_option("--out", cfg.out_dir, "output directory for report.json and artifacts");
    cmd->add_option("--seed", cfg.seed, "random stream seed");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"torus endomorphism laboratory"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string preset, map_file, matrix_text;

    CLI::App* classify = app.add_subcommand("classify", "spectral classification of an integer matrix");
    classify->add_option("--matrix", matrix_text, "matrix as \"a b ; c d\" or [[a,b],[c,d]]")
        ->required();
    add_common(classify, cfg);

    CLI::App* trans = app.add_subcommand(
        "transitivity", "symbolic-image and invariant-pair evidence across a resolution ladder");
    trans->add_option("--matrix", matrix_text, "integer matrix for a linear map");
    trans->add_option("--preset", preset, "named map preset");
    trans->add_option("--map", map_file, "JSON file describing the map");
    trans->add_option("--resolution", cfg.resolutions, "grid resolutions to test")
        ->delimiter(',');
    trans->add_option("--samples", cfg.samples, "sample points per cell axis");
    trans->add_option("--subdiv", cfg.subdiv, "preimage corner subdivision per cell axis");
    trans->add_option("--max-iter", cfg.max_iter, "saturation iteration cap");
    add_common(trans, cfg);

    CLI::App* counter = app.add_subcommand(
        "counterexample", "area-expanding map with an attracting circle; transitivity fails");
    counter->add_option("--eps", cfg.eps, "perturbation amplitude in (0, 1/(4 pi))");
    counter->add_option("--map", map_file, "JSON file overriding the built-in family");
    counter->add_option("--preset", preset, "named map preset");
    counter->add_option("--resolution", cfg.resolutions, "grid resolution (last one is used)")
        ->delimiter(',');
    counter->add_option("--steps", cfg.steps, "orbit length per start point");
    counter->add_option("--samples", cfg.samples, "sample points per cell axis");
    counter->add_option("--subdiv", cfg.subdiv, "preimage corner subdivision per cell axis");
    counter->add_option("--max-iter", cfg.max_iter, "saturation iteration cap");
    add_common(counter, cfg);

    CLI::App* demo = app.add_subcommand(
        "invariant-demo", "exhibit an invariant pair with windings, periods and sheet counts");
    demo->add_option("--matrix", matrix_text, "integer matrix for a linear map");
    demo->add_option("--preset", preset, "named map preset");
    demo->add_option("--map", map_file, "JSON file describing the map");
    demo->add_option("--resolution", cfg.resolutions, "grid resolution (last one is used)")
        ->delimiter(',');
    demo->add_option("--subdiv", cfg.subdiv, "preimage corner subdivision per cell axis");
    demo->add_option("--max-iter", cfg.max_iter, "saturation iteration cap");
    add_common(demo, cfg);

    CLI::App* hetzel = app.add_subcommand(
        "hetzel", "frequency of integer spectrum over entry windows, exact or monte carlo");
    hetzel->add_option("--windows", cfg.windows, "entry bound list")->delimiter(',');
    hetzel->add_option("--mc-samples", cfg.mc_samples, "samples when the window exceeds the exact cap");
    add_common(hetzel, cfg);

    CLI::App* loops = app.add_subcommand(
        "loop-lemma", "intersection of independent-class loops and class functoriality");
    loops->add_option("--pairs", cfg.loop_pairs, "loop pairs per check");
    loops->add_option("--matrix", matrix_text, "integer matrix for the functoriality map");
    loops->add_option("--preset", preset, "named map preset");
    loops->add_option("--map", map_file, "JSON file describing the map");
    add_common(loops, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        if (rc == 0) return 0; // --help and friends
        std::fprintf(stderr, "status=error message=\"%s\"\n", e.what());
        return kExitError;
    }

    try {
        CLI::App* chosen = app.get_subcommands().front();
        cfg.name = chosen->get_name();
        if (!matrix_text.empty()) cfg.matrix = parse_matrix(matrix_text);
        if (cfg.name == "invariant-demo" && preset.empty() && map_file.empty() && matrix_text.empty())
            preset = "example-2x-halfshift";
        const bool any_map_option = !preset.empty() || !map_file.empty() || !matrix_text.empty();
        if (cfg.name == "transitivity" || cfg.name == "invariant-demo" ||
            (any_map_option && (cfg.name == "counterexample" || cfg.name == "loop-lemma")))
            cfg.map = resolve_map(preset, map_file, matrix_text);

        const int code = run_experiment(cfg);
        const std::string report = (cfg.out_dir / "report.json").string();
        if (code == kExitConclusive)
            std::printf("status=conclusive report=%s\n", report.c_str());
        else
            std::printf("status=inconclusive report=%s\n", report.c_str());
        return code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "status=error message=\"%s\"\n", e.what());
        return kExitError;
    }
}
