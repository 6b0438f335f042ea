#include "eit/app/commands.hpp"
#include "eit/app/config.hpp"
#include "eit/errors.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <optional>

using namespace eit;
using namespace eit::app;

int main(int argc, char** argv) {
    CLI::App app{"Linearized EIT inversion and electrode design"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    bool emit_svg = false;
    std::optional<int> trials;
    std::optional<double> epsilon;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--seed", seed, "base seed for data and Monte Carlo trials");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--emit-svg", emit_svg, "write box-plot SVGs");
    app.add_option("--trials", trials, "Monte Carlo trials per design");
    app.add_option("--epsilon", epsilon, "relative noise level");

    auto* forward = app.add_subcommand("forward", "evaluate the forward map");
    bool noisy = false;
    forward->add_flag("--noisy", noisy, "add noise of relative size epsilon");

    auto* invert = app.add_subcommand("invert", "regularized inversion of a data file");
    std::string data_path;
    std::optional<double> lambda;
    invert->add_option("--data", data_path, "data file (default <out>/data.json)");
    invert->add_option("--lambda", lambda, "fixed penalty weight instead of the discrepancy principle");

    auto* design = app.add_subcommand("design", "optimize electrode positions");
    std::string inversion_path;
    std::optional<int> budget;
    design->add_option("--inversion", inversion_path, "inversion file (default <out>/inversion.json)");
    design->add_option("--budget", budget, "criterion evaluations");

    auto* mc = app.add_subcommand("mc", "Monte Carlo study at fixed electrodes and penalty weight");
    McArgs mc_args;
    std::string mc_design, mc_inversion;
    mc->add_option("--label", mc_args.label, "study label used in file names");
    mc->add_option("--design", mc_design, "design file whose phi_opt is used");
    mc->add_option("--inversion", mc_inversion, "inversion file whose lambda is used");
    mc->add_option("--lambda", mc_args.lambda, "penalty weight");

    auto* pipeline = app.add_subcommand("pipeline", "full two-stage design study");
    auto* diag = app.add_subcommand("diag-oracle", "compare the forward map with the quadrature oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (seed) config.base_seed = *seed;
        if (out_dir) config.output_dir = *out_dir;
        if (emit_svg) config.emit_svg = true;
        if (trials) config.trials = *trials;
        if (epsilon) config.epsilon = *epsilon;
        if (budget) config.design_evaluations = *budget;
        validate(config);

        if (*forward) {
            cmd_forward(config, noisy, std::cout);
        } else if (*invert) {
            cmd_invert(config, data_path.empty() ? config.output_dir / "data.json" : std::filesystem::path(data_path), lambda, std::cout);
        } else if (*design) {
            cmd_design(config, inversion_path.empty() ? config.output_dir / "inversion.json" : std::filesystem::path(inversion_path),
                       std::cout);
        } else if (*mc) {
            if (!mc_design.empty()) mc_args.design_path = mc_design;
            if (!mc_inversion.empty()) mc_args.inversion_path = mc_inversion;
            cmd_mc(config, mc_args, std::cout);
        } else if (*pipeline) {
            cmd_pipeline(config, std::cout);
        } else if (*diag) {
            cmd_diag_oracle(config, std::cout);
        }
    } catch (...) {
        return report_exception(std::cerr);
    }
    return kExitOk;
}
