#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "thickfold/pipeline.hpp"

using thickfold::RunConfig;
using thickfold::ScaleRequest;

namespace {

void add_scale_options(CLI::App* cmd, RunConfig& cfg, double& fraction, double& absolute) {
    auto* f = cmd->add_option("--scale-fraction", fraction,
                              "choose s' as this fraction of the upper bound s*");
    auto* a = cmd->add_option("--scale", absolute, "absolute scale s' (must not exceed s*)");
    f->excludes(a);
    a->excludes(f);
    (void)cfg;
}

void finish_scale(RunConfig& cfg, const CLI::App* cmd, double fraction, double absolute) {
    if (cmd->count("--scale")) {
        cfg.scale.kind = ScaleRequest::Kind::Absolute;
        cfg.scale.value = absolute;
    } else if (cmd->count("--scale-fraction")) {
        cfg.scale.kind = ScaleRequest::Kind::Fraction;
        cfg.scale.value = fraction;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"thickfold: turn flat-foldable crease patterns into thickened, "
                 "facet-separated folding patterns"};
    app.require_subcommand(1);

    RunConfig cfg;
    double tolerance = 1e-9;
    app.add_option("--tolerance", tolerance, "absolute geometric tolerance")
        ->capture_default_str();

    std::string weights_mode = "file";
    double fraction = 0.5, absolute = 0.0;

    auto* validate = app.add_subcommand("validate", "run the flat-folded-state checks");
    validate->add_option("input", cfg.input_path, "pattern document")->required();

    auto* thicken = app.add_subcommand("thicken", "compute the thickened crease pattern");
    thicken->add_option("input", cfg.input_path, "pattern document")->required();
    add_scale_options(thicken, cfg, fraction, absolute);
    thicken->add_option("--weights", weights_mode,
                        "auto: order-index weights; file: use the document's weights")
        ->check(CLI::IsMember({"auto", "file"}));
    thicken->add_option("-o,--output", cfg.output_path, "output path (default stdout)");

    auto* fold = app.add_subcommand("fold", "export the facet-separated folded state as OBJ");
    fold->add_option("input", cfg.input_path, "pattern document")->required();
    add_scale_options(fold, cfg, fraction, absolute);
    fold->add_option("--weights", weights_mode, "auto | file")
        ->check(CLI::IsMember({"auto", "file"}));
    fold->add_option("-o,--output", cfg.output_path, "output path (default stdout)");

    auto* solidify = app.add_subcommand("solidify", "export thick panels as OBJ");
    solidify->add_option("input", cfg.input_path, "pattern document")->required();
    solidify->add_option("--thickness", cfg.thickness, "panel thickness (<= t_max)")
        ->required();
    solidify->add_option("--split", cfg.split, "fraction of thickness above the midsurface")
        ->capture_default_str();
    add_scale_options(solidify, cfg, fraction, absolute);
    solidify->add_option("--weights", weights_mode, "auto | file")
        ->check(CLI::IsMember({"auto", "file"}));
    solidify->add_option("-o,--output", cfg.output_path, "output path (default stdout)");

    auto* exp = app.add_subcommand("export", "export the thickened pattern (svg) or folded "
                                             "state (obj)");
    exp->add_option("input", cfg.input_path, "pattern document")->required();
    exp->add_option("--format", cfg.format, "svg | obj")
        ->check(CLI::IsMember({"svg", "obj"}))
        ->capture_default_str();
    add_scale_options(exp, cfg, fraction, absolute);
    exp->add_option("--weights", weights_mode, "auto | file")
        ->check(CLI::IsMember({"auto", "file"}));
    exp->add_option("-o,--output", cfg.output_path, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    cfg.tol.eps_abs = tolerance;
    cfg.weights_auto_override = weights_mode == "auto";

    try {
        if (app.got_subcommand(validate))
            return thickfold::cmd_validate(cfg, std::cout, std::cerr);
        if (app.got_subcommand(thicken)) {
            finish_scale(cfg, thicken, fraction, absolute);
            return thickfold::cmd_thicken(cfg, std::cout, std::cerr);
        }
        if (app.got_subcommand(fold)) {
            finish_scale(cfg, fold, fraction, absolute);
            return thickfold::cmd_fold(cfg, std::cout, std::cerr);
        }
        if (app.got_subcommand(solidify)) {
            finish_scale(cfg, solidify, fraction, absolute);
            return thickfold::cmd_solidify(cfg, std::cout, std::cerr);
        }
        if (app.got_subcommand(exp)) {
            finish_scale(cfg, exp, fraction, absolute);
            return thickfold::cmd_export(cfg, std::cout, std::cerr);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return thickfold::kExitInput;
    }
    return thickfold::kExitInput;
}
