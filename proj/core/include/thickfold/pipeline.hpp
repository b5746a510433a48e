#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "thickfold/io.hpp"

namespace thickfold {

// Exit-code contract shared with the CLI: scripts branch on these.
enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitInput = 2,
    kExitScale = 3,
    kExitThickness = 4,
};

struct ScaleRequest {
    enum class Kind { Fraction, Absolute } kind = Kind::Fraction;
    double value = 0.5;
};

struct RunConfig {
    std::string input_path;
    std::string output_path;  // empty = stdout
    ScaleRequest scale;
    double thickness = 0.0;
    double split = 0.5;
    bool weights_auto_override = false;  // --weights auto
    std::string format = "svg";
    Tolerance tol;
    bool suppress_relief = false;  // test hook, not exposed on the CLI
};

struct ValidationOutcome {
    std::vector<ValidationReport> reports;
    bool passed = false;
    // Populated when the flat map and layer graph could be built.
    std::optional<FlatMap> fm;
    std::optional<LayerGraph> graph;
    std::optional<VertexClass> vc;
};

ValidationOutcome validate_document(const ParsedDocument& doc, const Tolerance& tol = {});

// Full Steps 1-5 state for a validated document.
struct ThickenRun {
    ValidationOutcome validation;
    LayerGraph graph;  // heights finalized
    CreaseWidths widths;
    std::vector<CreaseAssignment> assignments;
    std::vector<VertexPolygon> polys;
    ReducedFaceClips clips;
    std::vector<TrimRecord> trims;
    std::vector<StripSide> sides;
    ScaleBound bound;
    GlobalScaleResult chosen;
    ThickenedPattern pattern;
    FoldedState3D folded;
};

struct ValidationFailed : std::runtime_error {
    explicit ValidationFailed(std::string msg) : std::runtime_error(std::move(msg)) {}
};

// Runs validation and Steps 1-5. Throws ValidationFailed (exit 1 territory),
// ThickenError (exit 3) or the input errors (exit 2).
ThickenRun run_thicken(const ParsedDocument& doc, const ScaleRequest& scale,
                       bool weights_auto_override = false, const Tolerance& tol = {});

// Command entry points used by the CLI; they print to `out` and map errors to
// the exit-code contract.
int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_thicken(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_fold(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_solidify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_export(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace thickfold
