#include "thickfold/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace thickfold {

ValidationOutcome validate_document(const ParsedDocument& doc, const Tolerance& tol) {
    ValidationOutcome out;
    const CreasePattern& cp = doc.pattern;

    VertexClass vc;
    try {
        vc = classify_vertices(cp, tol);
    } catch (const PatternError& e) {
        ValidationReport rep{"structure"};
        rep.fail(e.what());
        out.reports.push_back(rep);
        out.passed = false;
        return out;
    }
    out.vc = vc;

    out.reports.push_back(check_convex_faces(cp, tol));
    out.reports.push_back(check_kawasaki(cp, vc, tol));
    bool structural = out.reports[0].passed() && out.reports[1].passed();

    ValidationReport flat_rep{"flat_map"};
    std::optional<FlatMap> fm;
    if (structural) {
        try {
            fm = compute_flat_map(cp, tol);
        } catch (const FlatStateError& e) {
            flat_rep.fail(e.what());
        }
    } else {
        flat_rep.fail("skipped: structural checks failed");
    }
    out.reports.push_back(flat_rep);

    ValidationReport acyclic_rep{"acyclicity"};
    std::optional<LayerGraph> graph;
    if (fm) {
        try {
            graph = build_layer_graph(cp, *fm, doc.layer_order, tol);
        } catch (const FlatStateError& e) {
            acyclic_rep.fail(e.what());
        }
    } else {
        acyclic_rep.fail("skipped: no flat map");
    }
    out.reports.push_back(acyclic_rep);

    if (graph) {
        out.reports.push_back(check_self_intersection(cp, *fm, *graph, tol));
        out.reports.push_back(check_non_wrapping(cp, *fm, *graph, tol));
    } else {
        ValidationReport si{"self_intersection"};
        si.fail("skipped: no layer graph");
        ValidationReport nw{"non_wrapping"};
        nw.fail("skipped: no layer graph");
        out.reports.push_back(si);
        out.reports.push_back(nw);
    }

    out.fm = std::move(fm);
    out.graph = std::move(graph);
    out.passed = true;
    for (const auto& rep : out.reports) out.passed = out.passed && rep.passed();
    return out;
}

ThickenRun run_thicken(const ParsedDocument& doc, const ScaleRequest& scale,
                       bool weights_auto_override, const Tolerance& tol) {
    ThickenRun run;
    run.validation = validate_document(doc, tol);
    if (!run.validation.passed) {
        std::string why;
        for (const auto& rep : run.validation.reports)
            if (!rep.passed()) why += (why.empty() ? "" : "; ") + rep.summary();
        throw ValidationFailed(why);
    }
    const CreasePattern& cp = doc.pattern;
    const FlatMap& fm = *run.validation.fm;

    WeightSpec weights = doc.weights;
    if (weights_auto_override) weights = WeightSpec{};
    WeightResult wr = assign_weights(cp, *run.validation.graph, weights, tol);
    run.graph = std::move(wr.graph);
    run.widths = std::move(wr.widths);
    run.assignments = derive_crease_assignment(cp, fm, run.graph);

    const VertexClass& vc = *run.validation.vc;
    run.polys = build_all_vertex_polygons(cp, vc, run.widths, tol);
    run.clips = base_face_clips(cp, run.widths);
    for (auto& poly : run.polys) {
        auto trims = clip_vertex_polygon(cp, vc, run.widths, poly, run.clips, tol);
        run.trims.insert(run.trims.end(), trims.begin(), trims.end());
    }
    run.sides = build_strip_sides(cp, run.polys, run.widths, tol);

    ScaleBound prelim = scale_upper_bound(cp, run.sides, run.clips, tol);
    auto refine_trims = refine(cp, run.sides, run.clips, prelim.s_star, tol);
    run.trims.insert(run.trims.end(), refine_trims.begin(), refine_trims.end());
    run.bound = refine_trims.empty() ? prelim
                                     : scale_upper_bound(cp, run.sides, run.clips, tol);

    double requested = scale.kind == ScaleRequest::Kind::Fraction
                           ? scale.value * run.bound.s_star
                           : scale.value;
    if (scale.kind == ScaleRequest::Kind::Fraction && (scale.value <= 0.0 || scale.value > 1.0))
        throw ThickenError("scale fraction must lie in (0, 1]");
    if (requested > run.bound.s_star * (1.0 + 1e-12))
        throw ThickenError("requested scale " + fmt_real(requested) + " exceeds s* = " +
                           fmt_real(run.bound.s_star));

    run.chosen = find_global_scale(cp, fm, run.graph, run.widths, run.sides, run.clips,
                                   run.bound.s_star, requested, tol);
    run.pattern = layout_pattern(cp, run.polys, run.sides, run.clips, run.assignments,
                                 run.widths, run.trims, run.chosen.scale, tol);
    run.folded = build_folded_state(cp, fm, run.graph, run.widths, run.sides, run.clips,
                                    run.chosen.scale, tol);
    return run;
}

namespace {

std::optional<ParsedDocument> load_document(const RunConfig& cfg, std::ostream& err) {
    std::ifstream in(cfg.input_path);
    if (!in) {
        err << "error: cannot open " << cfg.input_path << "\n";
        return std::nullopt;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_pattern(buf.str(), cfg.tol);
}

bool write_output(const RunConfig& cfg, const std::string& payload, std::ostream& out,
                  std::ostream& err) {
    if (cfg.output_path.empty()) {
        out << payload;
        return true;
    }
    std::ofstream f(cfg.output_path, std::ios::binary);
    if (!f) {
        err << "error: cannot write " << cfg.output_path << "\n";
        return false;
    }
    f << payload;
    return true;
}

int count_nondegenerate_holes(const ThickenedPattern& tp) {
    int n = 0;
    for (const auto& hg : tp.holes)
        if (!hg.degenerate) ++n;
    return n;
}

void print_summary(const ThickenRun& run, std::ostream& out) {
    out << "s* = " << fmt_real(run.bound.s_star);
    if (std::isfinite(run.bound.s_eq2))
        out << " (offset-length bound " << fmt_real(run.bound.s_eq2) << ", positivity cap "
            << fmt_real(run.bound.positivity_cap) << ")";
    else
        out << " (positivity cap " << fmt_real(run.bound.positivity_cap)
            << ", no offset-length bound)";
    out << "\n";
    out << "s' = " << fmt_real(run.chosen.scale) << " after " << run.chosen.probes
        << " probe(s)\n";
    out << "crease widths:";
    for (std::size_t c = 0; c < run.widths.width.size(); ++c)
        out << " " << c << ":" << fmt_real(run.widths.width[c]) << "("
            << (run.assignments[c] == CreaseAssignment::Valley ? "V" : "M") << ")";
    out << "\n";
    out << "regions: " << run.pattern.reduced_faces.size() << " reduced faces, "
        << run.pattern.strips.size() << " strips, " << count_nondegenerate_holes(run.pattern)
        << " holes";
    if (!run.pattern.trims.empty()) out << ", " << run.pattern.trims.size() << " trims";
    out << "\n";
}

// Shared driver: parse + validate + thicken with the exit-code mapping.
int run_pipeline(const RunConfig& cfg, std::ostream& out, std::ostream& err,
                 std::optional<ThickenRun>& run, std::optional<ParsedDocument>& doc) {
    try {
        doc = load_document(cfg, err);
        if (!doc) return kExitInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
    try {
        run = run_thicken(*doc, cfg.scale, cfg.weights_auto_override, cfg.tol);
    } catch (const ValidationFailed& e) {
        err << "validation failed: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ThickenError& e) {
        err << "scale error: " << e.what() << "\n";
        return kExitScale;
    } catch (const FlatStateError& e) {
        err << "validation failed: " << e.what() << "\n";
        return kExitValidation;
    }
    (void)out;
    return kExitOk;
}

}  // namespace

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::optional<ParsedDocument> doc;
    try {
        doc = load_document(cfg, err);
        if (!doc) return kExitInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
    ValidationOutcome outcome = validate_document(*doc, cfg.tol);
    for (const auto& rep : outcome.reports) out << rep.summary() << "\n";
    out << (outcome.passed ? "all checks passed" : "validation failed") << "\n";
    return outcome.passed ? kExitOk : kExitValidation;
}

int cmd_thicken(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::optional<ThickenRun> run;
    std::optional<ParsedDocument> doc;
    int rc = run_pipeline(cfg, out, err, run, doc);
    if (rc != kExitOk) return rc;
    std::string payload = write_thickened_json(*doc, run->pattern);
    if (!write_output(cfg, payload, out, err)) return kExitInput;
    if (!cfg.output_path.empty()) print_summary(*run, out);
    else print_summary(*run, err);
    return kExitOk;
}

int cmd_fold(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::optional<ThickenRun> run;
    std::optional<ParsedDocument> doc;
    int rc = run_pipeline(cfg, out, err, run, doc);
    if (rc != kExitOk) return rc;
    ValidationReport rep = check_folded_intersections(run->folded, cfg.tol);
    std::string payload = export_obj_fold(run->folded, cfg.tol);
    if (!write_output(cfg, payload, out, err)) return kExitInput;
    std::ostream& log = cfg.output_path.empty() ? err : out;
    print_summary(*run, log);
    log << rep.summary() << "\n";
    return kExitOk;
}

int cmd_solidify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::optional<ThickenRun> run;
    std::optional<ParsedDocument> doc;
    int rc = run_pipeline(cfg, out, err, run, doc);
    if (rc != kExitOk) return rc;
    ThicknessConfig tc;
    tc.t = cfg.thickness;
    tc.split = cfg.split;
    tc.suppress_relief = cfg.suppress_relief;
    SolidModel sm;
    try {
        sm = apply_thickness(doc->pattern, run->pattern, run->folded, run->graph, tc, cfg.tol);
    } catch (const SolidError& e) {
        err << "thickness error: " << e.what() << "\n";
        return kExitThickness;
    }
    ValidationReport rep = check_solid_local(sm, cfg.tol);
    std::string payload = export_obj_solid(sm);
    if (!write_output(cfg, payload, out, err)) return kExitInput;
    std::ostream& log = cfg.output_path.empty() ? err : out;
    print_summary(*run, log);
    log << "t_max = " << fmt_real(sm.t_max) << ", t = " << fmt_real(sm.thickness) << "\n";
    log << rep.summary() << "\n";
    return kExitOk;
}

int cmd_export(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::optional<ThickenRun> run;
    std::optional<ParsedDocument> doc;
    int rc = run_pipeline(cfg, out, err, run, doc);
    if (rc != kExitOk) return rc;
    std::string payload;
    if (cfg.format == "svg") {
        payload = export_svg(doc->pattern, run->pattern);
    } else if (cfg.format == "obj") {
        payload = export_obj_fold(run->folded, cfg.tol);
    } else {
        err << "error: unknown format \"" << cfg.format << "\" (expected svg or obj)\n";
        return kExitInput;
    }
    if (!write_output(cfg, payload, out, err)) return kExitInput;
    return kExitOk;
}

}  // namespace thickfold
