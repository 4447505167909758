#include "pillowfold/cli.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "CLI11.hpp"
#include "pillowfold/api.hpp"
#include "pillowfold/errors.hpp"
#include "pillowfold/operations.hpp"

namespace pillowfold {

namespace {

CurveSpec load_spec(const std::string& path) { return parse_curve_spec(read_file(path)); }

Json spec_input(const std::string& path, const CurveSpec& spec) {
    return {{"spec_file", path}, {"spec", curve_spec_to_json(spec)}};
}

struct Options {
    std::string spec;
    std::string out;
    int samples = 10000;
    int n = 0;
    int resolution = 2000;
    double theta1 = 90.0;
    double wall_depth = 0.0;
    std::string method = "quadrature";
    bool json = false;

    std::string family;
    int segments = 1000;
    double sheet_length = std::numbers::sqrt2;
    std::string config;
    double max_seconds = 0.0;
    int max_iter = 0;
    bool multistart = false;

    double width = 1.0;
    double height = std::numbers::sqrt2;
    double scale_mm = 100.0;
    std::string layout = "envelope";

    int port = 8080;
    std::string host = "127.0.0.1";
    std::string cors_origin;
    double max_optimize_seconds = 20.0;
    int max_concurrent = 2;
};

int cmd_validate(const Options& o, std::ostream& out) {
    const CurveSpec spec = load_spec(o.spec);
    const ValidationReport report = validate(spec.curve, o.samples);
    out << to_json(report).dump(2) << "\n";
    return report.valid ? kExitOk : kExitInvalid;
}

int cmd_profile(const Options& o, std::ostream& out) {
    const CurveSpec spec = load_spec(o.spec);
    const CrossSectionProfile profile = compute_profile(spec.curve, o.n > 0 ? o.n : 2000);
    write_file_atomic(o.out, profile_csv(profile));
    out << "profile width = " << fixed6(profile.width) << ", height = " << fixed6(profile.height) << " ("
        << profile.points.size() << " points) -> " << o.out << "\n";
    return kExitOk;
}

int cmd_fold(const Options& o, const CLI::App& sub, std::ostream& out) {
    const CurveSpec spec = load_spec(o.spec);
    FoldOptions fo;
    fo.resolution = o.resolution;
    if (sub.count("--theta1") > 0 || sub.count("--wall-depth") > 0) {
        fo.theta1_degrees = o.theta1;
        fo.wall_depth = o.wall_depth;
    }
    const FoldedMesh mesh = compute_fold(spec, fo);
    write_file_atomic(o.out, write_obj(mesh));
    out << "mesh: " << mesh.vertices.size() << " vertices, " << mesh.triangles.size() << " triangles"
        << (mesh.watertight ? ", watertight" : ", open surface") << " -> " << o.out << "\n";
    return kExitOk;
}

int cmd_volume(const Options& o, std::ostream& out) {
    const CurveSpec spec = load_spec(o.spec);
    const VolumeMethod method = parse_volume_method(o.method);
    const int n = o.n > 0 ? o.n : (method == VolumeMethod::Mesh ? 2000 : kDefaultQuadrature);
    const VolumeResult v = compute_volume(spec, method, n);
    if (o.json) {
        Json input = spec_input(o.spec, spec);
        input["method"] = std::string(method_name(method));
        input["n"] = n;
        out << result_document("volume", input, to_json(v), utc_timestamp()).dump(2) << "\n";
    } else {
        out << "volume = " << fixed6(v.value) << " (" << method_name(v.method);
        if (v.n > 0) out << ", n = " << v.n;
        out << ")\n";
    }
    return kExitOk;
}

int cmd_optimize(const Options& o, const CLI::App& sub, std::ostream& out) {
    const auto family = family_from_name(o.family);
    if (!family) throw DomainError("unknown family '" + o.family + "'");
    OptimizeRequest req = make_optimize_request(*family, o.segments, o.sheet_length);
    if (!o.config.empty()) {
        const std::string text = read_file(o.config);
        Json doc;
        try {
            doc = Json::parse(text);
        } catch (const Json::parse_error& e) {
            throw ParseError(std::string("malformed config: ") + e.what(), 0, "");
        }
        for (const char* key : {"family", "segments", "sheet"}) {
            if (doc.contains(key)) throw ParseError(std::string("'") + key + "' is set on the command line", 0, key);
        }
        apply_optimize_json(req, doc);
    }
    if (sub.count("--max-seconds") > 0) req.config.max_seconds = o.max_seconds;
    if (sub.count("--max-iter") > 0) req.config.max_iter = o.max_iter;
    if (o.multistart) req.config.multistart = true;

    const OptResult r = maximize_volume(req.problem, req.config);
    Json input = {{"family", o.family},
                  {"segments", req.problem.segments},
                  {"sheet_length", o.sheet_length},
                  {"config",
                   {{"max_iter", req.config.max_iter},
                    {"ftol", req.config.ftol},
                    {"ctol", req.config.ctol},
                    {"max_seconds", req.config.max_seconds},
                    {"multistart", req.config.multistart},
                    {"n_quadrature", req.problem.n_quadrature},
                    {"n_constraint_samples", req.problem.n_constraint_samples}}}};
    const std::string doc = result_document("optimize", input, to_json(r, req.problem), utc_timestamp()).dump(2) + "\n";
    if (o.out.empty()) {
        out << doc;
    } else {
        write_file_atomic(o.out, doc);
        out << "volume = " << fixed6(r.volume) << " after " << r.iterations << " iterations"
            << (r.converged ? " (converged)" : r.timed_out ? " (time budget reached)" : " (not converged)")
            << " -> " << o.out << "\n";
    }
    return kExitOk;
}

int cmd_arc_max(const Options& o, std::ostream& out) {
    const SheetSpec sheet{1.0, o.sheet_length};
    const Maximum m = arc_max(sheet);
    if (o.json) {
        out << result_document("arc-max", {{"sheet_length", o.sheet_length}},
                               {{"theta", m.argument}, {"volume", m.value}}, utc_timestamp())
                   .dump(2)
            << "\n";
    } else {
        out << "theta* = " << fixed6(m.argument) << ", volume = " << fixed6(m.value) << "\n";
    }
    return kExitOk;
}

int cmd_bag_volume(const Options& o, std::ostream& out) {
    const VolumeResult v = paper_bag_volume(o.width, o.height);
    if (o.json) {
        out << result_document("bag-volume", {{"width", o.width}, {"height", o.height}}, to_json(v), utc_timestamp())
                   .dump(2)
            << "\n";
    } else {
        out << "volume = " << fixed6(v.value) << "\n";
    }
    return kExitOk;
}

int cmd_pattern(const Options& o, std::ostream& out) {
    const CurveSpec spec = load_spec(o.spec);
    PatternLayout layout = PatternLayout::Envelope;
    if (o.layout == "fig1") {
        layout = PatternLayout::Fig1;
    } else if (o.layout != "envelope") {
        throw DomainError("layout must be 'envelope' or 'fig1'");
    }
    write_file_atomic(o.out, write_svg_pattern(spec.curve, spec.sheet, o.scale_mm, layout));
    out << "pattern -> " << o.out << "\n";
    return kExitOk;
}

int cmd_table1(const Options& o, std::ostream& out) {
    out << table1_markdown(compute_table1(o.segments));
    return kExitOk;
}

int cmd_serve(const Options& o, std::ostream& out) {
    ServiceConfig config;
    config.cors_origin = o.cors_origin;
    config.max_optimize_seconds = o.max_optimize_seconds;
    config.max_concurrent_optimize = o.max_concurrent;
    Service service(config);
    HttpServer server(service);
    const int port = server.bind(o.host, o.port);
    if (port < 0) throw std::runtime_error("cannot bind " + o.host + ":" + std::to_string(o.port));
    out << "listening on http://" << o.host << ":" << port << "\n" << std::flush;
    return server.listen() ? kExitOk : kExitError;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pillow-box crease design, folding and volume optimization", "pillowfold"};
    app.require_subcommand(1);
    Options o;

    auto* validate_cmd = app.add_subcommand("validate", "Check |f'| <= 1 and print the report as JSON");
    validate_cmd->add_option("--spec", o.spec, "Curve document")->required();
    validate_cmd->add_option("--samples", o.samples, "Grid size")->check(CLI::Range(2, 100000000));

    auto* profile_cmd = app.add_subcommand("profile", "Write the cross-section profile as CSV");
    profile_cmd->add_option("--spec", o.spec)->required();
    profile_cmd->add_option("--n", o.n, "Quadrature cells")->check(CLI::Range(2, 100000000));
    profile_cmd->add_option("--out", o.out)->required();

    auto* fold_cmd = app.add_subcommand("fold", "Build the folded mesh and write OBJ");
    fold_cmd->add_option("--spec", o.spec)->required();
    fold_cmd->add_option("--resolution", o.resolution)->check(CLI::Range(4, 1000000));
    fold_cmd->add_option("--theta1", o.theta1, "Asymmetric build: theta1 in degrees");
    fold_cmd->add_option("--wall-depth", o.wall_depth, "Asymmetric build: wall depth");
    fold_cmd->add_option("--out", o.out)->required();

    auto* volume_cmd = app.add_subcommand("volume", "Compute the enclosed volume");
    volume_cmd->add_option("--spec", o.spec)->required();
    volume_cmd->add_option("--method", o.method)->check(CLI::IsMember({"quadrature", "mesh", "closed-form"}));
    volume_cmd->add_option("--n", o.n)->check(CLI::Range(1, 100000000));
    volume_cmd->add_flag("--json", o.json, "Print a result document");

    auto* optimize_cmd = app.add_subcommand("optimize", "Maximize volume over a curve family");
    optimize_cmd->add_option("--family", o.family)
        ->required()
        ->check(CLI::IsMember({"quad-bezier", "cubic-bezier", "polyline"}));
    optimize_cmd->add_option("--segments", o.segments, "Polyline node count N")->check(CLI::Range(1, 100000));
    optimize_cmd->add_option("--sheet-length", o.sheet_length)->check(CLI::PositiveNumber);
    optimize_cmd->add_option("--config", o.config, "Solver settings (JSON)");
    optimize_cmd->add_option("--max-seconds", o.max_seconds)->check(CLI::NonNegativeNumber);
    optimize_cmd->add_option("--max-iter", o.max_iter)->check(CLI::Range(1, 10000000));
    optimize_cmd->add_flag("--multistart", o.multistart);
    optimize_cmd->add_option("--out", o.out, "Result document (stdout when omitted)");

    auto* arc_cmd = app.add_subcommand("arc-max", "Best circular-arc profile");
    arc_cmd->add_option("--sheet-length", o.sheet_length)->required()->check(CLI::PositiveNumber);
    arc_cmd->add_flag("--json", o.json);

    auto* bag_cmd = app.add_subcommand("bag-volume", "Approximate paper-bag optimum");
    bag_cmd->add_option("--width", o.width)->required();
    bag_cmd->add_option("--height", o.height)->required();
    bag_cmd->add_flag("--json", o.json);

    auto* pattern_cmd = app.add_subcommand("pattern", "Write the crease pattern as SVG");
    pattern_cmd->add_option("--spec", o.spec)->required();
    pattern_cmd->add_option("--scale-mm", o.scale_mm)->required();
    pattern_cmd->add_option("--layout", o.layout)->check(CLI::IsMember({"envelope", "fig1"}));
    pattern_cmd->add_option("--out", o.out)->required();

    auto* table_cmd = app.add_subcommand("table1", "Maximum volume of every cross-section family");
    table_cmd->add_option("--segments", o.segments, "Polyline node count")->check(CLI::Range(1, 100000));

    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
    serve_cmd->add_option("--port", o.port)->check(CLI::Range(0, 65535));
    serve_cmd->add_option("--host", o.host);
    serve_cmd->add_option("--cors-origin", o.cors_origin);
    serve_cmd->add_option("--max-optimize-seconds", o.max_optimize_seconds)->check(CLI::PositiveNumber);
    serve_cmd->add_option("--max-concurrent-optimize", o.max_concurrent)->check(CLI::Range(1, 64));

    std::vector<std::string> argv_store{"pillowfold"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (*validate_cmd) return cmd_validate(o, out);
        if (*profile_cmd) return cmd_profile(o, out);
        if (*fold_cmd) return cmd_fold(o, *fold_cmd, out);
        if (*volume_cmd) return cmd_volume(o, out);
        if (*optimize_cmd) return cmd_optimize(o, *optimize_cmd, out);
        if (*arc_cmd) return cmd_arc_max(o, out);
        if (*bag_cmd) return cmd_bag_volume(o, out);
        if (*pattern_cmd) return cmd_pattern(o, out);
        if (*table_cmd) return cmd_table1(o, out);
        if (*serve_cmd) return cmd_serve(o, out);
    } catch (const InvalidCurveError& e) {
        err << "invalid curve: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const NonMonotoneError& e) {
        err << "invalid curve: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const ParseError& e) {
        err << "parse error";
        if (e.line() > 0) err << " at line " << e.line();
        if (!e.field().empty()) err << " (field " << e.field() << ")";
        err << ": " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace pillowfold
