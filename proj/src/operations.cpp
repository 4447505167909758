#include "pillowfold/operations.hpp"

#include <cmath>
#include <numbers>

#include "pillowfold/errors.hpp"

namespace pillowfold {

VolumeMethod parse_volume_method(std::string_view name) {
    if (name == "quadrature") return VolumeMethod::Quadrature;
    if (name == "mesh") return VolumeMethod::Mesh;
    if (name == "closed-form" || name == "closed_form") return VolumeMethod::ClosedForm;
    throw DomainError("unknown volume method '" + std::string(name) + "' (quadrature, mesh, closed-form)");
}

VolumeResult compute_volume(const CurveSpec& spec, VolumeMethod method, int n) {
    const CreaseCurve& curve = spec.curve;
    const SheetSpec& sheet = spec.sheet;
    switch (method) {
        case VolumeMethod::Quadrature:
            return volume_quadrature(curve, sheet, n);
        case VolumeMethod::Mesh: {
            VolumeResult r = volume_mesh(build_mesh(curve, sheet, n));
            r.n = n;
            return r;
        }
        case VolumeMethod::ClosedForm:
            break;
    }
    if (curve.family() == Family::SineArc) return circle_volume(sheet);
    if (const auto* r = std::get_if<RectangleParams>(&curve.params())) {
        // Stored normalized, so evaluate on the unit-width sheet and rescale.
        const double w = sheet.width;
        VolumeResult v = rectangle_volume(r->h, SheetSpec{1.0, sheet.normalized_length()});
        v.value *= w * w * w;
        return v;
    }
    if (const auto* r = std::get_if<RhombusParams>(&curve.params())) {
        if (std::abs(sheet.normalized_length() - std::numbers::sqrt2) > 1e-12) {
            throw DomainError("the rhombus closed form holds only for a sheet of aspect sqrt(2)");
        }
        const double w = sheet.width;
        VolumeResult v = rhombus_volume(r->h);
        v.value *= w * w * w;
        return v;
    }
    throw DomainError("no closed form for family '" + std::string(family_name(curve.family())) +
                      "'; use quadrature or mesh");
}

FoldedMesh compute_fold(const CurveSpec& spec, const FoldOptions& options) {
    if (!options.theta1_degrees) return build_mesh(spec.curve, spec.sheet, options.resolution);
    const double theta1 = *options.theta1_degrees * std::numbers::pi / 180.0;
    const AsymmetricParams params = AsymmetricParams::from_theta1(theta1, options.wall_depth);
    return build_asymmetric_mesh(spec.curve, spec.sheet, params, options.resolution);
}

int default_max_iter(const OptimizationProblem& problem) {
    return problem.family == Family::Polyline && problem.segments >= 1000 ? 5000 : 500;
}

OptimizeRequest make_optimize_request(Family family, int segments, double sheet_length) {
    OptimizeRequest r;
    r.problem = OptimizationProblem::standard(family, sheet_length, segments);
    r.config.max_iter = default_max_iter(r.problem);
    return r;
}

namespace {

double number(const Json& v, const std::string& key) {
    if (!v.is_number()) throw ParseError("field '" + key + "' must be a number", 0, key);
    return v.get<double>();
}

int integer(const Json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ParseError("field '" + key + "' must be an integer", 0, key);
    return v.get<int>();
}

}  // namespace

void apply_optimize_json(OptimizeRequest& request, const Json& doc) {
    if (!doc.is_object()) throw ParseError("optimization settings must be a JSON object", 0, "");
    // Structural keys first: they reset the problem.
    Family family = request.problem.family;
    int segments = request.problem.segments;
    double length = request.problem.sheet.normalized_length();
    double width = request.problem.sheet.width;
    bool rebuild = false;
    if (doc.contains("family")) {
        const Json& f = doc.at("family");
        if (!f.is_string()) throw ParseError("field 'family' must be a string", 0, "family");
        const auto parsed = family_from_name(f.get<std::string>());
        if (!parsed) throw ParseError("unknown family '" + f.get<std::string>() + "'", 0, "family");
        family = *parsed;
        rebuild = true;
    }
    if (doc.contains("segments")) {
        segments = integer(doc.at("segments"), "segments");
        rebuild = true;
    }
    if (doc.contains("sheet")) {
        const Json& s = doc.at("sheet");
        if (!s.is_object()) throw ParseError("field 'sheet' must be an object", 0, "sheet");
        for (const auto& [key, value] : s.items()) {
            if (key == "width") {
                width = number(value, "sheet.width");
            } else if (key == "length") {
                length = number(value, "sheet.length");
            } else {
                throw ParseError("unknown field 'sheet." + key + "'", 0, "sheet." + key);
            }
        }
        SheetSpec{width, length}.check();
        length /= width;
        rebuild = true;
    }
    if (rebuild) {
        const int max_iter_before = request.config.max_iter;
        const bool was_default = max_iter_before == default_max_iter(request.problem);
        request.problem = OptimizationProblem::standard(family, length, segments);
        request.problem.sheet = SheetSpec{width, length * width};
        if (was_default) request.config.max_iter = default_max_iter(request.problem);
    }
    for (const auto& [key, value] : doc.items()) {
        if (key == "family" || key == "segments" || key == "sheet") continue;
        if (key == "initial") {
            if (!value.is_array()) throw ParseError("field 'initial' must be an array", 0, key);
            std::vector<double> x;
            for (const auto& item : value) x.push_back(number(item, key));
            request.problem.initial = std::move(x);
        } else if (key == "n_quadrature") {
            request.problem.n_quadrature = integer(value, key);
        } else if (key == "n_constraint_samples") {
            request.problem.n_constraint_samples = integer(value, key);
        } else if (key == "max_iter") {
            request.config.max_iter = integer(value, key);
        } else if (key == "ftol") {
            request.config.ftol = number(value, key);
        } else if (key == "ctol") {
            request.config.ctol = number(value, key);
        } else if (key == "max_seconds") {
            request.config.max_seconds = number(value, key);
        } else if (key == "multistart") {
            if (!value.is_boolean()) throw ParseError("field 'multistart' must be a boolean", 0, key);
            request.config.multistart = value.get<bool>();
        } else {
            throw ParseError("unknown field '" + key + "'", 0, key);
        }
    }
}

std::string table1_markdown(const std::vector<Table1Row>& rows) {
    std::string out = "| Cross-section | Maximum volume | Published | Parameters |\n";
    out += "|---|---|---|---|\n";
    for (const auto& r : rows) {
        out += "| " + r.shape + " | " + fixed6(r.volume) + " | " + fixed6(r.reference) + " | " + r.parameters +
               " |\n";
    }
    return out;
}

}  // namespace pillowfold
