#include "pillowfold/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pillowfold/errors.hpp"

namespace pillowfold {

namespace {

// 1-based line of byte offset `pos`.
int line_of(std::string_view text, std::size_t pos) {
    pos = std::min(pos, text.size());
    int line = 1;
    for (std::size_t i = 0; i < pos; ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

class Locator {
public:
    explicit Locator(const std::string_view* text) : text_(text) {}

    // Line where "key" first appears, 0 when unknown.
    int line(const std::string& key) const {
        if (!text_) return 0;
        const std::string quoted = "\"" + key + "\"";
        const auto pos = text_->find(quoted);
        return pos == std::string_view::npos ? 0 : line_of(*text_, pos);
    }

    [[noreturn]] void fail(const std::string& msg, const std::string& path, const std::string& key) const {
        throw ParseError(msg, line(key), path);
    }

private:
    const std::string_view* text_;
};

double number_field(const Json& value, const std::string& path, const std::string& key, const Locator& loc) {
    if (!value.is_number()) loc.fail("field '" + path + "' must be a number", path, key);
    return value.get<double>();
}

void expect_object(const Json& value, const std::string& path, const std::string& key, const Locator& loc) {
    if (!value.is_object()) loc.fail("field '" + path + "' must be an object", path, key);
}

CurveSpec parse_document(const Json& doc, const Locator& loc) {
    if (!doc.is_object()) loc.fail("curve spec must be a JSON object", "", "");
    for (const auto& [key, _] : doc.items()) {
        if (key != "family" && key != "params" && key != "sheet" && key != "metadata") {
            loc.fail("unknown field '" + key + "'", key, key);
        }
    }
    if (!doc.contains("family")) loc.fail("missing field 'family'", "family", "family");
    const Json& fam = doc.at("family");
    if (!fam.is_string()) loc.fail("field 'family' must be a string", "family", "family");
    const auto family = family_from_name(fam.get<std::string>());
    if (!family) loc.fail("unknown family '" + fam.get<std::string>() + "'", "family", "family");

    ParamMap params;
    if (doc.contains("params")) {
        const Json& p = doc.at("params");
        expect_object(p, "params", "params", loc);
        const auto& names = parameter_names(*family);
        for (const auto& [key, value] : p.items()) {
            const std::string path = "params." + key;
            if (std::find(names.begin(), names.end(), key) == names.end()) {
                loc.fail("unknown parameter '" + key + "' for family " + fam.get<std::string>(), path, key);
            }
            if (value.is_boolean()) {
                params[key] = value.get<bool>();
            } else if (value.is_number()) {
                params[key] = value.get<double>();
            } else if (value.is_array()) {
                std::vector<double> list;
                for (const auto& item : value) list.push_back(number_field(item, path, key, loc));
                params[key] = std::move(list);
            } else {
                loc.fail("field '" + path + "' has an unsupported type", path, key);
            }
        }
    }

    CurveSpec spec;
    if (doc.contains("sheet")) {
        const Json& s = doc.at("sheet");
        expect_object(s, "sheet", "sheet", loc);
        for (const auto& [key, value] : s.items()) {
            const std::string path = "sheet." + key;
            if (key == "width") {
                spec.sheet.width = number_field(value, path, key, loc);
            } else if (key == "length") {
                spec.sheet.length = number_field(value, path, key, loc);
            } else {
                loc.fail("unknown field '" + path + "'", path, key);
            }
        }
    }
    spec.sheet.check();
    if (doc.contains("metadata")) {
        spec.metadata = doc.at("metadata");
        expect_object(spec.metadata, "metadata", "metadata", loc);
    }
    spec.curve = make_curve(*family, params);
    return spec;
}

std::string format(const char* fmt, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, value);
    return buf;
}

}  // namespace

CurveSpec parse_curve_spec(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), line_of(text, e.byte == 0 ? 0 : e.byte - 1),
                         "");
    }
    return parse_document(doc, Locator(&text));
}

CurveSpec curve_spec_from_json(const Json& doc) { return parse_document(doc, Locator(nullptr)); }

Json curve_spec_to_json(const CurveSpec& spec) {
    Json doc;
    doc["family"] = std::string(family_name(spec.curve.family()));
    Json params = Json::object();
    const ParamMap values = curve_parameters(spec.curve);
    for (const auto& name : parameter_names(spec.curve.family())) {
        const auto it = values.find(name);
        if (it == values.end()) continue;
        std::visit([&](const auto& v) { params[name] = v; }, it->second);
    }
    doc["params"] = params;
    doc["sheet"] = {{"width", spec.sheet.width}, {"length", spec.sheet.length}};
    if (!spec.metadata.is_null()) doc["metadata"] = spec.metadata;
    return doc;
}

std::string write_curve_spec(const CurveSpec& spec) { return curve_spec_to_json(spec).dump(2) + "\n"; }

Json to_json(const ValidationReport& report) {
    Json doc;
    doc["valid"] = report.valid;
    doc["max_abs_slope"] = report.max_abs_slope;
    doc["max_tangent_angle"] = report.max_tangent_angle;
    Json intervals = Json::array();
    for (const auto& v : report.violations) intervals.push_back({v.lo, v.hi});
    doc["violations"] = intervals;
    doc["n_samples"] = report.n_samples;
    if (!report.reason.empty()) doc["reason"] = report.reason;
    if (!std::isnan(report.min_leg_squared)) {
        doc["min_leg_squared"] = report.min_leg_squared;
        doc["min_leg_u"] = report.min_leg_u;
    }
    return doc;
}

Json to_json(const CrossSectionProfile& profile) {
    Json points = Json::array();
    for (const auto& p : profile.points) points.push_back({p.x, p.z});
    return {{"width", profile.width}, {"height", profile.height}, {"points", points}};
}

Json to_json(const VolumeResult& volume) {
    return {{"value", volume.value}, {"method", std::string(method_name(volume.method))}, {"n", volume.n}};
}

Json to_json(const OptResult& result, const OptimizationProblem& problem) {
    Json doc;
    doc["family"] = std::string(family_name(problem.family));
    if (problem.family == Family::Polyline) doc["segments"] = problem.segments;
    doc["params"] = result.params;
    doc["volume"] = result.volume;
    doc["iterations"] = result.iterations;
    doc["converged"] = result.converged;
    doc["timed_out"] = result.timed_out;
    doc["max_violation"] = result.max_violation;
    doc["n_quadrature"] = problem.n_quadrature;
    Json trace = Json::array();
    for (const auto& [it, v] : result.trace) trace.push_back({it, v});
    doc["trace"] = trace;
    doc["spec"] = curve_spec_to_json({result_curve(problem, result), problem.sheet, Json()});
    return doc;
}

Json to_json(const FoldedMesh& mesh) {
    Json vertices = Json::array();
    for (const Vec3& v : mesh.vertices) {
        vertices.push_back(v.x);
        vertices.push_back(v.y);
        vertices.push_back(v.z);
    }
    Json triangles = Json::array();
    for (const auto& t : mesh.triangles) {
        for (int i : t) triangles.push_back(i);
    }
    Json labels = Json::array();
    for (Part p : mesh.part_labels) labels.push_back(std::string(part_name(p)));
    return {{"vertex_count", mesh.vertices.size()},
            {"triangle_count", mesh.triangles.size()},
            {"watertight", mesh.watertight},
            {"vertices", vertices},
            {"triangles", triangles},
            {"part_labels", labels}};
}

Json result_document(std::string_view operation, const Json& input, const Json& result,
                     const std::string& timestamp) {
    Json doc;
    doc["operation"] = std::string(operation);
    doc["tool"] = {{"name", std::string(kToolName)}, {"version", std::string(kToolVersion)}};
    if (!timestamp.empty()) doc["timestamp"] = timestamp;
    doc["input"] = input;
    doc["result"] = result;
    return doc;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string write_obj(const FoldedMesh& mesh) {
    std::string out;
    out += "# " + std::string(kToolName) + " " + std::string(kToolVersion) + " folded mesh\n";
    out += "# " + std::to_string(mesh.vertices.size()) + " vertices, " + std::to_string(mesh.triangles.size()) +
           " faces\n";
    char buf[128];
    for (const Vec3& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", v.x, v.y, v.z);
        out += buf;
    }
    for (const auto& t : mesh.triangles) {
        std::snprintf(buf, sizeof buf, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
        out += buf;
    }
    return out;
}

FoldedMesh read_obj(std::string_view text) {
    FoldedMesh mesh;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Vec3 v;
            if (!(ls >> v.x >> v.y >> v.z)) throw ParseError("bad vertex record", line_no, "v");
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            std::array<int, 3> t{};
            for (int& i : t) {
                std::string token;
                if (!(ls >> token)) throw ParseError("face needs three vertices", line_no, "f");
                i = std::stoi(token.substr(0, token.find('/'))) - 1;
                if (i < 0 || i >= static_cast<int>(mesh.vertices.size())) {
                    throw ParseError("face index out of range", line_no, "f");
                }
            }
            mesh.triangles.push_back(t);
            mesh.part_labels.push_back(Part::Top);
        }
    }
    const ManifoldCheck check = check_manifold(mesh);
    mesh.watertight = !mesh.triangles.empty() && check.edge_manifold && check.oriented;
    return mesh;
}

std::string write_svg_pattern(const CreaseCurve& curve, const SheetSpec& sheet, double scale_mm,
                              PatternLayout layout) {
    if (!(scale_mm > 0.0) || !std::isfinite(scale_mm)) throw DomainError("scale_mm must be positive");
    sheet.check();
    const ValidationReport report = validate(curve);
    if (!report.valid) {
        throw InvalidCurveError("write_svg_pattern: curve is not developable (max |f'| = " +
                                std::to_string(report.max_abs_slope) + ")");
    }
    constexpr int kPoints = 200;
    const double w = sheet.width * scale_mm;
    const double len = sheet.length * scale_mm;
    std::vector<double> us(kPoints), fs(kPoints);
    for (int k = 0; k < kPoints; ++k) {
        us[k] = static_cast<double>(k) / (kPoints - 1);
        fs[k] = sheet.width * eval(curve, us[k]).f * scale_mm;
    }
    const double fmax = sheet.width * max_height(curve) * scale_mm;
    const double top = layout == PatternLayout::Fig1 ? fmax : 0.0;
    const double total_w = 2.0 * w;
    const double total_h = len + 2.0 * top;

    auto mm = [](double v) { return format("%.6f", v); };
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + mm(total_w) + "mm\" height=\"" + mm(total_h) +
           "mm\" viewBox=\"0 0 " + mm(total_w) + " " + mm(total_h) + "\">\n";
    if (layout == PatternLayout::Envelope) {
        out += "  <rect class=\"cut\" x=\"0\" y=\"0\" width=\"" + mm(total_w) + "\" height=\"" + mm(total_h) +
               "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.3\"/>\n";
    } else {
        // Outline with tongues v = -f(u) and v = L + f(u) on both faces.
        std::string d = "M 0.000000 " + mm(top);
        for (int face = 0; face < 2; ++face) {
            for (int k = 0; k < kPoints; ++k) d += " L " + mm(face * w + us[k] * w) + " " + mm(top - fs[k]);
        }
        d += " L " + mm(total_w) + " " + mm(top + len);
        for (int face = 1; face >= 0; --face) {
            for (int k = kPoints - 1; k >= 0; --k) {
                d += " L " + mm(face * w + us[k] * w) + " " + mm(top + len + fs[k]);
            }
        }
        d += " Z";
        out += "  <path class=\"cut\" d=\"" + d + "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.3\"/>\n";
    }
    for (int face = 0; face < 2; ++face) {
        for (int side = 0; side < 2; ++side) {
            std::string d;
            for (int k = 0; k < kPoints; ++k) {
                const double x = face * w + us[k] * w;
                const double y = side == 0 ? top + fs[k] : top + len - fs[k];
                d += (k == 0 ? "M " : " L ") + mm(x) + " " + mm(y);
            }
            out += "  <path class=\"crease\" d=\"" + d +
                   "\" fill=\"none\" stroke=\"blue\" stroke-width=\"0.2\" stroke-dasharray=\"2 1\"/>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

std::string profile_csv(const CrossSectionProfile& profile) {
    std::string out = "x,z\n";
    for (const auto& p : profile.points) out += format("%.17g", p.x) + "," + format("%.17g", p.z) + "\n";
    return out;
}

void write_file_atomic(const std::string& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move output into place at " + path + ": " + ec.message());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fixed6(double value) { return format("%.6f", value); }

}  // namespace pillowfold
