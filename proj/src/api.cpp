#include "pillowfold/api.hpp"

#include <numbers>

#include "httplib.h"
#include "pillowfold/errors.hpp"
#include "pillowfold/operations.hpp"

namespace pillowfold {

namespace {

constexpr int kMaxResolution = 20000;
constexpr int kMaxApiSegments = 1000;
constexpr int kDefaultApiSegments = 100;

struct HttpError {
    int status;
    std::string type;
    std::string message;
    std::string field;
};

HttpResponse json_response(int status, const Json& body) {
    HttpResponse r;
    r.status = status;
    r.body = body.dump();
    return r;
}

HttpResponse error_response(const HttpError& e) {
    Json err = {{"status", e.status}, {"type", e.type}, {"message", e.message}};
    if (!e.field.empty()) err["field"] = e.field;
    return json_response(e.status, {{"error", err}});
}

Json parse_body(std::string_view body) {
    try {
        return Json::parse(body);
    } catch (const Json::parse_error& e) {
        throw HttpError{400, "ParseError", std::string("malformed JSON body: ") + e.what(), ""};
    }
}

// Curve document plus its "options" object.
struct CurveRequest {
    Json echo;
    CurveSpec spec;
    Json options = Json::object();
};

CurveRequest parse_curve_request(std::string_view body) {
    CurveRequest req;
    req.echo = parse_body(body);
    if (!req.echo.is_object()) throw HttpError{400, "ParseError", "request body must be a JSON object", ""};
    Json doc = req.echo;
    if (doc.contains("options")) {
        req.options = doc.at("options");
        if (!req.options.is_object()) throw HttpError{400, "ParseError", "'options' must be an object", "options"};
        doc.erase("options");
    }
    req.spec = curve_spec_from_json(doc);
    return req;
}

int int_option(const Json& options, const char* key, int fallback) {
    if (!options.contains(key)) return fallback;
    const Json& v = options.at(key);
    if (!v.is_number_integer()) {
        throw HttpError{400, "ParseError", std::string("option '") + key + "' must be an integer", key};
    }
    return v.get<int>();
}

double number_option(const Json& options, const char* key, double fallback) {
    if (!options.contains(key)) return fallback;
    const Json& v = options.at(key);
    if (!v.is_number()) throw HttpError{400, "ParseError", std::string("option '") + key + "' must be a number", key};
    return v.get<double>();
}

std::string string_option(const Json& options, const char* key, const std::string& fallback) {
    if (!options.contains(key)) return fallback;
    const Json& v = options.at(key);
    if (!v.is_string()) throw HttpError{400, "ParseError", std::string("option '") + key + "' must be a string", key};
    return v.get<std::string>();
}

void check_options(const Json& options, std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : options.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw HttpError{400, "ParseError", "unknown option '" + key + "'", "options." + key};
    }
}

Json envelope(std::string_view operation, const Json& request, const Json& result) {
    Json doc;
    doc["operation"] = std::string(operation);
    doc["version"] = std::string(kToolVersion);
    for (const auto& [key, value] : result.items()) doc[key] = value;
    doc["request"] = request;
    return doc;
}

Json parameter_schema(const std::string& name, double min, double max, bool min_open, bool max_open) {
    Json p = {{"name", name}, {"type", "number"}, {"minimum", min}, {"exclusive_minimum", min_open}};
    if (std::isfinite(max)) {
        p["maximum"] = max;
        p["exclusive_maximum"] = max_open;
    }
    return p;
}

Json families_catalog() {
    const double inf = std::numeric_limits<double>::infinity();
    Json list = Json::array();
    for (Family f : all_families()) {
        Json params = Json::array();
        switch (f) {
            case Family::SineArc: break;
            case Family::Rectangle:
            case Family::Rhombus: params.push_back(parameter_schema("h", 0.0, 0.5, false, false)); break;
            case Family::Arc:
                params.push_back(parameter_schema("theta", 0.0, std::numbers::pi / 2.0, true, false));
                break;
            case Family::QuadBezier:
                params.push_back(parameter_schema("a", 0.0, 0.5, true, true));
                params.push_back(parameter_schema("b", 0.0, inf, false, false));
                params.push_back(parameter_schema("h", 0.0, inf, false, false));
                break;
            case Family::CubicBezier:
                params.push_back(parameter_schema("a", 0.0, 0.5, false, false));
                params.push_back(parameter_schema("b", 0.0, inf, false, false));
                params.push_back(parameter_schema("c", 0.0, 0.5, false, false));
                params.push_back(parameter_schema("d", 0.0, inf, false, false));
                params.push_back(parameter_schema("h", 0.0, inf, false, false));
                break;
            case Family::Polyline:
                params.push_back({{"name", "heights"}, {"type", "array"}, {"items", {{"type", "number"}, {"minimum", 0.0}}},
                                  {"min_items", 1}});
                params.push_back({{"name", "symmetric"}, {"type", "boolean"}, {"default", true}});
                break;
        }
        const bool optimizable = f == Family::QuadBezier || f == Family::CubicBezier || f == Family::Polyline;
        const bool closed_form = f == Family::SineArc || f == Family::Rectangle || f == Family::Rhombus;
        list.push_back({{"id", std::string(family_name(f))},
                        {"parameters", params},
                        {"optimizable", optimizable},
                        {"closed_form", closed_form}});
    }
    return {{"families", list}, {"count", list.size()}};
}

class SlotGuard {
public:
    explicit SlotGuard(std::atomic<int>& counter) : counter_(counter) {}
    ~SlotGuard() { counter_.fetch_sub(1); }
    SlotGuard(const SlotGuard&) = delete;
    SlotGuard& operator=(const SlotGuard&) = delete;

private:
    std::atomic<int>& counter_;
};

}  // namespace

Service::Service(ServiceConfig config) : config_(std::move(config)) {}

HttpResponse Service::handle(std::string_view method, std::string_view path, std::string_view body) {
    HttpResponse r;
    if (method == "OPTIONS") {
        r.status = 204;
        r.content_type.clear();
    } else {
        try {
            r = route(method, path, body);
        } catch (const HttpError& e) {
            r = error_response(e);
        } catch (const ParseError& e) {
            r = error_response({400, "ParseError", e.what(), e.field()});
        } catch (const DomainError& e) {
            r = error_response({422, "DomainError", e.what(), ""});
        } catch (const InvalidCurveError& e) {
            r = error_response({422, "InvalidCurveError", e.what(), ""});
        } catch (const NonMonotoneError& e) {
            r = error_response({422, "NonMonotoneError", e.what(), ""});
        } catch (const GeometryError& e) {
            r = error_response({422, "GeometryError", e.what(), ""});
        } catch (const InfeasibleStartError& e) {
            r = error_response({422, "InfeasibleStartError", e.what(), ""});
        } catch (const NotWatertightError& e) {
            r = error_response({422, "NotWatertightError", e.what(), ""});
        } catch (const Json::exception&) {
            r = error_response({400, "ParseError", "request body has the wrong shape", ""});
        } catch (...) {
            r = error_response({500, "InternalError", "internal error", ""});
        }
    }
    if (!config_.cors_origin.empty()) {
        r.headers["Access-Control-Allow-Origin"] = config_.cors_origin;
        r.headers["Access-Control-Allow-Methods"] = "GET, POST, OPTIONS";
        r.headers["Access-Control-Allow-Headers"] = "Content-Type";
        r.headers["Vary"] = "Origin";
    }
    return r;
}

HttpResponse Service::route(std::string_view method, std::string_view path, std::string_view body) {
    const bool get = method == "GET";
    const bool post = method == "POST";
    if (path == "/healthz") {
        if (!get) throw HttpError{405, "MethodNotAllowed", "use GET", ""};
        HttpResponse r;
        r.body = "ok";
        r.content_type = "text/plain";
        return r;
    }
    if (path == "/api/families") {
        if (!get) throw HttpError{405, "MethodNotAllowed", "use GET", ""};
        return json_response(200, envelope("families", Json::object(), families_catalog()));
    }
    const bool known = path == "/api/validate" || path == "/api/profile" || path == "/api/fold" ||
                       path == "/api/volume" || path == "/api/optimize" || path == "/api/pattern";
    if (!known) throw HttpError{404, "NotFound", "no route " + std::string(path), ""};
    if (!post) throw HttpError{405, "MethodNotAllowed", "use POST", ""};

    if (path == "/api/optimize") return optimize(body);

    const CurveRequest req = parse_curve_request(body);
    const Json& opt = req.options;
    if (path == "/api/validate") {
        check_options(opt, {"samples"});
        const int samples = int_option(opt, "samples", 10000);
        if (samples < 2 || samples > 1000000) throw DomainError("samples must lie in [2, 1000000]");
        return json_response(200, envelope("validate", req.echo, to_json(validate(req.spec.curve, samples))));
    }
    if (path == "/api/profile") {
        check_options(opt, {"n"});
        const int n = int_option(opt, "n", 2000);
        if (n < 2 || n > 200000) throw DomainError("n must lie in [2, 200000]");
        return json_response(200, envelope("profile", req.echo, to_json(compute_profile(req.spec.curve, n))));
    }
    if (path == "/api/volume") {
        check_options(opt, {"method", "n"});
        const VolumeMethod m = parse_volume_method(string_option(opt, "method", "quadrature"));
        const int n = int_option(opt, "n", m == VolumeMethod::Mesh ? 2000 : kDefaultQuadrature);
        if (n > 1000000 || (m == VolumeMethod::Mesh && n > kMaxResolution)) throw DomainError("n is too large");
        return json_response(200, envelope("volume", req.echo, to_json(compute_volume(req.spec, m, n))));
    }
    if (path == "/api/fold") {
        check_options(opt, {"resolution", "theta1", "wall_depth", "format"});
        FoldOptions fo;
        fo.resolution = int_option(opt, "resolution", 2000);
        if (fo.resolution > kMaxResolution) throw DomainError("resolution must not exceed 20000");
        if (opt.contains("theta1")) fo.theta1_degrees = number_option(opt, "theta1", 90.0);
        fo.wall_depth = number_option(opt, "wall_depth", 0.0);
        const std::string format = string_option(opt, "format", "json");
        const FoldedMesh mesh = compute_fold(req.spec, fo);
        if (format == "obj") {
            HttpResponse r;
            r.body = write_obj(mesh);
            r.content_type = "text/plain";
            return r;
        }
        if (format != "json") throw DomainError("format must be 'json' or 'obj'");
        return json_response(200, envelope("fold", req.echo, to_json(mesh)));
    }
    // /api/pattern
    check_options(opt, {"scale_mm", "layout"});
    const double scale = number_option(opt, "scale_mm", 100.0);
    const std::string layout = string_option(opt, "layout", "envelope");
    if (layout != "envelope" && layout != "fig1") throw DomainError("layout must be 'envelope' or 'fig1'");
    HttpResponse r;
    r.body = write_svg_pattern(req.spec.curve, req.spec.sheet, scale,
                               layout == "fig1" ? PatternLayout::Fig1 : PatternLayout::Envelope);
    r.content_type = "image/svg+xml";
    return r;
}

HttpResponse Service::optimize(std::string_view body) {
    const Json echo = parse_body(body);
    if (!echo.is_object()) throw HttpError{400, "ParseError", "request body must be a JSON object", ""};
    Json doc = echo;
    double budget = config_.max_optimize_seconds;
    if (doc.contains("budget_seconds")) {
        const Json& b = doc.at("budget_seconds");
        if (!b.is_number() || !(b.get<double>() > 0.0)) {
            throw HttpError{400, "ParseError", "'budget_seconds' must be a positive number", "budget_seconds"};
        }
        budget = std::min(budget, b.get<double>());
        doc.erase("budget_seconds");
    }
    if (!doc.contains("family")) throw HttpError{400, "ParseError", "missing field 'family'", "family"};
    if (doc.contains("max_seconds")) throw HttpError{400, "ParseError", "use 'budget_seconds'", "max_seconds"};
    OptimizeRequest request = make_optimize_request(Family::QuadBezier, kDefaultApiSegments, std::numbers::sqrt2);
    if (!doc.contains("segments")) doc["segments"] = kDefaultApiSegments;
    apply_optimize_json(request, doc);
    if (request.problem.family == Family::Polyline && request.problem.segments > kMaxApiSegments) {
        throw DomainError("segments above 1000 are only available from the command line");
    }
    request.config.max_seconds = budget;

    if (running_optimize_.fetch_add(1) >= config_.max_concurrent_optimize) {
        running_optimize_.fetch_sub(1);
        return error_response({429, "TooManyRequests", "optimization capacity reached; retry later", ""});
    }
    SlotGuard guard(running_optimize_);
    const OptResult result = maximize_volume(request.problem, request.config);
    Json out = envelope("optimize", echo, to_json(result, request.problem));
    out["budget_seconds"] = budget;
    return json_response(result.timed_out ? 408 : 200, out);
}

struct HttpServer::Impl {
    explicit Impl(Service& s) : service(s) {}
    Service& service;
    httplib::Server server;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        const HttpResponse r = impl_->service.handle(req.method, req.path, req.body);
        res.status = r.status;
        for (const auto& [k, v] : r.headers) res.set_header(k, v);
        if (!r.content_type.empty()) res.set_content(r.body, r.content_type);
    };
    impl_->server.Get(".*", handler);
    impl_->server.Post(".*", handler);
    impl_->server.Options(".*", handler);
    impl_->server.Put(".*", handler);
    impl_->server.Delete(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) impl_->server.stop();
}

}  // namespace pillowfold
