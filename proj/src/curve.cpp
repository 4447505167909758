#include "pillowfold/curve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "pillowfold/errors.hpp"

namespace pillowfold {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

bool finite(double x) { return std::isfinite(x); }

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// c0 + c1 t + c2 t^2
struct Quadratic {
    double c0, c1, c2;
    double operator()(double t) const { return c0 + t * (c1 + t * c2); }

    double min_on_unit() const {
        double m = std::min((*this)(0.0), (*this)(1.0));
        if (c2 > 0.0) {
            const double t = -c1 / (2.0 * c2);
            if (t > 0.0 && t < 1.0) m = std::min(m, (*this)(t));
        }
        return m;
    }
};

// Derivative of a cubic Bezier coordinate with control values 0, p1, p2, p3.
Quadratic cubic_derivative(double p1, double p2, double p3) {
    return {3.0 * p1, 3.0 * (2.0 * p2 - 4.0 * p1), 3.0 * (3.0 * p1 - 3.0 * p2 + p3)};
}

// Derivative of a quadratic Bezier coordinate with control values 0, p1, p2.
Quadratic quad_derivative(double p1, double p2) {
    return {2.0 * p1, 2.0 * p2 - 4.0 * p1, 0.0};
}

struct HalfPoint {
    double uh;     // distance to nearest end, in [0, 1/2]
    double sign;   // +1 on the left half, -1 on the right half
    bool axis;     // exactly on u = 1/2
};

HalfPoint fold_half(double u) {
    if (u <= 0.5) return {u, 1.0, u == 0.5};
    return {1.0 - u, -1.0, false};
}

// Locate u on a uniform grid of `segments` cells spanning [0, span]; snaps to
// nodes that are within rounding of u.
struct GridLocation {
    int cell;      // segment index in [0, segments-1]
    double frac;   // position inside the segment
    bool on_node;  // frac == 0 exactly after snapping
};

GridLocation locate(double u, double span, int segments) {
    const double pos = u / span * segments;
    const double r = std::round(pos);
    GridLocation loc{};
    if (std::abs(pos - r) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, pos)) {
        loc.cell = static_cast<int>(r);
        loc.frac = 0.0;
        loc.on_node = true;
    } else {
        loc.cell = static_cast<int>(std::floor(pos));
        loc.frac = pos - loc.cell;
        loc.on_node = false;
    }
    if (loc.cell >= segments) {
        loc.cell = segments - 1;
        loc.frac = 1.0;
        loc.on_node = false;
    }
    loc.cell = std::max(loc.cell, 0);
    return loc;
}

double node_value(const std::vector<double>& heights, int i, int last_index_zero) {
    // Node 0 is the implicit origin; node `last_index_zero` (if >= 0) is the
    // implicit far end of a non-symmetric polyline.
    if (i == 0 || i == last_index_zero) return 0.0;
    return heights[static_cast<std::size_t>(i - 1)];
}

CurveSample eval_polyline(const PolylineParams& p, double u) {
    CurveSample s{u, 0.0, 0.0};
    if (p.symmetric) {
        const int n = static_cast<int>(p.heights.size());
        const HalfPoint hp = fold_half(u);
        const GridLocation loc = locate(hp.uh, 0.5, n);
        const double du = 0.5 / n;
        const double v0 = node_value(p.heights, loc.cell, -1);
        const double v1 = node_value(p.heights, loc.cell + 1, -1);
        s.f = loc.on_node ? v0 : (loc.frac == 1.0 ? v1 : v0 + (v1 - v0) * loc.frac);
        s.fprime = hp.axis ? 0.0 : hp.sign * (v1 - v0) / du;
        return s;
    }
    const int m = static_cast<int>(p.heights.size()) + 1;
    const GridLocation loc = locate(u, 1.0, m);
    const double du = 1.0 / m;
    const double v0 = node_value(p.heights, loc.cell, m);
    const double v1 = node_value(p.heights, loc.cell + 1, m);
    s.f = loc.on_node ? v0 : (loc.frac == 1.0 ? v1 : v0 + (v1 - v0) * loc.frac);
    s.fprime = (v1 - v0) / du;
    return s;
}

// t in [0,1] with u(t) = target for a strictly increasing u(t).
template <class UFn>
double invert_monotone(UFn&& u_of_t, double target) {
    if (target <= 0.0) return 0.0;
    if (target >= 0.5) return 1.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (u_of_t(mid) < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

BezierState quad_state(const QuadBezierParams& p, double t) {
    const double s = 1.0 - t;
    BezierState b;
    b.t = t;
    b.u = 2.0 * p.a * s * t + 0.5 * t * t;
    b.v = 2.0 * p.b * s * t + p.h * t * t;
    b.du = 2.0 * p.a * (1.0 - 2.0 * t) + t;
    b.dv = 2.0 * p.b * (1.0 - 2.0 * t) + 2.0 * p.h * t;
    return b;
}

BezierState cubic_state(const CubicBezierParams& p, double t) {
    const double s = 1.0 - t;
    BezierState b;
    b.t = t;
    b.u = 3.0 * s * s * t * p.a + 3.0 * s * t * t * p.c + 0.5 * t * t * t;
    b.v = 3.0 * s * s * t * p.b + 3.0 * s * t * t * p.d + t * t * t * p.h;
    b.du = cubic_derivative(p.a, p.c, 0.5)(t);
    b.dv = cubic_derivative(p.b, p.d, p.h)(t);
    return b;
}

CurveSample eval_bezier(const CreaseCurve& curve, double u) {
    if (!curve.is_monotone()) {
        throw NonMonotoneError("cubic Bezier u(t) is not strictly increasing");
    }
    const HalfPoint hp = fold_half(u);
    const double t = invert_monotone([&](double tt) { return bezier_state(curve, tt).u; }, hp.uh);
    const BezierState b = bezier_state(curve, t);
    CurveSample s{u, t == 0.0 ? 0.0 : b.v, 0.0};
    s.fprime = hp.axis ? 0.0 : hp.sign * b.dv / b.du;
    return s;
}

void check_unit(double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("u must lie in [0,1], got " + fmt(u));
}

double get_number(const ParamMap& params, const std::string& name) {
    auto it = params.find(name);
    if (it == params.end()) throw DomainError("missing parameter '" + name + "'");
    if (const double* x = std::get_if<double>(&it->second)) return *x;
    throw DomainError("parameter '" + name + "' must be a number");
}

void reject_unknown(Family family, const ParamMap& params) {
    const auto& names = parameter_names(family);
    for (const auto& [key, _] : params) {
        if (std::find(names.begin(), names.end(), key) == names.end()) {
            throw DomainError("unknown parameter '" + key + "' for family " +
                              std::string(family_name(family)));
        }
    }
}

}  // namespace

void SheetSpec::check() const {
    require(finite(width) && width > 0.0, "sheet width must be positive, got " + fmt(width));
    require(finite(length) && length > 0.0, "sheet length must be positive, got " + fmt(length));
}

std::string_view family_name(Family family) {
    switch (family) {
        case Family::SineArc: return "sine-arc";
        case Family::Rectangle: return "rectangle";
        case Family::Rhombus: return "rhombus";
        case Family::Arc: return "arc";
        case Family::QuadBezier: return "quad-bezier";
        case Family::CubicBezier: return "cubic-bezier";
        case Family::Polyline: return "polyline";
    }
    return "unknown";
}

std::optional<Family> family_from_name(std::string_view name) {
    for (Family f : all_families()) {
        if (family_name(f) == name) return f;
    }
    return std::nullopt;
}

const std::vector<Family>& all_families() {
    static const std::vector<Family> families{Family::SineArc,    Family::Rectangle,
                                              Family::Rhombus,    Family::Arc,
                                              Family::QuadBezier, Family::CubicBezier,
                                              Family::Polyline};
    return families;
}

const std::vector<std::string>& parameter_names(Family family) {
    static const std::vector<std::string> none{};
    static const std::vector<std::string> h{"h"};
    static const std::vector<std::string> theta{"theta"};
    static const std::vector<std::string> quad{"a", "b", "h"};
    static const std::vector<std::string> cubic{"a", "b", "c", "d", "h"};
    static const std::vector<std::string> poly{"heights", "symmetric"};
    switch (family) {
        case Family::SineArc: return none;
        case Family::Rectangle:
        case Family::Rhombus: return h;
        case Family::Arc: return theta;
        case Family::QuadBezier: return quad;
        case Family::CubicBezier: return cubic;
        case Family::Polyline: return poly;
    }
    return none;
}

CreaseCurve::CreaseCurve(CurveParams params) : params_(std::move(params)) {
    if (const auto* c = std::get_if<CubicBezierParams>(&params_)) {
        monotone_ = cubic_derivative(c->a, c->c, 0.5).min_on_unit() > 0.0;
    }
}

CreaseCurve CreaseCurve::sine_arc() { return CreaseCurve(SineArcParams{}); }

CreaseCurve CreaseCurve::rectangle(double h) {
    require(finite(h) && h >= 0.0 && h <= 0.5, "rectangle: h must lie in [0, 1/2], got " + fmt(h));
    return CreaseCurve(RectangleParams{h});
}

CreaseCurve CreaseCurve::rhombus(double h) {
    require(finite(h) && h >= 0.0 && h <= 0.5,
            "rhombus: h must lie in [0, 1/2] so that w = sqrt(1/4 - h^2) is real, got " + fmt(h));
    return CreaseCurve(RhombusParams{h});
}

CreaseCurve CreaseCurve::arc(double theta) {
    require(finite(theta) && theta > 0.0 && theta <= kPi / 2.0,
            "arc: theta must lie in (0, pi/2], got " + fmt(theta));
    return CreaseCurve(ArcParams{theta});
}

CreaseCurve CreaseCurve::quad_bezier(double a, double b, double h) {
    require(finite(a) && a > 0.0 && a < 0.5, "quad-bezier: a must lie in (0, 1/2), got " + fmt(a));
    require(finite(b) && b >= 0.0, "quad-bezier: b must be nonnegative, got " + fmt(b));
    require(finite(h) && h >= 0.0, "quad-bezier: h must be nonnegative, got " + fmt(h));
    return CreaseCurve(QuadBezierParams{a, b, h});
}

CreaseCurve CreaseCurve::cubic_bezier(double a, double b, double c, double d, double h) {
    require(finite(a) && a >= 0.0 && a <= 0.5, "cubic-bezier: a must lie in [0, 1/2], got " + fmt(a));
    require(finite(c) && c >= 0.0 && c <= 0.5, "cubic-bezier: c must lie in [0, 1/2], got " + fmt(c));
    require(finite(b) && b >= 0.0, "cubic-bezier: b must be nonnegative, got " + fmt(b));
    require(finite(d) && d >= 0.0, "cubic-bezier: d must be nonnegative, got " + fmt(d));
    require(finite(h) && h >= 0.0, "cubic-bezier: h must be nonnegative, got " + fmt(h));
    return CreaseCurve(CubicBezierParams{a, b, c, d, h});
}

CreaseCurve CreaseCurve::polyline(std::vector<double> heights, bool symmetric) {
    require(!heights.empty(), "polyline: at least one node height is required");
    for (std::size_t i = 0; i < heights.size(); ++i) {
        require(finite(heights[i]) && heights[i] >= 0.0,
                "polyline: heights[" + std::to_string(i) + "] must be nonnegative, got " +
                    fmt(heights[i]));
    }
    return CreaseCurve(PolylineParams{std::move(heights), symmetric});
}

Family CreaseCurve::family() const { return static_cast<Family>(params_.index()); }

bool CreaseCurve::is_symmetric() const {
    if (const auto* p = std::get_if<PolylineParams>(&params_)) {
        if (p->symmetric) return true;
        const auto& v = p->heights;
        return std::equal(v.begin(), v.end(), v.rbegin());
    }
    return true;
}

bool CreaseCurve::is_bezier() const {
    return family() == Family::QuadBezier || family() == Family::CubicBezier;
}

bool CreaseCurve::is_piecewise_linear() const {
    const Family f = family();
    return f == Family::Polyline || f == Family::Rectangle || f == Family::Rhombus;
}

std::vector<Node> CreaseCurve::linear_nodes() const {
    return std::visit(
        overloaded{
            [](const RectangleParams& p) -> std::vector<Node> {
                if (p.h == 0.0) return {{0.0, 0.0}, {1.0, 0.0}};
                if (p.h == 0.5) return {{0.0, 0.0}, {0.5, 0.5}, {1.0, 0.0}};
                return {{0.0, 0.0}, {p.h, p.h}, {1.0 - p.h, p.h}, {1.0, 0.0}};
            },
            [](const RhombusParams& p) -> std::vector<Node> {
                return {{0.0, 0.0}, {0.5, p.h}, {1.0, 0.0}};
            },
            [](const PolylineParams& p) -> std::vector<Node> {
                std::vector<Node> nodes;
                if (p.symmetric) {
                    const int n = static_cast<int>(p.heights.size());
                    nodes.reserve(2 * n + 1);
                    nodes.push_back({0.0, 0.0});
                    for (int i = 1; i <= n; ++i) {
                        nodes.push_back({static_cast<double>(i) / (2.0 * n), p.heights[i - 1]});
                    }
                    for (int i = n - 1; i >= 0; --i) {
                        const double u = 1.0 - static_cast<double>(i) / (2.0 * n);
                        nodes.push_back({u, i == 0 ? 0.0 : p.heights[i - 1]});
                    }
                } else {
                    const int m = static_cast<int>(p.heights.size()) + 1;
                    nodes.reserve(m + 1);
                    nodes.push_back({0.0, 0.0});
                    for (int i = 1; i < m; ++i) {
                        nodes.push_back({static_cast<double>(i) / m, p.heights[i - 1]});
                    }
                    nodes.push_back({1.0, 0.0});
                }
                return nodes;
            },
            [](const auto&) -> std::vector<Node> { return {}; }},
        params_);
}

std::vector<double> CreaseCurve::breakpoints() const {
    std::vector<double> out;
    const auto nodes = linear_nodes();
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) out.push_back(nodes[i].u);
    if (is_bezier()) out.push_back(0.5);
    return out;
}

bool CreaseCurve::operator==(const CreaseCurve& other) const {
    if (params_.index() != other.params_.index()) return false;
    return std::visit(
        overloaded{
            [](const SineArcParams&, const SineArcParams&) { return true; },
            [](const RectangleParams& x, const RectangleParams& y) { return x.h == y.h; },
            [](const RhombusParams& x, const RhombusParams& y) { return x.h == y.h; },
            [](const ArcParams& x, const ArcParams& y) { return x.theta == y.theta; },
            [](const QuadBezierParams& x, const QuadBezierParams& y) {
                return x.a == y.a && x.b == y.b && x.h == y.h;
            },
            [](const CubicBezierParams& x, const CubicBezierParams& y) {
                return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d && x.h == y.h;
            },
            [](const PolylineParams& x, const PolylineParams& y) {
                return x.symmetric == y.symmetric && x.heights == y.heights;
            },
            [](const auto&, const auto&) { return false; }},
        params_, other.params_);
}

CreaseCurve make_curve(Family family, const ParamMap& params) {
    reject_unknown(family, params);
    switch (family) {
        case Family::SineArc: return CreaseCurve::sine_arc();
        case Family::Rectangle: return CreaseCurve::rectangle(get_number(params, "h"));
        case Family::Rhombus: return CreaseCurve::rhombus(get_number(params, "h"));
        case Family::Arc: return CreaseCurve::arc(get_number(params, "theta"));
        case Family::QuadBezier:
            return CreaseCurve::quad_bezier(get_number(params, "a"), get_number(params, "b"),
                                            get_number(params, "h"));
        case Family::CubicBezier:
            return CreaseCurve::cubic_bezier(get_number(params, "a"), get_number(params, "b"),
                                             get_number(params, "c"), get_number(params, "d"),
                                             get_number(params, "h"));
        case Family::Polyline: {
            auto it = params.find("heights");
            if (it == params.end()) throw DomainError("missing parameter 'heights'");
            const auto* heights = std::get_if<std::vector<double>>(&it->second);
            if (!heights) throw DomainError("parameter 'heights' must be a list of numbers");
            bool symmetric = true;
            if (auto s = params.find("symmetric"); s != params.end()) {
                const bool* flag = std::get_if<bool>(&s->second);
                if (!flag) throw DomainError("parameter 'symmetric' must be a boolean");
                symmetric = *flag;
            }
            return CreaseCurve::polyline(*heights, symmetric);
        }
    }
    throw DomainError("unknown curve family");
}

CreaseCurve make_curve(std::string_view family_id, const ParamMap& params) {
    const auto family = family_from_name(family_id);
    if (!family) throw DomainError("unknown curve family '" + std::string(family_id) + "'");
    return make_curve(*family, params);
}

ParamMap curve_parameters(const CreaseCurve& curve) {
    return std::visit(
        overloaded{
            [](const SineArcParams&) { return ParamMap{}; },
            [](const RectangleParams& p) { return ParamMap{{"h", p.h}}; },
            [](const RhombusParams& p) { return ParamMap{{"h", p.h}}; },
            [](const ArcParams& p) { return ParamMap{{"theta", p.theta}}; },
            [](const QuadBezierParams& p) { return ParamMap{{"a", p.a}, {"b", p.b}, {"h", p.h}}; },
            [](const CubicBezierParams& p) {
                return ParamMap{{"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}, {"h", p.h}};
            },
            [](const PolylineParams& p) {
                return ParamMap{{"heights", p.heights}, {"symmetric", p.symmetric}};
            }},
        curve.params());
}

std::vector<double> parameter_vector(const CreaseCurve& curve) {
    return std::visit(
        overloaded{
            [](const SineArcParams&) { return std::vector<double>{}; },
            [](const RectangleParams& p) { return std::vector<double>{p.h}; },
            [](const RhombusParams& p) { return std::vector<double>{p.h}; },
            [](const ArcParams& p) { return std::vector<double>{p.theta}; },
            [](const QuadBezierParams& p) { return std::vector<double>{p.a, p.b, p.h}; },
            [](const CubicBezierParams& p) { return std::vector<double>{p.a, p.b, p.c, p.d, p.h}; },
            [](const PolylineParams& p) { return p.heights; }},
        curve.params());
}

CreaseCurve curve_from_vector(Family family, std::span<const double> x, bool symmetric) {
    auto need = [&](std::size_t n) {
        if (x.size() != n) {
            throw DomainError(std::string(family_name(family)) + " expects " + std::to_string(n) +
                              " parameters, got " + std::to_string(x.size()));
        }
    };
    switch (family) {
        case Family::SineArc: need(0); return CreaseCurve::sine_arc();
        case Family::Rectangle: need(1); return CreaseCurve::rectangle(x[0]);
        case Family::Rhombus: need(1); return CreaseCurve::rhombus(x[0]);
        case Family::Arc: need(1); return CreaseCurve::arc(x[0]);
        case Family::QuadBezier: need(3); return CreaseCurve::quad_bezier(x[0], x[1], x[2]);
        case Family::CubicBezier:
            need(5);
            return CreaseCurve::cubic_bezier(x[0], x[1], x[2], x[3], x[4]);
        case Family::Polyline:
            return CreaseCurve::polyline(std::vector<double>(x.begin(), x.end()), symmetric);
    }
    throw DomainError("unknown curve family");
}

BezierState bezier_state(const CreaseCurve& curve, double t) {
    if (const auto* q = std::get_if<QuadBezierParams>(&curve.params())) return quad_state(*q, t);
    if (const auto* c = std::get_if<CubicBezierParams>(&curve.params())) return cubic_state(*c, t);
    throw DomainError("bezier_state: curve is not a Bezier family");
}

double bezier_min_du(const CreaseCurve& curve) {
    if (const auto* q = std::get_if<QuadBezierParams>(&curve.params())) {
        return quad_derivative(q->a, 0.5).min_on_unit();
    }
    if (const auto* c = std::get_if<CubicBezierParams>(&curve.params())) {
        return cubic_derivative(c->a, c->c, 0.5).min_on_unit();
    }
    throw DomainError("bezier_min_du: curve is not a Bezier family");
}

CurveSample eval(const CreaseCurve& curve, double u) {
    check_unit(u);
    return std::visit(
        overloaded{
            [u](const SineArcParams&) {
                const HalfPoint hp = fold_half(u);
                return CurveSample{u, std::sin(kPi * hp.uh) / kPi,
                                   hp.axis ? 0.0 : hp.sign * std::cos(kPi * hp.uh)};
            },
            [u](const RectangleParams& p) {
                const HalfPoint hp = fold_half(u);
                const bool ramp = hp.uh < p.h;
                return CurveSample{u, std::min(hp.uh, p.h), ramp ? hp.sign : 0.0};
            },
            [u](const RhombusParams& p) {
                const HalfPoint hp = fold_half(u);
                return CurveSample{u, 2.0 * p.h * hp.uh, hp.axis ? 0.0 : hp.sign * 2.0 * p.h};
            },
            [u](const ArcParams& p) {
                const HalfPoint hp = fold_half(u);
                const double phase = p.theta * (2.0 * hp.uh - 1.0);
                return CurveSample{u, (std::cos(phase) - std::cos(p.theta)) / (2.0 * p.theta),
                                   hp.axis ? 0.0 : -hp.sign * std::sin(phase)};
            },
            [u](const PolylineParams& p) { return eval_polyline(p, u); },
            [&curve, u](const auto&) { return eval_bezier(curve, u); }},
        curve.params());
}

std::vector<CurveSample> sample_uniform(const CreaseCurve& curve, int n) {
    if (n < 2) throw DomainError("sample_uniform: n must be at least 2");
    std::vector<CurveSample> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    if (!curve.is_bezier()) {
        for (int k = 0; k <= n; ++k) {
            const double u = (k == n) ? 1.0 : static_cast<double>(k) / n;
            out.push_back(eval(curve, u));
        }
        return out;
    }
    if (!curve.is_monotone()) {
        throw NonMonotoneError("cubic Bezier u(t) is not strictly increasing");
    }
    for (int k = 0; k <= n; ++k) {
        const bool left = 2 * k <= n;
        const double t = left ? 2.0 * k / n : 2.0 * (n - k) / n;
        const BezierState b = bezier_state(curve, t);
        const double u = left ? b.u : 1.0 - b.u;
        const bool axis = 2 * k == n;
        const double slope = axis ? 0.0 : (left ? 1.0 : -1.0) * b.dv / b.du;
        out.push_back({u, t == 0.0 ? 0.0 : b.v, slope});
    }
    return out;
}

double max_height(const CreaseCurve& curve) {
    return std::visit(
        overloaded{
            [](const SineArcParams&) { return 1.0 / kPi; },
            [](const RectangleParams& p) { return p.h; },
            [](const RhombusParams& p) { return p.h; },
            [](const ArcParams& p) { return (1.0 - std::cos(p.theta)) / (2.0 * p.theta); },
            [](const PolylineParams& p) { return *std::max_element(p.heights.begin(), p.heights.end()); },
            [&curve](const auto&) {
                // Stationary points of v(t) plus the ends.
                double best = std::max(0.0, bezier_state(curve, 1.0).v);
                Quadratic dv{};
                if (const auto* q = std::get_if<QuadBezierParams>(&curve.params())) {
                    dv = quad_derivative(q->b, q->h);
                } else {
                    const auto& c = std::get<CubicBezierParams>(curve.params());
                    dv = cubic_derivative(c.b, c.d, c.h);
                }
                std::array<double, 2> roots{-1.0, -1.0};
                if (dv.c2 == 0.0) {
                    if (dv.c1 != 0.0) roots[0] = -dv.c0 / dv.c1;
                } else {
                    const double disc = dv.c1 * dv.c1 - 4.0 * dv.c2 * dv.c0;
                    if (disc >= 0.0) {
                        const double sq = std::sqrt(disc);
                        roots[0] = (-dv.c1 - sq) / (2.0 * dv.c2);
                        roots[1] = (-dv.c1 + sq) / (2.0 * dv.c2);
                    }
                }
                for (double t : roots) {
                    if (t > 0.0 && t < 1.0) best = std::max(best, bezier_state(curve, t).v);
                }
                return best;
            }},
        curve.params());
}

}  // namespace pillowfold
