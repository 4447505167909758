#pragma once

#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pillowfold {

// The flat sheet (one face of the envelope). Curves are stored normalized to
// unit width; a sheet of width w realizes F(U) = w * f(U / w).
struct SheetSpec {
    double width = 1.0;
    double length = std::numbers::sqrt2;

    // Throws DomainError unless width > 0 and length > 0.
    void check() const;
    // Length in units of the sheet width.
    double normalized_length() const { return length / width; }
};

enum class Family { SineArc, Rectangle, Rhombus, Arc, QuadBezier, CubicBezier, Polyline };

std::string_view family_name(Family family);
std::optional<Family> family_from_name(std::string_view name);
const std::vector<Family>& all_families();

struct SineArcParams {};
// Slope +-1 ramps joined by a plateau at height h.
struct RectangleParams {
    double h = 0.0;
};
// Tent of apex height h at u = 1/2.
struct RhombusParams {
    double h = 0.0;
};
// Circular arc of half-angle theta with unit arc length per half-perimeter.
struct ArcParams {
    double theta = 1.0;
};
// Half-curve P0(0,0), P1(a,b), P2(1/2,h), mirrored about u = 1/2.
struct QuadBezierParams {
    double a = 0.25, b = 0.0, h = 0.0;
};
// Half-curve P0(0,0), P1(a,b), P2(c,d), P3(1/2,h), mirrored about u = 1/2.
struct CubicBezierParams {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0, h = 0.0;
};
// Symmetric: heights[i-1] sits at u = i/(2N), i = 1..N, mirrored about 1/2.
// Non-symmetric: heights are the interior nodes of a uniform polyline over
// [0,1] with M = heights.size() + 1 segments and f(0) = f(1) = 0.
struct PolylineParams {
    std::vector<double> heights;
    bool symmetric = true;
};

using CurveParams = std::variant<SineArcParams, RectangleParams, RhombusParams, ArcParams,
                                 QuadBezierParams, CubicBezierParams, PolylineParams>;

// A node of a piecewise-linear crease function.
struct Node {
    double u;
    double f;
};

class CreaseCurve {
public:
    static CreaseCurve sine_arc();
    static CreaseCurve rectangle(double h);
    static CreaseCurve rhombus(double h);
    static CreaseCurve arc(double theta);
    static CreaseCurve quad_bezier(double a, double b, double h);
    static CreaseCurve cubic_bezier(double a, double b, double c, double d, double h);
    static CreaseCurve polyline(std::vector<double> heights, bool symmetric = true);

    Family family() const;
    const CurveParams& params() const { return params_; }

    bool is_symmetric() const;
    bool is_bezier() const;
    bool is_piecewise_linear() const;
    // False only for cubic half-curves whose u(t) is not strictly increasing.
    bool is_monotone() const { return monotone_; }

    // Full-domain nodes for piecewise-linear families, sorted by u, from
    // (0,0) to (1,0). Empty for smooth families.
    std::vector<Node> linear_nodes() const;
    // Kinks strictly inside (0,1).
    std::vector<double> breakpoints() const;

    bool operator==(const CreaseCurve& other) const;

private:
    explicit CreaseCurve(CurveParams params);

    CurveParams params_;
    bool monotone_ = true;
};

struct CurveSample {
    double u = 0.0;
    double f = 0.0;
    double fprime = 0.0;
};

// Point and parametric derivatives of a Bezier half-curve.
struct BezierState {
    double t = 0.0;
    double u = 0.0;
    double v = 0.0;
    double du = 0.0;
    double dv = 0.0;
};

using ParamValue = std::variant<double, bool, std::vector<double>>;
using ParamMap = std::map<std::string, ParamValue>;

// Names accepted by make_curve for a family, in canonical order.
const std::vector<std::string>& parameter_names(Family family);

CreaseCurve make_curve(Family family, const ParamMap& params);
CreaseCurve make_curve(std::string_view family_id, const ParamMap& params);
ParamMap curve_parameters(const CreaseCurve& curve);

// Flat parameter vector used by the optimizer: (a,b,h), (a,b,c,d,h) or the
// polyline heights. Other families: their scalar parameter, if any.
std::vector<double> parameter_vector(const CreaseCurve& curve);
CreaseCurve curve_from_vector(Family family, std::span<const double> values,
                              bool symmetric = true);

// f(u) and df/du on [0,1]. At a kink of a mirrored family the one-sided
// derivative on the side facing u = 1/2 is reported (0 on the axis itself);
// non-symmetric polylines report the right derivative.
CurveSample eval(const CreaseCurve& curve, double u);

// n + 1 samples with strictly increasing u from 0 to 1. Bezier families are
// sampled uniformly in t on each half instead of uniformly in u.
std::vector<CurveSample> sample_uniform(const CreaseCurve& curve, int n);

// State of the (unmirrored) Bezier half-curve at t in [0,1].
BezierState bezier_state(const CreaseCurve& curve, double t);

// Smallest u'(t) of the Bezier half-curve over [0,1].
double bezier_min_du(const CreaseCurve& curve);

double max_height(const CreaseCurve& curve);

}  // namespace pillowfold
