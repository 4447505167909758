#include "pillowfold/volume.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pillowfold/errors.hpp"

namespace pillowfold {

namespace {

constexpr double kPi = std::numbers::pi;

struct Split {
    double left = 0.0;
    double right = 0.0;
    double total() const { return left + right; }
};

// sqrt(1 - s^2); strict mode rejects over-steep slopes, lenient mode gives 0.
double width_factor(double slope, bool strict) {
    if (strict) return development_factor(slope);
    const double r = 1.0 - slope * slope;
    return r > 0.0 ? std::sqrt(r) : 0.0;
}

// Exact integral of f (L - 2f) over a linear piece with end heights a, b.
double piece_integral(double a, double b, double du, double length) {
    return du * (length * (a + b) / 2.0 - 2.0 * (a * a + a * b + b * b) / 3.0);
}

Split functional_linear(const std::vector<Node>& nodes, double length, bool strict) {
    Split out;
    auto add = [&](double u0, double f0, double u1, double f1, double factor) {
        const double part = 2.0 * factor * piece_integral(f0, f1, u1 - u0, length);
        (u1 <= 0.5 ? out.left : out.right) += part;
    };
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const Node& p = nodes[i];
        const Node& q = nodes[i + 1];
        const double du = q.u - p.u;
        if (du <= 0.0) continue;
        const double factor = width_factor((q.f - p.f) / du, strict);
        if (p.u < 0.5 && q.u > 0.5) {
            const double fm = p.f + (q.f - p.f) * (0.5 - p.u) / du;
            add(p.u, p.f, 0.5, fm, factor);
            add(0.5, fm, q.u, q.f, factor);
        } else {
            add(p.u, p.f, q.u, q.f, factor);
        }
    }
    return out;
}

Split functional_bezier(const CreaseCurve& curve, double length, int n, bool strict) {
    if (strict && !curve.is_monotone()) {
        throw NonMonotoneError("cubic Bezier u(t) is not strictly increasing");
    }
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double t = (k + 0.5) / n;
        const BezierState b = bezier_state(curve, t);
        double factor = 0.0;
        if (b.du > 0.0) {
            factor = b.du * width_factor(b.dv / b.du, strict);
        } else if (strict) {
            throw NonMonotoneError("Bezier u'(t) <= 0 at t = " + std::to_string(t));
        }
        sum += b.v * (length - 2.0 * b.v) * factor;
    }
    // Each half contributes 2 * integral over the half-curve.
    const double half = 2.0 * sum / n;
    return {half, half};
}

Split functional_smooth(const CreaseCurve& curve, double length, int n, bool strict) {
    Split out;
    for (int k = 0; k < n; ++k) {
        const double u = (k + 0.5) / n;
        const CurveSample s = eval(curve, u);
        const double term = 2.0 * s.f * (length - 2.0 * s.f) * width_factor(s.fprime, strict) / n;
        (u < 0.5 ? out.left : out.right) += term;
    }
    return out;
}

Split functional(const CreaseCurve& curve, double length, int n, bool strict) {
    if (curve.is_piecewise_linear()) return functional_linear(curve.linear_nodes(), length, strict);
    if (n < 1) throw DomainError("quadrature needs at least one cell");
    if (curve.is_bezier()) return functional_bezier(curve, length, n, strict);
    return functional_smooth(curve, length, n, strict);
}

void check_quadrature_inputs(const CreaseCurve& curve, const SheetSpec& sheet, int n) {
    sheet.check();
    if (n < 10) throw DomainError("volume_quadrature: n must be at least 10");
    if (!(sheet.normalized_length() > 2.0 * max_height(curve))) {
        throw GeometryError("sheet length must exceed twice the crease height (ends collide)");
    }
}

int reported_size(const CreaseCurve& curve, int n) {
    if (!curve.is_piecewise_linear()) return n;
    return static_cast<int>(curve.linear_nodes().size()) - 1;
}

}  // namespace

std::string_view method_name(VolumeMethod method) {
    switch (method) {
        case VolumeMethod::ClosedForm: return "closed_form";
        case VolumeMethod::Quadrature: return "quadrature";
        case VolumeMethod::Mesh: return "mesh";
    }
    return "unknown";
}

double volume_functional(const CreaseCurve& curve, double length, int n) {
    return functional(curve, length, n, false).total();
}

VolumeResult volume_quadrature(const CreaseCurve& curve, const SheetSpec& sheet, int n) {
    check_quadrature_inputs(curve, sheet, n);
    const double w = sheet.width;
    const double value = w * w * w * functional(curve, sheet.normalized_length(), n, true).total();
    return {value, VolumeMethod::Quadrature, reported_size(curve, n)};
}

HalfVolumes half_volumes(const CreaseCurve& curve, const SheetSpec& sheet, int n) {
    check_quadrature_inputs(curve, sheet, n);
    const double w3 = sheet.width * sheet.width * sheet.width;
    const Split s = functional(curve, sheet.normalized_length(), n, true);
    return {w3 * s.left, w3 * s.right};
}

VolumeResult volume_mesh(const FoldedMesh& mesh) {
    if (mesh.triangles.empty()) return {0.0, VolumeMethod::Mesh, 0};
    const ManifoldCheck check = check_manifold(mesh);
    if (!check.edge_manifold || !check.oriented) {
        throw NotWatertightError("volume_mesh: mesh is not a closed, consistently oriented surface");
    }
    // Tetrahedra against the first vertex rather than the origin keeps the sum
    // well conditioned for translated meshes.
    const Vec3 ref = mesh.vertices.front();
    double sum = 0.0;
    for (const auto& t : mesh.triangles) {
        const Vec3 a = mesh.vertices[t[0]] - ref;
        const Vec3 b = mesh.vertices[t[1]] - ref;
        const Vec3 c = mesh.vertices[t[2]] - ref;
        sum += dot(a, cross(b, c));
    }
    return {sum / 6.0, VolumeMethod::Mesh, static_cast<int>(mesh.triangles.size())};
}

VolumeResult circle_volume(const SheetSpec& sheet) {
    sheet.check();
    const double length = sheet.normalized_length();
    if (length < 2.0 / kPi) {
        throw GeometryError("circle_volume: sheet length is below the profile diameter 2/pi");
    }
    const double w = sheet.width;
    const double value = w * w * w * (length / kPi - 16.0 / (3.0 * kPi * kPi * kPi));
    return {value, VolumeMethod::ClosedForm, 0};
}

VolumeResult rectangle_volume(double h, const SheetSpec& sheet) {
    sheet.check();
    const double length = sheet.normalized_length();
    const double limit = std::min(0.5, length / 2.0);
    if (!(h >= 0.0 && h <= limit)) {
        throw DomainError("rectangle_volume: h must lie in [0, min(1/2, L/2)], got " + std::to_string(h));
    }
    const double w = sheet.width;
    return {w * w * w * 2.0 * h * (1.0 - 2.0 * h) * (length - 2.0 * h), VolumeMethod::ClosedForm, 0};
}

Maximum rectangle_max(const SheetSpec& sheet) {
    sheet.check();
    const double length = sheet.normalized_length();
    // d/dh [2h(1-2h)(L-2h)] = 24h^2 - 8(1+L)h + 2L; the smaller root is the maximum.
    double h = ((1.0 + length) - std::sqrt(length * length - length + 1.0)) / 6.0;
    if (length == std::numbers::sqrt2) {
        h = 1.0 / 6.0 + 1.0 / (3.0 * std::numbers::sqrt2) - std::sqrt(3.0 - std::numbers::sqrt2) / 6.0;
    }
    return {h, rectangle_volume(h, sheet).value};
}

VolumeResult rhombus_volume(double h) {
    if (!(h >= 0.0 && h <= 0.5)) {
        throw DomainError("rhombus_volume: h must lie in [0, 1/2], got " + std::to_string(h));
    }
    const double w = std::sqrt(std::max(0.0, 0.25 - h * h));
    const double value = 4.0 * (0.5 * std::numbers::sqrt2 * w * h - 2.0 / 3.0 * h * h * w);
    return {value, VolumeMethod::ClosedForm, 0};
}

Maximum rhombus_max() {
    return golden_section_max([](double h) { return rhombus_volume(h).value; }, 0.0, 0.5);
}

VolumeResult arc_volume(double theta, const SheetSpec& sheet, int n) {
    return volume_quadrature(CreaseCurve::arc(theta), sheet, n);
}

Maximum arc_max(const SheetSpec& sheet, int n) {
    sheet.check();
    return golden_section_max([&](double theta) { return arc_volume(theta, sheet, n).value; },
                              1e-9, kPi / 2.0);
}

VolumeResult paper_bag_volume(double w, double h) {
    if (!(w > 0.0) || !(h > 0.0) || !std::isfinite(w) || !std::isfinite(h)) {
        throw DomainError("paper_bag_volume: width and height must be positive");
    }
    const double value = w * w * w * (h / (kPi * w) - 0.142 * (1.0 - std::pow(10.0, -h / w)));
    return {value, VolumeMethod::ClosedForm, 0};
}

CreaseCurve symmetrize_best_half(const CreaseCurve& curve, const SheetSpec& sheet) {
    if (curve.is_symmetric()) return curve;
    const auto& poly = std::get<PolylineParams>(curve.params());
    std::vector<double> heights = poly.heights;
    // Need a node on u = 1/2: refine an odd segment count by inserting midpoints.
    if ((heights.size() + 1) % 2 == 1) {
        std::vector<double> fine;
        fine.reserve(2 * heights.size() + 1);
        double prev = 0.0;
        for (double v : heights) {
            fine.push_back(0.5 * (prev + v));
            fine.push_back(v);
            prev = v;
        }
        fine.push_back(0.5 * prev);
        heights = std::move(fine);
    }
    const CreaseCurve full = CreaseCurve::polyline(heights, false);
    const HalfVolumes halves = half_volumes(full, sheet);
    const std::size_t half_count = (heights.size() + 1) / 2;  // nodes 1..N, node N on u = 1/2
    std::vector<double> kept(half_count);
    if (halves.left >= halves.right) {
        std::copy(heights.begin(), heights.begin() + static_cast<std::ptrdiff_t>(half_count), kept.begin());
    } else {
        std::copy(heights.rbegin(), heights.rbegin() + static_cast<std::ptrdiff_t>(half_count), kept.begin());
    }
    return CreaseCurve::polyline(std::move(kept), true);
}

Maximum golden_section_max(const std::function<double(double)>& fn, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = fn(c), fd = fn(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = fn(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, fn(x)};
}

}  // namespace pillowfold
