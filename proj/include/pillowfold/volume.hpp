#pragma once

#include <functional>
#include <string_view>

#include "pillowfold/curve.hpp"
#include "pillowfold/fold.hpp"

namespace pillowfold {

inline constexpr int kDefaultQuadrature = 2000;

enum class VolumeMethod { ClosedForm, Quadrature, Mesh };

std::string_view method_name(VolumeMethod method);

struct VolumeResult {
    double value = 0.0;
    VolumeMethod method = VolumeMethod::Quadrature;
    int n = 0;  // discretization size, 0 for closed forms
};

// Location and value of a one-dimensional maximum.
struct Maximum {
    double argument = 0.0;
    double value = 0.0;
};

// V[f] = 2 * int_0^1 f (L - 2f) sqrt(1 - f'^2) du for the symmetric box.
//  - smooth families: composite midpoint in u on n cells;
//  - Bezier families: V = 4 * int_0^1 v (L - 2v) sqrt(u'^2 - v'^2) dt, midpoint in t;
//  - piecewise-linear families: exact per linear piece (n is ignored and the
//    piece count is reported).
// Throws InvalidCurveError, NonMonotoneError, GeometryError (L <= 2 max f).
VolumeResult volume_quadrature(const CreaseCurve& curve, const SheetSpec& sheet,
                               int n = kDefaultQuadrature);

// Same functional for a unit-width sheet of length `length`, without the
// validity and collision checks: over-steep slopes contribute zero width.
// This is the optimizer's objective.
double volume_functional(const CreaseCurve& curve, double length, int n = kDefaultQuadrature);

// Contributions of u in [0, 1/2] and [1/2, 1] to volume_quadrature.
struct HalfVolumes {
    double left = 0.0;
    double right = 0.0;
};
HalfVolumes half_volumes(const CreaseCurve& curve, const SheetSpec& sheet,
                         int n = kDefaultQuadrature);

// Divergence-theorem volume: sum of signed tetrahedra over the faces.
// Throws NotWatertightError.
VolumeResult volume_mesh(const FoldedMesh& mesh);

// Circular profile of radius 1/pi: L/pi - 16/(3 pi^3) for unit width.
VolumeResult circle_volume(const SheetSpec& sheet);

// Caramel-box prism 2h (1 - 2h)(L - 2h).
VolumeResult rectangle_volume(double h, const SheetSpec& sheet);
Maximum rectangle_max(const SheetSpec& sheet);

// Rhombic profile on the 1 x sqrt(2) sheet: 4 (sqrt(2)/2 w h - 2/3 h^2 w),
// w = sqrt(1/4 - h^2).
VolumeResult rhombus_volume(double h);
Maximum rhombus_max();

// Circular-arc (Kepert) profile, evaluated by quadrature.
VolumeResult arc_volume(double theta, const SheetSpec& sheet, int n = 20000);
Maximum arc_max(const SheetSpec& sheet, int n = 20000);

// Approximate optimum of the teabag problem, w^3 (h/(pi w) - 0.142 (1 - 10^(-h/w))).
VolumeResult paper_bag_volume(double w, double h);

// Mirror the half with the larger volume onto the other half. Symmetric
// curves are returned unchanged; non-symmetric polylines come back as
// symmetric polylines.
CreaseCurve symmetrize_best_half(const CreaseCurve& curve, const SheetSpec& sheet);

// Golden-section search for the maximum of a unimodal function on [lo, hi].
Maximum golden_section_max(const std::function<double(double)>& fn, double lo, double hi,
                           double tol = 1e-10);

}  // namespace pillowfold
