#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pillowfold/curve.hpp"

namespace pillowfold {

// |f'| may exceed 1 by this much and still count as developable; boundary
// curves (sine arc, rectangle ramps) reach |f'| = 1 exactly.
inline constexpr double kSlopeTolerance = 1e-9;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct ValidationReport {
    bool valid = true;
    double max_abs_slope = 0.0;
    double max_tangent_angle = 0.0;  // radians, atan(max_abs_slope)
    std::vector<Interval> violations;
    int n_samples = 0;
    std::string reason;  // set when evaluation itself failed

    // Only filled by discrete_triangle_check: smallest SQ^2 and where it occurs.
    double min_leg_squared = std::numeric_limits<double>::quiet_NaN();
    double min_leg_u = std::numeric_limits<double>::quiet_NaN();
};

ValidationReport validate(const CreaseCurve& curve, int n_samples = 10000);

// Stepped-rectangle check: each step [u, u + delta_w] must leave a real leg
// SQ^2 = delta_w^2 - (delta f)^2 >= 0.
ValidationReport discrete_triangle_check(const CreaseCurve& curve, double delta_w);

// sqrt(1 - slope^2). Radicands that are negative only because |slope| exceeds 1
// within kSlopeTolerance clamp to 0; larger violations throw InvalidCurveError.
double development_factor(double slope);

struct ProfilePoint {
    double x = 0.0;
    double z = 0.0;
};

struct CrossSectionProfile {
    std::vector<ProfilePoint> points;
    double width = 0.0;
    double height = 0.0;
};

// Profile (x(u), f(u)) with x(u) = integral of sqrt(1 - f'^2), composite
// midpoint on n cells split at the curve's kinks.
CrossSectionProfile compute_profile(const CreaseCurve& curve, int n = 2000);

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend bool operator==(Vec3 a, Vec3 b) { return a.x == b.x && a.y == b.y && a.z == b.z; }
};

double dot(Vec3 a, Vec3 b);
Vec3 cross(Vec3 a, Vec3 b);
double norm(Vec3 a);

enum class Part : std::uint8_t { Top, Bottom, EndWallNear, EndWallFar };

std::string_view part_name(Part part);

struct FoldedMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;  // counterclockwise seen from outside
    std::vector<Part> part_labels;               // one per triangle
    bool watertight = false;
};

struct ManifoldCheck {
    bool edge_manifold = false;  // every undirected edge used by exactly two triangles
    bool oriented = false;       // every directed edge used exactly once
    int vertices = 0;
    int edges = 0;
    int faces = 0;
    int euler_characteristic() const { return vertices - edges + faces; }
};

ManifoldCheck check_manifold(const FoldedMesh& mesh);

// Closed symmetric box: top z = +f, bottom z = -f, end walls at
// y = +-(L/2 - f). Stations follow sample_uniform(curve, resolution); strip
// widths use the chord of the development so every strip is an exact
// isometric image of its development quad. f == 0 everywhere gives an empty
// mesh; an interior station with f == 0 splits the box into separate closed
// solids that do not share vertices, and flat stretches are left out.
FoldedMesh build_mesh(const CreaseCurve& curve, const SheetSpec& sheet, int resolution = 2000);

// Station positions x_k of build_mesh (chord-developed profile), unit width.
std::vector<double> chord_profile_x(const std::vector<CurveSample>& samples);

struct Plane {
    Vec3 point;
    Vec3 normal;  // unit
};

struct CreaseCurve3D {
    std::vector<Vec3> points;
    Plane plane;
};

// Largest distance of a crease point from its plane.
double planarity_residual(const CreaseCurve3D& crease);

// Near-end top crease (x(u), L/2 - f(u), f(u)), lying in y + z = L/2.
CreaseCurve3D extract_crease_3d(const CreaseCurve& curve, const SheetSpec& sheet, int n = 2000);

// Reflect p across a plane.
Vec3 reflect(const Plane& plane, Vec3 p);

// Two-reflection construction with top and bottom rulings horizontal. Angles
// in radians; theta1 + theta2 = pi, alpha1 = theta2/2, alpha2 = theta1/2.
struct AsymmetricParams {
    double theta1 = std::numbers::pi / 2.0;
    double theta2 = std::numbers::pi / 2.0;
    double alpha1 = std::numbers::pi / 4.0;
    double alpha2 = std::numbers::pi / 4.0;
    double wall_depth = 0.0;

    // Fills the dependent angles. Throws DomainError unless 0 < theta1 < pi
    // and wall_depth >= 0.
    static AsymmetricParams from_theta1(double theta1, double wall_depth = 0.0);
};

// Top cylinder swept along y, reflected across R1 (trace through (L/2, 0) at
// alpha1 to the horizontal) to form the wall, and across R2 (trace through
// (L/2, -wall_depth) at alpha2) to form the bottom. theta1 = pi/2 with
// wall_depth = 0 reproduces build_mesh vertex for vertex.
FoldedMesh build_asymmetric_mesh(const CreaseCurve& curve, const SheetSpec& sheet,
                                 const AsymmetricParams& params, int resolution = 2000);

// Crease planes of the near end of an asymmetric build, in sheet units.
Plane reflection_plane_r1(const SheetSpec& sheet, const AsymmetricParams& params);
Plane reflection_plane_r2(const SheetSpec& sheet, const AsymmetricParams& params);

}  // namespace pillowfold
