#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "pillowfold/errors.hpp"
#include "pillowfold/fold.hpp"

namespace pillowfold {

namespace {

// Cross-section corners of one station, in the yz-plane of x = x_k.
struct Ring {
    double x;
    Vec3 top_near, top_far, bottom_near, bottom_far;
};

void require_valid(const CreaseCurve& curve, int samples, const char* who) {
    const ValidationReport report = validate(curve, std::max(samples, 2000));
    if (!report.valid) {
        throw InvalidCurveError(std::string(who) + ": curve is not developable (max |f'| = " +
                                std::to_string(report.max_abs_slope) + ")" +
                                (report.reason.empty() ? "" : ": " + report.reason));
    }
}

class MeshAssembler {
public:
    int vertex(Vec3 p) {
        auto key = std::make_tuple(component_, p.x, p.y, p.z);
        auto [it, inserted] = index_.try_emplace(key, static_cast<int>(mesh_.vertices.size()));
        if (inserted) mesh_.vertices.push_back(p);
        return it->second;
    }

    // Later vertices no longer fuse with earlier ones.
    void next_component() { ++component_; }

    void quad(int a, int b, int c, int d, Part part) {
        triangle(a, b, c, part);
        triangle(a, c, d, part);
    }

    FoldedMesh finish() {
        mesh_.watertight = !mesh_.triangles.empty() && [&] {
            const ManifoldCheck check = check_manifold(mesh_);
            return check.edge_manifold && check.oriented;
        }();
        return std::move(mesh_);
    }

private:
    void triangle(int a, int b, int c, Part part) {
        if (a == b || b == c || a == c) return;
        mesh_.triangles.push_back({a, b, c});
        mesh_.part_labels.push_back(part);
    }

    FoldedMesh mesh_;
    int component_ = 0;
    std::map<std::tuple<int, double, double, double>, int> index_;
};

FoldedMesh assemble(const std::vector<Ring>& rings) {
    MeshAssembler out;
    struct Ids {
        int tn, tf, bn, bf;
    };
    auto add = [&](const Ring& r) {
        return Ids{out.vertex(r.top_near), out.vertex(r.top_far), out.vertex(r.bottom_near),
                   out.vertex(r.bottom_far)};
    };
    auto collapsed = [](const Ring& r) { return r.top_near == r.bottom_near && r.top_far == r.bottom_far; };
    const Ring* prev = &rings.front();
    Ids p{};
    bool have_p = false;
    for (std::size_t k = 1; k < rings.size(); ++k) {
        const Ring& r = rings[k];
        // Two collapsed rings bound a flat stretch that encloses nothing.
        if (collapsed(*prev) && collapsed(r)) {
            prev = &r;
            have_p = false;
            continue;
        }
        if (!have_p) p = add(*prev);
        const Ids q = add(r);
        out.quad(p.tn, p.tf, q.tf, q.tn, Part::Top);
        out.quad(p.bn, q.bn, q.bf, p.bf, Part::Bottom);
        out.quad(p.tn, q.tn, q.bn, p.bn, Part::EndWallNear);
        out.quad(p.tf, p.bf, q.bf, q.tf, Part::EndWallFar);
        p = q;
        have_p = true;
        // A collapsed ring pinches the box; the next solid gets its own copy.
        if (collapsed(r)) {
            out.next_component();
            have_p = false;
        }
        prev = &r;
    }
    return out.finish();
}

double degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace

double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

std::string_view part_name(Part part) {
    switch (part) {
        case Part::Top: return "top";
        case Part::Bottom: return "bottom";
        case Part::EndWallNear: return "end_wall_near";
        case Part::EndWallFar: return "end_wall_far";
    }
    return "unknown";
}

ManifoldCheck check_manifold(const FoldedMesh& mesh) {
    std::map<std::pair<int, int>, int> directed;
    std::map<std::pair<int, int>, int> undirected;
    for (const auto& t : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            const int a = t[e];
            const int b = t[(e + 1) % 3];
            ++directed[{a, b}];
            ++undirected[{std::min(a, b), std::max(a, b)}];
        }
    }
    ManifoldCheck check;
    check.vertices = static_cast<int>(mesh.vertices.size());
    check.edges = static_cast<int>(undirected.size());
    check.faces = static_cast<int>(mesh.triangles.size());
    check.edge_manifold = std::all_of(undirected.begin(), undirected.end(),
                                      [](const auto& e) { return e.second == 2; });
    check.oriented = std::all_of(directed.begin(), directed.end(),
                                 [](const auto& e) { return e.second == 1; });
    return check;
}

std::vector<double> chord_profile_x(const std::vector<CurveSample>& samples) {
    std::vector<double> xs;
    xs.reserve(samples.size());
    double x = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (k > 0) {
            const double du = samples[k].u - samples[k - 1].u;
            const double df = samples[k].f - samples[k - 1].f;
            x += du * development_factor(du > 0.0 ? df / du : 0.0);
        }
        xs.push_back(x);
    }
    return xs;
}

FoldedMesh build_mesh(const CreaseCurve& curve, const SheetSpec& sheet, int resolution) {
    sheet.check();
    if (resolution < 4) throw DomainError("build_mesh: resolution must be at least 4");
    require_valid(curve, resolution, "build_mesh");
    const double fmax = max_height(curve);
    if (fmax == 0.0) return FoldedMesh{{}, {}, {}, true};
    const double length = sheet.normalized_length();
    if (!(length > 2.0 * fmax)) {
        throw GeometryError("build_mesh: sheet length must exceed twice the crease height (ends collide)");
    }

    const auto samples = sample_uniform(curve, resolution);
    const auto xs = chord_profile_x(samples);
    const double w = sheet.width;
    std::vector<Ring> rings;
    rings.reserve(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double f = samples[k].f;
        const double y = length / 2.0 - f;
        const double x = w * xs[k];
        rings.push_back({x,
                         {x, w * y, w * f},
                         {x, -w * y, w * f},
                         {x, w * y, -w * f},
                         {x, -w * y, -w * f}});
    }
    return assemble(rings);
}

double planarity_residual(const CreaseCurve3D& crease) {
    double worst = 0.0;
    for (const Vec3& p : crease.points) {
        worst = std::max(worst, std::abs(dot(crease.plane.normal, p - crease.plane.point)));
    }
    return worst;
}

CreaseCurve3D extract_crease_3d(const CreaseCurve& curve, const SheetSpec& sheet, int n) {
    sheet.check();
    require_valid(curve, n, "extract_crease_3d");
    const auto samples = sample_uniform(curve, n);
    const auto xs = chord_profile_x(samples);
    const double w = sheet.width;
    CreaseCurve3D crease;
    crease.plane.point = {0.0, sheet.length / 2.0, 0.0};
    crease.plane.normal = {0.0, std::sqrt(0.5), std::sqrt(0.5)};
    crease.points.reserve(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double f = w * samples[k].f;
        crease.points.push_back({w * xs[k], sheet.length / 2.0 - f, f});
    }
    return crease;
}

Vec3 reflect(const Plane& plane, Vec3 p) {
    const double d = dot(plane.normal, p - plane.point);
    return p - (2.0 * d) * plane.normal;
}

AsymmetricParams AsymmetricParams::from_theta1(double theta1, double wall_depth) {
    if (!(theta1 > 0.0 && theta1 < std::numbers::pi)) {
        throw DomainError("theta1 must lie in (0, 180) degrees, got " + std::to_string(degrees(theta1)));
    }
    if (!(wall_depth >= 0.0) || !std::isfinite(wall_depth)) {
        throw DomainError("wall_depth must be a nonnegative number");
    }
    AsymmetricParams p;
    p.theta1 = theta1;
    p.theta2 = std::numbers::pi - theta1;
    p.alpha1 = p.theta2 / 2.0;
    p.alpha2 = theta1 / 2.0;
    p.wall_depth = wall_depth;
    return p;
}

Plane reflection_plane_r1(const SheetSpec& sheet, const AsymmetricParams& params) {
    return {{0.0, sheet.length / 2.0, 0.0},
            {0.0, std::sin(params.alpha1), std::cos(params.alpha1)}};
}

Plane reflection_plane_r2(const SheetSpec& sheet, const AsymmetricParams& params) {
    return {{0.0, sheet.length / 2.0, -sheet.width * params.wall_depth},
            {0.0, -std::sin(params.alpha2), std::cos(params.alpha2)}};
}

FoldedMesh build_asymmetric_mesh(const CreaseCurve& curve, const SheetSpec& sheet,
                                 const AsymmetricParams& params, int resolution) {
    sheet.check();
    if (resolution < 4) throw DomainError("build_asymmetric_mesh: resolution must be at least 4");
    // Re-derive so inconsistent angle sets cannot slip through.
    const AsymmetricParams p = AsymmetricParams::from_theta1(params.theta1, params.wall_depth);
    require_valid(curve, resolution, "build_asymmetric_mesh");

    const double length = sheet.normalized_length();
    const double half = length / 2.0;
    const double cot1 = std::cos(p.alpha1) / std::sin(p.alpha1);
    // Wall direction after reflecting the +y top ruling across R1.
    const double wy = std::cos(2.0 * p.alpha1);
    const double wz = -std::sin(2.0 * p.alpha1);
    // R2 trace runs from (L/2, -depth) down and inward.
    const double ry = -std::cos(p.alpha2);
    const double rz = -std::sin(p.alpha2);
    const double det = -wy * rz + ry * wz;

    const auto samples = sample_uniform(curve, resolution);
    const auto xs = chord_profile_x(samples);
    const double w = sheet.width;
    std::vector<Ring> rings;
    rings.reserve(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double f = samples[k].f;
        const double y1 = half - f * cot1;
        if (y1 < 0.0) {
            throw GeometryError("build_asymmetric_mesh: R1 crease passes the box centerline; "
                                "the top surface has no room at u = " + std::to_string(samples[k].u));
        }
        // Solve c1 + t*w = P2 + s*r for the R2 crease point.
        const double by = half - y1;
        const double bz = -p.wall_depth - f;
        const double t = (by * -rz + ry * bz) / det;
        if (t < 0.0) {
            throw GeometryError("build_asymmetric_mesh: R2 lies above R1 at u = " +
                                std::to_string(samples[k].u));
        }
        const double y2 = y1 + t * wy;
        const double z2 = f + t * wz;
        if (y2 < 0.0) {
            throw GeometryError("build_asymmetric_mesh: wall runs past the box centerline at u = " +
                                std::to_string(samples[k].u) + " (wall_depth too large)");
        }
        const double x = w * xs[k];
        rings.push_back({x,
                         {x, w * y1, w * f},
                         {x, -w * y1, w * f},
                         {x, w * y2, w * z2},
                         {x, -w * y2, w * z2}});
    }
    return assemble(rings);
}

}  // namespace pillowfold
