#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "pillowfold/io.hpp"

namespace pillowfold {

// Operations shared by the command line and the HTTP service, so both
// produce the same numbers for the same document.

// "quadrature", "mesh", "closed-form" (or "closed_form"). Throws DomainError.
VolumeMethod parse_volume_method(std::string_view name);

// Closed forms exist for sine-arc, rectangle and (on a sheet of aspect sqrt(2))
// rhombus. For the mesh method n is the mesh resolution.
VolumeResult compute_volume(const CurveSpec& spec, VolumeMethod method, int n);

struct FoldOptions {
    int resolution = 2000;
    std::optional<double> theta1_degrees;  // set for the asymmetric construction
    double wall_depth = 0.0;
};

FoldedMesh compute_fold(const CurveSpec& spec, const FoldOptions& options);

// Optimization request: family, polyline segment count, sheet and solver
// settings. JSON keys: family, segments, sheet {width, length}, initial,
// n_quadrature, n_constraint_samples, max_iter, ftol, ctol, max_seconds,
// multistart. Unknown keys raise ParseError.
struct OptimizeRequest {
    OptimizationProblem problem;
    SolverConfig config;
};

OptimizeRequest make_optimize_request(Family family, int segments, double sheet_length);
// Apply the keys present in `doc` on top of `request`.
void apply_optimize_json(OptimizeRequest& request, const Json& doc);

// Default iteration cap: 500, or 5000 for polylines with N >= 1000.
int default_max_iter(const OptimizationProblem& problem);

// Markdown rendering of compute_table1.
std::string table1_markdown(const std::vector<Table1Row>& rows);

}  // namespace pillowfold
