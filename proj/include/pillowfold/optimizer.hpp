#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pillowfold/curve.hpp"
#include "pillowfold/volume.hpp"

namespace pillowfold {

inline constexpr double kMonotoneMargin = 1e-6;

struct OptimizationProblem {
    Family family = Family::QuadBezier;
    int segments = 1000;  // polyline node count N, u_i = i / (2N)
    SheetSpec sheet;
    int n_quadrature = kDefaultQuadrature;
    int n_constraint_samples = 200;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> initial;

    // Bounds and the deterministic start for quad-bezier, cubic-bezier or polyline.
    static OptimizationProblem standard(Family family, double sheet_length = std::numbers::sqrt2,
                                        int segments = 1000);
};

struct SolverConfig {
    int max_iter = 500;
    double ftol = 1e-9;
    double ctol = 1e-6;
    double max_seconds = 0.0;  // 0 = unlimited
    bool multistart = false;   // 5 starts from a fixed perturbation table
};

struct OptResult {
    std::vector<double> params;
    double volume = 0.0;
    int iterations = 0;
    bool converged = false;
    bool timed_out = false;
    double max_violation = 0.0;
    std::vector<std::pair<int, double>> trace;  // (iteration, volume)
};

// g >= 0 form of the developability constraint.
//  polyline: 1 - s_i^2 per segment (N values);
//  Bezier:   u'(t_k)^2 - v'(t_k)^2, then u'(t_k) - 1e-6, for t_k = k / n, k = 0..n.
std::vector<double> constraint_vector(Family family, std::span<const double> params,
                                      int n_constraint_samples = 200);

// Throws InfeasibleStartError when the start violates the constraints by more
// than config.ctol; DomainError for families without a parameter search.
OptResult maximize_volume(const OptimizationProblem& problem, const SolverConfig& config = {});

CreaseCurve result_curve(const OptimizationProblem& problem, const OptResult& result);

using ScalarObjective = std::function<double(std::span<const double>)>;

struct FdGradient {
    std::vector<double> values;
    std::vector<bool> shifted;  // probe moved to stay inside bounds or the domain
};

// Central differences with step 1e-6 * max(1, |p_i|) unless `step` > 0.
// Probes are kept inside [lower, upper] when given; a probe with a non-finite
// value falls back to a one-sided difference. Throws EvaluationError if no
// finite difference can be formed.
FdGradient gradient_fd(const ScalarObjective& objective, std::span<const double> params,
                       double step = 0.0, std::span<const double> lower = {},
                       std::span<const double> upper = {});

// Exact volume of a symmetric polyline with heights v_1..v_N and its
// derivatives (unit width, sheet length L).
double polyline_volume(std::span<const double> heights, double length);
std::vector<double> polyline_volume_gradient(std::span<const double> heights, double length);

struct Table1Row {
    std::string shape;
    double volume = 0.0;
    double reference = 0.0;  // published value
    std::string parameters;
};

// Maximum volumes of every cross-section family on the 1 x sqrt(2) sheet, plus
// the square-sheet polyline. Independent rows run in parallel, capped by
// PILLOWFOLD_THREADS.
std::vector<Table1Row> compute_table1(int polyline_segments = 1000);

int thread_limit();

}  // namespace pillowfold
