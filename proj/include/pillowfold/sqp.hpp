#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace pillowfold::solver {

// minimize f(x) subject to c(x) >= 0 and lower <= x <= upper.
struct NlpProblem {
    std::function<double(const Eigen::VectorXd&)> objective;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> constraints;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
    // Hessian of f - lambda' c. When empty a damped BFGS approximation is used.
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> hessian;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

struct SqpOptions {
    int max_iter = 500;
    double ftol = 1e-9;
    double ctol = 1e-6;
    double max_seconds = 0.0;  // 0 = no limit
    // When in (0, 1), steps stop short of the boundary of constraints that
    // are currently satisfied: c_i(x + a d) keeps at least (1 - tau) c_i by the
    // linearization. Meant for linear constraints whose objective is singular
    // on the boundary.
    double fraction_to_boundary = 0.0;
};

enum class SqpStatus { Converged, MaxIterations, TimeLimit, LineSearchFailed, QpFailed };

struct SqpResult {
    Eigen::VectorXd x;
    double f = 0.0;
    double max_violation = 0.0;
    int iterations = 0;
    SqpStatus status = SqpStatus::MaxIterations;
    std::vector<std::pair<int, double>> trace;  // (iteration, f) after each accepted step
};

double max_violation(const Eigen::VectorXd& c);

// Sequential quadratic programming with an L1 merit line search. The result
// is the best point with violation <= ctol seen during the run (the start
// included), or the last iterate if none was feasible.
SqpResult minimize_sqp(const NlpProblem& problem, const Eigen::VectorXd& x0,
                       const SqpOptions& options = {});

}  // namespace pillowfold::solver
