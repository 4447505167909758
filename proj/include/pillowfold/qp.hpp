#pragma once

#include <Eigen/Dense>

namespace pillowfold::solver {

// Strictly convex quadratic program
//
//   minimize    1/2 x' G x + g' x
//   subject to  A x >= b,  lower <= x <= upper
//
// solved with the Goldfarb-Idnani dual active-set method. Infinite bounds
// are ignored. G must be symmetric; if it is not positive definite the caller
// gets status NotConvex.
struct QpProblem {
    Eigen::MatrixXd G;
    Eigen::VectorXd g;
    Eigen::MatrixXd A;  // m x n, m may be 0
    Eigen::VectorXd b;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

enum class QpStatus { Optimal, Infeasible, NotConvex };

struct QpResult {
    QpStatus status = QpStatus::Optimal;
    Eigen::VectorXd x;
    Eigen::VectorXd multipliers;  // one per row of A (bound multipliers dropped)
    double objective = 0.0;
    int active = 0;               // size of the final active set
};

QpResult solve_qp(const QpProblem& problem);

}  // namespace pillowfold::solver
