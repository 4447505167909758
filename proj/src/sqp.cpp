#include "pillowfold/sqp.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "pillowfold/qp.hpp"

namespace pillowfold::solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double penalty(const Eigen::VectorXd& c, const Eigen::VectorXd& mu) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < c.size(); ++i) sum += mu(i) * std::max(0.0, -c(i));
    return sum;
}

// Add a diagonal shift, relative to the Hessian's own diagonal, until the
// Cholesky factorization succeeds.
Eigen::MatrixXd make_positive_definite(Eigen::MatrixXd H) {
    const Eigen::Index n = H.rows();
    Eigen::VectorXd weight(n);
    for (Eigen::Index j = 0; j < n; ++j) weight(j) = std::max(std::abs(H(j, j)), 1e-8);
    double tau = 0.0;
    for (int attempt = 0; attempt < 60; ++attempt) {
        Eigen::MatrixXd trial = H;
        trial.diagonal() += tau * weight;
        Eigen::LLT<Eigen::MatrixXd> llt(trial);
        if (llt.info() == Eigen::Success) return trial;
        tau = tau == 0.0 ? 1e-8 : tau * 10.0;
    }
    return Eigen::MatrixXd::Identity(n, n);
}

void bfgs_update(Eigen::MatrixXd& B, const Eigen::VectorXd& s, Eigen::VectorXd y) {
    const Eigen::VectorXd Bs = B * s;
    const double sBs = s.dot(Bs);
    if (!(sBs > 0.0)) return;
    double sy = s.dot(y);
    // Powell damping keeps B positive definite.
    if (sy < 0.2 * sBs) {
        const double theta = 0.8 * sBs / (sBs - sy);
        y = theta * y + (1.0 - theta) * Bs;
        sy = s.dot(y);
    }
    if (!(sy > 0.0) || !std::isfinite(sy)) return;
    B += (y * y.transpose()) / sy - (Bs * Bs.transpose()) / sBs;
}

}  // namespace

double max_violation(const Eigen::VectorXd& c) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < c.size(); ++i) worst = std::max(worst, -c(i));
    return worst;
}

SqpResult minimize_sqp(const NlpProblem& problem, const Eigen::VectorXd& x0, const SqpOptions& options) {
    using clock = std::chrono::steady_clock;
    const auto started = clock::now();
    const Eigen::Index n = x0.size();
    const Eigen::VectorXd lower =
        problem.lower.size() == n ? problem.lower : Eigen::VectorXd::Constant(n, -kInf);
    const Eigen::VectorXd upper =
        problem.upper.size() == n ? problem.upper : Eigen::VectorXd::Constant(n, kInf);

    Eigen::VectorXd x = x0.cwiseMax(lower).cwiseMin(upper);
    double f = problem.objective(x);
    Eigen::VectorXd g = problem.gradient(x);
    Eigen::VectorXd c = problem.constraints(x);
    Eigen::MatrixXd Jc = problem.jacobian(x);
    const Eigen::Index m = c.size();
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(m);
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n);

    SqpResult result;
    bool have_best = false;
    Eigen::VectorXd best_x = x;
    double best_f = f;
    double best_violation = max_violation(c);
    auto consider = [&](const Eigen::VectorXd& xc, double fc, double viol) {
        if (viol <= options.ctol && std::isfinite(fc) && (!have_best || fc < best_f)) {
            have_best = true;
            best_x = xc;
            best_f = fc;
            best_violation = viol;
        }
    };
    consider(x, f, max_violation(c));

    SqpStatus status = SqpStatus::MaxIterations;
    int iter = 0;
    while (iter < options.max_iter) {
        if (options.max_seconds > 0.0 &&
            std::chrono::duration<double>(clock::now() - started).count() > options.max_seconds) {
            status = SqpStatus::TimeLimit;
            break;
        }
        ++iter;

        QpProblem qp;
        qp.G = problem.hessian ? make_positive_definite(problem.hessian(x, lambda)) : B;
        qp.g = g;
        qp.A = Jc;
        qp.b = -c;
        qp.lower = lower - x;
        qp.upper = upper - x;
        QpResult step = solve_qp(qp);
        if (step.status == QpStatus::NotConvex && !problem.hessian) {
            B.setIdentity();
            qp.G = B;
            step = solve_qp(qp);
        }
        if (step.status == QpStatus::Infeasible) {
            // Linearization inconsistent: only ask violated constraints not to get worse.
            for (Eigen::Index i = 0; i < m; ++i) qp.b(i) = c(i) < 0.0 ? 0.0 : -c(i);
            step = solve_qp(qp);
        }
        if (step.status != QpStatus::Optimal) {
            status = SqpStatus::QpFailed;
            break;
        }
        const Eigen::VectorXd d = step.x;
        const Eigen::VectorXd lambda_qp = step.multipliers;

        for (Eigen::Index i = 0; i < m; ++i) {
            const double l = std::abs(lambda_qp(i));
            mu(i) = std::max(l, 0.5 * (mu(i) + l));
        }
        const double violation = max_violation(c);
        if (d.lpNorm<Eigen::Infinity>() <= 1e-14 * (1.0 + x.lpNorm<Eigen::Infinity>()) &&
            violation <= options.ctol) {
            status = SqpStatus::Converged;
            break;
        }

        const double merit0 = f + penalty(c, mu);
        const double slope = g.dot(d) - penalty(c, mu);
        double alpha = 1.0;
        if (options.fraction_to_boundary > 0.0) {
            const Eigen::VectorXd change = Jc * d;
            for (Eigen::Index i = 0; i < m; ++i) {
                if (c(i) > 0.0 && change(i) < 0.0) {
                    alpha = std::min(alpha, options.fraction_to_boundary * c(i) / -change(i));
                }
            }
        }
        bool accepted = false;
        Eigen::VectorXd xt;
        double ft = 0.0;
        Eigen::VectorXd ct;
        for (int ls = 0; ls < 40; ++ls) {
            xt = (x + alpha * d).cwiseMax(lower).cwiseMin(upper);
            ft = problem.objective(xt);
            ct = problem.constraints(xt);
            const double merit = ft + penalty(ct, mu);
            if (std::isfinite(merit) && merit <= merit0 + 1e-4 * alpha * std::min(slope, 0.0)) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            status = violation <= options.ctol && std::abs(g.dot(d)) < 10.0 * options.ftol
                         ? SqpStatus::Converged
                         : SqpStatus::LineSearchFailed;
            break;
        }

        const Eigen::VectorXd gt = problem.gradient(xt);
        const Eigen::MatrixXd Jt = problem.jacobian(xt);
        if (!problem.hessian) {
            const Eigen::VectorXd grad_lag_new = gt - Jt.transpose() * lambda_qp;
            const Eigen::VectorXd grad_lag_old = g - Jc.transpose() * lambda_qp;
            bfgs_update(B, xt - x, grad_lag_new - grad_lag_old);
        }
        const double df = f - ft;
        x = xt;
        f = ft;
        c = ct;
        g = gt;
        Jc = Jt;
        lambda = lambda_qp;
        const double viol_new = max_violation(c);
        result.trace.emplace_back(iter, f);
        consider(x, f, viol_new);

        if (viol_new <= options.ctol && std::abs(df) < options.ftol &&
            (alpha >= 0.5 || std::abs(g.dot(d)) < 10.0 * options.ftol)) {
            status = SqpStatus::Converged;
            break;
        }
    }

    result.iterations = iter;
    result.status = status;
    if (have_best) {
        result.x = best_x;
        result.f = best_f;
        result.max_violation = best_violation;
    } else {
        result.x = x;
        result.f = f;
        result.max_violation = max_violation(c);
    }
    return result;
}

}  // namespace pillowfold::solver
