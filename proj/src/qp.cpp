#include "pillowfold/qp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace pillowfold::solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// A simple bound x_j >= value (sign = +1) or -x_j >= -value (sign = -1).
struct Bound {
    int index;
    double sign;
    double value;
};

// Constraints in the solver's scaled coordinates: rows of A first, then bounds.
class ConstraintSet {
public:
    ConstraintSet(Eigen::MatrixXd rows, Eigen::VectorXd rhs, std::vector<Bound> bounds)
        : rows_(std::move(rows)), rhs_(std::move(rhs)), bounds_(std::move(bounds)) {}

    int size() const { return static_cast<int>(rows_.rows() + bounds_.size()); }
    int general() const { return static_cast<int>(rows_.rows()); }

    double slack(int i, const Eigen::VectorXd& x) const {
        if (i < general()) return rows_.row(i).dot(x) - rhs_(i);
        const Bound& b = bounds_[static_cast<std::size_t>(i - general())];
        return b.sign * (x(b.index) - b.value);
    }

    // d = J' n_i
    void project(int i, const Eigen::MatrixXd& J, Eigen::VectorXd& d) const {
        if (i < general()) {
            d.noalias() = J.transpose() * rows_.row(i).transpose();
        } else {
            const Bound& b = bounds_[static_cast<std::size_t>(i - general())];
            d = b.sign * J.row(b.index).transpose();
        }
    }

    double normal_dot(int i, const Eigen::VectorXd& z) const {
        if (i < general()) return rows_.row(i).dot(z);
        const Bound& b = bounds_[static_cast<std::size_t>(i - general())];
        return b.sign * z(b.index);
    }

private:
    Eigen::MatrixXd rows_;
    Eigen::VectorXd rhs_;
    std::vector<Bound> bounds_;
};

bool add_constraint(Eigen::MatrixXd& R, Eigen::MatrixXd& J, Eigen::VectorXd& d, int& iq,
                    double& r_norm) {
    const int n = static_cast<int>(J.rows());
    for (int j = n - 1; j >= iq + 1; --j) {
        double cc = d(j - 1);
        double ss = d(j);
        const double h = std::hypot(cc, ss);
        if (h == 0.0) continue;
        d(j) = 0.0;
        ss /= h;
        cc /= h;
        if (cc < 0.0) {
            cc = -cc;
            ss = -ss;
            d(j - 1) = -h;
        } else {
            d(j - 1) = h;
        }
        const double xny = ss / (1.0 + cc);
        for (int k = 0; k < n; ++k) {
            const double t1 = J(k, j - 1);
            const double t2 = J(k, j);
            J(k, j - 1) = t1 * cc + t2 * ss;
            J(k, j) = xny * (t1 + J(k, j - 1)) - t2;
        }
    }
    ++iq;
    R.col(iq - 1).head(iq) = d.head(iq);
    if (std::abs(d(iq - 1)) <= kEps * r_norm) return false;
    r_norm = std::max(r_norm, std::abs(d(iq - 1)));
    return true;
}

void delete_constraint(Eigen::MatrixXd& R, Eigen::MatrixXd& J, Eigen::VectorXi& active,
                       Eigen::VectorXd& u, int& iq, int l) {
    const int n = static_cast<int>(J.rows());
    int qq = -1;
    for (int i = 0; i < iq; ++i) {
        if (active(i) == l) {
            qq = i;
            break;
        }
    }
    if (qq < 0) return;
    for (int i = qq; i < iq - 1; ++i) {
        active(i) = active(i + 1);
        u(i) = u(i + 1);
        R.col(i) = R.col(i + 1);
    }
    active(iq - 1) = active(iq);
    u(iq - 1) = u(iq);
    active(iq) = 0;
    u(iq) = 0.0;
    R.col(iq - 1).head(iq).setZero();
    --iq;
    if (iq == 0) return;
    for (int j = qq; j < iq; ++j) {
        double cc = R(j, j);
        double ss = R(j + 1, j);
        const double h = std::hypot(cc, ss);
        if (h == 0.0) continue;
        cc /= h;
        ss /= h;
        R(j + 1, j) = 0.0;
        if (cc < 0.0) {
            R(j, j) = -h;
            cc = -cc;
            ss = -ss;
        } else {
            R(j, j) = h;
        }
        const double xny = ss / (1.0 + cc);
        for (int k = j + 1; k < iq; ++k) {
            const double t1 = R(j, k);
            const double t2 = R(j + 1, k);
            R(j, k) = t1 * cc + t2 * ss;
            R(j + 1, k) = xny * (t1 + R(j, k)) - t2;
        }
        for (int k = 0; k < n; ++k) {
            const double t1 = J(k, j);
            const double t2 = J(k, j + 1);
            J(k, j) = t1 * cc + t2 * ss;
            J(k, j + 1) = xny * (J(k, j) + t1) - t2;
        }
    }
}

}  // namespace

QpResult solve_qp(const QpProblem& pr) {
    const int n = static_cast<int>(pr.G.rows());
    const int m = static_cast<int>(pr.A.rows());
    QpResult result;
    result.multipliers = Eigen::VectorXd::Zero(m);

    // Jacobi scaling x = S y gives G a unit diagonal; rows of A are normalized.
    Eigen::VectorXd scale(n);
    for (int j = 0; j < n; ++j) scale(j) = pr.G(j, j) > 0.0 ? 1.0 / std::sqrt(pr.G(j, j)) : 1.0;
    const Eigen::MatrixXd G = scale.asDiagonal() * pr.G * scale.asDiagonal();
    const Eigen::VectorXd g = scale.cwiseProduct(pr.g);
    Eigen::MatrixXd rows = pr.A * scale.asDiagonal();
    Eigen::VectorXd rhs = pr.b;
    Eigen::VectorXd row_scale = Eigen::VectorXd::Ones(m);
    for (int i = 0; i < m; ++i) {
        const double nrm = rows.row(i).norm();
        if (nrm > 0.0) {
            row_scale(i) = 1.0 / nrm;
            rows.row(i) *= row_scale(i);
            rhs(i) *= row_scale(i);
        }
    }
    std::vector<Bound> bounds;
    for (int j = 0; j < n; ++j) {
        if (pr.lower.size() == n && std::isfinite(pr.lower(j))) bounds.push_back({j, 1.0, pr.lower(j) / scale(j)});
        if (pr.upper.size() == n && std::isfinite(pr.upper(j))) bounds.push_back({j, -1.0, pr.upper(j) / scale(j)});
    }
    const ConstraintSet cons(std::move(rows), std::move(rhs), std::move(bounds));
    const int mi = cons.size();

    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success) {
        result.status = QpStatus::NotConvex;
        return result;
    }
    Eigen::MatrixXd J = llt.matrixU().solve(Eigen::MatrixXd::Identity(n, n));
    const double c1 = G.trace();
    const double c2 = J.trace();

    Eigen::VectorXd x = llt.solve(-g);
    double f = 0.5 * g.dot(x);

    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd s(mi), z(n), d(n), r(n + 1), u = Eigen::VectorXd::Zero(n + 1);
    Eigen::VectorXd u_old(n + 1), x_old(n);
    Eigen::VectorXi active = Eigen::VectorXi::Zero(n + 1), active_old(n + 1);
    std::vector<bool> inactive(static_cast<std::size_t>(mi), true);  // not in the active set
    std::vector<bool> allowed(static_cast<std::size_t>(mi), true);   // not excluded as dependent
    int iq = 0;
    double r_norm = 1.0;

    const int max_iter = 50 * (n + mi) + 1000;
    int iter = 0;
    for (;;) {
        // Step 1: pick the most violated constraint.
        if (++iter > max_iter) {
            result.status = QpStatus::Infeasible;
            return result;
        }
        double psi = 0.0;
        for (int i = 0; i < mi; ++i) {
            allowed[static_cast<std::size_t>(i)] = true;
            s(i) = cons.slack(i, x);
            psi += std::min(0.0, s(i));
        }
        if (std::abs(psi) <= mi * kEps * c1 * c2 * 100.0) break;
        u_old.head(iq) = u.head(iq);
        active_old.head(iq) = active.head(iq);
        x_old = x;

        bool restart = false;
        bool done = false;
        while (!restart && !done) {
            // Step 2: choose a violated constraint p.
            int ip = -1;
            double ss = 0.0;
            for (int i = 0; i < mi; ++i) {
                const auto k = static_cast<std::size_t>(i);
                if (s(i) < ss && inactive[k] && allowed[k]) {
                    ss = s(i);
                    ip = i;
                }
            }
            if (ip < 0) {
                done = true;
                break;
            }
            u(iq) = 0.0;
            active(iq) = ip;

            for (;;) {
                // Step 2a: primal and dual step directions.
                cons.project(ip, J, d);
                z.noalias() = J.rightCols(n - iq) * d.tail(n - iq);
                if (iq > 0) {
                    r.head(iq) = R.topLeftCorner(iq, iq).triangularView<Eigen::Upper>().solve(d.head(iq));
                }
                // Step 2b: step lengths.
                int l = -1;
                double t1 = kInf;
                for (int k = 0; k < iq; ++k) {
                    if (r(k) > 0.0) {
                        const double tmp = u(k) / r(k);
                        if (tmp < t1) {
                            t1 = tmp;
                            l = active(k);
                        }
                    }
                }
                const double t2 = z.squaredNorm() > kEps ? -s(ip) / cons.normal_dot(ip, z) : kInf;
                const double t = std::min(t1, t2);
                if (t >= kInf) {
                    result.status = QpStatus::Infeasible;
                    return result;
                }
                if (t2 >= kInf) {
                    // Dual step only.
                    u.head(iq) -= t * r.head(iq);
                    u(iq) += t;
                    inactive[static_cast<std::size_t>(l)] = true;
                    delete_constraint(R, J, active, u, iq, l);
                    continue;
                }
                x += t * z;
                f += t * cons.normal_dot(ip, z) * (0.5 * t + u(iq));
                u.head(iq) -= t * r.head(iq);
                u(iq) += t;
                if (t == t2) {
                    if (!add_constraint(R, J, d, iq, r_norm)) {
                        // Linearly dependent: exclude p and roll back this step.
                        allowed[static_cast<std::size_t>(ip)] = false;
                        delete_constraint(R, J, active, u, iq, ip);
                        std::fill(inactive.begin(), inactive.end(), true);
                        for (int i = 0; i < iq; ++i) {
                            active(i) = active_old(i);
                            inactive[static_cast<std::size_t>(active(i))] = false;
                            u(i) = u_old(i);
                        }
                        x = x_old;
                        break;  // back to step 2
                    }
                    inactive[static_cast<std::size_t>(ip)] = false;
                    restart = true;
                    break;
                }
                // Partial step: drop the blocking constraint and retry p.
                inactive[static_cast<std::size_t>(l)] = true;
                delete_constraint(R, J, active, u, iq, l);
                s(ip) = cons.slack(ip, x);
            }
        }
        if (done) break;
    }

    result.x = scale.cwiseProduct(x);
    result.objective = f;
    result.active = iq;
    for (int k = 0; k < iq; ++k) {
        const int i = active(k);
        if (i < m) result.multipliers(i) = u(k) * row_scale(i);
    }
    result.status = QpStatus::Optimal;
    return result;
}

}  // namespace pillowfold::solver
