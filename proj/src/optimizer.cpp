#include "pillowfold/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "pillowfold/errors.hpp"
#include "pillowfold/fold.hpp"
#include "pillowfold/sqp.hpp"

namespace pillowfold {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::span<const double> as_span(const VectorXd& x) {
    return {x.data(), static_cast<std::size_t>(x.size())};
}

VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const VectorXd& x) { return {x.data(), x.data() + x.size()}; }

bool optimizable(Family family) {
    return family == Family::QuadBezier || family == Family::CubicBezier || family == Family::Polyline;
}

// Indices of the v-coordinates (b, d, h or every polyline height).
std::vector<std::size_t> vertical_indices(Family family, std::size_t n) {
    if (family == Family::QuadBezier) return {1, 2};
    if (family == Family::CubicBezier) return {1, 3, 4};
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return all;
}

// Weights of the free control points in B'(t): u' = wa*a + wc*c + u0, v' = wa*b + wc*d + wh*h.
struct DerivativeWeights {
    double wa = 0.0, wc = 0.0, wh = 0.0, u0 = 0.0;
};

DerivativeWeights quad_weights(double t) { return {2.0 - 4.0 * t, 0.0, 2.0 * t, t}; }

DerivativeWeights cubic_weights(double t) {
    const double s = 1.0 - t;
    const double w3 = 3.0 * t * t;
    return {3.0 * s * s - 6.0 * s * t, 6.0 * s * t - w3, w3, 0.5 * w3};
}

// Per-segment pieces of the polyline volume 4 * sum phi(s) Q(a, b).
struct Segment {
    double phi, dphi, ddphi;
    double q, qa, qb, qaa, qbb, qab;
};

Segment segment(double a, double b, double du, double length) {
    Segment g{};
    const double s = (b - a) / du;
    const double r = 1.0 - s * s;
    g.phi = r > 0.0 ? std::sqrt(r) : 0.0;
    const double root = std::sqrt(std::max(r, 1e-24));
    g.dphi = -s / root;
    g.ddphi = -1.0 / (root * root * root);
    g.q = du * (length * (a + b) / 2.0 - 2.0 * (a * a + a * b + b * b) / 3.0);
    g.qa = du * (length / 2.0 - (4.0 * a + 2.0 * b) / 3.0);
    g.qb = du * (length / 2.0 - (2.0 * a + 4.0 * b) / 3.0);
    g.qaa = g.qbb = -4.0 * du / 3.0;
    g.qab = -2.0 * du / 3.0;
    return g;
}

MatrixXd polyline_hessian(std::span<const double> v, double length) {
    const auto n = static_cast<Eigen::Index>(v.size());
    const double du = 0.5 / static_cast<double>(n);
    MatrixXd H = MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = i == 0 ? 0.0 : v[static_cast<std::size_t>(i - 1)];
        const double b = v[static_cast<std::size_t>(i)];
        const Segment g = segment(a, b, du, length);
        const double curv = g.ddphi * g.q / (du * du);
        const double hbb = 4.0 * (curv + 2.0 * g.dphi * g.qb / du + g.phi * g.qbb);
        H(i, i) += hbb;
        if (i > 0) {
            const double haa = 4.0 * (curv - 2.0 * g.dphi * g.qa / du + g.phi * g.qaa);
            const double hab = 4.0 * (-curv + g.dphi * g.qa / du - g.dphi * g.qb / du + g.phi * g.qab);
            H(i - 1, i - 1) += haa;
            H(i - 1, i) += hab;
            H(i, i - 1) += hab;
        }
    }
    return H;
}

// Solver-side description: minimize -V subject to c(x) >= 0.
solver::NlpProblem polyline_nlp(const OptimizationProblem& p) {
    const double length = p.sheet.normalized_length();
    const auto n = static_cast<Eigen::Index>(p.segments);
    const double du = 0.5 / static_cast<double>(n);
    solver::NlpProblem nlp;
    nlp.objective = [length](const VectorXd& x) { return -polyline_volume(as_span(x), length); };
    nlp.gradient = [length](const VectorXd& x) {
        return VectorXd(-to_eigen(polyline_volume_gradient(as_span(x), length)));
    };
    nlp.hessian = [length](const VectorXd& x, const VectorXd&) {
        // Constraints are linear, so only the objective contributes.
        return MatrixXd(-polyline_hessian(as_span(x), length));
    };
    // |s_i| <= 1 as the linear pair 1 - s_i >= 0, 1 + s_i >= 0.
    nlp.constraints = [n, du](const VectorXd& x) {
        VectorXd c(2 * n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double s = (x(i) - (i == 0 ? 0.0 : x(i - 1))) / du;
            c(2 * i) = 1.0 - s;
            c(2 * i + 1) = 1.0 + s;
        }
        return c;
    };
    nlp.jacobian = [n, du](const VectorXd&) {
        MatrixXd J = MatrixXd::Zero(2 * n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            J(2 * i, i) = -1.0 / du;
            J(2 * i + 1, i) = 1.0 / du;
            if (i > 0) {
                J(2 * i, i - 1) = 1.0 / du;
                J(2 * i + 1, i - 1) = -1.0 / du;
            }
        }
        return J;
    };
    return nlp;
}

solver::NlpProblem bezier_nlp(const OptimizationProblem& p) {
    const Family family = p.family;
    const double length = p.sheet.normalized_length();
    const int nq = p.n_quadrature;
    const int ns = p.n_constraint_samples;
    auto volume = [family, length, nq](std::span<const double> x) {
        try {
            return volume_functional(curve_from_vector(family, x), length, nq);
        } catch (const DomainError&) {
            return kNaN;
        }
    };
    solver::NlpProblem nlp;
    nlp.objective = [volume](const VectorXd& x) { return -volume(as_span(x)); };
    nlp.gradient = [volume, lower = p.lower, upper = p.upper](const VectorXd& x) {
        const FdGradient fd = gradient_fd(volume, as_span(x), 0.0, lower, upper);
        return VectorXd(-to_eigen(fd.values));
    };
    nlp.constraints = [family, ns](const VectorXd& x) {
        return to_eigen(constraint_vector(family, as_span(x), ns));
    };
    nlp.jacobian = [family, ns](const VectorXd& x) {
        const bool quad = family == Family::QuadBezier;
        MatrixXd J = MatrixXd::Zero(2 * (ns + 1), x.size());
        for (int k = 0; k <= ns; ++k) {
            const double t = static_cast<double>(k) / ns;
            const DerivativeWeights w = quad ? quad_weights(t) : cubic_weights(t);
            if (quad) {
                const double du = w.wa * x(0) + w.u0;
                const double dv = w.wa * x(1) + w.wh * x(2);
                J(k, 0) = 2.0 * du * w.wa;
                J(k, 1) = -2.0 * dv * w.wa;
                J(k, 2) = -2.0 * dv * w.wh;
                J(ns + 1 + k, 0) = w.wa;
            } else {
                const double du = w.wa * x(0) + w.wc * x(2) + w.u0;
                const double dv = w.wa * x(1) + w.wc * x(3) + w.wh * x(4);
                J(k, 0) = 2.0 * du * w.wa;
                J(k, 1) = -2.0 * dv * w.wa;
                J(k, 2) = 2.0 * du * w.wc;
                J(k, 3) = -2.0 * dv * w.wc;
                J(k, 4) = -2.0 * dv * w.wh;
                J(ns + 1 + k, 0) = w.wa;
                J(ns + 1 + k, 2) = w.wc;
            }
        }
        return J;
    };
    return nlp;
}

double worst_violation(const std::vector<double>& g) {
    double worst = 0.0;
    for (double v : g) worst = std::max(worst, -v);
    return worst;
}

struct Run {
    std::vector<double> params;
    int iterations = 0;
    bool converged = false;
    bool timed_out = false;
    std::vector<std::pair<int, double>> trace;
};

Run solve_once(const OptimizationProblem& p, const SolverConfig& config, const std::vector<double>& start) {
    const solver::NlpProblem nlp = p.family == Family::Polyline ? polyline_nlp(p) : bezier_nlp(p);
    solver::NlpProblem bounded = nlp;
    bounded.lower = to_eigen(p.lower);
    bounded.upper = to_eigen(p.upper);
    solver::SqpOptions options;
    options.max_iter = config.max_iter;
    options.ftol = config.ftol;
    options.ctol = config.ctol;
    options.max_seconds = config.max_seconds;
    if (p.family == Family::Polyline) options.fraction_to_boundary = 0.99;
    const solver::SqpResult r = solver::minimize_sqp(bounded, to_eigen(start), options);
    Run run;
    run.params = to_std(r.x);
    run.iterations = r.iterations;
    run.converged = r.status == solver::SqpStatus::Converged;
    run.timed_out = r.status == solver::SqpStatus::TimeLimit;
    const double w3 = std::pow(p.sheet.width, 3);
    for (const auto& [it, f] : r.trace) run.trace.emplace_back(it, -f * w3);
    return run;
}

// Pull the vertical coordinates down until the curve passes validate at the
// strict slope tolerance; the solver only guarantees violation <= ctol.
std::vector<double> restore_feasibility(const OptimizationProblem& p, std::vector<double> x) {
    for (int attempt = 0; attempt < 5; ++attempt) {
        const ValidationReport report = validate(curve_from_vector(p.family, x), 10000);
        if (report.valid) return x;
        if (!std::isfinite(report.max_abs_slope) || report.max_abs_slope <= 1.0) break;
        const double factor = (1.0 - 1e-12) / report.max_abs_slope;
        for (std::size_t i : vertical_indices(p.family, x.size())) x[i] *= factor;
    }
    return {};
}

void check_problem(const OptimizationProblem& p) {
    if (!optimizable(p.family)) {
        throw DomainError("maximize_volume: family '" + std::string(family_name(p.family)) +
                          "' has no parameter search (use its closed form or 1D maximum)");
    }
    p.sheet.check();
    const std::size_t n = p.initial.size();
    if (p.family == Family::Polyline && (p.segments < 1 || n != static_cast<std::size_t>(p.segments))) {
        throw DomainError("maximize_volume: polyline start must have exactly N = segments heights");
    }
    if (p.family == Family::QuadBezier && n != 3) throw DomainError("maximize_volume: quad-bezier takes (a, b, h)");
    if (p.family == Family::CubicBezier && n != 5) {
        throw DomainError("maximize_volume: cubic-bezier takes (a, b, c, d, h)");
    }
    if (p.lower.size() != n || p.upper.size() != n) {
        throw DomainError("maximize_volume: bounds must match the parameter count");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(p.initial[i] >= p.lower[i] && p.initial[i] <= p.upper[i])) {
            throw DomainError("maximize_volume: initial parameter " + std::to_string(i) + " is outside its bounds");
        }
    }
    if (p.n_quadrature < 10) throw DomainError("maximize_volume: n_quadrature must be at least 10");
    if (p.n_constraint_samples < 2) throw DomainError("maximize_volume: need at least 2 constraint samples");
}

}  // namespace

OptimizationProblem OptimizationProblem::standard(Family family, double sheet_length, int segments) {
    OptimizationProblem p;
    p.family = family;
    p.sheet = SheetSpec{1.0, sheet_length};
    switch (family) {
        case Family::QuadBezier:
            p.initial = {0.2, 0.15, 0.2};
            p.lower = {1e-6, 0.0, 0.0};
            p.upper = {0.5 - 1e-6, 0.5, 0.5};
            break;
        case Family::CubicBezier:
            p.initial = {0.1, 0.08, 0.25, 0.2, 0.2};
            p.lower.assign(5, 0.0);
            p.upper.assign(5, 0.5);
            break;
        case Family::Polyline: {
            if (segments < 1) throw DomainError("polyline needs at least one segment");
            p.segments = segments;
            p.initial.resize(static_cast<std::size_t>(segments));
            for (int i = 1; i <= segments; ++i) {
                const double u = i / (2.0 * segments);
                p.initial[static_cast<std::size_t>(i - 1)] = 0.8 * std::sin(std::numbers::pi * u) / std::numbers::pi;
            }
            p.lower.assign(p.initial.size(), 0.0);
            p.upper.assign(p.initial.size(), 0.5);
            break;
        }
        default:
            throw DomainError("no optimization problem for family '" + std::string(family_name(family)) + "'");
    }
    return p;
}

std::vector<double> constraint_vector(Family family, std::span<const double> x, int n_samples) {
    if (family == Family::Polyline) {
        if (x.empty()) throw DomainError("constraint_vector: polyline needs at least one height");
        const double du = 0.5 / static_cast<double>(x.size());
        std::vector<double> g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double s = (x[i] - (i == 0 ? 0.0 : x[i - 1])) / du;
            g[i] = 1.0 - s * s;
        }
        return g;
    }
    if (n_samples < 1) throw DomainError("constraint_vector: need at least one sample");
    const bool quad = family == Family::QuadBezier;
    if (!quad && family != Family::CubicBezier) {
        throw DomainError("constraint_vector: family '" + std::string(family_name(family)) + "' is not optimized");
    }
    if (x.size() != (quad ? 3u : 5u)) throw DomainError("constraint_vector: wrong parameter count");
    for (double v : x) {
        if (!std::isfinite(v)) throw DomainError("constraint_vector: parameters must be finite");
    }
    std::vector<double> g(2 * static_cast<std::size_t>(n_samples + 1));
    for (int k = 0; k <= n_samples; ++k) {
        const double t = static_cast<double>(k) / n_samples;
        double du = 0.0, dv = 0.0;
        if (quad) {
            const DerivativeWeights w = quad_weights(t);
            du = w.wa * x[0] + w.u0;
            dv = w.wa * x[1] + w.wh * x[2];
        } else {
            const DerivativeWeights w = cubic_weights(t);
            du = w.wa * x[0] + w.wc * x[2] + w.u0;
            dv = w.wa * x[1] + w.wc * x[3] + w.wh * x[4];
        }
        g[static_cast<std::size_t>(k)] = du * du - dv * dv;
        g[static_cast<std::size_t>(n_samples + 1 + k)] = du - kMonotoneMargin;
    }
    return g;
}

double polyline_volume(std::span<const double> v, double length) {
    const double du = 0.5 / static_cast<double>(v.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Segment g = segment(i == 0 ? 0.0 : v[i - 1], v[i], du, length);
        sum += g.phi * g.q;
    }
    return 4.0 * sum;
}

std::vector<double> polyline_volume_gradient(std::span<const double> v, double length) {
    const double du = 0.5 / static_cast<double>(v.size());
    std::vector<double> grad(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Segment g = segment(i == 0 ? 0.0 : v[i - 1], v[i], du, length);
        grad[i] += 4.0 * (g.dphi * g.q / du + g.phi * g.qb);
        if (i > 0) grad[i - 1] += 4.0 * (-g.dphi * g.q / du + g.phi * g.qa);
    }
    return grad;
}

FdGradient gradient_fd(const ScalarObjective& objective, std::span<const double> params, double step,
                       std::span<const double> lower, std::span<const double> upper) {
    const std::size_t n = params.size();
    FdGradient out;
    out.values.assign(n, 0.0);
    out.shifted.assign(n, false);
    std::vector<double> probe(params.begin(), params.end());
    const double center = objective(probe);
    auto at = [&](std::size_t i, double value) {
        probe[i] = value;
        const double f = objective(probe);
        probe[i] = params[i];
        return f;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const double h = step > 0.0 ? step : 1e-6 * std::max(1.0, std::abs(params[i]));
        double lo = params[i] - h;
        double hi = params[i] + h;
        if (!lower.empty() && lo < lower[i]) {
            lo = std::max(lower[i], params[i] - h);
            out.shifted[i] = true;
        }
        if (!upper.empty() && hi > upper[i]) {
            hi = std::min(upper[i], params[i] + h);
            out.shifted[i] = true;
        }
        double f_lo = lo < params[i] ? at(i, lo) : center;
        double f_hi = hi > params[i] ? at(i, hi) : center;
        if (!std::isfinite(f_lo)) {
            lo = params[i];
            f_lo = center;
            out.shifted[i] = true;
        }
        if (!std::isfinite(f_hi)) {
            hi = params[i];
            f_hi = center;
            out.shifted[i] = true;
        }
        if (!(hi > lo) || !std::isfinite(f_lo) || !std::isfinite(f_hi)) {
            throw EvaluationError("gradient_fd: objective is not finite around parameter " + std::to_string(i));
        }
        out.values[i] = (f_hi - f_lo) / (hi - lo);
    }
    return out;
}

OptResult maximize_volume(const OptimizationProblem& p, const SolverConfig& config) {
    if (config.max_iter < 1) throw DomainError("maximize_volume: max_iter must be at least 1");
    check_problem(p);
    const std::vector<double> g0 = constraint_vector(p.family, p.initial, p.n_constraint_samples);
    if (worst_violation(g0) > config.ctol) {
        throw InfeasibleStartError("maximize_volume: initial point violates the slope constraint by " +
                                   std::to_string(worst_violation(g0)));
    }

    std::vector<std::vector<double>> starts{p.initial};
    if (config.multistart) {
        for (double factor : {0.9, 0.8, 1.05, 0.7}) {
            std::vector<double> s = p.initial;
            for (std::size_t i : vertical_indices(p.family, s.size())) {
                s[i] = std::clamp(s[i] * factor, p.lower[i], p.upper[i]);
            }
            if (worst_violation(constraint_vector(p.family, s, p.n_constraint_samples)) <= config.ctol) {
                starts.push_back(std::move(s));
            }
        }
    }

    const double length = p.sheet.normalized_length();
    auto value = [&](const std::vector<double>& x) {
        return volume_functional(curve_from_vector(p.family, x), length, p.n_quadrature);
    };

    OptResult best;
    bool have = false;
    double best_value = -1.0;
    int total_iterations = 0;
    for (const auto& start : starts) {
        Run run = solve_once(p, config, start);
        total_iterations += run.iterations;
        std::vector<double> x = restore_feasibility(p, run.params);
        if (x.empty()) {
            x = start;
            run.converged = false;
        }
        const double v = value(x);
        if (!have || v > best_value) {
            have = true;
            best_value = v;
            best.params = std::move(x);
            best.converged = run.converged;
            best.timed_out = run.timed_out;
            best.trace = std::move(run.trace);
        }
    }
    // Never report less than the start.
    if (value(p.initial) > best_value) {
        best.params = p.initial;
        best.converged = false;
    }
    best.iterations = total_iterations;
    const CreaseCurve curve = curve_from_vector(p.family, best.params);
    best.volume = volume_quadrature(curve, p.sheet, p.n_quadrature).value;
    best.max_violation = worst_violation(constraint_vector(p.family, best.params, p.n_constraint_samples));
    best.converged = best.converged && best.max_violation <= config.ctol;
    return best;
}

CreaseCurve result_curve(const OptimizationProblem& problem, const OptResult& result) {
    return curve_from_vector(problem.family, result.params);
}

int thread_limit() {
    if (const char* env = std::getenv("PILLOWFOLD_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min(v, 256L));
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

namespace {

std::string describe(const char* fmt_names, const std::vector<double>& values) {
    std::ostringstream os;
    os.precision(4);
    os << std::fixed;
    std::istringstream names(fmt_names);
    std::string name;
    for (std::size_t i = 0; i < values.size() && (names >> name); ++i) {
        if (i) os << ", ";
        os << name << " = " << values[i];
    }
    return os.str();
}

}  // namespace

std::vector<Table1Row> compute_table1(int polyline_segments) {
    const SheetSpec sheet;
    std::vector<Table1Row> rows(7);
    std::vector<std::function<void()>> jobs;
    jobs.emplace_back([&] {
        const Maximum m = rhombus_max();
        rows[0] = {"rhombus", m.value, 0.243507, describe("h", {m.argument})};
    });
    jobs.emplace_back([&] {
        const Maximum m = rectangle_max(sheet);
        rows[1] = {"rectangle", m.value, 0.243692, describe("h", {m.argument})};
    });
    jobs.emplace_back([&] {
        rows[2] = {"circle", circle_volume(sheet).value, 0.278150, "r = 1/pi"};
    });
    auto optimum = [&](std::size_t row, const char* shape, double reference, Family family, double length,
                       const char* names) {
        const OptimizationProblem p = OptimizationProblem::standard(family, length, polyline_segments);
        SolverConfig config;
        if (family == Family::Polyline && polyline_segments >= 1000) config.max_iter = 5000;
        const OptResult r = maximize_volume(p, config);
        rows[row] = {shape, r.volume, reference,
                     family == Family::Polyline ? "N = " + std::to_string(polyline_segments)
                                                : describe(names, r.params)};
    };
    jobs.emplace_back([&] { optimum(3, "arch (quad-bezier)", 0.294436, Family::QuadBezier, sheet.length, "a b h"); });
    jobs.emplace_back(
        [&] { optimum(4, "arch (cubic-bezier)", 0.295448, Family::CubicBezier, sheet.length, "a b c d h"); });
    jobs.emplace_back([&] { optimum(5, "arch (polyline)", 0.295449, Family::Polyline, sheet.length, ""); });
    jobs.emplace_back([&] { optimum(6, "arch (polyline, square sheet)", 0.174628, Family::Polyline, 1.0, ""); });

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs.size());
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
            try {
                jobs[i]();
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int threads = std::min<int>(thread_limit(), static_cast<int>(jobs.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

}  // namespace pillowfold
