#include <algorithm>
#include <cmath>

#include "pillowfold/errors.hpp"
#include "pillowfold/fold.hpp"

namespace pillowfold {

namespace {

struct Probe {
    double lo;
    double hi;
    double slope;
};

bool offending(double slope) { return std::abs(slope) > 1.0 + kSlopeTolerance; }

ValidationReport summarize(std::vector<Probe> probes) {
    std::sort(probes.begin(), probes.end(), [](const Probe& a, const Probe& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    ValidationReport report;
    report.n_samples = static_cast<int>(probes.size());
    bool in_run = false;
    for (const Probe& p : probes) {
        report.max_abs_slope = std::max(report.max_abs_slope, std::abs(p.slope));
        if (!offending(p.slope)) {
            in_run = false;
            continue;
        }
        if (!report.violations.empty() && (in_run || p.lo <= report.violations.back().hi)) {
            Interval& last = report.violations.back();
            last.hi = std::max(last.hi, p.hi);
        } else {
            report.violations.push_back({p.lo, p.hi});
        }
        in_run = true;
    }
    report.valid = report.violations.empty();
    report.max_tangent_angle = std::atan(report.max_abs_slope);
    return report;
}

ValidationReport failed(const std::string& reason) {
    ValidationReport report;
    report.valid = false;
    report.max_abs_slope = std::numeric_limits<double>::infinity();
    report.max_tangent_angle = std::atan(report.max_abs_slope);
    report.violations.push_back({0.0, 1.0});
    report.reason = reason;
    return report;
}

}  // namespace

double development_factor(double slope) {
    const double r = 1.0 - slope * slope;
    if (r >= 0.0) return std::sqrt(r);
    if (std::abs(slope) <= 1.0 + kSlopeTolerance) return 0.0;
    throw InvalidCurveError("crease slope " + std::to_string(slope) +
                            " exceeds 1: the tangent angle is outside [-45, 45] degrees");
}

ValidationReport validate(const CreaseCurve& curve, int n_samples) {
    if (n_samples < 2) throw DomainError("validate: n_samples must be at least 2");
    std::vector<Probe> probes;
    try {
        for (const CurveSample& s : sample_uniform(curve, n_samples)) {
            probes.push_back({s.u, s.u, s.fprime});
        }
    } catch (const NonMonotoneError& e) {
        return failed(e.what());
    }
    const auto nodes = curve.linear_nodes();
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double du = nodes[i + 1].u - nodes[i].u;
        if (du <= 0.0) continue;
        probes.push_back({nodes[i].u, nodes[i + 1].u, (nodes[i + 1].f - nodes[i].f) / du});
    }
    return summarize(std::move(probes));
}

ValidationReport discrete_triangle_check(const CreaseCurve& curve, double delta_w) {
    if (!(delta_w > 0.0 && delta_w <= 0.5)) {
        throw DomainError("discrete_triangle_check: delta_w must lie in (0, 1/2]");
    }
    const int steps = static_cast<int>(std::ceil(1.0 / delta_w - 1e-9));
    std::vector<Probe> probes;
    probes.reserve(static_cast<std::size_t>(steps));
    double min_leg = std::numeric_limits<double>::infinity();
    double min_leg_u = 0.0;
    try {
        double f0 = eval(curve, 0.0).f;
        for (int k = 0; k < steps; ++k) {
            const double u0 = k * delta_w;
            const double u1 = (k + 1 == steps) ? 1.0 : std::min(1.0, (k + 1) * delta_w);
            const double f1 = eval(curve, u1).f;
            const double w = u1 - u0;
            const double df = f1 - f0;
            // Right triangle SPQ: PS = delta f, PQ = w, SQ^2 = PQ^2 - PS^2.
            const double leg_sq = w * w - df * df;
            if (leg_sq < min_leg) {
                min_leg = leg_sq;
                min_leg_u = u0;
            }
            probes.push_back({u0, u1, df / w});
            f0 = f1;
        }
    } catch (const NonMonotoneError& e) {
        return failed(e.what());
    }
    ValidationReport report = summarize(std::move(probes));
    report.min_leg_squared = min_leg;
    report.min_leg_u = min_leg_u;
    return report;
}

CrossSectionProfile compute_profile(const CreaseCurve& curve, int n) {
    if (n < 2) throw DomainError("compute_profile: n must be at least 2");
    const ValidationReport report = validate(curve, std::max(n, 1000));
    if (!report.valid) {
        throw InvalidCurveError("compute_profile: curve is not developable (max |f'| = " +
                                std::to_string(report.max_abs_slope) + ")" +
                                (report.reason.empty() ? "" : ": " + report.reason));
    }
    const std::vector<double> kinks = curve.breakpoints();
    CrossSectionProfile profile;
    profile.points.reserve(static_cast<std::size_t>(n) + 1);
    double x = 0.0;
    profile.points.push_back({0.0, eval(curve, 0.0).f});
    for (int k = 0; k < n; ++k) {
        const double u0 = static_cast<double>(k) / n;
        const double u1 = (k + 1 == n) ? 1.0 : static_cast<double>(k + 1) / n;
        double a = u0;
        for (double kink : kinks) {
            if (kink > u0 && kink < u1) {
                x += (kink - a) * development_factor(eval(curve, 0.5 * (a + kink)).fprime);
                a = kink;
            }
        }
        x += (u1 - a) * development_factor(eval(curve, 0.5 * (a + u1)).fprime);
        const double z = eval(curve, u1).f;
        profile.points.push_back({x, z});
        profile.height = std::max(profile.height, z);
    }
    profile.width = x;
    return profile;
}

}  // namespace pillowfold
