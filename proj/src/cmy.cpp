#include "ringlab/cmy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ringlab/errors.hpp"
#include "ringlab/level_sets.hpp"
#include "ringlab/parallel.hpp"

namespace ringlab {

namespace {

constexpr double kNearBoundary = 0.001;

// Min of |Du| kappa_1 over one level: dense samples, then a parabolic step
// around the best sample (2D).
LevelMinimum level_minimum(const HarmonicField& field, double c, int points, double spacing) {
    LevelMinimum best;
    best.level = c;
    best.value = std::numeric_limits<double>::infinity();
    if (field.dimension() == 2) {
        const LevelCurve curve = trace_level(field, c, spacing);
        const double h = curve.length / points;
        std::vector<double> vals(static_cast<std::size_t>(points));
        std::size_t arg = 0;
        for (int k = 0; k < points; ++k) {
            vals[static_cast<std::size_t>(k)] = du_kappa1(field, curve.point_at(field, h * k));
            if (vals[static_cast<std::size_t>(k)] < vals[arg]) arg = static_cast<std::size_t>(k);
        }
        const std::size_t n = vals.size();
        const double fm = vals[(arg + n - 1) % n];
        const double f0 = vals[arg];
        const double fp = vals[(arg + 1) % n];
        const double denom = fm - 2.0 * f0 + fp;
        double s = h * static_cast<double>(arg);
        best.value = f0;
        best.point = curve.point_at(field, s);
        if (denom > 0.0) {
            const double shift = 0.5 * (fm - fp) / denom;
            if (std::abs(shift) < 1.0) {
                const Vec p = curve.point_at(field, s + shift * h);
                const double v = du_kappa1(field, p);
                if (v < best.value) {
                    best.value = v;
                    best.point = p;
                }
            }
        }
        return best;
    }
    for (const auto& d : fibonacci_directions(points)) {
        const Vec p = level_point_on_ray(field, c, d).point;
        const double v = du_kappa1(field, p);
        if (v < best.value) {
            best.value = v;
            best.point = p;
        }
    }
    return best;
}

double richardson(double f_h, double f_2h, double f_4h) { return (8.0 * f_h - 6.0 * f_2h + f_4h) / 3.0; }

} // namespace

CmyReport scan_min_du_kappa1(const HarmonicField& field, int levels, int points_per_level,
                             const CmyScanOptions& options) {
    if (levels < 2) throw std::invalid_argument("scan needs at least 2 levels");
    if (points_per_level < 8) throw std::invalid_argument("scan needs at least 8 points per level");

    CmyReport report;
    report.tolerance = options.tolerance;
    report.convex_hypothesis =
        is_strictly_convex(field.ring().outer()).strictly_convex && is_strictly_convex(field.ring().inner()).strictly_convex;
    if (!report.convex_hypothesis && !options.exploratory) {
        throw HypothesisViolation("ring boundaries are not strictly convex; rerun in exploratory mode");
    }
    report.exploratory = !report.convex_hypothesis;

    const double spacing = options.spacing > 0.0 ? options.spacing : 0.01 * field.ring().outer().base_radius();

    std::vector<double> grid(static_cast<std::size_t>(levels));
    for (int i = 0; i < levels; ++i) {
        grid[static_cast<std::size_t>(i)] = kNearBoundary + (1.0 - 2.0 * kNearBoundary) * i / (levels - 1);
    }
    std::vector<double> all = grid;
    for (double c : {2.0 * kNearBoundary, 4.0 * kNearBoundary, 1.0 - 2.0 * kNearBoundary, 1.0 - 4.0 * kNearBoundary}) {
        all.push_back(c);
    }
    std::vector<LevelMinimum> mins(all.size());
    parallel_for(all.size(), options.workers,
                 [&](std::size_t i) { mins[i] = level_minimum(field, all[i], points_per_level, spacing); });

    const std::size_t ng = grid.size();
    report.per_level.assign(mins.begin(), mins.begin() + static_cast<std::ptrdiff_t>(ng));
    const LevelMinimum& outer_h = mins[0];
    const LevelMinimum& inner_h = mins[ng - 1];
    report.outer_extrapolated = richardson(outer_h.value, mins[ng].value, mins[ng + 1].value);
    report.inner_extrapolated = richardson(inner_h.value, mins[ng + 2].value, mins[ng + 3].value);
    report.boundary_min_on_outer = report.outer_extrapolated <= report.inner_extrapolated;
    report.boundary_min = std::min(report.outer_extrapolated, report.inner_extrapolated);
    report.boundary_point = report.boundary_min_on_outer ? outer_h.point : inner_h.point;

    const auto it = std::min_element(report.per_level.begin(), report.per_level.end(),
                                     [](const LevelMinimum& a, const LevelMinimum& b) { return a.value < b.value; });
    report.interior_min = it->value;
    report.interior_point = it->point;
    report.interior_level = it->level;
    report.margin = report.interior_min - report.boundary_min;
    report.global_min_on_boundary = report.boundary_min <= report.interior_min;
    report.global_min = std::min(report.boundary_min, report.interior_min);
    report.property_holds = report.margin >= -options.tolerance;

    std::vector<double> diffs;
    for (std::size_t i = 1; i < ng; ++i) diffs.push_back(std::abs(report.per_level[i].value - report.per_level[i - 1].value));
    if (!diffs.empty()) {
        std::vector<double> sorted = diffs;
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
        const double median = sorted[sorted.size() / 2];
        for (double d : diffs) {
            if (d > 10.0 * median + 1e-9) report.continuity_ok = false;
        }
    }
    return report;
}

QReport localized_mp_check(const HarmonicField& field, double a, double eps, ExtremizeOptions options) {
    if (!(a > 0.0)) throw ConfigError("localized check needs a > 0");
    if (!(eps > 0.0)) throw ConfigError("localized check needs eps > 0");
    if (options.cap && *options.cap > eps) {
        throw ConfigError("psi inadmissible on requested range: separation cap exceeds eps");
    }
    if (!options.cap) options.cap = eps;
    return extremize_Q(field, PsiSpec::quadratic_capped(a, eps), Extremum::max, options);
}

} // namespace ringlab
