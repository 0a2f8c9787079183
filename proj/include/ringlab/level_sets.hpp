#pragma once

#include <iosfwd>
#include <vector>

#include "ringlab/field.hpp"

namespace ringlab {

/// Closed, arc-length parameterized polyline on {u = level} (2D).
struct LevelCurve {
    double level = 0.0;
    std::vector<Vec> points;
    std::vector<double> arc; ///< cumulative arc length at each point, arc[0] = 0
    double length = 0.0;

    std::size_t size() const noexcept { return points.size(); }

    /// Point of the curve at arc position s (taken modulo the length), projected
    /// back onto the level set.
    Vec point_at(const HarmonicField& field, double s) const;
};

/// Level point x(c, dir) on the ray from the ring reference point. Unique for
/// rings that are star-shaped about that point, since u is monotone along the ray.
struct RayLevelPoint {
    Vec point;
    double t = 0.0; ///< distance from the reference point
    Jet jet;        ///< value, gradient and Hessian at the point
};

RayLevelPoint level_point_on_ray(const HarmonicField& field, double level, const Vec& dir,
                                 double t_guess = -1.0);

/// Newton projection along Du until |u - level| <= tol. Throws TracingError after 50 steps.
Vec project_to_level(const HarmonicField& field, const Vec& x, double level, double tol = 1e-12);

/// Predictor-corrector tracing of {u = level}; 0 < level < 1, 2D only.
LevelCurve trace_level(const HarmonicField& field, double level, double spacing);

/// Principal curvatures of the level set through x, in the orientation where the
/// level sets of the annulus potential have curvature +1/r.
struct CurvatureFrame {
    double grad_norm = 0.0;
    Vec normal;          ///< Du / |Du|
    Vec curvatures;      ///< ascending, size n-1
    Vec min_direction;   ///< unit tangent of the smallest principal curvature
};

CurvatureFrame curvature_frame(const HarmonicField& field, const Vec& x);

double smallest_principal_curvature(const HarmonicField& field, const Vec& x);

/// |Du| * kappa_1 at x.
double du_kappa1(const HarmonicField& field, const Vec& x);

/// 2D only: -(u_y^2 u_xx - 2 u_x u_y u_xy + u_x^2 u_yy) / |Du|^3.
double planar_level_curvature(const HarmonicField& field, const Vec& x);

/// Columns: s, x1, x2[, x3], u, kappa1, grad_norm, du_kappa1.
void write_level_curve_csv(std::ostream& os, const HarmonicField& field, const LevelCurve& curve);

} // namespace ringlab
