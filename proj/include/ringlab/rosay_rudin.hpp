#pragma once

#include <vector>

#include "ringlab/field.hpp"

namespace ringlab {

/// Block rotation L with L Du(x0) = c Du(y0), even dimension.
///
/// In the adapted orthonormal basis (columns of `basis`: Du(x0)/|Du(x0)| first,
/// then the direction completing Du(y0)/|Du(y0)| = cos(theta) e1 + sin(theta) e2)
/// L has cos(theta) on the diagonal, -sin(theta) at (2a-1, 2a) and sin(theta) at
/// (2a, 2a-1). `matrix` is L in the original coordinates.
struct RotationEven {
    int dimension = 2;
    double angle = 0.0; ///< theta in [0, 2 pi)
    double scale = 1.0; ///< c = |Du(x0)| / |Du(y0)|
    Mat basis;
    Mat matrix;

    /// L in the adapted basis.
    Mat block() const;
};

RotationEven build_rotation(const Vec& du_x0, const Vec& du_y0);

/// sum_{i,k} L_ki D_k D_i u(y).
double rotated_hessian_trace(const HarmonicField& field, const RotationEven& rot, const Vec& y);

/// Base configuration of the level-preserving map x0 + w -> y0 + cLw + (f(w) + alpha(w)) xi.
class RRMapContext {
public:
    /// Requires u(x0) = u(y0) within 1e-9, both points interior, even dimension.
    RRMapContext(const HarmonicField& field, Vec x0, Vec y0);

    const HarmonicField& field() const noexcept { return *field_; }
    const Vec& x0() const noexcept { return x0_; }
    const Vec& y0() const noexcept { return y0_; }
    const RotationEven& rotation() const noexcept { return rotation_; }
    const Vec& xi() const noexcept { return xi_; }
    double grad_norm_y0() const noexcept { return grad_norm_y0_; }

    /// 0.25 * min(dist(x0, boundary), dist(y0, boundary)).
    double safe_radius() const noexcept { return safe_radius_; }

    /// f(w) = (u(x0 + w) - u(y0 + cLw)) / |Du(y0)|.
    double f(const Vec& w) const;

private:
    const HarmonicField* field_;
    Vec x0_;
    Vec y0_;
    RotationEven rotation_;
    Vec xi_;
    double grad_norm_y0_ = 0.0;
    double safe_radius_ = 0.0;
};

struct RRMapResult {
    Vec y;
    double f = 0.0;
    double alpha = 0.0;
    double residual = 0.0; ///< |u(x0 + w) - u(y)|
    int iterations = 0;
};

/// Solves G(w, alpha) = u(y0 + cLw + f(w) xi + alpha xi) - u(x0 + w) = 0 for alpha by
/// damped Newton. Throws MapFailure when Newton stalls or leaves the ring.
RRMapResult rr_map(const RRMapContext& ctx, const Vec& w);

struct OrderFit {
    bool vanishes = false; ///< every |alpha| below the noise floor
    double exponent = 0.0; ///< slope of log|alpha| against log r
    int points_used = 0;
};

/// Fits |alpha(r * direction)| ~ r^p over the given radii (>= 5, decreasing, within the safe radius).
OrderFit alpha_order_fit(const RRMapContext& ctx, const Vec& direction, const std::vector<double>& radii,
                         double noise_floor = 1e-13);

/// Max over the grid of the 5-point (2D) or 7-point (3D) Laplacian of w -> f(w).
double f_harmonicity_check(const RRMapContext& ctx, const std::vector<Vec>& grid, double step);

/// Euclidean distance from x to the nearer boundary, measured along the normal
/// by densely sampling the boundary.
double distance_to_boundary(const ConvexRing& ring, const Vec& x);

} // namespace ringlab
