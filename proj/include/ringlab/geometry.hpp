#pragma once

#include <string_view>
#include <vector>

#include "ringlab/types.hpp"

namespace ringlab {

/// One term of a radial profile: cos_coeff * Re(z^index) + sin_coeff * Im(z^index),
/// with z = d_x + i d_y for the unit direction d. In 2D this is the usual
/// a cos(k phi) + b sin(k phi); in 3D it is a sectoral harmonic, smooth at the poles.
struct FourierMode {
    int index = 0;
    double cos_coeff = 0.0;
    double sin_coeff = 0.0;
};

/// Closed boundary given by a radial profile r(direction) about a center.
class StarBoundary {
public:
    StarBoundary(int dimension, Vec center, double base_radius,
                 std::vector<FourierMode> modes = {});

    static StarBoundary circle(double radius, Vec center = Vec::Zero(2));
    static StarBoundary sphere(double radius, Vec center = Vec::Zero(3));

    int dimension() const noexcept { return dimension_; }
    const Vec& center() const noexcept { return center_; }
    double base_radius() const noexcept { return base_radius_; }
    const std::vector<FourierMode>& modes() const noexcept { return modes_; }

    /// Radius along a unit direction.
    double radius(const Vec& direction) const;

    /// 2D profile and its first two angular derivatives.
    double radius_at(double phi) const;
    double radius_d1(double phi) const;
    double radius_d2(double phi) const;

    /// Boundary point along a unit direction.
    Vec point(const Vec& direction) const { return center_ + radius(direction) * direction; }

    /// |x - c| - r((x - c)/|x - c|); negative inside.
    double radial_offset(const Vec& x) const;

    /// Upper bound on the profile over all directions.
    double max_radius_bound() const;

    /// Distance t at which origin + t*dir leaves the enclosed region. The origin must
    /// be inside and the region star-shaped about it.
    double ray_exit(const Vec& origin, const Vec& dir) const;

    /// Gradient and Hessian of the implicit function F(x) = |x - c| - r(direction).
    void implicit_derivatives(const Vec& x, Vec& grad, Mat& hess) const;

private:
    int dimension_;
    Vec center_;
    double base_radius_;
    std::vector<FourierMode> modes_;
};

/// Omega = Omega_0 \ closure(Omega_1). The reference point is the inner center.
class ConvexRing {
public:
    ConvexRing(StarBoundary outer, StarBoundary inner, double margin = 1e-3);

    const StarBoundary& outer() const noexcept { return outer_; }
    const StarBoundary& inner() const noexcept { return inner_; }
    double margin() const noexcept { return margin_; }
    int dimension() const noexcept { return outer_.dimension(); }
    const Vec& reference_point() const noexcept { return inner_.center(); }

    /// Distance along the ray from the reference point to each boundary.
    double inner_exit(const Vec& dir) const;
    double outer_exit(const Vec& dir) const;

    /// Rough diameter of the outer domain.
    double diameter() const;

private:
    StarBoundary outer_;
    StarBoundary inner_;
    double margin_;
};

enum class Region { in_ring_interior, in_inner_hole, outside_outer, on_outer_boundary, on_inner_boundary };

std::string_view to_string(Region r);

Region classify_point(const ConvexRing& ring, const Vec& x, double tol = 1e-9);

struct BoundarySample {
    Vec point;
    Vec normal;       ///< outward unit normal
    double curvature; ///< 2D curvature, or the smaller principal curvature in 3D
};

std::vector<BoundarySample> boundary_sample(const StarBoundary& b, int m);

struct ConvexityCertificate {
    bool strictly_convex;
    double min_curvature;
};

ConvexityCertificate is_strictly_convex(const StarBoundary& b);

bool is_starshaped(const ConvexRing& ring, const Vec& p);

/// Unit directions used for certification: 4096 angles in 2D, 64 x 128 in 3D.
std::vector<Vec> certification_directions(int dimension);

/// Roughly uniform unit directions on the sphere (golden-angle spiral).
std::vector<Vec> fibonacci_directions(int count, double twist = 0.0);

} // namespace ringlab
