#pragma once

#include <cmath>
#include <utility>

#include "ringlab/types.hpp"

namespace ringlab {

using TangentBasis = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 2>;

/// Orthonormal basis (as columns) of the hyperplane orthogonal to the unit vector n.
inline TangentBasis tangent_basis(const Vec& n) {
    const auto dim = n.size();
    TangentBasis e(dim, dim - 1);
    if (dim == 2) {
        e.col(0) << -n(1), n(0);
        return e;
    }
    // Pick the axis least aligned with n, Gram-Schmidt it, then cross.
    Eigen::Vector3d nn(n(0), n(1), n(2));
    Eigen::Vector3d axis = Eigen::Vector3d::Zero();
    int k = 0;
    nn.cwiseAbs().minCoeff(&k);
    axis(k) = 1.0;
    Eigen::Vector3d t1 = (axis - axis.dot(nn) * nn).normalized();
    Eigen::Vector3d t2 = nn.cross(t1);
    e.col(0) = t1;
    e.col(1) = t2;
    return e;
}

/// Eigenvalues (ascending) of a 1x1 or 2x2 symmetric matrix, with the unit
/// eigenvector of the smaller one. Closed form.
struct SmallEigen {
    double lo;
    double hi;
    Eigen::Vector2d lo_vector;
};

inline SmallEigen small_sym_eigen(const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 2, 2>& m) {
    if (m.rows() == 1) {
        return {m(0, 0), m(0, 0), Eigen::Vector2d(1.0, 0.0)};
    }
    const double a = m(0, 0);
    const double b = 0.5 * (m(0, 1) + m(1, 0));
    const double d = m(1, 1);
    const double mean = 0.5 * (a + d);
    const double half = 0.5 * (a - d);
    const double rad = std::hypot(half, b);
    const double lo = mean - rad;
    const double hi = mean + rad;
    Eigen::Vector2d v;
    if (rad == 0.0) {
        v = Eigen::Vector2d(1.0, 0.0);
    } else if (half <= 0.0) {
        // (a - lo) is the smaller pivot; use the row with the larger entries.
        v = Eigen::Vector2d(rad - half, -b);
        if (v.norm() == 0.0) v = Eigen::Vector2d(1.0, 0.0);
        v.normalize();
    } else {
        v = Eigen::Vector2d(b, -(rad + half));
        v.normalize();
    }
    return {lo, hi, v};
}

} // namespace ringlab
