#pragma once

#include <array>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace ringlab {

/// Point or vector in R^2 or R^3. Fixed maximum size, so no heap traffic.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;

/// Square matrix of size 1..3 (Hessians, frames, rotations).
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

/// Fully symmetric third-order tensor stored as slices: T(i,j,k) = slice[k](i,j).
struct Tensor3 {
    std::array<Mat, 3> slice;

    double operator()(int i, int j, int k) const { return slice[k](i, j); }
};

inline Vec vec2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

inline Vec vec3(double x, double y, double z) {
    Vec v(3);
    v << x, y, z;
    return v;
}

} // namespace ringlab
