#pragma once

#include <Eigen/Core>

namespace ringlab {

struct LstsqResult {
    Eigen::VectorXd x;
    int rank = 0;
    double largest_singular_value = 0.0;
    double smallest_kept_singular_value = 0.0;
};

/// Minimum-norm least squares through the SVD; singular values below
/// cutoff * sigma_max are treated as zero.
LstsqResult lstsq_truncated_svd(Eigen::MatrixXd a, Eigen::VectorXd b, double cutoff);

} // namespace ringlab
