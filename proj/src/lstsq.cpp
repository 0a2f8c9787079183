#include "lstsq.hpp"

#include <algorithm>
#include <vector>

#include <lapacke.h>

#include "ringlab/errors.hpp"

namespace ringlab {

LstsqResult lstsq_truncated_svd(Eigen::MatrixXd a, Eigen::VectorXd b, double cutoff) {
    const lapack_int m = static_cast<lapack_int>(a.rows());
    const lapack_int n = static_cast<lapack_int>(a.cols());
    const lapack_int ldb = std::max(m, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ldb);
    rhs.head(m) = b;
    std::vector<double> s(static_cast<std::size_t>(std::min(m, n)));
    lapack_int rank = 0;
    const lapack_int info = LAPACKE_dgelsd(LAPACK_COL_MAJOR, m, n, 1, a.data(), m, rhs.data(), ldb,
                                           s.data(), cutoff, &rank);
    if (info != 0) throw SolverAccuracyError("SVD least-squares solve did not converge", -1.0);
    LstsqResult out;
    out.x = rhs.head(n);
    out.rank = static_cast<int>(rank);
    out.largest_singular_value = s.front();
    out.smallest_kept_singular_value = rank > 0 ? s[static_cast<std::size_t>(rank - 1)] : 0.0;
    return out;
}

} // namespace ringlab
