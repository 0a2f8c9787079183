#pragma once

#include <vector>

#include "ringlab/geometry.hpp"
#include "ringlab/types.hpp"

namespace ringlab {

struct SolverParams {
    int charges_per_boundary = 160;
    double offset_factor = 0.35;
    int collocation_per_boundary = 480;
    double svd_cutoff = 1e-12;
    double residual_tolerance = 1e-8;

    /// 160 charges / 480 collocation points per boundary in 2D, 500 / 2000 in 3D.
    /// The 3D charge offset is 0.5.
    static SolverParams defaults(int dimension);
};

struct FitReport {
    double max_residual = 0.0;       ///< on the validation grid
    double collocation_residual = 0.0;
    int validation_points = 0;
    int rank = 0;
    int unknowns = 0;
    double largest_singular_value = 0.0;
    double smallest_kept_singular_value = 0.0;
};

/// Value and derivatives of u at one point, up to the requested order.
struct Jet {
    double value = 0.0;
    Vec grad;
    Mat hess;
    Tensor3 third;
};

/// u(x) = sum_j w_j G(x - q_j) + constant, with G = log|.| in 2D and 1/|.| in 3D.
/// Immutable; safe for concurrent evaluation.
class HarmonicField {
public:
    HarmonicField(ConvexRing ring, std::vector<Vec> charges, std::vector<double> weights,
                  double constant, FitReport report = {});

    const ConvexRing& ring() const noexcept { return ring_; }
    int dimension() const noexcept { return ring_.dimension(); }
    const std::vector<Vec>& charges() const noexcept { return charges_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double constant() const noexcept { return constant_; }
    const FitReport& fit_report() const noexcept { return report_; }

    double eval(const Vec& x) const;
    Vec eval_grad(const Vec& x) const;
    Mat eval_hessian(const Vec& x) const;
    Tensor3 eval_third(const Vec& x) const;

    /// Value plus derivatives through `order` (0..3) in one pass over the charges.
    Jet jet(const Vec& x, int order) const;

    /// Same field with charges (and the ring's profile centers) rotated about the origin.
    /// Only profiles that are rotation invariant can be rotated; used for frame tests.
    HarmonicField rotated(const Mat& rotation) const;

private:
    ConvexRing ring_;
    std::vector<Vec> charges_;
    std::vector<double> weights_;
    double constant_;
    FitReport report_;
};

/// Method of fundamental solutions fit of u = 0 on the outer and u = 1 on the inner boundary.
HarmonicField solve_ring(const ConvexRing& ring, const SolverParams& params);

inline HarmonicField solve_ring(const ConvexRing& ring) {
    return solve_ring(ring, SolverParams::defaults(ring.dimension()));
}

struct GradientCheck {
    double min_grad_norm = 0.0;
    double min_value = 0.0;
    double max_value = 0.0;
    int samples = 0;
    bool gradient_ok = false;       ///< min |Du| > threshold
    bool maximum_principle_ok = false; ///< 0 < u < 1 at all samples
};

/// Samples a grid x grid box (grid^3 in 3D is replaced by grid^2 radial probes)
/// and checks that Du does not vanish and 0 < u < 1 in the ring interior.
GradientCheck check_gradient_hypothesis(const HarmonicField& field, int grid = 100, double threshold = 1e-4);

} // namespace ringlab
