#pragma once

#include <vector>

#include "ringlab/field.hpp"
#include "ringlab/two_point.hpp"

namespace ringlab {

struct LevelMinimum {
    double level = 0.0;
    double value = 0.0; ///< min of |Du| kappa_1 over the level
    Vec point;
};

/// Boundary-versus-interior minimum of |Du| kappa_1.
struct CmyReport {
    double boundary_min = 0.0;          ///< extrapolated boundary value a
    Vec boundary_point;                 ///< minimizer on the nearest sampled level
    bool boundary_min_on_outer = true;  ///< true if a comes from the outer boundary
    double outer_extrapolated = 0.0;
    double inner_extrapolated = 0.0;

    double interior_min = 0.0;
    Vec interior_point;
    double interior_level = 0.0;

    double margin = 0.0; ///< interior_min - boundary_min
    double global_min = 0.0;
    bool global_min_on_boundary = true;

    std::vector<LevelMinimum> per_level;
    bool continuity_ok = true;

    bool convex_hypothesis = true;  ///< both boundaries strictly convex
    bool exploratory = false;       ///< scan ran without the convexity hypothesis
    double tolerance = 1e-4;
    bool property_holds = true;     ///< margin >= -tolerance
};

struct CmyScanOptions {
    bool exploratory = false;
    double tolerance = 1e-4;
    double spacing = 0.0; ///< level tracing spacing, 0 selects 1% of the outer radius
    int workers = 1;
};

/// Evaluates |Du| kappa_1 on a (level x arc length) grid (2D) or on radial probes (3D),
/// including the near-boundary levels 0.001 and 0.999. Boundary values are Richardson
/// extrapolated from the levels {0.004, 0.002, 0.001} (and their mirrors near 1).
/// Throws HypothesisViolation on non-convex rings unless options.exploratory is set.
CmyReport scan_min_du_kappa1(const HarmonicField& field, int levels, int points_per_level,
                             const CmyScanOptions& options = {});

/// Two-point search with psi(t) = a t - a t^2 / (6 eps^2) over pairs with |y - x| <= eps.
/// options.cap, when set, must not exceed eps.
QReport localized_mp_check(const HarmonicField& field, double a, double eps, ExtremizeOptions options = {});

} // namespace ringlab
