#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ringlab/field.hpp"
#include "ringlab/level_sets.hpp"

namespace ringlab {

/// Member of the psi family used in the two-point function. t is a squared distance.
class PsiSpec {
public:
    enum class Kind { zero, linear, quadratic_capped };

    static PsiSpec zero() { return PsiSpec(Kind::zero, 0.0, 0.0); }
    /// psi(t) = a t, a >= 0.
    static PsiSpec linear(double a);
    /// psi(t) = a t - a t^2 / (6 eps^2); admissible on [0, eps^2].
    static PsiSpec quadratic_capped(double a, double eps);

    Kind kind() const noexcept { return kind_; }
    double a() const noexcept { return a_; }
    double eps() const noexcept { return eps_; }

    double value(double t) const;
    double d1(double t) const;
    double d2(double t) const;

    /// psi'(t) - 2 |psi''(t)| t.
    double admissibility(double t) const;

    /// Upper end of the range on which the family member is admissible.
    double validity_limit() const;

private:
    PsiSpec(Kind k, double a, double eps) : kind_(k), a_(a), eps_(eps) {}

    Kind kind_;
    double a_;
    double eps_;
};

std::string_view to_string(PsiSpec::Kind k);

struct Admissibility {
    bool admissible = false;
    double worst_margin = 0.0;
};

/// Evaluates psi' - 2|psi''| t on a uniform grid of [0, t_max]; admissible iff min >= -1e-14.
Admissibility check_psi_admissible(const PsiSpec& psi, double t_max, int samples);

/// (Du(y) - Du(x)) . (y - x) + psi(|y - x|^2). Throws ConstraintError if |u(x) - u(y)| > 1e-9.
double eval_Q(const HarmonicField& field, const PsiSpec& psi, const Vec& x, const Vec& y);

/// (u(x) + u(y))/2 - u((x + y)/2), or nullopt when the midpoint leaves the closed ring.
std::optional<double> eval_rr_midpoint(const HarmonicField& field, const Vec& x, const Vec& y);

struct SigmaPair {
    Vec x;
    Vec y;
    double level = 0.0;
    double separation = 0.0;
};

struct SigmaSamplingOptions {
    std::optional<double> separation_cap;
    double margin = 0.01;   ///< levels on a uniform grid of (margin, 1 - margin)
    double spacing = 0.0;   ///< tracing spacing; 0 selects 1% of the outer radius
    std::uint64_t seed = 1;
};

/// Same-level pairs: for each level, trace the curve and draw stratified arc positions.
std::vector<SigmaPair> sample_sigma(const HarmonicField& field, int levels, int pairs_per_level,
                                    const SigmaSamplingOptions& options = {});

enum class Extremum { max, min };
enum class Location { interior, boundary, separation_cap, diagonal };

std::string_view to_string(Extremum e);
std::string_view to_string(Location l);

struct ExtremizeOptions {
    int levels = 20;
    int pairs_per_level = 200;
    int refine_top = 50;          ///< refined starts from the interior-level coarse samples
    int boundary_refine_top = 10; ///< refined starts on each boundary level (c = 0 and c = 1)
    std::optional<double> cap;    ///< restrict to |y - x| <= cap
    double boundary_margin = 0.01;
    double diagonal_resolution = 1e-4;
    double cap_margin_fraction = 1e-3;
    int max_iterations = 200;
    double strict_tolerance = 1e-7;
    double tie_tolerance = 1e-9;
    double spacing = 0.0;
    std::uint64_t seed = 1;
    int workers = 1;
};

struct QCandidate {
    SigmaPair pair;
    double value = 0.0; ///< Q at the pair
    Location location = Location::interior;
    bool converged = true;
    int iterations = 0;
};

struct QReport {
    Extremum kind = Extremum::max;
    double value = 0.0;
    SigmaPair argument;
    Location classification = Location::diagonal;
    bool converged = true;

    int starts = 0;
    int coarse_samples = 0;
    int refinement_iterations = 0;
    int non_converged = 0;
    double coarse_best = 0.0;   ///< best coarse Q (in the direction of `kind`)
    double refined_best = 0.0;  ///< best Q over all candidates

    /// Best candidate of each location class, indexed by Location.
    std::array<std::optional<QCandidate>, 4> best_by_location;

    /// Interior best beyond the best boundary/diagonal/cap value (positive = more extreme).
    double interior_excess = 0.0;
    bool strict_interior_extremum = false;
};

/// Multi-start search for the max (or min) of Q over Sigma (or Sigma^cap).
QReport extremize_Q(const HarmonicField& field, const PsiSpec& psi, Extremum kind,
                    const ExtremizeOptions& options = {});

struct ConvexityWitness {
    bool holds = false;              ///< two-point verdict agrees with the curvature verdict
    bool two_point_verdict = false;  ///< fitted coefficient <= -a
    bool curvature_verdict = false;  ///< |Du| kappa_1 >= a
    double fitted_coefficient = 0.0; ///< quadratic coefficient of (Du(y)-Du(x)).(y-x) in |y-x|
    double du_kappa1 = 0.0;
};

/// Probes same-level points y near x along the least-curved direction and fits
/// (Du(y) - Du(x)) . (y - x) = A |y-x|^2 + B |y-x|^3.
ConvexityWitness local_convexity_witness(const HarmonicField& field, const Vec& x, double a,
                                         double probe_radius);

} // namespace ringlab
