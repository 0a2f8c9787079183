#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "ringlab/cmy.hpp"
#include "ringlab/errors.hpp"
#include "ringlab/level_sets.hpp"

using namespace ringlab;

namespace {

const HarmonicField& flower() {
    // r = 2 + 0.15 cos(4 phi) has negative curvature near phi = pi / 4.
    static const HarmonicField f = solve_ring(
        ConvexRing(StarBoundary(2, Vec::Zero(2), 2.0, {{4, 0.15, 0.0}}), StarBoundary::circle(0.8)));
    return f;
}

} // namespace

TEST_CASE("annulus: minimum 1/(4 log 2) on the outer boundary") {
    const CmyReport r = scan_min_du_kappa1(fixtures::annulus(), 21, 128);
    const double expected = 1.0 / (4.0 * std::log(2.0));
    CHECK(std::abs(r.boundary_min - expected) <= 1e-5);
    CHECK(r.boundary_min_on_outer);
    CHECK(std::abs(r.outer_extrapolated - expected) <= 1e-5);
    CHECK(std::abs(r.inner_extrapolated - 1.0 / std::log(2.0)) <= 1e-4);
    CHECK(r.margin >= 0.0);
    CHECK(r.property_holds);
    CHECK(r.global_min_on_boundary);
    CHECK(r.continuity_ok);
    CHECK(r.convex_hypothesis);
    CHECK_FALSE(r.exploratory);
    // Each level is a circle r = 2^(1 - c) with value 2^(2c - 2) / log 2.
    for (const auto& l : r.per_level) {
        CHECK(std::abs(l.value - std::pow(2.0, 2.0 * l.level - 2.0) / std::log(2.0)) <= 1e-6);
    }
}

TEST_CASE("concentric spheres: minimum 1/4 on the outer sphere") {
    const CmyReport r = scan_min_du_kappa1(fixtures::spheres(), 11, 64);
    CHECK(std::abs(r.boundary_min - 0.25) <= 1e-4);
    CHECK(r.boundary_min_on_outer);
    CHECK(r.property_holds);
    // 2 / r^3 at u = 1/3, r = 1.5.
    const Vec x = 1.5 * fibonacci_directions(5)[2];
    CHECK(std::abs(du_kappa1(fixtures::spheres(), x) - 0.592593) <= 1e-5);
}

TEST_CASE("convex ring: the interior minimum does not undercut the boundary") {
    const CmyReport r = scan_min_du_kappa1(fixtures::ellipse_in_circle(), 21, 128);
    CHECK(r.margin >= -1e-4);
    CHECK(r.property_holds);
    CHECK(r.interior_level > 0.0);
    CHECK(r.interior_level < 1.0);
    CHECK(r.per_level.size() == 21);
    CHECK(r.global_min <= r.boundary_min + 1e-12);
}

TEST_CASE("per-level minima are well ordered") {
    const CmyReport r = scan_min_du_kappa1(fixtures::perturbed(), 11, 96);
    for (std::size_t i = 1; i < r.per_level.size(); ++i) CHECK(r.per_level[i].level > r.per_level[i - 1].level);
    CHECK(r.per_level.front().level == doctest::Approx(0.001));
    CHECK(r.per_level.back().level == doctest::Approx(0.999));
    for (const auto& l : r.per_level) {
        CHECK(std::abs(fixtures::perturbed().eval(l.point) - l.level) <= 1e-8);
        CHECK(std::abs(du_kappa1(fixtures::perturbed(), l.point) - l.value) <= 1e-9);
    }
}

TEST_CASE("scan is independent of the worker count") {
    CmyScanOptions o;
    o.workers = 4;
    const CmyReport a = scan_min_du_kappa1(fixtures::perturbed(), 9, 64);
    const CmyReport b = scan_min_du_kappa1(fixtures::perturbed(), 9, 64, o);
    CHECK(a.boundary_min == b.boundary_min);
    CHECK(a.interior_min == b.interior_min);
}

TEST_CASE("non-convex ring needs exploratory mode") {
    CHECK_THROWS_AS(scan_min_du_kappa1(flower(), 11, 64), HypothesisViolation);
    CmyScanOptions o;
    o.exploratory = true;
    const CmyReport r = scan_min_du_kappa1(flower(), 11, 128, o);
    CHECK(r.exploratory);
    CHECK_FALSE(r.convex_hypothesis);
    // Negative boundary curvature makes the outer boundary value negative.
    CHECK(r.outer_extrapolated < 0.0);
}

TEST_CASE("scan preconditions") {
    CHECK_THROWS_AS(scan_min_du_kappa1(fixtures::annulus(), 1, 64), std::invalid_argument);
    CHECK_THROWS_AS(scan_min_du_kappa1(fixtures::annulus(), 5, 4), std::invalid_argument);
}

TEST_CASE("localized two-point check on the annulus") {
    ExtremizeOptions o;
    o.levels = 10;
    o.pairs_per_level = 80;
    const QReport r = localized_mp_check(fixtures::annulus(), 1.0 / (4.0 * std::log(2.0)), 0.05, o);
    CHECK_FALSE(r.strict_interior_extremum);
    CHECK(r.argument.separation <= 0.05 + 1e-12);

    // On a level circle of radius rho, Q = a d^2 - a d^4 / (6 eps^2) - d^2 / (rho^2 log 2) for chord d.
    const double a = 1.0 / (4.0 * std::log(2.0));
    const PsiSpec psi = PsiSpec::quadratic_capped(a, 0.05);
    const double rho = 1.8;
    const Vec x = fixtures::polar(rho, 0.0);
    const Vec y = fixtures::polar(rho, 2.0 * std::asin(0.025 / rho));
    const double d2 = (y - x).squaredNorm();
    const double expected = a * d2 - a * d2 * d2 / (6.0 * 0.0025) - d2 / (rho * rho * std::log(2.0));
    CHECK(std::abs(eval_Q(fixtures::annulus(), psi, x, y) - expected) <= 1e-9);
    CHECK(expected < 0.0);
}

TEST_CASE("localized check preconditions") {
    CHECK_THROWS_AS(localized_mp_check(fixtures::annulus(), 0.0, 0.05), ConfigError);
    CHECK_THROWS_AS(localized_mp_check(fixtures::annulus(), 0.3, -0.05), ConfigError);
    ExtremizeOptions o;
    o.cap = 0.1;
    CHECK_THROWS_WITH_AS(localized_mp_check(fixtures::annulus(), 0.3, 0.05, o),
                         "psi inadmissible on requested range: separation cap exceeds eps", ConfigError);
}
