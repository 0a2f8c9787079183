#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "fixtures.hpp"
#include "ringlab/errors.hpp"
#include "ringlab/level_sets.hpp"
#include "ringlab/two_point.hpp"

using namespace ringlab;
using fixtures::polar;

TEST_CASE("psi family closed forms") {
    const PsiSpec z = PsiSpec::zero();
    CHECK(z.value(3.0) == 0.0);
    CHECK(z.admissibility(3.0) == 0.0);

    const PsiSpec l = PsiSpec::linear(2.0);
    CHECK(l.value(3.0) == 6.0);
    CHECK(l.d1(3.0) == 2.0);
    CHECK(l.d2(3.0) == 0.0);

    const PsiSpec q = PsiSpec::quadratic_capped(1.5, 0.2);
    const double t = 0.01;
    CHECK(q.value(t) == doctest::Approx(1.5 * t - 1.5 * t * t / (6 * 0.04)));
    CHECK(q.d1(t) == doctest::Approx(1.5 - 1.5 * t / (3 * 0.04)));
    CHECK(q.d2(t) == doctest::Approx(-1.5 / (3 * 0.04)));
    CHECK(q.validity_limit() == doctest::Approx(0.04));

    CHECK_THROWS_AS(PsiSpec::linear(-1.0), ConfigError);
    CHECK_THROWS_AS(PsiSpec::quadratic_capped(0.0, 0.1), ConfigError);
    CHECK_THROWS_AS(PsiSpec::quadratic_capped(1.0, -0.1), ConfigError);
}

TEST_CASE("psi admissibility") {
    const Admissibility lin = check_psi_admissible(PsiSpec::linear(1.0), 10.0, 1001);
    CHECK(lin.admissible);
    CHECK(lin.worst_margin == doctest::Approx(1.0));

    const PsiSpec q = PsiSpec::quadratic_capped(1.0, 0.1);
    const double e2 = 0.01;
    CHECK(check_psi_admissible(q, e2, 1001).admissible);
    for (int i = 0; i <= 1000; ++i) {
        const double t = e2 * i / 1000.0;
        CHECK(std::abs(q.admissibility(t) - (1.0 - t / e2)) <= 1e-14);
    }
    const Admissibility over = check_psi_admissible(q, 2 * e2, 1001);
    CHECK_FALSE(over.admissible);
    CHECK(over.worst_margin == doctest::Approx(-1.0).epsilon(1e-12));

    CHECK(check_psi_admissible(PsiSpec::zero(), 5.0, 100).admissible);
    CHECK_THROWS_AS(check_psi_admissible(q, 0.0, 1001), std::invalid_argument);
    CHECK_THROWS_AS(check_psi_admissible(q, 1.0, 99), std::invalid_argument);
}

TEST_CASE("Q on the annulus matches the closed form") {
    const HarmonicField& f = fixtures::annulus();
    const double r = 1.5;
    const double k = 1.0 / (r * r * std::log(2.0));
    for (double dphi : {0.05, 0.4, 1.7, 3.0}) {
        const Vec x = polar(r, 0.3);
        const Vec y = polar(r, 0.3 + dphi);
        const double d2 = (y - x).squaredNorm();
        CHECK(std::abs(eval_Q(f, PsiSpec::zero(), x, y) + d2 * k) <= 1e-6 * d2 + 1e-12);
        const double a = 0.5;
        CHECK(std::abs(eval_Q(f, PsiSpec::linear(a), x, y) - d2 * (a - k)) <= 1e-6 * d2 + 1e-12);
    }
    // Sign flip at r^2 = 1 / (a log 2).
    const double a = 1.0 / (1.69 * std::log(2.0));
    for (double rr : {1.2, 1.3, 1.45}) {
        const double q = eval_Q(f, PsiSpec::linear(a), polar(rr, 0.0), polar(rr, 1.0));
        if (rr < 1.29) CHECK(q < 0.0);
        if (rr > 1.31) CHECK(q > 0.0);
    }
}

TEST_CASE("Q symmetry, diagonal and constraint") {
    const HarmonicField& f = fixtures::perturbed();
    const Vec x = level_point_on_ray(f, 0.4, vec2(1.0, 0.0)).point;
    const Vec y = level_point_on_ray(f, 0.4, vec2(-0.6, 0.8)).point;
    for (const PsiSpec& psi : {PsiSpec::zero(), PsiSpec::linear(0.3), PsiSpec::quadratic_capped(0.3, 4.0)}) {
        CHECK(std::abs(eval_Q(f, psi, x, y) - eval_Q(f, psi, y, x)) <= 1e-14);
        CHECK(eval_Q(f, psi, x, x) == 0.0);
    }
    CHECK_THROWS_AS(eval_Q(f, PsiSpec::zero(), x, level_point_on_ray(f, 0.5, vec2(0.0, 1.0)).point), ConstraintError);
}

TEST_CASE("midpoint functional") {
    const HarmonicField& f = fixtures::annulus();
    const Vec x = vec2(1.5, 0.0);
    REQUIRE(eval_rr_midpoint(f, x, x).has_value());
    CHECK(std::abs(*eval_rr_midpoint(f, x, x)) <= 1e-15);
    CHECK_FALSE(eval_rr_midpoint(f, vec2(1.2, 0.0), vec2(-1.2, 0.0)).has_value());
    const Vec y = polar(1.5, 0.2);
    const auto m = eval_rr_midpoint(f, x, y);
    REQUIRE(m.has_value());
    const double oracle =
        0.5 * (fixtures::annulus_u(x) + fixtures::annulus_u(y)) - fixtures::annulus_u(0.5 * (x + y));
    CHECK(std::abs(*m - oracle) <= 1e-8);
}

TEST_CASE("sampling the pair manifold") {
    const HarmonicField& f = fixtures::annulus();
    SigmaSamplingOptions o;
    o.seed = 4;
    const auto pairs = sample_sigma(f, 10, 100, o);
    CHECK(pairs.size() == 1000);
    std::map<double, int> per_level;
    for (const auto& p : pairs) {
        CHECK(std::abs(f.eval(p.x) - f.eval(p.y)) <= 1e-9);
        CHECK(std::abs(f.eval(p.x) - p.level) <= 1e-9);
        CHECK(p.level > 0.0);
        CHECK(p.level < 1.0);
        ++per_level[p.level];
    }
    CHECK(per_level.size() == 10);
    for (const auto& [level, n] : per_level) CHECK(n == 100);

    o.separation_cap = 0.1;
    for (const auto& p : sample_sigma(f, 5, 50, o)) CHECK(p.separation <= 0.1);

    CHECK_THROWS_AS(sample_sigma(f, 0, 10, {}), std::invalid_argument);
}

TEST_CASE("sampling is deterministic for a seed") {
    SigmaSamplingOptions o;
    o.seed = 17;
    const auto a = sample_sigma(fixtures::perturbed(), 3, 20, o);
    const auto b = sample_sigma(fixtures::perturbed(), 3, 20, o);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i].x - b[i].x).norm() == 0.0);
}

TEST_CASE("annulus with psi = 0: maximum on the diagonal") {
    const QReport r = extremize_Q(fixtures::annulus(), PsiSpec::zero(), Extremum::max);
    CHECK(r.classification == Location::diagonal);
    CHECK(std::abs(r.value) <= 1e-9);
    CHECK_FALSE(r.strict_interior_extremum);
    const auto& interior = r.best_by_location[static_cast<std::size_t>(Location::interior)];
    if (interior) CHECK(interior->value <= 1e-9);
    CHECK(r.coarse_best <= r.refined_best + 1e-12);
    CHECK(r.starts > 0);
}

TEST_CASE("annulus with the critical linear psi: maximum at the boundary") {
    const double a = 1.0 / (4.0 * std::log(2.0));
    const QReport r = extremize_Q(fixtures::annulus(), PsiSpec::linear(a), Extremum::max);
    CHECK(r.classification == Location::boundary);
    CHECK(std::abs(r.value) <= 1e-7);
    CHECK(r.argument.level <= 0.01);
    CHECK_FALSE(r.strict_interior_extremum);
}

TEST_CASE("convex ring, psi = 0: maximum is boundary or diagonal; no strict interior minimum") {
    ExtremizeOptions o;
    o.seed = 3;
    const QReport mx = extremize_Q(fixtures::ellipse_in_circle(), PsiSpec::zero(), Extremum::max, o);
    CHECK((mx.classification == Location::boundary || mx.classification == Location::diagonal));
    CHECK_FALSE(mx.strict_interior_extremum);
    CHECK(mx.coarse_best <= mx.refined_best + 1e-12);

    const QReport mn = extremize_Q(fixtures::ellipse_in_circle(), PsiSpec::zero(), Extremum::min, o);
    CHECK_FALSE(mn.strict_interior_extremum);
    CHECK(mn.coarse_best >= mn.refined_best - 1e-12);
}

TEST_CASE("separation cap is respected") {
    ExtremizeOptions o;
    o.cap = 0.05;
    o.levels = 8;
    o.pairs_per_level = 60;
    const QReport r = extremize_Q(fixtures::perturbed(), PsiSpec::quadratic_capped(0.2, 0.05), Extremum::max, o);
    CHECK(r.argument.separation <= 0.05 + 1e-12);
    for (const auto& c : r.best_by_location) {
        if (c) CHECK(c->pair.separation <= 0.05 + 1e-12);
    }
}

TEST_CASE("extremize preconditions") {
    CHECK_THROWS_WITH_AS(extremize_Q(fixtures::annulus(), PsiSpec::quadratic_capped(1.0, 0.05), Extremum::max),
                         "psi inadmissible on requested range", ConfigError);
    ExtremizeOptions o;
    o.cap = 0.1;
    CHECK_THROWS_AS(extremize_Q(fixtures::annulus(), PsiSpec::quadratic_capped(1.0, 0.05), Extremum::max, o),
                    ConfigError);
    CHECK_THROWS_AS(extremize_Q(fixtures::spheres(), PsiSpec::zero(), Extremum::max), std::invalid_argument);
}

TEST_CASE("local convexity witness on the annulus") {
    const HarmonicField& f = fixtures::annulus();
    const Vec x = vec2(1.5, 0.0);
    const double dk = 1.0 / (2.25 * std::log(2.0));

    const ConvexityWitness w = local_convexity_witness(f, x, 0.5, 1e-2);
    CHECK(w.holds);
    CHECK(w.two_point_verdict);
    CHECK(w.curvature_verdict);
    CHECK(std::abs(w.fitted_coefficient + dk) <= 0.02 * dk);

    const ConvexityWitness v = local_convexity_witness(f, x, 0.7, 1e-2);
    CHECK(v.holds);
    CHECK_FALSE(v.two_point_verdict);
    CHECK_FALSE(v.curvature_verdict);

    CHECK_THROWS_AS(local_convexity_witness(f, x, 0.0, 1e-2), std::invalid_argument);
    CHECK_THROWS_AS(local_convexity_witness(f, x, 0.5, -1e-2), std::invalid_argument);
}

TEST_CASE("enum names") {
    CHECK(to_string(Location::separation_cap) == "separation_cap");
    CHECK(to_string(Extremum::min) == "min");
    CHECK(to_string(PsiSpec::Kind::quadratic_capped) == "quadratic_capped");
}
