#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "ringlab/errors.hpp"
#include "ringlab/field.hpp"

using namespace ringlab;

TEST_CASE("annulus potential matches the closed form") {
    const HarmonicField& f = fixtures::annulus();
    CHECK(f.fit_report().max_residual <= 1e-8);
    CHECK(f.eval(vec2(1.5, 0.0)) == doctest::Approx(std::log(2.0 / 1.5) / std::log(2.0)).epsilon(1e-8));
    const Vec g = f.eval_grad(vec2(1.5, 0.0));
    CHECK(std::abs(g(0) + 1.0 / (1.5 * std::log(2.0))) <= 1e-7);
    CHECK(std::abs(g(1)) <= 1e-7);
    CHECK(std::abs(g(0) + 0.961797) <= 1e-6);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const Vec x = fixtures::random_annulus_point(rng);
        CHECK(std::abs(f.eval(x) - fixtures::annulus_u(x)) <= 1e-7);
        CHECK((f.eval_grad(x) - fixtures::annulus_grad(x)).norm() <= 1e-6);
        CHECK((f.eval_hessian(x) - fixtures::annulus_hessian(x)).cwiseAbs().maxCoeff() <= 1e-5);
    }
}

TEST_CASE("concentric spheres potential matches the closed form") {
    const HarmonicField& f = fixtures::spheres();
    CHECK(f.fit_report().max_residual <= 1e-7);
    CHECK(f.eval(vec3(1.5, 0.0, 0.0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-7));
    CHECK(f.eval(vec3(0.0, 0.9, 1.2)) == doctest::Approx(1.0 / 3.0).epsilon(1e-7));
    // u = 2/r - 1, |Du| = 2/r^2.
    const Vec g = f.eval_grad(vec3(0.0, 0.0, 1.5));
    CHECK(std::abs(g(2) + 2.0 / 2.25) <= 1e-6);
}

TEST_CASE("derivatives agree with central differences") {
    const HarmonicField& f = fixtures::perturbed();
    std::mt19937_64 rng(5);
    const double h = 1e-5;
    for (int i = 0; i < 30; ++i) {
        const Vec x = fixtures::random_ring_point(f.ring(), rng);
        const Jet j = f.jet(x, 3);
        for (int k = 0; k < 2; ++k) {
            Vec e = Vec::Zero(2);
            e(k) = h;
            const double du = (f.eval(x + e) - f.eval(x - e)) / (2 * h);
            CHECK(std::abs(du - j.grad(k)) <= 1e-6);
            const Vec dg = (f.eval_grad(x + e) - f.eval_grad(x - e)) / (2 * h);
            CHECK((dg - j.hess.col(k)).cwiseAbs().maxCoeff() <= 1e-6);
            const Mat dh = (f.eval_hessian(x + e) - f.eval_hessian(x - e)) / (2 * h);
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) CHECK(std::abs(dh(a, b) - j.third(a, b, k)) <= 1e-4);
            }
        }
        CHECK(std::abs(j.value - f.eval(x)) <= 1e-15);
        CHECK((j.hess - f.eval_hessian(x)).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("third derivatives in 3D agree with differences of the Hessian") {
    const HarmonicField& f = fixtures::spheres();
    const Vec x = vec3(0.7, -0.9, 0.8);
    const Tensor3 t = f.eval_third(x);
    const double h = 1e-5;
    for (int k = 0; k < 3; ++k) {
        Vec e = Vec::Zero(3);
        e(k) = h;
        const Mat dh = (f.eval_hessian(x + e) - f.eval_hessian(x - e)) / (2 * h);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) CHECK(std::abs(dh(a, b) - t(a, b, k)) <= 1e-4);
        }
    }
}

TEST_CASE("harmonicity of the evaluated Hessian") {
    std::mt19937_64 rng(9);
    for (const HarmonicField* f : {&fixtures::annulus(), &fixtures::perturbed(), &fixtures::ellipse_in_circle()}) {
        for (int i = 0; i < 200; ++i) {
            const Mat h = f->eval_hessian(fixtures::random_ring_point(f->ring(), rng));
            CHECK(std::abs(h.trace()) <= 1e-10 * (1.0 + h.cwiseAbs().maxCoeff()));
        }
    }
    for (const auto& d : fibonacci_directions(100)) {
        const Mat h = fixtures::spheres().eval_hessian(1.4 * d);
        CHECK(std::abs(h.trace()) <= 1e-10 * (1.0 + h.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("gradient hypothesis and maximum principle") {
    for (const HarmonicField* f : {&fixtures::annulus(), &fixtures::perturbed(), &fixtures::ellipse_in_circle()}) {
        const GradientCheck c = check_gradient_hypothesis(*f);
        CHECK(c.gradient_ok);
        CHECK(c.maximum_principle_ok);
        CHECK(c.min_grad_norm > 1e-4);
        CHECK(c.min_value > 0.0);
        CHECK(c.max_value < 1.0);
    }
    CHECK(check_gradient_hypothesis(fixtures::spheres()).gradient_ok);
}

TEST_CASE("ellipse-in-circle field is self-certifying") {
    const HarmonicField& f = fixtures::ellipse_in_circle();
    CHECK(f.fit_report().max_residual <= 1e-8);
    CHECK(f.fit_report().validation_points > 0);
    CHECK(f.fit_report().rank <= f.fit_report().unknowns);
}

TEST_CASE("solver errors") {
    const ConvexRing ring = fixtures::annulus_ring();
    SolverParams p = SolverParams::defaults(2);
    p.collocation_per_boundary = p.charges_per_boundary;
    CHECK_THROWS_AS(solve_ring(ring, p), ConfigError);

    p = SolverParams::defaults(2);
    p.offset_factor = 1.2;
    CHECK_THROWS_AS(solve_ring(ring, p), ConfigError);

    // Too few charges to reach the residual target.
    p = SolverParams::defaults(2);
    p.charges_per_boundary = 6;
    p.collocation_per_boundary = 24;
    const ConvexRing bumpy(StarBoundary(2, Vec::Zero(2), 2.0, {{5, 0.2, 0.0}}), StarBoundary::circle(1.0));
    try {
        solve_ring(bumpy, p);
        FAIL("expected a solver accuracy error");
    } catch (const SolverAccuracyError& e) {
        CHECK(e.achieved_residual() > p.residual_tolerance);
    }
}

TEST_CASE("evaluation at a charge is a singularity") {
    const HarmonicField& f = fixtures::annulus();
    CHECK_THROWS_AS(f.eval(f.charges().front()), SingularityError);
    CHECK_THROWS_AS(HarmonicField(fixtures::annulus_ring(), {vec2(1.5, 0.0)}, {1.0}, 0.0), GeometryError);
}

TEST_CASE("rotated field") {
    const HarmonicField& f = fixtures::perturbed();
    const double a = 0.7;
    Mat r(2, 2);
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    const HarmonicField g = f.rotated(r);
    const Vec x = vec2(1.2, 0.4);
    CHECK(std::abs(g.eval(r * x) - f.eval(x)) <= 1e-13);
    CHECK((g.eval_grad(r * x) - r * f.eval_grad(x)).norm() <= 1e-12);
    CHECK(std::abs(g.ring().outer().radius_at(0.3 + a) - f.ring().outer().radius_at(0.3)) <= 1e-14);
}
