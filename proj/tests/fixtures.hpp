#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ringlab/field.hpp"
#include "ringlab/geometry.hpp"

namespace fixtures {

using ringlab::ConvexRing;
using ringlab::FourierMode;
using ringlab::HarmonicField;
using ringlab::StarBoundary;
using ringlab::Vec;

inline ConvexRing annulus_ring() { return ConvexRing(StarBoundary::circle(2.0), StarBoundary::circle(1.0)); }

inline ConvexRing spheres_ring() { return ConvexRing(StarBoundary::sphere(2.0), StarBoundary::sphere(1.0)); }

inline ConvexRing ellipse_in_circle_ring() {
    return ConvexRing(StarBoundary::circle(2.0), StarBoundary(2, Vec::Zero(2), 0.8, {{2, 0.12, 0.0}}));
}

inline ConvexRing perturbed_ring() {
    return ConvexRing(StarBoundary(2, Vec::Zero(2), 2.0, {{2, 0.15, 0.0}, {3, 0.0, 0.04}}),
                      StarBoundary(2, ringlab::vec2(0.15, -0.1), 0.8, {{2, 0.0, 0.06}}));
}

inline const HarmonicField& annulus() {
    static const HarmonicField f = ringlab::solve_ring(annulus_ring());
    return f;
}

inline const HarmonicField& spheres() {
    static const HarmonicField f = ringlab::solve_ring(spheres_ring());
    return f;
}

inline const HarmonicField& ellipse_in_circle() {
    static const HarmonicField f = ringlab::solve_ring(ellipse_in_circle_ring());
    return f;
}

inline const HarmonicField& perturbed() {
    static const HarmonicField f = ringlab::solve_ring(perturbed_ring());
    return f;
}

// Closed-form annulus potential for r in [1, 2].
inline double annulus_u(const Vec& x) { return std::log(2.0 / x.norm()) / std::log(2.0); }

inline Vec annulus_grad(const Vec& x) { return -x / (x.squaredNorm() * std::log(2.0)); }

inline ringlab::Mat annulus_hessian(const Vec& x) {
    const double r2 = x.squaredNorm();
    ringlab::Mat h = -ringlab::Mat::Identity(2, 2) / r2 + 2.0 * x * x.transpose() / (r2 * r2);
    return h / std::log(2.0);
}

inline Vec polar(double r, double phi) { return ringlab::vec2(r * std::cos(phi), r * std::sin(phi)); }

// Uniform random point of the annulus area.
inline Vec random_annulus_point(std::mt19937_64& rng, double r_lo = 1.0, double r_hi = 2.0) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double r = std::sqrt(r_lo * r_lo + (r_hi * r_hi - r_lo * r_lo) * u01(rng));
    return polar(r, 2.0 * std::numbers::pi * u01(rng));
}

// Random point strictly inside a planar ring, by rejection along rays from the reference point.
inline Vec random_ring_point(const ConvexRing& ring, std::mt19937_64& rng, double inset = 0.05) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double phi = 2.0 * std::numbers::pi * u01(rng);
    const Vec d = ringlab::vec2(std::cos(phi), std::sin(phi));
    const double t0 = ring.inner_exit(d);
    const double t1 = ring.outer_exit(d);
    const double t = t0 + (t1 - t0) * (inset + (1.0 - 2.0 * inset) * u01(rng));
    return ring.reference_point() + t * d;
}

} // namespace fixtures
