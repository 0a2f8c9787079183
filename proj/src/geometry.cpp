#include "ringlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ringlab/errors.hpp"
#include "ringlab/linalg.hpp"

namespace ringlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec unit_circle(double phi) { return vec2(std::cos(phi), std::sin(phi)); }

} // namespace

// ---------------------------------------------------------------------------
// StarBoundary

StarBoundary::StarBoundary(int dimension, Vec center, double base_radius,
                           std::vector<FourierMode> modes)
    : dimension_(dimension), center_(std::move(center)), base_radius_(base_radius),
      modes_(std::move(modes)) {
    if (dimension_ != 2 && dimension_ != 3) {
        throw GeometryError("boundary dimension must be 2 or 3");
    }
    if (center_.size() != dimension_) {
        throw GeometryError("boundary center has wrong dimension");
    }
    if (!(base_radius_ > 0.0) || !std::isfinite(base_radius_)) {
        throw GeometryError("base radius must be positive and finite");
    }
    for (const auto& m : modes_) {
        if (m.index < 0) throw GeometryError("mode index must be non-negative");
        if (!std::isfinite(m.cos_coeff) || !std::isfinite(m.sin_coeff)) {
            throw GeometryError("mode coefficients must be finite");
        }
    }
    for (const auto& d : certification_directions(dimension_)) {
        const double r = radius(d);
        if (!(r > 0.0)) {
            throw GeometryError("profile degenerate: radius " + std::to_string(r) +
                                " is not positive in some direction");
        }
    }
}

StarBoundary StarBoundary::circle(double radius, Vec center) {
    return StarBoundary(2, std::move(center), radius);
}

StarBoundary StarBoundary::sphere(double radius, Vec center) {
    return StarBoundary(3, std::move(center), radius);
}

double StarBoundary::radius(const Vec& d) const {
    const std::complex<double> z(d(0), d(1));
    double r = base_radius_;
    for (const auto& m : modes_) {
        const std::complex<double> p = m.index == 0 ? std::complex<double>(1.0) : std::pow(z, m.index);
        r += m.cos_coeff * p.real() + m.sin_coeff * p.imag();
    }
    return r;
}

double StarBoundary::radius_at(double phi) const {
    double r = base_radius_;
    for (const auto& m : modes_) {
        r += m.cos_coeff * std::cos(m.index * phi) + m.sin_coeff * std::sin(m.index * phi);
    }
    return r;
}

double StarBoundary::radius_d1(double phi) const {
    double r = 0.0;
    for (const auto& m : modes_) {
        const double k = m.index;
        r += k * (-m.cos_coeff * std::sin(k * phi) + m.sin_coeff * std::cos(k * phi));
    }
    return r;
}

double StarBoundary::radius_d2(double phi) const {
    double r = 0.0;
    for (const auto& m : modes_) {
        const double k = m.index;
        r -= k * k * (m.cos_coeff * std::cos(k * phi) + m.sin_coeff * std::sin(k * phi));
    }
    return r;
}

double StarBoundary::radial_offset(const Vec& x) const {
    const Vec y = x - center_;
    const double rho = y.norm();
    if (rho <= 1e-300) {
        Vec e = Vec::Zero(dimension_);
        e(0) = 1.0;
        return -radius(e);
    }
    return rho - radius(y / rho);
}

double StarBoundary::max_radius_bound() const {
    double r = base_radius_;
    for (const auto& m : modes_) r += std::abs(m.cos_coeff) + std::abs(m.sin_coeff);
    return r;
}

double StarBoundary::ray_exit(const Vec& origin, const Vec& dir) const {
    const double off = (origin - center_).norm();
    if (off <= 1e-14 * (1.0 + base_radius_)) {
        return radius(dir);
    }
    double lo = 0.0;
    double hi = off + max_radius_bound() + 1.0;
    if (radial_offset(origin) >= 0.0) {
        throw GeometryError("ray origin is not inside the boundary");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (radial_offset(origin + mid * dir) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void StarBoundary::implicit_derivatives(const Vec& x, Vec& grad, Mat& hess) const {
    using C = std::complex<double>;
    const int n = dimension_;
    const Vec y = x - center_;
    const double rho = y.norm();
    if (rho <= 1e-300) throw GeometryError("implicit derivatives undefined at the profile center");

    const Mat eye = Mat::Identity(n, n);
    grad = y / rho;
    hess = (eye - y * y.transpose() / (rho * rho)) / rho;

    // e = d(y1 + i y2)/dy
    Eigen::Matrix<C, Eigen::Dynamic, 1, 0, 3, 1> e = Eigen::Matrix<C, Eigen::Dynamic, 1, 0, 3, 1>::Zero(n);
    e(0) = C(1.0, 0.0);
    e(1) = C(0.0, 1.0);
    const C w(y(0), y(1));

    for (const auto& m : modes_) {
        const int k = m.index;
        if (k == 0) continue;
        const double q = std::pow(rho, -k);
        const Vec dq = -k * std::pow(rho, -k - 2) * y;
        const Mat hq = -k * std::pow(rho, -k - 2) * eye +
                       k * (k + 2) * std::pow(rho, -k - 4) * (y * y.transpose());
        const C p = std::pow(w, k);
        const C p1 = static_cast<double>(k) * std::pow(w, k - 1);
        const C p2 = k >= 2 ? static_cast<double>(k * (k - 1)) * std::pow(w, k - 2) : C(0.0);

        for (int i = 0; i < n; ++i) {
            const C dpi = p1 * e(i);
            const C dhi = q * dpi + p * dq(i);
            grad(i) -= m.cos_coeff * dhi.real() + m.sin_coeff * dhi.imag();
            for (int j = 0; j < n; ++j) {
                const C dpj = p1 * e(j);
                const C hpij = p2 * e(i) * e(j);
                const C hh = q * hpij + dpi * dq(j) + dq(i) * dpj + p * hq(i, j);
                hess(i, j) -= m.cos_coeff * hh.real() + m.sin_coeff * hh.imag();
            }
        }
    }
}

// ---------------------------------------------------------------------------
// ConvexRing

ConvexRing::ConvexRing(StarBoundary outer, StarBoundary inner, double margin)
    : outer_(std::move(outer)), inner_(std::move(inner)), margin_(margin) {
    if (outer_.dimension() != inner_.dimension()) {
        throw GeometryError("inner and outer boundaries have different dimensions");
    }
    if (!(margin_ > 0.0)) throw GeometryError("containment margin must be positive");
    if (outer_.radial_offset(inner_.center()) > -margin_) {
        throw GeometryError("inner reference point is not inside the outer domain");
    }
    for (const auto& d : certification_directions(dimension())) {
        const Vec p = inner_.point(d);
        if (outer_.radial_offset(p) > -margin_) {
            throw GeometryError("inner boundary is not contained in the outer domain with the required margin");
        }
    }
}

double ConvexRing::inner_exit(const Vec& dir) const { return inner_.ray_exit(reference_point(), dir); }

double ConvexRing::outer_exit(const Vec& dir) const { return outer_.ray_exit(reference_point(), dir); }

double ConvexRing::diameter() const {
    return 2.0 * outer_.max_radius_bound();
}

// ---------------------------------------------------------------------------
// Operations

std::string_view to_string(Region r) {
    switch (r) {
    case Region::in_ring_interior: return "in_ring_interior";
    case Region::in_inner_hole: return "in_inner_hole";
    case Region::outside_outer: return "outside_outer";
    case Region::on_outer_boundary: return "on_outer_boundary";
    case Region::on_inner_boundary: return "on_inner_boundary";
    }
    return "unknown";
}

Region classify_point(const ConvexRing& ring, const Vec& x, double tol) {
    const double off_outer = ring.outer().radial_offset(x);
    if (std::abs(off_outer) <= tol) return Region::on_outer_boundary;
    if (off_outer > tol) return Region::outside_outer;
    const double off_inner = ring.inner().radial_offset(x);
    if (std::abs(off_inner) <= tol) return Region::on_inner_boundary;
    if (off_inner < -tol) return Region::in_inner_hole;
    return Region::in_ring_interior;
}

namespace {

double polar_curvature(double r, double r1, double r2) {
    return (r * r + 2.0 * r1 * r1 - r * r2) / std::pow(r * r + r1 * r1, 1.5);
}

double implicit_min_curvature(const StarBoundary& b, const Vec& x, Vec* normal) {
    Vec g;
    Mat h;
    b.implicit_derivatives(x, g, h);
    const double gn = g.norm();
    const Vec n = g / gn;
    const auto e = tangent_basis(n);
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 2, 2> t = e.transpose() * h * e;
    if (normal) *normal = n;
    return small_sym_eigen(t).lo / gn;
}

} // namespace

std::vector<BoundarySample> boundary_sample(const StarBoundary& b, int m) {
    if (m < 8) throw std::invalid_argument("boundary_sample needs at least 8 points");
    std::vector<BoundarySample> out;
    out.reserve(static_cast<std::size_t>(m));
    if (b.dimension() == 2) {
        for (int j = 0; j < m; ++j) {
            const double phi = kTwoPi * j / m;
            const double r = b.radius_at(phi);
            if (!(r > 0.0)) throw GeometryError("profile degenerate at sampled angle");
            const double r1 = b.radius_d1(phi);
            const double r2 = b.radius_d2(phi);
            const Vec d = unit_circle(phi);
            const Vec t = r1 * d + r * vec2(-d(1), d(0));
            Vec n = vec2(t(1), -t(0));
            n.normalize();
            out.push_back({b.center() + r * d, n, polar_curvature(r, r1, r2)});
        }
        return out;
    }
    for (const auto& d : fibonacci_directions(m)) {
        const double r = b.radius(d);
        if (!(r > 0.0)) throw GeometryError("profile degenerate at sampled direction");
        const Vec p = b.center() + r * d;
        Vec n;
        const double k = implicit_min_curvature(b, p, &n);
        out.push_back({p, n, k});
    }
    return out;
}

ConvexityCertificate is_strictly_convex(const StarBoundary& b) {
    double kmin = std::numeric_limits<double>::infinity();
    if (b.dimension() == 2) {
        constexpr int kSamples = 4096;
        for (int j = 0; j < kSamples; ++j) {
            const double phi = kTwoPi * j / kSamples;
            kmin = std::min(kmin, polar_curvature(b.radius_at(phi), b.radius_d1(phi), b.radius_d2(phi)));
        }
    } else {
        for (const auto& d : certification_directions(3)) {
            kmin = std::min(kmin, implicit_min_curvature(b, b.point(d), nullptr));
        }
    }
    return {kmin > 0.0, kmin};
}

namespace {

int count_crossings(const StarBoundary& b, const Vec& p, const Vec& d, int samples) {
    const double reach = (p - b.center()).norm() + b.max_radius_bound() + 1.0;
    int crossings = 0;
    bool inside = b.radial_offset(p) < 0.0;
    for (int i = 1; i <= samples; ++i) {
        const double t = reach * i / samples;
        const bool now = b.radial_offset(p + t * d) < 0.0;
        if (now != inside) ++crossings;
        inside = now;
    }
    return crossings;
}

} // namespace

bool is_starshaped(const ConvexRing& ring, const Vec& p) {
    if (classify_point(ring, p) != Region::in_inner_hole) {
        throw GeometryError("star-shapedness is tested about a point of the inner domain");
    }
    const int samples = ring.dimension() == 2 ? 1024 : 512;
    for (const auto& d : certification_directions(ring.dimension())) {
        if (count_crossings(ring.inner(), p, d, samples) != 1) return false;
        if (count_crossings(ring.outer(), p, d, samples) != 1) return false;
    }
    return true;
}

std::vector<Vec> certification_directions(int dimension) {
    std::vector<Vec> dirs;
    if (dimension == 2) {
        constexpr int kSamples = 4096;
        dirs.reserve(kSamples);
        for (int j = 0; j < kSamples; ++j) dirs.push_back(unit_circle(kTwoPi * j / kSamples));
        return dirs;
    }
    constexpr int kPolar = 64;
    constexpr int kAzimuth = 128;
    dirs.reserve(kPolar * kAzimuth);
    for (int i = 0; i < kPolar; ++i) {
        const double theta = std::numbers::pi * (i + 0.5) / kPolar;
        for (int j = 0; j < kAzimuth; ++j) {
            const double phi = kTwoPi * j / kAzimuth;
            dirs.push_back(vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)));
        }
    }
    return dirs;
}

std::vector<Vec> fibonacci_directions(int count, double twist) {
    std::vector<Vec> dirs;
    dirs.reserve(static_cast<std::size_t>(count));
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / count;
        const double rxy = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i + twist;
        dirs.push_back(vec3(rxy * std::cos(phi), rxy * std::sin(phi), z));
    }
    return dirs;
}

} // namespace ringlab
