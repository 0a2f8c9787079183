#include "ringlab/rosay_rudin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "ringlab/errors.hpp"

namespace ringlab {

Mat RotationEven::block() const {
    Mat l = Mat::Zero(dimension, dimension);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    for (int k = 0; k < dimension; ++k) l(k, k) = c;
    for (int a = 0; a + 1 < dimension; a += 2) {
        l(a, a + 1) = -s;
        l(a + 1, a) = s;
    }
    return l;
}

RotationEven build_rotation(const Vec& du_x0, const Vec& du_y0) {
    const int n = static_cast<int>(du_x0.size());
    if (n % 2 != 0 || du_y0.size() != n) {
        throw std::invalid_argument("rotation needs two vectors of the same even dimension");
    }
    const double nx = du_x0.norm();
    const double ny = du_y0.norm();
    if (!(nx > 0.0) || !(ny > 0.0)) throw DegeneracyError("rotation needs nonzero gradients");

    const Vec a = du_x0 / nx;
    const Vec b = du_y0 / ny;
    RotationEven rot;
    rot.dimension = n;
    rot.scale = nx / ny;
    // Positively oriented adapted basis: e1 = a, e2 = a turned by +90 degrees.
    rot.basis = Mat(n, n);
    rot.basis.col(0) = a;
    rot.basis.col(1) = vec2(-a(1), a(0));
    double theta = std::atan2(b.dot(rot.basis.col(1)), b.dot(rot.basis.col(0)));
    if (theta < 0.0) theta += 2.0 * std::numbers::pi;
    if (theta >= 2.0 * std::numbers::pi) theta = 0.0;
    rot.angle = theta;
    rot.matrix = rot.basis * rot.block() * rot.basis.transpose();
    return rot;
}

double rotated_hessian_trace(const HarmonicField& field, const RotationEven& rot, const Vec& y) {
    const Mat h = field.eval_hessian(y);
    return (rot.matrix.array() * h.array()).sum();
}

double distance_to_boundary(const ConvexRing& ring, const Vec& x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& d : certification_directions(ring.dimension())) {
        best = std::min(best, (ring.outer().point(d) - x).norm());
        best = std::min(best, (ring.inner().point(d) - x).norm());
    }
    return best;
}

RRMapContext::RRMapContext(const HarmonicField& field, Vec x0, Vec y0)
    : field_(&field), x0_(std::move(x0)), y0_(std::move(y0)) {
    if (field.dimension() % 2 != 0) throw std::invalid_argument("the level-preserving map needs even dimension");
    for (const Vec* p : {&x0_, &y0_}) {
        if (classify_point(field.ring(), *p, 1e-9) != Region::in_ring_interior) {
            throw std::invalid_argument("base points must lie in the ring interior");
        }
    }
    const Jet jx = field.jet(x0_, 1);
    const Jet jy = field.jet(y0_, 1);
    if (std::abs(jx.value - jy.value) > 1e-9) throw ConstraintError("base points are not on a common level set");
    rotation_ = build_rotation(jx.grad, jy.grad);
    grad_norm_y0_ = jy.grad.norm();
    xi_ = jy.grad / grad_norm_y0_;
    safe_radius_ = 0.25 * std::min(distance_to_boundary(field.ring(), x0_), distance_to_boundary(field.ring(), y0_));
}

double RRMapContext::f(const Vec& w) const {
    const Vec z = y0_ + rotation_.scale * (rotation_.matrix * w);
    return (field_->eval(x0_ + w) - field_->eval(z)) / grad_norm_y0_;
}

RRMapResult rr_map(const RRMapContext& ctx, const Vec& w) {
    const HarmonicField& field = ctx.field();
    const Vec x = ctx.x0() + w;
    if (classify_point(field.ring(), x, 1e-9) != Region::in_ring_interior) {
        throw MapFailure("x0 + w leaves the ring");
    }
    const double ux = field.eval(x);
    const Vec z = ctx.y0() + ctx.rotation().scale * (ctx.rotation().matrix * w);
    RRMapResult out;
    out.f = (ux - field.eval(z)) / ctx.grad_norm_y0();
    const Vec base = z + out.f * ctx.xi();

    auto residual_at = [&](double alpha, Jet& j) {
        const Vec p = base + alpha * ctx.xi();
        if (classify_point(field.ring(), p, 1e-9) != Region::in_ring_interior) {
            throw MapFailure("Newton iterate left the ring");
        }
        j = field.jet(p, 1);
        return j.value - ux;
    };

    double alpha = 0.0;
    Jet j;
    double g = residual_at(alpha, j);
    int it = 0;
    for (; it < 50 && std::abs(g) > 0.0; ++it) {
        const double slope = j.grad.dot(ctx.xi());
        if (!(std::abs(slope) > 0.0)) throw MapFailure("vanishing derivative in the alpha equation");
        double step = -g / slope;
        Jet jn;
        double gn = residual_at(alpha + step, jn);
        int damp = 0;
        while (std::abs(gn) > std::abs(g) && damp < 30) {
            step *= 0.5;
            gn = residual_at(alpha + step, jn);
            ++damp;
        }
        if (std::abs(gn) >= std::abs(g)) break; // no further progress at machine precision
        alpha += step;
        g = gn;
        j = jn;
        if (std::abs(step) <= 1e-17 * (1.0 + std::abs(alpha))) break;
    }
    out.alpha = alpha;
    out.y = base + alpha * ctx.xi();
    out.iterations = it;
    out.residual = std::abs(field.eval(out.y) - ux);
    if (out.residual > 1e-12) throw MapFailure("level identity residual above 1e-12");
    return out;
}

OrderFit alpha_order_fit(const RRMapContext& ctx, const Vec& direction, const std::vector<double>& radii,
                         double noise_floor) {
    if (radii.size() < 5) throw std::invalid_argument("order fit needs at least 5 radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || radii[i] > ctx.safe_radius()) {
            throw std::invalid_argument("radii must be positive and within the safe radius");
        }
        if (i > 0 && !(radii[i] < radii[i - 1])) throw std::invalid_argument("radii must be decreasing");
    }
    const Vec dir = direction.normalized();
    std::vector<double> lx, ly;
    for (double r : radii) {
        const double alpha = rr_map(ctx, r * dir).alpha;
        if (std::abs(alpha) > noise_floor) {
            lx.push_back(std::log(r));
            ly.push_back(std::log(std::abs(alpha)));
        }
    }
    OrderFit out;
    out.points_used = static_cast<int>(lx.size());
    if (lx.size() < 2) {
        out.vanishes = true;
        return out;
    }
    const double n = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    out.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return out;
}

double f_harmonicity_check(const RRMapContext& ctx, const std::vector<Vec>& grid, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    const int n = ctx.field().dimension();
    double worst = 0.0;
    for (const auto& w : grid) {
        const double f0 = ctx.f(w);
        double lap = 0.0;
        for (int i = 0; i < n; ++i) {
            Vec e = Vec::Zero(n);
            e(i) = step;
            lap += ctx.f(w + e) + ctx.f(w - e) - 2.0 * f0;
        }
        worst = std::max(worst, std::abs(lap) / (step * step));
    }
    return worst;
}

} // namespace ringlab
