#include "ringlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "ringlab/errors.hpp"
#include "lstsq.hpp"

namespace ringlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double kernel(int dim, const Vec& d) {
    const double s = d.squaredNorm();
    return dim == 2 ? 0.5 * std::log(s) : 1.0 / std::sqrt(s);
}

std::vector<Vec> profile_directions(int dim, int count, double phase) {
    if (dim == 2) {
        std::vector<Vec> dirs;
        dirs.reserve(static_cast<std::size_t>(count));
        for (int j = 0; j < count; ++j) {
            const double phi = kTwoPi * (j + phase) / count;
            dirs.push_back(vec2(std::cos(phi), std::sin(phi)));
        }
        return dirs;
    }
    return fibonacci_directions(count, phase * 2.399963229728653);
}

} // namespace

SolverParams SolverParams::defaults(int dimension) {
    SolverParams p;
    if (dimension == 3) {
        p.charges_per_boundary = 500;
        p.collocation_per_boundary = 2000;
        p.offset_factor = 0.5;
        p.residual_tolerance = 1e-7;
    }
    return p;
}

HarmonicField::HarmonicField(ConvexRing ring, std::vector<Vec> charges, std::vector<double> weights,
                             double constant, FitReport report)
    : ring_(std::move(ring)), charges_(std::move(charges)), weights_(std::move(weights)),
      constant_(constant), report_(report) {
    if (charges_.size() != weights_.size()) {
        throw GeometryError("charge and weight counts differ");
    }
    for (const auto& q : charges_) {
        if (q.size() != ring_.dimension()) throw GeometryError("charge has wrong dimension");
        const Region r = classify_point(ring_, q, 0.0);
        if (r != Region::in_inner_hole && r != Region::outside_outer) {
            throw GeometryError("charge point lies in the closed ring");
        }
    }
}

double HarmonicField::eval(const Vec& x) const { return jet(x, 0).value; }

Vec HarmonicField::eval_grad(const Vec& x) const { return jet(x, 1).grad; }

Mat HarmonicField::eval_hessian(const Vec& x) const { return jet(x, 2).hess; }

Tensor3 HarmonicField::eval_third(const Vec& x) const { return jet(x, 3).third; }

Jet HarmonicField::jet(const Vec& x, int order) const {
    const int n = dimension();
    if (x.size() != n) throw std::invalid_argument("evaluation point has wrong dimension");
    Jet out;
    out.value = constant_;
    if (order >= 1) out.grad = Vec::Zero(n);
    if (order >= 2) out.hess = Mat::Zero(n, n);
    if (order >= 3) {
        for (int k = 0; k < n; ++k) out.third.slice[k] = Mat::Zero(n, n);
    }
    const double tiny = 1e-24 * (1.0 + ring_.diameter() * ring_.diameter());

    // Per-kernel coefficients of the radial expansions:
    //   grad = g1 d, hess = h0 I + h2 d d^T,
    //   third = t1 (delta_ij d_k + perms) + t3 d_i d_j d_k.
    for (std::size_t j = 0; j < charges_.size(); ++j) {
        const Vec d = x - charges_[j];
        const double s = d.squaredNorm();
        if (s <= tiny) throw SingularityError("evaluation point coincides with a charge");
        const double w = weights_[j];
        double g1, h0, h2, t1, t3;
        if (n == 2) {
            out.value += w * 0.5 * std::log(s);
            if (order < 1) continue;
            const double inv = 1.0 / s;
            g1 = inv;
            h0 = inv;
            h2 = -2.0 * inv * inv;
            t1 = -2.0 * inv * inv;
            t3 = 8.0 * inv * inv * inv;
        } else {
            const double inv_r = 1.0 / std::sqrt(s);
            out.value += w * inv_r;
            if (order < 1) continue;
            const double inv_r2 = inv_r * inv_r;
            const double inv_r3 = inv_r2 * inv_r;
            const double inv_r5 = inv_r3 * inv_r2;
            g1 = -inv_r3;
            h0 = -inv_r3;
            h2 = 3.0 * inv_r5;
            t1 = 3.0 * inv_r5;
            t3 = -15.0 * inv_r5 * inv_r2;
        }
        out.grad.noalias() += (w * g1) * d;
        if (order < 2) continue;
        out.hess.diagonal().array() += w * h0;
        out.hess.noalias() += (w * h2) * (d * d.transpose());
        if (order < 3) continue;
        for (int k = 0; k < n; ++k) {
            Mat& sl = out.third.slice[k];
            sl.diagonal().array() += w * t1 * d(k);
            sl.col(k) += (w * t1) * d;
            sl.row(k) += (w * t1) * d.transpose();
            sl.noalias() += (w * t3 * d(k)) * (d * d.transpose());
        }
    }
    return out;
}

HarmonicField HarmonicField::rotated(const Mat& rotation) const {
    const int n = dimension();
    auto rotate_boundary = [&](const StarBoundary& b) {
        Vec c = rotation * b.center();
        if (n == 2) {
            const double beta = std::atan2(rotation(1, 0), rotation(0, 0));
            std::vector<FourierMode> modes;
            for (const auto& m : b.modes()) {
                const double ck = std::cos(m.index * beta);
                const double sk = std::sin(m.index * beta);
                modes.push_back({m.index, m.cos_coeff * ck - m.sin_coeff * sk,
                                 m.cos_coeff * sk + m.sin_coeff * ck});
            }
            return StarBoundary(2, c, b.base_radius(), modes);
        }
        if (!b.modes().empty()) throw GeometryError("only spherical 3D profiles can be rotated");
        return StarBoundary(3, c, b.base_radius());
    };
    ConvexRing ring(rotate_boundary(ring_.outer()), rotate_boundary(ring_.inner()), ring_.margin());
    std::vector<Vec> charges;
    charges.reserve(charges_.size());
    for (const auto& q : charges_) charges.push_back(rotation * q);
    return HarmonicField(std::move(ring), std::move(charges), weights_, constant_, report_);
}

HarmonicField solve_ring(const ConvexRing& ring, const SolverParams& params) {
    const int dim = ring.dimension();
    if (params.charges_per_boundary < 4) throw ConfigError("too few charges per boundary");
    if (params.collocation_per_boundary < 2 * params.charges_per_boundary) {
        throw ConfigError("need at least twice as many collocation points as charges");
    }
    if (!(params.offset_factor > 0.0 && params.offset_factor < 1.0)) {
        throw ConfigError("charge offset factor must lie in (0, 1)");
    }
    if (!(params.svd_cutoff > 0.0) || !(params.residual_tolerance > 0.0)) {
        throw ConfigError("solver tolerances must be positive");
    }
    if (!is_starshaped(ring, ring.reference_point())) {
        throw GeometryError("ring is not star-shaped about its reference point");
    }

    const int nq = params.charges_per_boundary;
    std::vector<Vec> charges;
    charges.reserve(static_cast<std::size_t>(2 * nq));
    for (const auto& d : profile_directions(dim, nq, 0.0)) {
        charges.push_back(ring.inner().center() + (1.0 - params.offset_factor) * ring.inner().radius(d) * d);
    }
    for (const auto& d : profile_directions(dim, nq, 0.0)) {
        charges.push_back(ring.outer().center() + (1.0 + params.offset_factor) * ring.outer().radius(d) * d);
    }
    // Charges must keep clear of the closed ring.
    const double clearance = 1e-6 * ring.diameter();
    for (std::size_t j = 0; j < charges.size(); ++j) {
        const bool inner = j < static_cast<std::size_t>(nq);
        const Region r = classify_point(ring, charges[j], clearance);
        if ((inner && r != Region::in_inner_hole) || (!inner && r != Region::outside_outer)) {
            throw GeometryError("charge placement collides with the closed ring; reduce the offset factor");
        }
    }

    const int nc = params.collocation_per_boundary;
    std::vector<Vec> points;
    std::vector<double> targets;
    auto add_boundary_points = [&](const StarBoundary& b, double level, int count, double phase) {
        for (const auto& d : profile_directions(dim, count, phase)) {
            points.push_back(b.point(d));
            targets.push_back(level);
        }
    };
    add_boundary_points(ring.outer(), 0.0, nc, 0.0);
    add_boundary_points(ring.inner(), 1.0, nc, 0.0);

    const Eigen::Index rows = static_cast<Eigen::Index>(points.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(charges.size()) + 1;
    Eigen::MatrixXd a(rows, cols);
    Eigen::VectorXd b(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j + 1 < cols; ++j) a(i, j) = kernel(dim, points[i] - charges[j]);
        a(i, cols - 1) = 1.0;
        b(i) = targets[i];
    }

    const LstsqResult sol = lstsq_truncated_svd(a, b, params.svd_cutoff);

    std::vector<double> weights(sol.x.data(), sol.x.data() + cols - 1);
    FitReport report;
    report.rank = sol.rank;
    report.unknowns = static_cast<int>(cols);
    report.largest_singular_value = sol.largest_singular_value;
    report.smallest_kept_singular_value = sol.smallest_kept_singular_value;

    HarmonicField field(ring, std::move(charges), std::move(weights), sol.x(cols - 1), report);

    double coll = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) coll = std::max(coll, std::abs(field.eval(points[i]) - targets[i]));

    // Validation grid offset from the collocation grid.
    const int nv = dim == 2 ? 2 * nc : (3 * nc) / 2;
    double worst = 0.0;
    int count = 0;
    for (const auto& d : profile_directions(dim, nv, 0.5)) {
        worst = std::max(worst, std::abs(field.eval(ring.outer().point(d))));
        worst = std::max(worst, std::abs(field.eval(ring.inner().point(d)) - 1.0));
        count += 2;
    }
    report.collocation_residual = coll;
    report.max_residual = worst;
    report.validation_points = count;

    if (!(worst <= params.residual_tolerance)) {
        std::ostringstream msg;
        msg << "boundary residual " << worst << " exceeds tolerance " << params.residual_tolerance;
        throw SolverAccuracyError(msg.str(), worst);
    }
    return HarmonicField(field.ring(), field.charges(), field.weights(), field.constant(), report);
}

GradientCheck check_gradient_hypothesis(const HarmonicField& field, int grid, double threshold) {
    const ConvexRing& ring = field.ring();
    GradientCheck out;
    out.min_grad_norm = std::numeric_limits<double>::infinity();
    out.min_value = std::numeric_limits<double>::infinity();
    out.max_value = -std::numeric_limits<double>::infinity();
    auto visit = [&](const Vec& x) {
        if (classify_point(ring, x, 1e-9) != Region::in_ring_interior) return;
        const Jet j = field.jet(x, 1);
        out.min_grad_norm = std::min(out.min_grad_norm, j.grad.norm());
        out.min_value = std::min(out.min_value, j.value);
        out.max_value = std::max(out.max_value, j.value);
        ++out.samples;
    };
    if (ring.dimension() == 2) {
        const Vec c = ring.outer().center();
        const double r = ring.outer().max_radius_bound();
        for (int i = 0; i < grid; ++i) {
            for (int j = 0; j < grid; ++j) {
                visit(vec2(c(0) - r + 2.0 * r * (i + 0.5) / grid, c(1) - r + 2.0 * r * (j + 0.5) / grid));
            }
        }
    } else {
        for (const auto& d : fibonacci_directions(grid)) {
            const double t0 = ring.inner_exit(d);
            const double t1 = ring.outer_exit(d);
            for (int k = 0; k < grid; ++k) {
                visit(ring.reference_point() + (t0 + (t1 - t0) * (k + 0.5) / grid) * d);
            }
        }
    }
    out.gradient_ok = out.samples > 0 && out.min_grad_norm > threshold;
    out.maximum_principle_ok = out.samples > 0 && out.min_value > 0.0 && out.max_value < 1.0;
    return out;
}

} // namespace ringlab
