#include "ringlab/level_sets.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "ringlab/errors.hpp"
#include "ringlab/linalg.hpp"

namespace ringlab {

namespace {

constexpr double kMinGrad = 1e-6;

// Arc length of a short chord between two points of a curve with mean curvature k.
double corrected_arc(double chord, double k) { return chord * (1.0 + k * k * chord * chord / 24.0); }

} // namespace

RayLevelPoint level_point_on_ray(const HarmonicField& field, double level, const Vec& dir,
                                 double t_guess) {
    const ConvexRing& ring = field.ring();
    const Vec& ref = ring.reference_point();
    const double t_in = ring.inner_exit(dir);
    const double t_out = ring.outer_exit(dir);
    const double pad = 0.02 * (t_out - t_in);
    // u decreases along the ray: u > level means t is too small.
    double lo = t_in - pad;
    double hi = t_out + pad;
    double t = (t_guess > lo && t_guess < hi) ? t_guess : t_in + (1.0 - level) * (t_out - t_in);

    bool done = false;
    for (int it = 0; it < 100 && !done; ++it) {
        const Jet j = field.jet(ref + t * dir, 1);
        const double r = j.value - level;
        if (r > 0.0) {
            lo = t;
        } else {
            hi = t;
        }
        if (std::abs(r) <= 1e-15 || hi - lo <= 1e-15 * hi) break;
        const double slope = j.grad.dot(dir);
        double next = slope < 0.0 ? t - r / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        done = std::abs(next - t) <= 1e-16 * t;
        t = next;
    }
    RayLevelPoint out;
    out.point = ref + t * dir;
    out.t = t;
    out.jet = field.jet(out.point, 2);
    if (std::abs(out.jet.value - level) > 1e-10) {
        throw TracingError("level is not bracketed along the ray");
    }
    return out;
}

Vec project_to_level(const HarmonicField& field, const Vec& x, double level, double tol) {
    Vec p = x;
    for (int it = 0; it < 50; ++it) {
        const Jet j = field.jet(p, 1);
        const double r = j.value - level;
        if (std::abs(r) <= tol) return p;
        const double g2 = j.grad.squaredNorm();
        if (g2 < kMinGrad * kMinGrad) throw DegeneracyError("gradient vanishes during level projection");
        p -= (r / g2) * j.grad;
    }
    const double r = field.eval(p) - level;
    if (std::abs(r) <= tol) return p;
    throw TracingError("Newton corrector did not converge in 50 steps");
}

double planar_level_curvature(const HarmonicField& field, const Vec& x) {
    if (field.dimension() != 2) throw std::invalid_argument("planar curvature is 2D only");
    const Jet j = field.jet(x, 2);
    const double ux = j.grad(0), uy = j.grad(1);
    const double g = std::hypot(ux, uy);
    if (g < kMinGrad) throw DegeneracyError("gradient below threshold");
    const double num = uy * uy * j.hess(0, 0) - 2.0 * ux * uy * j.hess(0, 1) + ux * ux * j.hess(1, 1);
    return -num / (g * g * g);
}

LevelCurve trace_level(const HarmonicField& field, double level, double spacing) {
    if (field.dimension() != 2) throw std::invalid_argument("level tracing is 2D only");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must lie in (0, 1)");
    if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be positive");

    const Vec ref = field.ring().reference_point();
    const Vec start = project_to_level(field, level_point_on_ray(field, level, vec2(1.0, 0.0)).point, level);

    // Predictor along the tangent, Newton corrector along Du.
    std::vector<Vec> raw{start};
    double winding = 0.0;
    const double perimeter_bound = 2.0 * std::numbers::pi * field.ring().outer().max_radius_bound() * 4.0;
    const std::size_t max_steps = static_cast<std::size_t>(perimeter_bound / spacing) + 1000;
    Vec p = start;
    for (std::size_t step = 0;; ++step) {
        if (step > max_steps) throw TracingError("level curve did not close");
        const Vec g = field.eval_grad(p);
        const double gn = g.norm();
        if (gn < kMinGrad) throw DegeneracyError("gradient below threshold while tracing");
        const Vec tangent = vec2(g(1), -g(0)) / gn;
        const Vec q = project_to_level(field, p + spacing * tangent, level);
        const Vec a = p - ref;
        const Vec b = q - ref;
        winding += std::atan2(a(0) * b(1) - a(1) * b(0), a.dot(b));
        if (winding > std::numbers::pi && (q - start).norm() < spacing) break;
        raw.push_back(q);
        p = q;
    }

    // Uniform resampling in arc length, each sample projected back onto the level.
    const std::size_t m = raw.size();
    std::vector<double> kappa(m);
    for (std::size_t i = 0; i < m; ++i) kappa[i] = planar_level_curvature(field, raw[i]);
    std::vector<double> cum(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t k = (i + 1) % m;
        cum[i + 1] = cum[i] + corrected_arc((raw[k] - raw[i]).norm(), 0.5 * (kappa[i] + kappa[k]));
    }
    const double raw_length = cum[m];
    const std::size_t n = std::max<std::size_t>(16, static_cast<std::size_t>(std::lround(raw_length / spacing)));

    LevelCurve curve;
    curve.level = level;
    curve.points.reserve(n);
    std::size_t seg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = raw_length * static_cast<double>(i) / static_cast<double>(n);
        while (seg + 1 < m && cum[seg + 1] <= s) ++seg;
        const std::size_t k = (seg + 1) % m;
        const double frac = (s - cum[seg]) / (cum[seg + 1] - cum[seg]);
        curve.points.push_back(project_to_level(field, (1.0 - frac) * raw[seg] + frac * raw[k], level));
    }

    curve.arc.assign(n, 0.0);
    std::vector<double> kn(n);
    for (std::size_t i = 0; i < n; ++i) kn[i] = planar_level_curvature(field, curve.points[i]);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = (i + 1) % n;
        const double ds = corrected_arc((curve.points[k] - curve.points[i]).norm(), 0.5 * (kn[i] + kn[k]));
        if (k != 0) curve.arc[k] = total + ds;
        total += ds;
    }
    curve.length = total;
    return curve;
}

Vec LevelCurve::point_at(const HarmonicField& field, double s) const {
    if (points.empty()) throw std::logic_error("empty level curve");
    double u = std::fmod(s, length);
    if (u < 0.0) u += length;
    const auto it = std::upper_bound(arc.begin(), arc.end(), u);
    const std::size_t i = static_cast<std::size_t>(std::distance(arc.begin(), it)) - 1;
    const std::size_t k = (i + 1) % points.size();
    const double end = k == 0 ? length : arc[k];
    const double frac = (u - arc[i]) / (end - arc[i]);
    return project_to_level(field, (1.0 - frac) * points[i] + frac * points[k], level);
}

CurvatureFrame curvature_frame(const HarmonicField& field, const Vec& x) {
    const Jet j = field.jet(x, 2);
    const double gn = j.grad.norm();
    if (gn < kMinGrad) throw DegeneracyError("gradient below threshold");
    CurvatureFrame out;
    out.grad_norm = gn;
    out.normal = j.grad / gn;
    const auto e = tangent_basis(out.normal);
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 2, 2> shape = -(e.transpose() * j.hess * e) / gn;
    const SmallEigen eig = small_sym_eigen(shape);
    const auto dim = field.dimension();
    out.curvatures = Vec(dim - 1);
    out.curvatures(0) = eig.lo;
    if (dim == 3) out.curvatures(1) = eig.hi;
    out.min_direction = e * eig.lo_vector.head(dim - 1);
    out.min_direction.normalize();
    return out;
}

double smallest_principal_curvature(const HarmonicField& field, const Vec& x) {
    return curvature_frame(field, x).curvatures(0);
}

double du_kappa1(const HarmonicField& field, const Vec& x) {
    const CurvatureFrame f = curvature_frame(field, x);
    return f.grad_norm * f.curvatures(0);
}

void write_level_curve_csv(std::ostream& os, const HarmonicField& field, const LevelCurve& curve) {
    const int dim = field.dimension();
    os << "s,x1,x2";
    if (dim == 3) os << ",x3";
    os << ",u,kappa1,grad_norm,du_kappa1\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const Vec& p = curve.points[i];
        const CurvatureFrame f = curvature_frame(field, p);
        os << curve.arc[i];
        for (int k = 0; k < dim; ++k) os << ',' << p(k);
        os << ',' << field.eval(p) << ',' << f.curvatures(0) << ',' << f.grad_norm << ','
           << f.grad_norm * f.curvatures(0) << '\n';
    }
}

} // namespace ringlab
