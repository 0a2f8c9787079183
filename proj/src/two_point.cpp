#include "ringlab/two_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/QR>

#include "ringlab/errors.hpp"
#include "ringlab/parallel.hpp"

namespace ringlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLevelTolerance = 1e-9;

double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0.0 ? a + kTwoPi : a;
}

} // namespace

// ---------------------------------------------------------------------------
// psi family

PsiSpec PsiSpec::linear(double a) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("linear psi needs a >= 0");
    return PsiSpec(Kind::linear, a, 0.0);
}

PsiSpec PsiSpec::quadratic_capped(double a, double eps) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("capped psi needs a > 0");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("capped psi needs eps > 0");
    return PsiSpec(Kind::quadratic_capped, a, eps);
}

double PsiSpec::value(double t) const {
    switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::linear: return a_ * t;
    case Kind::quadratic_capped: return a_ * t - a_ * t * t / (6.0 * eps_ * eps_);
    }
    return 0.0;
}

double PsiSpec::d1(double t) const {
    switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::linear: return a_;
    case Kind::quadratic_capped: return a_ - a_ * t / (3.0 * eps_ * eps_);
    }
    return 0.0;
}

double PsiSpec::d2(double) const {
    return kind_ == Kind::quadratic_capped ? -a_ / (3.0 * eps_ * eps_) : 0.0;
}

double PsiSpec::admissibility(double t) const { return d1(t) - 2.0 * std::abs(d2(t)) * t; }

double PsiSpec::validity_limit() const {
    return kind_ == Kind::quadratic_capped ? eps_ * eps_ : std::numeric_limits<double>::infinity();
}

std::string_view to_string(PsiSpec::Kind k) {
    switch (k) {
    case PsiSpec::Kind::zero: return "zero";
    case PsiSpec::Kind::linear: return "linear";
    case PsiSpec::Kind::quadratic_capped: return "quadratic_capped";
    }
    return "unknown";
}

Admissibility check_psi_admissible(const PsiSpec& psi, double t_max, int samples) {
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
    if (samples < 100) throw std::invalid_argument("need at least 100 samples");
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double t = t_max * i / (samples - 1);
        worst = std::min(worst, psi.admissibility(t));
    }
    return {worst >= -1e-14, worst};
}

// ---------------------------------------------------------------------------
// Two-point quantities

namespace {

double q_from_jets(const PsiSpec& psi, const Vec& x, const Vec& gx, const Vec& y, const Vec& gy) {
    const Vec delta = y - x;
    return (gy - gx).dot(delta) + psi.value(delta.squaredNorm());
}

} // namespace

double eval_Q(const HarmonicField& field, const PsiSpec& psi, const Vec& x, const Vec& y) {
    const Jet jx = field.jet(x, 1);
    const Jet jy = field.jet(y, 1);
    if (std::abs(jx.value - jy.value) > kLevelTolerance) {
        throw ConstraintError("points are not on a common level set");
    }
    return q_from_jets(psi, x, jx.grad, y, jy.grad);
}

std::optional<double> eval_rr_midpoint(const HarmonicField& field, const Vec& x, const Vec& y) {
    const Vec mid = 0.5 * (x + y);
    const Region r = classify_point(field.ring(), mid, 1e-9);
    if (r == Region::in_inner_hole || r == Region::outside_outer) return std::nullopt;
    return 0.5 * (field.eval(x) + field.eval(y)) - field.eval(mid);
}

std::vector<SigmaPair> sample_sigma(const HarmonicField& field, int levels, int pairs_per_level,
                                    const SigmaSamplingOptions& options) {
    if (levels < 1 || pairs_per_level < 1) throw std::invalid_argument("counts must be positive");
    if (!(options.margin > 0.0 && options.margin < 0.5)) throw std::invalid_argument("margin must lie in (0, 0.5)");
    if (options.separation_cap && !(*options.separation_cap > 0.0)) {
        throw std::invalid_argument("separation cap must be positive");
    }
    const double spacing = options.spacing > 0.0 ? options.spacing : 0.01 * field.ring().outer().base_radius();
    std::vector<SigmaPair> out;
    out.reserve(static_cast<std::size_t>(levels) * static_cast<std::size_t>(pairs_per_level));
    for (int i = 0; i < levels; ++i) {
        const double c = options.margin + (1.0 - 2.0 * options.margin) * (i + 0.5) / levels;
        const LevelCurve curve = trace_level(field, c, spacing);
        std::mt19937_64 rng(options.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(i));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double len = curve.length;
        int emitted = 0;
        for (long attempt = 0; emitted < pairs_per_level; ++attempt) {
            if (attempt > 1000L * pairs_per_level) throw TracingError("could not place pairs under the separation cap");
            const double s = len * (emitted + unit(rng)) / pairs_per_level;
            double t;
            if (options.separation_cap) {
                // Arc length bounds chord length, so a window of +-cap keeps most draws.
                const double w = std::min(*options.separation_cap, 0.5 * len);
                t = s + w * (2.0 * unit(rng) - 1.0);
            } else {
                t = len * unit(rng);
            }
            const Vec x = curve.point_at(field, s);
            const Vec y = curve.point_at(field, t);
            const double sep = (y - x).norm();
            if (options.separation_cap && sep > *options.separation_cap) continue;
            out.push_back({x, y, c, sep});
            ++emitted;
        }
    }
    return out;
}

std::string_view to_string(Extremum e) { return e == Extremum::max ? "max" : "min"; }

std::string_view to_string(Location l) {
    switch (l) {
    case Location::interior: return "interior";
    case Location::boundary: return "boundary";
    case Location::separation_cap: return "separation_cap";
    case Location::diagonal: return "diagonal";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Constrained search on Sigma in the coordinates (c, m, d):
//   x = X(c, m - d), y = X(c, m + d), X(c, phi) = level-c point on the ray at angle phi.
// The constraint u(x) = u(y) holds by construction.

namespace {

struct Eval {
    double objective = -std::numeric_limits<double>::infinity(); // sign * Q
    double q = 0.0;
    Eigen::Vector3d grad = Eigen::Vector3d::Zero();
    Vec x, y;
    double tx = -1.0, ty = -1.0;
    bool feasible = false;
};

class SigmaObjective {
public:
    SigmaObjective(const HarmonicField& field, const PsiSpec& psi, double sign, std::optional<double> cap)
        : field_(field), psi_(psi), sign_(sign), cap_(cap) {}

    Eval operator()(const Eigen::Vector3d& p, double tx_guess, double ty_guess) const {
        Eval e;
        const double c = p(0);
        const double phx = p(1) - p(2);
        const double phy = p(1) + p(2);
        const Vec dx = vec2(std::cos(phx), std::sin(phx));
        const Vec dy = vec2(std::cos(phy), std::sin(phy));
        RayLevelPoint rx, ry;
        try {
            rx = level_point_on_ray(field_, c, dx, tx_guess);
            ry = level_point_on_ray(field_, c, dy, ty_guess);
        } catch (const TracingError&) {
            return e;
        }
        e.x = rx.point;
        e.y = ry.point;
        e.tx = rx.t;
        e.ty = ry.t;
        const Vec delta = e.y - e.x;
        const double r2 = delta.squaredNorm();
        if (cap_ && std::sqrt(r2) > *cap_) return e;
        e.feasible = true;

        const Vec& gx = rx.jet.grad;
        const Vec& gy = ry.jet.grad;
        e.q = (gy - gx).dot(delta) + psi_.value(r2);
        e.objective = sign_ * e.q;

        const Vec common = (gy - gx) + 2.0 * psi_.d1(r2) * delta;
        const Vec grad_y = ry.jet.hess * delta + common;
        const Vec grad_x = -(rx.jet.hess * delta) - common;

        auto partials = [](const RayLevelPoint& r, const Vec& d, Vec& dc, Vec& dphi) {
            const Vec dperp = vec2(-d(1), d(0));
            const double radial = r.jet.grad.dot(d);
            const double dt_dc = 1.0 / radial;
            const double dt_dphi = -r.t * r.jet.grad.dot(dperp) / radial;
            dc = dt_dc * d;
            dphi = dt_dphi * d + r.t * dperp;
        };
        Vec xc, xphi, yc, yphi;
        partials(rx, dx, xc, xphi);
        partials(ry, dy, yc, yphi);
        e.grad(0) = grad_x.dot(xc) + grad_y.dot(yc);
        e.grad(1) = grad_x.dot(xphi) + grad_y.dot(yphi);
        e.grad(2) = -grad_x.dot(xphi) + grad_y.dot(yphi);
        e.grad *= sign_;
        return e;
    }

private:
    const HarmonicField& field_;
    const PsiSpec& psi_;
    double sign_;
    std::optional<double> cap_;
};

struct Bounds {
    Eigen::Vector3d lo;
    Eigen::Vector3d hi;
    std::array<bool, 3> fixed{false, false, false};
};

Eigen::Vector3d clamp(const Eigen::Vector3d& p, const Bounds& b) {
    Eigen::Vector3d q = p;
    for (int i = 0; i < 3; ++i) q(i) = std::clamp(q(i), b.lo(i), b.hi(i));
    return q;
}

struct RefineResult {
    Eval best;
    Eigen::Vector3d params;
    int iterations = 0;
    bool converged = false;
};

// Projected quasi-Newton ascent with bound constraints and backtracking.
RefineResult refine(const SigmaObjective& objective, Eigen::Vector3d p, const Bounds& bounds, int max_iterations) {
    p = clamp(p, bounds);
    Eval cur = objective(p, -1.0, -1.0);
    RefineResult out;
    if (!cur.feasible) {
        out.best = cur;
        out.params = p;
        return out;
    }
    Eigen::Matrix3d hinv = Eigen::Matrix3d::Identity();
    int stalled = 0;
    for (int it = 0; it < max_iterations; ++it) {
        out.iterations = it + 1;
        std::array<bool, 3> free{};
        Eigen::Vector3d g = Eigen::Vector3d::Zero();
        for (int i = 0; i < 3; ++i) {
            const bool at_lo = p(i) <= bounds.lo(i) && cur.grad(i) < 0.0;
            const bool at_hi = p(i) >= bounds.hi(i) && cur.grad(i) > 0.0;
            free[i] = !bounds.fixed[i] && !at_lo && !at_hi;
            if (free[i]) g(i) = cur.grad(i);
        }
        if (g.norm() <= 1e-11) {
            out.converged = true;
            break;
        }
        Eigen::Vector3d dir = hinv * g;
        for (int i = 0; i < 3; ++i) {
            if (!free[i]) dir(i) = 0.0;
        }
        if (!(dir.dot(g) > 0.0)) {
            hinv.setIdentity();
            dir = g;
        }
        // Keep angular steps below a quarter turn.
        const double scale = dir.cwiseAbs().maxCoeff();
        double alpha = scale > 0.5 ? 0.5 / scale : 1.0;

        Eval next;
        Eigen::Vector3d trial;
        bool accepted = false;
        for (int ls = 0; ls < 50; ++ls) {
            trial = clamp(p + alpha * dir, bounds);
            next = objective(trial, cur.tx, cur.ty);
            if (next.feasible && next.objective >= cur.objective + 1e-4 * g.dot(trial - p)) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            if (!hinv.isIdentity()) {
                hinv.setIdentity();
                continue;
            }
            out.converged = true;
            break;
        }
        const Eigen::Vector3d s = trial - p;
        const Eigen::Vector3d yv = cur.grad - next.grad; // gradient change of -objective
        const double sy = s.dot(yv);
        if (sy > 1e-14 * s.norm() * yv.norm()) {
            const double rho = 1.0 / sy;
            const Eigen::Matrix3d i3 = Eigen::Matrix3d::Identity();
            hinv = (i3 - rho * s * yv.transpose()) * hinv * (i3 - rho * yv * s.transpose()) + rho * s * s.transpose();
        }
        const double gain = next.objective - cur.objective;
        p = trial;
        cur = next;
        if (gain <= 1e-15 * (1.0 + std::abs(cur.objective)) && s.norm() <= 1e-12) {
            if (++stalled >= 3) {
                out.converged = true;
                break;
            }
        } else {
            stalled = 0;
        }
    }
    out.best = cur;
    out.params = p;
    return out;
}

Eigen::Vector3d pair_to_params(const Vec& ref, const Vec& x, const Vec& y, double level) {
    const double phx = std::atan2(x(1) - ref(1), x(0) - ref(0));
    const double phy = std::atan2(y(1) - ref(1), y(0) - ref(0));
    const double d = 0.5 * wrap_angle(phy - phx);
    return Eigen::Vector3d(level, phx + d, d);
}

Location classify(const SigmaPair& pair, const ExtremizeOptions& o) {
    if (pair.separation < o.diagonal_resolution) return Location::diagonal;
    if (pair.level <= o.boundary_margin || pair.level >= 1.0 - o.boundary_margin) return Location::boundary;
    if (o.cap && pair.separation >= *o.cap * (1.0 - o.cap_margin_fraction)) return Location::separation_cap;
    return Location::interior;
}

} // namespace

QReport extremize_Q(const HarmonicField& field, const PsiSpec& psi, Extremum kind, const ExtremizeOptions& o) {
    if (field.dimension() != 2) throw std::invalid_argument("two-point search is implemented for planar rings");
    if (o.levels < 1 || o.pairs_per_level < 1 || o.refine_top < 0 || o.boundary_refine_top < 0) {
        throw ConfigError("search counts must be positive");
    }
    if (o.cap && !(*o.cap > 0.0)) throw ConfigError("separation cap must be positive");
    const double t_range = o.cap ? (*o.cap) * (*o.cap) : std::pow(field.ring().diameter(), 2);
    if (!check_psi_admissible(psi, t_range, 1000).admissible) {
        throw ConfigError("psi inadmissible on requested range");
    }

    const double sign = kind == Extremum::max ? 1.0 : -1.0;
    const Vec ref = field.ring().reference_point();
    const SigmaObjective objective(field, psi, sign, o.cap);

    // Coarse stage: interior levels from traced curves.
    SigmaSamplingOptions so;
    so.separation_cap = o.cap;
    so.margin = o.boundary_margin;
    so.spacing = o.spacing;
    so.seed = o.seed;
    const std::vector<SigmaPair> coarse = sample_sigma(field, o.levels, o.pairs_per_level, so);

    std::vector<double> coarse_obj(coarse.size());
    parallel_for(coarse.size(), o.workers, [&](std::size_t i) {
        coarse_obj[i] = sign * eval_Q(field, psi, coarse[i].x, coarse[i].y);
    });

    // Boundary levels c = 0 and c = 1, sampled directly through ray parameters.
    struct BoundaryStart {
        Eigen::Vector3d params;
        Eval eval;
    };
    std::vector<BoundaryStart> boundary_coarse;
    {
        std::mt19937_64 rng(o.seed * 0xD1B54A32D192ED03ULL + 7);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (double c : {0.0, 1.0}) {
            const double radius = c == 0.0 ? field.ring().outer().base_radius() : field.ring().inner().base_radius();
            // With a cap, draw half-angles whose chord is at most about twice the cap.
            const double max_half = o.cap ? std::min(std::numbers::pi, *o.cap / radius) : std::numbers::pi;
            for (int k = 0; k < o.pairs_per_level; ++k) {
                const double phx = kTwoPi * (k + unit(rng)) / o.pairs_per_level;
                const double half = max_half * unit(rng);
                boundary_coarse.push_back({Eigen::Vector3d(c, phx + half, half), Eval{}});
            }
        }
        parallel_for(boundary_coarse.size(), o.workers, [&](std::size_t i) {
            boundary_coarse[i].eval = objective(boundary_coarse[i].params, -1.0, -1.0);
        });
    }

    QReport report;
    report.kind = kind;
    report.coarse_samples = static_cast<int>(coarse.size() + boundary_coarse.size());

    std::vector<QCandidate> candidates;
    auto add_candidate = [&](const SigmaPair& pair, double q, bool converged, int iterations) {
        QCandidate cand;
        cand.pair = pair;
        cand.value = q;
        cand.location = classify(pair, o);
        cand.converged = converged;
        cand.iterations = iterations;
        candidates.push_back(cand);
    };

    double coarse_best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        coarse_best = std::max(coarse_best, coarse_obj[i]);
        add_candidate(coarse[i], sign * coarse_obj[i], true, 0);
    }
    for (const auto& b : boundary_coarse) {
        const Eval& e = b.eval;
        if (!e.feasible) continue;
        coarse_best = std::max(coarse_best, e.objective);
        add_candidate({e.x, e.y, b.params(0), (e.y - e.x).norm()}, e.q, true, 0);
    }
    report.coarse_best = sign * coarse_best;

    // The diagonal carries Q = psi(0) exactly.
    {
        const Vec x = level_point_on_ray(field, 0.5, vec2(1.0, 0.0)).point;
        add_candidate({x, x, 0.5, 0.0}, psi.value(0.0), true, 0);
    }

    // Refinement starts: best interior-level samples, plus best samples on each boundary level.
    struct Start {
        Eigen::Vector3d params;
        bool boundary_fixed;
    };
    std::vector<Start> starts;
    {
        std::vector<std::size_t> order(coarse.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return coarse_obj[a] > coarse_obj[b]; });
        const std::size_t top = std::min<std::size_t>(order.size(), static_cast<std::size_t>(o.refine_top));
        for (std::size_t k = 0; k < top; ++k) {
            const SigmaPair& pr = coarse[order[k]];
            starts.push_back({pair_to_params(ref, pr.x, pr.y, pr.level), false});
        }
        for (double c : {0.0, 1.0}) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < boundary_coarse.size(); ++i) {
                if (boundary_coarse[i].params(0) == c && boundary_coarse[i].eval.feasible) idx.push_back(i);
            }
            std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
                return boundary_coarse[a].eval.objective > boundary_coarse[b].eval.objective;
            });
            const std::size_t top_b = std::min<std::size_t>(idx.size(), static_cast<std::size_t>(o.boundary_refine_top));
            for (std::size_t k = 0; k < top_b; ++k) starts.push_back({boundary_coarse[idx[k]].params, true});
        }
    }

    std::vector<RefineResult> refined(starts.size());
    parallel_for(starts.size(), o.workers, [&](std::size_t i) {
        Bounds b;
        b.lo = Eigen::Vector3d(0.0, -std::numeric_limits<double>::infinity(), 0.0);
        b.hi = Eigen::Vector3d(1.0, std::numeric_limits<double>::infinity(), std::numbers::pi);
        b.fixed[0] = starts[i].boundary_fixed;
        refined[i] = refine(objective, starts[i].params, b, o.max_iterations);
    });

    for (const auto& r : refined) {
        report.refinement_iterations += r.iterations;
        if (!r.converged) ++report.non_converged;
        if (!r.best.feasible) continue;
        add_candidate({r.best.x, r.best.y, r.params(0), (r.best.y - r.best.x).norm()}, r.best.q, r.converged,
                      r.iterations);
    }
    report.starts = static_cast<int>(starts.size());

    // Reduction: best per location; ties prefer boundary, cap, diagonal, interior.
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
        const double obj = sign * c.value;
        best = std::max(best, obj);
        auto& slot = report.best_by_location[static_cast<std::size_t>(c.location)];
        if (!slot || obj > sign * slot->value) slot = c;
    }
    report.refined_best = sign * best;

    const std::array<Location, 4> preference{Location::boundary, Location::separation_cap, Location::diagonal,
                                             Location::interior};
    for (Location loc : preference) {
        const auto& slot = report.best_by_location[static_cast<std::size_t>(loc)];
        if (slot && sign * slot->value >= best - o.tie_tolerance) {
            report.value = slot->value;
            report.argument = slot->pair;
            report.classification = loc;
            report.converged = slot->converged;
            break;
        }
    }

    double others = -std::numeric_limits<double>::infinity();
    for (Location loc : {Location::boundary, Location::separation_cap, Location::diagonal}) {
        const auto& slot = report.best_by_location[static_cast<std::size_t>(loc)];
        if (slot) others = std::max(others, sign * slot->value);
    }
    const auto& interior = report.best_by_location[static_cast<std::size_t>(Location::interior)];
    report.interior_excess = interior ? sign * interior->value - others : -std::numeric_limits<double>::infinity();
    report.strict_interior_extremum = report.interior_excess > o.strict_tolerance;
    return report;
}

// ---------------------------------------------------------------------------

ConvexityWitness local_convexity_witness(const HarmonicField& field, const Vec& x, double a, double probe_radius) {
    if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
    if (!(probe_radius > 0.0)) throw std::invalid_argument("probe radius must be positive");
    const CurvatureFrame frame = curvature_frame(field, x);
    const Jet jx = field.jet(x, 1);
    const double level = jx.value;

    constexpr int kScales = 6;
    Eigen::Matrix<double, 2 * kScales, 2> design;
    Eigen::Matrix<double, 2 * kScales, 1> rhs;
    int row = 0;
    for (int k = 0; k < kScales; ++k) {
        const double h = probe_radius * std::pow(0.5, k);
        for (double side : {1.0, -1.0}) {
            const Vec y = project_to_level(field, x + side * h * frame.min_direction, level, 1e-14);
            if (classify_point(field.ring(), y, 1e-9) != Region::in_ring_interior) {
                throw ConfigError("probe radius reaches the boundary of the ring");
            }
            const Vec delta = y - x;
            const double r = delta.norm();
            design(row, 0) = r * r;
            design(row, 1) = r * r * r;
            rhs(row) = (field.eval_grad(y) - jx.grad).dot(delta);
            ++row;
        }
    }
    const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);

    ConvexityWitness out;
    out.fitted_coefficient = coef(0);
    out.du_kappa1 = frame.grad_norm * frame.curvatures(0);
    const double tol = 1e-6 * (1.0 + a);
    out.two_point_verdict = out.fitted_coefficient <= -a + tol;
    out.curvature_verdict = out.du_kappa1 >= a;
    out.holds = out.two_point_verdict == out.curvature_verdict;
    return out;
}

} // namespace ringlab
