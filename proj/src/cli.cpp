#include "ringlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include "ringlab/errors.hpp"
#include "ringlab/level_sets.hpp"
#include "ringlab/rosay_rudin.hpp"

namespace ringlab {

namespace {

template <class T>
void read(const Json& j, const char* key, T& out) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("config field '") + key + "' has the wrong type");
    }
}

void read_optional(const Json& j, const char* key, std::optional<double>& out) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    double v = 0.0;
    read(j, key, v);
    out = v;
}

Json section(const Json& doc, const char* key) {
    if (!doc.contains(key) || doc.at(key).is_null()) return Json::object();
    if (!doc.at(key).is_object()) throw ConfigError(std::string("config section '") + key + "' must be an object");
    return doc.at(key);
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive");
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string file_stem(const std::string& subcommand) {
    std::string s = subcommand;
    std::replace(s.begin(), s.end(), '-', '_');
    return s;
}

struct Session {
    const RunConfig& config;
    std::ostream& log;
    std::optional<HarmonicField> field;
    Json field_info;
    Json certification;
};

ConvexRing configured_ring(const RunConfig& cfg) {
    if (!cfg.load_field.empty()) return field_from_json(read_json_file(cfg.load_field)).ring();
    if (cfg.domain.empty()) throw ConfigError("config has no domain section and no field file was given");
    return ring_from_json(cfg.domain);
}

const HarmonicField& field_of(Session& s) {
    if (s.field) return *s.field;
    const RunConfig& cfg = s.config;
    if (!cfg.load_field.empty()) {
        s.field = field_from_json(read_json_file(cfg.load_field));
        s.field_info = {{"source", "loaded"}};
    } else {
        const ConvexRing ring = configured_ring(cfg);
        const SolverParams params = solver_params_from_json(cfg.solver, ring.dimension());
        s.log << "solving " << ring.dimension() << "D ring\n";
        s.field = solve_ring(ring, params);
        s.field_info = {{"source", "solved"}, {"solver", to_json(params)}};
    }
    s.field_info["charges"] = s.field->charges().size();
    s.field_info["fit"] = to_json(s.field->fit_report());
    if (!cfg.dump_field.empty()) write_json_file(cfg.dump_field, to_json(*s.field));

    const ConvexRing& ring = s.field->ring();
    const auto outer = is_strictly_convex(ring.outer());
    const auto inner = is_strictly_convex(ring.inner());
    const GradientCheck grad = check_gradient_hypothesis(*s.field);
    s.certification = {{"outer_strictly_convex", outer.strictly_convex},
                       {"outer_min_curvature", outer.min_curvature},
                       {"inner_strictly_convex", inner.strictly_convex},
                       {"inner_min_curvature", inner.min_curvature},
                       {"starshaped", is_starshaped(ring, ring.reference_point())},
                       {"min_grad_norm", grad.min_grad_norm},
                       {"min_value", grad.min_value},
                       {"max_value", grad.max_value},
                       {"gradient_ok", grad.gradient_ok},
                       {"maximum_principle_ok", grad.maximum_principle_ok}};
    if (!grad.gradient_ok) throw HypothesisViolation("gradient of the fitted potential nearly vanishes in the ring");
    return *s.field;
}

ExtremizeOptions extremize_options(const RunConfig& cfg) {
    ExtremizeOptions o;
    o.levels = cfg.mp.levels;
    o.pairs_per_level = cfg.mp.pairs_per_level;
    o.refine_top = cfg.mp.refine_top;
    o.boundary_refine_top = cfg.mp.boundary_refine_top;
    o.cap = cfg.mp.cap;
    o.strict_tolerance = cfg.tolerances.strict;
    o.tie_tolerance = cfg.tolerances.tie;
    o.seed = cfg.seed;
    o.workers = cfg.workers;
    return o;
}

int exp_psi_check(Session& s, Json& out) {
    const RunConfig& cfg = s.config;
    const PsiSpec psi = psi_from_json(cfg.psi);
    double t_max = 0.0;
    if (cfg.psi_check.t_max) {
        t_max = *cfg.psi_check.t_max;
    } else if (cfg.mp.cap) {
        t_max = *cfg.mp.cap * *cfg.mp.cap;
    } else {
        const double d = configured_ring(cfg).diameter();
        t_max = d * d;
    }
    const Admissibility adm = check_psi_admissible(psi, t_max, cfg.psi_check.samples);
    out = {{"psi", to_json(psi)},
           {"t_max", t_max},
           {"samples", cfg.psi_check.samples},
           {"admissible", adm.admissible},
           {"worst_margin", adm.worst_margin},
           {"validity_limit", psi.validity_limit()}};
    if (!adm.admissible) throw ConfigError("psi inadmissible on requested range");
    return exit_ok;
}

int exp_check_mp(Session& s, Json& out) {
    const RunConfig& cfg = s.config;
    const PsiSpec psi = psi_from_json(cfg.psi);
    const std::string& mode = cfg.mp.mode;
    if (mode != "max" && psi.kind() != PsiSpec::Kind::zero) {
        throw ConfigError("min mode is only defined for psi = 0");
    }
    const HarmonicField& field = field_of(s);
    const ExtremizeOptions opts = extremize_options(cfg);
    int status = exit_ok;
    out = {{"psi", to_json(psi)}};
    for (const auto kind : {Extremum::max, Extremum::min}) {
        if (kind == Extremum::max && mode == "min") continue;
        if (kind == Extremum::min && mode == "max") continue;
        s.log << "extremizing Q (" << to_string(kind) << ")\n";
        const QReport r = extremize_Q(field, psi, kind, opts);
        if (r.strict_interior_extremum) status = exit_violation;
        out[std::string(to_string(kind))] = to_json(r);
    }
    out["property_holds"] = status == exit_ok;
    return status;
}

void write_levels_csv(const std::string& path, const CmyReport& r) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    os.precision(17);
    const bool three = !r.per_level.empty() && r.per_level.front().point.size() == 3;
    os << "level,min_du_kappa1,x1,x2" << (three ? ",x3" : "") << '\n';
    for (const auto& l : r.per_level) {
        os << l.level << ',' << l.value;
        for (Eigen::Index i = 0; i < l.point.size(); ++i) os << ',' << l.point(i);
        os << '\n';
    }
}

int exp_check_cmy(Session& s, Json& out) {
    const RunConfig& cfg = s.config;
    const HarmonicField& field = field_of(s);
    CmyScanOptions opts;
    opts.exploratory = cfg.cmy.exploratory;
    opts.tolerance = cfg.tolerances.cmy;
    opts.workers = cfg.workers;
    s.log << "scanning |Du| kappa_1\n";
    const CmyReport r = scan_min_du_kappa1(field, cfg.cmy.levels, cfg.cmy.points_per_level, opts);
    write_levels_csv((std::filesystem::path(cfg.out_dir) / "cmy_levels.csv").string(), r);
    out = {{"scan", to_json(r)}};
    int status = exit_ok;
    if (!r.exploratory && !r.property_holds) status = exit_violation;
    if (cfg.cmy.localized_eps) {
        if (field.dimension() != 2) throw ConfigError("localized two-point check is implemented for planar rings");
        ExtremizeOptions eo = extremize_options(cfg);
        eo.cap.reset();
        s.log << "localized two-point check\n";
        const QReport q = localized_mp_check(field, r.boundary_min, *cfg.cmy.localized_eps, eo);
        if (q.strict_interior_extremum) status = exit_violation;
        out["localized"] = {{"a", r.boundary_min}, {"eps", *cfg.cmy.localized_eps}, {"report", to_json(q)}};
    }
    out["property_holds"] = status == exit_ok;
    return status;
}

struct RrSample {
    int index = 0;
    double level = 0.0;
    Vec x0, y0, direction;
    bool ok = false;
    std::string failure;
    OrderFit fit;
    double max_residual = 0.0;
    double orthogonality = 0.0;
    double lc_residual = 0.0;
    double rotated_trace = 0.0;
    bool pass = false;
};

Vec unit(double phi) { return vec2(std::cos(phi), std::sin(phi)); }

// Rounding scale of one evaluation of the planar field at x.
double evaluation_noise(const HarmonicField& field, const Vec& x) {
    double s = std::abs(field.constant());
    for (std::size_t j = 0; j < field.charges().size(); ++j) {
        s += std::abs(field.weights()[j] * std::log((x - field.charges()[j]).norm()));
    }
    return std::numeric_limits<double>::epsilon() * (1.0 + s);
}

int exp_rr_verify(Session& s, Json& out) {
    const RunConfig& cfg = s.config;
    const HarmonicField& field = field_of(s);
    if (field.dimension() != 2) throw ConfigError("rr-verify is implemented for planar rings");
    const Tolerances& tol = cfg.tolerances;

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> level_dist(0.1, 0.9);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<RrSample> samples(static_cast<std::size_t>(cfg.rr.samples));
    for (int i = 0; i < cfg.rr.samples; ++i) {
        RrSample& r = samples[static_cast<std::size_t>(i)];
        r.index = i;
        r.level = level_dist(rng);
        r.x0 = level_point_on_ray(field, r.level, unit(angle(rng))).point;
        r.y0 = level_point_on_ray(field, r.level, unit(angle(rng))).point;
        r.direction = unit(angle(rng));
    }
    s.log << "verifying the level-preserving map on " << samples.size() << " samples\n";

    std::vector<std::optional<RRMapContext>> contexts(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        RrSample& r = samples[i];
        try {
            contexts[i].emplace(field, r.x0, r.y0);
            const RRMapContext& ctx = *contexts[i];
            const RotationEven& rot = ctx.rotation();
            const Vec gx = field.eval_grad(r.x0);
            const Vec gy = field.eval_grad(r.y0);
            const Mat eye = Mat::Identity(2, 2);
            r.orthogonality = std::max((rot.basis.transpose() * rot.basis - eye).cwiseAbs().maxCoeff(),
                                       (rot.matrix.transpose() * rot.matrix - eye).cwiseAbs().maxCoeff());
            r.lc_residual = (rot.matrix * gx - rot.scale * gy).norm() / gx.norm();
            r.rotated_trace = std::abs(rotated_hessian_trace(field, rot, r.y0)) / field.eval_hessian(r.y0).norm();
            RotationEven transposed = rot;
            transposed.matrix = rot.matrix.transpose();

            r.rotated_trace = std::max(r.rotated_trace, std::abs(rotated_hessian_trace(field, transposed, r.x0)) /
                                                            field.eval_hessian(r.x0).norm());

            // Geometric radii from min(safe radius, 1e-2) down to 1e-4.
            const double r0 = std::min(ctx.safe_radius(), 1e-2);
            const double r1 = std::min(1e-4, 0.01 * r0);
            std::vector<double> radii;
            for (int k = 0; k < cfg.rr.radii; ++k) radii.push_back(r0 * std::pow(r1 / r0, k / (cfg.rr.radii - 1.0)));
            for (double rad : radii) {
                r.max_residual = std::max(r.max_residual, rr_map(ctx, rad * r.direction).residual);
            }
            r.fit = alpha_order_fit(ctx, r.direction, radii);
            r.ok = true;
            r.pass = r.fit.vanishes || r.fit.exponent >= tol.rr_exponent;
        } catch (const Error& e) {
            r.failure = e.what();
        }
    }

    int passed = 0, successful = 0;
    double worst_exponent = std::numeric_limits<double>::infinity();
    double worst_residual = 0.0, worst_orth = 0.0, worst_lc = 0.0, worst_trace = 0.0;
    for (const auto& r : samples) {
        if (r.pass) ++passed;
        if (!r.ok) continue;
        ++successful;
        if (!r.fit.vanishes) worst_exponent = std::min(worst_exponent, r.fit.exponent);
        worst_residual = std::max(worst_residual, r.max_residual);
        worst_orth = std::max(worst_orth, r.orthogonality);
        worst_lc = std::max(worst_lc, r.lc_residual);
        worst_trace = std::max(worst_trace, r.rotated_trace);
    }
    const double pass_rate = samples.empty() ? 1.0 : static_cast<double>(passed) / static_cast<double>(samples.size());

    // Laplacian of f at two step sizes; second-order convergence shows as a ratio near 4
    // unless the finer value is already at the rounding floor of the field evaluation.
    Json harm = Json::array();
    bool harm_ok = true;
    int observed = 0, noise_limited = 0;
    const double h = cfg.rr.harmonicity_step;
    int used = 0;
    for (std::size_t i = 0; i < contexts.size() && used < cfg.rr.harmonicity_points; ++i) {
        if (!contexts[i]) continue;
        const RRMapContext& ctx = *contexts[i];
        if (ctx.safe_radius() <= 4.0 * h) continue;
        ++used;
        std::vector<Vec> grid = {Vec::Zero(2)};
        for (int k = 0; k < 4; ++k) grid.push_back(0.5 * ctx.safe_radius() * unit(k * std::numbers::pi / 2.0 + 0.3));
        const double coarse = f_harmonicity_check(ctx, grid, h);
        const double fine = f_harmonicity_check(ctx, grid, 0.5 * h);
        const double ratio = fine > 0.0 ? coarse / fine : 0.0;
        const double floor = 4.0 * evaluation_noise(field, ctx.x0()) * 16.0 / (h * h / 4.0);
        const bool limited = coarse <= floor;
        const bool ok = coarse <= tol.harmonicity && (limited || (ratio > 3.0 && ratio < 5.0));
        if (limited) {
            ++noise_limited;
        } else {
            ++observed;
        }
        harm_ok = harm_ok && ok;
        harm.push_back({{"sample", i},
                        {"laplacian_h", coarse},
                        {"laplacian_h2", fine},
                        {"ratio", ratio},
                        {"noise_limited", limited},
                        {"ok", ok}});
    }

    const bool rotation_ok = worst_orth <= 1e-14 && worst_lc <= 1e-12 && worst_trace <= tol.rotation;
    const bool property = pass_rate >= tol.rr_pass_rate && worst_residual <= tol.rr_residual && rotation_ok && harm_ok;

    const auto csv_path = (std::filesystem::path(cfg.out_dir) / "rr_samples.csv").string();
    std::ofstream os(csv_path);
    if (!os) throw Error("cannot write " + csv_path);
    os.precision(17);
    os << "index,level,x0_1,x0_2,y0_1,y0_2,dir_1,dir_2,ok,exponent,vanishes,points_used,max_residual,"
          "orthogonality,lc_residual,rotated_trace,pass\n";
    for (const auto& r : samples) {
        os << r.index << ',' << r.level << ',' << r.x0(0) << ',' << r.x0(1) << ',' << r.y0(0) << ',' << r.y0(1) << ','
           << r.direction(0) << ',' << r.direction(1) << ',' << r.ok << ',' << r.fit.exponent << ',' << r.fit.vanishes
           << ',' << r.fit.points_used << ',' << r.max_residual << ',' << r.orthogonality << ',' << r.lc_residual << ','
           << r.rotated_trace << ',' << r.pass << '\n';
    }

    Json failures = Json::array();
    for (const auto& r : samples) {
        if (!r.ok) failures.push_back({{"sample", r.index}, {"error", r.failure}});
    }
    out = {{"samples", samples.size()},
           {"successful", successful},
           {"passed", passed},
           {"pass_rate", pass_rate},
           {"worst_exponent", std::isfinite(worst_exponent) ? Json(worst_exponent) : Json(nullptr)},
           {"worst_residual", worst_residual},
           {"worst_orthogonality", worst_orth},
           {"worst_lc_residual", worst_lc},
           {"worst_rotated_trace", worst_trace},
           {"rotation_ok", rotation_ok},
           {"harmonicity", harm},
           {"harmonicity_ok", harm_ok},
           {"harmonicity_observed_convergence", observed},
           {"harmonicity_noise_limited", noise_limited},
           {"failures", failures},
           {"property_holds", property}};
    return property ? exit_ok : exit_violation;
}

int exp_solve(Session& s, Json& out) {
    field_of(s);
    out = Json::object();
    return exit_ok;
}

int dispatch(Session& s, const std::string& name, Json& out) {
    if (name == "solve") return exp_solve(s, out);
    if (name == "psi-check") return exp_psi_check(s, out);
    if (name == "check-mp") return exp_check_mp(s, out);
    if (name == "check-cmy") return exp_check_cmy(s, out);
    if (name == "rr-verify") return exp_rr_verify(s, out);
    throw ConfigError("unknown subcommand '" + name + "'");
}

Json error_record(const std::exception& e) {
    std::string type = "internal";
    Json rec = Json::object();
    if (dynamic_cast<const ConfigError*>(&e)) {
        type = "config";
    } else if (dynamic_cast<const GeometryError*>(&e)) {
        type = "geometry";
    } else if (const auto* se = dynamic_cast<const SolverAccuracyError*>(&e)) {
        type = "solver_accuracy";
        rec["achieved_residual"] = se->achieved_residual();
    } else if (dynamic_cast<const HypothesisViolation*>(&e)) {
        type = "hypothesis";
    } else if (dynamic_cast<const Error*>(&e)) {
        type = "numerical";
    } else if (dynamic_cast<const std::invalid_argument*>(&e)) {
        type = "invalid_argument";
    }
    rec["type"] = type;
    rec["message"] = e.what();
    return rec;
}

const char* status_name(int code) {
    switch (code) {
    case exit_ok: return "ok";
    case exit_violation: return "violation";
    default: return "error";
    }
}

} // namespace

RunConfig parse_config(const Json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig c;
    c.domain = section(doc, "domain");
    c.solver = section(doc, "solver");
    if (doc.contains("psi") && !doc.at("psi").is_null()) c.psi = doc.at("psi");
    psi_from_json(c.psi);

    const Json exp = section(doc, "experiment");
    const Json mp = section(exp, "mp");
    read(mp, "mode", c.mp.mode);
    read(mp, "levels", c.mp.levels);
    read(mp, "pairs_per_level", c.mp.pairs_per_level);
    read(mp, "refine_top", c.mp.refine_top);
    read(mp, "boundary_refine_top", c.mp.boundary_refine_top);
    read_optional(mp, "cap", c.mp.cap);
    if (c.mp.mode != "max" && c.mp.mode != "min" && c.mp.mode != "both") {
        throw ConfigError("experiment.mp.mode must be max, min or both");
    }
    if (c.mp.levels < 1 || c.mp.pairs_per_level < 1 || c.mp.refine_top < 0 || c.mp.boundary_refine_top < 0) {
        throw ConfigError("experiment.mp counts must be positive");
    }
    if (c.mp.cap) require_positive(*c.mp.cap, "experiment.mp.cap");

    const Json cmy = section(exp, "cmy");
    read(cmy, "levels", c.cmy.levels);
    read(cmy, "points_per_level", c.cmy.points_per_level);
    read(cmy, "exploratory", c.cmy.exploratory);
    read_optional(cmy, "localized_eps", c.cmy.localized_eps);
    if (c.cmy.levels < 2 || c.cmy.points_per_level < 8) throw ConfigError("experiment.cmy grid is too small");
    if (c.cmy.localized_eps) require_positive(*c.cmy.localized_eps, "experiment.cmy.localized_eps");

    const Json rr = section(exp, "rr");
    read(rr, "samples", c.rr.samples);
    read(rr, "radii", c.rr.radii);
    read(rr, "harmonicity_step", c.rr.harmonicity_step);
    read(rr, "harmonicity_points", c.rr.harmonicity_points);
    if (c.rr.samples < 1 || c.rr.radii < 5 || c.rr.harmonicity_points < 0) {
        throw ConfigError("experiment.rr needs samples >= 1 and radii >= 5");
    }
    require_positive(c.rr.harmonicity_step, "experiment.rr.harmonicity_step");

    const Json pc = section(exp, "psi_check");
    read_optional(pc, "t_max", c.psi_check.t_max);
    read(pc, "samples", c.psi_check.samples);
    if (c.psi_check.t_max) require_positive(*c.psi_check.t_max, "experiment.psi_check.t_max");
    if (c.psi_check.samples < 100) throw ConfigError("experiment.psi_check.samples must be at least 100");

    const Json tol = section(doc, "tolerances");
    Tolerances& t = c.tolerances;
    read(tol, "strict", t.strict);
    read(tol, "tie", t.tie);
    read(tol, "cmy", t.cmy);
    read(tol, "rr_exponent", t.rr_exponent);
    read(tol, "rr_pass_rate", t.rr_pass_rate);
    read(tol, "rr_residual", t.rr_residual);
    read(tol, "harmonicity", t.harmonicity);
    read(tol, "rotation", t.rotation);
    for (double v : {t.strict, t.tie, t.cmy, t.rr_exponent, t.rr_pass_rate, t.rr_residual, t.harmonicity, t.rotation}) {
        require_positive(v, "tolerances");
    }
    if (t.rr_pass_rate > 1.0) throw ConfigError("tolerances.rr_pass_rate must not exceed 1");

    read(doc, "seed", c.seed);
    read(doc, "workers", c.workers);
    if (c.workers < 1) throw ConfigError("workers must be at least 1");
    const Json output = section(doc, "output");
    read(output, "dir", c.out_dir);
    read(output, "dump_field", c.dump_field);
    read(output, "load_field", c.load_field);
    return c;
}

Json to_json(const RunConfig& c) {
    Json domain = c.domain;
    if (!domain.empty()) domain = to_json(ring_from_json(c.domain));
    const int dim = domain.value("dimension", 2);
    return {{"domain", domain},
            {"solver", to_json(solver_params_from_json(c.solver, dim))},
            {"psi", to_json(psi_from_json(c.psi))},
            {"experiment",
             {{"mp",
               {{"mode", c.mp.mode},
                {"levels", c.mp.levels},
                {"pairs_per_level", c.mp.pairs_per_level},
                {"refine_top", c.mp.refine_top},
                {"boundary_refine_top", c.mp.boundary_refine_top},
                {"cap", optional_number(c.mp.cap)}}},
              {"cmy",
               {{"levels", c.cmy.levels},
                {"points_per_level", c.cmy.points_per_level},
                {"exploratory", c.cmy.exploratory},
                {"localized_eps", optional_number(c.cmy.localized_eps)}}},
              {"rr",
               {{"samples", c.rr.samples},
                {"radii", c.rr.radii},
                {"harmonicity_step", c.rr.harmonicity_step},
                {"harmonicity_points", c.rr.harmonicity_points}}},
              {"psi_check", {{"t_max", optional_number(c.psi_check.t_max)}, {"samples", c.psi_check.samples}}}}},
            {"tolerances",
             {{"strict", c.tolerances.strict},
              {"tie", c.tolerances.tie},
              {"cmy", c.tolerances.cmy},
              {"rr_exponent", c.tolerances.rr_exponent},
              {"rr_pass_rate", c.tolerances.rr_pass_rate},
              {"rr_residual", c.tolerances.rr_residual},
              {"harmonicity", c.tolerances.harmonicity},
              {"rotation", c.tolerances.rotation}}},
            {"seed", c.seed},
            {"workers", c.workers},
            {"output", {{"dir", c.out_dir}, {"dump_field", c.dump_field}, {"load_field", c.load_field}}}};
}

int run(const RunConfig& config, const std::string& subcommand, std::ostream& log) {
    Json report = {{"subcommand", subcommand}};
    Session session{config, log, std::nullopt, Json::object(), Json::object()};
    int code = exit_ok;
    try {
        std::filesystem::create_directories(config.out_dir);
        report["config"] = to_json(config);
        if (subcommand == "report") {
            Json results = Json::object();
            for (const auto& name : subcommands()) {
                if (name == "report") continue;
                const bool planar_only = name == "check-mp" || name == "rr-verify";
                if (planar_only && configured_ring(config).dimension() != 2) {
                    results[name] = {{"status", "skipped"}, {"reason", "planar rings only"}};
                    continue;
                }
                Json out;
                const int c = dispatch(session, name, out);
                results[name] = {{"status", status_name(c)}, {"result", out}};
                if (c == exit_error || code == exit_error) {
                    code = exit_error;
                } else {
                    code = std::max(code, c);
                }
            }
            report["results"] = results;
        } else {
            Json out;
            code = dispatch(session, subcommand, out);
            report["result"] = out;
        }
    } catch (const std::exception& e) {
        code = exit_error;
        report["error"] = error_record(e);
        log << "error: " << e.what() << '\n';
    }
    report["status"] = status_name(code);
    if (!session.field_info.empty()) report["field"] = session.field_info;
    if (!session.certification.empty()) report["certification"] = session.certification;
    try {
        const auto path = std::filesystem::path(config.out_dir) / (file_stem(subcommand) + ".json");
        write_json_file(path.string(), report);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return exit_error;
    }
    return code;
}

} // namespace ringlab
