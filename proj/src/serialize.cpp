#include "ringlab/serialize.hpp"

#include <cmath>
#include <fstream>

#include "ringlab/errors.hpp"

namespace ringlab {

namespace {

Json number(double x) {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

template <class T>
T require(const Json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("field '") + key + "' has the wrong type");
    }
}

} // namespace

Json to_json(const Vec& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
    return a;
}

Vec vec_from_json(const Json& j) {
    if (!j.is_array() || j.empty() || j.size() > 3) throw ConfigError("expected a vector of 1 to 3 numbers");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError("vector entries must be numbers");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

Json to_json(const StarBoundary& b) {
    Json modes = Json::array();
    for (const auto& m : b.modes()) modes.push_back({{"k", m.index}, {"cos", m.cos_coeff}, {"sin", m.sin_coeff}});
    return {{"center", to_json(b.center())}, {"radius", b.base_radius()}, {"modes", modes}};
}

StarBoundary boundary_from_json(const Json& j, int dimension) {
    if (!j.is_object()) throw ConfigError("boundary must be an object");
    Vec center = j.contains("center") ? vec_from_json(j.at("center")) : Vec(Vec::Zero(dimension));
    if (center.size() != dimension) throw ConfigError("boundary center has the wrong dimension");
    const double radius = require<double>(j, "radius");
    std::vector<FourierMode> modes;
    if (j.contains("modes")) {
        for (const auto& m : j.at("modes")) {
            FourierMode fm;
            fm.index = require<int>(m, "k");
            fm.cos_coeff = m.value("cos", 0.0);
            fm.sin_coeff = m.value("sin", 0.0);
            modes.push_back(fm);
        }
    }
    return StarBoundary(dimension, center, radius, modes);
}

Json to_json(const ConvexRing& ring) {
    return {{"dimension", ring.dimension()},
            {"outer", to_json(ring.outer())},
            {"inner", to_json(ring.inner())},
            {"margin", ring.margin()}};
}

ConvexRing ring_from_json(const Json& j) {
    const int dim = j.value("dimension", 2);
    if (dim != 2 && dim != 3) throw ConfigError("dimension must be 2 or 3");
    if (!j.contains("outer") || !j.contains("inner")) throw ConfigError("domain needs 'outer' and 'inner'");
    StarBoundary outer = boundary_from_json(j.at("outer"), dim);
    StarBoundary inner = boundary_from_json(j.at("inner"), dim);
    return ConvexRing(std::move(outer), std::move(inner), j.value("margin", 1e-3));
}

Json to_json(const SolverParams& p) {
    return {{"charges_per_boundary", p.charges_per_boundary},
            {"offset_factor", p.offset_factor},
            {"collocation_per_boundary", p.collocation_per_boundary},
            {"svd_cutoff", p.svd_cutoff},
            {"residual_tolerance", p.residual_tolerance}};
}

SolverParams solver_params_from_json(const Json& j, int dimension) {
    SolverParams p = SolverParams::defaults(dimension);
    if (j.is_null()) return p;
    if (!j.is_object()) throw ConfigError("solver section must be an object");
    p.charges_per_boundary = j.value("charges_per_boundary", p.charges_per_boundary);
    p.offset_factor = j.value("offset_factor", p.offset_factor);
    p.collocation_per_boundary = j.value("collocation_per_boundary", p.collocation_per_boundary);
    p.svd_cutoff = j.value("svd_cutoff", p.svd_cutoff);
    p.residual_tolerance = j.value("residual_tolerance", p.residual_tolerance);
    return p;
}

Json to_json(const FitReport& r) {
    return {{"max_residual", number(r.max_residual)},
            {"collocation_residual", number(r.collocation_residual)},
            {"validation_points", r.validation_points},
            {"rank", r.rank},
            {"unknowns", r.unknowns},
            {"largest_singular_value", number(r.largest_singular_value)},
            {"smallest_kept_singular_value", number(r.smallest_kept_singular_value)}};
}

Json to_json(const HarmonicField& field) {
    Json charges = Json::array();
    for (const auto& q : field.charges()) charges.push_back(to_json(q));
    return {{"ring", to_json(field.ring())},
            {"charges", charges},
            {"weights", field.weights()},
            {"constant", field.constant()},
            {"fit", to_json(field.fit_report())}};
}

HarmonicField field_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("ring")) throw ConfigError("field file needs a 'ring' section");
    ConvexRing ring = ring_from_json(j.at("ring"));
    std::vector<Vec> charges;
    for (const auto& q : require<Json>(j, "charges")) charges.push_back(vec_from_json(q));
    auto weights = require<std::vector<double>>(j, "weights");
    const double constant = require<double>(j, "constant");
    FitReport fit;
    if (j.contains("fit")) {
        const Json& f = j.at("fit");
        fit.max_residual = f.value("max_residual", 0.0);
        fit.collocation_residual = f.value("collocation_residual", 0.0);
        fit.validation_points = f.value("validation_points", 0);
        fit.rank = f.value("rank", 0);
        fit.unknowns = f.value("unknowns", 0);
        fit.largest_singular_value = f.value("largest_singular_value", 0.0);
        fit.smallest_kept_singular_value = f.value("smallest_kept_singular_value", 0.0);
    }
    return HarmonicField(std::move(ring), std::move(charges), std::move(weights), constant, fit);
}

Json to_json(const PsiSpec& psi) {
    Json j = {{"kind", std::string(to_string(psi.kind()))}};
    if (psi.kind() != PsiSpec::Kind::zero) j["a"] = psi.a();
    if (psi.kind() == PsiSpec::Kind::quadratic_capped) j["eps"] = psi.eps();
    return j;
}

PsiSpec psi_from_json(const Json& j) {
    if (j.is_null()) return PsiSpec::zero();
    const auto kind = j.value("kind", std::string("zero"));
    if (kind == "zero") return PsiSpec::zero();
    if (kind == "linear") return PsiSpec::linear(require<double>(j, "a"));
    if (kind == "quadratic_capped") return PsiSpec::quadratic_capped(require<double>(j, "a"), require<double>(j, "eps"));
    throw ConfigError("unknown psi kind '" + kind + "'");
}

Json to_json(const SigmaPair& p) {
    return {{"x", to_json(p.x)}, {"y", to_json(p.y)}, {"level", number(p.level)}, {"separation", number(p.separation)}};
}

Json to_json(const QReport& r) {
    Json by_location = Json::object();
    for (int i = 0; i < 4; ++i) {
        const auto& c = r.best_by_location[static_cast<std::size_t>(i)];
        const std::string key(to_string(static_cast<Location>(i)));
        if (!c) {
            by_location[key] = nullptr;
            continue;
        }
        by_location[key] = {{"value", number(c->value)},
                            {"pair", to_json(c->pair)},
                            {"converged", c->converged},
                            {"iterations", c->iterations}};
    }
    return {{"kind", std::string(to_string(r.kind))},
            {"value", number(r.value)},
            {"argument", to_json(r.argument)},
            {"classification", std::string(to_string(r.classification))},
            {"converged", r.converged},
            {"starts", r.starts},
            {"coarse_samples", r.coarse_samples},
            {"refinement_iterations", r.refinement_iterations},
            {"non_converged", r.non_converged},
            {"coarse_best", number(r.coarse_best)},
            {"refined_best", number(r.refined_best)},
            {"best_by_location", by_location},
            {"interior_excess", number(r.interior_excess)},
            {"strict_interior_extremum", r.strict_interior_extremum}};
}

Json to_json(const CmyReport& r) {
    Json levels = Json::array();
    for (const auto& l : r.per_level) {
        levels.push_back({{"level", l.level}, {"min", number(l.value)}, {"point", to_json(l.point)}});
    }
    return {{"boundary_min", number(r.boundary_min)},
            {"boundary_point", to_json(r.boundary_point)},
            {"boundary_min_on_outer", r.boundary_min_on_outer},
            {"outer_extrapolated", number(r.outer_extrapolated)},
            {"inner_extrapolated", number(r.inner_extrapolated)},
            {"interior_min", number(r.interior_min)},
            {"interior_point", to_json(r.interior_point)},
            {"interior_level", r.interior_level},
            {"margin", number(r.margin)},
            {"global_min", number(r.global_min)},
            {"global_min_on_boundary", r.global_min_on_boundary},
            {"continuity_ok", r.continuity_ok},
            {"convex_hypothesis", r.convex_hypothesis},
            {"exploratory", r.exploratory},
            {"tolerance", r.tolerance},
            {"property_holds", r.property_holds},
            {"per_level", levels}};
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    os << j.dump(2) << '\n';
    if (!os) throw Error("write failed for " + path);
}

Json read_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read " + path);
    try {
        return Json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("cannot parse " + path + ": " + e.what());
    }
}

} // namespace ringlab
