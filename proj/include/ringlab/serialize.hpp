#pragma once

#include <string>

#include <json.hpp>

#include "ringlab/cmy.hpp"
#include "ringlab/field.hpp"
#include "ringlab/geometry.hpp"
#include "ringlab/two_point.hpp"

namespace ringlab {

using Json = nlohmann::ordered_json;

Json to_json(const Vec& v);
Vec vec_from_json(const Json& j);

Json to_json(const StarBoundary& b);
StarBoundary boundary_from_json(const Json& j, int dimension);

Json to_json(const ConvexRing& ring);
ConvexRing ring_from_json(const Json& j);

Json to_json(const SolverParams& p);
SolverParams solver_params_from_json(const Json& j, int dimension);

Json to_json(const FitReport& r);

/// Full field: ring, charges, weights, constant and fit diagnostics. Doubles round-trip exactly.
Json to_json(const HarmonicField& field);
HarmonicField field_from_json(const Json& j);

Json to_json(const PsiSpec& psi);
PsiSpec psi_from_json(const Json& j);

Json to_json(const SigmaPair& p);
Json to_json(const QReport& r);
Json to_json(const CmyReport& r);

void write_json_file(const std::string& path, const Json& j);
Json read_json_file(const std::string& path);

} // namespace ringlab
