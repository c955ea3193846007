#pragma once

#include "segal_quant/oscillator_model.hpp"

#include <json.hpp>

namespace segal {

/// Canonical form: {"discrete": [{"omega", "mult"}...], "continuous":
/// {"nodes": [...], "weights": [...]}}; "continuous" is omitted when empty.
nlohmann::json spec_to_json(const FrequencySpec& spec);

/// Accepts the canonical form and the generated-quadrature shorthand
/// {"continuous": {"interval": [a, b], "nodes": N}} (Gauss-Legendre).
/// Throws ConfigError on schema problems and SpecError on invalid values.
FrequencySpec spec_from_json(const nlohmann::json& doc);

/// Dense row-major nested arrays.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& doc);

nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& doc);

nlohmann::json point_to_json(const PhaseSpacePoint& x);
PhaseSpacePoint point_from_json(const nlohmann::json& doc);

}  // namespace segal
