#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <magsphere/atlas.hpp>
#include <magsphere/core.hpp>
#include <magsphere/equilibria.hpp>
#include <magsphere/fullspace.hpp>

namespace magsphere {

nlohmann::json to_json(const SystemParams &p);
SystemParams params_from_json(const nlohmann::json &j, SystemParams base = {});

nlohmann::json to_json(const Tolerances &t);
Tolerances tolerances_from_json(const nlohmann::json &j, Tolerances base = {});

/// family, q, B, m2, m3, H, C, residual, degenerate.
nlohmann::json to_json(const EquilibriumRecord &r);

nlohmann::json to_json(const HyperbolaFamily &f, double q, double B);

nlohmann::json to_json(const AtlasMetadata &m);

nlohmann::json to_json(const Reconstruction &r);

nlohmann::json to_json(const Vec3 &v);

} // namespace magsphere
