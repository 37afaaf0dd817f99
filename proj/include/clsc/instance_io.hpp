#pragma once

#include <cstdint>
#include <string>

#include "clsc/model.hpp"

namespace clsc {

/// Parses the normative instance JSON document (see docs/instance_format.md).
/// Throws nlohmann::json exceptions on malformed input and
/// std::invalid_argument on schema violations.
NetworkInstance parse_instance(const std::string& json_text);

/// Serializes an instance to the normative JSON document. Deterministic:
/// equal instances produce identical bytes.
std::string instance_to_json(const NetworkInstance& inst);

NetworkInstance load_instance_file(const std::string& path);
void save_instance_file(const NetworkInstance& inst, const std::string& path);

/// 2 plants, 2 warehouses, 2 customers, 2 collection centers, 1 disposal
/// site, 3 demand scenarios, alpha = 0.2, beta = 0.1. Coefficients drawn
/// reproducibly from the seed within documented ranges.
NetworkInstance make_tabletop(std::uint64_t seed);

/// 2x2x2 single-scenario instance with small integer coefficients and total
/// demand 6, sized for exhaustive enumeration. alpha = 0.5, beta = 0 keep
/// every structured flow assignment integral.
NetworkInstance make_oracle_tiny(std::uint64_t seed);

}  // namespace clsc
