// SPDX-License-Identifier: Apache-2.0
#pragma once

// Self-describing JSON records for densities and transport results. Readers
// validate the same invariants the constructors enforce. Doubles are written
// in shortest round-trip form, so a write/read cycle is lossless.

#include <filesystem>
#include <json.hpp>

#include "denslab/density/density.hpp"
#include "denslab/dynamics/euler.hpp"
#include "denslab/dynamics/sg.hpp"
#include "denslab/transport/transport.hpp"

namespace denslab::io {

using Json = nlohmann::json;

Json to_json(const Domain& d);
Domain domain_from_json(const Json& j);

Json to_json(const Grid2D& g);
Grid2D grid_from_json(const Json& j);

Json to_json(const Density& d);
// Throws std::invalid_argument naming the offending field.
Density density_from_json(const Json& j);

Json to_json(const TransportResult& r);
TransportResult transport_result_from_json(const Json& j);

Json to_json(const ScalarField2D& f);
ScalarField2D field_from_json(const Json& j);

// Checkpoint records.
Json to_json(const SGState& s);
SGState sg_state_from_json(const Json& j);
Json to_json(const EulerState& s);
EulerState euler_state_from_json(const Json& j);

void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

}  // namespace denslab::io
