#pragma once

#include <string>

#include "json.hpp"
#include "immersion.hpp"

namespace fel {

using Json = nlohmann::json;

// Field serialization: CSV is row-major with header i,j,v0[,v1,...];
// JSON carries grid metadata plus the flat sample array (component planes
// concatenated, each row-major).
std::string field_to_csv(const ScalarField& f);
std::string field_to_csv(const VectorField& f);
Json field_to_json(const VectorField& f, const std::string& label);
VectorField field_from_json(const Json& j);

Json grid_to_json(const PeriodicGrid& g);
GridPtr grid_from_json(const Json& j);

Json immersion_to_json(const Immersion& imm);
Immersion immersion_from_json(const Json& j);

// FNV-1a 64-bit over the canonical (sorted-key) dump.
std::string config_hash(const Json& config);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace fel
