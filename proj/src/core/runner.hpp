#pragma once

#include "io.hpp"

namespace fel {

// Exit codes of the experiment runner: 0 success (all enabled verdicts pass),
// 1 numerical failure, 2 config error. No partial outputs are written on
// config errors; reports embed the config hash, grid, and tolerances.
int run_config(const Json& config, const std::string& out_dir);

// Parses the JSON text, checks the command name, runs. Exit semantics above.
int run_config_text(const std::string& command, const std::string& config_text, const std::string& out_dir,
                    std::string* error_message = nullptr);

// Immersion construction from the config schema
//   {"kind":"clifford"} | {"kind":"rotational","R":..,"r":..}
// | {"kind":"figure8","scale":..} | {"kind":"fourier","base":{..},"seed":..,
//    "amplitude":..,"max_mode":..} | {"kind":"file","path":..}
Immersion immersion_from_config(const Json& spec, const Json& grid_spec);

}  // namespace fel
