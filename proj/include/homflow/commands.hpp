#pragma once

#include <iosfwd>
#include <string>

#include "homflow/catalog.hpp"
#include "homflow/config.hpp"

namespace homflow {

enum ExitCode : int { kExitOk = 0, kExitNumerical = 1, kExitUsage = 2, kExitIo = 3 };

/// Catalog lookup for user input. Tags of geometries whose flow becomes extinct
/// in finite time (s3, s2, s2xr, s4, cp2) are rejected with ConfigError, as are
/// unknown tags.
GeometryClass load_user_class(const std::string& id, const CatalogParams& params);

/// Executes a validated command. Errors are reported on `err` and mapped to exit codes.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full entry point: parse, run, map exceptions.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace homflow
