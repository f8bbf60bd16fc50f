#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "msvortex/grid.hpp"
#include "msvortex/pipeline.hpp"
#include "msvortex/state.hpp"

namespace msv {

/// Writes `content` to `path` through a temporary file in the same
/// directory and a rename. Throws Error(io).
void write_file_atomic(const std::string& path, const std::string& content);

/// CSV with header "r,u,b,du,db", one row per node, 17 significant digits.
/// Derivatives are central differences (one-sided at the two ends).
std::string format_profile(const State& s, const RadialGrid& grid);
void write_profile(const State& s, const RadialGrid& grid, const std::string& path);

struct Profile {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> b;
};
/// Throws Error(io) if the file cannot be opened or a row is malformed.
Profile read_profile(const std::string& path);

nlohmann::ordered_json report_json(const RunResult& result);
void write_report(const RunResult& result, const std::string& path);

}  // namespace msv
