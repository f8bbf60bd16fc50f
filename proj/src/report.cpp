#include "msvortex/report.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unistd.h>

#include "msvortex/errors.hpp"
#include "msvortex/functional.hpp"

namespace msv {

namespace {

using nlohmann::ordered_json;

std::vector<double> central_difference(std::span<const double> f, std::span<const double> r) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  d[0] = (f[1] - f[0]) / (r[1] - r[0]);
  d[n - 1] = (f[n - 1] - f[n - 2]) / (r[n - 1] - r[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (r[i + 1] - r[i - 1]);
  return d;
}

void append_number(std::string& out, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

ordered_json energy_json(const EnergyBreakdown& e) {
  return {{"dirichlet_u", e.dirichlet_u}, {"curl_b", e.curl_b}, {"coupling", e.coupling},
          {"penalty", e.penalty},         {"potential", e.potential}, {"total", e.total}};
}

ordered_json config_json(const RunConfig& c) {
  return {{"k", c.k},
          {"p", c.p},
          {"lambda", c.lambda},
          {"eps_start", c.eps_start},
          {"eps_end", c.eps_end},
          {"eps_factor", c.eps_factor},
          {"rmax", c.rmax},
          {"n", c.n},
          {"gamma", c.gamma},
          {"method", method_name(c.method)},
          {"path_len", c.mpa.path_len},
          {"max_iter", c.mpa.max_iter},
          {"grad_tol", c.mpa.grad_tol},
          {"newton_tol", c.newton_tol},
          {"residual_tol", c.residual_tol},
          {"seed_profile", c.seed_profile}};
}

ordered_json record_json(const EpsRecord& rec, double K, double norm_bound) {
  const double h1_sq = rec.norm_h1 * rec.norm_h1;
  return {{"eps", rec.eps},
          {"energy", energy_json(rec.energy)},
          {"level", rec.level},
          {"level_positive", rec.level > 0.0},
          {"level_le_K", rec.level <= K},
          {"grad_norm", rec.grad_norm},
          {"residual_sup", rec.residual_sup},
          {"residual_l2", rec.residual_l2},
          {"norm_h1", rec.norm_h1},
          {"norm_h1r", rec.norm_h1r},
          {"norm_star_b", rec.norm_star_b},
          {"norm_h1_sq_le_bound", h1_sq <= norm_bound},
          {"norm_h1r_sq_le_bound", rec.norm_h1r * rec.norm_h1r <= norm_bound},
          {"curl_le_bound", 2.0 * rec.energy.curl_b <= norm_bound},
          {"flux", rec.flux},
          {"min_u", rec.min_u},
          {"b_local_bound", rec.b_local_bound},
          {"newton_iterations", rec.newton_iterations},
          {"seconds", rec.seconds}};
}

ordered_json oracle_json(const OracleMetrics& m, bool compared) {
  ordered_json j = {{"ok", m.ok}};
  if (!m.ok) {
    j["failure"] = m.failure;
    j["seconds"] = m.seconds;
    return j;
  }
  j["eps"] = m.eps;
  j["a"] = m.a;
  j["beta"] = m.beta;
  j["u_end"] = m.u_end;
  j["tail_mismatch"] = m.tail_mismatch;
  j["mass"] = m.mass;
  j["energy"] = m.energy_oracle;
  if (compared) {
    j["compare_radius"] = m.compare_radius;
    j["sup_du"] = m.sup_du;
    j["sup_db"] = m.sup_db;
    j["energy_variational"] = m.energy_variational;
    j["energy_rel"] = m.energy_rel;
  }
  j["seconds"] = m.seconds;
  return j;
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error(ErrorKind::io, "write to " + path + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error(ErrorKind::io, "cannot rename temporary file onto " + path + ": " + ec.message());
  }
}

std::string format_profile(const State& s, const RadialGrid& grid) {
  if (s.u.size() != grid.size() || s.b.size() != grid.size())
    throw Error(ErrorKind::shape, "profile length does not match the grid");
  const auto r = grid.r();
  const std::vector<double> du = central_difference(s.u, r);
  const std::vector<double> db = central_difference(s.b, r);
  std::string out = "r,u,b,du,db\n";
  out.reserve(out.size() + grid.size() * 5 * 25);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    append_number(out, r[i]);
    out += ',';
    append_number(out, s.u[i]);
    out += ',';
    append_number(out, s.b[i]);
    out += ',';
    append_number(out, du[i]);
    out += ',';
    append_number(out, db[i]);
    out += '\n';
  }
  return out;
}

void write_profile(const State& s, const RadialGrid& grid, const std::string& path) {
  write_file_atomic(path, format_profile(s, grid));
}

Profile read_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::io, path + ": empty file");
  const auto header = split_csv(line);
  if (header.size() < 3 || header[0] != "r" || header[1] != "u" || header[2] != "b")
    throw Error(ErrorKind::io, path + ": header must start with r,u,b");
  Profile prof;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw Error(ErrorKind::io, path + ": row " + std::to_string(row) + " has the wrong number of columns");
    double v[3];
    for (int c = 0; c < 3; ++c) {
      char* end = nullptr;
      errno = 0;
      v[c] = std::strtod(cells[c].c_str(), &end);
      if (end == cells[c].c_str() || *end != '\0' || !std::isfinite(v[c]))
        throw Error(ErrorKind::io, path + ": row " + std::to_string(row) + " has a malformed number");
    }
    prof.r.push_back(v[0]);
    prof.u.push_back(v[1]);
    prof.b.push_back(v[2]);
  }
  if (prof.r.empty()) throw Error(ErrorKind::io, path + ": no data rows");
  return prof;
}

nlohmann::ordered_json report_json(const RunResult& result) {
  ordered_json j;
  j["config"] = config_json(result.config);
  j["grid"] = {{"rmax", result.grid.rmax()}, {"n", result.grid.n()}, {"gamma", result.grid.gamma()}};

  const State& s = result.final_state;
  j["final"] = {{"eps", result.params.eps()},
                {"energy", energy_json(energy(s, result.params, result.grid))},
                {"min_u", *std::min_element(s.u.begin(), s.u.end())},
                {"flux", 2.0 * std::numbers::pi * s.b.back()}};

  if (result.solve) {
    const SolveReport& rep = *result.solve;
    j["K"] = rep.K;
    j["norm_bound"] = rep.norm_bound;
    j["c_bar"] = rep.c_bar;
    if (rep.used_mpa) {
      j["mpa"] = {{"level", rep.mpa.level},
                  {"initial_barrier", rep.mpa.initial_barrier},
                  {"grad_norm", rep.mpa.grad_norm},
                  {"iterations", rep.mpa.iterations},
                  {"respacings", rep.mpa.respacings}};
    }
    ordered_json per_eps = ordered_json::array();
    for (const EpsRecord& rec : rep.records) per_eps.push_back(record_json(rec, rep.K, rep.norm_bound));
    j["eps"] = std::move(per_eps);

    double min_u = 0.0;
    bool all_le_K = true;
    for (const EpsRecord& rec : rep.records) {
      min_u = std::min(min_u, rec.min_u);
      all_le_K = all_le_K && rec.level <= rep.K && rec.level > 0.0;
    }
    j["min_u"] = min_u;
    j["level_le_K"] = all_le_K;
    j["flux_limit"] = rep.records.back().flux;
    j["extrapolation"] = {{"gap", rep.extrapolation_gap},
                          {"newton_iterations", rep.limit_newton_iterations},
                          {"limit_flux", 2.0 * std::numbers::pi * rep.limit.b.back()}};
    ordered_json timing;
    for (const auto& [stage, sec] : rep.seconds) timing[stage] = sec;
    j["timing"] = std::move(timing);
  } else {
    j["timing"] = ordered_json::object();
  }
  if (result.oracle) {
    j["oracle"] = oracle_json(*result.oracle, result.config.method == Method::cross_check);
    j["timing"]["oracle"] = result.oracle->seconds;
  }
  j["timing"]["total"] = result.total_seconds;
  j["converged"] = true;
  return j;
}

void write_report(const RunResult& result, const std::string& path) {
  write_file_atomic(path, report_json(result).dump(2) + "\n");
}

}  // namespace msv
