#pragma once

// Building the pieces of a run from a RunConfig, running it, writing outputs.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mboltz/collision.hpp"
#include "mboltz/config.hpp"
#include "mboltz/error.hpp"
#include "mboltz/solver.hpp"
#include "mboltz/state.hpp"

namespace mboltz {

inline GridPtr make_grid(const GridConfig& g) {
  return MomentumGrid::make(g.radial_n, g.r_max, g.mapping, g.direction_degree);
}

inline CollisionRules make_rules(const GridConfig& g) {
  return CollisionRules::make(g.q_radial_n, g.r_max, g.mapping, g.q_direction_degree,
                              g.omega_degree);
}

inline DistributionState make_initial_state(const RunConfig& c, GridPtr grid) {
  return init_family(std::move(grid), c.init.family());
}

struct SimulationResult {
  TimeSeries series;
  DistributionState final_state;
  int steps = 0;
  bool frozen = false;
};

/// Integrates the configured initial data; `observer` sees every accepted state.
inline SimulationResult simulate(const RunConfig& c, unsigned workers = 1,
                                 const StepObserver& observer = {}) {
  c.validate();
  const GridPtr grid = make_grid(c.grid);
  const CollisionOperator op(grid, c.kernel, make_rules(c.grid));
  IntegrationResult r =
      integrate(op, make_initial_state(c, grid), c.cosmology, c.integrator, workers, observer);
  return {std::move(r.series), std::move(r.final_state), r.steps, r.frozen};
}

/// Same as simulate() but starting from given data on the configured grid.
inline SimulationResult simulate_from(const RunConfig& c, DistributionState initial,
                                      unsigned workers = 1, const StepObserver& observer = {}) {
  c.validate();
  const CollisionOperator op(initial.grid, c.kernel, make_rules(c.grid));
  IntegrationResult r = integrate(op, std::move(initial), c.cosmology, c.integrator, workers, observer);
  return {std::move(r.series), std::move(r.final_state), r.steps, r.frozen};
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

inline void finish_output(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw IoError("write failed: " + path.string());
}

/// Writes timeseries.csv and final.snapshot into `dir`; both start with the resolved config.
inline void write_simulation_outputs(const std::filesystem::path& dir, const RunConfig& c,
                                     const SimulationResult& r) {
  const std::string header = config_comment_header(c);
  {
    const auto path = dir / "timeseries.csv";
    auto os = open_output(path);
    write_time_series_csv(os, r.series, header);
    finish_output(os, path);
  }
  {
    const auto path = dir / "final.snapshot";
    auto os = open_output(path);
    write_snapshot(os, r.final_state, header);
    finish_output(os, path);
  }
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  if (is.bad()) throw IoError("read failed: " + path.string());
  return ss.str();
}

}  // namespace mboltz
