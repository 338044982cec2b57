#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pwlchaos/flow.hpp"
#include "pwlchaos/regions.hpp"

// Run configuration (INI-style text with strict keys), CSV trajectory
// serialization with bit-faithful floats, and SVG projection plots.

namespace pwl {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  Vector3d origin = Vector3d::Zero();
  Vector3d du = Vector3d::Zero();
  Vector3d dv = Vector3d::Zero();
  int nu = 0;
  int nv = 0;
};

struct RunConfig {
  SystemParams params;
  std::string command = "simulate";
  std::vector<Vector3d> seeds;
  GridSpec grid;
  bool has_grid = false;
  double horizon = 100.0;
  double sample_dt = 0.0;  // 0 = (2*pi/b)/64
  unsigned rng_seed = 0;
  // heteroclinic
  int k = 50;
  int from_atom = 1;
  int to_atom = 2;
  // hidden probe
  double epsilon = 0.01;
  int seeds_per_eq = 8;
  // regions
  std::string region_label = "R1";
  int n_samples = 7;
  // transitory
  std::vector<double> gamma_list;
  // hysteresis companion
  double k_gain = 1.0;
  double l1 = 6.0;
  double l2 = 6.0;
  double d1 = 2.0 / 3.0;
  double d2 = 0.0;
  double t_end = 0.0;  // 0 = 3*pi/(2b)
  // outputs
  std::string out_csv;
  std::string out_plot;
  std::string out_report;

  double effective_sample_dt() const {
    return sample_dt > 0.0 ? sample_dt : (2.0 * M_PI / params.b) / 64.0;
  }
};

/// Strict INI-style parser; unknown keys and malformed lines are rejected
/// with line context. Throws ConfigError.
RunConfig parse_config(const std::string& text);

/// Inverse of parse_config; parse(write(cfg)) is lossless.
std::string write_config(const RunConfig& cfg);

struct TrajectoryFile {
  SystemParams params;
  Vector3d seed = Vector3d::Zero();
  double sample_dt = 0.0;
  std::vector<std::tuple<double, Vector3d, int>> samples;  // t, x, atom
  std::vector<std::pair<double, PlaneId>> events;
};

void export_trajectory(const PwlSystem& sys, const Trajectory& traj,
                       const Vector3d& seed, double sample_dt,
                       const std::string& path);

TrajectoryFile parse_trajectory(const std::string& path);

enum class Projection { X1X3, X1X2, X2X3, Z2Z3 };

Projection projection_from_string(const std::string& s);

/// Standalone SVG: trajectory polyline, axes, equilibrium markers,
/// switching-plane traces, and optional region outlines. Z projections are
/// relative to the equilibrium of atom 2.
void emit_plot(const PwlSystem& sys, const Trajectory& traj, Projection proj,
               const std::string& path,
               const std::vector<Region>& outlines = {});

}  // namespace pwl
