#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pwlchaos/system.hpp"

// Exact closed-form propagation inside an atom plus first-crossing event
// detection and multi-atom trajectory assembly. No numerical integration:
// within an atom the solution is x(t) = x* + Q E(t) Q^-1 (x0 - x*).

namespace pwl {

struct ZCoords {
  Vector3d z;
  int atom;  // z is relative to this atom's equilibrium
};

ZCoords to_z(const PwlSystem& sys, int atom, const Vector3d& x);
Vector3d from_z(const PwlSystem& sys, const ZCoords& zc);

/// Closed-form solution of the affine field of `atom`, valid for any t
/// (negative t flows backward).
Vector3d flow_in_atom(const PwlSystem& sys, int atom, const Vector3d& x0, double t);

struct CrossingEvent {
  double t;  // time since segment start (absolute time in Trajectory::events)
  Vector3d x;
  PlaneId plane;
  int from_atom;
  int to_atom;
};

enum class Direction { Forward, Backward };

struct CrossingSearch {
  std::optional<CrossingEvent> event;
  bool grazing = false;  // plane touched without a sign change
};

/// First exit of the closed-form trajectory from `atom`, up to |t| = t_max.
/// Roots at t = 0 are ignored; grazing contacts are reported, not crossed.
CrossingSearch first_crossing(const PwlSystem& sys, int atom, const Vector3d& x0,
                              double t_max, Direction dir = Direction::Forward);

struct Trajectory {
  struct Segment {
    int atom;
    std::vector<std::pair<double, Vector3d>> samples;  // (absolute t, x)
  };
  std::vector<Segment> segments;
  std::vector<CrossingEvent> events;  // event t is absolute
  double t_total = 0.0;
  bool grazed = false;

  /// Flattened (t, x) view across segments, duplicated event endpoints removed.
  std::vector<std::pair<double, Vector3d>> flatten() const;
};

/// Chains flow_in_atom + first_crossing across atoms, sampling at multiples
/// of sample_dt plus every event point. Throws std::runtime_error if the
/// crossing count exceeds 10^6 (sliding/chatter guard).
Trajectory integrate(const PwlSystem& sys, const Vector3d& x0, double t_end,
                     double sample_dt);

}  // namespace pwl
