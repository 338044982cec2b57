#pragma once

#include <optional>
#include <vector>

#include "pwlchaos/flow.hpp"

// Heteroclinic orbit machinery: seed points on the unstable plane that hit
// the switching plane at a stable-manifold intersection point, closure
// verification, and the gamma interval separating the connection census.

namespace pwl {

/// Point where the stable line of `eq_to` pierces the switching plane
/// between two adjacent atoms; a trajectory arriving there is absorbed
/// along the stable direction.
struct IntersectionPoint {
  int from_atom;
  int to_atom;
  PlaneId plane;
  Vector3d x;
};

/// All candidate connection targets of the system (pairs of adjacent atoms,
/// both directions).
std::vector<IntersectionPoint> intersection_points(const PwlSystem& sys);

/// Initial condition on the unstable plane of `from_atom`, k full spiral
/// turns before the arrival at the intersection point toward `to_atom`.
/// Larger k starts exponentially closer to the equilibrium.
Vector3d ho_seed(const PwlSystem& sys, int from_atom, int to_atom, int k);

struct HeteroclinicCheck {
  bool verified = false;
  double closure_error = 0.0;  // min distance of a crossing to the target point
  double t_flight = 0.0;       // time from seed to the accepted crossing
  std::optional<CrossingEvent> arrival;
};

/// Flies the seed forward and accepts if some crossing into `to_atom` lands
/// within tol of the intersection point. Throws std::invalid_argument if x0
/// is not on the unstable plane of from_atom (to 1e-12 * scale).
HeteroclinicCheck verify_heteroclinic(const PwlSystem& sys, int from_atom,
                                      int to_atom, const Vector3d& x0,
                                      double tol, double t_max = 0.0);

struct GammaInterval {
  double lower;  // below: inner connections only survive between the middle pair
  double upper;  // above: outer connections only
  double tau;    // quarter-turn-plus arrival time used by both bounds
};

GammaInterval gamma_interval(double a, double b, double alpha);

enum class ConnectionCensus {
  SixOrbits,            // gamma strictly inside the interval
  FourOrbitsInnerLoop,  // gamma below: loop between the middle equilibria
  FourOrbitsOuterLoops, // gamma above: loops between the outer pairs
};

struct StructureClassification {
  ConnectionCensus census;
  bool degenerate = false;  // gamma within 1e-9 of an interval endpoint
  GammaInterval interval;
};

StructureClassification classify_structure(const PwlSystem& sys);

}  // namespace pwl
