#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "pwlchaos/flow.hpp"

// Transit-region geometry on the central switching surface: tangency lines,
// the key construction points, the quadrilateral regions R1/R2, the
// region-mapping verification, the bound-constant inequality chain, and the
// planar hysteresis companion used to justify the rotation assumption.

namespace pwl {

struct TangencyLine {
  PlaneId plane;
  int atom;
  Vector3d point;
  Vector3d direction;  // unit vector
};

/// Field-tangency lines of the two atoms adjacent to `plane_id`, computed
/// from normal . A(x - x_eq) = 0 restricted to the plane.
std::vector<TangencyLine> tangency_lines(const PwlSystem& sys, PlaneId plane_id);

/// Named construction points (pa, pb, pc, pt1, pa1, pa2 for the slanted
/// surface; pt1, pi1, pi2 for the relocated one).
std::map<std::string, Vector3d> key_points(const PwlSystem& sys);

enum class RegionLabel { R1, R2 };

struct Region {
  PlaneId plane;
  RegionLabel label;
  std::array<Vector3d, 4> corners;  // convex cyclic order; R2 = -R1
};

/// True when the parameters sit in the regime the region construction
/// assumes: b/a >= 25, 7/5 <= |c/b| <= 2, gamma/alpha >= 10.
bool region_regime_ok(const SystemParams& p);

Region region(const PwlSystem& sys, RegionLabel label);

struct RegionMappingResult {
  double fraction_to_other_region = 0.0;
  double fraction_to_self_excited = 0.0;
  double fraction_unresolved = 0.0;
  int n_samples = 0;
};

/// Samples the quad interior (uniform in its bilinear parameterization) and
/// integrates each seed until it re-enters R1 or R2 on the plane or is
/// captured by a self-excited attractor.
RegionMappingResult verify_region_mapping(const PwlSystem& sys, RegionLabel label,
                                          int n_samples, double horizon,
                                          unsigned rng_seed = 0);

struct BoundConstant {
  std::string name;
  double computed;  // coefficient of gamma, from the defining expression
  double printed;   // value displayed in the source derivation
};

struct BoundInequality {
  std::string text;
  double lhs;
  double rhs;
  bool holds;  // lhs < rhs
};

struct BoundReport {
  std::vector<BoundConstant> constants;
  std::vector<BoundInequality> inequalities;
};

/// Recomputes every displayed bound coefficient from its defining
/// expression and evaluates the inequality chain (all per unit gamma).
BoundReport bound_report(const SystemParams& p);

struct PlanarTrajectory {
  std::vector<std::pair<double, Eigen::Vector2d>> samples;
  std::vector<double> switch_times;
};

/// 2-D companion system x' = M x - k_gain M (0, f(x2))^T with M the spiral
/// matrix [[a,-b],[b,a]] and f a hysteresis taking d1 (set when x2 rises
/// through l2) or d2 (set when x2 falls through l1). IC is (0, l1).
PlanarTrajectory hysteresis_companion(double a, double b, double k_gain,
                                      double l1, double l2, double d1, double d2,
                                      double t_end);

}  // namespace pwl
