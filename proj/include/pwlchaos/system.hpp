#pragma once

#include <Eigen/Dense>
#include <vector>

// Piecewise-linear saddle-focus systems: each atom of the phase-space
// partition carries the affine field  x' = A x + f B  with a constant f,
// so every atom has one saddle-focus equilibrium on the x1 axis.

namespace pwl {

using Eigen::Matrix3d;
using Eigen::Vector3d;

enum class Variant { TwoAtom, FourAtomSlanted, FourAtomHidden };

struct SystemParams {
  double a = 0.2;      // unstable spiral rate, > 0
  double b = 5.0;      // rotation frequency, > 0
  double c = -3.0;     // stable eigenvalue, < 0
  double alpha = 1.0;  // equilibrium half-offset, > 0
  double gamma = 0.0;  // outer offset; 0 for TwoAtom, > alpha otherwise
  Variant variant = Variant::TwoAtom;
};

/// Divergence of the field, 2a + c. Dissipative iff negative.
double divergence(const SystemParams& p);

// Real eigenframe of A: columns of Q are v1 (stable line) and the two
// spanning vectors of the spiral plane; A = Q E Q^-1 with E block-diagonal.
struct Eigenframe {
  Matrix3d Q;
  Matrix3d Qinv;
  double lambda1;  // = c
  double spiral_a;
  double spiral_b;

  /// Block-diagonal canonical form E(t) = diag(e^{ct}, rotation * e^{at}).
  Matrix3d propagator(double t) const;
};

enum class PlaneId : int { SW12 = 0, SW23 = 1, SW34 = 2 };

const char* to_string(PlaneId id);

// Oriented plane normal . x = offset. For the half-plane surfaces of the
// hidden variant the restriction is enforced by atom_of, not stored here.
struct SwitchPlane {
  PlaneId id;
  Vector3d normal;
  double offset;

  double signed_value(const Vector3d& x) const { return normal.dot(x) - offset; }
};

struct AtomSpec {
  int index;            // 1-based, ordered along x1
  double f_value;       // constant functional value in this atom
  Vector3d equilibrium; // (f_value, 0, 0)
};

struct PwlSystem {
  SystemParams params;
  Matrix3d A;
  Vector3d B;
  Matrix3d Ainv;
  Eigenframe frame;
  std::vector<AtomSpec> atoms;
  std::vector<SwitchPlane> planes;

  const AtomSpec& atom(int index) const { return atoms.at(static_cast<size_t>(index - 1)); }
  int atom_count() const { return static_cast<int>(atoms.size()); }

  /// Field evaluated with the functional value of `atom_index`.
  Vector3d field(int atom_index, const Vector3d& x) const;

  /// Planes bounding a given atom (1 for outer atoms, 2 for inner ones).
  std::vector<const SwitchPlane*> bounding_planes(int atom_index) const;

  /// Characteristic length max(1, alpha, gamma), used to scale tolerances.
  double scale() const;
};

/// Compiles a system from its parameters. Throws std::invalid_argument on
/// sign violations, 2a+c >= 0, or gamma inconsistent with the variant.
PwlSystem build_system(const SystemParams& p);

/// Total membership function; on-plane points follow the x3-sign rule.
int atom_of(const PwlSystem& sys, const Vector3d& x);

struct Manifold {
  enum class Kind { StableLine, UnstablePlane };
  Kind kind;
  int eq_index;
  Vector3d anchor;     // the equilibrium
  Vector3d direction;  // line direction (StableLine only)
  Vector3d normal;     // plane normal (UnstablePlane only)
  double offset;       // plane: normal . x = offset
};

/// One stable line and one unstable plane per equilibrium.
std::vector<Manifold> manifolds(const PwlSystem& sys);

}  // namespace pwl
