#include "pwlchaos/system.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pwl {

double divergence(const SystemParams& p) { return 2.0 * p.a + p.c; }

Matrix3d Eigenframe::propagator(double t) const {
  const double ect = std::exp(lambda1 * t);
  const double eat = std::exp(spiral_a * t);
  const double cb = std::cos(spiral_b * t);
  const double sb = std::sin(spiral_b * t);
  Matrix3d E;
  E << ect, 0.0, 0.0,
       0.0, eat * cb, -eat * sb,
       0.0, eat * sb, eat * cb;
  return E;
}

const char* to_string(PlaneId id) {
  switch (id) {
    case PlaneId::SW12: return "SW12";
    case PlaneId::SW23: return "SW23";
    case PlaneId::SW34: return "SW34";
  }
  return "?";
}

Vector3d PwlSystem::field(int atom_index, const Vector3d& x) const {
  return A * x + atom(atom_index).f_value * B;
}

std::vector<const SwitchPlane*> PwlSystem::bounding_planes(int atom_index) const {
  std::vector<const SwitchPlane*> out;
  if (atom_count() == 2) {
    out.push_back(&planes[0]);
    return out;
  }
  // atom i is bounded by SW_{(i-1)i} and SW_{i(i+1)}
  if (atom_index > 1) out.push_back(&planes[static_cast<size_t>(atom_index - 2)]);
  if (atom_index < atom_count()) out.push_back(&planes[static_cast<size_t>(atom_index - 1)]);
  return out;
}

double PwlSystem::scale() const {
  return std::max({1.0, params.alpha, params.gamma});
}

namespace {

Eigenframe make_frame(const SystemParams& p) {
  Eigenframe f;
  f.Q << 1.0, 0.0, -1.0,
         0.0, -1.0, 0.0,
         0.5, 0.0, 1.0;
  // exact inverse of the fixed eigenvector matrix
  f.Qinv << 2.0 / 3.0, 0.0, 2.0 / 3.0,
            0.0, -1.0, 0.0,
            -1.0 / 3.0, 0.0, 2.0 / 3.0;
  f.lambda1 = p.c;
  f.spiral_a = p.a;
  f.spiral_b = p.b;
  return f;
}

void validate(const SystemParams& p) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (!(p.a > 0.0)) fail("a must be > 0");
  if (!(p.b > 0.0)) fail("b must be > 0");
  if (!(p.c < 0.0)) fail("c must be < 0");
  if (!(p.alpha > 0.0)) fail("alpha must be > 0");
  if (!(divergence(p) < 0.0)) fail("non-dissipative parameters: 2a+c must be < 0 (Assumption 1)");
  if (p.variant == Variant::TwoAtom) {
    if (p.gamma != 0.0) fail("TwoAtom variant requires gamma = 0");
  } else {
    if (!(p.gamma > p.alpha)) fail("four-atom variants require gamma > alpha");
  }
}

}  // namespace

PwlSystem build_system(const SystemParams& p) {
  validate(p);

  PwlSystem sys;
  sys.params = p;
  const double a = p.a, b = p.b, c = p.c;
  sys.A << a / 3.0 + 2.0 * c / 3.0, b, 2.0 * c / 3.0 - 2.0 * a / 3.0,
           -b / 3.0, a, 2.0 * b / 3.0,
           c / 3.0 - a / 3.0, -b, 2.0 * a / 3.0 + c / 3.0;
  sys.B << -a / 3.0 - 2.0 * c / 3.0, b / 3.0, a / 3.0 - c / 3.0;
  sys.frame = make_frame(p);

  // A^-1 = Q E^-1 Q^-1, with E^-1 known in closed form.
  Matrix3d Einv = Matrix3d::Zero();
  const double r2 = a * a + b * b;
  Einv(0, 0) = 1.0 / c;
  Einv(1, 1) = a / r2;
  Einv(1, 2) = b / r2;
  Einv(2, 1) = -b / r2;
  Einv(2, 2) = a / r2;
  sys.Ainv = sys.frame.Q * Einv * sys.frame.Qinv;

  std::vector<double> fvals;
  if (p.variant == Variant::TwoAtom) {
    fvals = {-p.alpha, p.alpha};
  } else {
    fvals = {-p.alpha - p.gamma, p.alpha - p.gamma, -p.alpha + p.gamma, p.alpha + p.gamma};
  }
  int idx = 1;
  for (double f : fvals) {
    // -f A^-1 B = (f, 0, 0): the equilibrium sits on the x1 axis at f
    sys.atoms.push_back({idx++, f, Vector3d(f, 0.0, 0.0)});
  }

  const Vector3d slanted(2.0, 0.0, -1.0);
  if (p.variant == Variant::TwoAtom) {
    sys.planes.push_back({PlaneId::SW23, slanted, 0.0});
  } else {
    sys.planes.push_back({PlaneId::SW12, slanted, -2.0 * p.gamma});
    if (p.variant == Variant::FourAtomSlanted) {
      sys.planes.push_back({PlaneId::SW23, slanted, 0.0});
    } else {
      sys.planes.push_back({PlaneId::SW23, Vector3d(1.0, 0.0, 0.0), 0.0});
    }
    sys.planes.push_back({PlaneId::SW34, slanted, 2.0 * p.gamma});
  }
  return sys;
}

int atom_of(const PwlSystem& sys, const Vector3d& x) {
  const SystemParams& p = sys.params;
  const double s = 2.0 * x(0) - x(2);

  if (p.variant == Variant::TwoAtom) {
    if (s < 0.0) return 1;
    if (s > 0.0) return 2;
    return x(2) >= 0.0 ? 1 : 2;  // Prop. 1 convention
  }

  if (p.variant == Variant::FourAtomSlanted) {
    const double g2 = 2.0 * p.gamma;
    // on-plane: x3 > 0 -> P_i, x3 <= 0 -> P_{i+1}
    if (s < -g2) return 1;
    if (s == -g2) return x(2) > 0.0 ? 1 : 2;
    if (s < 0.0) return 2;
    if (s == 0.0) return x(2) > 0.0 ? 2 : 3;
    if (s < g2) return 3;
    if (s == g2) return x(2) > 0.0 ? 3 : 4;
    return 4;
  }

  // FourAtomHidden: SW23 relocated to {x1 = 0}; SW12/SW34 keep the slanted
  // form on their own half-space.
  const double g2 = 2.0 * p.gamma;
  if (x(0) < 0.0) {
    if (s < -g2) return 1;
    if (s == -g2) return x(2) > 0.0 ? 1 : 2;
    return 2;
  }
  if (x(0) > 0.0) {
    if (s > g2) return 4;
    if (s == g2) return x(2) > 0.0 ? 3 : 4;
    return 3;
  }
  return x(2) > 0.0 ? 2 : 3;  // on SW23, mirroring the slanted convention
}

std::vector<Manifold> manifolds(const PwlSystem& sys) {
  std::vector<Manifold> out;
  const Vector3d v1 = sys.frame.Q.col(0);
  const Vector3d un(1.0, 0.0, 1.0);
  for (const AtomSpec& atom : sys.atoms) {
    Manifold stable;
    stable.kind = Manifold::Kind::StableLine;
    stable.eq_index = atom.index;
    stable.anchor = atom.equilibrium;
    stable.direction = v1;
    stable.normal = Vector3d::Zero();
    stable.offset = 0.0;
    out.push_back(stable);

    Manifold unstable;
    unstable.kind = Manifold::Kind::UnstablePlane;
    unstable.eq_index = atom.index;
    unstable.anchor = atom.equilibrium;
    unstable.direction = Vector3d::Zero();
    unstable.normal = un;
    unstable.offset = un.dot(atom.equilibrium);
    out.push_back(unstable);
  }
  return out;
}

}  // namespace pwl
