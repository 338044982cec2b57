#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "pwlchaos/system.hpp"

using namespace pwl;

namespace {

SystemParams two_atom() {
  SystemParams p;
  p.a = 0.2; p.b = 5.0; p.c = -3.0; p.alpha = 1.0; p.gamma = 0.0;
  p.variant = Variant::TwoAtom;
  return p;
}

SystemParams four_atom(Variant v, double gamma) {
  SystemParams p;
  p.a = 0.2; p.b = 5.0; p.c = -7.0; p.alpha = 1.0; p.gamma = gamma;
  p.variant = v;
  return p;
}

}  // namespace

TEST_CASE("parameter validation") {
  auto p = two_atom();
  CHECK_NOTHROW(build_system(p));
  p.a = -0.1;
  CHECK_THROWS_AS(build_system(p), std::invalid_argument);
  p = two_atom();
  p.c = 0.1;
  CHECK_THROWS_AS(build_system(p), std::invalid_argument);
  p = two_atom();
  p.c = -0.3;  // 2a + c >= 0
  CHECK_THROWS_AS(build_system(p), std::invalid_argument);
  p = two_atom();
  p.gamma = 1.0;  // two-atom wants gamma = 0
  CHECK_THROWS_AS(build_system(p), std::invalid_argument);
  p = four_atom(Variant::FourAtomSlanted, 0.5);  // gamma <= alpha
  CHECK_THROWS_AS(build_system(p), std::invalid_argument);
}

TEST_CASE("matrix structure and eigenframe") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ua(0.05, 1.0), ub(1.0, 10.0);
  for (int i = 0; i < 50; ++i) {
    SystemParams p = two_atom();
    p.a = ua(rng);
    p.b = ub(rng);
    std::uniform_real_distribution<double> uc(-10.0, -2.0 * p.a - 0.1);
    p.c = uc(rng);
    const PwlSystem sys = build_system(p);

    // stable eigenvector
    const Vector3d v1 = sys.frame.Q.col(0);
    CHECK((sys.A * v1 - p.c * v1).norm() < 1e-12 * sys.A.norm());
    // A = Q E Q^-1 at t derivative level: propagator at 0 is identity
    CHECK((sys.frame.Q * sys.frame.Qinv - Matrix3d::Identity()).norm() < 1e-12);
    // key identity behind the equilibria: A (-1,0,0)^T = B
    CHECK((sys.A * Vector3d(-1, 0, 0) - sys.B).norm() < 1e-12 * sys.B.norm());
    CHECK((sys.Ainv * sys.A - Matrix3d::Identity()).norm() < 1e-10);
    CHECK(divergence(p) == doctest::Approx(2 * p.a + p.c));
  }
}

TEST_CASE("equilibria sit on the x1 axis at the functional values") {
  for (auto [variant, gamma] : {std::pair{Variant::FourAtomSlanted, 3.0},
                                {Variant::FourAtomHidden, 10.0}}) {
    const PwlSystem sys = build_system(four_atom(variant, gamma));
    REQUIRE(sys.atom_count() == 4);
    const double al = sys.params.alpha, ga = sys.params.gamma;
    const double expected[] = {-(ga + al), -(ga - al), ga - al, ga + al};
    for (int i = 1; i <= 4; ++i) {
      const auto& at = sys.atom(i);
      CHECK(at.equilibrium.x() == doctest::Approx(expected[i - 1]));
      CHECK(at.equilibrium.y() == 0.0);
      CHECK(at.equilibrium.z() == 0.0);
      // equilibrium of the atom's affine field
      CHECK((sys.A * at.equilibrium + at.f_value * sys.B).norm() < 1e-12 * sys.scale());
    }
  }
  const PwlSystem two = build_system(two_atom());
  CHECK(two.atom(1).equilibrium.x() == doctest::Approx(-1.0));
  CHECK(two.atom(2).equilibrium.x() == doctest::Approx(1.0));
}

TEST_CASE("membership is total and respects the on-plane rule") {
  const PwlSystem two = build_system(two_atom());
  CHECK(atom_of(two, {0, 0, 0.1}) == 1);   // on/near SW with x3 >= 0
  CHECK(atom_of(two, {0, 0, -0.1}) == 2);
  CHECK(atom_of(two, {0, 0, 0}) == 1);

  const PwlSystem sl = build_system(four_atom(Variant::FourAtomSlanted, 3.0));
  CHECK(atom_of(sl, {-5, 0, 0}) == 1);
  CHECK(atom_of(sl, {-2.75, 0, 0.5}) == 1);   // on SW12, x3 > 0 -> lower atom
  CHECK(atom_of(sl, {-3.25, 0, -0.5}) == 2);  // on SW12, x3 <= 0 -> upper atom
  CHECK(atom_of(sl, {0, 0, 0}) == 3);         // on SW23, x3 <= 0
  CHECK(atom_of(sl, {5, 0, 0}) == 4);

  const PwlSystem hid = build_system(four_atom(Variant::FourAtomHidden, 10.0));
  CHECK(atom_of(hid, {0, 1, 0.5}) == 2);
  CHECK(atom_of(hid, {0, 1, -0.5}) == 3);
  CHECK(atom_of(hid, {-12, 0, 0}) == 1);
  CHECK(atom_of(hid, {12, 0, 0}) == 4);

  // totality + odd symmetry of membership over random points
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-15.0, 15.0);
  for (int i = 0; i < 500; ++i) {
    const Vector3d x(u(rng), u(rng), u(rng));
    for (const PwlSystem* sys : {&two, &sl, &hid}) {
      const int a = atom_of(*sys, x);
      CHECK(a >= 1);
      CHECK(a <= sys->atom_count());
      CHECK(atom_of(*sys, -x) == sys->atom_count() + 1 - a);
    }
  }
}

TEST_CASE("bounding planes") {
  const PwlSystem sl = build_system(four_atom(Variant::FourAtomSlanted, 3.0));
  CHECK(sl.bounding_planes(1).size() == 1);
  CHECK(sl.bounding_planes(2).size() == 2);
  CHECK(sl.bounding_planes(3).size() == 2);
  CHECK(sl.bounding_planes(4).size() == 1);
  CHECK(sl.bounding_planes(1)[0]->id == PlaneId::SW12);
  const PwlSystem two = build_system(two_atom());
  CHECK(two.bounding_planes(1).size() == 1);
}

TEST_CASE("manifolds") {
  const PwlSystem sys = build_system(four_atom(Variant::FourAtomSlanted, 3.0));
  const auto ms = manifolds(sys);
  REQUIRE(ms.size() == 8);
  for (const auto& m : ms) {
    const Vector3d& eq = sys.atom(m.eq_index).equilibrium;
    CHECK((m.anchor - eq).norm() == 0.0);
    if (m.kind == Manifold::Kind::StableLine) {
      // direction is the c-eigenvector
      CHECK((sys.A * m.direction - sys.params.c * m.direction).norm() < 1e-12);
    } else {
      CHECK(std::abs(m.normal.dot(eq) - m.offset) < 1e-12 * sys.scale());
      // the plane is invariant: A maps in-plane directions into the plane
      Vector3d t1 = m.normal.unitOrthogonal();
      CHECK(std::abs(m.normal.dot(sys.A * t1)) < 1e-10);
    }
  }
}

TEST_CASE("propagator splits into decay and spiral") {
  const PwlSystem sys = build_system(two_atom());
  const double t = 0.37;
  const Matrix3d E = sys.frame.propagator(t);
  CHECK(E(0, 0) == doctest::Approx(std::exp(sys.params.c * t)));
  CHECK(E(0, 1) == 0.0);
  CHECK(E(1, 0) == 0.0);
  const double g = std::exp(sys.params.a * t);
  CHECK(std::hypot(E(1, 1), E(2, 1)) == doctest::Approx(g).epsilon(1e-12));
  CHECK(std::hypot(E(1, 2), E(2, 2)) == doctest::Approx(g).epsilon(1e-12));
}
