#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pwlchaos/flow.hpp"

using namespace pwl;

namespace {

PwlSystem make(Variant v, double c, double gamma) {
  SystemParams p;
  p.a = 0.2; p.b = 5.0; p.c = c; p.alpha = 1.0; p.gamma = gamma; p.variant = v;
  return build_system(p);
}

}  // namespace

TEST_CASE("closed form agrees with RK4") {
  const PwlSystem sys = make(Variant::FourAtomSlanted, -7.0, 3.0);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ux(-4.0, 4.0), ut(0.05, 1.0);
  for (int i = 0; i < 10; ++i) {
    const Vector3d x0(ux(rng), ux(rng), ux(rng));
    const int atom = atom_of(sys, x0);
    const double t = ut(rng);
    const Vector3d exact = flow_in_atom(sys, atom, x0, t);
    const Vector3d rk = oracles::rk4_flow(sys, atom, x0, t);
    CHECK((exact - rk).norm() < 1e-8);
  }
}

TEST_CASE("z-coordinate round trip and decoupling") {
  const PwlSystem sys = make(Variant::TwoAtom, -3.0, 0.0);
  const Vector3d x0(0.3, -0.2, 0.6);
  const ZCoords zc = to_z(sys, 2, x0);
  CHECK((from_z(sys, zc) - x0).norm() < 1e-13);
  // z1 decays at rate c, the spiral radius grows at rate a
  const double t = 0.8;
  const ZCoords zt = to_z(sys, 2, flow_in_atom(sys, 2, x0, t));
  CHECK(zt.z.x() == doctest::Approx(zc.z.x() * std::exp(sys.params.c * t)).epsilon(1e-10));
  const double r0 = std::hypot(zc.z.y(), zc.z.z());
  CHECK(std::hypot(zt.z.y(), zt.z.z()) ==
        doctest::Approx(r0 * std::exp(sys.params.a * t)).epsilon(1e-10));
}

TEST_CASE("first_crossing matches the dense-scan oracle") {
  const PwlSystem sys = make(Variant::TwoAtom, -3.0, 0.0);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> ux(-1.5, 1.5);
  int checked = 0;
  for (int i = 0; i < 20; ++i) {
    const Vector3d x0(ux(rng), ux(rng), ux(rng));
    const int atom = atom_of(sys, x0);
    const auto got = first_crossing(sys, atom, x0, 20.0);
    const auto want = oracles::scan_crossing(sys, atom, x0, 20.0);
    REQUIRE(got.event.has_value() == want.has_value());
    if (want) {
      CHECK(got.event->t == doctest::Approx(*want).epsilon(1e-7));
      CHECK(got.event->from_atom == atom);
      ++checked;
    }
  }
  CHECK(checked > 10);
}

TEST_CASE("roots at t = 0 are ignored for on-plane starts") {
  const PwlSystem sys = make(Variant::TwoAtom, -3.0, 0.0);
  const Vector3d x0(0.0, 0.0, 0.0);  // on SW, belongs to atom 1
  const auto res = first_crossing(sys, 1, x0, 10.0);
  REQUIRE(res.event.has_value());
  CHECK(res.event->t > 1e-6);
}

TEST_CASE("backward crossing mirrors forward from the other side") {
  const PwlSystem sys = make(Variant::TwoAtom, -3.0, 0.0);
  const Vector3d x0(-0.4, 0.3, 0.2);
  const int atom = atom_of(sys, x0);
  const auto fwd = first_crossing(sys, atom, x0, 50.0, Direction::Forward);
  REQUIRE(fwd.event.has_value());
  // flowing backward from the crossing point recovers the elapsed time
  const Vector3d back = flow_in_atom(sys, atom, fwd.event->x, -fwd.event->t);
  CHECK((back - x0).norm() < 1e-9);
  const auto bwd = first_crossing(sys, atom, x0, 50.0, Direction::Backward);
  if (bwd.event) CHECK(bwd.event->t < 0.0);
}

TEST_CASE("integrate stitches segments with consistent bookkeeping") {
  const PwlSystem sys = make(Variant::FourAtomSlanted, -7.0, 5.0);
  const double dt = 2.0 * M_PI / (5.0 * 64.0);
  const Trajectory traj = integrate(sys, {0, 0, 0}, 40.0, dt);
  REQUIRE(traj.events.size() > 4);
  CHECK(traj.t_total == 40.0);
  double prev = -1.0;
  for (const auto& ev : traj.events) {
    CHECK(ev.t > prev);
    prev = ev.t;
    CHECK(ev.from_atom != ev.to_atom);
  }
  const auto flat = traj.flatten();
  prev = -1.0;
  for (const auto& [t, x] : flat) {
    CHECK(t > prev);
    prev = t;
  }
  CHECK(flat.front().first == 0.0);
  CHECK(flat.back().first == doctest::Approx(40.0));
  // samples land on the global grid between events
  int on_grid = 0;
  for (const auto& [t, x] : flat) {
    const double r = std::remainder(t, dt);
    if (std::abs(r) < 1e-9) ++on_grid;
  }
  CHECK(on_grid > static_cast<int>(flat.size()) / 2);
}

TEST_CASE("odd symmetry of trajectories") {
  for (auto variant : {Variant::FourAtomSlanted, Variant::FourAtomHidden}) {
    const PwlSystem sys = make(variant, -7.0, 10.0);
    const Vector3d x0(0.5, -0.3, 1.0);
    const double dt = 0.05;
    const auto a = integrate(sys, x0, 15.0, dt).flatten();
    const auto b = integrate(sys, -x0, 15.0, dt).flatten();
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].first == doctest::Approx(b[i].first).epsilon(1e-9));
      CHECK((a[i].second + b[i].second).norm() < 1e-7 * sys.scale());
    }
  }
}

TEST_CASE("time reversibility across one atom") {
  const PwlSystem sys = make(Variant::FourAtomHidden, -7.0, 10.0);
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> ux(-8.0, 8.0), ut(0.01, 2.0);
  for (int i = 0; i < 50; ++i) {
    const Vector3d x0(ux(rng), ux(rng), ux(rng));
    const int atom = atom_of(sys, x0);
    const double t = ut(rng);
    const Vector3d back = flow_in_atom(sys, atom, flow_in_atom(sys, atom, x0, t), -t);
    CHECK((back - x0).norm() < 1e-9 * std::max(1.0, x0.norm()));
  }
}
