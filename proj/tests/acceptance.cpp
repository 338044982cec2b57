// Acceptance gate: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <random>

#include "oracles.hpp"
#include "pwlchaos/heteroclinic.hpp"
#include "pwlchaos/io.hpp"
#include "pwlchaos/lab.hpp"
#include "pwlchaos/regions.hpp"

using namespace pwl;

namespace {

int failures = 0;

void report(int n, const char* what, bool ok, const std::string& detail = "") {
  std::printf("criterion %2d (%s): %s%s%s\n", n, what, ok ? "PASS" : "FAIL",
              detail.empty() ? "" : " — ", detail.c_str());
  if (!ok) ++failures;
}

SystemParams params(Variant v, double a, double b, double c, double alpha,
                    double gamma) {
  SystemParams p;
  p.a = a; p.b = b; p.c = c; p.alpha = alpha; p.gamma = gamma; p.variant = v;
  return p;
}

double elapsed(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void criterion1() {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> ua(0.05, 1.0), ub(1.0, 10.0);
  bool ok = true;
  for (int i = 0; i < 100 && ok; ++i) {
    const double a = ua(rng), b = ub(rng);
    std::uniform_real_distribution<double> uc(-10.0, -2.0 * a - 1e-3);
    const double c = uc(rng);
    const PwlSystem sys = build_system(params(Variant::TwoAtom, a, b, c, 1.0, 0.0));
    Matrix3d E = Matrix3d::Zero();
    E(0, 0) = c; E(1, 1) = a; E(1, 2) = -b; E(2, 1) = b; E(2, 2) = a;
    const Matrix3d R = sys.A - sys.frame.Q * E * sys.frame.Qinv;
    ok = ok && R.cwiseAbs().rowwise().sum().maxCoeff() < 1e-12;
    const Vector3d v1 = sys.frame.Q.col(0);
    ok = ok && (sys.A * v1 - c * v1).cwiseAbs().maxCoeff() < 1e-12;
  }
  report(1, "eigenframe exactness", ok);
}

void criterion2() {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> ux(-4.0, 4.0), ut(0.01, 1.0);
  const PwlSystem systems[] = {
      build_system(params(Variant::TwoAtom, 0.2, 5, -3, 1, 0)),
      build_system(params(Variant::FourAtomSlanted, 0.2, 5, -7, 1, 3)),
  };
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const PwlSystem& sys = systems[i % 2];
    const Vector3d x0(ux(rng), ux(rng), ux(rng));
    const int atom = atom_of(sys, x0);
    const double t = ut(rng);
    const double err =
        (flow_in_atom(sys, atom, x0, t) - oracles::rk4_flow(sys, atom, x0, t)).norm();
    worst = std::max(worst, err);
  }
  char d[64];
  std::snprintf(d, sizeof d, "max |closed-form - RK4| = %.2e", worst);
  report(2, "closed form vs oracle", worst < 1e-8, d);
}

void criterion3() {
  const PwlSystem sys = build_system(params(Variant::TwoAtom, 0.2, 5, -3, 1, 0));
  const Vector3d ref(-0.9999976751050959, 0.0, -2.3248949041393315e-6);
  const Vector3d s12 = ho_seed(sys, 1, 2, 50), s21 = ho_seed(sys, 2, 1, 50);
  bool ok = (s12 - ref).cwiseAbs().maxCoeff() < 1e-15 &&
            (s21 + ref).cwiseAbs().maxCoeff() < 1e-15;
  double worst_closure = 0.0;
  for (auto [f, t] : {std::pair{1, 2}, {2, 1}}) {
    const auto chk = verify_heteroclinic(sys, f, t, ho_seed(sys, f, t, 50), 1e-6);
    ok = ok && chk.verified;
    worst_closure = std::max(worst_closure, chk.closure_error);
  }
  char d[64];
  std::snprintf(d, sizeof d, "closure error %.2e", worst_closure);
  report(3, "heteroclinic reproduction", ok && worst_closure < 1e-6, d);
}

void criterion4() {
  const auto gi = gamma_interval(0.2, 5.0, 1.0);
  const bool ok = std::abs(gi.lower - 1.8826170015164836) < 1e-12 &&
                  std::abs(gi.upper - 2.1329942639693464) < 1e-12;
  report(4, "gamma interval", ok);
}

void criterion5() {
  bool ok = true;
  const auto exists = [&](const PwlSystem& sys, int f, int t) {
    return verify_heteroclinic(sys, f, t, ho_seed(sys, f, t, 10), 1e-6 * sys.scale())
        .verified;
  };
  struct Row { double gamma; ConnectionCensus census; bool outer, inner; };
  for (const Row& r : {Row{1.5, ConnectionCensus::FourOrbitsInnerLoop, false, true},
                       Row{2.0, ConnectionCensus::SixOrbits, true, true},
                       Row{3.0, ConnectionCensus::FourOrbitsOuterLoops, true, false}}) {
    const PwlSystem sys =
        build_system(params(Variant::FourAtomSlanted, 0.2, 5, -3, 1, r.gamma));
    ok = ok && classify_structure(sys).census == r.census;
    ok = ok && exists(sys, 1, 2) && exists(sys, 4, 3);
    ok = ok && exists(sys, 2, 1) == r.outer && exists(sys, 3, 4) == r.outer;
    ok = ok && exists(sys, 2, 3) == r.inner && exists(sys, 3, 2) == r.inner;
  }
  report(5, "regime census", ok);
}

void criterion6() {
  SystemParams base = params(Variant::FourAtomSlanted, 0.2, 5, -7, 1, 0);
  const double expected[] = {35, 50, 350, 3090};
  const auto res = transitory_sweep(base, {5, 15, 100, 1000}, Vector3d::Zero());
  bool ok = res.size() == 4;
  std::string d;
  for (size_t i = 0; i < res.size(); ++i) {
    ok = ok && res[i].captured &&
         std::abs(res[i].t_capture - expected[i]) <= 0.30 * expected[i];
    if (i > 0) ok = ok && res[i].t_capture > res[i - 1].t_capture;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%st(%g)=%.0f", i ? ", " : "", res[i].gamma,
                  res[i].t_capture);
    d += buf;
  }
  report(6, "transitory times", ok, d);
}

void criterion7() {
  const auto rep = bound_report(params(Variant::FourAtomSlanted, 0.2, 5, -7, 1, 10));
  bool ok = rep.constants.size() == 13;
  std::string bad;
  for (const auto& c : rep.constants) {
    // agreement at the precision the constant was displayed with: relative
    // error below 5e-4 or rounding to the displayed decimal
    double quantum = 1.0;
    while (std::abs(std::round(c.printed / quantum) * quantum - c.printed) > 1e-12)
      quantum /= 10.0;
    const bool match = std::abs(c.computed - c.printed) / c.printed < 5e-4 ||
                       std::abs(c.computed - c.printed) <= 0.505 * quantum;
    if (!match) {
      ok = false;
      char buf[80];
      std::snprintf(buf, sizeof buf, "%s: computed %.5g vs printed %.5g; ",
                    c.name.c_str(), c.computed, c.printed);
      bad += buf;
    }
  }
  for (const auto& iq : rep.inequalities)
    if (!iq.holds) {
      ok = false;
      bad += iq.text + " violated; ";
    }
  report(7, "bound constants", ok, bad);
}

void criterion8() {
  bool ok = true;
  std::string d;
  for (auto [v, gamma] : {std::pair{Variant::FourAtomSlanted, 10.0},
                          {Variant::FourAtomSlanted, 100.0},
                          {Variant::FourAtomHidden, 10.0}}) {
    const PwlSystem sys = build_system(params(v, 0.2, 5, -7, 1, gamma));
    const auto res = verify_region_mapping(sys, RegionLabel::R1, 7, 200.0, 0);
    ok = ok && res.fraction_unresolved == 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%sunresolved(%s,g=%g)=%.2f", d.empty() ? "" : ", ",
                  v == Variant::FourAtomHidden ? "hidden" : "slanted", gamma,
                  res.fraction_unresolved);
    d += buf;
  }
  report(8, "region mapping", ok, d);
}

void criterion9() {
  const PwlSystem hidden =
      build_system(params(Variant::FourAtomHidden, 0.2, 5, -7, 1, 10));
  const auto hv = hidden_attractor_probe(hidden, 0.01, 50100.0, 8, 0);
  bool ok = hv.persists && hv.seeds_total >= 32 &&
            hv.seeds_captured == hv.seeds_total &&
            hv.verdict == Verdict::HiddenAttractorEvidence;
  const PwlSystem slanted =
      build_system(params(Variant::FourAtomSlanted, 0.2, 5, -7, 1, 10));
  const auto sv = hidden_attractor_probe(slanted, 0.01, 50100.0, 8, 0);
  ok = ok && sv.verdict == Verdict::SelfExcitedOnly;
  char d[128];
  std::snprintf(d, sizeof d,
                "hidden: %s (crossings=%ld, seeds %d/%d); slanted: %s",
                to_string(hv.verdict), hv.final_window_crossings, hv.seeds_captured,
                hv.seeds_total, to_string(sv.verdict));
  report(9, "hidden attractor", ok, d);
}

void criterion10() {
  bool ok = true;
  const PwlSystem sys = build_system(params(Variant::TwoAtom, 0.2, 5, -3, 1, 0));
  std::mt19937 rng(10);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), ut(0.05, 2.0);
  for (int i = 0; i < 50; ++i) {
    const Vector3d x0(ux(rng), ux(rng), ux(rng));
    const int atom = atom_of(sys, x0);
    const double t = ut(rng);
    const ZCoords z0 = to_z(sys, atom, x0);
    const ZCoords zt = to_z(sys, atom, flow_in_atom(sys, atom, x0, t));
    // polar law and z1 decay
    const double r0 = std::hypot(z0.z.y(), z0.z.z());
    ok = ok && std::abs(std::hypot(zt.z.y(), zt.z.z()) -
                        r0 * std::exp(sys.params.a * t)) < 1e-10 * std::max(1.0, r0);
    ok = ok && std::abs(zt.z.x() - z0.z.x() * std::exp(sys.params.c * t)) < 1e-10;
    // time reversibility
    const Vector3d back =
        flow_in_atom(sys, atom, flow_in_atom(sys, atom, x0, t), -t);
    ok = ok && (back - x0).norm() < 1e-9;
  }
  // odd symmetry of census and basins
  const PwlSystem sl = build_system(params(Variant::FourAtomSlanted, 0.2, 5, -7, 1, 3));
  const Vector3d probe = sl.atom(1).equilibrium + Vector3d(0.05, 0.02, 0.0);
  const auto scan = basin_scan(sl, {probe, -probe}, 120.0);
  ok = ok && scan.labels[0] == BasinLabel::Attractor1 &&
       scan.labels[1] == BasinLabel::Attractor2;
  // CSV bit-exact round trip
  const Trajectory traj = integrate(sys, {0.1, 0.0, -0.2}, 8.0, 0.05);
  const std::string path = "/tmp/pwlchaos_acceptance.csv";
  export_trajectory(sys, traj, {0.1, 0.0, -0.2}, 0.05, path);
  const TrajectoryFile tf = parse_trajectory(path);
  const auto flat = traj.flatten();
  ok = ok && tf.samples.size() == flat.size();
  for (size_t i = 0; ok && i < flat.size(); ++i)
    ok = std::get<0>(tf.samples[i]) == flat[i].first &&
         (std::get<1>(tf.samples[i]) - flat[i].second).norm() == 0.0;
  std::remove(path.c_str());
  report(10, "property suites", ok);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("total: %d/10 passed in %.1f s\n", 10 - failures, elapsed(t0));
  return failures == 0 ? 0 : 1;
}
