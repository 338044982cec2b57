#include "pwlchaos/regions.hpp"

#include <cmath>
#include <iostream>
#include <random>
#include <stdexcept>

#include "pwlchaos/lab.hpp"

namespace pwl {

namespace {

const SwitchPlane& plane_by_id(const PwlSystem& sys, PlaneId id) {
  for (const SwitchPlane& p : sys.planes)
    if (p.id == id) return p;
  throw std::invalid_argument("plane not present in this system");
}

void require_four_atoms(const PwlSystem& sys, const char* who) {
  if (sys.atom_count() != 4)
    throw std::invalid_argument(std::string(who) + ": needs a four-atom system");
}

}  // namespace

std::vector<TangencyLine> tangency_lines(const PwlSystem& sys, PlaneId plane_id) {
  require_four_atoms(sys, "tangency_lines");
  const SwitchPlane& pl = plane_by_id(sys, plane_id);
  const int lo = static_cast<int>(plane_id) + 1;
  std::vector<TangencyLine> out;
  for (int atom : {lo, lo + 1}) {
    const Vector3d& eq = sys.atom(atom).equilibrium;
    const Vector3d n = pl.normal;
    const Vector3d m = sys.A.transpose() * n;  // field = A(x - eq) in every atom
    Eigen::Matrix<double, 2, 3> N;
    N.row(0) = n.transpose();
    N.row(1) = m.transpose();
    Eigen::Vector2d rhs(pl.offset, m.dot(eq));
    const Vector3d point = N.transpose() * (N * N.transpose()).inverse() * rhs;
    out.push_back({plane_id, atom, point, n.cross(m).normalized()});
  }
  return out;
}

std::map<std::string, Vector3d> key_points(const PwlSystem& sys) {
  require_four_atoms(sys, "key_points");
  const double a = sys.params.a, b = sys.params.b;
  const double al = sys.params.alpha, ga = sys.params.gamma;
  std::map<std::string, Vector3d> k;
  if (sys.params.variant == Variant::FourAtomSlanted) {
    const Vector3d pa(-(ga - al) / 3.0, 0.0, -2.0 * (ga - al) / 3.0);
    const Vector3d pt1(-(ga - al) / 3.0, -2.0 * a * (ga - al) / (3.0 * b),
                       -2.0 * (ga - al) / 3.0);
    k["pa"] = pa;
    k["pb"] = Vector3d(al / 3.0 - ga, 0.0, 2.0 * al / 3.0);
    k["pc"] = -pa;
    k["pt1"] = pt1;
    k["pa1"] = pa + Vector3d(0.0, 3.0 * ga / 5.0, 0.0);
    k["pa2"] = pt1;
  } else {
    const Vector3d pt1(0.0, -a * (ga - al) / b, -(ga - al));
    k["pt1"] = pt1;
    k["pi1"] = Vector3d(0.0, 4.0 * ga / 5.0, -(ga - al));
    k["pi2"] = pt1;
  }
  return k;
}

bool region_regime_ok(const SystemParams& p) {
  const double cb = std::abs(p.c / p.b);
  return p.b / p.a >= 25.0 && cb >= 1.4 && cb <= 2.0 && p.gamma / p.alpha >= 10.0;
}

Region region(const PwlSystem& sys, RegionLabel label) {
  require_four_atoms(sys, "region");
  if (!region_regime_ok(sys.params))
    std::cerr << "region: parameters outside the b/a >= 25, 1.4 <= |c/b| <= 2, "
                 "gamma/alpha >= 10 regime; corners may not bound the transit set\n";
  const double a = sys.params.a, b = sys.params.b, c = sys.params.c;
  const double ga = sys.params.gamma;
  const auto kp = key_points(sys);
  Region r;
  r.plane = PlaneId::SW23;
  r.label = RegionLabel::R1;
  if (sys.params.variant == Variant::FourAtomSlanted) {
    const Vector3d& pa1 = kp.at("pa1");
    const Vector3d& pa2 = kp.at("pa2");
    const double slope = -(c - a) / (2.0 * b);  // tangency-line x2 per unit x3
    r.corners[0] = pa1 + Vector3d(ga / 10.0, 0.0, ga / 5.0);
    r.corners[1] = pa1 - Vector3d(ga / 10.0, 0.0, ga / 5.0);
    r.corners[2] = pa2 + Vector3d(-ga / 10.0, slope * (-ga / 5.0), -ga / 5.0);
    r.corners[3] = pa2 + Vector3d(ga / 10.0, slope * (ga / 5.0), ga / 5.0);
  } else {
    const Vector3d& pi1 = kp.at("pi1");
    const Vector3d& pi2 = kp.at("pi2");
    const double slope = -(2.0 * c - 2.0 * a) / (3.0 * b);
    r.corners[0] = pi1 + Vector3d(0.0, 0.0, ga / 5.0);
    r.corners[1] = pi1 - Vector3d(0.0, 0.0, ga / 5.0);
    r.corners[2] = pi2 + Vector3d(0.0, slope * (-ga / 5.0), -ga / 5.0);
    r.corners[3] = pi2 + Vector3d(0.0, slope * (ga / 5.0), ga / 5.0);
  }
  if (label == RegionLabel::R2) {
    r.label = RegionLabel::R2;
    for (auto& corner : r.corners) corner = -corner;
  }
  return r;
}

namespace {

// Membership in the quad, tested in the (x2, x3) chart of the plane.
bool in_quad(const Region& r, const Vector3d& x, double tol) {
  double first = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Vector3d& p = r.corners[static_cast<size_t>(i)];
    const Vector3d& q = r.corners[static_cast<size_t>((i + 1) % 4)];
    const double cr = (q.y() - p.y()) * (x.z() - p.z()) - (q.z() - p.z()) * (x.y() - p.y());
    if (std::abs(cr) <= tol) continue;
    if (first == 0.0)
      first = cr;
    else if ((cr < 0.0) != (first < 0.0))
      return false;
  }
  return true;
}

Vector3d bilinear(const Region& r, double u, double v) {
  return (1.0 - u) * (1.0 - v) * r.corners[0] + u * (1.0 - v) * r.corners[1] +
         u * v * r.corners[2] + (1.0 - u) * v * r.corners[3];
}

}  // namespace

RegionMappingResult verify_region_mapping(const PwlSystem& sys, RegionLabel label,
                                          int n_samples, double horizon,
                                          unsigned rng_seed) {
  require_four_atoms(sys, "verify_region_mapping");
  if (n_samples < 1)
    throw std::invalid_argument("verify_region_mapping: n_samples must be >= 1");
  const Region start = region(sys, label);
  const Region mirror = region(sys, label == RegionLabel::R1 ? RegionLabel::R2
                                                             : RegionLabel::R1);
  const double tol = 1e-9 * sys.scale();
  std::mt19937 rng(rng_seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double dt = 2.0 * M_PI / (8.0 * sys.params.b);
  const CaptureCriterion crit = CaptureCriterion::defaults(sys.params);

  RegionMappingResult res;
  res.n_samples = n_samples;
  int to_region = 0, to_attractor = 0;
  for (int s = 0; s < n_samples; ++s) {
    const Vector3d x0 = bilinear(start, uni(rng), uni(rng));
    const Trajectory traj = integrate(sys, x0, horizon, dt);
    bool resolved = false;
    for (const CrossingEvent& ev : traj.events) {
      if (ev.plane != PlaneId::SW23 || ev.t < 1e-6) continue;
      if (in_quad(mirror, ev.x, tol) || in_quad(start, ev.x, tol)) {
        ++to_region;
        resolved = true;
        break;
      }
    }
    if (!resolved && detect_capture(sys, traj, crit)) {
      ++to_attractor;
      resolved = true;
    }
    (void)resolved;
  }
  res.fraction_to_other_region = static_cast<double>(to_region) / n_samples;
  res.fraction_to_self_excited = static_cast<double>(to_attractor) / n_samples;
  res.fraction_unresolved = 1.0 - res.fraction_to_other_region - res.fraction_to_self_excited;
  return res;
}

BoundReport bound_report(const SystemParams& p) {
  const double a = p.a, b = p.b, c = p.c;
  const auto deg = [&](double d) { return d * M_PI / 180.0; };
  BoundReport r;
  auto add = [&r](const char* name, double computed, double printed) {
    r.constants.push_back({name, computed, printed});
  };
  // slanted-surface chain
  const double f23 = 2.0 / 3.0;
  add("r_360deg", std::sqrt(std::pow(f23 * std::exp(2.0 * a * M_PI / b), 2) - f23 * f23),
      0.5388);
  add("z1_180deg", (4.0 / 3.0) * std::exp(c * M_PI / b), 0.0164);
  add("z1_170.5deg", (23.0 / 15.0) * std::exp(c * deg(170.5377) / b), 0.0238);
  add("z1_90deg", (23.0 / 15.0) * std::exp(c * M_PI / (2.0 * b)), 0.17);
  // the 270-degree radius: the displayed exponent a*3pi/4b is inconsistent
  // with the stated 270-degree duration (= a*3pi/2b); the duration is used
  add("r_270deg", std::exp(a * 3.0 * M_PI / (2.0 * b)) *
                      std::hypot(173.0 / 750.0, 1.0 / 10.0),
      0.3036);
  add("r_279.5deg", std::sqrt(37.0 / 100.0) * std::exp(a * deg(279.4623) / b), 0.7393);
  add("r_min_R1", std::hypot(3.0 / 5.0, 1.0 / 2.0), 0.781);
  // relocated-surface chain
  add("z2_360deg", std::sqrt(std::exp(4.0 * a * M_PI / b) - 1.0), 0.80815);
  add("z1_149.7deg", (22.0 / 15.0) * std::exp(c * deg(149.7435) / b), 0.0378);
  add("r_200deg", std::exp(a * 20.0 * M_PI / (18.0 * b)) *
                      std::hypot((2.0 * c - 17.0 * a) / (15.0 * b), 7.0 / 15.0),
      0.5984);
  add("z1_120deg", (22.0 / 15.0) * std::exp(c * 12.0 * M_PI / (18.0 * b)), 0.07814);
  add("r_258.2deg", std::sqrt(193.0 / 225.0) * std::exp(a * deg(258.2317) / b), 1.1091);
  add("r_min_R1_relocated", std::hypot(4.0 / 5.0, 23.0 / 30.0), 1.1081);

  const auto k = [&r](const char* name) -> double {
    for (const auto& bc : r.constants)
      if (bc.name == name) return bc.computed;
    return 0.0;
  };
  auto lt = [&r](std::string text, double lhs, double rhs) {
    r.inequalities.push_back({std::move(text), lhs, rhs, lhs < rhs});
  };
  lt("r_360deg < 3/5", k("r_360deg"), 3.0 / 5.0);
  lt("z1_180deg < 1/5", k("z1_180deg"), 1.0 / 5.0);
  lt("z1_170.5deg < 1/5", k("z1_170.5deg"), 1.0 / 5.0);
  lt("z1_90deg < 1/5", k("z1_90deg"), 1.0 / 5.0);
  lt("-18/30 + z1_90deg/2 < -r_270deg", -18.0 / 30.0 + k("z1_90deg") / 2.0,
     -k("r_270deg"));
  lt("r_279.5deg < r_min_R1", k("r_279.5deg"), k("r_min_R1"));
  lt("|z2_360deg - 4/5| < 0.01", std::abs(k("z2_360deg") - 4.0 / 5.0), 0.01);
  lt("z1_149.7deg < 2/15", k("z1_149.7deg"), 2.0 / 15.0);
  lt("-9/10 + z1_120deg < -r_200deg", -9.0 / 10.0 + k("z1_120deg"), -k("r_200deg"));
  lt("z1_120deg < 2/15", k("z1_120deg"), 2.0 / 15.0);
  lt("|r_258.2deg - r_min_R1_relocated| < 0.002",
     std::abs(k("r_258.2deg") - k("r_min_R1_relocated")), 0.002);
  return r;
}

PlanarTrajectory hysteresis_companion(double a, double b, double k_gain,
                                      double l1, double l2, double d1, double d2,
                                      double t_end) {
  if (!(b > 0.0) || !(t_end > 0.0))
    throw std::invalid_argument("hysteresis_companion: b and t_end must be > 0");
  PlanarTrajectory out;
  const int n_steps = 4096;
  const double h = t_end / n_steps;
  const auto rotate = [&](const Eigen::Vector2d& v, double s) {
    const double g = std::exp(a * s), cs = std::cos(b * s), sn = std::sin(b * s);
    return Eigen::Vector2d(g * (cs * v.x() - sn * v.y()),
                           g * (sn * v.x() + cs * v.y()));
  };
  double f = d2;  // start rotating about the inner center, like the k=0 run
  Eigen::Vector2d anchor(0.0, l1);
  double t_anchor = 0.0;
  Eigen::Vector2d center(0.0, k_gain * f);
  out.samples.emplace_back(0.0, anchor);
  double prev_x2 = anchor.y();
  for (int i = 1; i <= n_steps; ++i) {
    const double t = i * h;
    Eigen::Vector2d x = center + rotate(anchor - center, t - t_anchor);
    const bool rise = f == d2 && prev_x2 <= l2 && x.y() > l2;
    const bool fall = f == d1 && prev_x2 >= l1 && x.y() < l1;
    if (rise || fall) {
      const double thr = rise ? l2 : l1;
      double slo = t - h - t_anchor, shi = t - t_anchor;
      for (int it = 0; it < 80; ++it) {  // bracket the threshold crossing
        const double sm = 0.5 * (slo + shi);
        const double y = (center + rotate(anchor - center, sm)).y();
        if ((y > thr) == rise)
          shi = sm;
        else
          slo = sm;
      }
      const double s_cross = 0.5 * (slo + shi);
      anchor = center + rotate(anchor - center, s_cross);
      t_anchor += s_cross;
      f = rise ? d1 : d2;
      center = Eigen::Vector2d(0.0, k_gain * f);
      out.switch_times.push_back(t_anchor);
      x = center + rotate(anchor - center, t - t_anchor);
    }
    out.samples.emplace_back(t, x);
    prev_x2 = x.y();
  }
  return out;
}

}  // namespace pwl
