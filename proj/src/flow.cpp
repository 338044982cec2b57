#include "pwlchaos/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pwl {

ZCoords to_z(const PwlSystem& sys, int atom, const Vector3d& x) {
  return {sys.frame.Qinv * (x - sys.atom(atom).equilibrium), atom};
}

Vector3d from_z(const PwlSystem& sys, const ZCoords& zc) {
  return sys.frame.Q * zc.z + sys.atom(zc.atom).equilibrium;
}

Vector3d flow_in_atom(const PwlSystem& sys, int atom, const Vector3d& x0, double t) {
  const Vector3d& eq = sys.atom(atom).equilibrium;
  return eq + sys.frame.Q * (sys.frame.propagator(t) * (sys.frame.Qinv * (x0 - eq)));
}

namespace {

// Closed-form evaluation with the equilibrium-relative state factored out,
// so scanning many times along one segment stays cheap.
struct SegmentFlow {
  const PwlSystem& sys;
  Vector3d eq;
  Vector3d z0;
  double sign;  // +1 forward, -1 backward

  SegmentFlow(const PwlSystem& s, int atom, const Vector3d& x0, Direction dir)
      : sys(s), eq(s.atom(atom).equilibrium),
        z0(s.frame.Qinv * (x0 - eq)),
        sign(dir == Direction::Forward ? 1.0 : -1.0) {}

  Vector3d at(double tau) const {  // tau >= 0 is elapsed |time|
    return eq + sys.frame.Q * (sys.frame.propagator(sign * tau) * z0);
  }
};

double bisect_root(const SegmentFlow& seg, const SwitchPlane& plane, double lo,
                   double hi, double glo, double tol_g) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = plane.signed_value(seg.at(mid));
    if (std::abs(gm) < tol_g || (hi - lo) < 1e-15 * std::max(1.0, hi)) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CrossingSearch first_crossing(const PwlSystem& sys, int atom, const Vector3d& x0,
                              double t_max, Direction dir) {
  CrossingSearch result;
  if (t_max <= 0.0) return result;

  const double scale = sys.scale();
  const double tol_g = 1e-12 * scale;      // root refinement target
  const double on_plane = 1e-9 * scale;    // membership band around a plane
  const double graze_tol = 1e-8 * scale;
  const double dt = M_PI / (128.0 * sys.params.b);  // 1/256 rotation period

  const SegmentFlow seg(sys, atom, x0, dir);
  const auto planes = sys.bounding_planes(atom);
  const size_t np = planes.size();

  struct PlaneState {
    double ref;        // interior sign at the atom's equilibrium
    double g_prev = 0.0;
    double g_prev2 = 0.0;
    bool armed = false;  // false while still inside the on-plane band
  };
  std::vector<PlaneState> st(np);
  const Vector3d& eq = sys.atom(atom).equilibrium;
  for (size_t i = 0; i < np; ++i) {
    st[i].ref = planes[i]->signed_value(eq) < 0.0 ? -1.0 : 1.0;
    const double g0 = planes[i]->signed_value(x0);
    st[i].g_prev = g0;
    st[i].g_prev2 = g0;
    st[i].armed = std::abs(g0) > on_plane;
  }

  double tau_prev = 0.0;
  for (double tau = dt; tau_prev < t_max; tau += dt) {
    tau = std::min(tau, t_max);
    const Vector3d x = seg.at(tau);

    double best_root = -1.0;
    size_t best_plane = 0;
    for (size_t i = 0; i < np; ++i) {
      const double g = planes[i]->signed_value(x);
      PlaneState& s = st[i];
      if (!s.armed) {
        if (std::abs(g) > on_plane) {
          s.armed = true;
          if ((g < 0.0) != (s.ref < 0.0)) {
            // left through the start plane before clearing the band
            double root = tau;
            if ((s.g_prev < 0.0) == (s.ref < 0.0) && s.g_prev != 0.0)
              root = bisect_root(seg, *planes[i], tau_prev, tau, s.g_prev, tol_g);
            if (best_root < 0.0 || root < best_root) {
              best_root = root;
              best_plane = i;
            }
          }
          s.g_prev2 = s.g_prev;
          s.g_prev = g;
        }
        continue;
      }
      if (g == 0.0 || (g < 0.0) != (s.g_prev < 0.0)) {
        double root = bisect_root(seg, *planes[i], tau_prev, tau, s.g_prev, tol_g);
        if (root > 1e-12 && (best_root < 0.0 || root < best_root)) {
          best_root = root;
          best_plane = i;
        } else if (root <= best_root + 1e-13 && best_root >= 0.0 &&
                   planes[i]->id < planes[best_plane]->id) {
          best_plane = i;  // exact tie: lower plane id wins
        }
      } else if (std::abs(s.g_prev) < graze_tol && std::abs(s.g_prev) <= std::abs(g) &&
                 std::abs(s.g_prev) <= std::abs(s.g_prev2)) {
        result.grazing = true;  // local |g| minimum inside tolerance, no sign change
      }
      s.g_prev2 = s.g_prev;
      s.g_prev = g;
    }

    if (best_root >= 0.0) {
      const SwitchPlane& plane = *planes[best_plane];
      CrossingEvent ev;
      ev.t = seg.sign * best_root;
      ev.x = seg.at(best_root);
      ev.plane = plane.id;
      ev.from_atom = atom;
      // classify just past the crossing with the current atom's closed form
      const double nu = dt * 1e-2;
      ev.to_atom = atom_of(sys, seg.at(best_root + nu));
      result.event = ev;
      return result;
    }
    tau_prev = tau;
  }
  return result;
}

std::vector<std::pair<double, Vector3d>> Trajectory::flatten() const {
  std::vector<std::pair<double, Vector3d>> out;
  for (const Segment& seg : segments) {
    for (const auto& s : seg.samples) {
      if (!out.empty() && s.first <= out.back().first) continue;
      out.push_back(s);
    }
  }
  return out;
}

Trajectory integrate(const PwlSystem& sys, const Vector3d& x0, double t_end,
                     double sample_dt) {
  if (!(t_end > 0.0)) throw std::invalid_argument("integrate: t_end must be > 0");
  if (!(sample_dt > 0.0)) throw std::invalid_argument("integrate: sample_dt must be > 0");

  Trajectory traj;
  Vector3d x_cur = x0;
  int atom = atom_of(sys, x_cur);
  double t_cur = 0.0;
  const double nu = M_PI / (128.0 * sys.params.b) * 1e-2;
  constexpr size_t kMaxEvents = 1000000;

  while (t_cur < t_end) {
    const double remaining = t_end - t_cur;
    CrossingSearch search = first_crossing(sys, atom, x_cur, remaining, Direction::Forward);
    traj.grazed = traj.grazed || search.grazing;
    const double seg_len = search.event ? search.event->t : remaining;

    Trajectory::Segment seg;
    seg.atom = atom;
    seg.samples.emplace_back(t_cur, x_cur);
    long m = static_cast<long>(std::floor(t_cur / sample_dt)) + 1;
    for (; m * sample_dt < t_cur + seg_len; ++m) {
      const double ts = m * sample_dt;
      if (ts <= t_cur) continue;
      seg.samples.emplace_back(ts, flow_in_atom(sys, atom, x_cur, ts - t_cur));
    }
    const double t_seg_end = t_cur + seg_len;
    const Vector3d x_seg_end =
        search.event ? search.event->x : flow_in_atom(sys, atom, x_cur, seg_len);
    if (seg.samples.back().first < t_seg_end) seg.samples.emplace_back(t_seg_end, x_seg_end);
    traj.segments.push_back(std::move(seg));

    if (!search.event) break;

    CrossingEvent ev = *search.event;
    ev.t = t_seg_end;  // absolute time in the trajectory record
    traj.events.push_back(ev);
    if (traj.events.size() > kMaxEvents)
      throw std::runtime_error("integrate: event storm (>1e6 crossings), sliding/chatter suspected");

    if (ev.to_atom == ev.from_atom) {
      // degenerate nudge (tangency); step just past the event to make progress
      x_cur = flow_in_atom(sys, atom, x_cur, seg_len + nu);
      t_cur = t_seg_end + nu;
      atom = atom_of(sys, x_cur);
    } else {
      x_cur = ev.x;
      t_cur = t_seg_end;
      atom = ev.to_atom;
    }
  }
  traj.t_total = t_end;
  return traj;
}

}  // namespace pwl
