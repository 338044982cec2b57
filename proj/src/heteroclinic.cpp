#include "pwlchaos/heteroclinic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pwl {

namespace {

const SwitchPlane& shared_plane(const PwlSystem& sys, int lo_atom) {
  // atoms i and i+1 share planes[i-1]
  return sys.planes.at(static_cast<size_t>(lo_atom - 1));
}

void check_adjacent(const PwlSystem& sys, int from_atom, int to_atom) {
  if (from_atom < 1 || from_atom > sys.atom_count() || to_atom < 1 ||
      to_atom > sys.atom_count() || std::abs(from_atom - to_atom) != 1)
    throw std::invalid_argument("heteroclinic: atoms must be adjacent");
}

Vector3d stable_line_hit(const PwlSystem& sys, int eq_index, const SwitchPlane& plane) {
  const Vector3d& eq = sys.atom(eq_index).equilibrium;
  const Vector3d v1 = sys.frame.Q.col(0);
  const double denom = plane.normal.dot(v1);
  const double s = (plane.offset - plane.normal.dot(eq)) / denom;
  return eq + s * v1;
}

}  // namespace

std::vector<IntersectionPoint> intersection_points(const PwlSystem& sys) {
  std::vector<IntersectionPoint> out;
  for (int i = 1; i < sys.atom_count(); ++i) {
    const SwitchPlane& pl = shared_plane(sys, i);
    out.push_back({i, i + 1, pl.id, stable_line_hit(sys, i + 1, pl)});
    out.push_back({i + 1, i, pl.id, stable_line_hit(sys, i, pl)});
  }
  return out;
}

Vector3d ho_seed(const PwlSystem& sys, int from_atom, int to_atom, int k) {
  check_adjacent(sys, from_atom, to_atom);
  if (k < 0) throw std::invalid_argument("ho_seed: k must be >= 0");
  const Vector3d& eq_from = sys.atom(from_atom).equilibrium;
  const Vector3d& eq_to = sys.atom(to_atom).equilibrium;
  const double D = std::abs(eq_to.x() - eq_from.x());
  const double dir = eq_to.x() > eq_from.x() ? -1.0 : 1.0;
  const double z30 =
      dir * (D / 3.0) * std::exp(-2.0 * k * M_PI * sys.params.a / sys.params.b);
  return eq_from + z30 * sys.frame.Q.col(2);
}

HeteroclinicCheck verify_heteroclinic(const PwlSystem& sys, int from_atom,
                                      int to_atom, const Vector3d& x0, double tol,
                                      double t_max) {
  check_adjacent(sys, from_atom, to_atom);
  const Vector3d& eq_from = sys.atom(from_atom).equilibrium;
  const Vector3d n(1.0, 0.0, 1.0);
  if (std::abs(n.dot(x0 - eq_from)) > 1e-12 * sys.scale())
    throw std::invalid_argument(
        "verify_heteroclinic: x0 is not on the unstable plane of from_atom");

  const SwitchPlane& pl = shared_plane(sys, std::min(from_atom, to_atom));
  const Vector3d target = stable_line_hit(sys, to_atom, pl);

  if (t_max <= 0.0) {
    // seed amplitude grows like e^{at}; allow ample slack past the estimate
    const double r0 =
        std::max((sys.frame.Qinv * (x0 - eq_from)).norm(), 1e-300);
    t_max = 4.0 * (std::log(sys.scale() / r0) / sys.params.a +
                   2.0 * M_PI / sys.params.b);
    t_max = std::max(t_max, 8.0 * M_PI / sys.params.b);
  }

  HeteroclinicCheck res;
  res.closure_error = std::numeric_limits<double>::infinity();
  Vector3d x = x0;
  int atom = from_atom;
  double t = 0.0;
  while (t < t_max) {
    CrossingSearch s = first_crossing(sys, atom, x, t_max - t, Direction::Forward);
    if (!s.event) break;
    t += s.event->t;
    if (s.event->plane == pl.id && s.event->to_atom == to_atom) {
      const double d = (s.event->x - target).norm();
      if (d < res.closure_error) {
        res.closure_error = d;
        res.arrival = *s.event;
        res.arrival->t = t;
        res.t_flight = t;
      }
      if (d <= tol) {
        res.verified = true;
        return res;
      }
    }
    if (s.event->to_atom == s.event->from_atom) {
      const double nu = M_PI / (128.0 * sys.params.b) * 1e-2;
      x = flow_in_atom(sys, atom, x, s.event->t + nu);
      t += nu;
      atom = atom_of(sys, x);
    } else {
      x = s.event->x;
      atom = s.event->to_atom;
    }
  }
  if (!std::isfinite(res.closure_error)) res.closure_error = -1.0;
  return res;
}

GammaInterval gamma_interval(double a, double b, double alpha) {
  if (a <= 0.0 || b <= 0.0 || alpha <= 0.0)
    throw std::invalid_argument("gamma_interval: a, b, alpha must be > 0");
  GammaInterval g;
  g.tau = (std::atan(b / a) + M_PI / 2.0) / b;
  const double E = std::exp(-a * g.tau) * std::cos(b * g.tau);  // E < 0 here
  g.lower = alpha * (1.0 - E);
  g.upper = alpha * (E - 1.0) / E;
  return g;
}

StructureClassification classify_structure(const PwlSystem& sys) {
  if (sys.params.variant == Variant::TwoAtom)
    throw std::invalid_argument("classify_structure: needs a four-atom system");
  StructureClassification cls;
  cls.interval = gamma_interval(sys.params.a, sys.params.b, sys.params.alpha);
  const double g = sys.params.gamma;
  cls.degenerate = std::abs(g - cls.interval.lower) < 1e-9 * sys.scale() ||
                   std::abs(g - cls.interval.upper) < 1e-9 * sys.scale();
  if (g < cls.interval.lower)
    cls.census = ConnectionCensus::FourOrbitsInnerLoop;
  else if (g > cls.interval.upper)
    cls.census = ConnectionCensus::FourOrbitsOuterLoops;
  else
    cls.census = ConnectionCensus::SixOrbits;
  return cls;
}

}  // namespace pwl
