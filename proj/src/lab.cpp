#include "pwlchaos/lab.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pwl {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::HiddenAttractorEvidence: return "HiddenAttractorEvidence";
    case Verdict::SelfExcitedOnly: return "SelfExcitedOnly";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(BasinLabel l) {
  switch (l) {
    case BasinLabel::Attractor1: return "Attractor1";
    case BasinLabel::Attractor2: return "Attractor2";
    case BasinLabel::HiddenPersistent: return "HiddenPersistent";
    case BasinLabel::Unresolved: return "Unresolved";
  }
  return "?";
}

namespace {

std::vector<std::pair<int, int>> candidate_pairs(const PwlSystem& sys) {
  if (sys.atom_count() == 2) return {{1, 2}};
  return {{1, 2}, {3, 4}};
}

double default_sample_dt(const SystemParams& p) { return 2.0 * M_PI / (8.0 * p.b); }

}  // namespace

std::optional<CaptureResult> detect_capture(const PwlSystem& sys,
                                            const Trajectory& traj,
                                            const CaptureCriterion& crit) {
  if (!(crit.window > 0.0) || !(crit.margin > 0.0))
    throw std::invalid_argument("detect_capture: window and margin must be > 0");
  const auto samples = traj.flatten();
  std::optional<CaptureResult> best;
  for (auto [i, j] : candidate_pairs(sys)) {
    const double lo = sys.atom(i).equilibrium.x() - crit.margin;
    const double hi = sys.atom(j).equilibrium.x() + crit.margin;
    double run_start = -1.0;
    for (const auto& [t, x] : samples) {
      const bool in = x.x() >= lo && x.x() <= hi;
      if (in && run_start < 0.0) run_start = t;
      if (!in) run_start = -1.0;
      if (run_start >= 0.0 && t - run_start >= crit.window) {
        if (!best || run_start < best->t_capture) best = CaptureResult{run_start, {i, j}};
        break;
      }
    }
  }
  return best;
}

std::vector<TransitoryResult> transitory_sweep(const SystemParams& base,
                                               const std::vector<double>& gammas,
                                               const Vector3d& x0) {
  std::vector<TransitoryResult> out;
  for (double g : gammas) {
    SystemParams p = base;
    p.gamma = g;
    if (p.variant == Variant::TwoAtom) p.variant = Variant::FourAtomSlanted;
    const PwlSystem sys = build_system(p);
    TransitoryResult r;
    r.gamma = g;
    // capture times run to a few gamma in a.u.; leave generous headroom so a
    // late capture is still detected rather than flagged as non-capture
    r.horizon = std::max(200.0, 10.0 * g);
    const Trajectory traj = integrate(sys, x0, r.horizon, default_sample_dt(p));
    if (auto cap = detect_capture(sys, traj, CaptureCriterion::defaults(p))) {
      r.captured = true;
      r.t_capture = cap->t_capture;
      r.pair = cap->pair;
    }
    out.push_back(r);
  }
  return out;
}

namespace {

long crossings_in_final_fraction(const Trajectory& traj, double horizon,
                                 PlaneId plane, double fraction) {
  long n = 0;
  for (const auto& ev : traj.events)
    if (ev.plane == plane && ev.t >= (1.0 - fraction) * horizon) ++n;
  return n;
}

std::vector<Vector3d> ball_seeds(const PwlSystem& sys, int eq_index, double eps,
                                 int count, std::mt19937& rng) {
  const Vector3d& eq = sys.atom(eq_index).equilibrium;
  const Vector3d v1 = sys.frame.Q.col(0).normalized();
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vector3d> seeds;
  while (static_cast<int>(seeds.size()) < count) {
    Vector3d d(gauss(rng), gauss(rng), gauss(rng));
    if (d.norm() < 1e-6) continue;
    d.normalize();
    const Vector3d off = eps * d;
    if ((off - off.dot(v1) * v1).norm() < 1e-6) continue;  // on the stable line
    seeds.push_back(eq + off);
  }
  return seeds;
}

}  // namespace

HiddenVerdict hidden_attractor_probe(const PwlSystem& sys, double epsilon,
                                     double horizon, int seeds_per_eq,
                                     unsigned rng_seed) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("hidden_attractor_probe: epsilon must be > 0");
  if (seeds_per_eq < 1)
    throw std::invalid_argument("hidden_attractor_probe: seeds_per_eq must be >= 1");
  if (sys.atom_count() != 4)
    throw std::invalid_argument("hidden_attractor_probe: needs a four-atom system");

  HiddenVerdict v;
  const double dt = default_sample_dt(sys.params);
  {
    const Trajectory origin = integrate(sys, Vector3d::Zero(), horizon, dt);
    v.final_window_crossings =
        crossings_in_final_fraction(origin, horizon, PlaneId::SW23, 0.10);
    v.persists = v.final_window_crossings >= 10;
  }

  std::mt19937 rng(rng_seed);
  const double seed_horizon = std::max(200.0, 4.0 * sys.params.gamma);
  const CaptureCriterion crit = CaptureCriterion::defaults(sys.params);
  for (int i = 1; i <= sys.atom_count(); ++i) {
    for (const Vector3d& s : ball_seeds(sys, i, epsilon, seeds_per_eq, rng)) {
      ++v.seeds_total;
      const Trajectory traj = integrate(sys, s, seed_horizon, dt);
      if (detect_capture(sys, traj, crit)) ++v.seeds_captured;
    }
  }
  v.equilibrium_basins_disjoint = v.seeds_captured == v.seeds_total;
  if (!v.equilibrium_basins_disjoint)
    v.verdict = Verdict::Inconclusive;
  else
    v.verdict = v.persists ? Verdict::HiddenAttractorEvidence : Verdict::SelfExcitedOnly;
  return v;
}

BasinScan basin_scan(const PwlSystem& sys, const std::vector<Vector3d>& seeds,
                     double horizon) {
  BasinScan scan;
  scan.seeds = seeds;
  scan.labels.reserve(seeds.size());
  const double dt = default_sample_dt(sys.params);
  const CaptureCriterion crit = CaptureCriterion::defaults(sys.params);
  for (const Vector3d& s : seeds) {
    const Trajectory traj = integrate(sys, s, horizon, dt);
    if (auto cap = detect_capture(sys, traj, crit)) {
      scan.labels.push_back(cap->pair.first == 1 ? BasinLabel::Attractor1
                                                 : BasinLabel::Attractor2);
    } else if (crossings_in_final_fraction(traj, horizon, PlaneId::SW23, 0.10) >= 2) {
      scan.labels.push_back(BasinLabel::HiddenPersistent);
    } else {
      scan.labels.push_back(BasinLabel::Unresolved);
    }
  }
  return scan;
}

}  // namespace pwl
