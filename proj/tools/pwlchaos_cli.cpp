#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "pwlchaos/heteroclinic.hpp"
#include "pwlchaos/io.hpp"
#include "pwlchaos/lab.hpp"
#include "pwlchaos/regions.hpp"

using namespace pwl;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kValidationError = 3;
constexpr int kUnresolved = 4;

struct Out {
  std::ostringstream report;

  template <typename T>
  Out& operator<<(const T& v) {
    std::cout << v;
    report << v;
    return *this;
  }
};

void write_report(const RunConfig& cfg, const Out& out) {
  if (cfg.out_report.empty()) return;
  std::ofstream f(cfg.out_report);
  if (!f) throw std::runtime_error("cannot write report file: " + cfg.out_report);
  f << out.report.str();
}

void maybe_export(const RunConfig& cfg, const PwlSystem& sys, const Trajectory& traj,
                  const Vector3d& seed, Projection proj,
                  const std::vector<Region>& outlines = {}) {
  if (!cfg.out_csv.empty())
    export_trajectory(sys, traj, seed, cfg.effective_sample_dt(), cfg.out_csv);
  if (!cfg.out_plot.empty()) emit_plot(sys, traj, proj, cfg.out_plot, outlines);
}

int run_simulate(const RunConfig& cfg, Projection proj) {
  const PwlSystem sys = build_system(cfg.params);
  const Vector3d seed = cfg.seeds.empty() ? Vector3d::Zero() : cfg.seeds.front();
  const Trajectory traj = integrate(sys, seed, cfg.horizon, cfg.effective_sample_dt());
  Out out;
  out << "simulate: t=" << cfg.horizon << " events=" << traj.events.size()
      << " segments=" << traj.segments.size() << (traj.grazed ? " (grazing seen)" : "")
      << "\n";
  maybe_export(cfg, sys, traj, seed, proj);
  write_report(cfg, out);
  return kOk;
}

int run_heteroclinic(const RunConfig& cfg, Projection proj) {
  const PwlSystem sys = build_system(cfg.params);
  const Vector3d x0 = cfg.seeds.empty()
                          ? ho_seed(sys, cfg.from_atom, cfg.to_atom, cfg.k)
                          : cfg.seeds.front();
  const auto chk = verify_heteroclinic(sys, cfg.from_atom, cfg.to_atom, x0,
                                       1e-6 * sys.scale());
  Out out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "seed: (%.17g, %.17g, %.17g)\n", x0.x(), x0.y(), x0.z());
  out << buf;
  std::snprintf(buf, sizeof buf,
                "connection %d->%d: %s closure_error=%.3e t_flight=%.6g\n",
                cfg.from_atom, cfg.to_atom, chk.verified ? "verified" : "NOT verified",
                chk.closure_error, chk.t_flight);
  out << buf;
  if (!cfg.out_csv.empty() || !cfg.out_plot.empty()) {
    const Trajectory traj = integrate(sys, x0, chk.verified ? chk.t_flight : cfg.horizon,
                                      cfg.effective_sample_dt());
    maybe_export(cfg, sys, traj, x0, proj);
  }
  write_report(cfg, out);
  return chk.verified ? kOk : kUnresolved;
}

int run_gamma_interval(const RunConfig& cfg) {
  const auto gi = gamma_interval(cfg.params.a, cfg.params.b, cfg.params.alpha);
  Out out;
  char buf[120];
  std::snprintf(buf, sizeof buf, "gamma_L=%.16g\ngamma_U=%.16g\ntau=%.16g\n", gi.lower,
                gi.upper, gi.tau);
  out << buf;
  write_report(cfg, out);
  return kOk;
}

int run_classify(const RunConfig& cfg) {
  const PwlSystem sys = build_system(cfg.params);
  const auto cls = classify_structure(sys);
  Out out;
  const char* name = cls.census == ConnectionCensus::SixOrbits ? "SixOrbits"
                     : cls.census == ConnectionCensus::FourOrbitsInnerLoop
                         ? "FourOrbitsInnerLoop"
                         : "FourOrbitsOuterLoops";
  out << "census=" << name << " gamma=" << cfg.params.gamma << " interval=("
      << cls.interval.lower << ", " << cls.interval.upper << ")"
      << (cls.degenerate ? " [degenerate]" : "") << "\n";
  write_report(cfg, out);
  return kOk;
}

int run_regions(const RunConfig& cfg) {
  const PwlSystem sys = build_system(cfg.params);
  const RegionLabel label = cfg.region_label == "R2" ? RegionLabel::R2 : RegionLabel::R1;
  const Region r1 = region(sys, RegionLabel::R1);
  const Region r2 = region(sys, RegionLabel::R2);
  Out out;
  for (const Region* r : {&r1, &r2}) {
    out << (r->label == RegionLabel::R1 ? "R1" : "R2") << " corners:\n";
    for (const auto& c : r->corners) {
      char buf[120];
      std::snprintf(buf, sizeof buf, "  (%.12g, %.12g, %.12g)\n", c.x(), c.y(), c.z());
      out << buf;
    }
  }
  const auto res =
      verify_region_mapping(sys, label, cfg.n_samples, cfg.horizon, cfg.rng_seed);
  out << "mapping from " << cfg.region_label << ": to_region="
      << res.fraction_to_other_region << " to_self_excited=" << res.fraction_to_self_excited
      << " unresolved=" << res.fraction_unresolved << " (n=" << res.n_samples << ")\n";
  write_report(cfg, out);
  return res.fraction_unresolved > 0.0 ? kUnresolved : kOk;
}

int run_bounds(const RunConfig& cfg) {
  const auto rep = bound_report(cfg.params);
  Out out;
  bool all = true;
  out << "bound constants (coefficient of gamma):\n";
  for (const auto& c : rep.constants) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "  %-22s computed=%.7g printed=%.5g\n",
                  c.name.c_str(), c.computed, c.printed);
    out << buf;
  }
  out << "inequalities:\n";
  for (const auto& iq : rep.inequalities) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-44s %.6g vs %.6g  %s\n", iq.text.c_str(),
                  iq.lhs, iq.rhs, iq.holds ? "holds" : "VIOLATED");
    out << buf;
    all = all && iq.holds;
  }
  write_report(cfg, out);
  return all ? kOk : kUnresolved;
}

int run_transitory(const RunConfig& cfg) {
  const Vector3d x0 = cfg.seeds.empty() ? Vector3d::Zero() : cfg.seeds.front();
  const auto results = transitory_sweep(cfg.params, cfg.gamma_list, x0);
  Out out;
  bool all = true;
  for (const auto& r : results) {
    char buf[160];
    if (r.captured)
      std::snprintf(buf, sizeof buf,
                    "gamma=%-8g t_capture=%.6g a.u. pair=(%d,%d) horizon=%g\n", r.gamma,
                    r.t_capture, r.pair.first, r.pair.second, r.horizon);
    else
      std::snprintf(buf, sizeof buf, "gamma=%-8g NOT captured within %g a.u.\n",
                    r.gamma, r.horizon);
    out << buf;
    all = all && r.captured;
  }
  out << "capture criterion: window=20 rotations, margin=alpha\n";
  write_report(cfg, out);
  return all ? kOk : kUnresolved;
}

int run_hidden_probe(const RunConfig& cfg) {
  const PwlSystem sys = build_system(cfg.params);
  const auto v = hidden_attractor_probe(sys, cfg.epsilon, cfg.horizon,
                                        cfg.seeds_per_eq, cfg.rng_seed);
  Out out;
  out << "persists=" << (v.persists ? "true" : "false")
      << " final_window_crossings=" << v.final_window_crossings
      << "\nequilibrium seeds captured: " << v.seeds_captured << "/" << v.seeds_total
      << "\nverdict=" << to_string(v.verdict) << "\n";
  write_report(cfg, out);
  return v.verdict == Verdict::Inconclusive ? kUnresolved : kOk;
}

int run_basin_scan(const RunConfig& cfg) {
  const PwlSystem sys = build_system(cfg.params);
  std::vector<Vector3d> seeds = cfg.seeds;
  if (cfg.has_grid) {
    if (cfg.grid.nu < 1 || cfg.grid.nv < 1)
      throw std::invalid_argument("basin-scan: grid_nu and grid_nv must be >= 1");
    for (int i = 0; i < cfg.grid.nu; ++i)
      for (int j = 0; j < cfg.grid.nv; ++j)
        seeds.push_back(cfg.grid.origin + i * cfg.grid.du + j * cfg.grid.dv);
  }
  if (seeds.empty()) throw std::invalid_argument("basin-scan: no seeds given");
  const auto scan = basin_scan(sys, seeds, cfg.horizon);
  Out out;
  size_t unresolved = 0;
  for (size_t i = 0; i < scan.seeds.size(); ++i) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "(%.6g, %.6g, %.6g) -> %s\n", scan.seeds[i].x(),
                  scan.seeds[i].y(), scan.seeds[i].z(), to_string(scan.labels[i]));
    out << buf;
    if (scan.labels[i] == BasinLabel::Unresolved) ++unresolved;
  }
  write_report(cfg, out);
  return unresolved ? kUnresolved : kOk;
}

int run_hysteresis(const RunConfig& cfg) {
  const double t_end =
      cfg.t_end > 0.0 ? cfg.t_end : 3.0 * M_PI / (2.0 * cfg.params.b);
  const auto traj = hysteresis_companion(cfg.params.a, cfg.params.b, cfg.k_gain,
                                         cfg.l1, cfg.l2, cfg.d1, cfg.d2, t_end);
  const double r0 = traj.samples.front().second.norm();
  const double r1 = traj.samples.back().second.norm();
  Out out;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "t_end=%.6g switches=%zu r(0)=%.6g r(t_end)=%.6g ratio=%.6g "
                "(pure spiral: %.6g)\n",
                t_end, traj.switch_times.size(), r0, r1, r1 / r0,
                std::exp(cfg.params.a * t_end));
  out << buf;
  if (!cfg.out_csv.empty()) {
    std::ofstream f(cfg.out_csv);
    if (!f) throw std::runtime_error("cannot write trajectory file: " + cfg.out_csv);
    f << "t,x1,x2\n";
    char row[120];
    for (const auto& [t, x] : traj.samples) {
      std::snprintf(row, sizeof row, "%.17g,%.17g,%.17g\n", t, x.x(), x.y());
      f << row;
    }
  }
  write_report(cfg, out);
  return kOk;
}

int dispatch(const RunConfig& cfg, const std::string& projection) {
  const Projection proj = projection_from_string(projection);
  if (cfg.command == "simulate") return run_simulate(cfg, proj);
  if (cfg.command == "heteroclinic") return run_heteroclinic(cfg, proj);
  if (cfg.command == "gamma-interval") return run_gamma_interval(cfg);
  if (cfg.command == "classify") return run_classify(cfg);
  if (cfg.command == "regions") return run_regions(cfg);
  if (cfg.command == "bounds") return run_bounds(cfg);
  if (cfg.command == "transitory") return run_transitory(cfg);
  if (cfg.command == "hidden-probe") return run_hidden_probe(cfg);
  if (cfg.command == "basin-scan") return run_basin_scan(cfg);
  if (cfg.command == "hysteresis") return run_hysteresis(cfg);
  throw ConfigError("unknown command: " + cfg.command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Piecewise-linear chaotic systems laboratory"};
  app.require_subcommand(0, 1);

  RunConfig cfg;
  std::string config_path, variant_str, projection = "x1x3", seed_str;

  app.add_option("--config", config_path, "Run configuration file");
  app.add_option("--a", cfg.params.a, "Spiral expansion rate");
  app.add_option("--b", cfg.params.b, "Rotation frequency");
  app.add_option("--c", cfg.params.c, "Stable eigenvalue");
  app.add_option("--alpha", cfg.params.alpha, "Equilibrium half-offset");
  app.add_option("--gamma", cfg.params.gamma, "Outer offset");
  app.add_option("--variant", variant_str,
                 "two_atom | four_atom_slanted | four_atom_hidden");
  app.add_option("--horizon", cfg.horizon, "Integration horizon (a.u.)");
  app.add_option("--sample-dt", cfg.sample_dt, "Sampling step (0 = auto)");
  app.add_option("--seed", seed_str, "Initial condition 'x1,x2,x3'");
  app.add_option("--rng-seed", cfg.rng_seed, "RNG seed for sampling commands");
  app.add_option("--projection", projection, "Plot projection: x1x3|x1x2|x2x3|z2z3");
  app.add_option("--out", cfg.out_csv, "CSV output path");
  app.add_option("--plot", cfg.out_plot, "SVG plot output path");
  app.add_option("--report", cfg.out_report, "Text report output path");
  app.add_option("--k", cfg.k, "Heteroclinic winding index");
  app.add_option("--from-atom", cfg.from_atom, "Connection source atom");
  app.add_option("--to-atom", cfg.to_atom, "Connection target atom");
  app.add_option("--epsilon", cfg.epsilon, "Equilibrium-ball radius");
  app.add_option("--seeds-per-eq", cfg.seeds_per_eq, "Seeds per equilibrium");
  app.add_option("--region", cfg.region_label, "R1 or R2");
  app.add_option("--n-samples", cfg.n_samples, "Region sample count");
  app.add_option("--gammas", cfg.gamma_list, "Gamma values for the sweep")
      ->delimiter(',');

  for (const char* c : {"simulate", "heteroclinic", "gamma-interval", "classify",
                        "regions", "bounds", "transitory", "hidden-probe",
                        "basin-scan", "hysteresis"})
    app.add_subcommand(c)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot open config file: " + config_path);
      std::stringstream ss;
      ss << f.rdbuf();
      RunConfig file_cfg = parse_config(ss.str());
      // flags override file values
      RunConfig merged = file_cfg;
      if (app.count("--a")) merged.params.a = cfg.params.a;
      if (app.count("--b")) merged.params.b = cfg.params.b;
      if (app.count("--c")) merged.params.c = cfg.params.c;
      if (app.count("--alpha")) merged.params.alpha = cfg.params.alpha;
      if (app.count("--gamma")) merged.params.gamma = cfg.params.gamma;
      if (app.count("--horizon")) merged.horizon = cfg.horizon;
      if (app.count("--sample-dt")) merged.sample_dt = cfg.sample_dt;
      if (app.count("--rng-seed")) merged.rng_seed = cfg.rng_seed;
      if (app.count("--k")) merged.k = cfg.k;
      if (app.count("--from-atom")) merged.from_atom = cfg.from_atom;
      if (app.count("--to-atom")) merged.to_atom = cfg.to_atom;
      if (app.count("--epsilon")) merged.epsilon = cfg.epsilon;
      if (app.count("--seeds-per-eq")) merged.seeds_per_eq = cfg.seeds_per_eq;
      if (app.count("--region")) merged.region_label = cfg.region_label;
      if (app.count("--n-samples")) merged.n_samples = cfg.n_samples;
      if (app.count("--gammas")) merged.gamma_list = cfg.gamma_list;
      if (app.count("--out")) merged.out_csv = cfg.out_csv;
      if (app.count("--plot")) merged.out_plot = cfg.out_plot;
      if (app.count("--report")) merged.out_report = cfg.out_report;
      cfg = merged;
    }
    if (!variant_str.empty()) {
      if (variant_str == "two_atom") cfg.params.variant = Variant::TwoAtom;
      else if (variant_str == "four_atom_slanted")
        cfg.params.variant = Variant::FourAtomSlanted;
      else if (variant_str == "four_atom_hidden")
        cfg.params.variant = Variant::FourAtomHidden;
      else throw ConfigError("unknown variant: " + variant_str);
    }
    if (!seed_str.empty()) {
      double x, y, z;
      if (std::sscanf(seed_str.c_str(), "%lg,%lg,%lg", &x, &y, &z) != 3)
        throw ConfigError("--seed expects 'x1,x2,x3'");
      cfg.seeds.insert(cfg.seeds.begin(), Vector3d(x, y, z));
    }
    for (const auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

    return dispatch(cfg, projection);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationError;
  }
}
