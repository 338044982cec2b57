#include "pwlchaos/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace pwl {

namespace {

std::string trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in number '" + v + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "not a number: '" + v + "'");
  }
}

long to_long(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in integer '" + v + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "not an integer: '" + v + "'");
  }
}

std::vector<double> to_list(const std::string& v, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), line));
  return out;
}

Vector3d to_vec3(const std::string& v, int line) {
  const auto list = to_list(v, line);
  if (list.size() != 3) fail(line, "expected three comma-separated numbers");
  return Vector3d(list[0], list[1], list[2]);
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::TwoAtom: return "two_atom";
    case Variant::FourAtomSlanted: return "four_atom_slanted";
    case Variant::FourAtomHidden: return "four_atom_hidden";
  }
  return "?";
}

Variant variant_from(const std::string& s, int line) {
  if (s == "two_atom") return Variant::TwoAtom;
  if (s == "four_atom_slanted") return Variant::FourAtomSlanted;
  if (s == "four_atom_hidden") return Variant::FourAtomHidden;
  fail(line, "unknown variant '" + s + "'");
}

const char* const kCommands[] = {"simulate",   "heteroclinic", "gamma-interval",
                                 "classify",   "regions",      "bounds",
                                 "transitory", "hidden-probe", "basin-scan",
                                 "hysteresis"};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const Vector3d& v) {
  return fmt(v.x()) + "," + fmt(v.y()) + "," + fmt(v.z());
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::string section;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = s.substr(1, s.size() - 2);
      if (section != "system" && section != "run" && section != "hysteresis" &&
          section != "output")
        fail(line, "unknown section [" + section + "]");
      continue;
    }
    const size_t eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key=value");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (section == "system") {
      if (key == "a") cfg.params.a = to_double(val, line);
      else if (key == "b") cfg.params.b = to_double(val, line);
      else if (key == "c") cfg.params.c = to_double(val, line);
      else if (key == "alpha") cfg.params.alpha = to_double(val, line);
      else if (key == "gamma") cfg.params.gamma = to_double(val, line);
      else if (key == "variant") cfg.params.variant = variant_from(val, line);
      else fail(line, "unknown key '" + key + "' in [system]");
    } else if (section == "run") {
      if (key == "command") {
        bool ok = false;
        for (const char* c : kCommands) ok = ok || val == c;
        if (!ok) fail(line, "unknown command '" + val + "'");
        cfg.command = val;
      } else if (key == "seed") cfg.seeds.push_back(to_vec3(val, line));
      else if (key == "horizon") cfg.horizon = to_double(val, line);
      else if (key == "sample_dt") cfg.sample_dt = to_double(val, line);
      else if (key == "rng_seed") cfg.rng_seed = static_cast<unsigned>(to_long(val, line));
      else if (key == "k") cfg.k = static_cast<int>(to_long(val, line));
      else if (key == "from_atom") cfg.from_atom = static_cast<int>(to_long(val, line));
      else if (key == "to_atom") cfg.to_atom = static_cast<int>(to_long(val, line));
      else if (key == "epsilon") cfg.epsilon = to_double(val, line);
      else if (key == "seeds_per_eq") cfg.seeds_per_eq = static_cast<int>(to_long(val, line));
      else if (key == "region") {
        if (val != "R1" && val != "R2") fail(line, "region must be R1 or R2");
        cfg.region_label = val;
      } else if (key == "n_samples") cfg.n_samples = static_cast<int>(to_long(val, line));
      else if (key == "gamma_list") cfg.gamma_list = to_list(val, line);
      else if (key == "grid_origin") { cfg.grid.origin = to_vec3(val, line); cfg.has_grid = true; }
      else if (key == "grid_du") { cfg.grid.du = to_vec3(val, line); cfg.has_grid = true; }
      else if (key == "grid_dv") { cfg.grid.dv = to_vec3(val, line); cfg.has_grid = true; }
      else if (key == "grid_nu") { cfg.grid.nu = static_cast<int>(to_long(val, line)); cfg.has_grid = true; }
      else if (key == "grid_nv") { cfg.grid.nv = static_cast<int>(to_long(val, line)); cfg.has_grid = true; }
      else fail(line, "unknown key '" + key + "' in [run]");
    } else if (section == "hysteresis") {
      if (key == "k_gain") cfg.k_gain = to_double(val, line);
      else if (key == "l1") cfg.l1 = to_double(val, line);
      else if (key == "l2") cfg.l2 = to_double(val, line);
      else if (key == "d1") cfg.d1 = to_double(val, line);
      else if (key == "d2") cfg.d2 = to_double(val, line);
      else if (key == "t_end") cfg.t_end = to_double(val, line);
      else fail(line, "unknown key '" + key + "' in [hysteresis]");
    } else if (section == "output") {
      if (key == "csv") cfg.out_csv = val;
      else if (key == "plot") cfg.out_plot = val;
      else if (key == "report") cfg.out_report = val;
      else fail(line, "unknown key '" + key + "' in [output]");
    } else {
      fail(line, "key outside any section");
    }
  }
  try {
    build_system(cfg.params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[system]: ") + e.what());
  }
  return cfg;
}

std::string write_config(const RunConfig& cfg) {
  std::ostringstream o;
  o << "[system]\n";
  o << "a=" << fmt(cfg.params.a) << "\nb=" << fmt(cfg.params.b)
    << "\nc=" << fmt(cfg.params.c) << "\nalpha=" << fmt(cfg.params.alpha)
    << "\ngamma=" << fmt(cfg.params.gamma)
    << "\nvariant=" << variant_name(cfg.params.variant) << "\n";
  o << "[run]\ncommand=" << cfg.command << "\n";
  for (const auto& s : cfg.seeds) o << "seed=" << fmt(s) << "\n";
  o << "horizon=" << fmt(cfg.horizon) << "\nsample_dt=" << fmt(cfg.sample_dt)
    << "\nrng_seed=" << cfg.rng_seed << "\nk=" << cfg.k
    << "\nfrom_atom=" << cfg.from_atom << "\nto_atom=" << cfg.to_atom
    << "\nepsilon=" << fmt(cfg.epsilon) << "\nseeds_per_eq=" << cfg.seeds_per_eq
    << "\nregion=" << cfg.region_label << "\nn_samples=" << cfg.n_samples << "\n";
  if (!cfg.gamma_list.empty()) {
    o << "gamma_list=";
    for (size_t i = 0; i < cfg.gamma_list.size(); ++i)
      o << (i ? "," : "") << fmt(cfg.gamma_list[i]);
    o << "\n";
  }
  if (cfg.has_grid) {
    o << "grid_origin=" << fmt(cfg.grid.origin) << "\ngrid_du=" << fmt(cfg.grid.du)
      << "\ngrid_dv=" << fmt(cfg.grid.dv) << "\ngrid_nu=" << cfg.grid.nu
      << "\ngrid_nv=" << cfg.grid.nv << "\n";
  }
  o << "[hysteresis]\nk_gain=" << fmt(cfg.k_gain) << "\nl1=" << fmt(cfg.l1)
    << "\nl2=" << fmt(cfg.l2) << "\nd1=" << fmt(cfg.d1) << "\nd2=" << fmt(cfg.d2)
    << "\nt_end=" << fmt(cfg.t_end) << "\n";
  o << "[output]\n";
  if (!cfg.out_csv.empty()) o << "csv=" << cfg.out_csv << "\n";
  if (!cfg.out_plot.empty()) o << "plot=" << cfg.out_plot << "\n";
  if (!cfg.out_report.empty()) o << "report=" << cfg.out_report << "\n";
  return o.str();
}

void export_trajectory(const PwlSystem& sys, const Trajectory& traj,
                       const Vector3d& seed, double sample_dt,
                       const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write trajectory file: " + path);
  const SystemParams& p = sys.params;
  std::fprintf(f, "# pwlchaos trajectory v1\n");
  std::fprintf(f, "# a=%.17g b=%.17g c=%.17g alpha=%.17g gamma=%.17g variant=%s\n",
               p.a, p.b, p.c, p.alpha, p.gamma, variant_name(p.variant));
  std::fprintf(f, "# seed=%.17g,%.17g,%.17g sample_dt=%.17g\n", seed.x(), seed.y(),
               seed.z(), sample_dt);
  std::fprintf(f, "kind,t,x1,x2,x3,atom\n");
  double last_t = -1.0;
  for (const auto& seg : traj.segments) {
    for (const auto& [t, x] : seg.samples) {
      if (t <= last_t) continue;
      last_t = t;
      std::fprintf(f, "s,%.17g,%.17g,%.17g,%.17g,%d\n", t, x.x(), x.y(), x.z(),
                   seg.atom);
    }
  }
  for (const auto& ev : traj.events)
    std::fprintf(f, "e,%.17g,%s\n", ev.t, to_string(ev.plane));
  std::fclose(f);
}

TrajectoryFile parse_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read trajectory file: " + path);
  TrajectoryFile tf;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    if (line[0] == '#') {
      char variant[64];
      double sx, sy, sz;
      if (std::sscanf(line.c_str(),
                      "# a=%lg b=%lg c=%lg alpha=%lg gamma=%lg variant=%63s",
                      &tf.params.a, &tf.params.b, &tf.params.c, &tf.params.alpha,
                      &tf.params.gamma, variant) == 6) {
        tf.params.variant = variant_from(variant, n);
      } else if (std::sscanf(line.c_str(), "# seed=%lg,%lg,%lg sample_dt=%lg", &sx,
                             &sy, &sz, &tf.sample_dt) == 4) {
        tf.seed = Vector3d(sx, sy, sz);
      }
      continue;
    }
    if (line.rfind("kind,", 0) == 0) continue;
    double t, x1, x2, x3;
    int atom;
    char plane[8];
    if (std::sscanf(line.c_str(), "s,%lg,%lg,%lg,%lg,%d", &t, &x1, &x2, &x3,
                    &atom) == 5) {
      tf.samples.emplace_back(t, Vector3d(x1, x2, x3), atom);
    } else if (std::sscanf(line.c_str(), "e,%lg,%7s", &t, plane) == 2) {
      PlaneId id;
      if (std::strcmp(plane, "SW12") == 0) id = PlaneId::SW12;
      else if (std::strcmp(plane, "SW23") == 0) id = PlaneId::SW23;
      else if (std::strcmp(plane, "SW34") == 0) id = PlaneId::SW34;
      else throw std::runtime_error(path + ":" + std::to_string(n) + ": bad plane id");
      tf.events.emplace_back(t, id);
    } else {
      throw std::runtime_error(path + ":" + std::to_string(n) + ": bad row");
    }
  }
  return tf;
}

Projection projection_from_string(const std::string& s) {
  if (s == "x1x3") return Projection::X1X3;
  if (s == "x1x2") return Projection::X1X2;
  if (s == "x2x3") return Projection::X2X3;
  if (s == "z2z3") return Projection::Z2Z3;
  throw std::runtime_error("unknown projection '" + s + "' (x1x3|x1x2|x2x3|z2z3)");
}

namespace {

Eigen::Vector2d project(const PwlSystem& sys, Projection proj, const Vector3d& x) {
  switch (proj) {
    case Projection::X1X3: return {x.x(), x.z()};
    case Projection::X1X2: return {x.x(), x.y()};
    case Projection::X2X3: return {x.y(), x.z()};
    case Projection::Z2Z3: {
      const Vector3d z = sys.frame.Qinv * (x - sys.atom(2).equilibrium);
      return {z.y(), z.z()};
    }
  }
  return {0, 0};
}

}  // namespace

void emit_plot(const PwlSystem& sys, const Trajectory& traj, Projection proj,
               const std::string& path, const std::vector<Region>& outlines) {
  const auto pts = traj.flatten();
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto grow = [&](const Eigen::Vector2d& p) {
    xmin = std::min(xmin, p.x()); xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y()); ymax = std::max(ymax, p.y());
  };
  for (const auto& [t, x] : pts) grow(project(sys, proj, x));
  for (const auto& atom : sys.atoms) grow(project(sys, proj, atom.equilibrium));
  for (const auto& r : outlines)
    for (const auto& c : r.corners) grow(project(sys, proj, c));
  if (xmin > xmax) { xmin = ymin = -1.0; xmax = ymax = 1.0; }
  const double padx = 0.05 * (xmax - xmin) + 1e-12, pady = 0.05 * (ymax - ymin) + 1e-12;
  xmin -= padx; xmax += padx; ymin -= pady; ymax += pady;
  const double W = 800, H = 600, M = 40;
  auto sx = [&](double x) { return M + (x - xmin) / (xmax - xmin) * (W - 2 * M); };
  auto sy = [&](double y) { return H - M - (y - ymin) / (ymax - ymin) * (H - 2 * M); };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write plot file: " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
      << "' viewBox='0 0 " << W << " " << H << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n";
  // axes through the origin of the projection when visible
  if (xmin < 0 && xmax > 0)
    out << "<line x1='" << sx(0) << "' y1='" << sy(ymin) << "' x2='" << sx(0)
        << "' y2='" << sy(ymax) << "' stroke='#999' stroke-width='1'/>\n";
  if (ymin < 0 && ymax > 0)
    out << "<line x1='" << sx(xmin) << "' y1='" << sy(0) << "' x2='" << sx(xmax)
        << "' y2='" << sy(0) << "' stroke='#999' stroke-width='1'/>\n";
  // switching-plane traces on the x1-x3 view (lines x3 = 2*x1 - offset, or
  // the vertical x1 = 0 for the relocated central surface)
  if (proj == Projection::X1X3) {
    for (const auto& pl : sys.planes) {
      out << "<polyline fill='none' stroke='#2a2' stroke-width='1' points='";
      if (std::abs(pl.normal.z()) < 1e-12) {
        out << sx(0) << "," << sy(ymin) << " " << sx(0) << "," << sy(ymax);
      } else {
        out << sx(xmin) << "," << sy(2 * xmin - pl.offset) << " " << sx(xmax) << ","
            << sy(2 * xmax - pl.offset);
      }
      out << "'/>\n";
    }
  }
  for (const auto& r : outlines) {
    out << "<polygon fill='none' stroke='#a2a' stroke-width='1.5' points='";
    for (const auto& c : r.corners) {
      const auto p = project(sys, proj, c);
      out << sx(p.x()) << "," << sy(p.y()) << " ";
    }
    out << "'/>\n";
  }
  out << "<polyline fill='none' stroke='#26c' stroke-width='0.7' points='";
  for (const auto& [t, x] : pts) {
    const auto p = project(sys, proj, x);
    out << sx(p.x()) << "," << sy(p.y()) << " ";
  }
  out << "'/>\n";
  for (const auto& atom : sys.atoms) {
    const auto p = project(sys, proj, atom.equilibrium);
    out << "<circle cx='" << sx(p.x()) << "' cy='" << sy(p.y())
        << "' r='3' fill='#c22'/>\n";
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace pwl
