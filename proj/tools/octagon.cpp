// Command-line entry point: identity verification, orbit scans, and
// level-set exploration (nice loops, flat charts, fixed-point sweeps).
//
// Exit codes: 0 success, 1 verification failure, 2 domain/input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "octagon/flow.hpp"
#include "octagon/geometry.hpp"
#include "octagon/hamiltonian.hpp"
#include "octagon/invariants.hpp"
#include "octagon/io.hpp"
#include "octagon/maps.hpp"
#include "octagon/poncelet.hpp"
#include "octagon/verify.hpp"

namespace {

using nlohmann::json;
using namespace octagon;

void emit(const std::string& out, const std::string& content) {
  if (out.empty())
    std::cout << content;
  else
    write_file(out, content);
}

int pick_coord(const std::string& name) {
  if (name == "a") return 0;
  if (name == "b") return 1;
  if (name == "c") return 2;
  if (name == "d") return 3;
  throw ParseError("--project: unknown coordinate '" + name + "'");
}

struct Options {
  // shared
  std::string out, format = "csv", coords_text, in_path;
  uint64_t seed = 0;
  // verify
  std::string only;
  bool flip_omega_sign = false;
  // orbit
  std::string backend = "exact", project = "a,b";
  int steps = 1000, back_steps = 0;
  double tol = 1e-6;
  // explore
  double f1 = 3, f2 = 4, step = 1e-2;
  double k = 0, ell = 0;
  int grid = 0, jobs = 0, chart_steps = 8;
  std::string word_text = "T3";
};

CoordsQ parse_exact_coords(const Options& opt) {
  if (!opt.in_path.empty()) return coords_from_json(json::parse(read_file(opt.in_path)));
  return coords_from_string(opt.coords_text);
}

CoordsD parse_float_coords(const Options& opt) {
  if (!opt.in_path.empty()) {
    json j = json::parse(read_file(opt.in_path));
    if (j.contains("vertices")) return normalize(octagon_from_json(j));
    CoordsQ q = coords_from_json(j);
    return {q.a.to_double(), q.b.to_double(), q.c.to_double(), q.d.to_double()};
  }
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : opt.coords_text) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4) throw ParseError("--coords: expected four comma-separated values");
  return {parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2]),
          parse_double(parts[3])};
}

int cmd_verify(const Options& opt) {
  VerifyOptions vo;
  vo.seed = opt.seed;
  vo.only = opt.only;
  vo.flip_omega_sign = opt.flip_omega_sign;
  auto results = run_verify(vo);
  json report = json::array();
  bool all = true;
  for (const auto& r : results) {
    report.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    all = all && r.pass;
  }
  json doc{{"identities", report}, {"all_passed", all}};
  emit(opt.out, doc.dump(2) + "\n");
  return all ? 0 : 1;
}

template <class S>
std::string orbit_artifact(const OrbitScan<S>& scan, const Options& opt) {
  if (opt.format == "csv") return orbit_csv(scan);
  if (opt.format == "svg") {
    auto comma = opt.project.find(',');
    if (comma == std::string::npos)
      throw ParseError("--project: expected two coordinates like 'a,b'");
    int ix = pick_coord(opt.project.substr(0, comma));
    int iy = pick_coord(opt.project.substr(comma + 1));
    std::vector<SvgPoint> pts;
    for (const auto& s : scan.samples) {
      auto v = s.coords.as_array();
      pts.push_back({as_double(v[ix]), as_double(v[iy]), s.convex});
    }
    return svg_scatter(pts);
  }
  throw ParseError("orbit: --format must be csv or svg");
}

template <class S>
double orbit_drift(const OrbitScan<S>& scan) {
  if (scan.samples.empty()) return 0;
  double F1_0 = 0, F2_0 = 0, drift = 0;
  bool have_base = false;
  for (const auto& s : scan.samples) {
    if (s.index == 0) {
      F1_0 = as_double(s.F1);
      F2_0 = as_double(s.F2);
      have_base = true;
    }
  }
  if (!have_base) return 0;
  for (const auto& s : scan.samples)
    drift = std::max(drift,
                     std::abs(as_double(s.F1) - F1_0) + std::abs(as_double(s.F2) - F2_0));
  return drift;
}

int cmd_orbit(const Options& opt) {
  if (opt.backend == "exact") {
    OrbitScan<Rat> scan = orbit_scan(parse_exact_coords(opt), opt.steps, opt.back_steps);
    emit(opt.out, orbit_artifact(scan, opt));
    std::cerr << "samples=" << scan.samples.size() << " drift=" << fmt_double(orbit_drift(scan))
              << "\n";
    return 0;
  }
  if (opt.backend == "float") {
    OrbitScan<double> scan = orbit_scan(parse_float_coords(opt), opt.steps, opt.back_steps);
    emit(opt.out, orbit_artifact(scan, opt));
    double drift = orbit_drift(scan);
    std::cerr << "samples=" << scan.samples.size() << " drift=" << fmt_double(drift) << "\n";
    return drift <= opt.tol ? 0 : 1;
  }
  throw ParseError("orbit: --backend must be exact or float");
}

int cmd_niceloop(const Options& opt) {
  LevelSpec level = LevelSpec::from_f(opt.f1, opt.f2);
  if (!level.valid_for_Xplus()) throw DomainError("niceloop: level not valid for X+");
  NiceLoop loop = trace_nice_loop(level, opt.step);
  if (opt.format == "csv") {
    std::ostringstream os;
    os << "a,b,c,d\n";
    for (const auto& p : loop.points)
      os << fmt_double(p.a) << ',' << fmt_double(p.b) << ',' << fmt_double(p.c) << ','
         << fmt_double(p.d) << '\n';
    emit(opt.out, os.str());
  } else if (opt.format == "svg") {
    std::vector<SvgPoint> pts;
    for (const auto& p : loop.points) {
      bool cusp = false;
      for (const auto& q : loop.cusps)
        cusp = cusp || coords_distance(p, q) < 1e-9;
      pts.push_back({p.c, p.d, cusp});
    }
    emit(opt.out, svg_polyline(pts));
  } else if (opt.format == "json") {
    json pts = json::array(), cusps = json::array();
    for (const auto& p : loop.points)
      pts.push_back({p.a, p.b, p.c, p.d});
    for (const auto& p : loop.cusps)
      cusps.push_back({p.a, p.b, p.c, p.d});
    emit(opt.out, json{{"points", pts},
                       {"cusps", cusps},
                       {"max_level_error", loop.max_level_error}}
                          .dump(2) +
                      "\n");
  } else {
    throw ParseError("niceloop: --format must be csv, svg, or json");
  }
  std::cerr << "points=" << loop.points.size()
            << " max_level_error=" << fmt_double(loop.max_level_error) << "\n";
  return 0;
}

// A loop point away from the two cusps and from the I-fixed locus, used as
// the chart base.
CoordsD chart_base(const NiceLoop& loop) {
  for (const auto& p : loop.points) {
    if (std::abs(p.a + p.b - 1.0) > 1e-6) continue;  // stay on the U_ab half
    if (std::abs(p.a - p.c) + std::abs(p.b - p.d) < 1e-3) continue;
    bool near_cusp = false;
    for (const auto& q : loop.cusps) near_cusp = near_cusp || coords_distance(p, q) < 5e-2;
    if (!near_cusp) return p;
  }
  throw DomainError("chart: no usable base point on the traced loop");
}

int cmd_chart(const Options& opt) {
  LevelSpec level = LevelSpec::from_f(opt.f1, opt.f2);
  NiceLoop loop = trace_nice_loop(level, opt.step);
  CoordsD base = chart_base(loop);
  GenWord word = parse_word(opt.word_text);
  ChartTranslation tr = chart_translation(loop, base, word);
  std::vector<ChartSample> cloud;
  CoordsD p = base;
  for (int n = 0; n <= opt.chart_steps; ++n) {
    cloud.push_back({n * tr.t1, n * tr.t2, p});
    try {
      p = apply_word(word, p);
    } catch (const DomainError&) {
      break;
    }
  }
  if (opt.format == "json") {
    emit(opt.out, json{{"t1", tr.t1},
                       {"t2", tr.t2},
                       {"residual", tr.residual},
                       {"xg_component", tr.t2 - tr.t1}}
                          .dump(2) +
                      "\n");
  } else {
    emit(opt.out, chart_csv(cloud));
  }
  std::cerr << "t1=" << fmt_double(tr.t1) << " t2=" << fmt_double(tr.t2)
            << " residual=" << fmt_double(tr.residual) << "\n";
  return 0;
}

int cmd_fixedpoints(const Options& opt) {
  if (opt.grid <= 0) {
    LFTLevel level{opt.k, opt.ell};
    if (!level.in_K()) throw DomainError("fixedpoints: (k, ell) outside K");
    FixedPoints f = fixed_points(level);
    LFTClass cls = classify_lft(level);
    json doc{{"k", opt.k},
             {"ell", opt.ell},
             {"D", f.D},
             {"x0", f.x0},
             {"y0", f.y0},
             {"attract", {f.attract.a, f.attract.b, f.attract.c, f.attract.d}},
             {"repel", {f.repel.a, f.repel.b, f.repel.c, f.repel.d}},
             {"type", cls.type},
             {"multiplier_attract", cls.multiplier_attract},
             {"multiplier_repel", cls.multiplier_repel}};
    emit(opt.out, doc.dump(2) + "\n");
    return 0;
  }
  int n = opt.grid;
  std::vector<FixedPointRow> rows(static_cast<size_t>(n) * n);
  int jobs = opt.jobs > 0 ? opt.jobs
                          : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int idx = next.fetch_add(1);
      if (idx >= n * n) return;
      int i = idx / n, j = idx % n;
      double k = -0.5 + (i + 0.5) / n;
      double ell = -2.0 + 4.0 * (j + 0.5) / n;
      FixedPointRow row{k, ell, 0, 0, 0, 0};
      try {
        LFTLevel level{k, ell};
        FixedPoints f = fixed_points(level);
        row.D = f.D;
        row.x0 = f.x0;
        row.y0 = f.y0;
        row.multiplier = classify_lft(level).multiplier_attract;
      } catch (const DomainError&) {
        row.D = std::numeric_limits<double>::quiet_NaN();
      }
      rows[idx] = row;
    }
  };
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  emit(opt.out, fixed_point_csv(rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"3-diagonal pentagram map on centrally symmetric octagons"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "Run the exact identity suite");
  verify->add_option("--only", opt.only, "Substring filter on identity names");
  verify->add_option("--seed", opt.seed, "RNG seed (default 0)");
  verify->add_option("--out", opt.out, "Output path (default stdout)");
  verify->add_flag("--flip-omega-sign", opt.flip_omega_sign)->group("");

  auto* orbit = app.add_subcommand("orbit", "Scan a T3 orbit");
  orbit->add_option("--coords", opt.coords_text, "Start point 'a,b,c,d'");
  orbit->add_option("--in", opt.in_path, "JSON input path (coords or vertices)");
  orbit->add_option("--backend", opt.backend, "exact | float (default exact)");
  orbit->add_option("--steps", opt.steps, "Forward steps (default 1000)");
  orbit->add_option("--backward", opt.back_steps, "Backward steps (default 0)");
  orbit->add_option("--tol", opt.tol, "Float drift tolerance (default 1e-6)");
  orbit->add_option("--format", opt.format, "csv | svg (default csv)");
  orbit->add_option("--project", opt.project, "SVG projection pair (default a,b)");
  orbit->add_option("--out", opt.out, "Output path (default stdout)");

  auto* explore = app.add_subcommand("explore", "Level-set exploration");
  explore->require_subcommand(1);
  auto* niceloop = explore->add_subcommand("niceloop", "Trace the U-loop of a level set");
  auto* chart = explore->add_subcommand("chart", "Flat-chart translation of a word");
  auto* fixedpoints = explore->add_subcommand("fixedpoints", "Poncelet fixed-point data");
  for (auto* sub : {niceloop, chart}) {
    sub->add_option("--f1", opt.f1, "Level value F1 (default 3)");
    sub->add_option("--f2", opt.f2, "Level value F2 (default 4)");
    sub->add_option("--step", opt.step, "Continuation step (default 1e-2)");
    sub->add_option("--format", opt.format, "Output format");
    sub->add_option("--out", opt.out, "Output path (default stdout)");
  }
  chart->add_option("--word", opt.word_text, "Map word (default T3)");
  chart->add_option("--steps", opt.chart_steps, "Cloud length (default 8)");
  fixedpoints->add_option("--k", opt.k, "Plane parameter k (default 0)");
  fixedpoints->add_option("--ell", opt.ell, "Level parameter ell (default 0)");
  fixedpoints->add_option("--grid", opt.grid, "Sweep an NxN grid over K instead");
  fixedpoints->add_option("--jobs", opt.jobs, "Worker threads (default: processors)");
  fixedpoints->add_option("--out", opt.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // documented input-error code, not CLI11's default
  }

  try {
    if (verify->parsed()) return cmd_verify(opt);
    if (orbit->parsed()) return cmd_orbit(opt);
    if (niceloop->parsed()) return cmd_niceloop(opt);
    if (chart->parsed()) return cmd_chart(opt);
    if (fixedpoints->parsed()) return cmd_fixedpoints(opt);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
