#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "octagon/coords.hpp"
#include "octagon/error.hpp"
#include "octagon/flow.hpp"
#include "octagon/geometry.hpp"
#include "octagon/invariants.hpp"
#include "octagon/maps.hpp"

namespace octagon {

using nlohmann::json;

// All floats are printed with 17 significant digits so emitted files
// round-trip bit-exactly through double.
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline double parse_double(const std::string& s) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw ParseError("parse_double: trailing junk in '" + s + "'");
    return v;
  } catch (const std::invalid_argument&) {
    throw ParseError("parse_double: bad number '" + s + "'");
  }
}

// --- coordinates --------------------------------------------------------

inline json coords_to_json(const CoordsQ& p) {
  return json{{"coords",
               {{"a", p.a.str()}, {"b", p.b.str()}, {"c", p.c.str()}, {"d", p.d.str()}}}};
}

inline json coords_to_json(const CoordsD& p) {
  return json{{"coords",
               {{"a", fmt_double(p.a)},
                {"b", fmt_double(p.b)},
                {"c", fmt_double(p.c)},
                {"d", fmt_double(p.d)}}}};
}

inline CoordsQ coords_from_json(const json& j) {
  if (!j.contains("coords")) throw ParseError("coords_from_json: missing 'coords'");
  const auto& c = j.at("coords");
  auto get = [&](const char* name) -> Rat {
    if (!c.contains(name))
      throw ParseError(std::string("coords_from_json: missing '") + name + "'");
    return rat_parse(c.at(name).get<std::string>());
  };
  return {get("a"), get("b"), get("c"), get("d")};
}

// "a,b,c,d" with fraction or decimal entries.
inline CoordsQ coords_from_string(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (!isspace(static_cast<unsigned char>(ch))) {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4)
    throw ParseError("coords_from_string: expected 4 comma-separated values");
  return {rat_parse(parts[0]), rat_parse(parts[1]), rat_parse(parts[2]), rat_parse(parts[3])};
}

// --- octagons -----------------------------------------------------------

template <class S>
json octagon_to_json(const Octagon<S>& o) {
  json verts = json::array();
  for (int i = 0; i < 8; ++i)
    verts.push_back(json::array({as_double(o[i].x), as_double(o[i].y)}));
  return json{{"vertices", verts}};
}

inline Octagon<double> octagon_from_json(const json& j) {
  if (!j.contains("vertices") || !j.at("vertices").is_array() || j.at("vertices").size() != 8)
    throw ParseError("octagon_from_json: need 8 vertices");
  Octagon<double> o;
  for (int i = 0; i < 8; ++i) {
    const auto& v = j.at("vertices").at(i);
    o.v[i] = {v.at(0).get<double>(), v.at(1).get<double>()};
  }
  return o;
}

// --- reports ------------------------------------------------------------

template <class S>
json invariant_report_to_json(const InvariantReport<S>& r) {
  json signs = json::array();
  for (int i = 0; i < 12; ++i)
    signs.push_back(json{{"factor", invariant_factor_names()[i]}, {"sign", r.factor_signs[i]}});
  auto num = [](const S& x) -> json {
    if constexpr (scalar_traits<S>::exact) return x.str();
    else return fmt_double(as_double(x));
  };
  return json{{"F1", num(r.F1)}, {"F2", num(r.F2)}, {"G", num(r.G)},
              {"H", num(r.H)},   {"e", num(r.e)},   {"factor_signs", signs}};
}

// --- CSV ----------------------------------------------------------------

inline std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  os << "t,a,b,c,d,F1,F2,G\n";
  for (const auto& [t, p] : tr.samples) {
    double F1 = invariant_F1(p), F2 = invariant_F2(p);
    os << fmt_double(t) << ',' << fmt_double(p.a) << ',' << fmt_double(p.b) << ','
       << fmt_double(p.c) << ',' << fmt_double(p.d) << ',' << fmt_double(F1) << ','
       << fmt_double(F2) << ',' << fmt_double(F2 - F1) << '\n';
  }
  return os.str();
}

template <class S>
std::string orbit_csv(const OrbitScan<S>& scan) {
  std::ostringstream os;
  os << "index,a,b,c,d,convex,F1,F2,G\n";
  for (const auto& s : scan.samples) {
    auto v = s.coords.as_array();
    os << s.index;
    for (const auto& x : v) os << ',' << fmt_double(as_double(x));
    os << ',' << (s.convex ? 1 : 0) << ',' << fmt_double(as_double(s.F1)) << ','
       << fmt_double(as_double(s.F2)) << ',' << fmt_double(as_double(s.G)) << '\n';
  }
  return os.str();
}

struct ChartSample {
  double t1, t2;
  CoordsD p;
};

inline std::string chart_csv(const std::vector<ChartSample>& samples) {
  std::ostringstream os;
  os << "t1,t2,a,b,c,d\n";
  for (const auto& s : samples)
    os << fmt_double(s.t1) << ',' << fmt_double(s.t2) << ',' << fmt_double(s.p.a) << ','
       << fmt_double(s.p.b) << ',' << fmt_double(s.p.c) << ',' << fmt_double(s.p.d) << '\n';
  return os.str();
}

struct FixedPointRow {
  double k, ell, D, x0, y0, multiplier;
};

inline std::string fixed_point_csv(const std::vector<FixedPointRow>& rows) {
  std::ostringstream os;
  os << "k,l,D,x0,y0,multiplier\n";
  for (const auto& r : rows)
    os << fmt_double(r.k) << ',' << fmt_double(r.ell) << ',' << fmt_double(r.D) << ','
       << fmt_double(r.x0) << ',' << fmt_double(r.y0) << ',' << fmt_double(r.multiplier)
       << '\n';
  return os.str();
}

// Generic CSV reader used by the round-trip tests: header row + numeric
// cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline CsvTable csv_parse(const std::string& text) {
  CsvTable t;
  std::istringstream is(text);
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        cells.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    cells.push_back(cur);
    if (first) {
      t.header = cells;
      first = false;
    } else {
      if (cells.size() != t.header.size())
        throw ParseError("csv_parse: ragged row '" + line + "'");
      std::vector<double> row;
      for (const auto& c : cells) row.push_back(parse_double(c));
      t.rows.push_back(row);
    }
  }
  if (first) throw ParseError("csv_parse: empty input");
  return t;
}

// --- SVG ----------------------------------------------------------------

struct SvgPoint {
  double x, y;
  bool emphasized;  // convex points are drawn darker
};

namespace detail {

struct SvgFrame {
  double min_x, min_y, scale;
  static constexpr int kSize = 800, kMargin = 40;

  template <class Pts>
  static SvgFrame fit(const Pts& pts) {
    double lo_x = 0, hi_x = 1, lo_y = 0, hi_y = 1;
    bool first = true;
    for (const auto& p : pts) {
      if (first) {
        lo_x = hi_x = p.x;
        lo_y = hi_y = p.y;
        first = false;
      } else {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
      }
    }
    double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
    double scale = (kSize - 2.0 * kMargin) / span;
    return {lo_x, lo_y, scale};
  }
  double px(double x) const { return kMargin + (x - min_x) * scale; }
  double py(double y) const { return kSize - kMargin - (y - min_y) * scale; }
};

}  // namespace detail

inline std::string svg_scatter(const std::vector<SvgPoint>& pts) {
  auto frame = detail::SvgFrame::fit(pts);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::SvgFrame::kSize
     << "\" height=\"" << detail::SvgFrame::kSize << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& p : pts)
    os << "<circle cx=\"" << frame.px(p.x) << "\" cy=\"" << frame.py(p.y)
       << "\" r=\"1.5\" fill=\"" << (p.emphasized ? "#1a1a1a" : "#b0b0c8") << "\"/>\n";
  os << "</svg>\n";
  return os.str();
}

inline std::string svg_polyline(const std::vector<SvgPoint>& pts) {
  auto frame = detail::SvgFrame::fit(pts);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::SvgFrame::kSize
     << "\" height=\"" << detail::SvgFrame::kSize << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<polyline fill=\"none\" stroke=\"#202060\" stroke-width=\"1.2\" points=\"";
  for (const auto& p : pts) os << frame.px(p.x) << ',' << frame.py(p.y) << ' ';
  os << "\"/>\n";
  for (const auto& p : pts)
    if (p.emphasized)
      os << "<circle cx=\"" << frame.px(p.x) << "\" cy=\"" << frame.py(p.y)
         << "\" r=\"4\" fill=\"#c03030\"/>\n";
  os << "</svg>\n";
  return os.str();
}

// --- files --------------------------------------------------------------

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DomainError("write_file: cannot open '" + path + "'");
  os << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DomainError("read_file: cannot open '" + path + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace octagon
