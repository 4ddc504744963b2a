// hypstretch: command-line front end for the surface library.
//
//   hypstretch check FILE
//   hypstretch stretch FILE --t T --out FILE
//   hypstretch lengths FILE --depth N
//   hypstretch distance X Y --depth N [--curves-only]
//   hypstretch verify FILE --t T1,T2,...
//   hypstretch render FILE --out FILE.svg [--foliation] [--clip Y]
//
// Exit codes: 0 success, 1 validation failure, 2 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "hypstretch/stretch.hpp"

using json = nlohmann::json;
using namespace hyp;

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Reads a whole file, exiting with the I/O code when unreadable.
std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f.good()) {
    std::cerr << "hypstretch: cannot read " << path << "\n";
    std::exit(kExitIo);
  }
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Surface parse_surface(const std::string& text, const std::string& path) {
  std::stringstream ss(text);
  try {
    return load_surface(ss);
  } catch (const GeomError& e) {
    std::cerr << "hypstretch: " << path << ": " << e.what() << "\n";
    std::exit(kExitInvalid);
  }
}

Surface load_path(const std::string& path) {
  return parse_surface(read_file(path), path);
}

// FNV-1a 64-bit content hash, recorded in stretch output metadata.
std::string fnv1a_hex(const std::string& data) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}

int cmd_check(const std::string& file) {
  Surface s = load_path(file);
  ValidationReport r = validate(s);
  if (!r.valid) {
    std::cout << "invalid, " << s.pieces.size() << " pieces (expected "
              << r.expected_pieces << ")\n";
    for (const std::string& v : r.violations) std::cout << "  " << v << "\n";
    return kExitInvalid;
  }
  BlockDecomposition d = classify(s);
  std::string block;
  if (d.triangle_pieces.empty())
    block = "whole surface";
  else if (d.block_pieces.empty())
    block = "empty";
  else {
    for (int p : d.block_pieces)
      block += (block.empty() ? "pieces " : ",") + std::to_string(s.ids[p]);
  }
  std::cout << "valid, " << s.pieces.size() << " pieces, B = " << block
            << "\n";
  for (size_t j = 0; j < d.crowns.size(); ++j) {
    std::cout << "crown " << j << ": quads";
    for (int q : d.crowns[j].quads) std::cout << " " << s.ids[q];
    std::cout << ", " << d.crowns[j].spikes.size() << " spikes\n";
  }
  if (!d.triangle_pieces.empty()) {
    std::cout << "triangulated complement: pieces";
    for (int p : d.triangle_pieces) std::cout << " " << s.ids[p];
    std::cout << "\n";
  }
  return 0;
}

int cmd_stretch(const std::string& file, double t, const std::string& out) {
  std::string text = read_file(file);
  Surface s = parse_surface(text, file);
  Surface st;
  try {
    st = generalized_stretch(s, t);
  } catch (const GeomError& e) {
    std::cerr << "hypstretch: " << e.what() << "\n";
    return kExitInvalid;
  }
  std::stringstream ss;
  save_surface(ss, st);
  json j = json::parse(ss.str());
  j["metadata"] = {{"input_hash", fnv1a_hex(text)}, {"t", t}};
  std::ofstream o(out, std::ios::binary);
  if (!o.good()) {
    std::cerr << "hypstretch: cannot write " << out << "\n";
    return kExitIo;
  }
  o << j.dump(2) << "\n";
  return o.good() ? 0 : kExitIo;
}

int cmd_lengths(const std::string& file, int depth) {
  Surface s = load_path(file);
  ValidationReport r = validate(s);
  if (!r.valid) {
    for (const std::string& v : r.violations)
      std::cerr << "hypstretch: " << v << "\n";
    return kExitInvalid;
  }
  for (const Candidate& c : enumerate_candidates(s, depth)) {
    std::string len;
    try {
      len = fmt12(candidate_length(s, c));
    } catch (const GeomError& e) {
      len = std::string("undefined (") + e.code + ")";
    }
    std::cout << c.name << "\t" << len << "\n";
  }
  return 0;
}

int cmd_distance(const std::string& fx, const std::string& fy, int depth,
                 bool curves_only) {
  Surface x = load_path(fx);
  Surface y = load_path(fy);
  DistanceEstimate est;
  try {
    est = arc_distance_estimate(x, y, depth, curves_only);
  } catch (const GeomError& e) {
    std::cerr << "hypstretch: " << e.what() << "\n";
    return kExitInvalid;
  }
  for (const Candidate& c : enumerate_candidates(x, depth)) {
    if (curves_only && c.kind == Candidate::Kind::Arc) continue;
    double lx, ly;
    try {
      lx = candidate_length(x, c);
      ly = candidate_length(y, c);
    } catch (const GeomError&) {
      continue;
    }
    std::cout << c.name << "\t" << fmt12(lx) << "\t" << fmt12(ly) << "\t"
              << fmt12(std::log(ly / lx)) << "\n";
  }
  std::cout << "lower bound at depth " << depth << ": "
            << fmt12(est.lower_bound) << "  witness: " << est.witness.name
            << "\n";
  return 0;
}

int cmd_verify(const std::string& file, const std::vector<double>& ts) {
  Surface s = load_path(file);
  VerifyReport rep;
  try {
    rep = verify_surface(s, ts);
  } catch (const GeomError& e) {
    std::cerr << "hypstretch: " << e.what() << "\n";
    return kExitInvalid;
  }
  json j;
  j["surface"] = file;
  j["t"] = ts;
  j["pass"] = rep.pass;
  j["checks"] = json::array();
  for (const VerifyCheck& c : rep.checks)
    j["checks"].push_back({{"name", c.name},
                           {"value", c.value},
                           {"tolerance", c.bound},
                           {"pass", c.pass}});
  std::cout << j.dump(2) << "\n";
  return rep.pass ? 0 : kExitInvalid;
}

// --- SVG rendering ----------------------------------------------------------

struct Svg {
  std::ostringstream body;
  double xmin = 0, xmax = 1, clip = 3, scale = 120, margin = 20;

  double sx(double x) const { return margin + scale * (x - xmin); }
  double sy(double y) const { return margin + scale * (clip - y); }

  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
  }

  void polyline(const std::vector<UhpPoint>& pts, const char* style) {
    if (pts.size() < 2) return;
    body << "<polyline fill=\"none\" " << style << " points=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i) body << " ";
      body << num(sx(pts[i].x)) << "," << num(sy(pts[i].y));
    }
    body << "\"/>\n";
  }

  void dot(const UhpPoint& p, double r, const char* style) {
    body << "<circle cx=\"" << num(sx(p.x)) << "\" cy=\"" << num(sy(p.y))
         << "\" r=\"" << num(r) << "\" " << style << "/>\n";
  }

  void tick(double x) {
    body << "<line x1=\"" << num(sx(x)) << "\" y1=\"" << num(sy(0) - 5)
         << "\" x2=\"" << num(sx(x)) << "\" y2=\"" << num(sy(0) + 5)
         << "\" stroke=\"#444\" stroke-width=\"1.5\"/>\n";
  }
};

// Samples the geodesic between two boundary points of a piece (either may be
// ideal; pass inf=true for the vertical end).
std::vector<UhpPoint> sample_geodesic(bool a_inf, double ax, double ay,
                                      bool b_inf, double bx, double by,
                                      double clip) {
  std::vector<UhpPoint> pts;
  if (a_inf && b_inf) return pts;
  if (a_inf || b_inf) {
    double x = a_inf ? bx : ax;
    double y0 = a_inf ? by : ay;
    pts.push_back({x, y0});
    pts.push_back({x, clip});
    return pts;
  }
  if (std::abs(ax - bx) < 1e-9) {
    pts.push_back({ax, ay});
    pts.push_back({bx, by});
    return pts;
  }
  double c = (ax * ax + ay * ay - bx * bx - by * by) / (2 * (ax - bx));
  double R = std::hypot(ax - c, ay);
  double t0 = std::atan2(ay, ax - c), t1 = std::atan2(by, bx - c);
  int n = 48;
  for (int i = 0; i <= n; ++i) {
    double th = t0 + (t1 - t0) * i / n;
    pts.push_back({c + R * std::cos(th), R * std::sin(th)});
  }
  return pts;
}

// Endpoint of an edge as (inf flag, x, y): a finite corner or the ideal end.
struct BPoint {
  bool inf = false;
  double x = 0, y = 0;
};

BPoint edge_end(const EdgeRealization& e, bool start, const Isometry& T) {
  const std::optional<UhpPoint>& c = start ? e.c0 : e.c1;
  if (c) {
    UhpPoint p = apply(T, *c);
    return {false, p.x, p.y};
  }
  IdealPoint q = apply(T, start ? e.line.p : e.line.q);
  return {q.inf, q.inf ? 0 : q.v, 0};
}

int cmd_render(const std::string& file, const std::string& out, bool foliation,
               double clip) {
  Surface s = load_path(file);
  ValidationReport vr = validate(s);
  if (!vr.valid) {
    for (const std::string& v : vr.violations)
      std::cerr << "hypstretch: " << v << "\n";
    return kExitInvalid;
  }

  // Breadth-first placement through the gluing graph.
  std::vector<PieceRealization> reals;
  for (const Piece& p : s.pieces) reals.push_back(realize(p));
  std::vector<std::optional<Isometry>> place(s.pieces.size());
  place[0] = Isometry::identity();
  std::queue<int> q;
  q.push(0);
  while (!q.empty()) {
    int cur = q.front();
    q.pop();
    for (const Gluing& g : s.gluings) {
      for (int dir = 0; dir < 2; ++dir) {
        int a = dir ? g.to_piece : g.from_piece;
        int b = dir ? g.from_piece : g.to_piece;
        const std::string& ea = dir ? g.to_edge : g.from_edge;
        const std::string& eb = dir ? g.from_edge : g.to_edge;
        if (a != cur || place[b]) continue;
        place[b] = compose(*place[cur],
                           edge_transition(reals[a], ea, reals[b], eb,
                                           g.shear));
        q.push(b);
      }
    }
  }

  Svg svg;
  svg.clip = clip;
  double xmin = 1e300, xmax = -1e300;
  auto see = [&](double x) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  };
  for (size_t i = 0; i < s.pieces.size(); ++i) {
    const Isometry& T = *place[i];
    for (const auto& [name, e] : reals[i].edges)
      for (bool start : {true, false}) {
        BPoint p = edge_end(e, start, T);
        if (!p.inf) see(p.x);
      }
    for (const auto& [name, v] : reals[i].vertices) see(apply(T, v).x);
  }
  if (xmin > xmax) {
    xmin = 0;
    xmax = 1;
  }
  svg.xmin = xmin - 0.5;
  svg.xmax = xmax + 0.5;

  const char* leaf_style = "stroke=\"#1f4e9c\" stroke-width=\"1.6\"";
  const char* bdry_style = "stroke=\"#222\" stroke-width=\"2.2\"";
  const char* fol_style = "stroke=\"#9ec2e8\" stroke-width=\"0.8\"";

  for (size_t i = 0; i < s.pieces.size(); ++i) {
    const Isometry& T = *place[i];
    const PieceRealization& r = reals[i];

    if (foliation) {
      for (const FoliationSector& sec : foliation_sectors(s.pieces[i])) {
        for (int k = 1; k <= 5; ++k) {
          double d = sec.d_min + 0.35 * k;
          // Horocycle at leaf parameter d, sampled and kept inside the piece.
          std::vector<UhpPoint> run;
          auto flush = [&]() {
            svg.polyline(run, fol_style);
            run.clear();
          };
          if (sec.center.inf) {
            double y = sec.reference.y * std::exp(d);
            for (int m = 0; m <= 240; ++m) {
              UhpPoint p{svg.xmin + (svg.xmax - svg.xmin) * m / 240.0, y};
              if (piece_contains(r, p, 1e-9))
                run.push_back(apply(T, p));
              else
                flush();
            }
          } else {
            double c = sec.center.v;
            double dx = sec.reference.x - c;
            double diam = (dx * dx + sec.reference.y * sec.reference.y) /
                          sec.reference.y * std::exp(-d);
            double R = diam / 2;
            for (int m = 1; m < 240; ++m) {
              double th = 2 * M_PI * m / 240.0;
              UhpPoint p{c + R * std::sin(th), R * (1 - std::cos(th))};
              if (piece_contains(r, p, 1e-9))
                run.push_back(apply(T, p));
              else
                flush();
            }
          }
          flush();
        }
      }
    }

    for (const auto& [name, e] : r.edges) {
      BPoint a = edge_end(e, true, T);
      BPoint b = edge_end(e, false, T);
      svg.polyline(sample_geodesic(a.inf, a.x, a.y, b.inf, b.x, b.y, clip),
                   name[0] == 'l' ? leaf_style : bdry_style);
    }
    for (const auto& [name, v] : r.ideal_vertices) {
      IdealPoint p = apply(T, v);
      if (!p.inf) svg.tick(p.v);
    }
    try {
      for (const auto& [name, c] : centers(s.pieces[i]))
        svg.dot(apply(T, c), 3.5, "fill=\"#c03030\"");
    } catch (const GeomError&) {
    }
    if (s.pieces[i].kind != PieceKind::Triangle)
      for (const auto& [name, spt] : special_points(s.pieces[i]))
        svg.dot(apply(T, spt.point), 3.0,
                "fill=\"none\" stroke=\"#2e8b57\" stroke-width=\"1.5\"");
  }

  double w = 2 * svg.margin + svg.scale * (svg.xmax - svg.xmin);
  double h = 2 * svg.margin + svg.scale * clip;
  std::ofstream o(out, std::ios::binary);
  if (!o.good()) {
    std::cerr << "hypstretch: cannot write " << out << "\n";
    return kExitIo;
  }
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Svg::num(w)
    << "\" height=\"" << Svg::num(h) << "\" viewBox=\"0 0 " << Svg::num(w)
    << " " << Svg::num(h) << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<line x1=\"0\" y1=\"" << Svg::num(svg.sy(0)) << "\" x2=\""
    << Svg::num(w) << "\" y2=\"" << Svg::num(svg.sy(0))
    << "\" stroke=\"#888\" stroke-width=\"1\"/>\n"
    << svg.body.str() << "</svg>\n";
  return o.good() ? 0 : kExitIo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperbolic surfaces from shear-glued pieces: validation, "
               "stretch rays, lengths, distance estimates, rendering"};
  app.require_subcommand(1);

  std::string file, file2, out;
  double t = 0, clip = 3.0;
  std::vector<double> ts;
  int depth = 3;
  bool curves_only = false, foliation = false;

  CLI::App* check = app.add_subcommand("check", "validate and classify");
  check->add_option("file", file)->required();

  CLI::App* stretch = app.add_subcommand("stretch", "write the time-t point "
                                                    "of the stretch ray");
  stretch->add_option("file", file)->required();
  stretch->add_option("--t", t, "stretch time (>= 0)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  stretch->add_option("--out", out)->required();

  CLI::App* lengths = app.add_subcommand("lengths", "candidate length table");
  lengths->add_option("file", file)->required();
  lengths->add_option("--depth", depth)->check(CLI::NonNegativeNumber);

  CLI::App* distance = app.add_subcommand("distance",
                                          "arc-distance lower bound");
  distance->add_option("fileX", file)->required();
  distance->add_option("fileY", file2)->required();
  distance->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
  distance->add_flag("--curves-only", curves_only,
                     "exclude arcs (curve-distance variant)");

  CLI::App* verify = app.add_subcommand("verify", "invariant suite report");
  verify->add_option("file", file)->required();
  verify->add_option("--t", ts, "stretch-time grid")
      ->required()
      ->delimiter(',');

  CLI::App* render = app.add_subcommand("render", "SVG of developed pieces");
  render->add_option("file", file)->required();
  render->add_option("--out", out)->required();
  render->add_flag("--foliation", foliation, "draw horocyclic leaves");
  render->add_option("--clip", clip, "vertical clip height")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) return cmd_check(file);
  if (stretch->parsed()) return cmd_stretch(file, t, out);
  if (lengths->parsed()) return cmd_lengths(file, depth);
  if (distance->parsed()) return cmd_distance(file, file2, depth, curves_only);
  if (verify->parsed()) return cmd_verify(file, ts);
  if (render->parsed()) return cmd_render(file, out, foliation, clip);
  return 0;
}
