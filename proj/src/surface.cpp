#include "hypstretch/surface.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace hyp {

namespace {

constexpr double kLenTol = 1e-9;

using json = nlohmann::json;

std::string kind_name(PieceKind k) {
  switch (k) {
    case PieceKind::Triangle: return "triangle";
    case PieceKind::Quad: return "quad";
    case PieceKind::Pentagon: return "pentagon";
    case PieceKind::Hexagon: return "hexagon";
  }
  return "?";
}

// Edge labels in counterclockwise boundary order; every edge is oriented in
// this direction (piece on the left).
const std::vector<std::string>& boundary_order(PieceKind k) {
  static const std::vector<std::string> tri = {"l3", "l1", "l2"};
  static const std::vector<std::string> quad = {"a1", "l1", "l2", "l3"};
  static const std::vector<std::string> pent = {"l1", "a1", "l2", "l3", "a2"};
  static const std::vector<std::string> hex = {"l2", "a3", "l1",
                                               "a2", "l3", "a1"};
  switch (k) {
    case PieceKind::Triangle: return tri;
    case PieceKind::Quad: return quad;
    case PieceKind::Pentagon: return pent;
    case PieceKind::Hexagon: return hex;
  }
  return tri;
}

std::string cyclic_step(PieceKind k, const std::string& edge, int delta) {
  const auto& order = boundary_order(k);
  auto it = std::find(order.begin(), order.end(), edge);
  if (it == order.end())
    throw GeomError("PATH_BROKEN", "no edge " + edge + " on this piece");
  int n = (int)order.size();
  int i = (int)(it - order.begin());
  return order[((i + delta) % n + n) % n];
}

std::string succ_edge(PieceKind k, const std::string& e) {
  return cyclic_step(k, e, 1);
}
std::string pred_edge(PieceKind k, const std::string& e) {
  return cyclic_step(k, e, -1);
}

bool is_a_edge(const std::string& e) { return !e.empty() && e[0] == 'a'; }
bool is_l_edge(const std::string& e) { return !e.empty() && e[0] == 'l'; }

// Signed arc-length coordinate of an on-edge point in the chart where the
// edge is the upward imaginary axis.
double ucoord(const Isometry& standardizer, const UhpPoint& p) {
  return std::log(apply(standardizer, p).y);
}

struct GluingEnd {
  int gluing = -1;
  bool forward = true;  // true when this end is the `from` side
};

// (piece, edge) -> gluing lookup for every glued l-edge end.
std::map<std::pair<int, std::string>, GluingEnd> gluing_index(
    const Surface& s) {
  std::map<std::pair<int, std::string>, GluingEnd> m;
  for (int i = 0; i < (int)s.gluings.size(); ++i) {
    const Gluing& g = s.gluings[i];
    m[{g.from_piece, g.from_edge}] = {i, true};
    m[{g.to_piece, g.to_edge}] = {i, false};
  }
  return m;
}

std::vector<PieceRealization> realize_all(const Surface& s) {
  std::vector<PieceRealization> r;
  r.reserve(s.pieces.size());
  for (const Piece& p : s.pieces) r.push_back(realize(p));
  return r;
}

}  // namespace

Isometry edge_transition(const PieceRealization& out_r, const std::string& out_e,
                         const PieceRealization& in_r, const std::string& in_e,
                         std::optional<double> shear) {
  const EdgeRealization& a = out_r.edges.at(out_e);
  const EdgeRealization& b = in_r.edges.at(in_e);
  Isometry si = standardize(a.line);
  Isometry sj = standardize(b.line);
  double k = 0;
  switch (a.type) {
    case EdgeType::Finite:
      k = ucoord(si, *a.c1) + ucoord(sj, *b.c0);
      break;
    case EdgeType::HalfInfinite:
      k = ucoord(si, a.c0 ? *a.c0 : *a.c1) + ucoord(sj, b.c0 ? *b.c0 : *b.c1);
      break;
    case EdgeType::BiInfinite:
      if (!shear)
        throw GeomError("PATH_BROKEN", "bi-infinite gluing without a shear");
      k = ucoord(si, *a.center) + ucoord(sj, *b.center) + *shear;
      break;
  }
  // z -> -e^k / z reverses the standardized edge and swaps its sides.
  Isometry flip = Isometry::from_matrix(0, -std::exp(k), 1, 0);
  return compose(si.inverse(), compose(flip, sj));
}

namespace {

// Gluing crossed when leaving `out` via out_e and entering `in` via in_e.
const Gluing& crossing_gluing(const Surface& s,
                              const std::map<std::pair<int, std::string>,
                                             GluingEnd>& idx,
                              int out, const std::string& out_e, int in,
                              const std::string& in_e) {
  auto it = idx.find({out, out_e});
  if (it == idx.end())
    throw GeomError("PATH_BROKEN", "edge " + out_e + " of piece " +
                                       std::to_string(out) + " is not glued");
  const Gluing& g = s.gluings[it->second.gluing];
  int op = it->second.forward ? g.to_piece : g.from_piece;
  std::string oe = it->second.forward ? g.to_edge : g.from_edge;
  if (op != in || oe != in_e)
    throw GeomError("PATH_BROKEN",
                    "gluing at piece " + std::to_string(out) + "." + out_e +
                        " does not lead to piece " + std::to_string(in) +
                        "." + in_e);
  return g;
}

Isometry develop_impl(const Surface& s,
                      const std::vector<PieceRealization>& reals,
                      const std::map<std::pair<int, std::string>, GluingEnd>&
                          idx,
                      const DualPath& path) {
  if (path.steps.empty()) return Isometry::identity();
  for (const PathStep& st : path.steps)
    if (st.piece < 0 || st.piece >= (int)s.pieces.size())
      throw GeomError("PATH_BROKEN", "piece index out of range");
  Isometry f = Isometry::identity();
  size_t n = path.steps.size();
  size_t crossings = path.closed ? n : n - 1;
  for (size_t k = 0; k < crossings; ++k) {
    const PathStep& cur = path.steps[k];
    const PathStep& nxt = path.steps[(k + 1) % n];
    const Gluing& g =
        crossing_gluing(s, idx, cur.piece, cur.exit, nxt.piece, nxt.enter);
    f = compose(f, edge_transition(reals[cur.piece], cur.exit,
                                   reals[nxt.piece], nxt.enter, g.shear));
  }
  return f;
}

// --- candidate enumeration helpers -----------------------------------------

struct Crossing {
  int gluing = 0;
  bool forward = true;
};

int encode(const Crossing& c) { return 2 * c.gluing + (c.forward ? 0 : 1); }

std::pair<int, std::string> src_of(const Surface& s, const Crossing& c) {
  const Gluing& g = s.gluings[c.gluing];
  return c.forward ? std::make_pair(g.from_piece, g.from_edge)
                   : std::make_pair(g.to_piece, g.to_edge);
}

std::pair<int, std::string> dst_of(const Surface& s, const Crossing& c) {
  const Gluing& g = s.gluings[c.gluing];
  return c.forward ? std::make_pair(g.to_piece, g.to_edge)
                   : std::make_pair(g.from_piece, g.from_edge);
}

std::vector<int> word_code(const std::vector<Crossing>& w) {
  std::vector<int> v;
  v.reserve(w.size());
  for (const Crossing& c : w) v.push_back(encode(c));
  return v;
}

std::vector<Crossing> inverted(const std::vector<Crossing>& w) {
  std::vector<Crossing> v(w.rbegin(), w.rend());
  for (Crossing& c : v) c.forward = !c.forward;
  return v;
}

// Lexicographically minimal encoding over all rotations of the word and of
// its inverse.
std::vector<int> canonical_closed(const std::vector<Crossing>& w) {
  std::vector<int> best;
  for (const std::vector<Crossing>& cand : {w, inverted(w)}) {
    std::vector<int> code = word_code(cand);
    for (size_t r = 0; r < code.size(); ++r) {
      std::vector<int> rot(code.begin() + r, code.end());
      rot.insert(rot.end(), code.begin(), code.begin() + r);
      if (best.empty() || rot < best) best = rot;
    }
  }
  return best;
}

DualPath closed_word_to_path(const Surface& s,
                             const std::vector<Crossing>& w) {
  DualPath p;
  p.closed = true;
  size_t n = w.size();
  for (size_t k = 0; k < n; ++k) {
    auto in = dst_of(s, w[(k + n - 1) % n]);
    auto out = src_of(s, w[k]);
    p.steps.push_back({in.first, in.second, out.second});
  }
  return p;
}

std::string crossing_name(const Surface& s, const Crossing& c) {
  return "g" + std::to_string(c.gluing) + (c.forward ? "+" : "-");
}

// Boundary components that carry a-edges, as closed dual words.  Each walk
// alternates: traverse an a-edge, cross the gluing at the following l-edge,
// continue along the a-edge after the entered l-edge.
std::vector<DualPath> boundary_walks(const Surface& s) {
  auto idx = gluing_index(s);
  std::set<std::pair<int, std::string>> seen;
  std::vector<DualPath> out;
  for (int pi = 0; pi < (int)s.pieces.size(); ++pi) {
    for (const std::string& e : boundary_order(s.pieces[pi].kind)) {
      if (!is_a_edge(e) || seen.count({pi, e})) continue;
      DualPath path;
      path.closed = true;
      int p = pi;
      std::string a = e;
      std::vector<std::string> enters;  // entered l-edge, per step
      std::vector<std::pair<int, std::string>> exits;
      do {
        seen.insert({p, a});
        std::string exit = succ_edge(s.pieces[p].kind, a);
        exits.push_back({p, exit});
        auto it = idx.find({p, exit});
        if (it == idx.end())
          throw GeomError("PATH_BROKEN",
                          "boundary walk hit the unglued edge " + exit +
                              " of piece " + std::to_string(p));
        const Gluing& g = s.gluings[it->second.gluing];
        int np = it->second.forward ? g.to_piece : g.from_piece;
        std::string ne = it->second.forward ? g.to_edge : g.from_edge;
        enters.push_back(ne);
        p = np;
        a = succ_edge(s.pieces[p].kind, ne);
      } while (!(p == pi && a == e));
      size_t n = exits.size();
      for (size_t k = 0; k < n; ++k)
        path.steps.push_back({exits[k].first, enters[(k + n - 1) % n],
                              exits[k].second});
      out.push_back(path);
    }
  }
  return out;
}

std::vector<Crossing> path_to_word(const Surface& s, const DualPath& p) {
  auto idx = gluing_index(s);
  std::vector<Crossing> w;
  size_t n = p.steps.size();
  for (size_t k = 0; k < n; ++k) {
    const PathStep& st = p.steps[k];
    auto it = idx.find({st.piece, st.exit});
    if (it == idx.end()) throw GeomError("PATH_BROKEN", "unglued exit edge");
    w.push_back({it->second.gluing, it->second.forward});
  }
  return w;
}

}  // namespace

// --- JSON I/O ----------------------------------------------------------------

Surface load_surface(std::istream& is) {
  json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    throw GeomError("BAD_SURFACE_FILE", e.what());
  }
  Surface s;
  try {
    s.topology.g = j.at("topology").at("g").get<int>();
    s.topology.b = j.at("topology").at("b").get<int>();
    s.topology.p = j.at("topology").at("p").get<int>();
    std::map<int, int> id_to_index;
    // Normalization may relabel a piece's edges; remember the map per piece.
    std::vector<std::map<std::string, std::string>> relabel;
    for (const json& pj : j.at("pieces")) {
      int id = pj.at("id").get<int>();
      if (id_to_index.count(id))
        throw GeomError("BAD_SURFACE_FILE",
                        "duplicate piece id " + std::to_string(id));
      id_to_index[id] = (int)s.pieces.size();
      std::string kind = pj.at("kind").get<std::string>();
      std::vector<double> sh = pj.at("shears").get<std::vector<double>>();
      std::map<std::string, std::string> m;
      if (kind == "triangle" && sh.size() == 0) {
        s.pieces.push_back(Piece::triangle());
      } else if (kind == "quad" && sh.size() == 1) {
        s.pieces.push_back(Piece::quad(sh[0]));
      } else if (kind == "pentagon" && sh.size() == 2) {
        s.pieces.push_back(Piece::pentagon(sh[0], sh[1]));
        if (sh[0] > sh[1])
          m = {{"l2", "l3"}, {"l3", "l2"}, {"a1", "a2"}, {"a2", "a1"}};
      } else if (kind == "hexagon" && sh.size() == 3) {
        s.pieces.push_back(Piece::hexagon(sh[0], sh[1], sh[2]));
        if (sh[1] <= 0)
          m = {{"l2", "l1"}, {"l3", "l2"}, {"l1", "l3"},
               {"a2", "a1"}, {"a3", "a2"}, {"a1", "a3"}};
        else if (sh[2] <= 0)
          m = {{"l3", "l1"}, {"l1", "l2"}, {"l2", "l3"},
               {"a3", "a1"}, {"a1", "a2"}, {"a2", "a3"}};
      } else {
        throw GeomError("BAD_SURFACE_FILE",
                        "piece kind/shear count mismatch for id " +
                            std::to_string(id));
      }
      s.ids.push_back(id);
      relabel.push_back(std::move(m));
    }
    auto lookup = [&](int id) {
      auto it = id_to_index.find(id);
      if (it == id_to_index.end())
        throw GeomError("BAD_SURFACE_FILE",
                        "gluing references unknown piece id " +
                            std::to_string(id));
      return it->second;
    };
    auto mapped = [&](int piece, const std::string& edge) {
      const auto& m = relabel[piece];
      auto it = m.find(edge);
      return it == m.end() ? edge : it->second;
    };
    for (const json& gj : j.at("gluings")) {
      Gluing g;
      g.from_piece = lookup(gj.at("from").at(0).get<int>());
      g.from_edge = mapped(g.from_piece, gj.at("from").at(1).get<std::string>());
      g.to_piece = lookup(gj.at("to").at(0).get<int>());
      g.to_edge = mapped(g.to_piece, gj.at("to").at(1).get<std::string>());
      if (gj.contains("shear")) g.shear = gj.at("shear").get<double>();
      s.gluings.push_back(g);
    }
  } catch (const GeomError&) {
    throw;
  } catch (const std::exception& e) {
    throw GeomError("BAD_SURFACE_FILE", e.what());
  }
  return s;
}

void save_surface(std::ostream& os, const Surface& s) {
  json j;
  j["topology"] = {{"g", s.topology.g}, {"b", s.topology.b},
                   {"p", s.topology.p}};
  j["pieces"] = json::array();
  for (size_t i = 0; i < s.pieces.size(); ++i) {
    const Piece& p = s.pieces[i];
    std::vector<double> sh;
    if (p.kind == PieceKind::Quad) sh = {p.s1};
    if (p.kind == PieceKind::Pentagon) sh = {p.s1, p.s2};
    if (p.kind == PieceKind::Hexagon) sh = {p.s1, p.s2, p.s3};
    int id = i < s.ids.size() ? s.ids[i] : (int)i;
    j["pieces"].push_back(
        {{"id", id}, {"kind", kind_name(p.kind)}, {"shears", sh}});
  }
  j["gluings"] = json::array();
  for (const Gluing& g : s.gluings) {
    int fid = g.from_piece < (int)s.ids.size() ? s.ids[g.from_piece]
                                               : g.from_piece;
    int tid = g.to_piece < (int)s.ids.size() ? s.ids[g.to_piece] : g.to_piece;
    json gj = {{"from", {fid, g.from_edge}}, {"to", {tid, g.to_edge}}};
    if (g.shear) gj["shear"] = *g.shear;
    j["gluings"].push_back(gj);
  }
  os << j.dump(2) << '\n';
}

// --- validation ---------------------------------------------------------------

ValidationReport validate(const Surface& s) {
  ValidationReport r;
  auto bad = [&](const std::string& msg) {
    r.valid = false;
    r.violations.push_back(msg);
  };
  const Topology& t = s.topology;
  r.expected_pieces = 4 * t.g - 4 + 2 * t.p + 2 * t.b;
  if ((int)s.pieces.size() != r.expected_pieces)
    bad("piece count " + std::to_string(s.pieces.size()) +
        " != 4g-4+2p+2b = " + std::to_string(r.expected_pieces));

  std::vector<PieceRealization> reals = realize_all(s);
  std::map<std::pair<int, std::string>, int> uses;
  for (int i = 0; i < (int)s.gluings.size(); ++i) {
    const Gluing& g = s.gluings[i];
    std::string tag = "gluing " + std::to_string(i);
    bool ok = true;
    for (auto [p, e] : {std::pair{g.from_piece, g.from_edge},
                        std::pair{g.to_piece, g.to_edge}}) {
      if (p < 0 || p >= (int)s.pieces.size()) {
        bad(tag + ": piece index out of range");
        ok = false;
      } else if (!reals[p].edges.count(e)) {
        bad(tag + ": no edge " + e + " on piece " + std::to_string(p));
        ok = false;
      } else if (!is_l_edge(e)) {
        bad(tag + ": a-edge " + e + " of piece " + std::to_string(p) +
            " must stay on the boundary");
        ok = false;
      }
    }
    if (!ok) continue;
    if (g.from_piece == g.to_piece && g.from_edge == g.to_edge) {
      bad(tag + ": edge glued to itself");
      continue;
    }
    ++uses[{g.from_piece, g.from_edge}];
    ++uses[{g.to_piece, g.to_edge}];
    const EdgeRealization& a = reals[g.from_piece].edges.at(g.from_edge);
    const EdgeRealization& b = reals[g.to_piece].edges.at(g.to_edge);
    if (a.type != b.type) {
      bad(tag + ": incompatible edge types");
      continue;
    }
    switch (a.type) {
      case EdgeType::Finite: {
        auto len = [](const EdgeRealization& e) {
          return dist(*e.c0, *e.c1);
        };
        if (std::abs(len(a) - len(b)) > kLenTol)
          bad(tag + ": finite edge lengths differ by " +
              std::to_string(std::abs(len(a) - len(b))));
        if (g.shear) bad(tag + ": shear given on a finite edge");
        break;
      }
      case EdgeType::HalfInfinite:
        if (a.has_ideal_start() == b.has_ideal_start())
          bad(tag + ": half-infinite edges must pair a corner-start edge "
                    "with a corner-end edge");
        if (g.shear) bad(tag + ": shear given on a half-infinite edge");
        break;
      case EdgeType::BiInfinite:
        if (!g.shear) bad(tag + ": bi-infinite gluing needs a shear");
        break;
    }
  }
  for (int p = 0; p < (int)s.pieces.size(); ++p)
    for (const std::string& e : boundary_order(s.pieces[p].kind))
      if (is_l_edge(e)) {
        int n = uses.count({p, e}) ? uses.at({p, e}) : 0;
        if (n != 1)
          bad("edge " + e + " of piece " + std::to_string(p) + " is glued " +
              std::to_string(n) + " times (expected 1)");
      }

  // Connectivity of the gluing graph.
  if (!s.pieces.empty()) {
    std::vector<int> comp(s.pieces.size());
    for (size_t i = 0; i < comp.size(); ++i) comp[i] = (int)i;
    std::function<int(int)> root = [&](int v) {
      return comp[v] == v ? v : comp[v] = root(comp[v]);
    };
    for (const Gluing& g : s.gluings)
      if (g.from_piece >= 0 && g.from_piece < (int)s.pieces.size() &&
          g.to_piece >= 0 && g.to_piece < (int)s.pieces.size())
        comp[root(g.from_piece)] = root(g.to_piece);
    for (size_t i = 0; i < comp.size(); ++i)
      if (root((int)i) != root(0)) {
        bad("gluing graph is disconnected");
        break;
      }
  }
  return r;
}

// --- developing and lengths ----------------------------------------------------

Isometry develop(const Surface& s, const DualPath& path) {
  return develop_impl(s, realize_all(s), gluing_index(s), path);
}

double curve_length(const Surface& s, const DualPath& path) {
  if (!path.closed || path.steps.empty())
    throw GeomError("PATH_BROKEN", "curve_length needs a closed word");
  double l = translation_length(develop(s, path));
  if (!(l > 0))
    throw GeomError("PARABOLIC_OR_TRIVIAL",
                    "holonomy is not a hyperbolic translation");
  return l;
}

double arc_length(const Surface& s, const DualPath& path) {
  if (path.closed || path.steps.empty())
    throw GeomError("PATH_BROKEN", "arc_length needs an open word");
  const PathStep& first = path.steps.front();
  const PathStep& last = path.steps.back();
  if (!is_a_edge(first.enter) || !is_a_edge(last.exit))
    throw GeomError("PATH_BROKEN", "arc words must start and end on a-edges");
  std::vector<PieceRealization> reals = realize_all(s);
  Isometry f = develop_impl(s, reals, gluing_index(s), path);
  Geodesic g0 = reals[first.piece].edges.at(first.enter).line;
  Geodesic g1 = apply(f, reals[last.piece].edges.at(last.exit).line);
  bool same = (same_ideal(g0.p, g1.p, kLenTol) &&
               same_ideal(g0.q, g1.q, kLenTol)) ||
              (same_ideal(g0.p, g1.q, kLenTol) &&
               same_ideal(g0.q, g1.p, kLenTol));
  bool touch = same_ideal(g0.p, g1.p, kLenTol) ||
               same_ideal(g0.p, g1.q, kLenTol) ||
               same_ideal(g0.q, g1.p, kLenTol) ||
               same_ideal(g0.q, g1.q, kLenTol);
  if (same || touch)
    throw GeomError("GEODESICS_INTERSECT",
                    "no orthogeodesic in this arc class");
  try {
    return dist_between_geodesics(g0, g1);
  } catch (const GeomError& e) {
    if (e.code == "INTERSECTING_GEODESICS")
      throw GeomError("GEODESICS_INTERSECT",
                      "no orthogeodesic in this arc class");
    throw;
  }
}

double candidate_length(const Surface& s, const Candidate& c) {
  return c.kind == Candidate::Kind::Arc ? arc_length(s, c.path)
                                        : curve_length(s, c.path);
}

// --- enumeration ---------------------------------------------------------------

std::vector<Candidate> enumerate_candidates(const Surface& s, int depth) {
  std::vector<Candidate> out;
  std::set<std::vector<int>> closed_seen;

  int bi = 0;
  for (const DualPath& p : boundary_walks(s)) {
    Candidate c;
    c.kind = Candidate::Kind::Boundary;
    c.path = p;
    c.name = "boundary:" + std::to_string(bi++);
    closed_seen.insert(canonical_closed(path_to_word(s, p)));
    out.push_back(c);
  }

  // Closed reduced words modulo rotation and inversion.
  int ng = (int)s.gluings.size();
  std::vector<Crossing> word;
  auto reduced_pair = [&](const Crossing& a, const Crossing& b) {
    auto mid_in = dst_of(s, a);
    auto mid_out = src_of(s, b);
    return mid_in.first == mid_out.first && mid_in.second != mid_out.second;
  };
  std::function<void(int)> rec = [&](int remaining) {
    if (!word.empty() && reduced_pair(word.back(), word.front())) {
      std::vector<int> canon = canonical_closed(word);
      if (closed_seen.insert(canon).second) {
        Candidate c;
        c.kind = Candidate::Kind::Curve;
        c.path = closed_word_to_path(s, word);
        c.name = "curve:";
        for (const Crossing& x : word) c.name += crossing_name(s, x) + " ";
        c.name.pop_back();
        out.push_back(c);
      }
    }
    if (remaining == 0) return;
    for (int gi = 0; gi < ng; ++gi)
      for (bool fwd : {true, false}) {
        Crossing c{gi, fwd};
        if (!word.empty() && !reduced_pair(word.back(), c)) continue;
        word.push_back(c);
        rec(remaining - 1);
        word.pop_back();
      }
  };
  if (depth >= 1) rec(depth);

  // Open reduced words between a-edges, modulo inversion.  An arc is encoded
  // as (start endpoint, crossings, end endpoint); its inverse swaps the
  // endpoints and reverses/flips the crossings.
  std::set<std::vector<int>> arc_seen;
  auto idx = gluing_index(s);
  auto edge_code = [&](int piece, const std::string& e) {
    const auto& order = boundary_order(s.pieces[piece].kind);
    int k = (int)(std::find(order.begin(), order.end(), e) - order.begin());
    return piece * 8 + k;
  };
  std::vector<Crossing> arc_word;
  int start_piece = 0;
  std::string start_edge;
  auto emit_arc = [&](int end_piece, const std::string& end_edge) {
    std::vector<int> fwd = {edge_code(start_piece, start_edge)};
    for (const Crossing& c : arc_word) fwd.push_back(encode(c));
    fwd.push_back(edge_code(end_piece, end_edge));
    std::vector<int> rev = {edge_code(end_piece, end_edge)};
    for (const Crossing& c : inverted(arc_word)) rev.push_back(encode(c));
    rev.push_back(edge_code(start_piece, start_edge));
    if (!arc_seen.insert(std::min(fwd, rev)).second) return;
    Candidate c;
    c.kind = Candidate::Kind::Arc;
    c.path.closed = false;
    size_t n = arc_word.size();
    std::string enter = start_edge;
    for (size_t k = 0; k < n; ++k) {
      auto src = src_of(s, arc_word[k]);
      c.path.steps.push_back({src.first, enter, src.second});
      enter = dst_of(s, arc_word[k]).second;
    }
    c.path.steps.push_back({end_piece, enter, end_edge});
    c.name = "arc:" + std::to_string(start_piece) + "." + start_edge;
    for (const Crossing& x : arc_word) c.name += " " + crossing_name(s, x);
    c.name += " " + std::to_string(end_piece) + "." + end_edge;
    out.push_back(c);
  };
  std::function<void(int, const std::string&, int)> arec =
      [&](int piece, const std::string& enter, int steps_left) {
        for (const std::string& e : boundary_order(s.pieces[piece].kind)) {
          if (e == enter) continue;
          if (is_a_edge(e)) {
            emit_arc(piece, e);
          } else if (steps_left > 1) {
            auto it = idx.find({piece, e});
            if (it == idx.end()) continue;  // unglued l-edge: dead end
            const Gluing& g = s.gluings[it->second.gluing];
            int np = it->second.forward ? g.to_piece : g.from_piece;
            std::string ne = it->second.forward ? g.to_edge : g.from_edge;
            arc_word.push_back({it->second.gluing, it->second.forward});
            arec(np, ne, steps_left - 1);
            arc_word.pop_back();
          }
        }
      };
  if (depth >= 1)
    for (int p = 0; p < (int)s.pieces.size(); ++p)
      for (const std::string& e : boundary_order(s.pieces[p].kind))
        if (is_a_edge(e)) {
          start_piece = p;
          start_edge = e;
          arec(p, e, depth);
        }
  return out;
}

// --- classification -------------------------------------------------------------

BlockDecomposition classify(const Surface& s) {
  BlockDecomposition d;
  auto idx = gluing_index(s);
  auto partner = [&](int p, const std::string& e) {
    auto it = idx.find({p, e});
    if (it == idx.end())
      throw GeomError("PATH_BROKEN", "unglued l-edge in classify");
    const Gluing& g = s.gluings[it->second.gluing];
    return it->second.forward ? std::make_pair(g.to_piece, g.to_edge)
                              : std::make_pair(g.from_piece, g.from_edge);
  };
  for (int i = 0; i < (int)s.pieces.size(); ++i) {
    if (s.pieces[i].kind == PieceKind::Triangle)
      d.triangle_pieces.push_back(i);
    else
      d.block_pieces.push_back(i);
  }

  // A boundary leaf of the block: a quad's l2 glued to a triangle.
  auto is_boundary_leaf = [&](int p, const std::string& e) {
    if (s.pieces[p].kind != PieceKind::Quad || e != "l2") return false;
    auto [q, qe] = partner(p, e);
    return s.pieces[q].kind == PieceKind::Triangle;
  };

  // Walk around the ideal vertex sitting at the given end of the given edge
  // (end: 0 = orientation start, 1 = orientation end) until the next
  // boundary leaf, collecting the crossings as path steps.
  struct Arrival {
    int quad;
    int end;  // end of the arrival quad's l2 at which we arrived
    std::vector<PathStep> steps;
  };
  auto spike_walk = [&](int piece, std::string edge, int end) {
    Arrival a;
    std::string pending_enter;  // arrival edge of the current piece
    bool have_enter = false;
    while (true) {
      std::string e2 = end == 1 ? succ_edge(s.pieces[piece].kind, edge)
                                : pred_edge(s.pieces[piece].kind, edge);
      int end2 = end == 1 ? 0 : 1;
      if (is_boundary_leaf(piece, e2)) {
        a.quad = piece;
        a.end = end2;
        // The next spike leaves via the half-infinite edge at the other end.
        std::string leave = end2 == 0 ? "l3" : "l1";
        if (have_enter) a.steps.push_back({piece, pending_enter, leave});
        return a;
      }
      auto [np, ne] = partner(piece, e2);
      if (have_enter) a.steps.push_back({piece, pending_enter, e2});
      pending_enter = ne;
      have_enter = true;
      // Gluing reverses orientation: the matched end flips.
      int nend = end2 == 0 ? 1 : 0;
      piece = np;
      edge = ne;
      end = nend;
      // Loop continues around the same ideal vertex.
      (void)end2;
    }
  };

  std::set<int> visited;  // cycle quads already placed in a crown
  for (int p = 0; p < (int)s.pieces.size(); ++p) {
    if (!is_boundary_leaf(p, "l2") || visited.count(p)) continue;
    Crown crown;
    int q = p;
    int start_end = 0;  // begin winding around the start (C) end of l2
    int end = start_end;
    do {
      visited.insert(q);
      crown.quads.push_back(q);
      Arrival a = spike_walk(q, "l2", end);
      Spike sp;
      sp.steps = a.steps;
      crown.spikes.push_back(sp);
      q = a.quad;
      end = a.end == 0 ? 1 : 0;  // continue from the other end
    } while (!(q == p && end == start_end));
    for (const Spike& sp : crown.spikes)
      for (const PathStep& st : sp.steps) crown.core.steps.push_back(st);
    crown.core.closed = true;
    d.crowns.push_back(crown);
  }
  return d;
}

// --- distance estimate ----------------------------------------------------------

DistanceEstimate arc_distance_estimate(const Surface& x, const Surface& y,
                                       int depth, bool curves_only) {
  if (x.pieces.size() != y.pieces.size() ||
      x.gluings.size() != y.gluings.size())
    throw GeomError("COMBINATORIAL_MISMATCH", "surfaces differ in size");
  for (size_t i = 0; i < x.pieces.size(); ++i)
    if (x.pieces[i].kind != y.pieces[i].kind)
      throw GeomError("COMBINATORIAL_MISMATCH", "piece kinds differ");
  for (size_t i = 0; i < x.gluings.size(); ++i) {
    const Gluing& a = x.gluings[i];
    const Gluing& b = y.gluings[i];
    if (a.from_piece != b.from_piece || a.from_edge != b.from_edge ||
        a.to_piece != b.to_piece || a.to_edge != b.to_edge)
      throw GeomError("COMBINATORIAL_MISMATCH", "gluing patterns differ");
  }
  DistanceEstimate best;
  best.depth = depth;
  bool found = false;
  for (const Candidate& c : enumerate_candidates(x, depth)) {
    if (curves_only && c.kind == Candidate::Kind::Arc) continue;
    double lx, ly;
    try {
      lx = candidate_length(x, c);
      ly = candidate_length(y, c);
    } catch (const GeomError&) {
      continue;
    }
    double ratio = std::log(ly / lx);
    if (!found || ratio > best.lower_bound) {
      found = true;
      best.lower_bound = ratio;
      best.witness = c;
      best.length_from = lx;
      best.length_to = ly;
    }
  }
  if (!found)
    throw GeomError("COMBINATORIAL_MISMATCH",
                    "no measurable candidate at this depth");
  return best;
}

}  // namespace hyp
