#include "hypstretch/stretch.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "hypstretch/tolerance.hpp"

namespace hyp {

namespace {

struct GluingEnd {
  int gluing = -1;
  bool forward = true;
};

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

// Cache of canonical piece realizations, filled on demand.
class RealCache {
 public:
  explicit RealCache(const Surface& s) : s_(s), slots_(s.pieces.size()) {}
  const PieceRealization& operator()(int p) {
    if (!slots_[p]) slots_[p] = realize(s_.pieces[p]);
    return *slots_[p];
  }

 private:
  const Surface& s_;
  std::vector<std::optional<PieceRealization>> slots_;
};

[[noreturn]] void crown_error(const std::string& msg) {
  throw GeomError("NOT_A_CROWN", msg);
}

// Marked point of an edge as seen by the piece that owns it: the corner of a
// half-infinite edge, the center of a bi-infinite one.
UhpPoint edge_mark(const PieceRealization& r, const std::string& e) {
  const EdgeRealization& er = r.edges.at(e);
  switch (er.type) {
    case EdgeType::HalfInfinite: return er.c0 ? *er.c0 : *er.c1;
    case EdgeType::BiInfinite: return *er.center;
    case EdgeType::Finite: break;
  }
  crown_error("finite edge inside a spike walk");
}

// Develops one spike walk with the spike's ideal vertex at infinity and
// measures the fan.
CylinderSpike develop_spike(const Surface& s, RealCache& R,
                            const std::map<std::pair<int, std::string>,
                                           GluingEnd>& idx,
                            const Crown& c, int i) {
  int n = (int)c.quads.size();
  const Spike& sp = c.spikes[i];
  if (sp.steps.empty()) crown_error("empty spike walk");
  int Q = c.quads[i];
  int Qn = c.quads[(i + 1) % n];
  if (s.pieces[Q].kind != PieceKind::Quad)
    crown_error("cycle piece not a quad");
  // The exit end of Q's bi-infinite edge at this spike is recorded as the
  // exit label of the previous spike's arrival step.
  const PathStep& prev_last = c.spikes[(i + n - 1) % n].steps.back();
  if (prev_last.piece != Q) crown_error("spike cycle does not chain");
  int end0 = prev_last.exit == "l3" ? 1 : 0;

  struct FanEntry {
    IdealPoint pt;  // developed non-spike endpoint of the fan line
    bool special = false;
    std::optional<UhpPoint> mark_out, mark_in;  // developed marked points
  };
  std::vector<FanEntry> fan;

  const PieceRealization& rq = R(Q);
  const Geodesic& bline = rq.edges.at("l2").line;
  IdealPoint spike_pt = end0 == 0 ? bline.p : bline.q;
  IdealPoint first_pt = end0 == 0 ? bline.q : bline.p;

  Isometry T = Isometry::identity();
  // Contributions of Q itself: the doubled-quad diagonal sits at the
  // corner-free ideal vertex end.
  if (end0 == 1) fan.push_back({rq.edges.at("l1").line.p, false, {}, {}});
  std::string exit = end0 == 1 ? "l3" : "l1";
  UhpPoint mark_out = edge_mark(rq, exit);

  int cur = Q;
  UhpPoint center_next{};  // developed center of the arrival quad
  IdealPoint last_pt;      // developed far endpoint of the arrival leaf
  for (size_t k = 0; k < sp.steps.size(); ++k) {
    const PathStep& st = sp.steps[k];
    auto it = idx.find({cur, exit});
    if (it == idx.end()) crown_error("spike walk crosses an unglued edge");
    const Gluing& g = s.gluings[it->second.gluing];
    int tp = it->second.forward ? g.to_piece : g.from_piece;
    std::string te = it->second.forward ? g.to_edge : g.from_edge;
    if (tp != st.piece || te != st.enter)
      crown_error("spike walk disagrees with the gluing table");
    const PieceRealization& rn = R(st.piece);
    UhpPoint mo_dev = apply(T, mark_out);
    T = compose(T, edge_transition(R(cur), exit, rn, st.enter, g.shear));

    // The crossed gluing contributes one special fan line.
    const EdgeRealization& er = rn.edges.at(st.enter);
    bool last = k + 1 == sp.steps.size();
    IdealPoint shared_pt;
    if (st.enter == "l1") {
      shared_pt = er.line.p;  // spike at the corner-free end, line.q
    } else if (st.enter == "l3") {
      shared_pt = er.line.q;  // spike at the ideal start, line.p
    } else if (st.enter == "l2") {
      if (last) crown_error("arrival leaf entered through itself");
      bool spike_at_corner_side = st.exit == "l1";
      shared_pt = spike_at_corner_side ? er.line.q : er.line.p;
    } else {
      crown_error("spike walk through a boundary edge");
    }
    fan.push_back({apply(T, shared_pt), true, mo_dev,
                   apply(T, edge_mark(rn, st.enter))});

    if (!last) {
      switch (s.pieces[st.piece].kind) {
        case PieceKind::Pentagon:
          // Diagonal from the spike to the far end of the finite side.
          fan.push_back({apply(T, rn.edges.at("l1").line.q), false, {}, {}});
          break;
        case PieceKind::Quad: {
          // A quad chained through its bi-infinite edge carries a diagonal
          // only at its corner-side ideal vertex.
          bool corner_side = st.enter == "l1" || st.exit == "l1";
          if (corner_side)
            fan.push_back({apply(T, rn.edges.at("l3").line.q), false, {}, {}});
          break;
        }
        default:
          crown_error("spike walk through a piece with no ideal vertex here");
      }
      exit = st.exit;
      mark_out = edge_mark(rn, exit);
    } else {
      if (st.piece != Qn) crown_error("spike does not arrive at the next quad");
      if (s.pieces[st.piece].kind != PieceKind::Quad)
        crown_error("arrival piece not a quad");
      if (st.enter == "l3")
        fan.push_back({apply(T, rn.edges.at("l1").line.p), false, {}, {}});
      const Geodesic& al2 = rn.edges.at("l2").line;
      last_pt = apply(T, st.enter == "l3" ? al2.p : al2.q);
      center_next = apply(T, *rn.edges.at("l2").center);
    }
    cur = st.piece;
  }

  // Chart with the spike at infinity and the first leaf at x = 0.
  Isometry S = standardize(Geodesic{first_pt, spike_pt});
  auto xcoord = [&](const IdealPoint& p) {
    IdealPoint q = apply(S, p);
    if (q.inf) crown_error("fan line through the spike vertex");
    return q.v;
  };

  CylinderSpike out;
  out.quad_before = Q;
  out.quad_after = Qn;
  out.s_before = s.pieces[Q].s1;
  out.s_after = s.pieces[Qn].s1;

  std::vector<double> xs = {0.0};
  for (const FanEntry& fe : fan) xs.push_back(xcoord(fe.pt));
  xs.push_back(xcoord(last_pt));
  double dir = xs[1] - xs[0];
  for (size_t k = 0; k + 1 < xs.size(); ++k)
    if (!((xs[k + 1] - xs[k]) * dir > 0))
      crown_error("developed fan is not monotone");

  double tol = base_tol();
  for (size_t k = 0; k < fan.size(); ++k) {
    CylinderEdge e;
    e.special = fan[k].special;
    e.x = xs[k + 1];
    e.shear = std::log((xs[k + 2] - xs[k + 1]) / (xs[k + 1] - xs[k]));
    auto mark_height = [&](const UhpPoint& m) {
      UhpPoint z = apply(S, m);
      if (std::abs(z.x - e.x) > tol * std::max({1.0, z.y, std::abs(e.x)}))
        crown_error("marked point off its fan line");
      return std::log(z.y);
    };
    if (fan[k].mark_out) e.mark_out = mark_height(*fan[k].mark_out);
    if (fan[k].mark_in) e.mark_in = mark_height(*fan[k].mark_in);
    out.shear_sum += e.shear;
    out.edges.push_back(e);
  }

  // Horocyclic transport: in this chart the horocycle through the first
  // quad's center is horizontal; compare its hit on the arrival leaf with
  // the next quad's center, signed toward the corner-side ideal vertex.
  UhpPoint O0 = apply(S, *rq.edges.at("l2").center);
  UhpPoint O1 = apply(S, center_next);
  double xlast = xs.back();
  if (std::abs(O1.x - xlast) > tol * std::max({1.0, O1.y, std::abs(xlast)}))
    crown_error("arrival center off the arrival leaf");
  bool arrive_corner_free = sp.steps.back().enter == "l3";
  out.eta_shift = arrive_corner_free ? std::log(O1.y / O0.y)
                                     : std::log(O0.y / O1.y);
  return out;
}

double crown_shear(const Surface& s, int quad) {
  for (const Gluing& g : s.gluings) {
    if (g.from_piece == quad && g.from_edge == "l2") return g.shear.value();
    if (g.to_piece == quad && g.to_edge == "l2") return g.shear.value();
  }
  crown_error("cycle quad without a glued bi-infinite edge");
}

std::string tag(const char* base, size_t j, int i, int k = -1) {
  std::string s = std::string(base) + std::to_string(j) + "_" +
                  std::to_string(i);
  if (k >= 0) s += "_" + std::to_string(k);
  return s;
}

}  // namespace

double displacement(double s) { return 0.5 * std::log1p(std::exp(-s)); }

double displacement_geometric(double s) {
  PieceRealization r = realize(Piece::quad(s));
  Isometry S = standardize(r.edges.at("l2").line);
  double u_quad = std::log(apply(S, *r.edges.at("l2").center).y);
  // The ideal triangle completing the doubled quad has its third vertex at
  // the far end of the corner-side leaf; its center on the shared edge sits
  // at the height of that vertex's image.
  IdealPoint far = apply(S, r.edges.at("l1").line.p);
  if (far.inf) crown_error("degenerate doubled quad");
  return u_quad - std::log(std::abs(far.v));
}

CylinderModel build_cylinder(const Surface& s, const Crown& c) {
  if (c.quads.empty() || c.quads.size() != c.spikes.size())
    crown_error("crown without a quad/spike cycle");
  auto idx = gluing_index(s);
  RealCache R(s);
  CylinderModel m;
  for (int i = 0; i < (int)c.quads.size(); ++i)
    m.spikes.push_back(develop_spike(s, R, idx, c, i));
  return m;
}

CylinderModel stretched_cylinder(const Surface& s, const Crown& c, double t) {
  return build_cylinder(generalized_stretch(s, t), c);
}

std::vector<double> stretch_difference_check(const Surface& s, const Crown& c,
                                             double t) {
  CylinderModel m0 = build_cylinder(s, c);
  CylinderModel mt = stretched_cylinder(s, c, t);
  double et = std::exp(t);
  std::vector<double> out;
  for (size_t i = 0; i < m0.spikes.size(); ++i) {
    double si = m0.spikes[i].s_before, sj = m0.spikes[i].s_after;
    double rhs = -displacement(et * si) + et * displacement(si) -
                 displacement(et * sj) + et * displacement(sj);
    out.push_back(std::abs(mt.spikes[i].shear_sum -
                           et * m0.spikes[i].shear_sum - rhs));
  }
  return out;
}

std::vector<double> horocyclic_shift(const Surface& s, const Crown& c) {
  CylinderModel m = build_cylinder(s, c);
  std::vector<double> out;
  for (const CylinderSpike& sp : m.spikes) out.push_back(sp.eta_shift);
  return out;
}

StretchCocycle epsilon_cocycle(const Surface& s, const BlockDecomposition& d,
                               double t) {
  StretchCocycle out;
  out.t = t;
  out.track.generic = true;
  double et = std::exp(t);

  for (size_t j = 0; j < d.crowns.size(); ++j) {
    const Crown& c = d.crowns[j];
    CylinderModel m0 = build_cylinder(s, c);
    CylinderModel mt = stretched_cylinder(s, c, t);
    int n = (int)c.quads.size();
    Weights mu;

    // Boundary-leaf and spike branches first (shared between spikes/copies).
    for (int i = 0; i < n; ++i) {
      const CylinderSpike& sp0 = m0.spikes[i];
      for (const std::string& name :
           {tag("a", j, i), tag("b", j, i), tag("bm", j, i)})
        out.track.branches.push_back(name);
      double eps_b = displacement(et * sp0.s_before) -
                     et * displacement(sp0.s_before);
      double rho_b = crown_shear(s, sp0.quad_before) +
                     displacement(sp0.s_before);
      out.eps[tag("a", j, i)] = 0;
      out.eps[tag("b", j, i)] = eps_b;
      out.eps[tag("bm", j, i)] = eps_b;
      out.rho0[tag("b", j, i)] = rho_b;
      out.rho0[tag("bm", j, i)] = rho_b;
      mu[tag("a", j, i)] = 2;
      mu[tag("b", j, i)] = 1;
      mu[tag("bm", j, i)] = 1;
    }

    for (int i = 0; i < n; ++i) {
      const CylinderSpike& sp0 = m0.spikes[i];
      const CylinderSpike& spt = mt.spikes[i];
      int N = (int)sp0.edges.size();
      if (N == 0 || (int)spt.edges.size() != N)
        crown_error("cylinder fans disagree between times");
      std::string a = tag("a", j, i);
      std::string b = tag("b", j, i), bm = tag("bm", j, i);
      std::string bn = tag("b", j, (i + 1) % n);
      std::string bmn = tag("bm", j, (i + 1) % n);

      double rho_a = out.rho0.at(b) + out.rho0.at(bn);
      for (int k = 0; k < N; ++k) rho_a += sp0.edges[k].shear;
      out.rho0[a] = rho_a;

      // Fan-edge and chain branches.  The chain peels the boundary leaf off
      // first, then each fan edge in walk order; its weights carry the
      // partial sums forced by the switch relations.
      std::vector<std::string> e(N + 1), f(N + 1), fm(N + 1);
      double eps_f = -out.eps.at(b);
      double rho_f = rho_a - out.rho0.at(b);
      std::vector<std::string> loop = {b};
      for (int k = 1; k <= N; ++k) {
        e[k] = tag("e", j, i, k);
        out.track.branches.push_back(e[k]);
        out.eps[e[k]] = spt.edges[k - 1].shear - et * sp0.edges[k - 1].shear;
        out.rho0[e[k]] = sp0.edges[k - 1].shear;
        mu[e[k]] = 0;
        loop.push_back(e[k]);
        f[k] = tag("f", j, i, k);
        fm[k] = tag("fm", j, i, k);
        out.track.branches.push_back(f[k]);
        out.track.branches.push_back(fm[k]);
        out.eps[f[k]] = eps_f;
        out.eps[fm[k]] = eps_f;
        out.rho0[f[k]] = rho_f;
        out.rho0[fm[k]] = rho_f;
        mu[f[k]] = 1;
        mu[fm[k]] = 1;
        eps_f -= out.eps.at(e[k]);
        rho_f -= out.rho0.at(e[k]);
      }
      loop.push_back(bn);
      out.track.puncture_loops.push_back(loop);

      double resid = std::abs(eps_f - out.eps.at(bn));
      if (resid > 1e-6)
        throw GeomError("SWITCH_VIOLATION",
                        "correction weights break the switch relation at "
                        "crown " + std::to_string(j) + ", spike " +
                            std::to_string(i) + " (residual " +
                            std::to_string(resid) + ")");

      out.track.switches.push_back({{a}, {b, f[1]}});
      out.track.switches.push_back({{a}, {bm, fm[1]}});
      for (int k = 1; k < N; ++k) {
        out.track.switches.push_back({{f[k]}, {e[k], f[k + 1]}});
        out.track.switches.push_back({{fm[k]}, {e[k], fm[k + 1]}});
      }
      out.track.switches.push_back({{f[N]}, {e[N], bn}});
      out.track.switches.push_back({{fm[N]}, {e[N], bmn}});
    }
    out.measures.push_back(mu);
  }
  for (const std::string& b : out.track.branches)
    out.rho_t[b] = et * out.rho0.at(b) + out.eps.at(b);
  // Measures must assign every branch a weight; branches of other crowns
  // carry zero mass.
  for (Weights& mu : out.measures)
    for (const std::string& b : out.track.branches)
      if (!mu.count(b)) mu[b] = 0;
  return out;
}

std::vector<double> matched_crown_shears(const Surface& s, const Crown& c,
                                         double t) {
  double et = std::exp(t);
  CylinderModel m0 = build_cylinder(s, c);
  std::vector<double> out;
  for (const CylinderSpike& sp : m0.spikes) {
    double sigma = crown_shear(s, sp.quad_before);
    double si = sp.s_before;
    double eps_b = displacement(et * si) - et * displacement(si);
    out.push_back(et * (sigma + displacement_geometric(si)) + eps_b -
                  displacement_geometric(et * si));
  }
  return out;
}

Surface generalized_stretch(const Surface& s, double t) {
  ValidationReport r = validate(s);
  if (!r.valid)
    throw GeomError("INVALID_SURFACE", r.violations.empty()
                                           ? "invalid surface"
                                           : r.violations.front());
  Surface out = s;
  double et = std::exp(t);
  for (Piece& p : out.pieces) p = p.stretched(t);
  for (Gluing& g : out.gluings)
    if (g.shear) g.shear = *g.shear * et;
  return out;
}

Surface thurston_stretch(const Surface& s, double t) {
  for (const Piece& p : s.pieces)
    if (p.kind != PieceKind::Triangle)
      throw GeomError("NON_TRIANGLE_PIECE",
                      "this stretch applies to triangulated surfaces only");
  return generalized_stretch(s, t);
}

bool has_measurable_sublamination(const Surface& s) {
  auto same_ideal = [](const IdealPoint& a, const IdealPoint& b) {
    if (a.inf || b.inf) return a.inf && b.inf;
    return std::abs(a.v - b.v) < 1e-12;
  };
  for (const Gluing& g : s.gluings) {
    if (g.from_piece < 0 || g.from_piece >= (int)s.pieces.size()) continue;
    PieceRealization r = realize(s.pieces[g.from_piece]);
    auto it = r.edges.find(g.from_edge);
    if (it == r.edges.end()) continue;
    if (it->second.type == EdgeType::Finite) return true;  // finite leaf
    // A piece glued to itself along two edges sharing an ideal vertex wraps
    // that leaf around the vertex: with a nonzero shear it spirals onto a
    // closed geodesic leaf.
    if (g.to_piece != g.from_piece || !g.shear || *g.shear == 0) continue;
    auto jt = r.edges.find(g.to_edge);
    if (jt == r.edges.end()) continue;
    const Geodesic &u = it->second.line, &v = jt->second.line;
    if (same_ideal(u.p, v.p) || same_ideal(u.p, v.q) ||
        same_ideal(u.q, v.p) || same_ideal(u.q, v.q))
      return true;  // closed-curve leaf
  }
  return false;
}

VerifyReport verify_surface(const Surface& s, const std::vector<double>& ts) {
  VerifyReport rep;
  auto add = [&](const std::string& name, double value, double bound) {
    bool ok = value <= bound;
    rep.checks.push_back({name, value, bound, ok});
    if (!ok) rep.pass = false;
  };

  ValidationReport vr = validate(s);
  add("validates", (double)vr.violations.size(), 0);
  if (!vr.valid) return rep;

  double sp_res = 0;
  for (const Piece& p : s.pieces) {
    if (p.kind == PieceKind::Triangle) continue;
    for (const auto& [name, spt] : special_points(p))
      if (!spt.vertex.empty())
        sp_res = std::max(sp_res,
                          std::abs(spt.signed_dist - spt.closed_form));
  }
  add("special-point-offsets", sp_res, 1e-9);

  BlockDecomposition dec = classify(s);
  // Informational: 0 when a finite or closed leaf exists (then the geodesy
  // lower bound below is exact), 1 otherwise.
  bool measurable = has_measurable_sublamination(s);
  add("measurable-sublamination", measurable ? 0.0 : 1.0, 1);

  for (double t : ts) {
    std::ostringstream suffix;
    suffix << " t=" << t;
    std::string sfx = suffix.str();
    double et = std::exp(t);
    Surface st = generalized_stretch(s, t);

    if (!dec.crowns.empty()) {
      double sd = 0, match = 0, eta = 0;
      for (const Crown& c : dec.crowns) {
        for (double r : stretch_difference_check(s, c, t)) sd = std::max(sd, r);
        CylinderModel m0 = build_cylinder(s, c);
        std::vector<double> ms = matched_crown_shears(s, c, t);
        for (size_t i = 0; i < ms.size(); ++i)
          match = std::max(
              match, std::abs(ms[i] - et * crown_shear(
                                          s, m0.spikes[i].quad_before)));
        std::vector<double> h0 = horocyclic_shift(s, c);
        std::vector<double> ht = horocyclic_shift(st, c);
        for (size_t i = 0; i < h0.size(); ++i)
          eta = std::max(eta, std::abs(ht[i] - et * h0[i]));
      }
      add("stretch-difference" + sfx, sd, 1e-9);
      add("crown-shear-match" + sfx, match, 1e-9);
      add("horocyclic-scaling" + sfx, eta, 1e-9);

      StretchCocycle sc = epsilon_cocycle(s, dec, t);
      validate_track(sc.track);
      add("cocycle-switch" + sfx,
          check_switch_relations(sc.track, sc.eps).max_residual, 1e-9);
      double cusp = 0;
      for (const auto& loop : sc.track.puncture_loops) {
        double sum = 0;
        for (const std::string& b : loop) sum += sc.eps.at(b);
        cusp = std::max(cusp, std::abs(sum));
      }
      add("cocycle-cusp" + sfx, cusp, 1e-9);
      double om = 0;
      for (const Weights& mu : sc.measures)
        om = std::max(om, std::abs(omega(sc.track, sc.eps, mu)));
      add("cocycle-omega" + sfx, om, 1e-8);
    }

    // Finite leaves scale exactly.
    double leaf = 0;
    bool any_leaf = false;
    for (const Gluing& g : s.gluings) {
      PieceRealization r0 = realize(s.pieces[g.from_piece]);
      const EdgeRealization& e = r0.edges.at(g.from_edge);
      if (e.type != EdgeType::Finite) continue;
      any_leaf = true;
      double l0 = dist(*e.c0, *e.c1);
      PieceRealization r1 = realize(st.pieces[g.from_piece]);
      const EdgeRealization& e2 = r1.edges.at(g.from_edge);
      double l1 = dist(*e2.c0, *e2.c1);
      leaf = std::max(leaf, std::abs(l1 - et * l0) / std::max(1.0, et * l0));
    }
    if (any_leaf) add("finite-leaf-scaling" + sfx, leaf, 1e-9);

    // Semigroup law on piece parameters and shears.
    Surface half2 = generalized_stretch(generalized_stretch(s, t / 2), t / 2);
    double semi = 0;
    for (size_t i = 0; i < st.pieces.size(); ++i) {
      semi = std::max(semi, std::abs(half2.pieces[i].s1 - st.pieces[i].s1));
      semi = std::max(semi, std::abs(half2.pieces[i].s2 - st.pieces[i].s2));
      semi = std::max(semi, std::abs(half2.pieces[i].s3 - st.pieces[i].s3));
    }
    for (size_t i = 0; i < st.gluings.size(); ++i)
      if (st.gluings[i].shear)
        semi = std::max(semi, std::abs(*half2.gluings[i].shear -
                                       *st.gluings[i].shear));
    add("semigroup" + sfx, semi, 1e-9);

    DistanceEstimate de = arc_distance_estimate(s, st, 3);
    add("candidate-ratio-upper" + sfx, de.lower_bound - t, 1e-6);
    if (measurable) add("geodesy-lower" + sfx, t - de.lower_bound, 1e-9);
  }
  return rep;
}

}  // namespace hyp
