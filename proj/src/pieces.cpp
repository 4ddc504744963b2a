#include "hypstretch/pieces.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "hypstretch/tolerance.hpp"

namespace hyp {

namespace {

constexpr double kEdgeSlack = 1e-12;
constexpr int kUnrollCap = 64;

// ---- Minkowski (hyperboloid) model, signature (+,+,-) ---------------------
// Geodesics are space-like plane sections; the meeting point of two geodesics
// that miss each other in the plane is still represented by a (space-like)
// vector, and orthogonal projection onto a geodesic stays well defined.

struct Vec3 {
  double a, b, c;
};

double mdot(const Vec3& u, const Vec3& v) {
  return u.a * v.a + u.b * v.b - u.c * v.c;
}

Vec3 msub(const Vec3& u, const Vec3& v) {
  return {u.a - v.a, u.b - v.b, u.c - v.c};
}

Vec3 mscale(const Vec3& u, double k) { return {k * u.a, k * u.b, k * u.c}; }

// Minkowski-orthogonal to both arguments (Euclidean cross product with the
// time component negated).
Vec3 mcross(const Vec3& u, const Vec3& v) {
  return {u.b * v.c - u.c * v.b, u.c * v.a - u.a * v.c,
          -(u.a * v.b - u.b * v.a)};
}

Vec3 to_hyp(const UhpPoint& p) {
  double n = p.x * p.x + p.y * p.y;
  return {p.x / p.y, (n - 1) / (2 * p.y), (n + 1) / (2 * p.y)};
}

Vec3 light_vec(const IdealPoint& u) {
  if (u.inf) return {0, 1, 1};
  return {u.v, (u.v * u.v - 1) / 2, (u.v * u.v + 1) / 2};
}

UhpPoint from_hyp(Vec3 v) {
  double q = -mdot(v, v);
  if (!(q > 0))
    throw GeomError("NO_INTERSECTION",
                    "vector does not represent a point of the plane");
  v = mscale(v, 1.0 / std::sqrt(q));
  if (v.c < 0) v = mscale(v, -1.0);
  return UhpPoint{v.a / (v.c - v.b), 1.0 / (v.c - v.b)};
}

Vec3 geodesic_normal(const Geodesic& g) {
  return mcross(light_vec(g.p), light_vec(g.q));
}

// Normal of the perpendicular-bisector plane of the segment pq.
Vec3 bisector_normal(const UhpPoint& p, const UhpPoint& q) {
  return msub(to_hyp(p), to_hyp(q));
}

UhpPoint project_to_geodesic(const Vec3& h, const Geodesic& g) {
  Vec3 n = geodesic_normal(g);
  return from_hyp(msub(h, mscale(n, mdot(h, n) / mdot(n, n))));
}

// ---- canonical realizations ------------------------------------------------

EdgeRealization finite_edge(const Geodesic& line, const UhpPoint& c0,
                            const UhpPoint& c1) {
  EdgeRealization e;
  e.type = EdgeType::Finite;
  e.line = line;
  e.c0 = c0;
  e.c1 = c1;
  return e;
}

PieceRealization realize_triangle(const Piece& p) {
  PieceRealization r;
  r.piece = p;
  r.ideal_vertices = {{"V1", IdealPoint::at(0)},
                      {"V2", IdealPoint::at(1)},
                      {"V3", IdealPoint::infinity()}};
  auto bi = [](const Geodesic& line, const UhpPoint& center) {
    EdgeRealization e;
    e.type = EdgeType::BiInfinite;
    e.line = line;
    e.center = center;
    return e;
  };
  r.edges["l1"] = bi({IdealPoint::at(1), IdealPoint::infinity()}, {1, 1});
  r.edges["l2"] = bi({IdealPoint::infinity(), IdealPoint::at(0)}, {0, 1});
  r.edges["l3"] = bi({IdealPoint::at(0), IdealPoint::at(1)}, {0.5, 0.5});
  return r;
}

PieceRealization realize_quad(const Piece& p) {
  double E = std::exp(p.s1);
  double rho = std::sqrt(1 + E);
  UhpPoint A{-1, rho};
  UhpPoint B{E / (2 + E), E * std::sqrt(1 + E) / (2 + E)};

  PieceRealization r;
  r.piece = p;
  r.vertices = {{"A", A}, {"B", B}};
  r.ideal_vertices = {{"C", IdealPoint::at(E)}, {"D", IdealPoint::infinity()}};

  r.edges["a1"] =
      finite_edge({IdealPoint::at(-1 - rho), IdealPoint::at(-1 + rho)}, A, B);

  EdgeRealization l1;
  l1.type = EdgeType::HalfInfinite;
  l1.line = {IdealPoint::at(0), IdealPoint::at(E)};
  l1.c0 = B;  // runs from B into the ideal vertex C
  r.edges["l1"] = l1;

  EdgeRealization l2;
  l2.type = EdgeType::BiInfinite;
  l2.line = {IdealPoint::at(E), IdealPoint::infinity()};
  l2.center = UhpPoint{E, std::sqrt(E * (1 + E))};
  r.edges["l2"] = l2;

  EdgeRealization l3;
  l3.type = EdgeType::HalfInfinite;
  l3.line = {IdealPoint::infinity(), IdealPoint::at(-1)};
  l3.c1 = A;  // runs from the ideal vertex D down to A
  r.edges["l3"] = l3;
  return r;
}

struct PentagonData {
  double E1, E2, E12, W, r, rp, k, xB, yB;
};

PentagonData pentagon_data(double s1, double s2) {
  PentagonData d;
  d.E1 = std::exp(s1);
  d.E2 = std::exp(s2);
  d.E12 = std::exp(s1 + s2);
  d.W = (d.E12 - 1) / (d.E2 + 1);
  d.r = std::sqrt(d.E2 * (d.E1 + 1) / (d.E2 + 1));
  d.rp = std::sqrt(d.E1 * (d.E1 + 1) / (d.E2 + 1));
  d.k = (d.E12 - 1) / (d.E12 + 2 * d.E2 + 1);
  d.xB = (d.rp * d.rp - d.E1 * d.E1) / (d.W - 2 * d.E1);
  d.yB = std::sqrt(d.W * d.xB - d.xB * d.xB);
  return d;
}

PieceRealization realize_pentagon(const Piece& p) {
  PentagonData g = pentagon_data(p.s1, p.s2);
  UhpPoint A{g.k, g.k * g.r};
  UhpPoint B{g.xB, g.yB};
  UhpPoint C{g.E1, g.rp};
  UhpPoint E{-1, g.r};

  PieceRealization r;
  r.piece = p;
  r.vertices = {{"A", A}, {"B", B}, {"C", C}, {"E", E}};
  r.ideal_vertices = {{"D", IdealPoint::infinity()}};

  r.edges["l1"] =
      finite_edge({IdealPoint::at(0), IdealPoint::at(g.W)}, A, B);
  r.edges["a1"] = finite_edge(
      {IdealPoint::at(g.E1 - g.rp), IdealPoint::at(g.E1 + g.rp)}, B, C);

  EdgeRealization l2;
  l2.type = EdgeType::HalfInfinite;
  l2.line = {IdealPoint::at(g.E1), IdealPoint::infinity()};
  l2.c0 = C;  // from C up into the ideal vertex D
  r.edges["l2"] = l2;

  EdgeRealization l3;
  l3.type = EdgeType::HalfInfinite;
  l3.line = {IdealPoint::infinity(), IdealPoint::at(-1)};
  l3.c1 = E;  // from the ideal vertex D down to E
  r.edges["l3"] = l3;

  r.edges["a2"] =
      finite_edge({IdealPoint::at(-1 - g.r), IdealPoint::at(-1 + g.r)}, E, A);
  return r;
}

double hexagon_a_length(double opp, double adj1, double adj2) {
  return std::acosh((std::cosh(opp) + std::cosh(adj1) * std::cosh(adj2)) /
                    (std::sinh(adj1) * std::sinh(adj2)));
}

std::array<double, 6> hexagon_side_lengths(const Piece& p) {
  double l2 = (p.s1 + p.s2) / 2;  // AB
  double l1 = (p.s2 + p.s3) / 2;  // CD
  double l3 = (p.s3 + p.s1) / 2;  // EF
  return {l2,
          hexagon_a_length(l3, l2, l1),   // BC
          l1,
          hexagon_a_length(l2, l1, l3),   // DE
          l3,
          hexagon_a_length(l1, l3, l2)};  // FA
}

PieceRealization realize_hexagon(const Piece& p) {
  std::array<double, 6> L = hexagon_side_lengths(p);
  // Walk the boundary counterclockwise: advance along the current axis, then
  // turn left by a right angle (rotation about i).
  double c = std::sqrt(0.5);
  Isometry turn = Isometry::from_matrix(c, c, -c, c);
  Isometry F = Isometry::identity();
  std::array<UhpPoint, 7> P;
  P[0] = {0, 1};
  for (int k = 0; k < 6; ++k) {
    F = compose(F, compose(Isometry::scaling(std::exp(L[k])), turn));
    P[k + 1] = apply(F, UhpPoint{0, 1});
  }

  PieceRealization r;
  r.piece = p;
  const char* names = "ABCDEF";
  const char* labels[6] = {"l2", "a3", "l1", "a2", "l3", "a1"};
  for (int k = 0; k < 6; ++k) {
    r.vertices[std::string(1, names[k])] = P[k];
    r.edges[labels[k]] =
        finite_edge(geodesic_through(P[k], P[(k + 1) % 6]), P[k], P[(k + 1) % 6]);
  }
  return r;
}

// ---- stretch maps ----------------------------------------------------------

bool in_canonical_triangle(const UhpPoint& p, double tol) {
  if (p.x < -tol || p.x > 1 + tol) return false;
  double dx = p.x - 0.5;
  return dx * dx + p.y * p.y >= 0.25 - tol;
}

// Determinant sign of the Moebius map taking (0,1,inf) to (p,q,r).
std::array<double, 4> mobius_raw(const IdealPoint& p, const IdealPoint& q,
                                 const IdealPoint& r) {
  if (r.inf) return {q.v - p.v, p.v, 0, 1};
  if (p.inf) return {r.v, q.v - r.v, 1, 0};
  if (q.inf) return {r.v, -p.v, 1, -1};
  return {r.v * (q.v - p.v), p.v * (r.v - q.v), q.v - p.v, r.v - q.v};
}

Isometry mobius_to(const IdealPoint& p, const IdealPoint& q,
                   const IdealPoint& r) {
  auto m = mobius_raw(p, q, r);
  return Isometry::from_matrix(m[0], m[1], m[2], m[3]);
}

// Stretch map between two labeled ideal triangles, conjugated through the
// canonical one.  Vertex correspondence p->p1, q->q1, r->r1.
UhpPoint stretch_between(IdealPoint p, IdealPoint q, IdealPoint r,
                         IdealPoint p1, IdealPoint q1, IdealPoint r1,
                         const UhpPoint& z, double t) {
  auto m = mobius_raw(p, q, r);
  if (m[0] * m[3] - m[1] * m[2] < 0) {
    std::swap(p, q);
    std::swap(p1, q1);
  }
  Isometry src = mobius_to(p, q, r);
  Isometry dst = mobius_to(p1, q1, r1);
  return apply(dst, triangle_stretch(apply(src.inverse(), z), t));
}

// Doubled quad: ideal quadrilateral (-1, 0, e^s, inf) split along (0, inf).
UhpPoint quad_psi(double s, double t, const UhpPoint& z) {
  IdealPoint zero = IdealPoint::at(0), inf = IdealPoint::infinity();
  IdealPoint C = IdealPoint::at(std::exp(s));
  IdealPoint Ct = IdealPoint::at(std::exp(std::exp(t) * s));
  if (z.x >= 0) return stretch_between(zero, C, inf, zero, Ct, inf, z, t);
  IdealPoint m1 = IdealPoint::at(-1);
  return stretch_between(m1, zero, inf, m1, zero, inf, z, t);
}

// Cyclic cover of the doubled pentagon: a fan of ideal triangles with apex 0,
// deck transformation the translation along (0, W) of length s1 + s2.
struct PentCover {
  double W, L;
  Isometry f;  // sends 0 -> 0, W -> inf

  Isometry deck(long k) const {
    return compose(f.inverse(),
                   compose(Isometry::scaling(std::exp(k * L)), f));
  }

  // Fan vertices: v0 = -1, v1 = inf, v(n+2) = deck(1)(v(n)).
  IdealPoint vertex(long n) const {
    long k = static_cast<long>(std::floor(n / 2.0));
    IdealPoint base =
        (n - 2 * k == 0) ? IdealPoint::at(-1) : IdealPoint::infinity();
    if (k == 0) return base;
    return apply(deck(k), base);
  }
};

PentCover pent_cover(double s1, double s2) {
  PentagonData g = pentagon_data(s1, s2);
  PentCover c;
  c.W = g.W;
  c.L = s1 + s2;
  c.f = Isometry::from_matrix(1, 0, -1, g.W);
  return c;
}

UhpPoint pentagon_psi(double s1, double s2, double t, const UhpPoint& z) {
  PentCover cs = pent_cover(s1, s2);
  PentCover ct = pent_cover(std::exp(t) * s1, std::exp(t) * s2);

  // Chart with the fan apex at infinity: triangles become vertical strips
  // between u(n) = -1/vertex(n), a strictly decreasing sequence.
  Isometry chart = Isometry::from_matrix(0, -1, 1, 0);
  UhpPoint q = apply(chart, z);
  auto u_of = [&](long n) {
    IdealPoint v = cs.vertex(n);
    return v.inf ? 0.0 : -1.0 / v.v;
  };
  long n = 0;
  int steps = 0;
  while (q.x > u_of(n)) {
    --n;
    if (++steps > kUnrollCap)
      throw GeomError("UNROLL_CAP", "point too close to the cover boundary");
  }
  while (q.x < u_of(n + 1)) {
    ++n;
    // Successive lifts stabilize toward the cover's boundary geodesic.
    if (++steps > kUnrollCap || u_of(n) - u_of(n + 1) < 1e-12)
      throw GeomError("UNROLL_CAP", "point too close to the cover boundary");
  }
  return stretch_between(cs.vertex(n), cs.vertex(n + 1), IdealPoint::at(0),
                         ct.vertex(n), ct.vertex(n + 1), IdealPoint::at(0), z,
                         t);
}

Geodesic a1_line(const Piece& p) { return realize(p).edges.at("a1").line; }

}  // namespace

// ---- Piece -----------------------------------------------------------------

Piece Piece::triangle() { return Piece{PieceKind::Triangle, 0, 0, 0}; }

Piece Piece::quad(double s) {
  if (!std::isfinite(s)) throw GeomError("INVALID_SHEARS", "non-finite shear");
  return Piece{PieceKind::Quad, s, 0, 0};
}

Piece Piece::pentagon(double s1, double s2) {
  if (!std::isfinite(s1) || !std::isfinite(s2) || !(s1 + s2 > 0))
    throw GeomError("INVALID_SHEARS", "pentagon requires s1 + s2 > 0");
  if (s1 > s2) std::swap(s1, s2);
  return Piece{PieceKind::Pentagon, s1, s2, 0};
}

Piece Piece::hexagon(double s1, double s2, double s3) {
  if (!std::isfinite(s1) || !std::isfinite(s2) || !std::isfinite(s3) ||
      !(s1 + s2 > 0) || !(s2 + s3 > 0) || !(s3 + s1 > 0))
    throw GeomError("INVALID_SHEARS",
                    "hexagon requires pairwise sums of shears > 0");
  // Cyclic relabel so the (at most one) nonpositive shear sits in slot 1.
  if (s2 <= 0) {
    double a = s1;
    s1 = s2;
    s2 = s3;
    s3 = a;
  } else if (s3 <= 0) {
    double a = s3;
    s3 = s2;
    s2 = s1;
    s1 = a;
  }
  return Piece{PieceKind::Hexagon, s1, s2, s3};
}

Piece Piece::stretched(double t) const {
  double e = std::exp(t);
  return Piece{kind, e * s1, e * s2, e * s3};
}

int Piece::l_edge_count() const { return 3; }

int Piece::a_edge_count() const {
  switch (kind) {
    case PieceKind::Triangle: return 0;
    case PieceKind::Quad: return 1;
    case PieceKind::Pentagon: return 2;
    case PieceKind::Hexagon: return 3;
  }
  return 0;
}

PieceRealization realize(const Piece& p) {
  switch (p.kind) {
    case PieceKind::Triangle: return realize_triangle(p);
    case PieceKind::Quad: return realize_quad(p);
    case PieceKind::Pentagon: return realize_pentagon(p);
    case PieceKind::Hexagon: return realize_hexagon(p);
  }
  throw GeomError("INVALID_SHEARS", "unknown piece kind");
}

bool piece_contains(const PieceRealization& r, const UhpPoint& p, double tol) {
  for (const auto& [label, e] : r.edges) {
    UhpPoint z = apply(standardize(e.line), p);
    if (z.x > tol * std::max(1.0, z.y)) return false;
  }
  return true;
}

std::map<std::string, UhpPoint> centers(const Piece& p) {
  switch (p.kind) {
    case PieceKind::Triangle:
      return {{"O1", {1, 1}}, {"O2", {0, 1}}, {"O3", {0.5, 0.5}}};
    case PieceKind::Quad: {
      double E = std::exp(p.s1);
      return {{"O", {E, std::sqrt(E * (1 + E))}}};
    }
    default:
      throw GeomError("NO_CENTER",
                      "pentagons and hexagons have no distinguished centers");
  }
}

std::map<std::string, SpecialPoint> special_points(const Piece& p) {
  std::map<std::string, SpecialPoint> out;
  PieceRealization r = p.kind == PieceKind::Triangle ? PieceRealization{}
                                                     : realize(p);
  switch (p.kind) {
    case PieceKind::Triangle:
      throw GeomError("NO_SPECIAL_POINTS", "triangles have no special points");

    case PieceKind::Quad: {
      double s = p.s1;
      UhpPoint O = *r.edges.at("l2").center;
      UhpPoint A = r.vertices.at("A"), B = r.vertices.at("B");
      const Geodesic& l1 = r.edges.at("l1").line;
      const Geodesic& l3 = r.edges.at("l3").line;
      UhpPoint P_AD = horocycle_arc(IdealPoint::infinity(), O, l3);
      UhpPoint P_BC = horocycle_arc(r.ideal_vertices.at("C"), O, l1);
      // l3 is oriented from D down to A, so "toward D" is the negative
      // direction; l1 is oriented toward C.
      out["P_AD"] = {P_AD, -signed_arc_coordinate(l3, A, P_AD), s / 2, "A"};
      out["P_BC"] = {P_BC, signed_arc_coordinate(l1, B, P_BC), s / 2, "B"};
      return out;
    }

    case PieceKind::Pentagon: {
      UhpPoint A = r.vertices.at("A"), B = r.vertices.at("B");
      UhpPoint C = r.vertices.at("C"), E = r.vertices.at("E");
      Vec3 h = mcross(bisector_normal(E, A), bisector_normal(B, C));
      const Geodesic& l1 = r.edges.at("l1").line;  // A -> B
      const Geodesic& l2 = r.edges.at("l2").line;  // C -> D
      const Geodesic& l3 = r.edges.at("l3").line;  // D -> E
      UhpPoint H_AB = project_to_geodesic(h, l1);
      UhpPoint H_DC = project_to_geodesic(h, l2);
      UhpPoint H_DE = project_to_geodesic(h, l3);
      out["H_AB:A"] = {H_AB, signed_arc_coordinate(l1, A, H_AB), p.s1 / 2, "A"};
      out["H_AB:B"] = {H_AB, -signed_arc_coordinate(l1, B, H_AB), p.s2 / 2,
                       "B"};
      out["H_DC"] = {H_DC, signed_arc_coordinate(l2, C, H_DC), p.s2 / 2, "C"};
      out["H_DE"] = {H_DE, -signed_arc_coordinate(l3, E, H_DE), p.s1 / 2, "E"};
      if (mdot(h, h) < 0) out["H"] = {from_hyp(h), 0, 0, ""};
      return out;
    }

    case PieceKind::Hexagon: {
      UhpPoint B = r.vertices.at("B"), C = r.vertices.at("C");
      UhpPoint D = r.vertices.at("D"), E = r.vertices.at("E");
      UhpPoint A = r.vertices.at("A"), F = r.vertices.at("F");
      Vec3 h = mcross(bisector_normal(B, C), bisector_normal(D, E));
      const Geodesic& l2 = r.edges.at("l2").line;  // A -> B
      const Geodesic& l1 = r.edges.at("l1").line;  // C -> D
      const Geodesic& l3 = r.edges.at("l3").line;  // E -> F
      UhpPoint H_AB = project_to_geodesic(h, l2);
      UhpPoint H_DC = project_to_geodesic(h, l1);
      UhpPoint H_EF = project_to_geodesic(h, l3);
      out["H_AB:A"] = {H_AB, signed_arc_coordinate(l2, A, H_AB), p.s1 / 2, "A"};
      out["H_AB:B"] = {H_AB, -signed_arc_coordinate(l2, B, H_AB), p.s2 / 2,
                       "B"};
      out["H_DC:C"] = {H_DC, signed_arc_coordinate(l1, C, H_DC), p.s2 / 2, "C"};
      out["H_DC:D"] = {H_DC, -signed_arc_coordinate(l1, D, H_DC), p.s3 / 2,
                       "D"};
      out["H_EF:E"] = {H_EF, signed_arc_coordinate(l3, E, H_EF), p.s3 / 2, "E"};
      out["H_EF:F"] = {H_EF, -signed_arc_coordinate(l3, F, H_EF), p.s1 / 2,
                       "F"};
      if (mdot(h, h) < 0) out["H"] = {from_hyp(h), 0, 0, ""};
      return out;
    }
  }
  return out;
}

std::map<std::string, std::optional<double>> edge_lengths(const Piece& p) {
  PieceRealization r = realize(p);
  std::map<std::string, std::optional<double>> out;
  for (const auto& [label, e] : r.edges) {
    if (e.type == EdgeType::Finite)
      out[label] = dist(*e.c0, *e.c1);
    else
      out[label] = std::nullopt;
  }
  return out;
}

// ---- horocyclic foliations ---------------------------------------------------

std::vector<FoliationSector> foliation_sectors(const Piece& p) {
  switch (p.kind) {
    case PieceKind::Triangle:
      return {{"12", IdealPoint::infinity(), {1, 1}, 0},
              {"23", IdealPoint::at(0), {0, 1}, 0},
              {"31", IdealPoint::at(1), {1, 1}, 0}};
    case PieceKind::Quad: {
      double E = std::exp(p.s1);
      UhpPoint O{E, std::sqrt(E * (1 + E))};
      double dmin = 0.5 * std::log(1 + 1 / E);
      return {{"C", IdealPoint::at(E), O, dmin},
              {"D", IdealPoint::infinity(), O, dmin}};
    }
    case PieceKind::Pentagon: {
      PentagonData g = pentagon_data(p.s1, p.s2);
      return {{"W", IdealPoint::infinity(), UhpPoint{-1, g.r}, std::log(g.r)}};
    }
    case PieceKind::Hexagon:
      return {};
  }
  return {};
}

std::optional<std::pair<std::string, double>> foliation_leaf(
    const Piece& p, const UhpPoint& point) {
  if (!piece_contains(realize(p), point, base_tol())) return std::nullopt;
  std::optional<std::pair<std::string, double>> best;
  for (const FoliationSector& s : foliation_sectors(p)) {
    double d = horocycle_offset(s.center, s.reference, point);
    if (d < s.d_min - kEdgeSlack) continue;
    if (!best || d - s.d_min > best->second) best = {{s.name, d}};
  }
  return best;
}

double foliation_image(const Piece& p, double t, const std::string& sector,
                       double d) {
  auto find = [&](const Piece& q) -> FoliationSector {
    for (const FoliationSector& s : foliation_sectors(q))
      if (s.name == sector) return s;
    throw GeomError("NOT_IN_SUPPORT", "no such foliation sector: " + sector);
  };
  FoliationSector s0 = find(p);
  if (d < s0.d_min - kEdgeSlack)
    throw GeomError("NOT_IN_SUPPORT", "leaf parameter below the sector bound");
  double dd = std::exp(t) * d;
  FoliationSector s1 = find(p.stretched(t));
  if (dd < s1.d_min - kEdgeSlack)
    throw GeomError("NOT_IN_SUPPORT",
                    "image leaf parameter below the stretched sector bound");
  return dd;
}

// ---- stretch maps ------------------------------------------------------------

UhpPoint triangle_stretch(const UhpPoint& point, double t) {
  if (!in_canonical_triangle(point, base_tol()))
    throw GeomError("OUT_OF_PIECE", "point outside the canonical triangle");
  double et = std::exp(t);
  // Charts sending each ideal vertex to infinity; the sector there is y >= 1.
  const Isometry charts[3] = {Isometry::identity(),
                              Isometry::from_matrix(1, -1, 1, 0),   // (z-1)/z
                              Isometry::from_matrix(0, 1, -1, 1)};  // 1/(1-z)
  for (const Isometry& g : charts) {
    UhpPoint q = apply(g, point);
    if (q.y >= 1.0 - kEdgeSlack)
      return apply(g.inverse(), UhpPoint{q.x, std::pow(q.y, et)});
  }
  return point;  // central unfoliated region
}

UhpPoint doubled_stretch_eval(const Piece& p, double t,
                              const UhpPoint& point) {
  switch (p.kind) {
    case PieceKind::Triangle: return triangle_stretch(point, t);
    case PieceKind::Quad: return quad_psi(p.s1, t, point);
    case PieceKind::Pentagon: return pentagon_psi(p.s1, p.s2, t, point);
    case PieceKind::Hexagon:
      throw GeomError("HEXAGON_UNSUPPORTED",
                      "hexagons have no pointwise stretch map");
  }
  throw GeomError("INVALID_SHEARS", "unknown piece kind");
}

UhpPoint averaged_stretch_eval(const Piece& p, double t,
                               const UhpPoint& point) {
  switch (p.kind) {
    case PieceKind::Triangle: return triangle_stretch(point, t);
    case PieceKind::Quad:
    case PieceKind::Pentagon: {
      Isometry sigma = reflection(a1_line(p));
      Isometry sigma_t = reflection(a1_line(p.stretched(t)));
      UhpPoint u = doubled_stretch_eval(p, t, point);
      UhpPoint v =
          apply(sigma_t, doubled_stretch_eval(p, t, apply(sigma, point)));
      return midpoint(u, v);
    }
    case PieceKind::Hexagon:
      throw GeomError("HEXAGON_UNSUPPORTED",
                      "hexagons have no pointwise stretch map");
  }
  throw GeomError("INVALID_SHEARS", "unknown piece kind");
}

}  // namespace hyp
