#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "hypstretch/geom.hpp"
#include "hypstretch/pieces.hpp"

using namespace hyp;

namespace {

std::mt19937_64 rng(20260823);

double urand(double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

const double kGrid[] = {-2, -1, -0.3, 0, 0.3, 1, 2};

bool near(const UhpPoint& p, const UhpPoint& q, double tol = 1e-9) {
  return std::abs(p.x - q.x) < tol && std::abs(p.y - q.y) < tol;
}

// Setwise equality of unoriented geodesics.
bool same_geo(const Geodesic& g, const Geodesic& h, double tol = 1e-9) {
  return (same_ideal(g.p, h.p, tol) && same_ideal(g.q, h.q, tol)) ||
         (same_ideal(g.p, h.q, tol) && same_ideal(g.q, h.p, tol));
}

// Minkowski normal of the plane section carrying g (oracle route).
std::array<double, 3> normal_of(const Geodesic& g) {
  auto lv = [](const IdealPoint& u) -> std::array<double, 3> {
    if (u.inf) return {0, 1, 1};
    return {u.v, (u.v * u.v - 1) / 2, (u.v * u.v + 1) / 2};
  };
  auto a = lv(g.p), b = lv(g.q);
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          -(a[0] * b[1] - a[1] * b[0])};
}

// Geodesics meet at a right angle iff their plane normals are
// Minkowski-orthogonal.
bool perpendicular(const Geodesic& g, const Geodesic& h) {
  auto n = normal_of(g), m = normal_of(h);
  double ip = n[0] * m[0] + n[1] * m[1] - n[2] * m[2];
  double nn = n[0] * n[0] + n[1] * n[1] - n[2] * n[2];
  double mm = m[0] * m[0] + m[1] * m[1] - m[2] * m[2];
  return ip * ip / (nn * mm) < 1e-18;
}

// Foot of the perpendicular dropped from an ideal point onto g (oracle).
UhpPoint ideal_foot(const IdealPoint& u, const Geodesic& g) {
  Isometry S = standardize(g);
  IdealPoint i = apply(S, u);
  REQUIRE(!i.inf);
  return apply(S.inverse(), UhpPoint{0, std::abs(i.v)});
}

UhpPoint sample_in(const PieceRealization& r, double x0, double x1, double y0,
                   double y1) {
  for (int i = 0; i < 10000; ++i) {
    UhpPoint p{urand(x0, x1), urand(y0, y1)};
    if (piece_contains(r, p, -1e-6)) return p;
  }
  REQUIRE(false);
  return {0, 1};
}

UhpPoint sample_triangle() {
  return sample_in(realize(Piece::triangle()), 0, 1, 0.05, 4);
}

}  // namespace

TEST_CASE("quad realization geometry") {
  for (double s : kGrid) {
    Piece q = Piece::quad(s);
    PieceRealization r = realize(q);
    double E = std::exp(s);
    UhpPoint A = r.vertices.at("A"), B = r.vertices.at("B");
    CHECK(contains(r.edges.at("a1").line, A, 1e-12));
    CHECK(contains(r.edges.at("a1").line, B, 1e-12));
    CHECK(contains(r.edges.at("l1").line, B, 1e-12));
    CHECK(contains(r.edges.at("l3").line, A, 1e-12));
    CHECK(perpendicular(r.edges.at("a1").line, r.edges.at("l1").line));
    CHECK(perpendicular(r.edges.at("a1").line, r.edges.at("l3").line));

    // Center on l2: foot of the common perpendicular with a1 (oracle).
    Geodesic cp = common_perpendicular(r.edges.at("l2").line,
                                       r.edges.at("a1").line);
    UhpPoint O_geo = intersect(cp, r.edges.at("l2").line);
    UhpPoint O = centers(q).at("O");
    CHECK(near(O_geo, O, 1e-9));
    CHECK(std::abs(O.x - E) < 1e-12);
    CHECK(std::abs(O.y - std::sqrt(E * (1 + E))) < 1e-12);
  }
}

TEST_CASE("quad special points match closed forms") {
  for (double s : kGrid) {
    Piece q = Piece::quad(s);
    auto sp = special_points(q);
    PieceRealization r = realize(q);
    double E = std::exp(s);
    const SpecialPoint& pad = sp.at("P_AD");
    const SpecialPoint& pbc = sp.at("P_BC");
    CHECK(std::abs(pad.signed_dist - s / 2) < 1e-9);
    CHECK(std::abs(pbc.signed_dist - s / 2) < 1e-9);
    CHECK(std::abs(pad.closed_form - s / 2) < 1e-15);
    CHECK(near(pad.point, UhpPoint{-1, std::sqrt(E * (1 + E))}, 1e-9));
    // Magnitude cross-check against the plain distance function.
    CHECK(std::abs(std::abs(pad.signed_dist) -
                   dist(pad.point, r.vertices.at("A"))) < 1e-9);
    CHECK(std::abs(std::abs(pbc.signed_dist) -
                   dist(pbc.point, r.vertices.at("B"))) < 1e-9);
    // Both special points lie on the horocycles through the center.
    UhpPoint O = centers(q).at("O");
    CHECK(on_horocycle({IdealPoint::infinity(), O}, pad.point, 1e-9));
    CHECK(on_horocycle({r.ideal_vertices.at("C"), O}, pbc.point, 1e-9));
  }
  CHECK(near(special_points(Piece::quad(0)).at("P_AD").point,
             realize(Piece::quad(0)).vertices.at("A"), 1e-12));
}

TEST_CASE("pentagon realization geometry") {
  for (double s1 : kGrid)
    for (double s2 : kGrid) {
      if (!(s1 + s2 > 0)) continue;
      Piece p = Piece::pentagon(s1, s2);
      PieceRealization r = realize(p);
      UhpPoint A = r.vertices.at("A"), B = r.vertices.at("B");
      UhpPoint C = r.vertices.at("C"), E = r.vertices.at("E");
      CHECK(contains(r.edges.at("l1").line, A, 1e-9));
      CHECK(contains(r.edges.at("l1").line, B, 1e-9));
      CHECK(contains(r.edges.at("a1").line, B, 1e-9));
      CHECK(contains(r.edges.at("a1").line, C, 1e-9));
      CHECK(contains(r.edges.at("a2").line, E, 1e-9));
      CHECK(contains(r.edges.at("a2").line, A, 1e-9));
      CHECK(perpendicular(r.edges.at("a1").line, r.edges.at("l1").line));
      CHECK(perpendicular(r.edges.at("a1").line, r.edges.at("l2").line));
      CHECK(perpendicular(r.edges.at("a2").line, r.edges.at("l1").line));
      CHECK(perpendicular(r.edges.at("a2").line, r.edges.at("l3").line));
      CHECK(std::abs(dist(A, B) - (s1 + s2) / 2) < 1e-9);
    }
}

TEST_CASE("pentagon special points match closed forms") {
  for (double s1 : kGrid)
    for (double s2 : kGrid) {
      if (!(s1 + s2 > 0)) continue;
      Piece p = Piece::pentagon(s1, s2);
      double a = p.s1, b = p.s2;  // normalized, a <= b
      double E1 = std::exp(a), E2 = std::exp(b), E12 = std::exp(a + b);
      auto sp = special_points(p);
      CHECK(std::abs(sp.at("H_AB:A").signed_dist - a / 2) < 1e-9);
      CHECK(std::abs(sp.at("H_AB:B").signed_dist - b / 2) < 1e-9);
      CHECK(std::abs(sp.at("H_DC").signed_dist - b / 2) < 1e-9);
      CHECK(std::abs(sp.at("H_DE").signed_dist - a / 2) < 1e-9);
      double h_im = std::sqrt(E12 * (E1 + 1) / (E2 + 1));
      CHECK(std::abs(sp.at("H_DC").point.y - h_im) < 1e-9);
      CHECK(std::abs(sp.at("H_DE").point.y - h_im) < 1e-9);
      CHECK(std::abs(sp.at("H_DE").point.x + 1) < 1e-9);
      CHECK(std::abs(sp.at("H_DC").point.x - E1) < 1e-9);
      double disc = (E1 + 1) * (3 * E12 - E1 - E2 - 1) / (E2 + 1);
      if (disc > 1e-6) {
        REQUIRE(sp.count("H"));
        UhpPoint H = sp.at("H").point;
        CHECK(std::abs(H.x - (E1 - 1) / 2) < 1e-8);
        CHECK(std::abs(H.y - 0.5 * std::sqrt(disc)) < 1e-8);
        PieceRealization r = realize(p);
        CHECK(std::abs(dist(H, r.vertices.at("E")) -
                       dist(H, r.vertices.at("A"))) < 1e-9);
        CHECK(std::abs(dist(H, r.vertices.at("B")) -
                       dist(H, r.vertices.at("C"))) < 1e-9);
      }
    }
  // Normalization: the argument order does not matter.
  auto s1 = special_points(Piece::pentagon(2, -1));
  auto s2 = special_points(Piece::pentagon(-1, 2));
  CHECK(near(s1.at("H_DC").point, s2.at("H_DC").point, 1e-12));
  CHECK_THROWS_WITH_AS(realize(Piece::pentagon(0.3, -0.3)), doctest::Contains("INVALID_SHEARS"),
                       GeomError);
}

TEST_CASE("hexagon realization closes up with right angles") {
  const char* labels[6] = {"l2", "a3", "l1", "a2", "l3", "a1"};
  for (double s1 : kGrid)
    for (double s2 : kGrid)
      for (double s3 : kGrid) {
        if (!(s1 + s2 > 0) || !(s2 + s3 > 0) || !(s3 + s1 > 0)) continue;
        Piece p = Piece::hexagon(s1, s2, s3);
        PieceRealization r = realize(p);
        for (int k = 0; k < 6; ++k) {
          const EdgeRealization& e = r.edges.at(labels[k]);
          const EdgeRealization& f = r.edges.at(labels[(k + 1) % 6]);
          CHECK(perpendicular(e.line, f.line));
          CHECK(near(*e.c1, *f.c0, 1e-9));
        }
        auto len = edge_lengths(p);
        CHECK(std::abs(*len.at("l2") - (p.s1 + p.s2) / 2) < 1e-9);
        CHECK(std::abs(*len.at("l1") - (p.s2 + p.s3) / 2) < 1e-9);
        CHECK(std::abs(*len.at("l3") - (p.s3 + p.s1) / 2) < 1e-9);
        // Right-angled hexagon trigonometry for the a-edges (oracle).
        double c1 = std::cosh(*len.at("l1")), c2 = std::cosh(*len.at("l2")),
               c3 = std::cosh(*len.at("l3"));
        CHECK(std::abs(std::cosh(*len.at("a3")) -
                       (c3 + c2 * c1) /
                           (std::sinh(*len.at("l2")) * std::sinh(*len.at("l1")))) <
              1e-9);
      }
}

TEST_CASE("hexagon special points match closed forms") {
  for (double s1 : kGrid)
    for (double s2 : kGrid)
      for (double s3 : kGrid) {
        if (!(s1 + s2 > 0) || !(s2 + s3 > 0) || !(s3 + s1 > 0)) continue;
        Piece p = Piece::hexagon(s1, s2, s3);
        auto sp = special_points(p);
        CHECK(std::abs(sp.at("H_AB:A").signed_dist - p.s1 / 2) < 1e-9);
        CHECK(std::abs(sp.at("H_AB:B").signed_dist - p.s2 / 2) < 1e-9);
        CHECK(std::abs(sp.at("H_DC:C").signed_dist - p.s2 / 2) < 1e-9);
        CHECK(std::abs(sp.at("H_DC:D").signed_dist - p.s3 / 2) < 1e-9);
        CHECK(std::abs(sp.at("H_EF:E").signed_dist - p.s3 / 2) < 1e-9);
        CHECK(std::abs(sp.at("H_EF:F").signed_dist - p.s1 / 2) < 1e-9);
        if (sp.count("H")) {
          PieceRealization r = realize(p);
          UhpPoint H = sp.at("H").point;
          CHECK(std::abs(dist(H, r.vertices.at("B")) -
                         dist(H, r.vertices.at("C"))) < 1e-8);
          CHECK(std::abs(dist(H, r.vertices.at("D")) -
                         dist(H, r.vertices.at("E"))) < 1e-8);
          CHECK(std::abs(dist(H, r.vertices.at("F")) -
                         dist(H, r.vertices.at("A"))) < 1e-8);
        }
      }
}

TEST_CASE("hexagon shear normalization is cyclic") {
  Piece a = Piece::hexagon(-0.3, 1, 2);
  Piece b = Piece::hexagon(1, 2, -0.3);
  Piece c = Piece::hexagon(2, -0.3, 1);
  CHECK(a.s1 == b.s1);
  CHECK(a.s2 == b.s2);
  CHECK(a.s3 == b.s3);
  CHECK(a.s1 == c.s1);
  CHECK(a.s1 == doctest::Approx(-0.3));
  CHECK_THROWS_AS(Piece::hexagon(-1, 2, -1), GeomError);
  CHECK_THROWS_AS(Piece::hexagon(0, 0, 1), GeomError);
}

TEST_CASE("triangle centers are feet of perpendiculars") {
  PieceRealization r = realize(Piece::triangle());
  auto O = centers(Piece::triangle());
  CHECK(near(O.at("O1"), ideal_foot(IdealPoint::at(0), r.edges.at("l1").line)));
  CHECK(near(O.at("O2"), ideal_foot(IdealPoint::at(1), r.edges.at("l2").line)));
  CHECK(near(O.at("O3"),
             ideal_foot(IdealPoint::infinity(), r.edges.at("l3").line)));
  CHECK_THROWS_AS(centers(Piece::pentagon(1, 1)), GeomError);
  CHECK_THROWS_AS(special_points(Piece::triangle()), GeomError);
}

TEST_CASE("triangle stretch scales leaves and fixes the core") {
  double t = 0.7, et = std::exp(t);
  CHECK(near(triangle_stretch({0.3, 2.0}, t), {0.3, std::pow(2.0, et)},
             1e-12));
  // Unfoliated central region is fixed.
  UhpPoint core{0.5, 0.6};
  CHECK(!foliation_leaf(Piece::triangle(), core).has_value());
  CHECK(near(triangle_stretch(core, t), core, 1e-15));
  CHECK_THROWS_AS(triangle_stretch({2.5, 1.0}, t), GeomError);

  // Leaf parameter scaling in every sector.
  for (int i = 0; i < 200; ++i) {
    UhpPoint p = sample_triangle();
    auto leaf = foliation_leaf(Piece::triangle(), p);
    UhpPoint q = triangle_stretch(p, t);
    auto leaf_q = foliation_leaf(Piece::triangle(), q);
    if (leaf) {
      REQUIRE(leaf_q.has_value());
      CHECK(leaf_q->first == leaf->first);
      CHECK(std::abs(leaf_q->second - et * leaf->second) < 1e-9);
    } else {
      CHECK(near(q, p, 1e-15));
    }
  }
}

TEST_CASE("triangle stretch semigroup and equivariance") {
  Isometry rot = Isometry::from_matrix(1, -1, 1, 0);
  for (int i = 0; i < 300; ++i) {
    UhpPoint p = sample_triangle();
    // phi^{t+u} = phi^u after stretching by t: leaf parameters multiply.
    UhpPoint a = triangle_stretch(triangle_stretch(p, 0.4), 0.3);
    // exp(0.3)*exp(0.4)*d corresponds to the time log(e^{0.3+0.4}) = 0.7.
    UhpPoint b = triangle_stretch(p, 0.7);
    CHECK(near(a, b, 1e-9));
    CHECK(near(apply(rot, triangle_stretch(p, 0.5)),
               triangle_stretch(apply(rot, p), 0.5), 1e-9));
  }
  // Lipschitz bound e^t on sampled pairs.
  for (double t : {0.3, 1.0}) {
    for (int i = 0; i < 500; ++i) {
      UhpPoint p = sample_triangle(), q = sample_triangle();
      double lhs = dist(triangle_stretch(p, t), triangle_stretch(q, t));
      CHECK(lhs <= std::exp(t) * dist(p, q) * (1 + 1e-9) + 1e-9);
    }
  }
  // Arc length along an edge is multiplied by exactly e^t.
  for (double d : {0.2, 1.0, -0.8}) {
    UhpPoint p{0.0, std::exp(d)};
    UhpPoint q = triangle_stretch(p, 0.6);
    CHECK(std::abs(std::log(q.y) - std::exp(0.6) * d) < 1e-12);
  }
}

TEST_CASE("quad doubled stretch map") {
  for (double s : {-1.0, 0.5, 2.0}) {
    Piece q = Piece::quad(s);
    PieceRealization r = realize(q);
    double E = std::exp(s);
    // Identity at t = 0.
    for (int i = 0; i < 50; ++i) {
      UhpPoint p = sample_in(r, -1, E, 0.2, 6);
      CHECK(near(doubled_stretch_eval(q, 0, p), p, 1e-9));
    }
    // Agreement of the two triangle branches along the gluing edge.
    for (double y : {0.5, 1.0, 3.0}) {
      UhpPoint img = doubled_stretch_eval(q, 0.8, {0, y});
      CHECK(near(img, {0, std::pow(y, std::exp(0.8))}, 1e-9));
      UhpPoint l = doubled_stretch_eval(q, 0.8, {-1e-9, y});
      UhpPoint rr = doubled_stretch_eval(q, 0.8, {1e-9, y});
      CHECK(dist(l, rr) < 1e-6);
    }
    // Semigroup law through the stretched piece.
    for (int i = 0; i < 50; ++i) {
      UhpPoint p = sample_in(r, -1, E, 0.2, 6);
      UhpPoint a = doubled_stretch_eval(q.stretched(0.4), 0.3,
                                        doubled_stretch_eval(q, 0.4, p));
      CHECK(near(a, doubled_stretch_eval(q, 0.7, p), 1e-8));
    }
  }
}

TEST_CASE("quad averaged stretch map") {
  for (double s : {-1.0, 0.5, 2.0}) {
    Piece q = Piece::quad(s);
    Piece qt = q.stretched(0.6);
    PieceRealization r = realize(q), rt = realize(qt);
    double E = std::exp(s);
    Isometry sigma = reflection(r.edges.at("a1").line);
    Isometry sigma_t = reflection(rt.edges.at("a1").line);
    for (int i = 0; i < 50; ++i) {
      UhpPoint p = sample_in(r, -1, E, 0.2, 6);
      CHECK(near(averaged_stretch_eval(q, 0, p), p, 1e-9));
      UhpPoint img = averaged_stretch_eval(q, 0.6, p);
      CHECK(near(apply(sigma_t, img),
                 averaged_stretch_eval(q, 0.6, apply(sigma, p)), 1e-9));
      // Lipschitz bound.
      UhpPoint p2 = sample_in(r, -1, E, 0.2, 6);
      CHECK(dist(img, averaged_stretch_eval(q, 0.6, p2)) <=
            std::exp(0.6) * dist(p, p2) * (1 + 1e-9) + 1e-9);
    }
    // The boundary edge a1 maps onto the stretched a1.
    UhpPoint A = r.vertices.at("A");
    double ab = dist(A, r.vertices.at("B"));
    for (double u : {0.1, 0.5, 0.9}) {
      UhpPoint p = point_at_signed_arc(r.edges.at("a1").line, A, u * ab);
      UhpPoint img = averaged_stretch_eval(q, 0.6, p);
      CHECK(contains(rt.edges.at("a1").line, img, 1e-9));
    }
    // Center and special points travel to their stretched counterparts.
    UhpPoint O = centers(q).at("O"), Ot = centers(qt).at("O");
    CHECK(near(averaged_stretch_eval(q, 0.6, O), Ot, 1e-8));
    auto sp = special_points(q), spt = special_points(qt);
    CHECK(near(averaged_stretch_eval(q, 0.6, sp.at("P_AD").point),
               spt.at("P_AD").point, 1e-8));
    CHECK(near(averaged_stretch_eval(q, 0.6, sp.at("P_BC").point),
               spt.at("P_BC").point, 1e-8));
    // The doubled map sends horocycle leaves around the ideal vertex D to
    // leaves: points at equal height land at equal height.
    double Y = 2 * std::max(1.0, E);
    for (double x1 : {-0.8, -0.2, 0.3}) {
      UhpPoint u = doubled_stretch_eval(q, 0.6, {x1 * 0.5 + E * 0.2, Y});
      UhpPoint v = doubled_stretch_eval(q, 0.6, {x1, Y});
      CHECK(std::abs(u.y - v.y) < 1e-9 * u.y);
    }
  }
}

TEST_CASE("pentagon doubled and averaged stretch maps") {
  for (auto [s1, s2] : {std::pair{0.5, 0.5}, {-0.5, 1.5}, {1.0, 2.0}}) {
    Piece p = Piece::pentagon(s1, s2);
    Piece pt = p.stretched(0.6);
    PieceRealization r = realize(p), rt = realize(pt);
    double E1 = std::exp(p.s1);
    for (int i = 0; i < 50; ++i) {
      UhpPoint z = sample_in(r, -1, E1, 0.05, 6);
      CHECK(near(doubled_stretch_eval(p, 0, z), z, 1e-9));
      CHECK(near(averaged_stretch_eval(p, 0, z), z, 1e-9));
    }
    // Continuity across a fan edge of the cover triangulation.
    for (double y : {1.0, 3.0}) {
      UhpPoint l = doubled_stretch_eval(p, 0.8, {-1e-9, y});
      UhpPoint rr = doubled_stretch_eval(p, 0.8, {1e-9, y});
      CHECK(dist(l, rr) < 1e-6);
    }
    // Boundary edge a1 maps onto the stretched a1.
    UhpPoint B = r.vertices.at("B");
    double bc = dist(B, r.vertices.at("C"));
    for (double u : {0.15, 0.5, 0.85}) {
      UhpPoint z = point_at_signed_arc(r.edges.at("a1").line, B, u * bc);
      UhpPoint img = averaged_stretch_eval(p, 0.6, z);
      CHECK(contains(rt.edges.at("a1").line, img, 1e-8));
    }
    // Lipschitz bound on sampled pairs.
    for (int i = 0; i < 100; ++i) {
      UhpPoint a = sample_in(r, -1, E1, 0.05, 6);
      UhpPoint b = sample_in(r, -1, E1, 0.05, 6);
      CHECK(dist(averaged_stretch_eval(p, 0.6, a),
                 averaged_stretch_eval(p, 0.6, b)) <=
            std::exp(0.6) * dist(a, b) * (1 + 1e-9) + 1e-9);
    }
    // The doubled map sends horocycle leaves around the ideal vertex D to
    // leaves: points at equal height land at equal height.
    double Y = 4 * (1 + E1);
    for (double x1 : {-0.8, -0.2, 0.3}) {
      UhpPoint u = doubled_stretch_eval(p, 0.6, {x1 * 0.5 + E1 * 0.2, Y});
      UhpPoint v = doubled_stretch_eval(p, 0.6, {x1, Y});
      CHECK(std::abs(u.y - v.y) < 1e-9 * u.y);
    }
    // Points on the cover's boundary geodesic exceed the unroll cap.
    Isometry S = standardize(r.edges.at("l1").line);
    UhpPoint axis_point = apply(S.inverse(), UhpPoint{0, 1});
    CHECK_THROWS_WITH_AS(doubled_stretch_eval(p, 0.6, axis_point),
                         doctest::Contains("UNROLL_CAP"), GeomError);
  }
  CHECK_THROWS_AS(averaged_stretch_eval(Piece::hexagon(1, 1, 1), 0.5, {0, 1}),
                  GeomError);
}

TEST_CASE("foliation sectors, lookup and image") {
  // Quad sector bounds.
  for (double s : kGrid) {
    Piece q = Piece::quad(s);
    auto secs = foliation_sectors(q);
    REQUIRE(secs.size() == 2);
    double dmin = 0.5 * std::log(1 + std::exp(-s));
    for (const auto& sec : secs) CHECK(std::abs(sec.d_min - dmin) < 1e-12);
    CHECK(std::abs(foliation_image(q, 0.5, "C", dmin) - std::exp(0.5) * dmin) <
          1e-12);
    CHECK_THROWS_WITH_AS(foliation_image(q, 0.5, "C", dmin - 1e-6),
                         doctest::Contains("NOT_IN_SUPPORT"), GeomError);
    CHECK_THROWS_AS(foliation_image(q, 0.5, "X", 1.0), GeomError);
    // A point high on the bi-infinite edge lies in sector D.
    double E = std::exp(s);
    UhpPoint pp{E, 10 * std::sqrt(E * (1 + E))};
    auto leaf = foliation_leaf(q, pp);
    REQUIRE(leaf.has_value());
    CHECK(leaf->first == "D");
    CHECK(std::abs(leaf->second - std::log(10.0)) < 1e-9);
  }
  // Pentagon bound: log r; for s1 = s2 = s the bound is exactly s/2 and the
  // endpoint leaf maps consistently.
  for (double s : {0.3, 1.0, 2.0}) {
    Piece p = Piece::pentagon(s, s);
    auto secs = foliation_sectors(p);
    REQUIRE(secs.size() == 1);
    CHECK(std::abs(secs[0].d_min - s / 2) < 1e-12);
    CHECK(std::abs(foliation_image(p, 1.0, "W", s / 2) -
                   std::exp(1.0) * s / 2) < 1e-12);
  }
  for (auto [s1, s2] : {std::pair{-0.5, 1.5}, {1.0, 2.0}}) {
    Piece p = Piece::pentagon(s1, s2);
    double bound = s2 / 2 + 0.5 * std::log((std::exp(s1) + 1) /
                                           (std::exp(s2) + 1));
    CHECK(std::abs(foliation_sectors(p)[0].d_min - bound) < 1e-12);
  }
  CHECK(foliation_sectors(Piece::hexagon(1, 1, 1)).empty());
  CHECK(!foliation_leaf(Piece::hexagon(1, 1, 1), {0, 2}).has_value());
}
