#include "hypstretch/geom.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "hypstretch/tolerance.hpp"

namespace hyp {

namespace {

using complexd = std::complex<double>;

// Matrix conjugation rule: R*M = conj(M)*R where R(z) = -conj(z).
Isometry conj_matrix(const Isometry& m) {
  Isometry r = m;
  r.b = -m.b;
  r.c = -m.c;
  return r;
}

// Isometry sending the ideal point c to infinity.
Isometry to_infinity(const IdealPoint& c) {
  if (c.inf) return Isometry::identity();
  return Isometry::from_matrix(0, 1, -1, c.v);  // z -> 1/(c - z)
}

}  // namespace

bool same_ideal(const IdealPoint& a, const IdealPoint& b, double tol) {
  if (a.inf || b.inf) return a.inf && b.inf;
  return std::abs(a.v - b.v) <= tol;
}

Isometry Isometry::from_matrix(double a, double b, double c, double d,
                               bool reflect) {
  // Compensated 2x2 determinant (Kahan): the naive a*d - b*c cancels
  // catastrophically when both products are large, which then skews the
  // renormalization of every composed matrix.
  double w = b * c;
  double err = std::fma(b, c, -w);
  double det = std::fma(a, d, -w) - err;
  if (!(det > 0) || !std::isfinite(det))
    throw GeomError("INVALID_ISOMETRY",
                    "matrix determinant must be positive and finite");
  double s = 1.0 / std::sqrt(det);
  return Isometry{a * s, b * s, c * s, d * s, reflect};
}

Isometry Isometry::translation(double t) {
  return Isometry{1, t, 0, 1, false};
}

Isometry Isometry::scaling(double k) {
  return Isometry::from_matrix(k, 0, 0, 1);
}

Isometry Isometry::inverse() const {
  Isometry inv{d, -b, -c, a, reflect};
  if (reflect) inv = conj_matrix(inv);
  inv.reflect = reflect;
  return inv;
}

Isometry compose(const Isometry& lhs, const Isometry& rhs) {
  Isometry r = lhs.reflect ? conj_matrix(rhs) : rhs;
  // Both factors have determinant 1, so the product does too; recomputing the
  // determinant from the product entries cancels badly when the entries are
  // large, and renormalizing by it would corrupt the trace.
  return Isometry{lhs.a * r.a + lhs.b * r.c, lhs.a * r.b + lhs.b * r.d,
                  lhs.c * r.a + lhs.d * r.c, lhs.c * r.b + lhs.d * r.d,
                  lhs.reflect != rhs.reflect};
}

UhpPoint apply(const Isometry& m, const UhpPoint& p) {
  complexd z(p.x, p.y);
  if (m.reflect) z = complexd(-p.x, p.y);
  complexd w = (m.a * z + m.b) / (m.c * z + m.d);
  return UhpPoint{w.real(), w.imag()};
}

IdealPoint apply(const Isometry& m, const IdealPoint& p) {
  if (p.inf) {
    if (m.c == 0.0) return IdealPoint::infinity();
    return IdealPoint::at(m.a / m.c);
  }
  double v = m.reflect ? -p.v : p.v;
  double den = m.c * v + m.d;
  if (den == 0.0) return IdealPoint::infinity();
  return IdealPoint::at((m.a * v + m.b) / den);
}

Geodesic apply(const Isometry& m, const Geodesic& g) {
  return Geodesic{apply(m, g.p), apply(m, g.q)};
}

Horocycle apply(const Isometry& m, const Horocycle& h) {
  return Horocycle{apply(m, h.center), apply(m, h.anchor)};
}

double dist(const UhpPoint& p, const UhpPoint& q) {
  double dx = p.x - q.x, dy = p.y - q.y;
  double arg = 1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y);
  return std::acosh(std::max(arg, 1.0));
}

Geodesic geodesic_through(const UhpPoint& p, const UhpPoint& q) {
  double scale = std::max({1.0, std::abs(p.x), std::abs(q.x), p.y, q.y});
  if (std::abs(p.x - q.x) <= 1e-14 * scale) {
    double x = 0.5 * (p.x + q.x);
    if (q.y > p.y) return Geodesic{IdealPoint::at(x), IdealPoint::infinity()};
    return Geodesic{IdealPoint::infinity(), IdealPoint::at(x)};
  }
  double m = (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y) /
             (2.0 * (q.x - p.x));
  double r = std::hypot(p.x - m, p.y);
  if (q.x > p.x) return Geodesic{IdealPoint::at(m - r), IdealPoint::at(m + r)};
  return Geodesic{IdealPoint::at(m + r), IdealPoint::at(m - r)};
}

Isometry standardize(const Geodesic& g) {
  if (g.p.inf && g.q.inf)
    throw GeomError("DEGENERATE_GEODESIC", "equal ideal endpoints");
  if (g.q.inf) return Isometry::from_matrix(1, -g.p.v, 0, 1);
  if (g.p.inf) return Isometry::from_matrix(0, 1, -1, g.q.v);
  double p = g.p.v, q = g.q.v;
  if (p == q) throw GeomError("DEGENERATE_GEODESIC", "equal ideal endpoints");
  if (p < q) return Isometry::from_matrix(1, -p, -1, q);
  return Isometry::from_matrix(1, -p, 1, -q);
}

bool contains(const Geodesic& g, const UhpPoint& p, double tol) {
  UhpPoint z = apply(standardize(g), p);
  return std::abs(z.x) <= tol * std::max(1.0, z.y);
}

UhpPoint point_at_signed_arc(const Geodesic& g, const UhpPoint& origin,
                             double s) {
  Isometry S = standardize(g);
  UhpPoint z = apply(S, origin);
  double y0 = std::hypot(z.x, z.y);
  return apply(S.inverse(), UhpPoint{0.0, y0 * std::exp(s)});
}

double signed_arc_coordinate(const Geodesic& g, const UhpPoint& origin,
                             const UhpPoint& p) {
  Isometry S = standardize(g);
  UhpPoint z0 = apply(S, origin);
  UhpPoint z1 = apply(S, p);
  return std::log(std::hypot(z1.x, z1.y) / std::hypot(z0.x, z0.y));
}

UhpPoint foot_of_perpendicular(const UhpPoint& p, const Geodesic& g) {
  Isometry S = standardize(g);
  UhpPoint z = apply(S, p);
  return apply(S.inverse(), UhpPoint{0.0, std::hypot(z.x, z.y)});
}

UhpPoint intersect(const Geodesic& g1, const Geodesic& g2) {
  Isometry S = standardize(g1);
  IdealPoint u = apply(S, g2.p), v = apply(S, g2.q);
  if (u.inf || v.inf)
    throw GeomError("NO_INTERSECTION", "geodesics share an ideal endpoint");
  if (u.v * v.v >= 0)
    throw GeomError("NO_INTERSECTION", "geodesics do not cross");
  return apply(S.inverse(), UhpPoint{0.0, std::sqrt(-u.v * v.v)});
}

Geodesic common_perpendicular(const Geodesic& g1, const Geodesic& g2) {
  Isometry S = standardize(g1);
  IdealPoint u = apply(S, g2.p), v = apply(S, g2.q);
  if (u.inf || v.inf || u.v * v.v <= 0)
    throw GeomError("INTERSECTING_GEODESICS",
                    "geodesics cross or are asymptotic; no common "
                    "perpendicular");
  double r = std::sqrt(u.v * v.v);
  Geodesic perp = (u.v > 0)
                      ? Geodesic{IdealPoint::at(-r), IdealPoint::at(r)}
                      : Geodesic{IdealPoint::at(r), IdealPoint::at(-r)};
  Isometry Sinv = S.inverse();
  return Geodesic{apply(Sinv, perp.p), apply(Sinv, perp.q)};
}

double dist_between_geodesics(const Geodesic& g1, const Geodesic& g2) {
  Isometry S = standardize(g1);
  IdealPoint u = apply(S, g2.p), v = apply(S, g2.q);
  if (u.inf || v.inf || u.v * v.v <= 0)
    throw GeomError("INTERSECTING_GEODESICS",
                    "geodesics cross or are asymptotic");
  double lo = std::sqrt(std::min(std::abs(u.v), std::abs(v.v)));
  double hi = std::sqrt(std::max(std::abs(u.v), std::abs(v.v)));
  return std::log((hi + lo) / (hi - lo));
}

UhpPoint midpoint(const UhpPoint& p, const UhpPoint& q) {
  double d = dist(p, q);
  if (d < 1e-15) return p;
  Geodesic g = geodesic_through(p, q);
  return point_at_signed_arc(g, p, d / 2.0);
}

Isometry reflection(const Geodesic& g) {
  if (g.p.inf || g.q.inf) {
    double k = g.p.inf ? g.q.v : g.p.v;
    return Isometry::from_matrix(1, 2 * k, 0, 1, true);  // z -> 2k - conj(z)
  }
  double m = 0.5 * (g.p.v + g.q.v);
  double r = 0.5 * std::abs(g.q.v - g.p.v);
  if (r == 0) throw GeomError("DEGENERATE_GEODESIC", "equal ideal endpoints");
  // z -> m + r^2/(conj(z) - m), acting on w = -conj(z) as m - r^2/(w + m).
  // Entries written directly so the determinant is 1 analytically; routing
  // this through a renormalizing constructor loses precision for small r.
  return Isometry{m / r, (m - r) * ((m + r) / r), 1 / r, m / r, true};
}

double translation_length(const Isometry& m) {
  if (m.reflect)
    throw GeomError("REFLECTING_ISOMETRY",
                    "translation length requires an orientation-preserving "
                    "isometry");
  double tr = std::abs(m.a + m.d);
  if (tr <= 2.0) return 0.0;
  return 2.0 * std::acosh(tr / 2.0);
}

UhpPoint horocycle_arc(const IdealPoint& center, const UhpPoint& from,
                       const Geodesic& to_geodesic) {
  Isometry S = to_infinity(center);
  UhpPoint z = apply(S, from);
  double h = z.y;
  IdealPoint u = apply(S, to_geodesic.p), v = apply(S, to_geodesic.q);
  UhpPoint hit;
  if (u.inf || v.inf) {
    // Geodesic ends at the horocycle's center: a vertical line in this chart.
    hit = UhpPoint{u.inf ? v.v : u.v, h};
  } else {
    double m = 0.5 * (u.v + v.v);
    double r = 0.5 * std::abs(v.v - u.v);
    double disc = r * r - h * h;
    if (disc < 0) {
      if (disc < -base_tol() * std::max(1.0, r * r))
        throw GeomError("NO_INTERSECTION", "horocycle misses the geodesic");
      disc = 0;
    }
    double off = std::sqrt(disc);
    double x1 = m - off, x2 = m + off;
    hit = UhpPoint{std::abs(x1 - z.x) <= std::abs(x2 - z.x) ? x1 : x2, h};
  }
  return apply(S.inverse(), hit);
}

bool on_horocycle(const Horocycle& h, const UhpPoint& p, double tol) {
  Isometry S = to_infinity(h.center);
  return std::abs(apply(S, p).y - apply(S, h.anchor).y) <= tol;
}

double horocycle_offset(const IdealPoint& center, const UhpPoint& base,
                        const UhpPoint& p) {
  Isometry S = to_infinity(center);
  return std::log(apply(S, p).y / apply(S, base).y);
}

}  // namespace hyp
