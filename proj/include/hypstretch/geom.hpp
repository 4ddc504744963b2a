#pragma once

// Geometry kernel for the upper half-plane model of the hyperbolic plane.
//
// Points are z = x + iy with y > 0.  Ideal boundary points are either a real
// number or the distinguished symbol "infinity"; infinity is handled
// symbolically throughout, never as a large float.
//
// An Isometry is a real 2x2 matrix with determinant renormalized to 1 acting
// by Moebius transformations; when `reflect` is set the input coordinate is
// conjugated (z -> -conj(z), the reflection across the imaginary axis) before
// the Moebius action, giving the orientation-reversing isometries.

#include <optional>
#include <stdexcept>
#include <string>

namespace hyp {

// Error type carrying a short machine-readable code ("INTERSECTING_GEODESICS",
// "NO_INTERSECTION", ...) plus a human-readable message.
struct GeomError : std::runtime_error {
  std::string code;
  GeomError(std::string c, const std::string& msg)
      : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

struct UhpPoint {
  double x = 0.0;
  double y = 1.0;  // invariant: y > 0
};

// A point of the ideal boundary: a real number or infinity.
struct IdealPoint {
  double v = 0.0;
  bool inf = false;

  static IdealPoint infinity() { return IdealPoint{0.0, true}; }
  static IdealPoint at(double x) { return IdealPoint{x, false}; }
};

bool same_ideal(const IdealPoint& a, const IdealPoint& b, double tol);

struct Isometry {
  double a = 1, b = 0, c = 0, d = 1;
  bool reflect = false;

  // Renormalizes to determinant 1; the matrix must have positive determinant
  // (orientation reversal is expressed solely through `reflect`).
  static Isometry from_matrix(double a, double b, double c, double d,
                              bool reflect = false);
  static Isometry identity() { return Isometry{}; }
  // z -> z + t
  static Isometry translation(double t);
  // z -> k*z for k > 0
  static Isometry scaling(double k);
  Isometry inverse() const;
};

// Composition: apply rhs first, then lhs.
Isometry compose(const Isometry& lhs, const Isometry& rhs);

// Oriented geodesic with ideal endpoints p -> q.
struct Geodesic {
  IdealPoint p, q;  // invariant: p != q
};

// Horocycle represented by its ideal center and one point on it.
struct Horocycle {
  IdealPoint center;
  UhpPoint anchor;
};

UhpPoint apply(const Isometry& m, const UhpPoint& p);
IdealPoint apply(const Isometry& m, const IdealPoint& p);
Geodesic apply(const Isometry& m, const Geodesic& g);
Horocycle apply(const Isometry& m, const Horocycle& h);

double dist(const UhpPoint& p, const UhpPoint& q);
UhpPoint midpoint(const UhpPoint& p, const UhpPoint& q);

// Oriented geodesic through two distinct interior points, directed p -> q.
Geodesic geodesic_through(const UhpPoint& p, const UhpPoint& q);

// Isometry taking g to the upward imaginary axis (g.p -> 0, g.q -> infinity).
Isometry standardize(const Geodesic& g);

bool contains(const Geodesic& g, const UhpPoint& p, double tol);

// Point on g at signed arc length s from origin (which must lie on g),
// positive in the direction of g's orientation.
UhpPoint point_at_signed_arc(const Geodesic& g, const UhpPoint& origin,
                             double s);

// Signed arc-length coordinate of p (projected onto g if slightly off) with
// respect to origin, positive in the direction of g's orientation.
double signed_arc_coordinate(const Geodesic& g, const UhpPoint& origin,
                             const UhpPoint& p);

UhpPoint foot_of_perpendicular(const UhpPoint& p, const Geodesic& g);

// Transversal intersection point; throws NO_INTERSECTION if the geodesics do
// not cross.
UhpPoint intersect(const Geodesic& g1, const Geodesic& g2);

// Common perpendicular of two ultraparallel geodesics, oriented from g1
// toward g2; throws INTERSECTING_GEODESICS when none exists.
Geodesic common_perpendicular(const Geodesic& g1, const Geodesic& g2);

double dist_between_geodesics(const Geodesic& g1, const Geodesic& g2);

// Orientation-reversing reflection across g.
Isometry reflection(const Geodesic& g);

// Translation length 2*acosh(|tr|/2) of an orientation-preserving isometry;
// 0 for elliptic/parabolic ones.
double translation_length(const Isometry& m);

// Intersection of the horocycle centered at `center` through `from` with
// `to_geodesic` (the intersection nearer to `from` when there are two).
// Throws NO_INTERSECTION when the horocycle misses the geodesic.
UhpPoint horocycle_arc(const IdealPoint& center, const UhpPoint& from,
                       const Geodesic& to_geodesic);

// True if p lies on the horocycle within tol (compared in a chart where the
// center is at infinity).
bool on_horocycle(const Horocycle& h, const UhpPoint& p, double tol);

// Signed distance from the horocycle centered at `center` through `base` to
// the parallel horocycle through `p`; positive when p is closer to the
// center.
double horocycle_offset(const IdealPoint& center, const UhpPoint& base,
                        const UhpPoint& p);

}  // namespace hyp
