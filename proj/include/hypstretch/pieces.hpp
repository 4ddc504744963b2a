#pragma once

// The four geometric pieces cut out by a finite maximal geodesic lamination:
// ideal triangle, quadrilateral (two ideal vertices), pentagon (one ideal
// vertex) and right-angled hexagon, each with a canonical upper-half-plane
// realization parametrized by shear coordinates.
//
// Edge label conventions (l = lamination leaf, a = boundary segment):
//   Triangle  vertices V1=0, V2=1, V3=inf; l1=(V2,V3), l2=(V3,V1), l3=(V1,V2).
//   Quad      ABCD with C,D ideal: a1=AB, l1=BC, l2=CD (bi-infinite), l3=DA.
//   Pentagon  ABCDE with D ideal: l1=AB (finite), a1=BC, l2=CD, l3=DE, a2=EA.
//   Hexagon   ABCDEF: l2=AB, a3=BC, l1=CD, a2=DE, l3=EF, a1=FA
//             (a_i is opposite l_i).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hypstretch/geom.hpp"

namespace hyp {

enum class PieceKind { Triangle, Quad, Pentagon, Hexagon };

// Shear-coordinate description of a piece.  Constructors normalize:
// pentagon swaps so s1 <= s2; hexagon cyclically relabels so s2, s3 > 0.
struct Piece {
  PieceKind kind = PieceKind::Triangle;
  double s1 = 0, s2 = 0, s3 = 0;

  static Piece triangle();
  static Piece quad(double s);
  static Piece pentagon(double s1, double s2);
  static Piece hexagon(double s1, double s2, double s3);

  // Every shear multiplied by e^t (triangles unchanged).
  Piece stretched(double t) const;

  int l_edge_count() const;
  int a_edge_count() const;
};

enum class EdgeType { Finite, HalfInfinite, BiInfinite };

struct EdgeRealization {
  EdgeType type = EdgeType::Finite;
  // Full geodesic containing the edge, oriented with the piece on its left.
  Geodesic line{IdealPoint::at(0), IdealPoint::infinity()};
  // Finite corners of the edge, in the order induced by `line` (absent ends
  // are ideal).
  std::optional<UhpPoint> c0, c1;
  // Center of the piece on this edge (bi-infinite edges only).
  std::optional<UhpPoint> center;

  bool has_ideal_start() const { return !c0.has_value(); }
  bool has_ideal_end() const { return !c1.has_value(); }
};

struct PieceRealization {
  Piece piece;
  std::map<std::string, EdgeRealization> edges;   // "l1",..., "a1",...
  std::map<std::string, UhpPoint> vertices;       // finite corners "A","B",...
  std::map<std::string, IdealPoint> ideal_vertices;
};

// Canonical realization; deterministic.  Throws INVALID_SHEARS if the shear
// parameters violate the piece invariants.
PieceRealization realize(const Piece& p);

bool piece_contains(const PieceRealization& r, const UhpPoint& p, double tol);

// Centers: triangle "O1","O2","O3" (on l1,l2,l3); quad "O" (on l2).
// Throws NO_CENTER for pentagon/hexagon.
std::map<std::string, UhpPoint> centers(const Piece& p);

struct SpecialPoint {
  UhpPoint point;          // geometric construction
  double signed_dist;      // geometric signed distance from the paired vertex
  double closed_form;      // predicted value (s/2, s1/2, s2/2, s3/2)
  std::string vertex;      // the vertex the distance is measured from
};

// Special points with their signed distances, computed both geometrically and
// via the closed forms.  Keys: quad "P_AD","P_BC"; pentagon
// "H_AB:A","H_AB:B","H_DC","H_DE"; hexagon "H_AB:A","H_AB:B","H_DC:C",
// "H_DC:D","H_EF:E","H_EF:F".  Throws NO_SPECIAL_POINTS for triangles.
std::map<std::string, SpecialPoint> special_points(const Piece& p);

// Edge lengths; absent value means the edge is infinite.
std::map<std::string, std::optional<double>> edge_lengths(const Piece& p);

// --- Horocyclic foliation -------------------------------------------------

struct FoliationSector {
  std::string name;     // triangle "12","23","31"; quad "C","D"; pentagon "W"
  IdealPoint center;    // ideal center of the horocycle leaves
  UhpPoint reference;   // leaf parameter d is measured from the horocycle
                        // through this point, increasing toward the center
  double d_min;         // leaves exist for d >= d_min
};

// Sector list for a piece (empty for hexagons).
std::vector<FoliationSector> foliation_sectors(const Piece& p);

// Leaf lookup: locates the sector and leaf parameter of a point; returns
// nullopt if the point is in no sector (unfoliated region or hexagon).
std::optional<std::pair<std::string, double>> foliation_leaf(
    const Piece& p, const UhpPoint& point);

// Leaf parameter transport d -> e^t d, with an interval check on both ends.
// Throws NOT_IN_SUPPORT when d is below the sector's lower bound.
double foliation_image(const Piece& p, double t, const std::string& sector,
                       double d);

// --- Stretch maps ----------------------------------------------------------

// Thurston's stretch map of the canonical ideal triangle (0,1,inf): scales
// every horocyclic leaf parameter by e^t, identity on the unfoliated core.
// Throws OUT_OF_PIECE when the point is not in the triangle.
UhpPoint triangle_stretch(const UhpPoint& point, double t);

// Averaged stretch map for quads and pentagons: the midpoint average of the
// doubled-triangulation map and its mirror conjugate.  The pentagon case
// evaluates on the cyclic cover, unrolling at most `unroll_cap` fundamental
// domains.  Throws OUT_OF_PIECE / HEXAGON_UNSUPPORTED.
UhpPoint averaged_stretch_eval(const Piece& p, double t,
                               const UhpPoint& point);

// The doubled-triangulation stretch map (used internally by the average, and
// exposed for tests): defined on the double of the piece.
UhpPoint doubled_stretch_eval(const Piece& p, double t, const UhpPoint& point);

}  // namespace hyp
