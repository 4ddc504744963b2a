#pragma once

// Combinatorial hyperbolic surfaces: pieces glued along l-edges, JSON I/O,
// validation, developing maps, holonomy lengths of closed curves and
// orthogonal boundary-to-boundary arcs, boundary-block/crown classification,
// candidate enumeration and the arc-distance estimator.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hypstretch/pieces.hpp"

namespace hyp {

struct Gluing {
  int from_piece = 0;
  std::string from_edge;
  int to_piece = 0;
  std::string to_edge;
  std::optional<double> shear;  // required exactly on bi-infinite edges
};

struct Topology {
  int g = 0, b = 0, p = 0;
};

struct Surface {
  std::vector<Piece> pieces;
  std::vector<Gluing> gluings;  // piece indices into `pieces`
  Topology topology;
  std::vector<int> ids;  // external piece ids, parallel to `pieces`
};

// JSON schema: {"topology":{g,b,p}, "pieces":[{id,kind,shears[]}],
// "gluings":[{"from":[id,edge],"to":[id,edge],"shear"?}]}.  Loading
// normalizes piece shears (pentagon swap, hexagon rotation) and relabels the
// gluing edges of the affected pieces accordingly.  Throws BAD_SURFACE_FILE.
Surface load_surface(std::istream& is);
void save_surface(std::ostream& os, const Surface& s);

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> violations;
  int expected_pieces = 0;  // 4g - 4 + 2p + 2b
};

// Structural checks: piece count, every l-edge glued exactly once to a
// type-compatible l-edge (finite lengths equal to 1e-9, half-infinite edges
// paired corner-to-corner, bi-infinite edges carrying a shear), a-edges
// unglued, connected gluing graph.  Violations are reported, never thrown.
ValidationReport validate(const Surface& s);

// One step of a path in the dual graph: a piece entered via `enter` and left
// via `exit` (both l-edge labels; for open paths the first `enter` and last
// `exit` are a-edge labels).
struct PathStep {
  int piece = 0;
  std::string enter, exit;
};

struct DualPath {
  std::vector<PathStep> steps;
  bool closed = false;  // closed paths wrap: last exit glues to first enter
};

// Isometry placing the entered piece's canonical realization against the
// exited piece's edge, in the exited piece's coordinates.  The shear is
// required exactly on bi-infinite edges.
Isometry edge_transition(const PieceRealization& out_r,
                         const std::string& out_edge,
                         const PieceRealization& in_r,
                         const std::string& in_edge,
                         std::optional<double> shear);

// Places each successive piece against the previous piece's exit edge,
// starting from the first piece in canonical coordinates.  Open paths return
// the placement of the last piece; closed paths return the holonomy.
// Throws PATH_BROKEN when consecutive steps do not follow a gluing.
Isometry develop(const Surface& s, const DualPath& path);

// translation_length of the developed holonomy of a closed reduced word.
// Throws PARABOLIC_OR_TRIVIAL when |trace| <= 2.
double curve_length(const Surface& s, const DualPath& path);

// Length of the orthogeodesic between the two boundary a-edges of an open
// word.  Throws GEODESICS_INTERSECT when the developed a-edge geodesics meet
// (no orthogeodesic in this class).
double arc_length(const Surface& s, const DualPath& path);

struct Candidate {
  enum class Kind { Curve, Arc, Boundary };
  Kind kind = Kind::Curve;
  DualPath path;
  std::string name;
};

// Length of a candidate (curve_length for curves/boundaries, arc_length for
// arcs).
double candidate_length(const Surface& s, const Candidate& c);

// All reduced closed dual words with at most `depth` gluing crossings modulo
// rotation and inversion, all reduced open words between a-edges with at most
// `depth` steps modulo inversion, plus the boundary curves carrying a-edges.
std::vector<Candidate> enumerate_candidates(const Surface& s, int depth);

struct DistanceEstimate {
  double lower_bound = 0;
  Candidate witness;
  int depth = 0;
  double length_from = 0, length_to = 0;  // witness lengths in X and Y
};

// max over candidates of log(l_Y / l_X); a lower bound for the arc distance
// (the candidate set is finite).  Candidates whose length is undefined in
// either surface are skipped.  With curves_only, arcs are excluded (the
// Thurston-distance variant).  Throws COMBINATORIAL_MISMATCH.
DistanceEstimate arc_distance_estimate(const Surface& x, const Surface& y,
                                       int depth, bool curves_only = false);

// --- Boundary block and crowns ---------------------------------------------

// A spike between consecutive boundary-cycle quads: the pieces crossed when
// winding around the shared ideal vertex, as path steps from the quad after
// leaving it to the next quad included.
struct Spike {
  std::vector<PathStep> steps;
};

struct Crown {
  std::vector<int> quads;     // cyclically ordered cycle quads Q_i
  std::vector<Spike> spikes;  // spike i joins quads[i] to quads[i+1 mod n]
  DualPath core;              // closed dual word of the core curve
};

struct BlockDecomposition {
  std::vector<int> block_pieces;     // all non-triangle pieces
  std::vector<Crown> crowns;         // one per cycle of non-compact boundary
  std::vector<int> triangle_pieces;  // the complement's pieces
};

// Decomposes the surface into the boundary block (non-triangle pieces), its
// crowns (cycles of bi-infinite quad edges glued to triangles, chained by the
// shares-a-spike relation) and the triangulated complement.
BlockDecomposition classify(const Surface& s);

}  // namespace hyp
