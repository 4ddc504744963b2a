#pragma once

// Stretch rays on crowned surfaces: the center-displacement function, the
// auxiliary cylinder spanned by a crown (developed spike fans with special
// edges, special points and triangulation shears), the horocyclic transport
// shift, the correction cocycle on the cylinder's train track, and the
// surface-level stretch transforms.

#include <optional>
#include <string>
#include <vector>

#include "hypstretch/surface.hpp"
#include "hypstretch/traintrack.hpp"

namespace hyp {

// Signed gap along a quad's bi-infinite edge between the quad center and the
// center of the ideal triangle completing the doubled quad, positive toward
// the corner-side ideal vertex.  Closed form 0.5*ln(1 + exp(-s)).
double displacement(double s);

// The same gap measured on the realized doubled quad (test oracle).
double displacement_geometric(double s);

// One line of a developed spike fan (chart: the spike's ideal vertex at
// infinity, the fan lines vertical).  Special lines are full geodesics of
// glued piece edges and carry a marked point from each side; diagonals of the
// tailored polygons are non-special.
struct CylinderEdge {
  bool special = false;
  double x = 0;      // fan coordinate
  double shear = 0;  // log of the gap ratio across this line
  // log-height of the marked point seen from the exited / entered piece;
  // equal on half-infinite gluings, offset by the shear on bi-infinite ones.
  std::optional<double> mark_out, mark_in;
};

struct CylinderSpike {
  int quad_before = 0, quad_after = 0;  // flanking cycle quads (piece indices)
  double s_before = 0, s_after = 0;     // their quad parameters
  std::vector<CylinderEdge> edges;      // fan order
  double shear_sum = 0;                 // sum of the fan shears
  double eta_shift = 0;  // horocyclic transport offset along the far leaf
};

struct CylinderModel {
  std::vector<CylinderSpike> spikes;  // spike i joins quads[i] to quads[i+1]
};

// Develops every spike walk of the crown and measures the fan shears and
// marked points.  Throws NOT_A_CROWN on malformed crown data.
CylinderModel build_cylinder(const Surface& s, const Crown& c);

// Cylinder of the same crown on the time-t stretched surface.
CylinderModel stretched_cylinder(const Surface& s, const Crown& c, double t);

// |sum of fan shears at t  -  e^t * sum at 0  -  displacement correction|
// per spike; the correction is -d(e^t s_i) + e^t d(s_i) - d(e^t s_{i+1})
// + e^t d(s_{i+1}) with d = displacement and s_i the flanking quad params.
std::vector<double> stretch_difference_check(const Surface& s, const Crown& c,
                                             double t);

// Per-spike signed offset between the horocyclic transport of one quad
// center across the spike and the next quad center.
std::vector<double> horocyclic_shift(const Surface& s, const Crown& c);

// Correction weights on the cylinder train track.  Branches per crown j,
// spike i with fan edges k = 1..n: "a<j>_<i>" (spike branch, shared with the
// mirror copy), "b<j>_<i>" (boundary-leaf branch of quad i), "e<j>_<i>_<k>"
// (fan edge, shared with the mirror), "f<j>_<i>_<k>" (chain branches), and
// mirrored "bm"/"fm" copies.
struct StretchCocycle {
  TrainTrack track;
  Weights eps;    // correction weights at time t (zero at t = 0)
  Weights rho0;   // shear weights at time 0
  Weights rho_t;  // e^t * rho0 + eps
  std::vector<Weights> measures;  // carried core counting measure per crown
  double t = 0;
};

// Builds the track and weights from the cylinders at times 0 and t.  Throws
// SWITCH_VIOLATION when a switch residual exceeds 1e-6.
StretchCocycle epsilon_cocycle(const Surface& s, const BlockDecomposition& d,
                               double t);

// Crown-adjacent gluing shears at time t recovered by matching the stretched
// cylinder against the corrected triangle-side weights; agrees with plain
// e^t scaling and is kept as a cross-check.
std::vector<double> matched_crown_shears(const Surface& s, const Crown& c,
                                         double t);

// Time-t point of the stretch ray: every piece parameter and every gluing
// shear multiplied by e^t.  Throws INVALID_SURFACE.
Surface generalized_stretch(const Surface& s, double t);

// Restriction to triangulated surfaces.  Throws NON_TRIANGLE_PIECE.
Surface thurston_stretch(const Surface& s, double t);

// True when the lamination has a finite-length leaf, or a leaf that spirals
// onto a closed geodesic (a piece self-glued along two edges sharing an ideal
// vertex, with nonzero shear); the exact arc-distance geodesy needs one.
bool has_measurable_sublamination(const Surface& s);

struct VerifyCheck {
  std::string name;
  double value = 0;  // measured residual (or indicator)
  double bound = 0;  // tolerance it must stay under
  bool pass = false;
};

struct VerifyReport {
  bool pass = true;
  std::vector<VerifyCheck> checks;
};

// Runs the invariant suite on one surface over a grid of stretch times.
VerifyReport verify_surface(const Surface& s, const std::vector<double>& ts);

}  // namespace hyp
