#pragma once

// Weighted train tracks: switch relations, cusp condition, generic splitting,
// the Thurston symplectic form, and the positivity (hyperbolicity) test.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hypstretch/geom.hpp"

namespace hyp {

// A switch joins the branches of `in` (one side) to those of `out` (the other
// side).  On a generic (trivalent) switch `in` has one branch and `out` two,
// ordered {left, right} as seen from the incoming branch with the surface
// oriented counterclockwise.
struct Switch {
  std::vector<std::string> in, out;
};

struct TrainTrack {
  std::vector<Switch> switches;
  std::vector<std::string> branches;
  std::vector<std::vector<std::string>> puncture_loops;
  bool generic = false;
};

using Weights = std::map<std::string, double>;

// Structural invariants: every branch meets exactly two switch slots; when
// `generic` is set, every switch is one-in/two-out.  Throws INVALID_TRACK.
void validate_track(const TrainTrack& t);

struct SwitchCheck {
  bool ok = true;
  double max_residual = 0;
};

// Residual |sum(in) - sum(out)| per switch; ok iff all < 1e-9.
// Throws MISSING_BRANCH_WEIGHT.
SwitchCheck check_switch_relations(const TrainTrack& t, const Weights& w);

// True iff every declared puncture-loop weight sum vanishes (< 1e-9).
bool check_cusp_condition(const TrainTrack& t, const Weights& w);

// Thurston symplectic form: sum over switches of
// a(right) b(left) - a(left) b(right).  Throws NOT_GENERIC.
double omega(const TrainTrack& t, const Weights& a, const Weights& b);

// Splits every fan switch into a chain of trivalent ones; the inserted
// branches carry the partial sums forced by the switch relations.  Throws
// UNSPLITTABLE when a switch has multiple branches on both sides.
std::pair<TrainTrack, Weights> split_to_generic(const TrainTrack& t,
                                                const Weights& w);

// True iff omega(rho, mu) > 1e-12 for every supplied measure.  Measures must
// be nonnegative (NEGATIVE_MEASURE) and satisfy the switch relations.
bool positivity_test(const TrainTrack& t, const Weights& rho,
                     const std::vector<Weights>& measures);

// Plain-text weight files: one `branch value` line per branch, shortest
// round-trip decimal representation.
void write_weights(std::ostream& os, const Weights& w);
Weights read_weights(std::istream& is);

}  // namespace hyp
