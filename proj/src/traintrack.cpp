#include "hypstretch/traintrack.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace hyp {

namespace {

constexpr double kSwitchTol = 1e-9;
constexpr double kOmegaTol = 1e-12;

double weight_of(const Weights& w, const std::string& b) {
  auto it = w.find(b);
  if (it == w.end())
    throw GeomError("MISSING_BRANCH_WEIGHT", "no weight for branch " + b);
  return it->second;
}

}  // namespace

void validate_track(const TrainTrack& t) {
  std::map<std::string, int> slots;
  for (const std::string& b : t.branches) slots[b] = 0;
  for (const Switch& s : t.switches) {
    for (const std::string& b : s.in) {
      if (!slots.count(b))
        throw GeomError("INVALID_TRACK", "undeclared branch " + b);
      ++slots[b];
    }
    for (const std::string& b : s.out) {
      if (!slots.count(b))
        throw GeomError("INVALID_TRACK", "undeclared branch " + b);
      ++slots[b];
    }
    if (t.generic && (s.in.size() != 1 || s.out.size() != 2))
      throw GeomError("INVALID_TRACK",
                      "generic track with a non-trivalent switch");
  }
  for (const auto& [b, n] : slots)
    if (n != 2)
      throw GeomError("INVALID_TRACK", "branch " + b + " meets " +
                                           std::to_string(n) +
                                           " switch slots (expected 2)");
}

SwitchCheck check_switch_relations(const TrainTrack& t, const Weights& w) {
  SwitchCheck r;
  for (const Switch& s : t.switches) {
    double sum = 0;
    for (const std::string& b : s.in) sum += weight_of(w, b);
    for (const std::string& b : s.out) sum -= weight_of(w, b);
    r.max_residual = std::max(r.max_residual, std::abs(sum));
  }
  r.ok = r.max_residual < kSwitchTol;
  return r;
}

bool check_cusp_condition(const TrainTrack& t, const Weights& w) {
  for (const auto& loop : t.puncture_loops) {
    double sum = 0;
    for (const std::string& b : loop) sum += weight_of(w, b);
    if (std::abs(sum) >= kSwitchTol) return false;
  }
  return true;
}

double omega(const TrainTrack& t, const Weights& a, const Weights& b) {
  if (!t.generic)
    throw GeomError("NOT_GENERIC",
                    "the symplectic form requires a generic track");
  double sum = 0;
  for (const Switch& s : t.switches) {
    const std::string& left = s.out[0];
    const std::string& right = s.out[1];
    sum += weight_of(a, right) * weight_of(b, left) -
           weight_of(a, left) * weight_of(b, right);
  }
  return sum;
}

std::pair<TrainTrack, Weights> split_to_generic(const TrainTrack& t,
                                                const Weights& w) {
  TrainTrack out;
  out.branches = t.branches;
  out.puncture_loops = t.puncture_loops;
  out.generic = true;
  Weights wout = w;
  int fresh = 0;
  for (size_t si = 0; si < t.switches.size(); ++si) {
    const Switch& s = t.switches[si];
    std::vector<std::string> stem = s.in, fan = s.out;
    if (stem.size() != 1 && fan.size() == 1) {
      // View the switch from the other side; left/right order reverses.
      std::swap(stem, fan);
      std::reverse(fan.begin(), fan.end());
    }
    if (stem.size() != 1)
      throw GeomError("UNSPLITTABLE",
                      "switch with multiple branches on both sides");
    if (fan.size() < 2)
      throw GeomError("UNSPLITTABLE", "switch with a single branch per side");
    // Chain of trivalent switches; each inserted branch carries the partial
    // sum of the remaining fan weights.
    std::string carry = stem[0];
    for (size_t k = 0; k + 2 < fan.size(); ++k) {
      std::string next = "_s" + std::to_string(si) + "_" +
                         std::to_string(fresh++);
      out.switches.push_back({{carry}, {fan[k], next}});
      out.branches.push_back(next);
      double sum = 0;
      for (size_t j = k + 1; j < fan.size(); ++j)
        sum += weight_of(w, fan[j]);
      wout[next] = sum;
      carry = next;
    }
    out.switches.push_back({{carry}, {fan[fan.size() - 2], fan.back()}});
  }
  return {out, wout};
}

bool positivity_test(const TrainTrack& t, const Weights& rho,
                     const std::vector<Weights>& measures) {
  auto [ts, rs] = t.generic ? std::pair{t, rho} : split_to_generic(t, rho);
  for (const Weights& mu : measures) {
    for (const auto& [b, v] : mu)
      if (v < 0)
        throw GeomError("NEGATIVE_MEASURE",
                        "measure is negative on branch " + b);
    Weights ms = t.generic ? mu : split_to_generic(t, mu).second;
    if (!(omega(ts, rs, ms) > kOmegaTol)) return false;
  }
  return true;
}

void write_weights(std::ostream& os, const Weights& w) {
  char buf[64];
  for (const auto& [b, v] : w) {
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    os << b << ' ' << std::string_view(buf, res.ptr - buf) << '\n';
  }
}

Weights read_weights(std::istream& is) {
  Weights w;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string b;
    double v;
    if (!(ls >> b >> v))
      throw GeomError("INVALID_TRACK", "malformed weight line: " + line);
    w[b] = v;
  }
  return w;
}

}  // namespace hyp
