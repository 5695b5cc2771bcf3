#pragma once

#include <array>
#include <string>
#include <vector>

#include "rcx/rcm.hpp"

namespace rcx {

// dual edge open iff primal edge closed (edge ids shared through the rhombi)
Configuration dual_configuration(const Configuration& cfg, const IsoradialLattice& dual);

struct Loop {
  std::vector<std::array<double, 2>> points;  // cyclic polyline on medial vertices
  bool boundary = false;                      // closed along the medial boundary
  int family = 1;                             // 1: around a primal cluster, 0: dual
};

struct LoopFamily {
  std::vector<Loop> f0, f1;
  std::string to_json() const;
};

// Trace the medial-graph loops of a Box configuration. Loops that leave the
// region are closed along the medial boundary and flagged boundary=true.
LoopFamily trace_loops(const Configuration& cfg);

// number of loops including boundary ones
inline int loop_count(const LoopFamily& f) {
  return static_cast<int>(f.f0.size() + f.f1.size());
}

// open crossing between arc(ab) and arc(cd) inside the quad
bool crossing(const Configuration& cfg, const Quad& quad);
// same on the dual configuration of cfg
bool dual_crossing(const Configuration& cfg, const IsoradialLattice& dual, const Quad& quad);

enum class ArmRestriction { Plane, HalfTop, HalfBottom, HalfLeft, Quarter };

// Disjoint arms of the prescribed types in counterclockwise order between
// L-infinity radius r and R around `center` (defaults to the origin).
// sigma: '1' = open primal arm, '0' = open dual arm. Alternating sigma (and
// single arms) are detected exactly via the bridging-run scan; other
// patterns are rejected.
bool arm_event(const Configuration& cfg, const IsoradialLattice& dual, const std::string& sigma,
               double r, double R, ArmRestriction restriction,
               std::array<double, 2> center = {0.0, 0.0});

// left-most among the highest vertices of v's cluster
int lmax(const Configuration& cfg, int v);

struct ClusterExtrema {
  double top, bottom, right;  // max y, min y, max x over the cluster
};
ClusterExtrema cluster_extrema(const Configuration& cfg, int v);

}  // namespace rcx
