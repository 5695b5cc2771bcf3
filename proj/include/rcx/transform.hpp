#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rcx/rcm.hpp"

namespace rcx {

// Local star-triangle data. Triangle edges are indexed (AB, BC, CA) and star
// edges (OA, OB, OC); star edge k is "opposite" triangle edge (k+1)%3, i.e.
// OA faces BC. Subtended angles satisfy theta_star[k] = pi - theta_tri[opp].
struct StarTrianglePatch {
  double q = 1.0;
  std::array<double, 3> triangle_p{};  // AB, BC, CA
  std::array<double, 3> star_p{};      // OA, OB, OC

  // triangle thetas must sum to 2*pi
  static StarTrianglePatch from_triangle_angles(double q, const std::array<double, 3>& theta_tri);
  // validates the coupling normalisation identities to `tol`
  void validate(double tol = 1e-9) const;

  // probabilities of the four outcomes when no triangle edge is open:
  // index 0 = no star edge open, 1+k = only star edge k open
  std::array<double, 4> forward_zero_open_probs() const;
  // probabilities when all three star edges are open:
  // index 0 = all triangle edges open, 1+k = triangle edge k closed, rest open
  std::array<double, 4> reverse_all_open_probs() const;
};

// triangle_state (AB,BC,CA) -> star_state (OA,OB,OC)
std::array<uint8_t, 3> star_triangle_forward(const StarTrianglePatch& patch,
                                             const std::array<uint8_t, 3>& triangle_state,
                                             Rng& rng);
// star_state -> triangle_state
std::array<uint8_t, 3> star_triangle_reverse(const StarTrianglePatch& patch,
                                             const std::array<uint8_t, 3>& star_state, Rng& rng);

enum class ExchangeMethod {
  DiamondSweep,           // finite sweep of star-triangle moves (exact)
  ConditionalResample,    // exact resampling of the two-track strip
  DiamondSweepThickEnds,  // sweep with approximate end columns
  NoOp,                   // equal angles
};

struct TrackExchangeResult {
  IsoradialLattice lattice;
  Configuration cfg;  // cfg.lattice must be re-pointed after moving `lattice` out
  ExchangeMethod method = ExchangeMethod::NoOp;
  bool exact = true;
};

struct TrackExchangeOptions {
  // allow the thick-end approximate sweep when no exact method applies
  bool allow_approximate = false;
  // strip enumeration cap for the resampler (edges)
  int resample_max_edges = 24;
};

// Exchange tracks i-1 and i. `i` is the middle corner line. The lattice of
// the result has the two angles swapped; the configuration is coupled so
// that connectivity between vertices off the middle line is preserved
// (sweep) or so that the induced boundary partition is preserved
// (resampler). Exact methods push the random-cluster measure forward to the
// swapped lattice's measure exactly.
TrackExchangeResult track_exchange(const IsoradialLattice& lat, const Configuration& cfg,
                                   const BoundaryConditions& bc, const ModelParams& params, int i,
                                   Rng& rng, const TrackExchangeOptions& opt = {});

// True when the finite cut admits the exact diamond sweep at middle line i.
bool sweep_is_clean(const IsoradialLattice& lat, int i);

// Enumerate the sweep's full output distribution for one input (clean box
// sweeps only): pairs of (configuration on the swapped lattice, probability).
// The returned configurations have a null lattice pointer.
std::vector<std::pair<Configuration, double>> track_exchange_outcomes(
    const IsoradialLattice& lat, const Configuration& cfg, const ModelParams& params, int i);

struct CouplingV1Options {
  int N = 2;
  double alpha = 1.0471975511965976;  // pi/3
  double q = 1.0;
  int width = 5;
  uint64_t seed = 1;
  int record_every = 1;
  int64_t mcmc_sweeps = 64;
  int64_t mcmc_burn_in = -1;
  Topology topology = Topology::CylinderHorizontal;
};

struct CouplingV1Step {
  int t = 0;
  int j = 0;  // track index in the paper's numbering (middle = j + N)
  IsoradialLattice lattice;
  Configuration cfg;
};

struct CouplingV1Result {
  std::vector<CouplingV1Step> trajectory;  // recorded snapshots, t=0 first
  int total_steps = 0;
  int inexact_steps = 0;
};

// schedule j(t) = N + (2N+1) floor(t/2N) - t
int coupling_schedule(int N, int t);
int coupling_total_steps(int N, double alpha);

CouplingV1Result coupling_v1(const CouplingV1Options& opt);

}  // namespace rcx
