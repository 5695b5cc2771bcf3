#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rcx/lattice.hpp"
#include "rcx/rng.hpp"

namespace rcx {

// p_c(q) = sqrt(q)/(1+sqrt(q))
double critical_point(double q);

// Critical weight of an edge subtending theta. 1 <= q <= 4; the q = 4
// branch is p = (2pi-2theta)/(2pi-theta).
double isoradial_weight(double q, double theta);

struct ModelParams {
  double q = 1.0;
  double r = 0.0;  // (1/pi) arccos(sqrt(q)/2)

  explicit ModelParams(double q_);
};

struct Configuration {
  const IsoradialLattice* lattice = nullptr;
  std::vector<uint8_t> open;

  Configuration() = default;
  explicit Configuration(const IsoradialLattice& lat)
      : lattice(&lat), open(static_cast<size_t>(lat.edge_count()), 0) {}

  bool is_open(int e) const { return open[static_cast<size_t>(e)] != 0; }
  void set(int e, bool o) { open[static_cast<size_t>(e)] = o ? 1 : 0; }
  int open_count() const;

  std::string to_json(double q, uint64_t seed) const;  // header + hex bit-string
};

// Partition of the boundary vertices into wired classes. cls[v] >= 0 marks a
// boundary vertex and its class; -1 everywhere else.
struct BoundaryConditions {
  std::vector<int> cls;

  static BoundaryConditions free(const IsoradialLattice& lat);
  static BoundaryConditions wired(const IsoradialLattice& lat);
  bool trivial() const;
};

struct UnionFind {
  std::vector<int> parent, rank_;
  explicit UnionFind(int n) : parent(static_cast<size_t>(n)), rank_(static_cast<size_t>(n), 0) {
    for (int i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = i;
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[static_cast<size_t>(a)] < rank_[static_cast<size_t>(b)]) std::swap(a, b);
    parent[static_cast<size_t>(b)] = a;
    if (rank_[static_cast<size_t>(a)] == rank_[static_cast<size_t>(b)]) ++rank_[static_cast<size_t>(a)];
    return true;
  }
};

// union-find over open edges plus wired-class merges
UnionFind components(const Configuration& cfg, const BoundaryConditions& bc);
int cluster_count(const Configuration& cfg, const BoundaryConditions& bc);
bool connected(const Configuration& cfg, const BoundaryConditions& bc, int u, int v);

// per-edge critical weights for a lattice
std::vector<double> edge_weights(const IsoradialLattice& lat, double q);

// q^{k(w^xi)} prod p^w (1-p)^{1-w}
double rcm_unnormalized_weight(const Configuration& cfg, const BoundaryConditions& bc,
                               const ModelParams& params);

// full probability table over all 2^|E| configurations (|E| <= 24), indexed
// by the edge bitmask (edge e = bit e)
std::vector<double> exact_distribution(const IsoradialLattice& lat, const BoundaryConditions& bc,
                                       const ModelParams& params);

// single-edge heat-bath update from the exact conditional law
void heat_bath_step(Configuration& cfg, const BoundaryConditions& bc, const ModelParams& params,
                    const std::vector<double>& p, Rng& rng, int edge);

void heat_bath_sweep(Configuration& cfg, const BoundaryConditions& bc, const ModelParams& params,
                     const std::vector<double>& p, Rng& rng);

// one Swendsen-Wang refresh; requires integer q in {1,2,3,4} (used by the
// large Monte Carlo experiments; invalid for fractional q)
void swendsen_wang_step(Configuration& cfg, const BoundaryConditions& bc, int q_int,
                        const std::vector<double>& p, Rng& rng);

struct McmcOptions {
  int64_t sweeps = 1;
  int64_t burn_in = -1;  // -1: 64 per linear size
  bool use_swendsen_wang = false;
};

int64_t default_burn_in(const IsoradialLattice& lat);

Configuration sample_mcmc(const IsoradialLattice& lat, const BoundaryConditions& bc,
                          const ModelParams& params, const McmcOptions& opt, uint64_t seed,
                          uint64_t chain_id = 0);

// independent uniform color per cluster (free boundary conditions)
std::vector<int> edwards_sokal_color(const Configuration& cfg, int q_int, Rng& rng);

// CSV of per-edge open frequencies
std::string marginals_csv(const std::vector<double>& freq);

}  // namespace rcx
