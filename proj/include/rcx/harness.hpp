#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rcx/lattice.hpp"
#include "rcx/rcm.hpp"

namespace rcx {

struct ExperimentSpec {
  std::string name;
  double alpha = 1.0471975511965976;  // pi/3
  double beta = 1.5707963267948966;   // pi/2
  double q = 1.0;
  int size = 64;
  int radius = 16;
  std::vector<int> sizes;
  int64_t samples = 10000;
  uint64_t seed = 1;
  int chains = 8;
  int threads = 0;  // 0: hardware
  std::string output_path;

  static ExperimentSpec from_json_file(const std::string& path);
  static ExperimentSpec from_json(const std::string& text);
  std::string config_hash() const;
};

struct Report {
  std::string name;
  std::string summary_json;  // {estimate, stderr, target, pass, ...}
  std::string csv;
  bool pass = false;
};

// simple counter merge across deterministic chains
struct Tally {
  int64_t n = 0;
  int64_t hits = 0;
  double mean() const { return n ? static_cast<double>(hits) / static_cast<double>(n) : 0.0; }
  double stderr_() const {
    if (n < 2) return 1.0;
    double p = mean();
    return std::sqrt(std::max(p * (1 - p), 1e-300) / static_cast<double>(n));
  }
};

// run `chains` jobs on up to `threads` threads; merge order is chain order
void run_chains(int chains, int threads, const std::function<void(int)>& job);

std::string git_describe();

// --- experiments -----------------------------------------------------------

// enumeration oracles for the star-triangle and track-exchange mechanisms
Report exp_measure_preservation(const ExperimentSpec& spec);

// crossing probability of a centred square on L(alpha) vs L(pi/2)
Report exp_crossing_universality(const ExperimentSpec& spec);

struct IicRatioResult {
  int64_t accepted0 = 0;   // lmax(0) = 0 branch
  int64_t accepted1 = 0;   // lmax(0+) = 0+ branch
  int64_t both = 0;        // both branches at once (excluded)
  int64_t proposals = 0;
  double estimate() const {
    int64_t n = accepted0 + accepted1;
    return n ? static_cast<double>(accepted1) / static_cast<double>(n) : 0.0;
  }
};

// rejection sampling of the two-rooted half-plane three-arm conditioning on
// the one-special-track lattice; returns the empirical branch fraction
IicRatioResult iic_ratio_run(double alpha, double beta, double q, int R, int64_t max_proposals,
                             int64_t target_accepted, uint64_t seed, int chains, int threads);

Report exp_iic_ratio(const ExperimentSpec& spec);

// 2:1 rectangle crossings inside the sanity band
Report exp_rsw_probe(const ExperimentSpec& spec);

// half-plane three-arm frequencies against R, slope fit
Report exp_arm_decay(const ExperimentSpec& spec);

Report run_experiment(const ExperimentSpec& spec);

// shared monte-carlo piece: crossing probability of the centred square of
// side `size` on L(alpha), by independent draws (q=1) or Swendsen-Wang
Tally square_crossing_tally(double alpha, double q, int size, int64_t samples, uint64_t seed,
                            int chains, int threads);

}  // namespace rcx
