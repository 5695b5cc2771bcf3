#pragma once

#include <cstdint>
#include <vector>

namespace rcx {

// Six-vertex weights on the critical curve: with zeta in [0,pi/2] given by
// cos(zeta) = sqrt(q)/2,
//   a sin(zeta/2) = sin((1-theta/pi) zeta)
//   b sin(zeta/2) = sin(theta zeta / pi)
//   c = 2 cos(zeta/2)
// (limits a = 2(1-theta/pi), b = 2 theta/pi, c = 2 at q = 4). Types 1,2
// carry weight a, 3,4 weight b, 5,6 weight c; the lattice orientation is
// fixed so that the all-in/all-out columns are the a-vertices.
struct SixVertexWeights {
  double a, b, c, zeta;
  double delta() const { return (a * a + b * b - c * c) / (2 * a * b); }
};

SixVertexWeights weights_from(double q, double theta);

// Row-to-row transfer matrix of the torus of width N restricted to the
// sector with N/2+k up arrows. Entries sum the two periodic horizontal
// completions of each row consistent with the ice rule.
struct TransferBlock {
  int N = 0, k = 0;
  std::vector<uint64_t> states;  // bit patterns, popcount N/2+k, ascending
  std::vector<double> dense;     // column-major [to + dim*from]; empty when implicit
  SixVertexWeights w{};

  int dim() const { return static_cast<int>(states.size()); }
  double entry(int to, int from) const;
  // y += M x
  void apply(const std::vector<double>& x, std::vector<double>& y) const;
};

// Dense storage up to dimension 1000, implicit matvec beyond; N <= 16.
TransferBlock build_transfer_block(int N, int k, const SixVertexWeights& w,
                                   int dense_cap = 1000);

struct EigenResult {
  double lambda = 0;
  std::vector<double> vec;   // positive, unit norm
  double residual = 0;       // ||Mv - lambda v|| / lambda
  int64_t iterations = 0;
};

// power iteration from the all-ones vector; throws on non-convergence
// (signals a reducible or degenerate block)
EigenResult leading_eigenvalue(const TransferBlock& block, double tol = 1e-10,
                               int64_t max_iters = 100000);

// max over sectors of ||V1 V2 - V2 V1||_F / (||V1||_F ||V2||_F); N <= 12
double commutator_norm(int N, double q, double theta1, double theta2);
// same with explicit weights (for off-curve controls)
double commutator_norm(int N, const SixVertexWeights& w1, const SixVertexWeights& w2);

}  // namespace rcx
