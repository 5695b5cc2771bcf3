#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rcx/loops.hpp"

namespace rcx {

// Punctures eta*Z^2 in [-1/eta, 1/eta]^2, with oriented segments between
// nearest-neighbour punctures as the word alphabet.
struct PunctureGrid {
  double eta;
  int half;  // punctures at (i*eta, j*eta), |i|,|j| <= half

  explicit PunctureGrid(double eta_);

  int points_per_side() const { return 2 * half + 1; }
  int point_count() const { return points_per_side() * points_per_side(); }
  std::array<double, 2> point(int id) const;
  int point_id(int ix, int iy) const;  // grid indices in [-half, half]

  // segments: 0 = rightward from (ix,iy), 1 = upward from (ix,iy)
  int segment_count() const;
  // (from-point, to-point) of segment id
  std::array<int, 2> segment(int id) const;
};

// A letter is a signed segment id: +(id+1) when the crossing has the
// segment's tail on its left, -(id+1) for the reverse orientation.
using Word = std::vector<int>;

// cyclically reduced word in canonical rotation (empty when trivial)
struct ReducedWord {
  Word letters;
  bool operator==(const ReducedWord& o) const { return letters == o.letters; }
  bool operator<(const ReducedWord& o) const { return letters < o.letters; }
  std::string to_json() const;
};

// letters crossed by the counterclockwise-oriented loop, in order, starting
// from the lowest-index loop vertex off the segments
Word word_of_loop(const std::vector<std::array<double, 2>>& loop, const PunctureGrid& grid);

// delete adjacent inverse pairs (cyclically) to the fixpoint; the result is
// rotation-canonicalised so equal classes compare equal
ReducedWord reduce(const Word& w);

ReducedWord homotopy_class(const std::vector<std::array<double, 2>>& loop,
                           const PunctureGrid& grid);

// punctures strictly inside the loop
int punctures_surrounded(const std::vector<std::array<double, 2>>& loop, const PunctureGrid& grid);

// d_H <= eta comparison: every loop of F_i surrounding at least 2 but not
// all punctures has a loop of F'_i in the same class, and vice versa.
// Boundary-flagged loops are ignored.
bool dH_compare(const LoopFamily& f, const LoopFamily& fp, const PunctureGrid& grid);

// discrete Frechet distance between closed polylines, minimised over cyclic
// shifts of the second curve (an upper bound on the loop distance)
double loop_distance(const std::vector<std::array<double, 2>>& g1,
                     const std::vector<std::array<double, 2>>& g2);

// d_CN <= eps comparison on loop families (boundary loops ignored)
bool dCN_compare(const LoopFamily& f, const LoopFamily& fp, double eps);

// fraction of quads in the family whose crossing indicator differs
double dSS_quad_compare(const Configuration& a, const Configuration& b,
                        const std::vector<Quad>& quads);

}  // namespace rcx
