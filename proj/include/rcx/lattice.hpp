#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcx {

// Finite regions of the isoradial lattices built from a stack of horizontal
// tracks. Track j (between corner lines j and j+1) carries a transverse
// angle alpha_j in (0,pi). The diamond graph is the row of unit rhombi of
// each track; corner (j,k) of line j sits at (offset_j + k, height_j).
//
// Combinatorics are index-based throughout. Corner (j,k) is primal iff
// j+k is even. Rhombus (j,k) spans corners k,k+1 on lines j and j+1 and
// carries exactly one primal diagonal:
//   j+k even : corner (j,k)   -- corner (j+1,k+1)   "up-right", theta = pi - alpha_j
//   j+k odd  : corner (j,k+1) -- corner (j+1,k)     "up-left",  theta = alpha_j
//
// Box cut: even lines keep corners [0,K], odd lines [1,K+1], K = 2W-2, and
// tracks keep rhombi k in [1,K]. With this cut the middle line of every
// odd-index track pair protrudes by one primal step at both ends, which is
// what makes the finite track-exchange sweep exact there (see transform).
// Wrapped topologies use all 2W rhombi per track, k mod 2W.

enum class Topology { Box, CylinderHorizontal, Torus };

std::string topology_name(Topology t);
Topology topology_from_name(const std::string& name);

struct TrackAngles {
  std::vector<double> angles;  // one per track, bottom to top

  static TrackAngles uniform(double alpha, int tracks) {
    return TrackAngles{std::vector<double>(static_cast<size_t>(tracks), alpha)};
  }
  // all pi/2 below `split`, alpha at and above (the mixed lattice of the
  // coupling's starting state)
  static TrackAngles mixed(double alpha, int split, int tracks);
  // beta everywhere except alpha on track `special`
  static TrackAngles one_special(double alpha, double beta, int special, int tracks);
};

enum class EdgeOrientation : uint8_t { UpRight, UpLeft };

struct Edge {
  int track = 0;       // j
  int slot = 0;        // k (rhombus index within the track)
  int u = 0, v = 0;    // vertex ids, u on line j, v on line j+1
  double theta = 0.0;  // subtended angle in (0,pi)
  EdgeOrientation orient = EdgeOrientation::UpRight;
};

struct Vertex {
  int line = 0;    // corner line index
  int corner = 0;  // corner index k
  double x = 0.0, y = 0.0;
};

class IsoradialLattice {
 public:
  IsoradialLattice() = default;

  Topology topology() const { return topology_; }
  int width() const { return width_; }
  int tracks() const { return static_cast<int>(angles_.angles.size()); }
  int lines() const { return lines_; }
  const TrackAngles& track_angles() const { return angles_; }
  double angle(int track) const { return angles_.angles.at(static_cast<size_t>(track)); }

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Vertex& vertex(int id) const { return vertices_[static_cast<size_t>(id)]; }
  const Edge& edge(int id) const { return edges_[static_cast<size_t>(id)]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }

  // vertex id for corner (line, k); -1 when absent (dual corner, outside the
  // cut, or isolated-by-cut corner)
  int vertex_at(int line, int corner) const;
  // edge id for rhombus (track, k); -1 when absent
  int edge_at(int track, int slot) const;

  // incident edge ids
  const std::vector<int>& incident(int vertex_id) const {
    return incident_[static_cast<size_t>(vertex_id)];
  }

  // vertices on the bottom (t_j^-) and top (t_j^+) line of track j
  std::vector<int> track_bottom(int track) const { return line_vertices(track); }
  std::vector<int> track_top(int track) const { return line_vertices(track + 1); }
  std::vector<int> line_vertices(int line) const;

  // top-left neighbour of v through its up-left edge; -1 if none
  int up_left_neighbor(int v) const;

  // vertices with lattice degree < 4 (empty for the torus)
  std::vector<int> boundary_vertices() const;

  bool primal_parity_flipped() const { return parity_flip_; }

  // number of corner slots per line period (2W on wrapped topologies)
  int corner_period() const { return corner_period_; }

  std::string to_json() const;

  friend IsoradialLattice build_lattice(const TrackAngles&, int, Topology);
  friend IsoradialLattice dual_lattice(const IsoradialLattice&);

 private:
  void index_geometry();

  Topology topology_ = Topology::Box;
  TrackAngles angles_;
  int width_ = 0;
  int lines_ = 0;          // number of distinct corner lines
  int corner_period_ = 0;  // wrapped: corners mod this
  bool parity_flip_ = false;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
  std::vector<std::vector<int>> vertex_index_;  // per line, per corner -> id
  std::vector<std::vector<int>> edge_index_;    // per track, per slot -> id
};

// Build a finite region with `width` primal vertices per line.
// Box: staggered vertical cut as described above. CylinderHorizontal wraps
// the tracks into cycles of 2*width rhombi; Torus additionally glues line H
// to line 0 (corner shift H mod 2 keeps the parity rule consistent).
IsoradialLattice build_lattice(const TrackAngles& angles, int width, Topology topology);

inline IsoradialLattice build_lattice(const TrackAngles& angles, int width, int tracks,
                                      Topology topology) {
  if (static_cast<int>(angles.angles.size()) != tracks)
    throw std::invalid_argument("track count does not match angle sequence");
  return build_lattice(angles, width, topology);
}

// Dual lattice: same diamond graph, primal/dual roles of the corners
// swapped. Edge (j,k) of the dual is the other diagonal of rhombus (j,k),
// so dual theta = pi - theta and dual(dual) is the original lattice.
IsoradialLattice dual_lattice(const IsoradialLattice& lat);

// Medial graph: one vertex per rhombus, adjacency between rhombi sharing a
// side. On the index grid this is nearest-neighbour adjacency in (j,k).
struct MedialGraph {
  struct MVertex {
    int track, slot;
    double x, y;
  };
  std::vector<MVertex> vertices;               // one per lattice edge, same order
  std::vector<std::array<int, 4>> neighbors;   // left,right,down,up; -1 when absent
  int degree(int i) const {
    int d = 0;
    for (int n : neighbors[static_cast<size_t>(i)]) d += (n >= 0);
    return d;
  }
};

MedialGraph medial_graph(const IsoradialLattice& lat);

// A quad: simple polygonal boundary with four marked corners a,b,c,d (in
// cyclic order). Crossings go from arc (ab) to arc (cd).
struct Quad {
  std::vector<std::array<double, 2>> boundary;  // polygon, cyclic
  std::array<int, 4> corners{};                 // indices into boundary

  static Quad rectangle(double x0, double y0, double x1, double y1);
  bool contains(double x, double y) const;
  // polygon side chain from corner i to corner i+1
  std::vector<std::array<double, 2>> arc(int i) const;
  void validate() const;
};

}  // namespace rcx
