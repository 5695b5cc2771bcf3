#include "rcx/loops.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace rcx {

Configuration dual_configuration(const Configuration& cfg, const IsoradialLattice& dual) {
  if (dual.edge_count() != cfg.lattice->edge_count())
    throw std::invalid_argument("dual lattice does not match configuration");
  Configuration out(dual);
  for (int e = 0; e < dual.edge_count(); ++e) out.set(e, !cfg.is_open(e));
  return out;
}

namespace {

// Ports of a medial vertex (= rhombus (j,k)): L->(j,k-1), R->(j,k+1),
// D->(j-1,k), U->(j+1,k). The kept diagonal splits the rhombus into two
// triangles; the medial arcs pair the two sides of each triangle. With the
// up-right diagonal uncrossable the pairs are (L,U)(D,R), with the up-left
// one (D,L)(U,R).
enum Port { L = 0, R = 1, D = 2, U = 3 };

int paired_port(bool up_right_blocked, int port) {
  if (up_right_blocked) {
    switch (port) {
      case L: return U;
      case U: return L;
      case D: return R;
      default: return D;
    }
  }
  switch (port) {
    case D: return L;
    case L: return D;
    case U: return R;
    default: return U;
  }
}

int opposite_port(int port) {
  switch (port) {
    case L: return R;
    case R: return L;
    case D: return U;
    default: return D;
  }
}

}  // namespace

LoopFamily trace_loops(const Configuration& cfg) {
  const IsoradialLattice& lat = *cfg.lattice;
  if (lat.topology() != Topology::Box)
    throw std::invalid_argument("loop tracing needs a simply-connected (box) region");
  const int H = lat.tracks();
  const int K = 2 * lat.width() - 2;

  // Pad the region with two rings of virtual rhombi whose primal edges are
  // closed: the outside then behaves as the wired outer dual cluster, loops
  // close around the cut instead of against it, and the one loop wrapping
  // everything stays in the padding.
  const int pad = 2;
  const int j0 = -pad, j1 = H - 1 + pad;
  const int k0 = 1 - pad, k1 = K + pad;
  const int nj = j1 - j0 + 1, nk = k1 - k0 + 1;
  auto idx = [&](int j, int k) { return (j - j0) * nk + (k - k0); };
  auto real_rhombus = [&](int j, int k) { return j >= 0 && j < H && k >= 1 && k <= K; };
  auto open_at = [&](int j, int k) {
    if (!real_rhombus(j, k)) return false;
    int e = lat.edge_at(j, k);
    return e >= 0 && cfg.is_open(e);
  };
  auto pairing_at = [&](int j, int k) {
    bool cls_primal = ((j + k) % 2 + 2) % 2 == 0;
    return cls_primal == open_at(j, k);
  };

  // geometry of the padded corner lines (extrapolated with the end angles)
  std::vector<double> off(static_cast<size_t>(nj) + 1), hei(static_cast<size_t>(nj) + 1);
  {
    std::vector<double> line_off(static_cast<size_t>(H) + 1, 0.0), line_hei(static_cast<size_t>(H) + 1, 0.0);
    for (int j = 0; j < H; ++j) {
      line_off[static_cast<size_t>(j + 1)] = line_off[static_cast<size_t>(j)] + std::cos(lat.angle(j));
      line_hei[static_cast<size_t>(j + 1)] = line_hei[static_cast<size_t>(j)] + std::sin(lat.angle(j));
    }
    auto line_geom = [&](int line) {
      double ox, oy;
      if (line < 0) {
        ox = line_off[0] + line * std::cos(lat.angle(0));
        oy = line_hei[0] + line * std::sin(lat.angle(0));
      } else if (line > H) {
        ox = line_off[static_cast<size_t>(H)] + (line - H) * std::cos(lat.angle(H - 1));
        oy = line_hei[static_cast<size_t>(H)] + (line - H) * std::sin(lat.angle(H - 1));
      } else {
        ox = line_off[static_cast<size_t>(line)];
        oy = line_hei[static_cast<size_t>(line)];
      }
      return std::pair<double, double>{ox, oy};
    };
    for (int j = j0; j <= j1 + 1; ++j) {
      auto [ox, oy] = line_geom(j);
      off[static_cast<size_t>(j - j0)] = ox;
      hei[static_cast<size_t>(j - j0)] = oy;
    }
  }
  auto centre = [&](int j, int k) {
    double x0 = off[static_cast<size_t>(j - j0)] + k, y0c = hei[static_cast<size_t>(j - j0)];
    double x1 = off[static_cast<size_t>(j - j0 + 1)] + k, y1c = hei[static_cast<size_t>(j - j0 + 1)];
    return std::array<double, 2>{(x0 + x1 + 1) / 2, (y0c + y1c) / 2};
  };

  // boundary stubs of the padded grid in cyclic order; consecutive pairs
  // close the rare loop that reaches the outermost ring
  std::map<std::pair<int, int>, std::pair<int, int>> wall;
  {
    struct Stub {
      int cell, port;
    };
    std::vector<Stub> stubs;
    for (int k = k0; k <= k1; ++k) stubs.push_back({idx(j0, k), D});
    for (int j = j0; j <= j1; ++j) stubs.push_back({idx(j, k1), R});
    for (int k = k1; k >= k0; --k) stubs.push_back({idx(j1, k), U});
    for (int j = j1; j >= j0; --j) stubs.push_back({idx(j, k0), L});
    const int ns = static_cast<int>(stubs.size());
    for (int s = 0; s < ns; s += 2) {
      const Stub& A = stubs[static_cast<size_t>(s % ns)];
      const Stub& B = stubs[static_cast<size_t>((s + 1) % ns)];
      wall[{A.cell, A.port}] = {B.cell, B.port};
      wall[{B.cell, B.port}] = {A.cell, A.port};
    }
  }

  auto neighbor = [&](int j, int k, int port) -> std::pair<int, int> {
    switch (port) {
      case L: return {j, k - 1};
      case R: return {j, k + 1};
      case D: return {j - 1, k};
      default: return {j + 1, k};
    }
  };

  std::vector<std::array<char, 4>> seen(static_cast<size_t>(nj * nk), {0, 0, 0, 0});
  LoopFamily fam;

  for (int jj = j0; jj <= j1; ++jj) {
    for (int kk = k0; kk <= k1; ++kk) {
      for (int p0 = 0; p0 < 4; ++p0) {
        if (seen[static_cast<size_t>(idx(jj, kk))][static_cast<size_t>(p0)]) continue;
        std::vector<std::array<double, 2>> pts;
        bool touches_wall = false, touches_real = false, touches_virtual = false;
        int j = jj, k = kk, p = p0;
        while (!seen[static_cast<size_t>(idx(j, k))][static_cast<size_t>(p)]) {
          seen[static_cast<size_t>(idx(j, k))][static_cast<size_t>(p)] = 1;
          pts.push_back(centre(j, k));
          (real_rhombus(j, k) ? touches_real : touches_virtual) = true;
          int out = paired_port(pairing_at(j, k), p);
          seen[static_cast<size_t>(idx(j, k))][static_cast<size_t>(out)] = 1;  // reverse direction
          auto [nxj, nxk] = neighbor(j, k, out);
          if (nxj >= j0 && nxj <= j1 && nxk >= k0 && nxk <= k1) {
            j = nxj;
            k = nxk;
            p = opposite_port(out);
          } else {
            touches_wall = true;
            auto it = wall.find({idx(j, k), out});
            if (it == wall.end()) throw std::logic_error("unmatched boundary stub");
            j = it->second.first / nk + j0;
            k = it->second.first % nk + k0;
            p = it->second.second;
          }
        }
        if (!touches_real) continue;  // purely virtual: the padding's own loops
        Loop lp;
        lp.points = std::move(pts);
        lp.boundary = touches_wall || touches_virtual;

        // family: class of the top-most corner strictly inside the loop (it
        // belongs to the cluster whose outer boundary this loop is)
        auto inside = [&](double x, double y) {
          bool in = false;
          size_t n = lp.points.size();
          for (size_t a = 0, b = n - 1; a < n; b = a++) {
            double xi = lp.points[a][0], yi = lp.points[a][1];
            double xj = lp.points[b][0], yj = lp.points[b][1];
            bool cross = ((yi > y) != (yj > y)) && (x < (xj - xi) * (y - yi) / (yj - yi) + xi);
            if (cross) in = !in;
          }
          return in;
        };
        double best_y = -1e300, best_x = 0;
        int best_class = 1;
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        for (auto& pt : lp.points) {
          xmin = std::min(xmin, pt[0]);
          xmax = std::max(xmax, pt[0]);
          ymin = std::min(ymin, pt[1]);
          ymax = std::max(ymax, pt[1]);
        }
        for (int lj = std::max(j0, -pad); lj <= j1 + 1; ++lj) {
          double y = hei[static_cast<size_t>(lj - j0)];
          if (y < ymin - 1 || y > ymax + 1) continue;
          for (int lk = k0; lk <= k1 + 1; ++lk) {
            double x = off[static_cast<size_t>(lj - j0)] + lk;
            if (x < xmin - 1 || x > xmax + 1) continue;
            if (!inside(x, y)) continue;
            if (y > best_y + 1e-12 || (std::abs(y - best_y) <= 1e-12 && x < best_x)) {
              best_y = y;
              best_x = x;
              best_class = (((lj + lk) % 2 + 2) % 2 == 0) ? 1 : 0;
            }
          }
        }
        lp.family = best_class;
        if (lp.family == 1)
          fam.f1.push_back(std::move(lp));
        else
          fam.f0.push_back(std::move(lp));
      }
    }
  }
  return fam;
}

std::string LoopFamily::to_json() const {
  nlohmann::json j;
  auto dump = [](const std::vector<Loop>& ls) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Loop& l : ls) {
      nlohmann::json jl;
      jl["boundary"] = l.boundary;
      jl["points"] = l.points;
      arr.push_back(jl);
    }
    return arr;
  };
  j["f0"] = dump(f0);
  j["f1"] = dump(f1);
  return j.dump();
}

namespace {

double dist_point_segment(double px, double py, const std::array<double, 2>& a,
                          const std::array<double, 2>& b) {
  double vx = b[0] - a[0], vy = b[1] - a[1];
  double wx = px - a[0], wy = py - a[1];
  double vv = vx * vx + vy * vy;
  double t = vv > 0 ? std::clamp((wx * vx + wy * vy) / vv, 0.0, 1.0) : 0.0;
  double dx = px - (a[0] + t * vx), dy = py - (a[1] + t * vy);
  return std::sqrt(dx * dx + dy * dy);
}

double dist_point_chain(double px, double py, const std::vector<std::array<double, 2>>& chain) {
  double best = 1e300;
  for (size_t i = 0; i + 1 < chain.size(); ++i)
    best = std::min(best, dist_point_segment(px, py, chain[i], chain[i + 1]));
  return best;
}

template <class LatLike>
bool crossing_impl(const LatLike& lat, const std::vector<uint8_t>& open, const Quad& quad) {
  quad.validate();
  double min_edge = 1e300;
  for (int e = 0; e < lat.edge_count(); ++e) {
    const auto& a = lat.vertex(lat.edge(e).u);
    const auto& b = lat.vertex(lat.edge(e).v);
    double dx = a.x - b.x, dy = a.y - b.y;
    min_edge = std::min(min_edge, std::sqrt(dx * dx + dy * dy));
  }
  const double snap = min_edge / 2;

  auto arc_ab = quad.arc(0);
  auto arc_cd = quad.arc(2);
  std::vector<uint8_t> in_quad(static_cast<size_t>(lat.vertex_count()), 0);
  std::vector<uint8_t> src(static_cast<size_t>(lat.vertex_count()), 0),
      dst(static_cast<size_t>(lat.vertex_count()), 0);
  for (int v = 0; v < lat.vertex_count(); ++v) {
    double x = lat.vertex(v).x, y = lat.vertex(v).y;
    bool near_ab = dist_point_chain(x, y, arc_ab) <= snap;
    bool near_cd = dist_point_chain(x, y, arc_cd) <= snap;
    in_quad[static_cast<size_t>(v)] = quad.contains(x, y) || near_ab || near_cd;
    src[static_cast<size_t>(v)] = near_ab;
    dst[static_cast<size_t>(v)] = near_cd;
  }
  // BFS over open edges inside the quad
  std::vector<uint8_t> seen(static_cast<size_t>(lat.vertex_count()), 0);
  std::vector<int> stack;
  for (int v = 0; v < lat.vertex_count(); ++v)
    if (src[static_cast<size_t>(v)] && in_quad[static_cast<size_t>(v)]) {
      stack.push_back(v);
      seen[static_cast<size_t>(v)] = 1;
    }
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    if (dst[static_cast<size_t>(x)]) return true;
    for (int e : lat.incident(x)) {
      if (!open[static_cast<size_t>(e)]) continue;
      const auto& ed = lat.edge(e);
      int y = ed.u == x ? ed.v : ed.u;
      if (!seen[static_cast<size_t>(y)] && in_quad[static_cast<size_t>(y)]) {
        seen[static_cast<size_t>(y)] = 1;
        stack.push_back(y);
      }
    }
  }
  return false;
}

}  // namespace

bool crossing(const Configuration& cfg, const Quad& quad) {
  return crossing_impl(*cfg.lattice, cfg.open, quad);
}

bool dual_crossing(const Configuration& cfg, const IsoradialLattice& dual, const Quad& quad) {
  Configuration dc = dual_configuration(cfg, dual);
  return crossing_impl(dual, dc.open, quad);
}

namespace {

bool in_restriction(double x, double y, ArmRestriction res, const std::array<double, 2>& c) {
  const double tol = 1e-9;
  switch (res) {
    case ArmRestriction::Plane: return true;
    case ArmRestriction::HalfTop: return y <= c[1] + tol;     // arms below the apex
    case ArmRestriction::HalfBottom: return y >= c[1] - tol;  // arms above
    case ArmRestriction::HalfLeft: return x <= c[0] + tol;
    case ArmRestriction::Quarter: return x <= c[0] + tol && y <= c[1] + tol;
  }
  return true;
}

struct RingEntry {
  double angle;
  int type;  // 1 primal, 0 dual
  int cluster;
};

}  // namespace

bool arm_event(const Configuration& cfg, const IsoradialLattice& dual, const std::string& sigma,
               double r, double R, ArmRestriction restriction, std::array<double, 2> center) {
  if (!(r < R)) throw std::invalid_argument("need r < R");
  for (char c : sigma)
    if (c != '0' && c != '1') throw std::invalid_argument("arm type string must be over {0,1}");
  if (sigma.empty()) return true;
  for (size_t i = 0; i + 1 < sigma.size(); ++i)
    if (sigma[i] == sigma[i + 1])
      throw std::invalid_argument("only alternating arm patterns are supported exactly");

  const IsoradialLattice& lat = *cfg.lattice;
  Configuration dcfg = dual_configuration(cfg, dual);

  auto dinf = [&](double x, double y) {
    return std::max(std::abs(x - center[0]), std::abs(y - center[1]));
  };

  // restricted components and their inner/outer reach, for each type
  struct Side {
    std::vector<int> comp;         // component id per vertex (-1 outside region)
    std::vector<uint8_t> bridges;  // per component
  };
  auto analyse = [&](const IsoradialLattice& l, const std::vector<uint8_t>& open) {
    Side s;
    s.comp.assign(static_cast<size_t>(l.vertex_count()), -1);
    std::vector<uint8_t> region(static_cast<size_t>(l.vertex_count()), 0);
    for (int v = 0; v < l.vertex_count(); ++v) {
      double x = l.vertex(v).x, y = l.vertex(v).y;
      region[static_cast<size_t>(v)] = dinf(x, y) <= R && in_restriction(x, y, restriction, center);
    }
    UnionFind uf(l.vertex_count());
    for (int e = 0; e < l.edge_count(); ++e) {
      if (!open[static_cast<size_t>(e)]) continue;
      int u = l.edge(e).u, v = l.edge(e).v;
      if (region[static_cast<size_t>(u)] && region[static_cast<size_t>(v)]) uf.unite(u, v);
    }
    std::map<int, int> relabel;
    std::vector<uint8_t> inner, outer;
    for (int v = 0; v < l.vertex_count(); ++v) {
      if (!region[static_cast<size_t>(v)]) continue;
      int root = uf.find(v);
      auto it = relabel.find(root);
      int id;
      if (it == relabel.end()) {
        id = static_cast<int>(relabel.size());
        relabel[root] = id;
        inner.push_back(0);
        outer.push_back(0);
      } else {
        id = it->second;
      }
      s.comp[static_cast<size_t>(v)] = id;
      double d = dinf(l.vertex(v).x, l.vertex(v).y);
      if (d <= r) inner[static_cast<size_t>(id)] = 1;
      if (d >= R - 1.0) outer[static_cast<size_t>(id)] = 1;
    }
    s.bridges.resize(inner.size());
    for (size_t i = 0; i < inner.size(); ++i) s.bridges[i] = inner[i] && outer[i];
    return s;
  };
  Side primal = analyse(lat, cfg.open);
  Side duals = analyse(dual, dcfg.open);

  // mid-ring scan in counterclockwise order
  const double m = (r + R) / 2;
  std::vector<RingEntry> ring;
  auto scan = [&](const IsoradialLattice& l, const Side& s, int type) {
    for (int v = 0; v < l.vertex_count(); ++v) {
      int c = s.comp[static_cast<size_t>(v)];
      if (c < 0 || !s.bridges[static_cast<size_t>(c)]) continue;
      double x = l.vertex(v).x, y = l.vertex(v).y;
      if (std::abs(dinf(x, y) - m) > 1.0) continue;
      ring.push_back({std::atan2(y - center[1], x - center[0]), type, c});
    }
  };
  scan(lat, primal, 1);
  scan(dual, duals, 0);
  std::sort(ring.begin(), ring.end(),
            [](const RingEntry& a, const RingEntry& b) { return a.angle < b.angle; });

  // collapse to runs
  std::vector<std::pair<int, int>> runs;  // (type, cluster)
  for (const RingEntry& e : ring) {
    if (!runs.empty() && runs.back() == std::make_pair(e.type, e.cluster)) continue;
    runs.emplace_back(e.type, e.cluster);
  }
  if (runs.empty()) return false;
  // merge the cyclic seam for plane events
  bool cyclic = (restriction == ArmRestriction::Plane);
  if (cyclic && runs.size() > 1 && runs.front() == runs.back()) runs.pop_back();

  auto matches_from = [&](size_t start) {
    size_t pos = start;
    size_t need = 0;
    size_t steps = 0;
    while (need < sigma.size() && steps < runs.size()) {
      size_t idx = cyclic ? (pos % runs.size()) : pos;
      if (idx >= runs.size()) break;
      if (runs[idx].first == sigma[need] - '0') ++need;
      ++pos;
      ++steps;
    }
    return need == sigma.size();
  };
  if (!cyclic) return matches_from(0);
  for (size_t s0 = 0; s0 < runs.size(); ++s0)
    if (matches_from(s0)) return true;
  return false;
}

int lmax(const Configuration& cfg, int v) {
  const IsoradialLattice& lat = *cfg.lattice;
  BoundaryConditions free_bc = BoundaryConditions::free(lat);
  UnionFind uf = components(cfg, free_bc);
  int root = uf.find(v);
  int best = v;
  for (int w = 0; w < lat.vertex_count(); ++w) {
    if (uf.find(w) != root) continue;
    const Vertex& a = lat.vertex(w);
    const Vertex& b = lat.vertex(best);
    if (a.y > b.y + 1e-12 || (std::abs(a.y - b.y) <= 1e-12 && a.x < b.x - 1e-12)) best = w;
  }
  return best;
}

ClusterExtrema cluster_extrema(const Configuration& cfg, int v) {
  const IsoradialLattice& lat = *cfg.lattice;
  BoundaryConditions free_bc = BoundaryConditions::free(lat);
  UnionFind uf = components(cfg, free_bc);
  int root = uf.find(v);
  ClusterExtrema ex{-1e300, 1e300, -1e300};
  for (int w = 0; w < lat.vertex_count(); ++w) {
    if (uf.find(w) != root) continue;
    const Vertex& a = lat.vertex(w);
    ex.top = std::max(ex.top, a.y);
    ex.bottom = std::min(ex.bottom, a.y);
    ex.right = std::max(ex.right, a.x);
  }
  return ex;
}

}  // namespace rcx
