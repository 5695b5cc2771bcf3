#include "rcx/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace rcx {

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_angles(const TrackAngles& a) {
  if (a.angles.empty()) throw std::invalid_argument("need at least one track");
  for (double x : a.angles)
    if (!(x > 0.0 && x < kPi)) throw std::invalid_argument("track angle outside (0,pi)");
}
}  // namespace

std::string topology_name(Topology t) {
  switch (t) {
    case Topology::Box: return "box";
    case Topology::CylinderHorizontal: return "cylinder";
    case Topology::Torus: return "torus";
  }
  return "?";
}

Topology topology_from_name(const std::string& name) {
  if (name == "box") return Topology::Box;
  if (name == "cylinder") return Topology::CylinderHorizontal;
  if (name == "torus") return Topology::Torus;
  throw std::invalid_argument("unknown topology: " + name);
}

TrackAngles TrackAngles::mixed(double alpha, int split, int tracks) {
  TrackAngles t;
  t.angles.resize(static_cast<size_t>(tracks));
  for (int j = 0; j < tracks; ++j)
    t.angles[static_cast<size_t>(j)] = (j >= split) ? alpha : kPi / 2;
  return t;
}

TrackAngles TrackAngles::one_special(double alpha, double beta, int special, int tracks) {
  TrackAngles t;
  t.angles.assign(static_cast<size_t>(tracks), beta);
  if (special >= 0 && special < tracks) t.angles[static_cast<size_t>(special)] = alpha;
  return t;
}

int IsoradialLattice::vertex_at(int line, int corner) const {
  if (topology_ == Topology::Torus) {
    int H = tracks();
    int wrap = line / H;
    line %= H;
    if (line < 0) { line += H; --wrap; }
    corner -= wrap * (H % 2);  // corner shift keeps j+k parity consistent
  }
  if (line < 0 || line >= lines_) return -1;
  if (corner_period_ > 0) corner = ((corner % corner_period_) + corner_period_) % corner_period_;
  const auto& row = vertex_index_[static_cast<size_t>(line)];
  if (corner < 0 || corner >= static_cast<int>(row.size())) return -1;
  return row[static_cast<size_t>(corner)];
}

int IsoradialLattice::edge_at(int track, int slot) const {
  if (topology_ == Topology::Torus) {
    int H = tracks();
    int wrap = track / H;
    track %= H;
    if (track < 0) { track += H; --wrap; }
    slot -= wrap * (H % 2);
  }
  if (track < 0 || track >= tracks()) return -1;
  if (corner_period_ > 0) slot = ((slot % corner_period_) + corner_period_) % corner_period_;
  const auto& row = edge_index_[static_cast<size_t>(track)];
  if (slot < 0 || slot >= static_cast<int>(row.size())) return -1;
  return row[static_cast<size_t>(slot)];
}

std::vector<int> IsoradialLattice::line_vertices(int line) const {
  std::vector<int> out;
  if (topology_ == Topology::Torus) line = ((line % lines_) + lines_) % lines_;
  if (line < 0 || line >= lines_) return out;
  for (int id : vertex_index_[static_cast<size_t>(line)])
    if (id >= 0) out.push_back(id);
  return out;
}

int IsoradialLattice::up_left_neighbor(int v) const {
  for (int e : incident(v)) {
    const Edge& ed = edges_[static_cast<size_t>(e)];
    if (ed.u == v && ed.orient == EdgeOrientation::UpLeft) return ed.v;
  }
  return -1;
}

std::vector<int> IsoradialLattice::boundary_vertices() const {
  std::vector<int> out;
  for (int i = 0; i < vertex_count(); ++i)
    if (static_cast<int>(incident_[static_cast<size_t>(i)].size()) < 4) out.push_back(i);
  return out;
}

IsoradialLattice build_lattice(const TrackAngles& angles, int width, Topology topology) {
  check_angles(angles);
  if (width < 2) throw std::invalid_argument("width must be at least 2");
  const int H = static_cast<int>(angles.angles.size());
  if (topology == Topology::Torus && width % 2 != 0)
    throw std::invalid_argument("torus requires even width");

  IsoradialLattice lat;
  lat.topology_ = topology;
  lat.angles_ = angles;
  lat.width_ = width;
  lat.lines_ = (topology == Topology::Torus) ? H : H + 1;

  const bool wrapped = (topology != Topology::Box);
  const int period = 2 * width;
  lat.corner_period_ = wrapped ? period : 0;
  const int K = 2 * width - 2;

  // line offsets (embedding only; combinatorics never read coordinates)
  std::vector<double> off(static_cast<size_t>(lat.lines_) + 1, 0.0),
      hei(static_cast<size_t>(lat.lines_) + 1, 0.0);
  for (int j = 0; j < H; ++j) {
    off[static_cast<size_t>(j + 1)] = off[static_cast<size_t>(j)] + std::cos(angles.angles[static_cast<size_t>(j)]);
    hei[static_cast<size_t>(j + 1)] = hei[static_cast<size_t>(j)] + std::sin(angles.angles[static_cast<size_t>(j)]);
  }

  auto corner_span = [&](int line) -> std::pair<int, int> {
    if (wrapped) return {0, period - 1};
    return (line % 2 == 0) ? std::make_pair(0, K) : std::make_pair(1, K + 1);
  };
  auto slot_span = [&](int) -> std::pair<int, int> {
    if (wrapped) return {0, period - 1};
    return {1, K};
  };

  // tentative vertex table
  lat.vertex_index_.assign(static_cast<size_t>(lat.lines_), {});
  for (int j = 0; j < lat.lines_; ++j) {
    auto [lo, hi] = corner_span(j);
    lat.vertex_index_[static_cast<size_t>(j)].assign(static_cast<size_t>(hi) + 1, -1);
    (void)lo;
  }

  auto corner_primal = [&](int line, int k) { return ((line + k) % 2 + 2) % 2 == 0; };

  // first pass: collect edges against corner coordinates
  struct RawEdge {
    int j, k, lu, cu, lv, cv;
    double theta;
    EdgeOrientation o;
  };
  std::vector<RawEdge> raw;
  for (int j = 0; j < H; ++j) {
    auto [slo, shi] = slot_span(j);
    for (int k = slo; k <= shi; ++k) {
      const double alpha = angles.angles[static_cast<size_t>(j)];
      RawEdge e;
      e.j = j;
      e.k = k;
      if (corner_primal(j, k)) {
        e.lu = j; e.cu = k; e.lv = j + 1; e.cv = k + 1;
        e.theta = kPi - alpha;
        e.o = EdgeOrientation::UpRight;
      } else {
        e.lu = j; e.cu = k + 1; e.lv = j + 1; e.cv = k;
        e.theta = alpha;
        e.o = EdgeOrientation::UpLeft;
      }
      raw.push_back(e);
    }
  }

  auto resolve = [&](int line, int corner) -> std::optional<std::pair<int, int>> {
    if (topology == Topology::Torus && line == H) {
      line = 0;
      corner += H % 2;
    }
    if (line < 0 || line >= lat.lines_) return std::nullopt;
    if (wrapped) corner = ((corner % period) + period) % period;
    auto [lo, hi] = corner_span(line);
    if (corner < lo || corner > hi) return std::nullopt;
    return std::make_pair(line, corner);
  };

  // mark used corners, then number vertices line-major
  std::vector<std::vector<char>> used(static_cast<size_t>(lat.lines_));
  for (int j = 0; j < lat.lines_; ++j)
    used[static_cast<size_t>(j)].assign(lat.vertex_index_[static_cast<size_t>(j)].size(), 0);
  std::vector<std::optional<std::array<int, 4>>> resolved(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    auto a = resolve(raw[i].lu, raw[i].cu);
    auto b = resolve(raw[i].lv, raw[i].cv);
    if (!a || !b) continue;
    resolved[i] = std::array<int, 4>{a->first, a->second, b->first, b->second};
    used[static_cast<size_t>(a->first)][static_cast<size_t>(a->second)] = 1;
    used[static_cast<size_t>(b->first)][static_cast<size_t>(b->second)] = 1;
  }

  for (int j = 0; j < lat.lines_; ++j) {
    auto& row = lat.vertex_index_[static_cast<size_t>(j)];
    for (int k = 0; k < static_cast<int>(row.size()); ++k) {
      if (!used[static_cast<size_t>(j)][static_cast<size_t>(k)]) continue;
      if (!corner_primal(j, k)) continue;
      Vertex v;
      v.line = j;
      v.corner = k;
      v.x = off[static_cast<size_t>(j)] + k;
      v.y = hei[static_cast<size_t>(j)];
      row[static_cast<size_t>(k)] = static_cast<int>(lat.vertices_.size());
      lat.vertices_.push_back(v);
    }
  }

  lat.edge_index_.assign(static_cast<size_t>(H), {});
  for (int j = 0; j < H; ++j) {
    auto [slo, shi] = slot_span(j);
    lat.edge_index_[static_cast<size_t>(j)].assign(static_cast<size_t>(shi) + 1, -1);
    (void)slo;
  }
  lat.incident_.assign(lat.vertices_.size(), {});
  for (size_t i = 0; i < raw.size(); ++i) {
    if (!resolved[i]) continue;
    auto [lu, cu, lv, cv] = *resolved[i];
    int u = lat.vertex_index_[static_cast<size_t>(lu)][static_cast<size_t>(cu)];
    int v = lat.vertex_index_[static_cast<size_t>(lv)][static_cast<size_t>(cv)];
    if (u < 0 || v < 0) continue;
    Edge e;
    e.track = raw[i].j;
    e.slot = raw[i].k;
    e.u = u;
    e.v = v;
    e.theta = raw[i].theta;
    e.orient = raw[i].o;
    int id = static_cast<int>(lat.edges_.size());
    lat.edge_index_[static_cast<size_t>(e.track)][static_cast<size_t>(e.slot)] = id;
    lat.edges_.push_back(e);
    lat.incident_[static_cast<size_t>(u)].push_back(id);
    lat.incident_[static_cast<size_t>(v)].push_back(id);
  }
  return lat;
}

IsoradialLattice dual_lattice(const IsoradialLattice& lat) {
  // same rhombi, other diagonal. The dual of a dual is the primal build.
  if (lat.parity_flip_) return build_lattice(lat.angles_, lat.width_, lat.topology_);
  IsoradialLattice d;
  d.topology_ = lat.topology_;
  d.angles_ = lat.angles_;
  d.width_ = lat.width_;
  d.lines_ = lat.lines_;
  d.corner_period_ = lat.corner_period_;
  d.parity_flip_ = !lat.parity_flip_;

  const int H = lat.tracks();
  const bool wrapped = (lat.topology_ != Topology::Box);
  const int K = 2 * lat.width_ - 2;
  const int period = 2 * lat.width_;

  std::vector<double> off(static_cast<size_t>(d.lines_) + 1, 0.0), hei(static_cast<size_t>(d.lines_) + 1, 0.0);
  for (int j = 0; j < H; ++j) {
    off[static_cast<size_t>(j + 1)] = off[static_cast<size_t>(j)] + std::cos(lat.angles_.angles[static_cast<size_t>(j)]);
    hei[static_cast<size_t>(j + 1)] = hei[static_cast<size_t>(j)] + std::sin(lat.angles_.angles[static_cast<size_t>(j)]);
  }
  auto corner_span = [&](int line) -> std::pair<int, int> {
    if (wrapped) return {0, period - 1};
    // dual corners live on the complementary parity; spans widen by one on
    // each side so every dual diagonal keeps both endpoints
    return (line % 2 == 0) ? std::make_pair(1, K + 1) : std::make_pair(0, K);
  };
  auto slot_span = [&](int) -> std::pair<int, int> {
    if (wrapped) return {0, period - 1};
    return {1, K};
  };
  auto corner_dual = [&](int line, int k) { return ((line + k) % 2 + 2) % 2 == 1; };

  d.vertex_index_.assign(static_cast<size_t>(d.lines_), {});
  for (int j = 0; j < d.lines_; ++j) {
    auto [lo, hi] = corner_span(j);
    (void)lo;
    d.vertex_index_[static_cast<size_t>(j)].assign(static_cast<size_t>(hi) + 1, -1);
  }

  struct RawEdge { int j, k, lu, cu, lv, cv; double theta; EdgeOrientation o; };
  std::vector<RawEdge> raw;
  for (int j = 0; j < H; ++j) {
    auto [slo, shi] = slot_span(j);
    for (int k = slo; k <= shi; ++k) {
      const double alpha = d.angles_.angles[static_cast<size_t>(j)];
      RawEdge e;
      e.j = j; e.k = k;
      // dual theta is pi - primal theta of the same rhombus
      if (corner_dual(j, k)) {
        e.lu = j; e.cu = k; e.lv = j + 1; e.cv = k + 1;
        e.theta = kPi - alpha;  // primal diagonal here is up-left with theta alpha
        e.o = EdgeOrientation::UpRight;
      } else {
        e.lu = j; e.cu = k + 1; e.lv = j + 1; e.cv = k;
        e.theta = alpha;  // primal was up-right with pi - alpha
        e.o = EdgeOrientation::UpLeft;
      }
      raw.push_back(e);
    }
  }

  auto resolve = [&](int line, int corner) -> std::optional<std::pair<int, int>> {
    if (lat.topology_ == Topology::Torus && line == H) {
      line = 0;
      corner += H % 2;
    }
    if (line < 0 || line >= d.lines_) return std::nullopt;
    if (wrapped) corner = ((corner % period) + period) % period;
    auto [lo, hi] = corner_span(line);
    if (corner < lo || corner > hi) return std::nullopt;
    return std::make_pair(line, corner);
  };

  std::vector<std::vector<char>> used(static_cast<size_t>(d.lines_));
  for (int j = 0; j < d.lines_; ++j)
    used[static_cast<size_t>(j)].assign(d.vertex_index_[static_cast<size_t>(j)].size(), 0);
  std::vector<std::optional<std::array<int, 4>>> resolved(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    auto a = resolve(raw[i].lu, raw[i].cu);
    auto b = resolve(raw[i].lv, raw[i].cv);
    if (!a || !b) continue;
    resolved[i] = std::array<int, 4>{a->first, a->second, b->first, b->second};
    used[static_cast<size_t>(a->first)][static_cast<size_t>(a->second)] = 1;
    used[static_cast<size_t>(b->first)][static_cast<size_t>(b->second)] = 1;
  }
  for (int j = 0; j < d.lines_; ++j) {
    auto& row = d.vertex_index_[static_cast<size_t>(j)];
    for (int k = 0; k < static_cast<int>(row.size()); ++k) {
      if (!used[static_cast<size_t>(j)][static_cast<size_t>(k)]) continue;
      if (!corner_dual(j, k)) continue;
      Vertex v;
      v.line = j;
      v.corner = k;
      v.x = off[static_cast<size_t>(j)] + k;
      v.y = hei[static_cast<size_t>(j)];
      row[static_cast<size_t>(k)] = static_cast<int>(d.vertices_.size());
      d.vertices_.push_back(v);
    }
  }

  d.edge_index_.assign(static_cast<size_t>(H), {});
  for (int j = 0; j < H; ++j) {
    auto [slo, shi] = slot_span(j);
    (void)slo;
    d.edge_index_[static_cast<size_t>(j)].assign(static_cast<size_t>(shi) + 1, -1);
  }
  d.incident_.assign(d.vertices_.size(), {});
  for (size_t i = 0; i < raw.size(); ++i) {
    if (!resolved[i]) continue;
    auto [lu, cu, lv, cv] = *resolved[i];
    int u = d.vertex_index_[static_cast<size_t>(lu)][static_cast<size_t>(cu)];
    int v = d.vertex_index_[static_cast<size_t>(lv)][static_cast<size_t>(cv)];
    if (u < 0 || v < 0) continue;
    Edge e;
    e.track = raw[i].j;
    e.slot = raw[i].k;
    e.u = u;
    e.v = v;
    e.theta = raw[i].theta;
    e.orient = raw[i].o;
    int id = static_cast<int>(d.edges_.size());
    d.edge_index_[static_cast<size_t>(e.track)][static_cast<size_t>(e.slot)] = id;
    d.edges_.push_back(e);
    d.incident_[static_cast<size_t>(u)].push_back(id);
    d.incident_[static_cast<size_t>(v)].push_back(id);
  }
  return d;
}

MedialGraph medial_graph(const IsoradialLattice& lat) {
  MedialGraph m;
  const int ne = lat.edge_count();
  m.vertices.resize(static_cast<size_t>(ne));
  m.neighbors.assign(static_cast<size_t>(ne), {-1, -1, -1, -1});
  for (int i = 0; i < ne; ++i) {
    const Edge& e = lat.edge(i);
    const Vertex& a = lat.vertex(e.u);
    const Vertex& b = lat.vertex(e.v);
    m.vertices[static_cast<size_t>(i)] = {e.track, e.slot, (a.x + b.x) / 2, (a.y + b.y) / 2};
    m.neighbors[static_cast<size_t>(i)] = {
        lat.edge_at(e.track, e.slot - 1),  // shares the left slanted side
        lat.edge_at(e.track, e.slot + 1),
        lat.edge_at(e.track - 1, e.slot),  // shares the bottom horizontal side
        lat.edge_at(e.track + 1, e.slot),
    };
  }
  return m;
}

Quad Quad::rectangle(double x0, double y0, double x1, double y1) {
  Quad q;
  q.boundary = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  q.corners = {0, 1, 2, 3};
  return q;
}

bool Quad::contains(double x, double y) const {
  // ray casting
  bool in = false;
  size_t n = boundary.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    double xi = boundary[i][0], yi = boundary[i][1];
    double xj = boundary[j][0], yj = boundary[j][1];
    bool cross = ((yi > y) != (yj > y)) && (x < (xj - xi) * (y - yi) / (yj - yi) + xi);
    if (cross) in = !in;
  }
  return in;
}

std::vector<std::array<double, 2>> Quad::arc(int i) const {
  std::vector<std::array<double, 2>> out;
  int n = static_cast<int>(boundary.size());
  int from = corners[static_cast<size_t>(i)];
  int to = corners[static_cast<size_t>((i + 1) % 4)];
  for (int k = from;; k = (k + 1) % n) {
    out.push_back(boundary[static_cast<size_t>(k)]);
    if (k == to) break;
  }
  return out;
}

void Quad::validate() const {
  if (boundary.size() < 4) throw std::invalid_argument("degenerate quad");
  for (int i = 0; i < 4; ++i)
    if (corners[static_cast<size_t>(i)] < 0 ||
        corners[static_cast<size_t>(i)] >= static_cast<int>(boundary.size()))
      throw std::invalid_argument("quad corner index out of range");
}

std::string IsoradialLattice::to_json() const {
  nlohmann::json j;
  j["angles"] = angles_.angles;
  j["width"] = width_;
  j["height"] = tracks();
  j["topology"] = topology_name(topology_);
  return j.dump();
}

}  // namespace rcx
