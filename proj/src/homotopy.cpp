#include "rcx/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace rcx {

PunctureGrid::PunctureGrid(double eta_) : eta(eta_) {
  if (!(eta > 0)) throw std::invalid_argument("eta must be positive");
  half = static_cast<int>(std::floor(1.0 / (eta * eta)));  // |i*eta| <= 1/eta
}

std::array<double, 2> PunctureGrid::point(int id) const {
  int n = points_per_side();
  int ix = id % n - half, iy = id / n - half;
  return {ix * eta, iy * eta};
}

int PunctureGrid::point_id(int ix, int iy) const {
  int n = points_per_side();
  return (iy + half) * n + (ix + half);
}

int PunctureGrid::segment_count() const { return 2 * point_count(); }

std::array<int, 2> PunctureGrid::segment(int id) const {
  int p = id / 2, dir = id % 2;
  int n = points_per_side();
  int ix = p % n - half, iy = p / n - half;
  int jx = ix + (dir == 0 ? 1 : 0), jy = iy + (dir == 0 ? 0 : 1);
  if (jx > half || jy > half) return {-1, -1};
  return {point_id(ix, iy), point_id(jx, jy)};
}

namespace {

// signed area to fix the loop orientation
double signed_area(const std::vector<std::array<double, 2>>& loop) {
  double a = 0;
  size_t n = loop.size();
  for (size_t i = 0; i < n; ++i) {
    const auto& p = loop[i];
    const auto& q = loop[(i + 1) % n];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return a / 2;
}

struct Crossing {
  double t;    // parameter along the loop edge
  int letter;  // signed segment id
};

}  // namespace

Word word_of_loop(const std::vector<std::array<double, 2>>& loop_in, const PunctureGrid& grid) {
  if (loop_in.size() < 3) return {};
  std::vector<std::array<double, 2>> loop = loop_in;
  if (signed_area(loop) < 0) std::reverse(loop.begin(), loop.end());

  const double tol = 1e-9;
  // reject loops that touch a puncture
  for (const auto& p : loop) {
    double gx = p[0] / grid.eta, gy = p[1] / grid.eta;
    double rx = std::abs(gx - std::round(gx)), ry = std::abs(gy - std::round(gy));
    if (rx * grid.eta < tol && ry * grid.eta < tol && std::abs(std::round(gx)) <= grid.half &&
        std::abs(std::round(gy)) <= grid.half)
      throw std::invalid_argument("loop touches a puncture; eta too coarse");
  }

  // base point: lowest-index vertex not on a grid segment
  size_t base = 0;
  auto on_segment = [&](const std::array<double, 2>& p) {
    double gx = p[0] / grid.eta, gy = p[1] / grid.eta;
    bool on_vline = std::abs(gx - std::round(gx)) * grid.eta < tol &&
                    std::abs(std::round(gx)) <= grid.half && std::abs(gy) <= grid.half + tol;
    bool on_hline = std::abs(gy - std::round(gy)) * grid.eta < tol &&
                    std::abs(std::round(gy)) <= grid.half && std::abs(gx) <= grid.half + tol;
    return on_vline || on_hline;
  };
  while (base < loop.size() && on_segment(loop[base])) ++base;
  if (base == loop.size())
    throw std::invalid_argument("all loop vertices lie on grid segments; perturb the loop");

  Word word;
  size_t n = loop.size();
  for (size_t s = 0; s < n; ++s) {
    const auto& p = loop[(base + s) % n];
    const auto& q = loop[(base + s + 1) % n];
    std::vector<Crossing> here;
    double dx = q[0] - p[0], dy = q[1] - p[1];
    // crossings with vertical grid segments (x = i*eta, between punctures)
    if (std::abs(dx) > tol) {
      int i0 = static_cast<int>(std::ceil(std::min(p[0], q[0]) / grid.eta - tol));
      int i1 = static_cast<int>(std::floor(std::max(p[0], q[0]) / grid.eta + tol));
      for (int i = std::max(i0, -grid.half); i <= std::min(i1, grid.half); ++i) {
        double x = i * grid.eta;
        double t = (x - p[0]) / dx;
        if (t < -tol || t >= 1 - tol) continue;  // half-open: vertex crossings count once
        double y = p[1] + t * dy;
        double gj = y / grid.eta;
        int j = static_cast<int>(std::floor(gj));
        if (std::abs(gj - std::round(gj)) * grid.eta < tol)
          throw std::invalid_argument("loop crosses a puncture; perturb the loop");
        if (j < -grid.half || j + 1 > grid.half) continue;  // off the segment range
        // vertical segment from (i,j) to (i,j+1); sign: tail on the left of
        // the crossing direction. Crossing rightwards (dx>0) has the lower
        // point (tail) on the right, so that letter is the reverse one.
        int seg = grid.point_id(i, j) * 2 + 1;
        int letter = (dx > 0) ? -(seg + 1) : (seg + 1);
        here.push_back({t, letter});
      }
    }
    // crossings with horizontal grid segments (y = j*eta)
    if (std::abs(dy) > tol) {
      int j0 = static_cast<int>(std::ceil(std::min(p[1], q[1]) / grid.eta - tol));
      int j1 = static_cast<int>(std::floor(std::max(p[1], q[1]) / grid.eta + tol));
      for (int j = std::max(j0, -grid.half); j <= std::min(j1, grid.half); ++j) {
        double y = j * grid.eta;
        double t = (y - p[1]) / dy;
        if (t < -tol || t >= 1 - tol) continue;  // half-open: vertex crossings count once
        double x = p[0] + t * dx;
        double gi = x / grid.eta;
        int i = static_cast<int>(std::floor(gi));
        if (std::abs(gi - std::round(gi)) * grid.eta < tol)
          throw std::invalid_argument("loop crosses a puncture; perturb the loop");
        if (i < -grid.half || i + 1 > grid.half) continue;
        // horizontal segment from (i,j) to (i+1,j); crossing upwards (dy>0)
        // has the tail (left point) on its left
        int seg = grid.point_id(i, j) * 2 + 0;
        int letter = (dy > 0) ? (seg + 1) : -(seg + 1);
        here.push_back({t, letter});
      }
    }
    std::sort(here.begin(), here.end(), [](const Crossing& a, const Crossing& b) { return a.t < b.t; });
    for (const Crossing& c : here) word.push_back(c.letter);
  }
  return word;
}

namespace {

// linear reduction with a stack, then cyclic (seam) cancellation
Word cyclic_reduce(Word w) {
  bool changed = true;
  while (changed) {
    changed = false;
    Word out;
    out.reserve(w.size());
    for (int x : w) {
      if (!out.empty() && out.back() == -x) {
        out.pop_back();
        changed = true;
      } else {
        out.push_back(x);
      }
    }
    // cancel across the seam
    size_t lo = 0, hi = out.size();
    while (hi - lo >= 2 && out[lo] == -out[hi - 1]) {
      ++lo;
      --hi;
      changed = true;
    }
    w.assign(out.begin() + static_cast<long>(lo), out.begin() + static_cast<long>(hi));
  }
  return w;
}

// lexicographically smallest rotation (Booth's algorithm)
Word canonical_rotation(const Word& w) {
  size_t n = w.size();
  if (n <= 1) return w;
  auto at = [&](size_t i) { return w[i % n]; };
  size_t k = 0;
  for (size_t i = 1; i < n; ++i) {
    size_t j = 0;
    while (j < n && at(k + j) == at(i + j)) ++j;
    if (j < n && at(i + j) < at(k + j)) k = i;
  }
  Word out(n);
  for (size_t i = 0; i < n; ++i) out[i] = at(k + i);
  return out;
}

}  // namespace

ReducedWord reduce(const Word& w) {
  ReducedWord r;
  r.letters = canonical_rotation(cyclic_reduce(w));
  return r;
}

ReducedWord homotopy_class(const std::vector<std::array<double, 2>>& loop,
                           const PunctureGrid& grid) {
  return reduce(word_of_loop(loop, grid));
}

int punctures_surrounded(const std::vector<std::array<double, 2>>& loop,
                         const PunctureGrid& grid) {
  int count = 0;
  size_t n = loop.size();
  for (int id = 0; id < grid.point_count(); ++id) {
    auto p = grid.point(id);
    bool in = false;
    for (size_t a = 0, b = n - 1; a < n; b = a++) {
      double xi = loop[a][0], yi = loop[a][1];
      double xj = loop[b][0], yj = loop[b][1];
      bool cross = ((yi > p[1]) != (yj > p[1])) &&
                   (p[0] < (xj - xi) * (p[1] - yi) / (yj - yi) + xi);
      if (cross) in = !in;
    }
    count += in;
  }
  return count;
}

bool dH_compare(const LoopFamily& f, const LoopFamily& fp, const PunctureGrid& grid) {
  const int all = grid.point_count();
  auto relevant_classes = [&](const std::vector<Loop>& loops) {
    std::vector<ReducedWord> cls;
    for (const Loop& l : loops) {
      if (l.boundary) continue;
      int s = punctures_surrounded(l.points, grid);
      if (s >= 2 && s < all) cls.push_back(homotopy_class(l.points, grid));
    }
    return cls;
  };
  auto covered = [&](const std::vector<ReducedWord>& a, const std::vector<ReducedWord>& b) {
    for (const ReducedWord& w : a)
      if (std::find(b.begin(), b.end(), w) == b.end()) return false;
    return true;
  };
  for (int fam = 0; fam < 2; ++fam) {
    auto ca = relevant_classes(fam == 0 ? f.f0 : f.f1);
    auto cb = relevant_classes(fam == 0 ? fp.f0 : fp.f1);
    if (!covered(ca, cb) || !covered(cb, ca)) return false;
  }
  return true;
}

namespace {

double dist2(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  double dx = a[0] - b[0], dy = a[1] - b[1];
  return dx * dx + dy * dy;
}

// discrete Frechet for fixed parameterisations (open chains)
double frechet_open(const std::vector<std::array<double, 2>>& a,
                    const std::vector<std::array<double, 2>>& b) {
  size_t n = a.size(), m = b.size();
  std::vector<double> prev(m), cur(m);
  for (size_t j = 0; j < m; ++j)
    prev[j] = std::max(j ? prev[j - 1] : 0.0, dist2(a[0], b[j]));
  for (size_t i = 1; i < n; ++i) {
    cur[0] = std::max(prev[0], dist2(a[i], b[0]));
    for (size_t j = 1; j < m; ++j) {
      double best = std::min({prev[j], prev[j - 1], cur[j - 1]});
      cur[j] = std::max(best, dist2(a[i], b[j]));
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

}  // namespace

double loop_distance(const std::vector<std::array<double, 2>>& g1,
                     const std::vector<std::array<double, 2>>& g2) {
  if (g1.empty() || g2.empty()) return std::numeric_limits<double>::infinity();
  // close the chains (repeat the start) and minimise over cyclic shifts of g2
  std::vector<std::array<double, 2>> a(g1.begin(), g1.end());
  a.push_back(g1.front());
  double best = std::numeric_limits<double>::infinity();
  const size_t m = g2.size();
  for (size_t s = 0; s < m; ++s) {
    std::vector<std::array<double, 2>> b;
    b.reserve(m + 1);
    for (size_t j = 0; j < m; ++j) b.push_back(g2[(s + j) % m]);
    b.push_back(g2[s]);
    best = std::min(best, frechet_open(a, b));
  }
  return std::sqrt(best);
}

bool dCN_compare(const LoopFamily& f, const LoopFamily& fp, double eps) {
  auto inside_window = [&](const Loop& l) {
    for (const auto& p : l.points)
      if (std::sqrt(p[0] * p[0] + p[1] * p[1]) > 1.0 / eps) return false;
    return true;
  };
  auto one_way = [&](const std::vector<Loop>& a, const std::vector<Loop>& b) {
    for (const Loop& la : a) {
      if (la.boundary || !inside_window(la)) continue;
      bool ok = false;
      for (const Loop& lb : b) {
        if (lb.boundary) continue;
        if (loop_distance(la.points, lb.points) <= eps) {
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
    return true;
  };
  return one_way(f.f0, fp.f0) && one_way(fp.f0, f.f0) && one_way(f.f1, fp.f1) &&
         one_way(fp.f1, f.f1);
}

double dSS_quad_compare(const Configuration& a, const Configuration& b,
                        const std::vector<Quad>& quads) {
  if (quads.empty()) return 0.0;
  int diff = 0;
  for (const Quad& q : quads) diff += crossing(a, q) != crossing(b, q);
  return static_cast<double>(diff) / static_cast<double>(quads.size());
}

std::string ReducedWord::to_json() const {
  nlohmann::json j = letters;
  return j.dump();
}

}  // namespace rcx
