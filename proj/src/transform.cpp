#include "rcx/transform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rcx {

namespace {
constexpr double kPi = 3.14159265358979323846;

double odds(double p) { return p / (1.0 - p); }

using Outcome = std::pair<std::array<uint8_t, 3>, double>;
using Outcomes = std::vector<Outcome>;

// Outcome tables for the coupled transformation, with aligned indexing:
// slot k of the output is "opposite" slot k of the input.
//
// reverse (star -> triangle): star states s[0..2]; output triangle states.
// <=1 open: all closed. ==2 open: the triangle edge opposite the closed
// star edge opens. ==3: random, governed by the triangle odds y.
Outcomes reverse_outcomes(const std::array<uint8_t, 3>& s, const std::array<double, 3>& tri_p,
                          double q) {
  int n = s[0] + s[1] + s[2];
  if (n <= 1) return {{{0, 0, 0}, 1.0}};
  if (n == 2) {
    std::array<uint8_t, 3> out{0, 0, 0};
    for (int k = 0; k < 3; ++k)
      if (!s[static_cast<size_t>(k)]) out[static_cast<size_t>(k)] = 1;
    return {{out, 1.0}};
  }
  double y0 = odds(tri_p[0]), y1 = odds(tri_p[1]), y2 = odds(tri_p[2]);
  Outcomes out = {{{1, 1, 1}, y0 * y1 * y2 / q},
                  {{0, 1, 1}, y1 * y2 / q},
                  {{1, 0, 1}, y0 * y2 / q},
                  {{1, 1, 0}, y0 * y1 / q}};
  double sum = 0;
  for (auto& o : out) sum += o.second;
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::runtime_error(
        "star-triangle reverse probabilities do not normalise (non-isoradial patch)");
  return out;
}

// forward (triangle -> star): >=2 open: all star edges open. ==1 open, say
// t[k]: all star edges open except the one opposite (slot k). ==0: random,
// governed by the star odds z.
Outcomes forward_outcomes(const std::array<uint8_t, 3>& t, const std::array<double, 3>& star_p,
                          double q) {
  int n = t[0] + t[1] + t[2];
  if (n >= 2) return {{{1, 1, 1}, 1.0}};
  if (n == 1) {
    std::array<uint8_t, 3> out{1, 1, 1};
    for (int k = 0; k < 3; ++k)
      if (t[static_cast<size_t>(k)]) out[static_cast<size_t>(k)] = 0;
    return {{out, 1.0}};
  }
  double z0 = odds(star_p[0]), z1 = odds(star_p[1]), z2 = odds(star_p[2]);
  // q^2/(z0 z1 z2) for "none", q/(zi zj) for "only k". The q^2 makes these
  // normalise on isoradial patches (prod z = q^2 + q sum z).
  Outcomes out = {{{0, 0, 0}, q * q / (z0 * z1 * z2)},
                  {{1, 0, 0}, q / (z1 * z2)},
                  {{0, 1, 0}, q / (z0 * z2)},
                  {{0, 0, 1}, q / (z0 * z1)}};
  double sum = 0;
  for (auto& o : out) sum += o.second;
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::runtime_error(
        "star-triangle forward probabilities do not normalise (non-isoradial patch)");
  return out;
}

std::array<uint8_t, 3> pick(const Outcomes& outs, Rng& rng) {
  if (outs.size() == 1) return outs[0].first;
  double u = rng.uniform();
  for (const Outcome& o : outs) {
    if (u < o.second) return o.first;
    u -= o.second;
  }
  return outs.back().first;
}

std::array<uint8_t, 3> reverse_draw(const std::array<uint8_t, 3>& s,
                                    const std::array<double, 3>& tri_p, double q, Rng& rng) {
  return pick(reverse_outcomes(s, tri_p, q), rng);
}

std::array<uint8_t, 3> forward_draw(const std::array<uint8_t, 3>& t,
                                    const std::array<double, 3>& star_p, double q, Rng& rng) {
  return pick(forward_outcomes(t, star_p, q), rng);
}

}  // namespace

StarTrianglePatch StarTrianglePatch::from_triangle_angles(double q,
                                                          const std::array<double, 3>& theta_tri) {
  double s = theta_tri[0] + theta_tri[1] + theta_tri[2];
  if (std::abs(s - 2 * kPi) > 1e-9)
    throw std::invalid_argument("triangle subtended angles must sum to 2*pi");
  StarTrianglePatch p;
  p.q = q;
  for (int k = 0; k < 3; ++k) {
    p.triangle_p[static_cast<size_t>(k)] = isoradial_weight(q, theta_tri[static_cast<size_t>(k)]);
    // star edge opposite triangle edge (k+1)%3: OA faces BC
    p.star_p[static_cast<size_t>(k)] =
        isoradial_weight(q, kPi - theta_tri[static_cast<size_t>((k + 1) % 3)]);
  }
  p.validate();
  return p;
}

std::array<double, 4> StarTrianglePatch::forward_zero_open_probs() const {
  double z0 = odds(star_p[0]), z1 = odds(star_p[1]), z2 = odds(star_p[2]);
  return {q * q / (z0 * z1 * z2), q / (z1 * z2), q / (z0 * z2), q / (z0 * z1)};
}

std::array<double, 4> StarTrianglePatch::reverse_all_open_probs() const {
  double y0 = odds(triangle_p[0]), y1 = odds(triangle_p[1]), y2 = odds(triangle_p[2]);
  return {y0 * y1 * y2 / q, y1 * y2 / q, y0 * y2 / q, y0 * y1 / q};
}

void StarTrianglePatch::validate(double tol) const {
  auto f = forward_zero_open_probs();
  auto r = reverse_all_open_probs();
  double sf = f[0] + f[1] + f[2] + f[3];
  double sr = r[0] + r[1] + r[2] + r[3];
  if (std::abs(sf - 1.0) > tol || std::abs(sr - 1.0) > tol)
    throw std::invalid_argument("patch weights fail the coupling normalisation");
}

std::array<uint8_t, 3> star_triangle_forward(const StarTrianglePatch& patch,
                                             const std::array<uint8_t, 3>& tri, Rng& rng) {
  // re-align: triangle slot k is opposite star slot (k+2)%3
  std::array<uint8_t, 3> t_aligned;  // t_aligned[s] = triangle edge opposite star s
  for (int s = 0; s < 3; ++s) t_aligned[static_cast<size_t>(s)] = tri[static_cast<size_t>((s + 1) % 3)];
  return forward_draw(t_aligned, patch.star_p, patch.q, rng);
}

std::array<uint8_t, 3> star_triangle_reverse(const StarTrianglePatch& patch,
                                             const std::array<uint8_t, 3>& star, Rng& rng) {
  std::array<double, 3> tri_aligned;  // tri_aligned[s] = p of triangle edge opposite star s
  for (int s = 0; s < 3; ++s)
    tri_aligned[static_cast<size_t>(s)] = patch.triangle_p[static_cast<size_t>((s + 1) % 3)];
  std::array<uint8_t, 3> out_aligned = reverse_draw(star, tri_aligned, patch.q, rng);
  std::array<uint8_t, 3> out;
  for (int s = 0; s < 3; ++s) out[static_cast<size_t>((s + 1) % 3)] = out_aligned[static_cast<size_t>(s)];
  return out;
}

bool sweep_is_clean(const IsoradialLattice& lat, int i) {
  // With the box cut used here the middle line protrudes by one primal step
  // at both ends exactly when its index is odd; those end vertices are the
  // pendant entry/exit points of the sweep.
  return lat.topology() == Topology::Box && i % 2 == 1;
}

namespace {

// One flip of the diamond sweep: which lattice edges it consumes/produces
// and the weights of the produced triple (diamond/long carry plus the two
// rewritten strip edges).
struct SweepFlip {
  bool is_reverse;  // star -> triangle (expects a diamond carry)
  int ea, eb;       // strip edge ids (lower track, upper track)
  std::array<double, 3> out_p;  // carry, ea', eb' weights on the swapped lattice
};

struct SweepPlan {
  double q = 1.0;
  double entry_open_prob = 0.0;  // pendant conditional of the incoming diamond
  std::vector<SweepFlip> flips;
};

// The diamond sweep over the two-track strip below/above middle line i.
// Exact when entry and exit columns are pendant-clean (odd i on the box
// cut); otherwise the first/last column keeps its states under the angle
// relabelling, the incoming diamond edge is seeded from the isolated-edge
// conditional, and the defect edge left at the far end is dropped.
SweepPlan make_sweep_plan(const IsoradialLattice& lat, const IsoradialLattice& swapped,
                          const ModelParams& params, int i, bool clean) {
  const double a = lat.angle(i - 1);
  const double b = lat.angle(i);
  const int K = 2 * lat.width() - 2;
  const double q = params.q;
  const bool left_entry = b > a;

  const double theta_d = std::abs(b - a);
  const double p_d = isoradial_weight(q, theta_d);
  const double p_long = isoradial_weight(q, kPi - theta_d);

  SweepPlan plan;
  plan.q = q;
  plan.entry_open_prob = p_d / (p_d + q * (1.0 - p_d));

  auto p_new = [&](int track, int slot) {
    return isoradial_weight(q, swapped.edge(swapped.edge_at(track, slot)).theta);
  };

  int c_first, c_last;
  if (clean) {
    c_first = left_entry ? 1 : K + 1;
    c_last = left_entry ? K : 2;
  } else {
    // even middle: mid vertices sit at even corners 2..K; the column beyond
    // the entry keeps its states
    c_first = left_entry ? 2 : K;
    c_last = left_entry ? K : 2;
  }
  const int dir = left_entry ? 1 : -1;
  for (int c = c_first;; c += dir) {
    const int cc = left_entry ? c : c - 1;
    SweepFlip f;
    f.is_reverse = ((c + i) % 2 == 0);  // star centre parity = middle line parity
    f.ea = lat.edge_at(i - 1, cc);
    f.eb = lat.edge_at(i, cc);
    const double pa = p_new(i - 1, cc);
    const double pb = p_new(i, cc);
    // slot order is opposition-aligned: for the star edge towards the lower
    // line the opposite triangle edge lies on the upper track, so the pair
    // (slot1, slot2) is (new upper edge, new lower edge)
    f.out_p = f.is_reverse ? std::array<double, 3>{p_long, pb, pa}
                           : std::array<double, 3>{p_d, pb, pa};
    plan.flips.push_back(f);
    if (c == c_last) break;
  }
  // parity sanity: flips alternate starting and ending with a reverse one
  for (size_t t = 0; t < plan.flips.size(); ++t)
    if (plan.flips[t].is_reverse != (t % 2 == 0))
      throw std::logic_error("sweep parity inconsistent with the cut");
  return plan;
}

Outcomes flip_outcomes(const SweepFlip& f, bool carry, bool sa, bool sb, double q) {
  const std::array<uint8_t, 3> in = {static_cast<uint8_t>(carry ? 1 : 0),
                                     static_cast<uint8_t>(sa ? 1 : 0),
                                     static_cast<uint8_t>(sb ? 1 : 0)};
  return f.is_reverse ? reverse_outcomes(in, f.out_p, q) : forward_outcomes(in, f.out_p, q);
}

void diamond_sweep(const IsoradialLattice& lat, const IsoradialLattice& swapped,
                   Configuration& cfg, const ModelParams& params, int i, Rng& rng, bool clean) {
  SweepPlan plan = make_sweep_plan(lat, swapped, params, i, clean);
  bool carry = rng.bernoulli(plan.entry_open_prob);
  for (const SweepFlip& f : plan.flips) {
    std::array<uint8_t, 3> out =
        pick(flip_outcomes(f, carry, cfg.is_open(f.ea), cfg.is_open(f.eb), plan.q), rng);
    carry = out[0] != 0;
    cfg.set(f.eb, out[1] != 0);
    cfg.set(f.ea, out[2] != 0);
  }
  // clean exit discards a pendant diamond; thick exit drops the defect edge
  (void)carry;
}

std::vector<int> canonical_partition(UnionFind& uf, const std::vector<int>& verts) {
  std::vector<int> roots, out;
  out.reserve(verts.size());
  for (int v : verts) {
    int r = uf.find(v);
    int lab = -1;
    for (size_t k = 0; k < roots.size(); ++k)
      if (roots[k] == r) {
        lab = static_cast<int>(k);
        break;
      }
    if (lab < 0) {
      lab = static_cast<int>(roots.size());
      roots.push_back(r);
    }
    out.push_back(lab);
  }
  return out;
}

// Exact conditional resampling of the two-track strip: the states outside
// the strip are kept, and the strip is redrawn from the swapped lattice's
// conditional law given (outside wiring, induced partition of the strip's
// boundary lines). Commutation of the track transfer matrices makes the
// partition law invariant under the swap, so the push-forward is exact.
void resample_strip(const IsoradialLattice& lat, const IsoradialLattice& swapped,
                    Configuration& cfg, const BoundaryConditions& bc, const ModelParams& params,
                    int i, Rng& rng, int max_edges) {
  const double q = params.q;
  std::vector<int> strip;
  for (int e = 0; e < lat.edge_count(); ++e)
    if (lat.edge(e).track == i - 1 || lat.edge(e).track == i) strip.push_back(e);
  const int n = static_cast<int>(strip.size());
  if (n > max_edges)
    throw std::invalid_argument("track-exchange strip too large for exact resampling");

  // boundary lines of the strip
  std::vector<int> brows = lat.line_vertices(i - 1);
  for (int v : lat.line_vertices(i + 1)) brows.push_back(v);
  std::sort(brows.begin(), brows.end());
  brows.erase(std::unique(brows.begin(), brows.end()), brows.end());

  // strip vertices: everything touched by a strip edge
  std::vector<int> strip_verts;
  {
    std::vector<uint8_t> mark(static_cast<size_t>(lat.vertex_count()), 0);
    for (int e : strip) {
      mark[static_cast<size_t>(lat.edge(e).u)] = 1;
      mark[static_cast<size_t>(lat.edge(e).v)] = 1;
    }
    for (int v = 0; v < lat.vertex_count(); ++v)
      if (mark[static_cast<size_t>(v)]) strip_verts.push_back(v);
  }

  std::vector<uint8_t> in_strip(static_cast<size_t>(lat.edge_count()), 0);
  for (int e : strip) in_strip[static_cast<size_t>(e)] = 1;

  // outside wiring (open edges off the strip plus boundary classes)
  UnionFind outside(lat.vertex_count());
  for (int e = 0; e < lat.edge_count(); ++e)
    if (!in_strip[static_cast<size_t>(e)] && cfg.is_open(e))
      outside.unite(lat.edge(e).u, lat.edge(e).v);
  if (!bc.cls.empty()) {
    std::vector<int> rep;
    for (int v = 0; v < lat.vertex_count(); ++v) {
      int c = bc.cls[static_cast<size_t>(v)];
      if (c < 0) continue;
      if (c >= static_cast<int>(rep.size())) rep.resize(static_cast<size_t>(c) + 1, -1);
      if (rep[static_cast<size_t>(c)] < 0)
        rep[static_cast<size_t>(c)] = v;
      else
        outside.unite(rep[static_cast<size_t>(c)], v);
    }
  }

  // target: partition of the boundary lines induced by strip-open paths
  std::vector<int> target;
  {
    UnionFind uf(lat.vertex_count());
    for (int e : strip)
      if (cfg.is_open(e)) uf.unite(lat.edge(e).u, lat.edge(e).v);
    target = canonical_partition(uf, brows);
  }

  std::vector<double> pnew(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t)
    pnew[static_cast<size_t>(t)] =
        isoradial_weight(q, swapped.edge(strip[static_cast<size_t>(t)]).theta);

  const uint64_t total = 1ull << n;
  std::vector<uint64_t> masks;
  std::vector<double> weights;
  double wsum = 0.0;
  for (uint64_t m = 0; m < total; ++m) {
    // induced partition check first (cheap reject)
    UnionFind ufs(lat.vertex_count());
    for (int t = 0; t < n; ++t)
      if ((m >> t) & 1ull) {
        const Edge& ed = lat.edge(strip[static_cast<size_t>(t)]);
        ufs.unite(ed.u, ed.v);
      }
    if (canonical_partition(ufs, brows) != target) continue;
    double w = 1.0;
    UnionFind uf = outside;
    for (int t = 0; t < n; ++t) {
      const Edge& ed = lat.edge(strip[static_cast<size_t>(t)]);
      if ((m >> t) & 1ull) {
        w *= pnew[static_cast<size_t>(t)];
        uf.unite(ed.u, ed.v);
      } else {
        w *= 1.0 - pnew[static_cast<size_t>(t)];
      }
    }
    // strip edges can also merge outside clusters, so count over everything
    int k = 0;
    for (int v = 0; v < lat.vertex_count(); ++v) k += (uf.find(v) == v);
    w *= std::pow(q, k);
    masks.push_back(m);
    weights.push_back(w);
    wsum += w;
  }
  if (masks.empty()) throw std::logic_error("resampler found no compatible strip state");
  double u = rng.uniform() * wsum;
  uint64_t chosen = masks.back();
  for (size_t idx = 0; idx < masks.size(); ++idx) {
    if (u < weights[idx]) {
      chosen = masks[idx];
      break;
    }
    u -= weights[idx];
  }
  for (int t = 0; t < n; ++t) cfg.set(strip[static_cast<size_t>(t)], ((chosen >> t) & 1ull) != 0);
}

}  // namespace

TrackExchangeResult track_exchange(const IsoradialLattice& lat, const Configuration& cfg,
                                   const BoundaryConditions& bc, const ModelParams& params, int i,
                                   Rng& rng, const TrackExchangeOptions& opt) {
  if (i < 1 || i > lat.tracks() - 1)
    throw std::invalid_argument("track index out of range for exchange");

  TrackExchangeResult res;
  TrackAngles angles = lat.track_angles();
  std::swap(angles.angles[static_cast<size_t>(i - 1)], angles.angles[static_cast<size_t>(i)]);
  res.lattice = build_lattice(angles, lat.width(), lat.topology());
  res.cfg = Configuration(res.lattice);
  res.cfg.open = cfg.open;  // identical edge indexing across the swap

  if (std::abs(lat.angle(i - 1) - lat.angle(i)) < 1e-15) {
    res.method = ExchangeMethod::NoOp;
    res.exact = true;
    return res;
  }

  res.cfg.lattice = &res.lattice;
  if (lat.topology() == Topology::Box && sweep_is_clean(lat, i)) {
    diamond_sweep(lat, res.lattice, res.cfg, params, i, rng, /*clean=*/true);
    res.method = ExchangeMethod::DiamondSweep;
    res.exact = true;
    return res;
  }
  // wrapped strips (and even-parity box cuts) go through the resampler
  int strip_edges = 0;
  for (int e = 0; e < lat.edge_count(); ++e)
    strip_edges += (lat.edge(e).track == i - 1 || lat.edge(e).track == i);
  if (lat.topology() != Topology::Box && strip_edges <= opt.resample_max_edges) {
    resample_strip(lat, res.lattice, res.cfg, bc, params, i, rng, opt.resample_max_edges);
    res.method = ExchangeMethod::ConditionalResample;
    res.exact = true;
    return res;
  }
  if (!opt.allow_approximate)
    throw std::invalid_argument(
        "no exact exchange available here (even-parity box cut or oversized wrapped strip); "
        "set allow_approximate to use the thick-end sweep");
  if (lat.topology() != Topology::Box)
    throw std::invalid_argument("wrapped strip too large; no sweep available on this topology");
  diamond_sweep(lat, res.lattice, res.cfg, params, i, rng, /*clean=*/false);
  res.method = ExchangeMethod::DiamondSweepThickEnds;
  res.exact = false;
  return res;
}

std::vector<std::pair<Configuration, double>> track_exchange_outcomes(
    const IsoradialLattice& lat, const Configuration& cfg, const ModelParams& params, int i) {
  if (!sweep_is_clean(lat, i))
    throw std::invalid_argument("outcome enumeration needs a clean box sweep");
  TrackAngles angles = lat.track_angles();
  std::swap(angles.angles[static_cast<size_t>(i - 1)], angles.angles[static_cast<size_t>(i)]);
  IsoradialLattice swapped = build_lattice(angles, lat.width(), lat.topology());
  SweepPlan plan = make_sweep_plan(lat, swapped, params, i, /*clean=*/true);

  std::vector<std::pair<Configuration, double>> result;
  struct Node {
    size_t step;
    bool carry;
    double prob;
    std::vector<uint8_t> open;
  };
  std::vector<Node> stack;
  stack.push_back({0, true, plan.entry_open_prob, cfg.open});
  stack.push_back({0, false, 1.0 - plan.entry_open_prob, cfg.open});
  while (!stack.empty()) {
    Node nd = std::move(stack.back());
    stack.pop_back();
    if (nd.step == plan.flips.size()) {
      Configuration out;
      out.lattice = nullptr;  // caller pairs with the swapped lattice
      out.open = std::move(nd.open);
      result.emplace_back(std::move(out), nd.prob);
      continue;
    }
    const SweepFlip& f = plan.flips[nd.step];
    Outcomes outs = flip_outcomes(f, nd.carry, nd.open[static_cast<size_t>(f.ea)] != 0,
                                  nd.open[static_cast<size_t>(f.eb)] != 0, plan.q);
    for (const Outcome& o : outs) {
      Node nx;
      nx.step = nd.step + 1;
      nx.carry = o.first[0] != 0;
      nx.prob = nd.prob * o.second;
      nx.open = nd.open;
      nx.open[static_cast<size_t>(f.eb)] = o.first[1];
      nx.open[static_cast<size_t>(f.ea)] = o.first[2];
      stack.push_back(std::move(nx));
    }
  }
  return result;
}

int coupling_schedule(int N, int t) { return N + (2 * N + 1) * (t / (2 * N)) - t; }

int coupling_total_steps(int N, double alpha) {
  return 2 * N * static_cast<int>(std::ceil(2.0 * N / std::sin(alpha)));
}

CouplingV1Result coupling_v1(const CouplingV1Options& opt) {
  if (!(opt.alpha > 0 && opt.alpha < kPi) || std::abs(opt.alpha - kPi / 2) < 1e-12)
    throw std::invalid_argument("alpha must be in (0,pi) and distinct from pi/2");
  const int N = opt.N;
  const int runs = static_cast<int>(std::ceil(2.0 * N / std::sin(opt.alpha)));
  const int H = 2 * N + runs;
  TrackAngles angles;
  angles.angles.resize(static_cast<size_t>(H));
  for (int t = 0; t < H; ++t)
    angles.angles[static_cast<size_t>(t)] = (t >= 2 * N) ? opt.alpha : kPi / 2;

  IsoradialLattice lat = build_lattice(angles, opt.width, opt.topology);
  BoundaryConditions bc = BoundaryConditions::free(lat);
  ModelParams params(opt.q);

  CouplingV1Result out;
  const int T = coupling_total_steps(N, opt.alpha);
  out.total_steps = T;

  McmcOptions mopt;
  mopt.sweeps = opt.mcmc_sweeps;
  mopt.burn_in = opt.mcmc_burn_in;
  Configuration cfg = sample_mcmc(lat, bc, params, mopt, opt.seed, /*chain*/ 0);

  Rng rng = Rng::stream(opt.seed, 0x7261636bull);
  auto record = [&](int t, int j) {
    CouplingV1Step s;
    s.t = t;
    s.j = j;
    s.lattice = lat;
    s.cfg = cfg;
    out.trajectory.push_back(std::move(s));
  };
  record(0, coupling_schedule(N, 0));

  for (int t = 0; t < T; ++t) {
    int j = coupling_schedule(N, t);
    int mid = j + N;
    bc = BoundaryConditions::free(lat);
    TrackExchangeOptions xopt;
    xopt.allow_approximate = true;
    TrackExchangeResult r = track_exchange(lat, cfg, bc, params, mid, rng, xopt);
    if (!r.exact) ++out.inexact_steps;
    lat = std::move(r.lattice);
    cfg = std::move(r.cfg);
    cfg.lattice = &lat;
    if ((t + 1) % opt.record_every == 0 || t + 1 == T) record(t + 1, j);
  }
  // recorded configurations point at their own recorded lattice
  for (auto& s : out.trajectory) s.cfg.lattice = &s.lattice;
  return out;
}

}  // namespace rcx
